"""Formal deformations of Poisson algebras, truncated at a finite order.

A deformation is a pair of coefficient series (m_0 + m_1 t + ... ,
l_0 + l_1 t + ...) of bilinear tables over the base algebra, with m_0 and l_0
its multiplication and bracket.  Everything here works order by order with
exact coefficients: axiom residuals, cocycle tests for first-order terms,
higher obstructions, one-step lifts, and the square-zero extension algebras
attached to degree-2 cochains.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .algebra import (
    AlgebraSpec,
    AxiomError,
    ModuleSpec,
    StructuralError,
    _freeze_table,
    _pairs,
    builtin,
    ratio,
    regular_module,
    validate_algebra,
)
from .cochain import CochainSpace, assemble
from .complexes import differential
from .linalg import SparseMatrix, solve


def _zero_table(d: int, m: int | None = None) -> tuple:
    m = d if m is None else m
    return tuple(tuple((0,) * m for _ in range(d)) for _ in range(d))


def _apply_pairs(pairs, u, v, out_dim: int) -> tuple:
    acc = [0] * out_dim
    for i, ui in enumerate(u):
        if not ui:
            continue
        row = pairs[i]
        for j, vj in enumerate(v):
            if not vj:
                continue
            for k, c in row[j]:
                acc[k] += ui * vj * c
    return tuple(acc)


def _is_antisymmetric(table) -> bool:
    d = len(table)
    zero = (0,) * len(table[0][0])
    for i in range(d):
        if table[i][i] != zero:
            return False
        for j in range(i + 1, d):
            if tuple(-v for v in table[j][i]) != tuple(table[i][j]):
                return False
    return True


@dataclass(frozen=True)
class DeformationSeries:
    """Truncated deformation of a Poisson algebra.

    ``mult_terms[n]`` and ``bracket_terms[n]`` are the order-n coefficient
    tables; index 0 always repeats the base algebra's own tables.  Terms
    beyond the stored order read as zero.
    """

    algebra: AlgebraSpec
    mult_terms: tuple
    bracket_terms: tuple

    @staticmethod
    def build(alg: AlgebraSpec, mult_terms, bracket_terms) -> "DeformationSeries":
        d = alg.dim
        mt = tuple(_freeze_table(t, d, d, f"mult_terms[{k}]")
                   for k, t in enumerate(mult_terms))
        bt = tuple(_freeze_table(t, d, d, f"bracket_terms[{k}]")
                   for k, t in enumerate(bracket_terms))
        if not mt or mt[0] != alg.mult:
            raise StructuralError("mult_terms[0] must be the base multiplication")
        if not bt or bt[0] != alg.bracket:
            raise StructuralError("bracket_terms[0] must be the base bracket")
        width = max(len(mt), len(bt))
        mt = mt + tuple(_zero_table(d) for _ in range(width - len(mt)))
        bt = bt + tuple(_zero_table(d) for _ in range(width - len(bt)))
        for k, t in enumerate(bt):
            if not _is_antisymmetric(t):
                raise StructuralError(f"bracket_terms[{k}] is not antisymmetric")
        return DeformationSeries(alg, mt, bt)

    @property
    def order(self) -> int:
        return len(self.mult_terms) - 1

    def mult_pairs(self, n: int):
        return _pairs(self.mult_terms[n]) if n <= self.order else None

    def mult_term(self, n: int) -> tuple:
        return self.mult_terms[n] if n <= self.order else _zero_table(self.algebra.dim)

    def bracket_term(self, n: int) -> tuple:
        return self.bracket_terms[n] if n <= self.order else _zero_table(self.algebra.dim)

    def extended(self, m_table, l_table) -> "DeformationSeries":
        return DeformationSeries.build(
            self.algebra,
            self.mult_terms + (m_table,),
            self.bracket_terms + (l_table,),
        )

    def truncated(self, order: int) -> "DeformationSeries":
        if order < 0:
            raise StructuralError("order must be nonnegative")
        stop = min(order, self.order) + 1
        return DeformationSeries.build(
            self.algebra, self.mult_terms[:stop], self.bracket_terms[:stop])

    def to_dict(self) -> dict:
        def sparse(table):
            out = []
            for i, row in enumerate(table):
                for j, vec in enumerate(row):
                    for k, c in enumerate(vec):
                        if c:
                            out.append([i, j, k, str(Fraction(c))])
            return out

        return {
            "order": self.order,
            "mult_terms": [sparse(t) for t in self.mult_terms[1:]],
            "bracket_terms": [sparse(t) for t in self.bracket_terms[1:]],
        }


def deformation_from_dict(alg: AlgebraSpec, data: dict) -> DeformationSeries:
    """Series from a JSON object holding sparse ``[i, j, k, value]`` tables
    for orders >= 1 (order 0 always comes from the algebra itself)."""
    if not isinstance(data, dict):
        raise StructuralError("deformation file must contain a JSON object")
    d = alg.dim

    def tables(key):
        out = [getattr(alg, "mult" if key == "mult_terms" else "bracket")]
        for entry_list in data.get(key, []):
            table = [[[0] * d for _ in range(d)] for _ in range(d)]
            for entry in entry_list:
                try:
                    i, j, k, value = entry
                except (TypeError, ValueError) as exc:
                    raise StructuralError(
                        f"{key}: entries must be [i, j, k, value]") from exc
                if not (0 <= i < d and 0 <= j < d and 0 <= k < d):
                    raise StructuralError(f"{key}: index out of range in {entry!r}")
                table[i][j][k] += ratio(value)
            out.append(table)
        return out

    return DeformationSeries.build(alg, tables("mult_terms"), tables("bracket_terms"))


def series_to_file_dict(series: DeformationSeries) -> dict:
    """Self-contained JSON object: the base algebra plus the series terms."""
    from .algebra import algebra_to_dict

    payload = series.to_dict()
    payload["algebra"] = algebra_to_dict(series.algebra)
    return payload


def series_from_file_dict(data: dict) -> DeformationSeries:
    """Inverse of :func:`series_to_file_dict`; the algebra travels with the
    terms so a series file needs no companion algebra file."""
    from .algebra import algebra_from_dict

    if not isinstance(data, dict) or "algebra" not in data:
        raise StructuralError("series file must embed its algebra under 'algebra'")
    alg = algebra_from_dict(data["algebra"])
    return deformation_from_dict(alg, data)


# ---------------------------------------------------------------------------
# Order-by-order axiom verification


@dataclass(frozen=True)
class ResidualRecord:
    axiom: str
    order: int
    count: int
    samples: tuple  # ((indices, residual vector), ...) truncated


@dataclass(frozen=True)
class DeformationCheck:
    ok: bool
    unital: bool
    max_order: int
    failures: tuple[ResidualRecord, ...]

    def failing_axioms(self) -> set[str]:
        return {rec.axiom for rec in self.failures}

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "unital": self.unital,
            "max_order": self.max_order,
            "failures": [
                {
                    "axiom": rec.axiom,
                    "order": rec.order,
                    "count": rec.count,
                    "samples": [
                        {"indices": list(idx),
                         "residual": [str(Fraction(v)) for v in vec]}
                        for idx, vec in rec.samples
                    ],
                }
                for rec in self.failures
            ],
        }


def verify_deformation(series: DeformationSeries, max_order: int | None = None,
                       sample_limit: int = 3) -> DeformationCheck:
    """Expand the three Poisson-algebra axioms over the truncated series and
    collect every order where a residual survives.

    Checked per order n (summing over splittings p + q = n):
    associativity of the m-series, the Leibniz compatibility between both
    series, the Jacobi identity of the l-series, and antisymmetry of each
    l-term.  Whether every higher m-term kills the unit is reported
    separately and does not affect ``ok``.
    """
    alg = series.algebra
    d = alg.dim
    if max_order is None:
        max_order = series.order
    mp = [_pairs(series.mult_term(n)) for n in range(max_order + 1)]
    lp = [_pairs(series.bracket_term(n)) for n in range(max_order + 1)]
    basis = [alg.basis_vector(i) for i in range(d)]
    zero = (0,) * d

    def m_of(n, u, v):
        return _apply_pairs(mp[n], u, v, d)

    def l_of(n, u, v):
        return _apply_pairs(lp[n], u, v, d)

    failures: list[ResidualRecord] = []
    unital = True

    def record(axiom, order, violations):
        if violations:
            failures.append(ResidualRecord(
                axiom=axiom, order=order, count=len(violations),
                samples=tuple(violations[:sample_limit])))

    for n in range(max_order + 1):
        assoc, leib, jac, skew = [], [], [], []
        for a in range(d):
            for b in range(d):
                vec = tuple(x + y for x, y in zip(
                    series.bracket_term(n)[a][b], series.bracket_term(n)[b][a]))
                if n <= series.order and vec != zero and b >= a:
                    skew.append(((a, b), vec))
                for c in range(d):
                    r_assoc = [0] * d
                    r_leib = [0] * d
                    r_jac = [0] * d
                    for p in range(n + 1):
                        q = n - p
                        ab_q = series.mult_term(q)[a][b]
                        bc_q = series.mult_term(q)[b][c]
                        for k, v in enumerate(m_of(p, ab_q, basis[c])):
                            r_assoc[k] += v
                        for k, v in enumerate(m_of(p, basis[a], bc_q)):
                            r_assoc[k] -= v
                        for k, v in enumerate(l_of(p, ab_q, basis[c])):
                            r_leib[k] += v
                        lbc_q = series.bracket_term(q)[b][c]
                        lac_q = series.bracket_term(q)[a][c]
                        for k, v in enumerate(m_of(p, basis[a], lbc_q)):
                            r_leib[k] -= v
                        for k, v in enumerate(m_of(p, lac_q, basis[b])):
                            r_leib[k] -= v
                        for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
                            lxy_q = series.bracket_term(q)[x][y]
                            for k, v in enumerate(l_of(p, lxy_q, basis[z])):
                                r_jac[k] += v
                    if any(r_assoc):
                        assoc.append(((a, b, c), tuple(r_assoc)))
                    if any(r_leib):
                        leib.append(((a, b, c), tuple(r_leib)))
                    if any(r_jac):
                        jac.append(((a, b, c), tuple(r_jac)))
        record("associativity", n, assoc)
        record("leibniz", n, leib)
        record("jacobi", n, jac)
        record("antisymmetry", n, skew)
        if n >= 1 and n <= series.order:
            for a in range(d):
                if (m_of(n, alg.unit, basis[a]) != zero
                        or m_of(n, basis[a], alg.unit) != zero):
                    unital = False
                    break

    return DeformationCheck(ok=not failures, unital=unital,
                            max_order=max_order, failures=tuple(failures))


# ---------------------------------------------------------------------------
# First-order terms as degree-2 cochains


def encode_pair(alg: AlgebraSpec, m_table, l_table) -> tuple:
    """Flatten a (bilinear, antisymmetric-bilinear) pair into the degree-2
    cochain space of the algebra acting on itself."""
    d = alg.dim
    m_table = _freeze_table(m_table, d, d, "m_table")
    l_table = _freeze_table(l_table, d, d, "l_table")
    if not _is_antisymmetric(l_table):
        raise StructuralError("the wedge part must be antisymmetric")
    space = CochainSpace.build("poisson", 2, d, d)
    return assemble(space, {
        (0, 2): lambda tens, wedge: l_table[wedge[0]][wedge[1]],
        (2, 0): lambda tens, wedge: m_table[tens[0]][tens[1]],
    })


def decode_pair(alg: AlgebraSpec, coeffs) -> tuple:
    """Inverse of :func:`encode_pair`."""
    d = alg.dim
    space = CochainSpace.build("poisson", 2, d, d)
    if len(coeffs) != space.dim:
        raise StructuralError(f"expected {space.dim} coefficients")
    m_table = [[[0] * d for _ in range(d)] for _ in range(d)]
    l_table = [[[0] * d for _ in range(d)] for _ in range(d)]
    pos = space.block_offsets[0, 2]
    for tens, wedge in space.cells(0, 2):
        vec = list(coeffs[pos:pos + d])
        i, j = wedge
        l_table[i][j] = vec
        l_table[j][i] = [-v for v in vec]
        pos += d
    pos = space.block_offsets[2, 0]
    for tens, wedge in space.cells(2, 0):
        m_table[tens[0]][tens[1]] = list(coeffs[pos:pos + d])
        pos += d
    return tuple(tuple(tuple(v) for v in row) for row in m_table), \
        tuple(tuple(tuple(v) for v in row) for row in l_table)


def is_poisson_2cocycle(alg: AlgebraSpec, m_table, l_table) -> bool:
    """Whether a first-order direction is closed under the assembled
    degree-2 differential of the regular module."""
    mat = differential(alg, regular_module(alg), "poisson", 2)
    return not any(mat.matvec(encode_pair(alg, m_table, l_table)))


def first_order_deformations(alg: AlgebraSpec) -> list[tuple]:
    """Basis of all first-order directions: the degree-2 cocycles of the
    regular module, decoded back into (m1, l1) table pairs."""
    from .linalg import kernel_basis

    mat = differential(alg, regular_module(alg), "poisson", 2)
    return [decode_pair(alg, vec) for vec in kernel_basis(mat)]


# ---------------------------------------------------------------------------
# Obstructions and lifting


def obstruction_tables(series: DeformationSeries, order: int | None = None, *,
                       validate: bool = True) -> tuple:
    """Right-hand sides (F1, F2, F3) of the order-n extension problem.

    Built purely from terms 1..n-1: F1 collects the associativity cross
    terms, F2 the Leibniz ones, F3 the Jacobi ones.  A valid continuation
    (m_n, l_n) exists iff the assembled degree-2 differential maps some pair
    onto their encoding.
    """
    n = series.order + 1 if order is None else order
    if n < 1:
        raise StructuralError("obstructions start at order 1")
    if validate:
        check = verify_deformation(series.truncated(n - 1), max_order=n - 1)
        if not check.ok:
            raise StructuralError(
                f"the series is not a deformation through order {n - 1}; "
                "obstructions are undefined")
    alg = series.algebra
    d = alg.dim
    mp = {k: _pairs(series.mult_term(k)) for k in range(1, n)}
    lp = {k: _pairs(series.bracket_term(k)) for k in range(1, n)}
    basis = [alg.basis_vector(i) for i in range(d)]

    def table3():
        return [[[(0,) * d for _ in range(d)] for _ in range(d)] for _ in range(d)]

    f1, f2, f3 = table3(), table3(), table3()
    for a in range(d):
        for b in range(d):
            for c in range(d):
                acc1 = [0] * d
                acc2 = [0] * d
                acc3 = [0] * d
                for p in range(1, n):
                    q = n - p
                    if q < 1 or q >= n:
                        continue
                    ab_q = series.mult_term(q)[a][b]
                    bc_q = series.mult_term(q)[b][c]
                    for k, v in enumerate(_apply_pairs(mp[p], ab_q, basis[c], d)):
                        acc1[k] += v
                    for k, v in enumerate(_apply_pairs(mp[p], basis[a], bc_q, d)):
                        acc1[k] -= v
                    for k, v in enumerate(_apply_pairs(lp[p], ab_q, basis[c], d)):
                        acc2[k] += v
                    lbc_q = series.bracket_term(q)[b][c]
                    lac_q = series.bracket_term(q)[a][c]
                    for k, v in enumerate(_apply_pairs(mp[p], basis[a], lbc_q, d)):
                        acc2[k] -= v
                    for k, v in enumerate(_apply_pairs(mp[p], lac_q, basis[b], d)):
                        acc2[k] -= v
                    for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
                        lxy_q = series.bracket_term(q)[x][y]
                        for k, v in enumerate(_apply_pairs(lp[p], lxy_q, basis[z], d)):
                            acc3[k] += v
                f1[a][b][c] = tuple(acc1)
                f2[a][b][c] = tuple(acc2)
                f3[a][b][c] = tuple(acc3)
    return f1, f2, f3


def encode_obstruction(alg: AlgebraSpec, f1, f2, f3) -> tuple:
    """Flatten (F1, F2, F3) into the degree-3 cochain space: F3 on wedges,
    F2 on (tensor pair, single wedge) cells, F1 on tensor triples."""
    d = alg.dim
    space = CochainSpace.build("poisson", 3, d, d)
    zero = (0,) * d
    for a in range(d):
        for b in range(d):
            if f3[a][b][b] != zero or f3[a][a][b] != zero or f3[b][a][a] != zero:
                raise StructuralError("F3 must vanish on repeated arguments")
            for c in range(d):
                if tuple(f3[b][a][c]) != tuple(-v for v in f3[a][b][c]):
                    raise StructuralError("F3 must be alternating")
    return assemble(space, {
        (0, 3): lambda tens, wedge: f3[wedge[0]][wedge[1]][wedge[2]],
        (2, 1): lambda tens, wedge: f2[tens[0]][tens[1]][wedge[0]],
        (3, 0): lambda tens, wedge: f1[tens[0]][tens[1]][tens[2]],
    })


def obstruction_cochain(series: DeformationSeries, order: int | None = None, *,
                        validate: bool = True) -> tuple:
    f1, f2, f3 = obstruction_tables(series, order, validate=validate)
    return encode_obstruction(series.algebra, f1, f2, f3)


def lift_step(series: DeformationSeries, *, validate: bool = True):
    """Extend a valid partial deformation by one order, or return None when
    the linear problem d(m_n, l_n) = F has no solution."""
    alg = series.algebra
    target = obstruction_cochain(series, validate=validate)
    mat = differential(alg, regular_module(alg), "poisson", 2)
    sol = solve(mat, target)
    if sol is None:
        return None
    m_n, l_n = decode_pair(alg, sol)
    return series.extended(m_n, l_n)


def obstruction_is_closed(series: DeformationSeries, order: int | None = None) -> bool:
    """The degree-3 encoding of the obstruction must always be a cocycle for
    a valid partial; this evaluates that statement."""
    alg = series.algebra
    vec = obstruction_cochain(series, order)
    mat = differential(alg, regular_module(alg), "poisson", 3)
    return not any(mat.matvec(vec))


# ---------------------------------------------------------------------------
# Quantization in the bracket direction


def quantization_first_order(alg: AlgebraSpec) -> tuple:
    """The canonical semiclassical first-order pair (half the bracket as the
    product correction, no bracket correction) of a commutative algebra."""
    if not alg.is_commutative:
        raise StructuralError("semiclassical quantization starts from a "
                              "commutative algebra")
    d = alg.dim
    half = Fraction(1, 2)
    m1 = tuple(tuple(tuple(half * v for v in alg.bracket[i][j])
                     for j in range(d)) for i in range(d))
    return m1, _zero_table(d)


def quantization_obstruction_check(alg: AlgebraSpec, max_order: int = 3) -> dict:
    """Try to extend the canonical semiclassical series order by order.

    Returns a report with the order reached; a failure at order k exhibits an
    unsolvable linear problem, i.e. a nonzero obstruction class for this
    particular partial series.  (Other partials could in principle behave
    differently; this check follows the canonical one.)
    """
    m1, l1 = quantization_first_order(alg)
    assert is_poisson_2cocycle(alg, m1, l1), \
        "the semiclassical direction must be a cocycle"
    series = DeformationSeries.build(alg, (alg.mult, m1), (alg.bracket, l1))
    orders = []
    while series.order < max_order:
        n = series.order + 1
        lifted = lift_step(series, validate=False)
        if lifted is None:
            return {"ok": False, "order_reached": series.order,
                    "obstructed_at": n, "orders_solved": orders}
        orders.append(n)
        series = lifted
    check = verify_deformation(series)
    assert check.ok, "lifted series failed re-verification"
    return {"ok": True, "order_reached": series.order,
            "obstructed_at": None, "orders_solved": orders}


# ---------------------------------------------------------------------------
# Square-zero extensions


def _module_basis_names(mod: ModuleSpec) -> tuple:
    return tuple(f"u{p}" for p in range(mod.dim))


def extension_algebra(alg: AlgebraSpec, mod: ModuleSpec, f1, f0, *,
                      validate: bool = True) -> AlgebraSpec:
    """The square-zero extension of the algebra by a poisson module, twisted
    by a degree-2 cochain: f1 feeds tensor pairs, f0 feeds wedge pairs.

    Products:  (a, x)(a', x') = (aa', a.x' + x.a' + f1(a, a'))
    Brackets:  {(a, x), (a', x')} = ({a, a'}, {a, x'} - {a', x} + f0(a, a'))

    With ``validate`` the result must satisfy all Poisson axioms (which is
    exactly the degree-2 cocycle condition on (f1, f0), plus normalization of
    f1 against the unit); violations raise :class:`AxiomError`.
    """
    d, m = alg.dim, mod.dim
    f1 = _freeze_table(f1, d, m, "f1")
    f0 = _freeze_table(f0, d, m, "f0")
    if not _is_antisymmetric(f0):
        raise StructuralError("the wedge part f0 must be antisymmetric")
    n = d + m
    zero_m = (0,) * m
    zero_d = (0,) * d

    def pad(avec, mvec):
        return tuple(avec) + tuple(mvec)

    mult = [[None] * n for _ in range(n)]
    bracket = [[None] * n for _ in range(n)]
    for i in range(d):
        for j in range(d):
            mult[i][j] = pad(alg.mult[i][j], f1[i][j])
            bracket[i][j] = pad(alg.bracket[i][j], f0[i][j])
    for i in range(d):
        for p in range(m):
            mult[i][d + p] = pad(zero_d, mod.left[i][p])
            mult[d + p][i] = pad(zero_d, mod.right[i][p])
            bracket[i][d + p] = pad(zero_d, mod.lie[i][p])
            bracket[d + p][i] = pad(zero_d, tuple(-v for v in mod.lie[i][p]))
    for p in range(m):
        for q in range(m):
            mult[d + p][d + q] = (0,) * n
            bracket[d + p][d + q] = (0,) * n

    ext = AlgebraSpec.build(
        n, mult, pad(alg.unit, zero_m), bracket,
        basis=alg.basis + _module_basis_names(mod))
    if validate:
        report = validate_algebra(ext)
        if not report.ok:
            raise AxiomError(
                "extension by a non-cocycle (or non-normalized) pair: "
                + report.summary(), report)
    return ext


def coboundary_pair(alg: AlgebraSpec, mod: ModuleSpec, h_table) -> tuple:
    """The degree-2 coboundary of a linear map h : A -> M, returned as the
    (tensor, wedge) table pair it shifts extensions by.

    tensor part: a.h(b) - h(ab) + h(a).b
    wedge part:  {a, h(b)} - {b, h(a)} - h({a, b})
    """
    d, m = alg.dim, mod.dim
    h = tuple(tuple(ratio(v) for v in row) for row in h_table)
    if len(h) != d or any(len(row) != m for row in h):
        raise StructuralError(f"h must be a {d} x {m} table")

    def h_of(avec):
        acc = [0] * m
        for i, c in enumerate(avec):
            if c:
                for q, v in enumerate(h[i]):
                    acc[q] += c * v
        return tuple(acc)

    f1 = [[None] * d for _ in range(d)]
    f0 = [[None] * d for _ in range(d)]
    for i in range(d):
        ei = alg.basis_vector(i)
        for j in range(d):
            ej = alg.basis_vector(j)
            left = mod.act_left(ei, h[j])
            right = mod.act_right(ej, h[i])
            mid = h_of(alg.mult[i][j])
            f1[i][j] = tuple(a - b + c for a, b, c in zip(left, mid, right))
            lie_ij = mod.act_lie(ei, h[j])
            lie_ji = mod.act_lie(ej, h[i])
            br = h_of(alg.bracket[i][j])
            f0[i][j] = tuple(a - b - c for a, b, c in zip(lie_ij, lie_ji, br))
    return tuple(tuple(r) for r in f1), tuple(tuple(r) for r in f0)


def shift_basis_matrix(alg: AlgebraSpec, mod: ModuleSpec, h_table) -> tuple:
    """Change of basis of the extension space sending each algebra basis
    vector b_j to (b_j, h(b_j)) and fixing the module part; as columns."""
    d, m = alg.dim, mod.dim
    n = d + m
    cols = []
    for j in range(d):
        col = [0] * n
        col[j] = 1
        for q in range(m):
            col[d + q] = ratio(h_table[j][q])
        cols.append(col)
    for p in range(m):
        col = [0] * n
        col[d + p] = 1
        cols.append(col)
    return tuple(tuple(cols[c][r] for c in range(n)) for r in range(n))


def transport(spec: AlgebraSpec, matrix) -> AlgebraSpec:
    """The same algebra written in the basis whose coordinates are the
    columns of ``matrix`` (must be invertible)."""
    n = spec.dim
    p = SparseMatrix.from_dense(matrix)
    if p.nrows != n or p.ncols != n:
        raise StructuralError(f"change of basis must be {n} x {n}")
    cols = [tuple(matrix[r][c] for r in range(n)) for c in range(n)]

    def to_new(vec):
        sol = solve(p, vec)
        if sol is None:
            raise StructuralError("change of basis is not invertible")
        return sol

    def combine(table, u, v):
        acc = [0] * n
        for i, ci in enumerate(u):
            if not ci:
                continue
            for j, cj in enumerate(v):
                if not cj:
                    continue
                for k, w in enumerate(table[i][j]):
                    if w:
                        acc[k] += ci * cj * w
        return tuple(acc)

    mult = [[to_new(combine(spec.mult, cols[i], cols[j])) for j in range(n)]
            for i in range(n)]
    bracket = [[to_new(combine(spec.bracket, cols[i], cols[j])) for j in range(n)]
               for i in range(n)]
    return AlgebraSpec.build(n, mult, to_new(spec.unit), bracket, basis=spec.basis)


def classical_limit(series: DeformationSeries) -> AlgebraSpec:
    """The Poisson algebra seen at first order by a deformation of a
    commutative base: same multiplication, bracket the antisymmetrized
    first-order product term.  Validated before being returned."""
    alg = series.algebra
    if not alg.is_commutative:
        raise StructuralError("classical limits are taken over commutative bases")
    d = alg.dim
    m1 = series.mult_term(1)
    bracket = [[tuple(m1[i][j][k] - m1[j][i][k] for k in range(d))
                for j in range(d)] for i in range(d)]
    out = AlgebraSpec.build(d, alg.mult, alg.unit, bracket, basis=alg.basis)
    report = validate_algebra(out)
    if not report.ok:
        raise AxiomError("first-order term does not induce a Poisson bracket: "
                         + report.summary(), report)
    return out


# ---------------------------------------------------------------------------
# The 2x2 matrix algebra families


def m2_product_family(nu, lam, mu) -> tuple:
    """Three-parameter bilinear pairing on the 2x2 matrix algebra in its
    (1, e, f, h) basis: the unit row and column scaled by nu, and on the
    traceless part (mu/6) tr(xy) . 1 + (lam/4) {x, y}.

    The honest matrix product is (nu, lam, mu) = (1, 2, 3); the pairing is
    associative precisely when nu = 1 (or a rescaling) and 4 mu = 3 lam**2.
    """
    nu, lam, mu = ratio(nu), ratio(lam), ratio(mu)
    alg = builtin("m2")
    d = 4
    quarter = Fraction(1, 4)
    trace = [[0] * 3 for _ in range(3)]  # over (e, f, h)
    trace[0][1] = trace[1][0] = 1
    trace[2][2] = 2
    table = [[(0,) * d for _ in range(d)] for _ in range(d)]
    for k in range(d):
        table[0][k] = tuple(nu * v for v in alg.basis_vector(k))
        table[k][0] = tuple(nu * v for v in alg.basis_vector(k))
    for x in range(1, d):
        for y in range(1, d):
            vec = [0] * d
            vec[0] += Fraction(mu, 6) * trace[x - 1][y - 1]
            for k, c in alg.bracket_pairs[x][y]:
                vec[k] += quarter * lam * c
            table[x][y] = tuple(vec)
    return tuple(tuple(row) for row in table)


def m2_family_is_associative(nu, lam, mu) -> bool:
    table = m2_product_family(nu, lam, mu)
    pairs = _pairs(_freeze_table(table, 4, 4, "family"))
    basis = [tuple(1 if k == i else 0 for k in range(4)) for i in range(4)]
    for a in range(4):
        for b in range(4):
            ab = table[a][b]
            for c in range(4):
                bc = table[b][c]
                if _apply_pairs(pairs, ab, basis[c], 4) != \
                        _apply_pairs(pairs, basis[a], bc, 4):
                    return False
    return True


def phi_family(alg: AlgebraSpec, nu, lam) -> tuple:
    """The two-parameter slice of :func:`m2_product_family` with the trace
    coefficient locked to three times the bracket one (mu = 3*lam).

    Only the nu = 0 members are cocycles: on the full three-parameter
    family the Hochschild cocycle condition reads mu = 3*lam - 3*nu, so
    the lock used here leaves the kernel as soon as nu != 0 (check with
    :func:`is_poisson_2cocycle`).  The nu = 0 slice consists of the
    equivariant first-order deformation directions of the algebra.
    """
    if alg != builtin("m2"):
        raise StructuralError("phi_family is defined over the m2 builtin")
    return m2_product_family(nu, lam, 3 * ratio(lam))


def m2_table3_series(s, repaired: bool = False) -> DeformationSeries:
    """A one-parameter quadratic deformation family of the 2x2 matrix
    algebra with the bracket series held constant.

    ``repaired=False`` builds the family exactly as tabulated; running
    :func:`verify_deformation` on it shows the order-1 associativity residual
    is nonzero for every s (and the order-2 one for s != 0), so it is not a
    deformation.  ``repaired=True`` builds the nearby family obtained by
    pulling the product back along the basis flow e -> e, f -> (1+ts)^2 f,
    h -> (1+ts) h; it is associative at every order, Lie-equivariant in each
    term (so the Leibniz and Jacobi residuals vanish with the constant
    bracket series), and its first-order term is the equivariant direction
    ``phi_family(m2, 0, 2s)``.
    """
    s = ratio(s)
    alg = builtin("m2")
    d = 4
    zero = _zero_table(d)
    m1 = [[(0,) * d for _ in range(d)] for _ in range(d)]
    m2_ = [[(0,) * d for _ in range(d)] for _ in range(d)]
    E, F, H = 1, 2, 3
    half = Fraction(1, 2)
    if repaired:
        m1[E][F] = (s, 0, 0, half * s)
        m1[F][E] = (s, 0, 0, -half * s)
        m1[E][H] = (0, -s, 0, 0)
        m1[H][E] = (0, s, 0, 0)
        m1[F][H] = (0, 0, s, 0)
        m1[H][F] = (0, 0, -s, 0)
        m1[H][H] = (2 * s, 0, 0, 0)
    else:
        m1[E][F] = (-s, 0, 0, -half)
        m1[F][E] = (-s, 0, 0, half)
        m1[E][H] = (0, -s, 0, 0)
        m1[H][E] = (0, -s, 0, 0)
        m1[F][H] = (0, 0, s, 0)
        m1[H][F] = (0, 0, -s, 0)
        m1[H][H] = (-2 * s, 0, 0, 0)
    sq = s * s
    m2_[E][F] = (half * sq, 0, 0, 0)
    m2_[F][E] = (half * sq, 0, 0, 0)
    m2_[H][H] = (sq, 0, 0, 0)
    return DeformationSeries.build(alg, (alg.mult, m1, m2_),
                                   (alg.bracket, zero, zero))
