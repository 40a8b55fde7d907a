"""Finite-dimensional Poisson algebras and their modules over exact rationals.

An algebra is presented by structure constants relative to a chosen basis:
a multiplication table, a bracket table, and the coordinates of the unit.
All coefficients are exact (`int` or `fractions.Fraction`); floating point
is never used anywhere in this package.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Callable, Sequence


class StructuralError(ValueError):
    """Malformed presentation: bad shapes, out-of-range indices, non-exact
    coefficients.  Distinct from axiom violations, which are *reported*."""


class AxiomError(ValueError):
    """Raised by constructors when the requested object cannot satisfy its
    defining axioms.  Carries the offending validation report."""

    def __init__(self, message: str, report: "ValidationReport"):
        super().__init__(message)
        self.report = report


def ratio(value) -> int | Fraction:
    """Coerce an exact scalar to canonical form (int when integral).

    Accepts int, Fraction and strings like ``"-3/4"``.  Floats are rejected:
    this package is exact-arithmetic only.
    """
    if isinstance(value, bool):
        raise StructuralError(f"not an exact scalar: {value!r}")
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return int(value) if value.denominator == 1 else value
    if isinstance(value, str):
        try:
            return ratio(Fraction(value))
        except (ValueError, ZeroDivisionError) as exc:
            raise StructuralError(f"cannot parse exact scalar {value!r}") from exc
    raise StructuralError(f"not an exact scalar: {value!r}")


def ratio_str(value) -> str:
    """Serialize an exact scalar as ``"p"`` or ``"p/q"`` (always reduced)."""
    return str(Fraction(value))


def _zero(n: int) -> tuple:
    return (0,) * n


def _freeze_vec(vec, n: int, what: str) -> tuple:
    vec = tuple(ratio(v) for v in vec)
    if len(vec) != n:
        raise StructuralError(f"{what}: expected length {n}, got {len(vec)}")
    return vec


def _freeze_table(table, d: int, m: int, what: str) -> tuple:
    """Freeze a d x d table of length-m coefficient vectors."""
    rows = tuple(table)
    if len(rows) != d:
        raise StructuralError(f"{what}: expected {d} rows")
    out = []
    for r, row in enumerate(rows):
        row = tuple(row)
        if len(row) != d:
            raise StructuralError(f"{what}: row {r} has {len(row)} entries, expected {d}")
        out.append(tuple(_freeze_vec(v, m, f"{what}[{r}]") for v in row))
    return tuple(out)


def _pairs(table) -> tuple:
    """Sparse view of a structure-constant table: pairs[i][j] = ((k, c), ...)."""
    return tuple(
        tuple(tuple((k, c) for k, c in enumerate(vec) if c) for vec in row)
        for row in table
    )


@dataclass(frozen=True)
class AlgebraSpec:
    """A Poisson algebra presentation.

    ``mult[i][j]`` and ``bracket[i][j]`` are coordinate vectors of
    ``basis_i * basis_j`` and ``{basis_i, basis_j}``.  The presentation is
    not validated on construction; use :func:`validate_algebra`.
    """

    dim: int
    basis: tuple[str, ...]
    unit: tuple
    mult: tuple
    bracket: tuple

    def __post_init__(self):
        if self.dim <= 0:
            raise StructuralError("algebra dimension must be positive")
        if len(self.basis) != self.dim or len(set(self.basis)) != self.dim:
            raise StructuralError("basis names must be distinct and match dim")

    @staticmethod
    def build(dim, mult, unit, bracket, basis=None) -> "AlgebraSpec":
        basis = tuple(basis) if basis is not None else tuple(f"b{i}" for i in range(dim))
        return AlgebraSpec(
            dim=dim,
            basis=basis,
            unit=_freeze_vec(unit, dim, "unit"),
            mult=_freeze_table(mult, dim, dim, "mult"),
            bracket=_freeze_table(bracket, dim, dim, "bracket"),
        )

    @cached_property
    def mult_pairs(self):
        return _pairs(self.mult)

    @cached_property
    def bracket_pairs(self):
        return _pairs(self.bracket)

    def product(self, u: Sequence, v: Sequence) -> tuple:
        """Bilinear extension of the multiplication table."""
        acc = [0] * self.dim
        for i, ui in enumerate(u):
            if not ui:
                continue
            for j, vj in enumerate(v):
                if not vj:
                    continue
                for k, c in self.mult_pairs[i][j]:
                    acc[k] += ui * vj * c
        return tuple(acc)

    def bracket_of(self, u: Sequence, v: Sequence) -> tuple:
        """Bilinear extension of the bracket table."""
        acc = [0] * self.dim
        for i, ui in enumerate(u):
            if not ui:
                continue
            for j, vj in enumerate(v):
                if not vj:
                    continue
                for k, c in self.bracket_pairs[i][j]:
                    acc[k] += ui * vj * c
        return tuple(acc)

    @cached_property
    def is_commutative(self) -> bool:
        return all(
            self.mult[i][j] == self.mult[j][i]
            for i in range(self.dim)
            for j in range(i + 1, self.dim)
        )

    @cached_property
    def has_zero_bracket(self) -> bool:
        zero = _zero(self.dim)
        return all(v == zero for row in self.bracket for v in row)

    def basis_vector(self, i: int) -> tuple:
        return tuple(1 if k == i else 0 for k in range(self.dim))


@dataclass(frozen=True)
class ModuleSpec:
    """A module over a Poisson algebra.

    ``left[a][p]`` / ``right[a][p]`` / ``lie[a][p]`` are the coordinates of
    ``basis_a . u_p``, ``u_p . basis_a`` and ``{basis_a, u_p}_*``.  ``flavor``
    is ``"poisson"`` or ``"quasi"``: both satisfy the bimodule + Lie-module
    compatibilities, the poisson flavor additionally satisfies the Leibniz
    rule in the algebra slot of the Lie action.
    """

    dim: int
    algebra_dim: int
    left: tuple
    right: tuple
    lie: tuple
    flavor: str = "poisson"

    def __post_init__(self):
        if self.dim <= 0 or self.algebra_dim <= 0:
            raise StructuralError("module and algebra dimensions must be positive")
        if self.flavor not in ("poisson", "quasi"):
            raise StructuralError(f"unknown module flavor {self.flavor!r}")

    @staticmethod
    def build(dim, algebra_dim, left, right, lie, flavor="poisson") -> "ModuleSpec":
        def freeze_action(act, what):
            act = tuple(act)
            if len(act) != algebra_dim:
                raise StructuralError(f"{what}: expected {algebra_dim} action rows")
            out = []
            for a, row in enumerate(act):
                row = tuple(row)
                if len(row) != dim:
                    raise StructuralError(f"{what}[{a}]: expected {dim} entries")
                out.append(tuple(_freeze_vec(v, dim, f"{what}[{a}]") for v in row))
            return tuple(out)

        return ModuleSpec(
            dim=dim,
            algebra_dim=algebra_dim,
            left=freeze_action(left, "left"),
            right=freeze_action(right, "right"),
            lie=freeze_action(lie, "lie"),
            flavor=flavor,
        )

    @cached_property
    def left_pairs(self):
        return _pairs(self.left)

    @cached_property
    def right_pairs(self):
        return _pairs(self.right)

    @cached_property
    def lie_pairs(self):
        return _pairs(self.lie)

    def _act(self, pairs, avec: Sequence, mvec: Sequence) -> tuple:
        acc = [0] * self.dim
        for a, ca in enumerate(avec):
            if not ca:
                continue
            for p, cp in enumerate(mvec):
                if not cp:
                    continue
                for q, c in pairs[a][p]:
                    acc[q] += ca * cp * c
        return tuple(acc)

    def act_left(self, avec, mvec) -> tuple:
        return self._act(self.left_pairs, avec, mvec)

    def act_right(self, avec, mvec) -> tuple:
        """Right action ``m . a`` (algebra vector second in the math, first here)."""
        return self._act(self.right_pairs, avec, mvec)

    def act_lie(self, avec, mvec) -> tuple:
        return self._act(self.lie_pairs, avec, mvec)


@dataclass(frozen=True)
class Violation:
    axiom: str
    indices: tuple
    residual: tuple


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    checked: tuple[str, ...]
    violations: tuple[Violation, ...]

    def by_axiom(self, axiom: str) -> list[Violation]:
        return [v for v in self.violations if v.axiom == axiom]

    def summary(self) -> str:
        if self.ok:
            return "ok (" + ", ".join(self.checked) + ")"
        counts: dict[str, int] = {}
        for v in self.violations:
            counts[v.axiom] = counts.get(v.axiom, 0) + 1
        return "violations: " + ", ".join(f"{a} x{n}" for a, n in sorted(counts.items()))


def _vsub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def _vadd(*vs):
    return tuple(sum(col) for col in zip(*vs))


def validate_algebra(alg: AlgebraSpec) -> ValidationReport:
    """Exhaustively check the Poisson algebra axioms on basis tuples.

    Checks: two-sided unit, associativity, bracket antisymmetry, Jacobi,
    and the Leibniz rule {ab,c} = a{b,c} + {a,c}b.
    """
    d = alg.dim
    violations: list[Violation] = []
    basis = [alg.basis_vector(i) for i in range(d)]
    zero = _zero(d)

    for i in range(d):
        left = alg.product(alg.unit, basis[i])
        if left != basis[i]:
            violations.append(Violation("unit", (i,), _vsub(left, basis[i])))
        right = alg.product(basis[i], alg.unit)
        if right != basis[i]:
            violations.append(Violation("unit", (i,), _vsub(right, basis[i])))

    for i in range(d):
        for j in range(d):
            skew = _vadd(alg.bracket[i][j], alg.bracket[j][i])
            if skew != zero:
                violations.append(Violation("antisymmetry", (i, j), skew))

    for i in range(d):
        for j in range(d):
            for k in range(d):
                assoc = _vsub(
                    alg.product(alg.mult[i][j], basis[k]),
                    alg.product(basis[i], alg.mult[j][k]),
                )
                if assoc != zero:
                    violations.append(Violation("associativity", (i, j, k), assoc))
                jac = _vadd(
                    alg.bracket_of(alg.bracket[i][j], basis[k]),
                    alg.bracket_of(alg.bracket[j][k], basis[i]),
                    alg.bracket_of(alg.bracket[k][i], basis[j]),
                )
                if jac != zero:
                    violations.append(Violation("jacobi", (i, j, k), jac))
                # {b_i b_j, b_k} - b_i {b_j, b_k} - {b_i, b_k} b_j
                lei = _vsub(
                    _vsub(
                        alg.bracket_of(alg.mult[i][j], basis[k]),
                        alg.product(basis[i], alg.bracket[j][k]),
                    ),
                    alg.product(alg.bracket[i][k], basis[j]),
                )
                if lei != zero:
                    violations.append(Violation("leibniz", (i, j, k), lei))

    checked = ("unit", "antisymmetry", "associativity", "jacobi", "leibniz")
    return ValidationReport(ok=not violations, checked=checked, violations=tuple(violations))


def validate_module(alg: AlgebraSpec, mod: ModuleSpec) -> ValidationReport:
    """Exhaustively check the module axioms for ``mod`` over ``alg``.

    Bimodule: unitality of both actions, both associativities, commuting
    left/right actions.  Lie module: {{a,b},m} = {a,{b,m}} - {b,{a,m}}.
    Quasi compatibility: {a,bm} = {a,b}m + b{a,m} and {a,mb} = m{a,b} + {a,m}b.
    Poisson flavor adds {ab,m} = a{b,m} + {a,m}b.
    """
    if mod.algebra_dim != alg.dim:
        raise StructuralError("module was presented over a different algebra dimension")
    d, m = alg.dim, mod.dim
    violations: list[Violation] = []
    avecs = [alg.basis_vector(i) for i in range(d)]
    mvecs = [tuple(1 if k == p else 0 for k in range(m)) for p in range(m)]
    zero = _zero(m)

    def check(axiom, indices, got, want):
        if got != want:
            violations.append(Violation(axiom, indices, _vsub(got, want)))

    for p in range(m):
        check("unit-left", (p,), mod.act_left(alg.unit, mvecs[p]), mvecs[p])
        check("unit-right", (p,), mod.act_right(alg.unit, mvecs[p]), mvecs[p])

    for i in range(d):
        for j in range(d):
            for p in range(m):
                check(
                    "assoc-left", (i, j, p),
                    mod.act_left(alg.mult[i][j], mvecs[p]),
                    mod.act_left(avecs[i], mod.left[j][p]),
                )
                check(
                    "assoc-right", (i, j, p),
                    mod.act_right(alg.mult[i][j], mvecs[p]),
                    mod.act_right(avecs[j], mod.right[i][p]),
                )
                check(
                    "bimodule-commute", (i, j, p),
                    mod.act_right(avecs[j], mod.left[i][p]),
                    mod.act_left(avecs[i], mod.right[j][p]),
                )
                check(
                    "lie-module", (i, j, p),
                    mod.act_lie(alg.bracket[i][j], mvecs[p]),
                    _vsub(mod.act_lie(avecs[i], mod.lie[j][p]),
                          mod.act_lie(avecs[j], mod.lie[i][p])),
                )
                check(
                    "quasi-left", (i, j, p),
                    mod.act_lie(avecs[i], mod.left[j][p]),
                    _vadd(mod.act_left(alg.bracket[i][j], mvecs[p]),
                          mod.act_left(avecs[j], mod.lie[i][p])),
                )
                check(
                    "quasi-right", (i, j, p),
                    mod.act_lie(avecs[i], mod.right[j][p]),
                    _vadd(mod.act_right(alg.bracket[i][j], mvecs[p]),
                          mod.act_right(avecs[j], mod.lie[i][p])),
                )
                if mod.flavor == "poisson":
                    check(
                        "poisson-leibniz", (i, j, p),
                        mod.act_lie(alg.mult[i][j], mvecs[p]),
                        _vadd(mod.act_left(avecs[i], mod.lie[j][p]),
                              mod.act_right(avecs[j], mod.lie[i][p])),
                    )

    checked = ("unit-left", "unit-right", "assoc-left", "assoc-right",
               "bimodule-commute", "lie-module", "quasi-left", "quasi-right")
    if mod.flavor == "poisson":
        checked = checked + ("poisson-leibniz",)
    return ValidationReport(ok=not violations, checked=checked, violations=tuple(violations))


def standard_poisson(mult, unit, basis=None) -> AlgebraSpec:
    """Associative algebra with the commutator bracket {a,b} = ab - ba.

    The multiplication must be associative and unital; violations raise
    :class:`AxiomError` (the Leibniz and Jacobi identities are then automatic,
    but the full validator is still run and asserted).
    """
    dim = len(mult)
    mult_t = _freeze_table(mult, dim, dim, "mult")
    bracket = [
        [_vsub(mult_t[i][j], mult_t[j][i]) for j in range(dim)]
        for i in range(dim)
    ]
    alg = AlgebraSpec.build(dim, mult_t, unit, bracket, basis)
    report = validate_algebra(alg)
    if not report.ok:
        raise AxiomError("commutator construction needs an associative unital algebra: "
                         + report.summary(), report)
    return alg


def trivial_bracket(mult, unit, basis=None) -> AlgebraSpec:
    """Associative algebra equipped with the zero bracket."""
    dim = len(mult)
    zero_table = [[_zero(dim) for _ in range(dim)] for _ in range(dim)]
    alg = AlgebraSpec.build(dim, mult, unit, zero_table, basis)
    report = validate_algebra(alg)
    if not report.ok:
        raise AxiomError("zero-bracket construction needs an associative unital algebra: "
                         + report.summary(), report)
    return alg


def regular_module(alg: AlgebraSpec) -> ModuleSpec:
    """The algebra as a module over itself: actions by multiplication, Lie
    action by the bracket.  Always poisson-flavored."""
    d = alg.dim
    left = [[alg.mult[a][p] for p in range(d)] for a in range(d)]
    right = [[alg.mult[p][a] for p in range(d)] for a in range(d)]
    lie = [[alg.bracket[a][p] for p in range(d)] for a in range(d)]
    return ModuleSpec.build(d, d, left, right, lie, flavor="poisson")


# ---------------------------------------------------------------------------
# Built-in algebras


def _matrix_units_mult(cells: list[tuple[int, int]]):
    """Multiplication table for a span of matrix units e_{rc}."""
    n = len(cells)
    index = {cell: i for i, cell in enumerate(cells)}
    table = [[[0] * n for _ in range(n)] for _ in range(n)]
    for i, (r1, c1) in enumerate(cells):
        for j, (r2, c2) in enumerate(cells):
            if c1 == r2 and (r1, c2) in index:
                table[i][j][index[(r1, c2)]] = 1
    return table


def _build_ut2() -> AlgebraSpec:
    cells = [(0, 0), (0, 1), (1, 1)]
    mult = _matrix_units_mult(cells)
    return standard_poisson(mult, unit=(1, 0, 1), basis=("e11", "e12", "e22"))


def _build_m2() -> AlgebraSpec:
    # basis (1, e, f, h) with e = E12, f = E21, h = E11 - E22
    half = Fraction(1, 2)
    one = (1, 0, 0, 0)
    e = (0, 1, 0, 0)
    f = (0, 0, 1, 0)
    h = (0, 0, 0, 1)
    zero = (0, 0, 0, 0)
    mult = [
        [one, e, f, h],
        [e, zero, (half, 0, 0, half), (0, -1, 0, 0)],
        [f, (half, 0, 0, -half), zero, (0, 0, 1, 0)],
        [h, (0, 1, 0, 0), (0, 0, -1, 0), one],
    ]
    return standard_poisson(mult, unit=one, basis=("1", "e", "f", "h"))


def _build_trivial2() -> AlgebraSpec:
    one = (1, 0)
    x = (0, 1)
    zero = (0, 0)
    mult = [[one, x], [x, zero]]
    return trivial_bracket(mult, unit=one, basis=("1", "x"))


def _build_sl2std() -> AlgebraSpec:
    # Commutative: products of e, f, h all vanish; bracket is the usual
    # rank-one simple Lie algebra structure with the unit central.
    one = (1, 0, 0, 0)
    e = (0, 1, 0, 0)
    f = (0, 0, 1, 0)
    h = (0, 0, 0, 1)
    zero = (0, 0, 0, 0)
    mult = [
        [one, e, f, h],
        [e, zero, zero, zero],
        [f, zero, zero, zero],
        [h, zero, zero, zero],
    ]
    bracket = [
        [zero, zero, zero, zero],
        [zero, zero, h, (0, -2, 0, 0)],
        [zero, tuple(-c for c in h), zero, (0, 0, 2, 0)],
        [zero, (0, 2, 0, 0), (0, 0, -2, 0), zero],
    ]
    alg = AlgebraSpec.build(4, mult, one, bracket, basis=("1", "e", "f", "h"))
    report = validate_algebra(alg)
    assert report.ok, report.summary()
    return alg


def _build_kxk() -> AlgebraSpec:
    one0 = (1, 0)
    one1 = (0, 1)
    zero = (0, 0)
    mult = [[one0, zero], [zero, one1]]
    return trivial_bracket(mult, unit=(1, 1), basis=("p", "q"))


def _build_nil3() -> AlgebraSpec:
    # K[x,y] / (x,y)^2 with {x,y} = x: commutative, nonzero bracket.
    one = (1, 0, 0)
    x = (0, 1, 0)
    y = (0, 0, 1)
    zero = (0, 0, 0)
    mult = [[one, x, y], [x, zero, zero], [y, zero, zero]]
    bracket = [[zero, zero, zero], [zero, zero, x], [zero, tuple(-c for c in x), zero]]
    alg = AlgebraSpec.build(3, mult, one, bracket, basis=("1", "x", "y"))
    report = validate_algebra(alg)
    assert report.ok, report.summary()
    return alg


BUILTINS: dict[str, tuple[str, Callable[[], AlgebraSpec]]] = {
    "ut2": ("upper-triangular 2x2 matrices with the commutator bracket", _build_ut2),
    "m2": ("full 2x2 matrix algebra, basis (1, e, f, h), commutator bracket", _build_m2),
    "trivial2": ("dual numbers K[x]/(x^2) with the zero bracket", _build_trivial2),
    "sl2std": ("K.1 + V with V.V = 0 and the standard rank-one simple bracket "
               "({h,e}=2e, {h,f}=-2f, {e,f}=h); commutative, nonzero bracket", _build_sl2std),
    "kxk": ("split commutative semisimple K x K with the zero bracket", _build_kxk),
    "nil3": ("K[x,y]/(x,y)^2 with {x,y} = x; commutative local, nonzero bracket", _build_nil3),
}

_builtin_cache: dict[str, AlgebraSpec] = {}


def builtin(name: str) -> AlgebraSpec:
    """Look up a built-in algebra by registry name."""
    if name not in BUILTINS:
        raise StructuralError(
            f"unknown builtin {name!r}; available: {', '.join(sorted(BUILTINS))}")
    if name not in _builtin_cache:
        _builtin_cache[name] = BUILTINS[name][1]()
    return _builtin_cache[name]


# ---------------------------------------------------------------------------
# JSON presentations


def _triples_to_table(triples, d: int, m: int, what: str):
    if not isinstance(triples, (list, tuple)):
        raise StructuralError(f"{what} must be a list of [i, j, k, value] entries")
    table = [[[0] * m for _ in range(d)] for _ in range(d)]
    for entry in triples:
        try:
            i, j, k, value = entry
        except (TypeError, ValueError) as exc:
            raise StructuralError(f"{what}: entries must be [i, j, k, value]") from exc
        if not (isinstance(i, int) and isinstance(j, int) and isinstance(k, int)):
            raise StructuralError(f"{what}: indices must be integers, got {entry!r}")
        if not (0 <= i < d and 0 <= j < d and 0 <= k < m):
            raise StructuralError(f"{what}: index out of range in {entry!r}")
        table[i][j][k] += ratio(value)
    return table


def _table_to_triples(table) -> list:
    out = []
    for i, row in enumerate(table):
        for j, vec in enumerate(row):
            for k, c in enumerate(vec):
                if c:
                    out.append([i, j, k, ratio_str(c)])
    return out


def algebra_to_dict(alg: AlgebraSpec) -> dict:
    return {
        "dim": alg.dim,
        "basis": list(alg.basis),
        "unit": [ratio_str(c) for c in alg.unit],
        "mult": _table_to_triples(alg.mult),
        "bracket": _table_to_triples(alg.bracket),
    }


def algebra_from_dict(data: dict) -> AlgebraSpec:
    if not isinstance(data, dict):
        raise StructuralError("algebra file must contain a JSON object")
    for key in ("dim", "unit", "mult", "bracket"):
        if key not in data:
            raise StructuralError(f"algebra object is missing {key!r}")
    d = data["dim"]
    if not isinstance(d, int) or d <= 0:
        raise StructuralError("dim must be a positive integer")
    unit = data["unit"]
    if not isinstance(unit, (list, tuple)):
        raise StructuralError(f"unit must be a list of {d} coefficients")
    basis = data.get("basis")
    if basis is not None and (not isinstance(basis, (list, tuple))
                              or len(basis) != d):
        raise StructuralError(f"basis must be a list of {d} names")
    return AlgebraSpec.build(
        d,
        _triples_to_table(data["mult"], d, d, "mult"),
        [ratio(v) for v in unit],
        _triples_to_table(data["bracket"], d, d, "bracket"),
        basis=basis,
    )


def module_to_dict(mod: ModuleSpec) -> dict:
    def action_triples(act):
        out = []
        for a, row in enumerate(act):
            for p, vec in enumerate(row):
                for q, c in enumerate(vec):
                    if c:
                        out.append([a, p, q, ratio_str(c)])
        return out

    return {
        "dim": mod.dim,
        "algebra_dim": mod.algebra_dim,
        "left": action_triples(mod.left),
        "right": action_triples(mod.right),
        "lie": action_triples(mod.lie),
        "flavor": mod.flavor,
    }


def module_from_dict(data: dict, algebra_dim: int) -> ModuleSpec:
    if not isinstance(data, dict):
        raise StructuralError("module file must contain a JSON object")
    for key in ("dim", "left", "right", "lie"):
        if key not in data:
            raise StructuralError(f"module object is missing {key!r}")
    m = data["dim"]
    if not isinstance(m, int) or m <= 0:
        raise StructuralError("module dim must be a positive integer")
    d = data.get("algebra_dim", algebra_dim)
    if d != algebra_dim:
        raise StructuralError("module algebra_dim does not match the algebra")

    def action(triples, what):
        if not isinstance(triples, (list, tuple)):
            raise StructuralError(f"{what} must be a list of [a, p, q, value] entries")
        act = [[[0] * m for _ in range(m)] for _ in range(d)]
        for entry in triples:
            try:
                a, p, q, value = entry
            except (TypeError, ValueError) as exc:
                raise StructuralError(f"{what}: entries must be [a, p, q, value]") from exc
            if not (isinstance(a, int) and isinstance(p, int) and isinstance(q, int)):
                raise StructuralError(f"{what}: indices must be integers, got {entry!r}")
            if not (0 <= a < d and 0 <= p < m and 0 <= q < m):
                raise StructuralError(f"{what}: index out of range in {entry!r}")
            act[a][p][q] += ratio(value)
        return act

    return ModuleSpec.build(
        m, d,
        action(data["left"], "left"),
        action(data["right"], "right"),
        action(data["lie"], "lie"),
        flavor=data.get("flavor", "poisson"),
    )


def load_algebra(path: str) -> AlgebraSpec:
    with open(path, "r", encoding="utf-8") as fh:
        return algebra_from_dict(json.load(fh))


def load_module(path: str, alg: AlgebraSpec) -> ModuleSpec:
    with open(path, "r", encoding="utf-8") as fh:
        return module_from_dict(json.load(fh), alg.dim)
