"""Assembly of the bicomplex differentials and the side complexes.

The elementary blocks are cross-checked against independent dense
re-derivations (bar-complex and Chevalley-Eilenberg formulas evaluated
slot by slot, a Hom-module reformulation of the horizontal map, and a
direct three-term evaluation of the corner map), not just against each
other.
"""

import itertools
from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from poiscoh.algebra import (
    ModuleSpec,
    StructuralError,
    builtin,
    regular_module,
    validate_module,
)
from poiscoh.cochain import CochainSpace, tensor_rank, wedge_normalize, wedge_rank
from poiscoh.complexes import (
    SIGN_CONVENTION,
    _assemble_with_horizontal_sign,
    build_complex,
    ce_coboundary,
    delta_H,
    delta_V,
    delta_v,
    differential,
    hochschild_coboundary,
    lp_coboundary,
    lp_space_basis,
    multiderivation_constraints,
    sigma_embed,
    type_coboundary,
    type_space_basis,
)

COMMUTATIVE = ("trivial2", "kxk", "nil3", "sl2std")


def _unit(m, comp):
    return tuple(1 if k == comp else 0 for k in range(m))


# ---------------------------------------------------------------------------
# d o d = 0, and the sign rule that makes it so


# (builtin, theory, top degree); caps keep the dim-4 algebras affordable here,
# the acceptance suite runs the wider sweep.
COVERAGE = [
    (name, theory, 5)
    for name in ("trivial2", "kxk")
    for theory in ("poisson", "quasi", "omega", "hochschild", "ce")
] + [
    ("ut2", "poisson", 4), ("ut2", "quasi", 4), ("ut2", "omega", 3),
    ("ut2", "hochschild", 4), ("ut2", "ce", 3),
    ("nil3", "poisson", 4), ("nil3", "quasi", 4), ("nil3", "omega", 3),
    ("nil3", "hochschild", 4), ("nil3", "ce", 3),
    ("m2", "poisson", 3), ("m2", "quasi", 3), ("m2", "omega", 2),
    ("m2", "hochschild", 3), ("m2", "ce", 4),
    ("sl2std", "poisson", 3), ("sl2std", "quasi", 3), ("sl2std", "omega", 2),
]


@pytest.mark.parametrize("name,theory,top", COVERAGE)
def test_d_squared_is_zero(name, theory, top):
    alg = builtin(name)
    mod = regular_module(alg)
    mats = build_complex(alg, mod, theory, top, verify=False)
    for n in range(top):
        prod = mats[n + 1].scaled_integer_copy().matmul(mats[n].scaled_integer_copy())
        assert prod.is_zero, f"{name}/{theory} fails d o d = 0 at degree {n}"


def test_sign_convention_constant():
    assert SIGN_CONVENTION == "horizontal-(-1)^i"


def test_naive_all_plus_assembly_is_not_a_complex():
    """Dropping the (-1)^i horizontal twist must break d o d = 0 somewhere."""
    alg = builtin("ut2")
    mod = regular_module(alg)
    naive = [
        _assemble_with_horizontal_sign(alg, mod, "poisson", n, lambda i: 1)
        for n in range(5)
    ]
    broken = any(
        not naive[n + 1].matmul(naive[n]).is_zero for n in range(4)
    )
    assert broken


def test_differential_is_the_signed_assembly():
    alg = builtin("ut2")
    mod = regular_module(alg)
    for theory in ("poisson", "quasi", "omega"):
        for n in range(3):
            twisted = _assemble_with_horizontal_sign(
                alg, mod, theory, n, lambda i: -1 if i % 2 else 1)
            assert differential(alg, mod, theory, n).entries == twisted.entries


def test_build_complex_shapes_chain():
    alg = builtin("ut2")
    mod = regular_module(alg)
    mats = build_complex(alg, mod, "poisson", 4)
    assert len(mats) == 5
    for n in range(4):
        assert mats[n + 1].ncols == mats[n].nrows
        assert mats[n].ncols == CochainSpace.build("poisson", n, 3, 3).dim


def test_poisson_theories_reject_non_poisson_modules():
    alg = builtin("ut2")
    mod = regular_module(alg)
    quasi_mod = ModuleSpec(dim=mod.dim, algebra_dim=mod.algebra_dim,
                           left=mod.left, right=mod.right, lie=mod.lie,
                           flavor="quasi")
    for theory in ("poisson", "omega"):
        with pytest.raises(StructuralError):
            differential(alg, quasi_mod, theory, 1)
    # the purely bicomplex theories take it fine
    assert differential(alg, quasi_mod, "quasi", 1).nnz > 0


# ---------------------------------------------------------------------------
# Elementary blocks against independent dense re-derivations


def _bar_oracle(alg, mod, n):
    """Hochschild coboundary on Hom(A^n, M) by direct slotwise evaluation."""
    d, m = alg.dim, mod.dim
    src_words = list(itertools.product(range(d), repeat=n))
    tgt_words = list(itertools.product(range(d), repeat=n + 1))
    cols = {}
    for si, w in enumerate(src_words):
        for comp in range(m):
            col = [Fraction(0)] * (len(tgt_words) * m)
            for ti, y in enumerate(tgt_words):
                val = [Fraction(0)] * m
                if y[1:] == w:
                    for k, v in enumerate(mod.act_left(alg.basis_vector(y[0]), _unit(m, comp))):
                        val[k] += v
                for pos in range(1, n + 1):
                    sign = -1 if pos % 2 else 1
                    for r, c in alg.mult_pairs[y[pos - 1]][y[pos]]:
                        if y[:pos - 1] + (r,) + y[pos + 1:] == w:
                            val[comp] += sign * c
                if y[:-1] == w:
                    sign = -1 if (n + 1) % 2 else 1
                    for k, v in enumerate(mod.act_right(alg.basis_vector(y[-1]), _unit(m, comp))):
                        val[k] += sign * v
                for k, v in enumerate(val):
                    col[ti * m + k] += v
            cols[si * m + comp] = col
    return cols


def _ce_oracle(alg, mod, n):
    """Chevalley-Eilenberg coboundary on Hom(Lambda^n A, M), slot by slot."""
    d, m = alg.dim, mod.dim
    src = list(itertools.combinations(range(d), n))
    tgt = list(itertools.combinations(range(d), n + 1))
    cols = {}
    for si, w in enumerate(src):
        for comp in range(m):
            col = [Fraction(0)] * (len(tgt) * m)
            for ti, y in enumerate(tgt):
                val = [Fraction(0)] * m
                for k in range(n + 1):
                    rest = y[:k] + y[k + 1:]
                    sign = -1 if k % 2 else 1
                    if rest == w:
                        for p, v in enumerate(mod.act_lie(alg.basis_vector(y[k]), _unit(m, comp))):
                            val[p] += sign * v
                for k in range(n + 1):
                    for l in range(k + 1, n + 1):
                        sign = -1 if (k + l) % 2 else 1
                        rest = tuple(x for t, x in enumerate(y) if t not in (k, l))
                        for r, c in alg.bracket_pairs[y[k]][y[l]]:
                            wsgn, word = wedge_normalize((r,) + rest)
                            if wsgn and word == w:
                                val[comp] += sign * wsgn * c
                for k, v in enumerate(val):
                    col[ti * m + k] += v
            cols[si * m + comp] = col
    return cols


def _matrix_matches_oracle(mat, cols):
    for col, vec in cols.items():
        for row, v in enumerate(vec):
            assert mat[row, col] == v, (row, col)
    assert mat.nnz == sum(1 for vec in cols.values() for v in vec if v)


@pytest.mark.parametrize("name", ("ut2", "nil3", "m2"))
@pytest.mark.parametrize("n", (0, 1, 2))
def test_vertical_block_matches_bar_formula(name, n):
    alg = builtin(name)
    mod = regular_module(alg)
    _matrix_matches_oracle(delta_V(alg, mod, n, 0), _bar_oracle(alg, mod, n))


@pytest.mark.parametrize("name", ("ut2", "nil3", "m2"))
@pytest.mark.parametrize("n", (0, 1, 2))
def test_horizontal_block_matches_ce_formula(name, n):
    alg = builtin(name)
    mod = regular_module(alg)
    _matrix_matches_oracle(delta_H(alg, mod, 0, n), _ce_oracle(alg, mod, n))


def test_named_coboundaries_are_the_edge_blocks():
    alg = builtin("nil3")
    mod = regular_module(alg)
    for n in range(3):
        assert hochschild_coboundary(alg, mod, n).entries == delta_V(alg, mod, n, 0).entries
        assert ce_coboundary(alg, mod, n).entries == delta_H(alg, mod, 0, n).entries


def test_vertical_map_leaves_the_wedge_alone():
    """delta_V on an (i, j) block is the (i, 0) map with a wedge spectator."""
    alg = builtin("ut2")
    mod = regular_module(alg)
    d, m = alg.dim, mod.dim
    for i, j in ((0, 1), (1, 1), (2, 1), (1, 2)):
        plain = delta_V(alg, mod, i, 0)
        full = delta_V(alg, mod, i, j)
        C = comb(d, j)
        seen = 0
        for (r, c), v in full.entries.items():
            rcell, rcomp = divmod(r, m)
            rten, rwedge = divmod(rcell, C)
            ccell, ccomp = divmod(c, m)
            cten, cwedge = divmod(ccell, C)
            assert rwedge == cwedge
            assert plain[rten * m + rcomp, cten * m + ccomp] == v
            seen += 1
        assert seen == plain.nnz * C


# ---------------------------------------------------------------------------
# The horizontal map as Chevalley-Eilenberg cohomology of a Hom-module


def _hom_module(alg, mod, i):
    """Hom(A^i, M) with pointwise bimodule actions and the diagonal Lie
    action: bracket on values minus the sum of bracket substitutions."""
    d, m = alg.dim, mod.dim
    words = list(itertools.product(range(d), repeat=i))
    M = len(words) * m

    def embed(wi, mvec):
        out = [Fraction(0)] * M
        for k, v in enumerate(mvec):
            out[wi * m + k] = v
        return out

    left, right, lie = [], [], []
    for a in range(d):
        avec = alg.basis_vector(a)
        lrow, rrow, brow = [], [], []
        for wi, word in enumerate(words):
            for comp in range(m):
                lrow.append(tuple(embed(wi, mod.act_left(avec, _unit(m, comp)))))
                rrow.append(tuple(embed(wi, mod.act_right(avec, _unit(m, comp)))))
                img = embed(wi, mod.act_lie(avec, _unit(m, comp)))
                for yi, y in enumerate(words):
                    acc = 0
                    for t in range(i):
                        for z, c in alg.bracket_pairs[a][y[t]]:
                            if y[:t] + (z,) + y[t + 1:] == word:
                                acc -= c
                    if acc:
                        img[yi * m + comp] += acc
                brow.append(tuple(img))
        left.append(tuple(lrow))
        right.append(tuple(rrow))
        lie.append(tuple(brow))
    return ModuleSpec(dim=M, algebra_dim=d, left=tuple(left),
                      right=tuple(right), lie=tuple(lie), flavor="quasi")


@pytest.mark.parametrize("i,j", ((2, 0), (2, 1), (3, 0)))
def test_delta_H_is_ce_of_the_hom_module(i, j):
    """Transposing the tensor slots into the coefficients must reproduce the
    horizontal map exactly, including every substitution sign."""
    alg = builtin("ut2")
    mod = regular_module(alg)
    d, m = alg.dim, mod.dim
    hom = _hom_module(alg, mod, i)
    assert validate_module(alg, hom).ok
    orig = delta_H(alg, mod, i, j)
    via_ce = ce_coboundary(alg, hom, j)
    assert (orig.nrows, orig.ncols) == (via_ce.nrows, via_ce.ncols)

    M = d ** i * m

    def relabel(flat, width):
        cell, comp = divmod(flat, m)
        trank, wrank = divmod(cell, width)
        return wrank * M + trank * m + comp

    cj, cj1 = comb(d, j), comb(d, j + 1)
    assert orig.nnz == via_ce.nnz
    for (r, c), v in orig.entries.items():
        assert via_ce[relabel(r, cj1), relabel(c, cj)] == v


# ---------------------------------------------------------------------------
# The corner map, by direct three-term evaluation


def _corner_eval(alg, mod, j, fvec, a, b, omega):
    d, m = alg.dim, mod.dim

    def f_at(word):
        sgn, w = wedge_normalize(word)
        if sgn == 0:
            return (Fraction(0),) * m
        base = wedge_rank(w, d) * m
        return tuple(sgn * fvec[base + k] for k in range(m))

    t1 = mod.act_left(alg.basis_vector(a), f_at((b,) + omega))
    t3 = mod.act_right(alg.basis_vector(b), f_at((a,) + omega))
    t2 = [Fraction(0)] * m
    for r, c in alg.mult_pairs[a][b]:
        for k, v in enumerate(f_at((r,) + omega)):
            t2[k] += c * v
    return tuple(x - y + z for x, y, z in zip(t1, t2, t3))


@pytest.mark.parametrize("name,j", (("trivial2", 1), ("ut2", 1), ("ut2", 2), ("nil3", 2)))
@settings(max_examples=25, deadline=None)
@given(data=st.data())
def test_corner_map_matches_direct_evaluation(name, j, data):
    alg = builtin(name)
    mod = regular_module(alg)
    d, m = alg.dim, mod.dim
    width = comb(d, j) * m
    fvec = tuple(
        Fraction(data.draw(st.integers(-4, 4)), data.draw(st.integers(1, 3)))
        for _ in range(width)
    )
    out = delta_v(alg, mod, j).matvec(fvec)
    cm = comb(d, j - 1)
    for a in range(d):
        for b in range(d):
            for omega in itertools.combinations(range(d), j - 1):
                want = _corner_eval(alg, mod, j, fvec, a, b, omega)
                cell = (tensor_rank((a, b), d) * cm + wedge_rank(omega, d)) * m
                assert tuple(out[cell:cell + m]) == want


# ---------------------------------------------------------------------------
# Multiderivations and the Lichnerowicz-style complex


@pytest.mark.parametrize("name,dims", (
    ("trivial2", (2, 1, 0, 0)),
    ("kxk", (2, 0, 0, 0)),
    ("nil3", (3, 4, 2, 0, 0)),
    ("sl2std", (4, 9, 9, 3, 0, 0)),
))
def test_multiderivation_space_dims(name, dims):
    alg = builtin(name)
    got = tuple(len(lp_space_basis(alg, n)) for n in range(len(dims)))
    assert got == dims


def test_multiderivation_needs_commutativity():
    for name in ("ut2", "m2"):
        with pytest.raises(StructuralError):
            multiderivation_constraints(builtin(name), 1)
        with pytest.raises(StructuralError):
            lp_coboundary(builtin(name), 1)


@pytest.mark.parametrize("name", ("nil3", "sl2std"))
def test_lp_basis_elements_are_derivations_in_each_slot(name):
    """Every basis vector must satisfy the Leibniz rule in the first slot for
    every basis product and spectator wedge -- checked by evaluation, not by
    re-running the constraint matrix."""
    alg = builtin(name)
    d = alg.dim
    for n in (1, 2):
        for fvec in lp_space_basis(alg, n):
            def f_at(word):
                sgn, w = wedge_normalize(word)
                if sgn == 0:
                    return (Fraction(0),) * d
                base = wedge_rank(w, d) * d
                return tuple(sgn * fvec[base + k] for k in range(d))

            for omega in itertools.combinations(range(d), n - 1):
                for i in range(d):
                    for j in range(d):
                        prod = [Fraction(0)] * d
                        for r, c in alg.mult_pairs[i][j]:
                            for k, v in enumerate(f_at((r,) + omega)):
                                prod[k] += c * v
                        lhs = tuple(prod)
                        rhs = tuple(
                            x + y for x, y in zip(
                                alg.product(alg.basis_vector(i), f_at((j,) + omega)),
                                alg.product(alg.basis_vector(j), f_at((i,) + omega)),
                            ))
                        assert lhs == rhs


@pytest.mark.parametrize("name", ("nil3", "sl2std"))
def test_lp_coboundary_preserves_multiderivations(name):
    alg = builtin(name)
    for n in range(3):
        constraints_next = multiderivation_constraints(alg, n + 1)
        d_n = lp_coboundary(alg, n)
        d_next = lp_coboundary(alg, n + 1)
        for fvec in lp_space_basis(alg, n):
            img = d_n.matvec(fvec)
            assert not any(constraints_next.matvec(img))
            assert not any(d_next.matvec(img))


@pytest.mark.parametrize("name", COMMUTATIVE)
def test_sigma_embedding_is_a_chain_map(name):
    """Including multiderivations as leading wedge blocks must intertwine the
    Lichnerowicz coboundary with the full theory differential on the nose."""
    alg = builtin(name)
    mod = regular_module(alg)
    for n in range(3):
        d_full = differential(alg, mod, "poisson", n)
        d_lp = lp_coboundary(alg, n)
        for fvec in lp_space_basis(alg, n):
            lhs = d_full.matvec(sigma_embed(alg, n, fvec))
            rhs = sigma_embed(alg, n + 1, d_lp.matvec(fvec))
            assert tuple(lhs) == tuple(rhs)


def test_sigma_embed_rejects_wrong_width():
    alg = builtin("nil3")
    with pytest.raises(StructuralError):
        sigma_embed(alg, 2, (0, 1, 2))


# ---------------------------------------------------------------------------
# The distinguished edge subcomplexes


@pytest.mark.parametrize("name", ("ut2", "nil3"))
def test_type_I_is_closed_under_its_coboundary(name):
    alg = builtin(name)
    mod = regular_module(alg)
    assert len(type_space_basis(alg, mod, "I", 0)) == mod.dim
    for n in (1, 2):
        killer = delta_v(alg, mod, n + 1)
        d_n = type_coboundary(alg, mod, "I", n)
        for fvec in type_space_basis(alg, mod, "I", n):
            assert not any(delta_v(alg, mod, n).matvec(fvec))
            assert not any(killer.matvec(d_n.matvec(fvec)))


@pytest.mark.parametrize("name", ("ut2", "nil3"))
def test_type_II_is_closed_under_its_coboundary(name):
    alg = builtin(name)
    mod = regular_module(alg)
    for n in (1, 2):
        killer = delta_H(alg, mod, n + 1, 0)
        d_n = type_coboundary(alg, mod, "II", n)
        for fvec in type_space_basis(alg, mod, "II", n):
            assert not any(delta_H(alg, mod, n, 0).matvec(fvec))
            assert not any(killer.matvec(d_n.matvec(fvec)))


def test_type_coboundaries_are_the_edge_maps():
    alg = builtin("ut2")
    mod = regular_module(alg)
    assert type_coboundary(alg, mod, "I", 2).entries == ce_coboundary(alg, mod, 2).entries
    assert type_coboundary(alg, mod, "II", 2).entries == hochschild_coboundary(alg, mod, 2).entries


def test_unknown_subcomplex_type():
    alg = builtin("ut2")
    mod = regular_module(alg)
    with pytest.raises(StructuralError):
        type_space_basis(alg, mod, "III", 1)
    with pytest.raises(StructuralError):
        type_coboundary(alg, mod, "III", 1)
