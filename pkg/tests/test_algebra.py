"""Structure-constant containers, axiom validation, builtins, JSON I/O."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from poiscoh.algebra import (
    AlgebraSpec,
    AxiomError,
    BUILTINS,
    StructuralError,
    algebra_from_dict,
    algebra_to_dict,
    builtin,
    module_from_dict,
    module_to_dict,
    ratio,
    ratio_str,
    regular_module,
    standard_poisson,
    trivial_bracket,
    validate_algebra,
    validate_module,
)
from poiscoh.deformation import transport


# ---------------------------------------------------------------------------
# scalars


def test_ratio_accepts_exact_forms():
    assert ratio(3) == 3
    assert ratio("-7/2") == Fraction(-7, 2)
    assert ratio(Fraction(4, 2)) == 2
    assert ratio("0") == 0


def test_ratio_rejects_floats_and_bools():
    with pytest.raises(StructuralError):
        ratio(0.5)
    with pytest.raises(StructuralError):
        ratio(True)
    with pytest.raises(StructuralError):
        ratio("nonsense")


def test_ratio_str_canonical():
    assert ratio_str(Fraction(6, 4)) == "3/2"
    assert ratio_str(5) == "5"
    assert ratio_str(Fraction(-8, 2)) == "-4"


@given(st.integers(-10**6, 10**6), st.integers(1, 10**4))
def test_ratio_roundtrips_through_strings(num, den):
    value = Fraction(num, den)
    assert ratio(ratio_str(value)) == value


# ---------------------------------------------------------------------------
# builtins and validation


@pytest.mark.parametrize("name", sorted(BUILTINS))
def test_builtin_satisfies_all_axioms(name):
    alg = builtin(name)
    report = validate_algebra(alg)
    assert report.ok, report.summary()


@pytest.mark.parametrize("name", sorted(BUILTINS))
def test_regular_module_is_poisson_module(name):
    alg = builtin(name)
    mod = regular_module(alg)
    assert mod.flavor == "poisson"
    report = validate_module(alg, mod)
    assert report.ok, report.summary()


def test_builtin_cache_returns_same_object():
    assert builtin("ut2") is builtin("ut2")


def test_unknown_builtin_lists_names():
    with pytest.raises(StructuralError, match="ut2"):
        builtin("no-such-algebra")


def test_broken_associativity_is_caught():
    alg = builtin("ut2")
    mult = [list(map(list, row)) for row in alg.mult]
    mult[1][1][0] += 1  # e12*e12 should be 0
    bad = AlgebraSpec.build(alg.dim, mult, alg.unit, alg.bracket)
    report = validate_algebra(bad)
    assert not report.ok
    assert report.by_axiom("associativity")


def test_broken_jacobi_is_caught():
    alg = builtin("sl2std")
    bracket = [list(map(list, row)) for row in alg.bracket]
    bracket[1][2][1] += 1  # {e,f} = h + e breaks the cyclic identity
    bracket[2][1][1] -= 1  # keep antisymmetry so jacobi/leibniz get blamed
    bad = AlgebraSpec.build(alg.dim, alg.mult, alg.unit, bracket)
    report = validate_algebra(bad)
    assert not report.ok
    assert {"jacobi", "leibniz"} & {v.axiom for v in report.violations}


def test_leibniz_violation_reports_indices():
    alg = builtin("nil3")
    bracket = [list(map(list, row)) for row in alg.bracket]
    bracket[0][1][1] += 1
    bracket[1][0][1] -= 1
    bad = AlgebraSpec.build(alg.dim, alg.mult, alg.unit, bracket)
    report = validate_algebra(bad)
    assert not report.ok
    for violation in report.violations:
        assert len(violation.indices) == 3
        assert any(violation.residual)


def test_standard_poisson_from_commutator():
    alg = builtin("m2")
    again = standard_poisson(alg.mult, alg.unit, basis=alg.basis)
    assert again.bracket == alg.bracket


def test_standard_poisson_rejects_nonassociative_input():
    mult = [[[0, 0], [1, 0]], [[0, 0], [0, 1]]]  # garbage product
    with pytest.raises(AxiomError):
        standard_poisson(mult, (1, 0))


def test_trivial_bracket_builder():
    alg = builtin("trivial2")
    rebuilt = trivial_bracket(alg.mult, alg.unit)
    assert rebuilt.has_zero_bracket
    assert validate_algebra(rebuilt).ok


def test_flag_properties():
    assert builtin("kxk").is_commutative
    assert builtin("kxk").has_zero_bracket
    assert not builtin("m2").is_commutative
    assert not builtin("nil3").has_zero_bracket
    assert builtin("nil3").is_commutative


def test_product_and_bracket_are_bilinear():
    alg = builtin("m2")
    u = (1, Fraction(1, 2), 0, -3)
    v = (0, 2, Fraction(2, 3), 1)
    w = tuple(Fraction(3) * x for x in u)
    lhs = alg.product(w, v)
    rhs = tuple(3 * x for x in alg.product(u, v))
    assert lhs == rhs
    lhs = alg.bracket_of(w, v)
    rhs = tuple(3 * x for x in alg.bracket_of(u, v))
    assert lhs == rhs


# ---------------------------------------------------------------------------
# module validation flavors


def test_quasi_flavor_skips_full_leibniz():
    # the regular module of any builtin passes as quasi too
    alg = builtin("ut2")
    mod = regular_module(alg)
    quasi = type(mod)(dim=mod.dim, algebra_dim=mod.algebra_dim, left=mod.left,
                      right=mod.right, lie=mod.lie, flavor="quasi")
    report = validate_module(alg, quasi)
    assert report.ok
    assert "poisson-leibniz" not in report.checked


def test_module_with_broken_lie_action():
    alg = builtin("sl2std")
    mod = regular_module(alg)
    lie = [list(map(list, row)) for row in mod.lie]
    lie[1][2][0] += 1
    bad = type(mod)(dim=mod.dim, algebra_dim=mod.algebra_dim, left=mod.left,
                    right=mod.right, lie=tuple(
                        tuple(tuple(v) for v in row) for row in lie),
                    flavor="poisson")
    report = validate_module(alg, bad)
    assert not report.ok


# ---------------------------------------------------------------------------
# serialization


@pytest.mark.parametrize("name", sorted(BUILTINS))
def test_algebra_json_roundtrip(name):
    alg = builtin(name)
    again = algebra_from_dict(algebra_to_dict(alg))
    assert again == alg


def test_module_json_roundtrip():
    alg = builtin("nil3")
    mod = regular_module(alg)
    again = module_from_dict(module_to_dict(mod), alg.dim)
    assert again == mod


def test_algebra_dict_rejects_bad_entries():
    data = algebra_to_dict(builtin("trivial2"))
    data["mult"] = [[0, 0, 5, "1"]]  # index out of range
    with pytest.raises(StructuralError):
        algebra_from_dict(data)


def test_algebra_dict_rejects_malformed_shapes():
    good = algebra_to_dict(builtin("trivial2"))
    for key, bad in [("unit", 0), ("unit", "10"), ("mult", 5),
                     ("bracket", "x"), ("basis", ["1"]), ("basis", 7)]:
        data = dict(good, **{key: bad})
        with pytest.raises(StructuralError, match=key):
            algebra_from_dict(data)


def test_module_dict_rejects_malformed_shapes():
    alg = builtin("trivial2")
    good = module_to_dict(regular_module(alg))
    with pytest.raises(StructuralError, match="left"):
        module_from_dict(dict(good, left=3), alg.dim)
    with pytest.raises(StructuralError, match="integers"):
        module_from_dict(dict(good, lie=[["a", 0, 0, "1"]]), alg.dim)


def test_algebra_dict_values_are_strings():
    data = algebra_to_dict(builtin("m2"))
    for entry in data["mult"] + data["bracket"]:
        assert isinstance(entry[3], str)


# ---------------------------------------------------------------------------
# properties


@st.composite
def unimodular_matrices(draw, n):
    """Products of elementary integer matrices: always invertible."""
    mat = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for _ in range(draw(st.integers(1, 6))):
        i = draw(st.integers(0, n - 1))
        j = draw(st.integers(0, n - 1))
        if i == j:
            continue
        c = Fraction(draw(st.integers(-3, 3)))
        for k in range(n):
            mat[i][k] += c * mat[j][k]
    return mat


@settings(max_examples=25, deadline=None)
@given(st.data())
def test_change_of_basis_preserves_axioms(data):
    name = data.draw(st.sampled_from(["ut2", "trivial2", "nil3"]))
    alg = builtin(name)
    mat = data.draw(unimodular_matrices(alg.dim))
    moved = transport(alg, mat)
    assert validate_algebra(moved).ok
