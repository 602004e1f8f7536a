"""
Tests for the brute-force bar complex and its agreement with the Anick complex.
"""

import pytest

from anick.bar_oracle import bar_coboundary_matrix, bar_cohomology, finite_basis, regular_bimodule
from anick.errors import InfiniteDimensional, ResourceLimit
from anick.hochschild import cohomology_dims, is_zero, rational_matrix, trivial_bimodule

CORPUS = [("dual", "dual_reg"), ("trunc3", "trunc3_reg"), ("upper2", "upper2_reg")]


def test_finite_bases(dual, trunc3, upper2):
    assert finite_basis(dual).basis == (("x",),)
    assert finite_basis(trunc3).basis == (("x",), ("x", "x"))
    assert finite_basis(upper2).dim == 3


def test_infinite_algebra_is_refused(w1):
    with pytest.raises(InfiniteDimensional):
        finite_basis(w1, max_length=6)


def test_structure_constants(trunc3):
    alg = finite_basis(trunc3)
    # x * x = xx, x * xx = 0
    assert alg.product(0, 0) == {1: 1}
    assert alg.product(0, 1) == {}


def test_regular_bimodule_matches_fixture(dual, upper2, fixture_bimodule):
    reg = regular_bimodule(finite_basis(dual))
    assert reg.dim == 2
    assert reg.left["x"] == rational_matrix([[0, 0], [1, 0]])
    generated = regular_bimodule(finite_basis(upper2))
    stored = fixture_bimodule("upper2_reg", upper2)
    for g in upper2.generator_names:
        assert generated.left[g] == stored.left[g]
        assert generated.right[g] == stored.right[g]


@pytest.mark.parametrize("name,regular", CORPUS)
def test_oracle_agrees_with_anick(request, fixture_bimodule, name, regular):
    """Anick and bar cohomology agree in degrees 0..4 for trivial and regular coefficients."""
    pres = request.getfixturevalue(name)
    alg = finite_basis(pres)
    for M in (trivial_bimodule(pres, 1), fixture_bimodule(regular, pres)):
        assert bar_cohomology(alg, M, 4) == cohomology_dims(pres, M, 4).dims


def test_bar_coboundary_squares_to_zero(trunc3, fixture_bimodule):
    alg = finite_basis(trunc3)
    M = fixture_bimodule("trunc3_reg", trunc3)
    for n in range(3):
        upper = bar_coboundary_matrix(alg, M, n + 1)
        lower = bar_coboundary_matrix(alg, M, n)
        assert is_zero(upper * lower)


def test_resource_cap(upper2, fixture_bimodule):
    alg = finite_basis(upper2)
    with pytest.raises(ResourceLimit):
        bar_cohomology(alg, fixture_bimodule("upper2_reg", upper2), 4, cap=100)
