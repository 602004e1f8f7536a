"""
Tests for bimodules, cochain layout, coboundaries and cohomology dims.
"""

from fractions import Fraction

import pytest

from anick.errors import ActionsDontCommute, InputError, NotIdempotent, RelationViolated
from anick.freealg import Presentation
from anick.hochschild import (
    cochain_space, coboundary_matrix, cohomology_basis, cohomology_dims, is_zero, make_bimodule,
    matrix_rank, peirce_decompose, rational_matrix, sparse_matrix, trivial_bimodule, validate_bimodule,
)
from anick.resolution import build_resolution


def test_dual_numbers_trivial_coefficients(dual):
    """Every coboundary vanishes, so H^n = k in each degree."""
    result = cohomology_dims(dual, trivial_bimodule(dual, 1), 4)
    assert result.dims == [1, 1, 1, 1, 1]
    assert result.ranks == [0, 0, 0, 0, 0]


def test_trunc3_trivial_coefficients(trunc3):
    assert cohomology_dims(trunc3, trivial_bimodule(trunc3, 1), 4).dims == [1, 1, 1, 1, 1]


@pytest.mark.parametrize("dim", [1, 2, 3])
def test_w1_third_cohomology_vanishes(w1, dim):
    dims = cohomology_dims(w1, trivial_bimodule(w1, dim), 3).dims
    assert dims[3] == 0


def test_reversed_basis_gives_same_dims(w1):
    M = trivial_bimodule(w1, 1)
    assert cohomology_dims(w1, M, 3).dims == cohomology_dims(w1, M, 3, reverse_basis=True).dims


def test_dims_from_fixture_files(trunc3, fixture_bimodule):
    M = fixture_bimodule("trunc3_reg", trunc3)
    result = cohomology_dims(trunc3, M, 3)
    assert result.cochain_dims == [3, 3, 3, 3]
    assert all(d >= 0 for d in result.dims)


def test_cochain_layout_is_chain_major(w1):
    space = cochain_space(w1, 2, trivial_bimodule(w1, 2))
    assert space.dimension == 12
    assert space.index(0, 1) == 1
    assert space.index(1, 0) == 2
    assert space.index(5, 1) == 11


def test_coboundary_shape(w1):
    res = build_resolution(w1, 3)
    M = trivial_bimodule(w1, 2)
    matrix = coboundary_matrix(res[3], M, w1)
    # C^2 = M^{V^(1)} -> C^3 = M^{V^(2)}
    assert matrix.shape == (13 * 2, 6 * 2)


def test_cohomology_basis(dual):
    basis = cohomology_basis(dual, trivial_bimodule(dual, 1), 2)
    assert basis == [(Fraction(1),)]


def test_relation_violated(dual):
    """L(x) = 1 breaks xx = 0."""
    M = make_bimodule(1, {"x": [[1]]}, {}, dual.generator_names)
    with pytest.raises(RelationViolated) as info:
        validate_bimodule(M, dual)
    assert info.value.side == "left"
    assert not validate_bimodule(M, dual, raise_on_failure=False).passed


def test_actions_must_commute(dual):
    M = make_bimodule(2, {"x": [[0, 0], [1, 0]]}, {"x": [[0, 1], [0, 0]]}, dual.generator_names)
    with pytest.raises(ActionsDontCommute):
        validate_bimodule(M, dual)


def test_bad_matrix_shape(dual):
    with pytest.raises(InputError):
        make_bimodule(2, {"x": [[0]]}, {}, dual.generator_names)
    with pytest.raises(InputError):
        make_bimodule(1, {"y": [[0]]}, {}, dual.generator_names)


def test_invalid_bimodule_rejected_by_cohomology(dual):
    M = make_bimodule(1, {"x": [[1]]}, {}, dual.generator_names)
    with pytest.raises(RelationViolated):
        cohomology_dims(dual, M, 1)


def test_peirce_decomposition_of_trivial_module(w1):
    parts = peirce_decompose(trivial_bimodule(w1, 2), w1)
    assert parts[(0, 0)].dim == 2
    assert parts[(1, 1)].dim == parts[(1, 0)].dim == parts[(0, 1)].dim == 0


def test_peirce_decomposition_of_direct_sum():
    """k_11 ⊕ k_10 ⊕ k_00 over the algebra generated by one idempotent."""
    idem = Presentation(["e"], [("ee", {"e": 1})], idempotent="e")
    M = make_bimodule(3, {"e": [[1, 0, 0], [0, 1, 0], [0, 0, 0]]},
                      {"e": [[1, 0, 0], [0, 0, 0], [0, 0, 0]]}, idem.generator_names)
    validate_bimodule(M, idem)
    parts = peirce_decompose(M, idem)
    assert {t: part.dim for t, part in parts.items()} == {(1, 1): 1, (1, 0): 1, (0, 1): 0, (0, 0): 1}
    assert parts[(1, 1)].left["e"] == parts[(1, 1)].right["e"] == rational_matrix([[1]])
    assert parts[(1, 0)].left["e"] == rational_matrix([[1]])
    assert parts[(1, 0)].right["e"] == rational_matrix([[0]])
    assert parts[(0, 0)].left["e"] == parts[(0, 0)].right["e"] == rational_matrix([[0]])


def test_peirce_needs_idempotent_action(w1):
    M = make_bimodule(1, {"e": [[2]]}, {}, w1.generator_names)
    with pytest.raises(NotIdempotent):
        peirce_decompose(M, w1)


def test_peirce_needs_designated_idempotent(dual):
    with pytest.raises(InputError):
        peirce_decompose(trivial_bimodule(dual, 1), dual)


def test_sparse_rank():
    matrix = sparse_matrix({0: {0: Fraction(1), 1: Fraction(2)}, 1: {0: Fraction(2), 1: Fraction(4)}}, (2, 2))
    assert matrix_rank(matrix) == 1
    assert matrix_rank(sparse_matrix({}, (0, 3))) == 0
    assert is_zero(sparse_matrix({}, (2, 2)))
