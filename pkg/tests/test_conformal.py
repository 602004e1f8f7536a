"""
Tests for Cend_k, its coefficient algebra and the identification with M_k(W1).
"""

import pytest

from anick.conformal import (
    X, CoefficientElement, ConformalElement, associativity_check, bimodule_check, coeff_product,
    lambda_product, s_product, weyl_iso_check, weyl_relation_holds, window_monomials,
)
from anick.errors import InputError, LeftPositivePart, RankMismatch


def test_weyl_relation():
    """t·x = x·t + 1 with t = 1(1) and x = x(0)."""
    assert weyl_relation_holds()


def test_s_products_of_scalars():
    one = ConformalElement.scalar(1)
    x = ConformalElement.scalar(X)
    assert (s_product(one, x, 0) + x.scale(-1)).is_zero()
    assert (s_product(one, x, 1) + one.scale(-1)).is_zero()
    assert s_product(one, x, 2).is_zero()
    # x ∘_λ 1 carries no λ
    assert s_product(x, one, 1).is_zero()


def test_coefficient_product():
    one = ConformalElement.scalar(1)
    x = ConformalElement.scalar(X)
    assert coeff_product(one, 1, x, 0) == (
        CoefficientElement.monomial(1, 1) + CoefficientElement.monomial(0, 0)
    )
    assert coeff_product(x, 0, one, 1) == CoefficientElement.monomial(1, 1)


def test_window_monomials():
    assert window_monomials(1) == [(0, 0), (1, 0), (0, 1)]
    assert len(window_monomials(6)) == 28


def test_iso_on_full_window():
    certificate = weyl_iso_check(6)
    assert certificate.pairs_checked == 28 * 28


def test_iso_rank_two():
    certificate = weyl_iso_check(2, rank=2)
    assert certificate.pairs_checked == 36 * 16


def test_matrix_units_multiply():
    """E12 x(0) · E21 1(1) = E11 x(1) and E12 · E12 = 0."""
    a = CoefficientElement.monomial(1, 0, k=2, a=0, b=1)
    b = CoefficientElement.monomial(0, 1, k=2, a=1, b=0)
    assert a * b == CoefficientElement(2, {(0, 0, 1, 1): 1})
    assert not a * a


def test_associativity():
    assert associativity_check(5) > 0


def test_bimodule_compatibility():
    assert bimodule_check(window=1, max_index=1) > 0


def test_rank_mismatch():
    with pytest.raises(RankMismatch):
        lambda_product(ConformalElement.unit(2, 0, 0), ConformalElement.scalar(1))
    with pytest.raises(RankMismatch):
        CoefficientElement.monomial(0, 0, k=2) * CoefficientElement.monomial(0, 0)


def test_negative_index_rejected():
    with pytest.raises(LeftPositivePart):
        CoefficientElement.monomial(0, -1)
    with pytest.raises(LeftPositivePart):
        coeff_product(ConformalElement.scalar(1), -1, ConformalElement.scalar(X), 0)


def test_window_too_small():
    with pytest.raises(InputError):
        weyl_iso_check(1)
