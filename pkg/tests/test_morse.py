"""
Tests for the bar differential, the Morse matching and path tracking.
"""

from fractions import Fraction

import pytest

from anick.chains import AnickChain, enumerate_chains
from anick.errors import InvalidMatching
from anick.freealg import EMPTY
from anick.morse import (
    CRITICAL, FreeBimoduleElement, MatchKind, MorseEngine, anick_differential, augmentation,
    bar_differential, match, shared_engine, validate_matching,
)
from anick.weyl_showcase import REFERENCE_DELTA3, parse_element

X = ("x",)


def test_bar_differential_w1(w1):
    """d[q|p] = q[p] - [pq] - [e] + [q]p."""
    d = bar_differential([("q",), ("p",)], w1)
    assert d.coefficient(("q",), (("p",),), EMPTY) == 1
    assert d.coefficient(EMPTY, (("p", "q"),), EMPTY) == -1
    assert d.coefficient(EMPTY, (("e",),), EMPTY) == -1
    assert d.coefficient(EMPTY, (("q",),), ("p",)) == 1
    assert len(d) == 4


def test_bar_differential_rejects_empty(w1):
    with pytest.raises(ValueError):
        bar_differential([], w1)


def test_match_rules(w1):
    assert match([("q",), ("p",)], w1) is CRITICAL
    split = match([("p", "q")], w1)
    assert split.kind is MatchKind.UPPER_OF
    assert split.partner == (("p",), ("q",))
    assert split.coef == -1
    merge = match([("p",), ("q",)], w1)
    assert merge.kind is MatchKind.LOWER_OF
    assert merge.partner == (("p", "q"),)
    assert merge.coef == -1


def test_match_trunc3(trunc3):
    """[x|x] merges down to [xx]; [x|xx|x] is critical."""
    assert match([X, X], trunc3).kind is MatchKind.LOWER_OF
    assert match([X, ("x", "x"), X], trunc3).critical


def test_delta1_is_commutator(dual):
    expected = FreeBimoduleElement({(X, (), EMPTY): 1, (EMPTY, (), X): -1})
    assert anick_differential(AnickChain((X,)), dual) == expected


def test_delta2_dual(dual):
    """δ2[x|x] = x[x] + [x]x since xx = 0."""
    expected = FreeBimoduleElement({(X, (X,), EMPTY): 1, (EMPTY, (X,), X): 1})
    assert anick_differential(AnickChain((X, X)), dual) == expected


def test_delta3_qpe_matches_table(w1):
    chain = AnickChain((("q",), ("p",), ("e",)))
    assert anick_differential(chain, w1) == parse_element(REFERENCE_DELTA3["qpe"])


def test_memo_does_not_change_results(w1):
    engine = MorseEngine(w1, memo=False)
    shared = shared_engine(w1)
    for chain in enumerate_chains(w1, 2):
        assert engine.differential(chain) == shared.differential(chain)
    assert engine.memo_size() == 0


def test_validate_matching_w1(w1):
    report = validate_matching(w1, 4)
    assert report.critical > 0
    assert report.pairs > 0


def test_validate_matching_h3_and_dual(h3, dual):
    validate_matching(h3, 3)
    validate_matching(dual, 6)


def test_weight_mismatch_is_reported(w1, mocker):
    """A matching whose partner edge has the wrong weight is rejected."""
    from anick import morse

    real = morse.match

    def flipped(entries, pres):
        status = real(entries, pres)
        if status.kind is MatchKind.UPPER_OF:
            return morse.MatchStatus(status.kind, status.partner, -status.coef)
        return status

    mocker.patch.object(morse, "match", flipped)
    with pytest.raises(InvalidMatching):
        MorseEngine(w1, memo=False).differential(AnickChain((("q",), ("p",), ("e",))))


def test_dot_export(w1):
    engine = MorseEngine(w1, record_graph=True)
    engine.differential(AnickChain((("q",), ("p",), ("e",))))
    dot = engine.to_dot()
    assert dot.startswith("digraph")
    assert "style=dashed" in dot
    assert '"[q|p|e]"' in dot


def test_augmentation(dual):
    assert augmentation(anick_differential(AnickChain((X,)), dual)) == 0
    assert augmentation(FreeBimoduleElement.basis(())) == 1


def test_bimodule_action(dual):
    element = FreeBimoduleElement.basis((X,))
    assert element.act(X, EMPTY, dual) == FreeBimoduleElement({(X, (X,), EMPTY): 1})
    # xx = 0 in the dual numbers
    assert not element.act(X, EMPTY, dual).act(X, EMPTY, dual)
    assert element.scale(Fraction(1, 2)).coefficient(EMPTY, (X,), EMPTY) == Fraction(1, 2)


def test_left_restriction_drops_right_coefficients(dual):
    element = anick_differential(AnickChain((X, X)), dual)
    assert element.restrict_left() == FreeBimoduleElement({(X, (X,), EMPTY): 1})
