"""
Tests for Anick chain enumeration.
"""

import pytest

from anick.chains import AnickChain, chain_graph_paths, completes, enumerate_chains, is_chain
from anick.weyl_showcase import REFERENCE_DELTA3, REFERENCE_DELTA4, chain_label


def _labels(chains):
    return {chain_label(c) for c in chains}


def test_w1_chain_counts(w1):
    assert [len(enumerate_chains(w1, n)) for n in range(4)] == [3, 6, 13, 28]


def test_w1_chain_sets(w1):
    """V^(1) is the obstruction set, V^(2) the δ3 table rows; V^(3) contains every δ4 row."""
    assert _labels(enumerate_chains(w1, 1)) == {"qp", "pe", "qe", "eq", "ep", "ee"}
    assert _labels(enumerate_chains(w1, 2)) == set(REFERENCE_DELTA3)
    degree3 = _labels(enumerate_chains(w1, 3))
    assert set(REFERENCE_DELTA4) < degree3


def test_w1_chains_absent_from_reference_table(w1):
    """The chain graph q->{p,e}, p->{e}, e->{q,p,e} has 9 + 6 + 13 three-edge paths."""
    degree3 = _labels(enumerate_chains(w1, 3))
    assert degree3 - set(REFERENCE_DELTA4) == {"qeqp", "peqp"}
    assert AnickChain((("q",), ("e",), ("q",), ("p",))) in enumerate_chains(w1, 3)


def test_quadratic_fast_path_agrees(w1):
    for degree in range(4):
        assert enumerate_chains(w1, degree) == enumerate_chains(w1, degree, quadratic_fast_path=False)


def test_graph_paths(w1):
    assert chain_graph_paths(w1, 3) == 28


def test_h3_chain_counts(h3):
    assert [len(enumerate_chains(h3, n)) for n in range(4)] == [3, 3, 1, 0]
    assert enumerate_chains(h3, 2) == (AnickChain((("x",), ("y",), ("z",))),)


def test_trunc3_chains(trunc3):
    """x, [x|xx], [x|xx|x], [x|xx|x|xx]: one chain per degree."""
    expected = [
        (("x",),),
        (("x",), ("x", "x")),
        (("x",), ("x", "x"), ("x",)),
        (("x",), ("x", "x"), ("x",), ("x", "x")),
    ]
    for degree, entries in enumerate(expected):
        assert enumerate_chains(trunc3, degree) == (AnickChain(entries),)


def test_dual_chains(dual):
    for degree in range(6):
        assert enumerate_chains(dual, degree) == (AnickChain((("x",),) * (degree + 1)),)


def test_empty_chain(w1):
    assert enumerate_chains(w1, -1) == (AnickChain(()),)
    assert AnickChain(()).degree == -1
    with pytest.raises(ValueError):
        enumerate_chains(w1, -2)


def test_is_chain(trunc3, w1):
    assert is_chain([("x",), ("x", "x"), ("x",)], trunc3) == (True, 2)
    assert is_chain([("x",), ("x",)], trunc3) == (False, None)
    assert is_chain([("q",), ("p",), ("e",)], w1) == (True, 2)
    assert is_chain([("p",), ("q",)], w1) == (False, None)


def test_completes(trunc3):
    assert completes(("x",), ("x", "x"), trunc3)
    # two occurrences of xxx in xxxx
    assert not completes(("x", "x"), ("x", "x"), trunc3)


def test_chain_formatting(w1):
    chain = AnickChain((("q",), ("p",), ("e",)))
    assert str(chain) == "[q|p|e]"
    assert chain.word == ("q", "p", "e")
    assert chain.degree == 2
