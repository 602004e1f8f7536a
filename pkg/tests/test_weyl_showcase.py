"""
Tests for the W1 tables, the generic 3-cocycle solver and the Heisenberg check.
"""

from fractions import Fraction

import pytest

from anick.chains import enumerate_chains
from anick.errors import InputError
from anick.freealg import EMPTY, verify_gsb
from anick.hochschild import PEIRCE_TYPES
from anick.morse import FreeBimoduleElement
from anick.resolution import build_resolution
from anick.weyl_showcase import (
    COBOUNDARY_RECIPES, HEISENBERG_BRACKETS, HEISENBERG_DELTA3, HEISENBERG_ORDER,
    FormalBimoduleElement, chain_label, chevalley_eilenberg_differential, coboundary_witness,
    differential_report, eliminate, generic_cocycle, generic_cocycle_relations, heisenberg_fixture,
    lie_presentation, parse_element, w1_presentation, weyl_demo,
)


@pytest.fixture(scope="module")
def w1_res():
    return build_resolution(w1_presentation(), 4)


@pytest.fixture(scope="module")
def systems(w1_res):
    return {t: generic_cocycle_relations(t, w1_res) for t in PEIRCE_TYPES}


def test_parse_element():
    element = parse_element("q[pe]-2p[qe]+[x|yz]z")
    assert element.coefficient(("q",), (("p",), ("e",)), EMPTY) == 1
    assert element.coefficient(("p",), (("q",), ("e",)), EMPTY) == -2
    assert element.coefficient(EMPTY, (("x",), ("y", "z")), ("z",)) == 1
    with pytest.raises(InputError):
        parse_element("q[pe")


def test_delta3_discrepancies(w1_res):
    """Only the [eep] and [epe] rows of the reference δ3 table are off."""
    report = differential_report(w1_res)
    degree3 = {chain_label(e.chain) for e in report.discrepancies if e.degree == 3}
    assert degree3 == {"eep", "epe"}
    assert report.by_label(3, "eep").computed == parse_element("e[ep]-[ee]p")
    assert report.by_label(3, "epe").computed == parse_element("e[pe]-[pe]+[ep]-[ep]e")
    assert report.by_label(3, "qpe").verdict == "MATCH"


def test_delta4_spot_checks(w1_res):
    report = differential_report(w1_res)
    assert report.by_label(4, "qpee").verdict == "MATCH"
    assert report.by_label(4, "qeee").verdict == "MATCH"
    assert len([e for e in report.entries if e.degree == 4]) == 28


def test_delta4_rows_outside_reference_table(w1_res):
    """[qeqp] and [peqp] are chains of V^(3) with no reference row."""
    report = differential_report(w1_res)
    missing = {chain_label(e.chain) for e in report.entries if e.verdict == "MISSING"}
    assert missing == {"qeqp", "peqp"}


def test_free_symbols_type_11(systems):
    system = systems[(1, 1)]
    assert set(system.free) == {"eeq", "eep", "qee", "pee"}
    assert {"eee", "eqe", "epe"} <= set(system.derived_identities)


def test_free_symbols_type_10(systems):
    assert set(systems[(1, 0)].free) == {"eeq", "eep", "eee", "qpe"}


def test_free_symbols_type_01(systems):
    assert set(systems[(0, 1)].free) == {"eee", "qee", "pee", "eqp"}


def test_free_symbols_type_00(systems):
    system = systems[(0, 0)]
    assert set(system.free) == {"qpe", "eqe", "epe"}
    qpe = FormalBimoduleElement.symbol((0, 0), w1_presentation(), "qpe")
    assert system.value("eqp") == -qpe


@pytest.mark.parametrize("ptype", PEIRCE_TYPES)
def test_every_cocycle_is_a_coboundary(ptype, systems, w1_res):
    certificate = coboundary_witness(ptype, systems[ptype], w1_res)
    assert certificate.passed
    assert len(certificate.residues) == 13
    assert set(certificate.psi) == {chain_label(c) for c in enumerate_chains(w1_presentation(), 1)}


def test_recipes_only_use_free_symbols(systems):
    for ptype, recipe in COBOUNDARY_RECIPES.items():
        used = {name for terms in recipe.values() for _, name in terms}
        assert used <= set(systems[ptype].free)


def test_generic_cocycle_covers_all_chains(systems):
    cocycle = generic_cocycle(systems[(1, 0)])
    assert len(cocycle.assignment) == 13


def test_formal_unit_and_annihilation():
    pres = w1_presentation()
    active = FormalBimoduleElement.symbol((1, 1), pres, "qpe")
    assert active.act(("e",), ("e",)) == active
    assert active.act(("q",), EMPTY).act(("p",), EMPTY) == active.act(("p", "q"), EMPTY)
    inactive = FormalBimoduleElement.symbol((0, 0), pres, "qpe")
    assert not inactive.act(("q",), EMPTY)
    assert inactive.act(EMPTY, EMPTY) == inactive


def test_unknown_peirce_type(w1_res):
    with pytest.raises(InputError):
        generic_cocycle_relations((2, 0), w1_res)


def test_weyl_demo(w1_res):
    report = weyl_demo()
    assert report.chain_counts == [3, 6, 13, 28]
    assert report.certified == 4


def test_heisenberg_fixture():
    report = heisenberg_fixture()
    assert report.chain_counts == [3, 3, 1, 0]
    assert report.delta3 == parse_element(HEISENBERG_DELTA3)
    assert report.passed


def test_chevalley_eilenberg_two_letters():
    expected = FreeBimoduleElement({
        (("x",), (("z",),), EMPTY): Fraction(1),
        (("z",), (("x",),), EMPTY): Fraction(-1),
    })
    assert chevalley_eilenberg_differential(HEISENBERG_ORDER, HEISENBERG_BRACKETS, ("x", "z")) == expected


def test_chevalley_eilenberg_bracket_term():
    """d(x∧y) = x⊗y - y⊗x - z."""
    d = chevalley_eilenberg_differential(HEISENBERG_ORDER, HEISENBERG_BRACKETS, ("x", "y"))
    assert d.coefficient(EMPTY, (("z",),), EMPTY) == -1


def test_lie_presentation_abelian():
    pres = lie_presentation(("b", "a"), {}, name="abelian")
    assert verify_gsb(pres).passed
    assert [r.lhs for r in pres.rules] == [("b", "a")]


def test_no_constraints_left_for_w1(systems):
    for system in systems.values():
        assert system.constraints == []
        assert system.constrained == []


def test_eliminate_prefers_short_relations():
    pres = w1_presentation()
    sym = lambda name: FormalBimoduleElement.symbol((0, 1), pres, name)
    labels = ("eee", "qee", "pee", "eqe", "qpe")
    system = eliminate((0, 1), pres, labels, [
        sym("eqe") + sym("qee") + sym("pee"),
        sym("eqe") - sym("qee"),
    ])
    assert system.value("eqe") == sym("qee")
    assert system.value("pee") == sym("qee").scale(-2)
    assert system.free == ["eee", "qee", "qpe"]


def test_unsolvable_relation_is_a_constraint():
    """φ[eeq]p - φ[eep]q has no bare symbol, so neither side may be called free."""
    pres = w1_presentation()
    sym = lambda name: FormalBimoduleElement.symbol((0, 1), pres, name)
    residual = sym("eeq").act(EMPTY, ("p",)) - sym("eep").act(EMPTY, ("q",))
    labels = ("eeq", "eep", "eee", "qpe")
    system = eliminate((0, 1), pres, labels, [residual, sym("qpe") - sym("eee")])
    assert system.constraints == [residual]
    assert system.constrained == ["eeq", "eep"]
    assert system.free == ["eee"]
    assert system.value("qpe") == sym("eee")


def test_weyl_demo_prints_constraints(mocker):
    from click.testing import CliRunner

    from anick.main import main

    pres = w1_presentation()
    stuck = FormalBimoduleElement.symbol((0, 1), pres, "eeq").act(EMPTY, ("p",))
    real = generic_cocycle_relations

    def with_constraint(ptype, res=None, **options):
        system = real(ptype, res, **options)
        if ptype == (0, 1):
            system.constraints.append(stuck)
        return system

    mocker.patch("anick.weyl_showcase.generic_cocycle_relations", side_effect=with_constraint)
    result = CliRunner().invoke(main, ["--quiet", "weyl-demo"])
    assert "  constraint: φ[eeq]p = 0" in result.stdout.splitlines()
