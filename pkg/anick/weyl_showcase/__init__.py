"""
The first Weyl algebra W1 and the Heisenberg enveloping algebra as
executable checks.

W1 is presented on q > p > e with qp = pq + e and e acting as the unit
(pe = p, qe = q, eq = q, ep = p, ee = e). This module compares the
computed δ3/δ4 with the reference tables, solves the generic 3-cocycle
system in each Peirce type and certifies that every such cocycle is a
coboundary.
"""

import logging
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

from anick.chains import AnickChain, enumerate_chains
from anick.errors import InconsistentSystem, InputError, WitnessFailed
from anick.freealg import EMPTY, Presentation, Word, normal_form
from anick.morse import FreeBimoduleElement
from anick.resolution import Resolution, build_resolution

logger = logging.getLogger(__name__)

PeirceType = Tuple[int, int]
PEIRCE_TYPES: Tuple[PeirceType, ...] = ((1, 1), (1, 0), (0, 1), (0, 0))


@lru_cache(maxsize=None)
def w1_presentation() -> Presentation:
    """W1 with internal unit e, q > p > e. The instance is shared."""
    return Presentation(
        ["q", "p", "e"],
        [
            ("qp", {"pq": 1, "e": 1}),
            ("pe", {"p": 1}),
            ("qe", {"q": 1}),
            ("eq", {"q": 1}),
            ("ep", {"p": 1}),
            ("ee", {"e": 1}),
        ],
        idempotent="e",
        name="W1",
    )


# Reference tables in compact notation ([qpe] is the chain [q|p|e]).
REFERENCE_DELTA3: Dict[str, str] = {
    "qpe": "q[pe]-p[qe]-[ee]+[qp]-[qp]e",
    "eqp": "e[qp]-[qp]+[ep]q+[ee]-[eq]p",
    "qep": "q[ep]-[qe]p",
    "peq": "p[eq]-[pe]q",
    "qee": "q[ee]-[qe]e",
    "pee": "p[ee]-[pe]e",
    "eeq": "e[eq]-[ee]q",
    "eep": "e[ep]-[ee]q",
    "eqe": "e[qe]-[qe]+[eq]-[eq]e",
    "epe": "e[pe]-[pe]+[pe]-[ep]e",
    "qeq": "q[eq]-[qe]q",
    "pep": "p[ep]-[pe]p",
    "eee": "e[ee]-[ee]e",
}

REFERENCE_DELTA4: Dict[str, str] = {
    "qpee": "q[pee]-p[qee]-[eee]+[qpe]e",
    "qeep": "q[eep]-[qep]+[qee]p",
    "peeq": "p[eeq]-[peq]+[pee]q",
    "qeee": "q[eee]-[qee]+[qee]e",
    "peee": "p[eee]-[pee]+[pee]e",
    "eeeq": "e[eeq]-[eeq]+[eee]q",
    "eeep": "e[eep]-[eep]+[eee]p",
    "eeqe": "e[eqe]-[eeq]+[eeq]e",
    "eepe": "e[epe]-[eep]+[eep]e",
    "qeeq": "q[eeq]-[qeq]+[qee]q",
    "peep": "p[eep]-[pep]+[pee]p",
    "eeqp": "e[eqp]-[eep]q-[eee]+[eeq]p",
    "eqpe": "e[qpe]-[qpe]+[eee]-[eqp]+[eqp]e",
    "qepe": "q[epe]-[qep]+[qep]e",
    "peqe": "p[eqe]-[peq]+[peq]e",
    "eqee": "e[qee]-[qee]+[eqe]e",
    "epee": "e[pee]-[pee]+[epe]e",
    "qeqe": "q[eqe]-[qeq]+[qeq]e",
    "pepe": "p[epe]-[pep]+[pep]e",
    "eeee": "e[eee]-[eee]+[eee]e",
    "eqep": "e[qep]-[qep]+[eqe]p",
    "epeq": "e[peq]-[peq]+[epe]q",
    "epep": "e[pep]-[pep]+[epe]p",
    "eqeq": "e[qeq]-[qeq]+[eqe]q",
    "qpeq": "q[peq]-[eeq]-p[qeq]+[qpe]q",
    "qpep": "q[pep]-[eep]-p[qep]+[qpe]p",
}

_TERM = re.compile(r"\s*([+-]?)\s*(\d+(?:/\d+)?)?\*?([A-Za-z]*)\[([A-Za-z|]*)\]([A-Za-z]*)")


def parse_element(text: str) -> FreeBimoduleElement:
    """Read 'q[pe]-p[qe]' or 'x[y|z]-[y|z]x'; letters are single-character generators."""
    result = FreeBimoduleElement()
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos:
            raise InputError(f"Cannot parse term at {text[pos:]!r}")
        sign, mag, left, inner, right = m.groups()
        coef = Fraction(mag) if mag else Fraction(1)
        if sign == "-":
            coef = -coef
        if "|" in inner:
            entries = tuple(tuple(part) for part in inner.split("|"))
        else:
            entries = tuple((c,) for c in inner)
        result.add_term((tuple(left), entries, tuple(right)), coef)
        pos = m.end()
    return result


def chain_label(chain: AnickChain) -> str:
    return "".join(chain.word)


@dataclass
class DifferentialEntry:
    degree: int
    chain: AnickChain
    computed: FreeBimoduleElement
    reference: Optional[FreeBimoduleElement]

    @property
    def verdict(self) -> str:
        if self.reference is None:
            return "MISSING"
        return "MATCH" if self.computed == self.reference else "DISCREPANCY"


@dataclass
class DifferentialReport:
    entries: List[DifferentialEntry] = field(default_factory=list)

    @property
    def discrepancies(self) -> List[DifferentialEntry]:
        return [e for e in self.entries if e.verdict != "MATCH"]

    def by_label(self, degree: int, label: str) -> DifferentialEntry:
        for entry in self.entries:
            if entry.degree == degree and chain_label(entry.chain) == label:
                return entry
        raise KeyError(label)


def differential_report(res: Optional[Resolution] = None, **build_options) -> DifferentialReport:
    """Computed δ3, δ4 of W1 against the reference tables; computed values win."""
    pres = w1_presentation()
    if res is None:
        res = build_resolution(pres, 4, **build_options)
    report = DifferentialReport()
    for degree, table in ((3, REFERENCE_DELTA3), (4, REFERENCE_DELTA4)):
        for chain, image in res[degree]:
            reference = table.get(chain_label(chain))
            report.entries.append(DifferentialEntry(
                degree, chain, image, parse_element(reference) if reference else None
            ))
    for entry in report.discrepancies:
        logger.info("δ_%d%s differs from the reference table", entry.degree, entry.chain)
    return report


# Formal bimodules of Peirce type (i, j) on symbols φ[c], c in V^(2)

FormalKey = Tuple[Word, str, Word]
UNIT_E: Word = ("e",)


def _side_normal(word: Word, active: bool, pres: Presentation) -> List[Tuple[Word, Fraction]]:
    """Normalize a coefficient word on one side of a Peirce component.

    An active side carries W1 with e as its unit, an inactive side is
    killed by every nonempty word.
    """
    if not active:
        return [] if word else [(EMPTY, Fraction(1))]
    if not word:
        return [(UNIT_E, Fraction(1))]
    return list(normal_form(pres.poly({word: 1}), pres))


class FormalBimoduleElement:
    """Σ coef · left φ[symbol] right inside the Peirce component of a given type."""

    __slots__ = ("ptype", "pres", "_terms")

    def __init__(self, ptype: PeirceType, pres: Presentation,
                 terms: Optional[Mapping[FormalKey, Fraction]] = None):
        self.ptype = ptype
        self.pres = pres
        self._terms: Dict[FormalKey, Fraction] = {}
        for (left, symbol, right), coef in (terms or {}).items():
            self._add_raw(tuple(left), symbol, tuple(right), Fraction(coef))

    def _add_raw(self, left: Word, symbol: str, right: Word, coef: Fraction):
        for l, cl in _side_normal(left, bool(self.ptype[0]), self.pres):
            for r, cr in _side_normal(right, bool(self.ptype[1]), self.pres):
                key = (l, symbol, r)
                total = self._terms.get(key, Fraction(0)) + coef * cl * cr
                if total:
                    self._terms[key] = total
                else:
                    self._terms.pop(key, None)

    @classmethod
    def symbol(cls, ptype: PeirceType, pres: Presentation, name: str, coef=1) -> "FormalBimoduleElement":
        return cls(ptype, pres, {(EMPTY, name, EMPTY): Fraction(coef)})

    @property
    def unit_left(self) -> Word:
        return UNIT_E if self.ptype[0] else EMPTY

    @property
    def unit_right(self) -> Word:
        return UNIT_E if self.ptype[1] else EMPTY

    def __iter__(self) -> Iterator[Tuple[FormalKey, Fraction]]:
        for key in sorted(self._terms, key=lambda k: (k[1], len(k[0]), k[0], len(k[2]), k[2])):
            yield key, self._terms[key]

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, FormalBimoduleElement):
            return self.ptype == other.ptype and self._terms == other._terms
        if other == 0:
            return not self._terms
        return NotImplemented

    def __hash__(self):
        return hash((self.ptype, frozenset(self._terms.items())))

    def symbols(self) -> List[str]:
        return sorted({s for _, s, _ in self._terms})

    def bare_coefficient(self, name: str) -> Fraction:
        return self._terms.get((self.unit_left, name, self.unit_right), Fraction(0))

    def occurrences(self, name: str) -> int:
        return sum(1 for _, s, _ in self._terms if s == name)

    def __add__(self, other: "FormalBimoduleElement") -> "FormalBimoduleElement":
        result = FormalBimoduleElement(self.ptype, self.pres, self._terms)
        for (l, s, r), c in other._terms.items():
            result._add_raw(l, s, r, c)
        return result

    def scale(self, factor) -> "FormalBimoduleElement":
        factor = Fraction(factor)
        return FormalBimoduleElement(self.ptype, self.pres,
                                     {k: c * factor for k, c in self._terms.items()})

    def __neg__(self) -> "FormalBimoduleElement":
        return self.scale(-1)

    def __sub__(self, other: "FormalBimoduleElement") -> "FormalBimoduleElement":
        return self + (-other)

    def act(self, left: Word, right: Word) -> "FormalBimoduleElement":
        result = FormalBimoduleElement(self.ptype, self.pres)
        for (l, s, r), c in self._terms.items():
            result._add_raw(tuple(left) + l, s, r + tuple(right), c)
        return result

    def substitute(self, name: str, value: "FormalBimoduleElement") -> "FormalBimoduleElement":
        """Replace φ[name] by value everywhere, keeping the acting coefficients."""
        result = FormalBimoduleElement(self.ptype, self.pres)
        for (l, s, r), c in self._terms.items():
            if s == name:
                result = result + value.act(l, r).scale(c)
            else:
                result._add_raw(l, s, r, c)
        return result

    def __repr__(self) -> str:
        from anick.formatters import format_fraction, format_word
        if not self._terms:
            return "0"
        parts = []
        for (l, s, r), c in self:
            left = "" if l in (EMPTY, UNIT_E) else format_word(l)
            right = "" if r in (EMPTY, UNIT_E) else format_word(r)
            mag = "" if abs(c) == 1 else format_fraction(abs(c))
            body = f"{mag}{left}φ[{s}]{right}"
            parts.append(("-" if c < 0 else "+", body))
        text = "".join(f" {sign} {body}" for sign, body in parts).strip()
        return text[2:] if text.startswith("+ ") else "-" + text[2:]


def apply_functional(ptype: PeirceType, pres: Presentation,
                     element: FreeBimoduleElement,
                     values: Mapping[str, FormalBimoduleElement]) -> FormalBimoduleElement:
    """φ(Σ c·l[v]r) = Σ c·l φ[v] r, with φ[v] taken from values."""
    result = FormalBimoduleElement(ptype, pres)
    for (left, vertex, right), coef in element:
        label = "".join(c for entry in vertex for c in entry)
        result = result + values[label].act(left, right).scale(coef)
    return result


# Preferred free symbols, most strongly kept first
KEEP_FREE = ("eeq", "eep", "eee", "qpe", "qee", "pee")


@dataclass
class CocycleSystem:
    """Solved φ∘δ4 = 0 for one Peirce type."""
    ptype: PeirceType
    symbols: Tuple[str, ...]
    free: List[str]
    determined: Dict[str, FormalBimoduleElement]
    constraints: List[FormalBimoduleElement]
    presentation: Presentation = field(repr=False, default=None)

    @property
    def derived_identities(self) -> List[str]:
        return [s for s, expr in self.determined.items() if not expr]

    @property
    def constrained(self) -> List[str]:
        names = {s for c in self.constraints for s in c.symbols()}
        return [s for s in self.symbols if s in names]

    def value(self, name: str) -> FormalBimoduleElement:
        if name in self.determined:
            return self.determined[name]
        return FormalBimoduleElement.symbol(self.ptype, self.presentation or w1_presentation(), name)


@dataclass
class GenericCocycle:
    """φ on V^(2) with values in the formal bimodule of one type."""
    ptype: PeirceType
    assignment: Dict[str, FormalBimoduleElement]


def _keep_rank(name: str, basis_labels: Sequence[str]) -> int:
    order = list(KEEP_FREE) + [b for b in basis_labels if b not in KEEP_FREE]
    return order.index(name)


def _next_pivot(relations: Sequence[FormalBimoduleElement],
                labels: Sequence[str]) -> Optional[Tuple[int, str]]:
    """Pick (relation index, symbol) for the next elimination step.

    The relation with the fewest distinct symbols that still has a bare,
    single-occurrence symbol goes first. Inside it the least preferred
    such symbol is solved for.
    """
    best = None
    for index, relation in enumerate(relations):
        candidates = [name for name in relation.symbols()
                      if relation.bare_coefficient(name) and relation.occurrences(name) == 1]
        if not candidates:
            continue
        name = max(candidates, key=lambda n: _keep_rank(n, labels))
        key = (len(relation.symbols()), index)
        if best is None or key < best[0]:
            best = (key, index, name)
    return None if best is None else best[1:]


def eliminate(ptype: PeirceType, pres: Presentation, labels: Sequence[str],
              relations: Sequence[FormalBimoduleElement]) -> CocycleSystem:
    relations = [r for r in relations if r]
    determined: Dict[str, FormalBimoduleElement] = {}
    while True:
        pivot = _next_pivot(relations, labels)
        if pivot is None:
            break
        index, name = pivot
        relation = relations[index]
        coef = relation.bare_coefficient(name)
        bare = FormalBimoduleElement.symbol(ptype, pres, name, coef)
        value = (relation - bare).scale(Fraction(-1) / coef)
        determined = {k: v.substitute(name, value) for k, v in determined.items()}
        determined[name] = value
        relations = [r.substitute(name, value) for r in relations]
        relations = [r for r in relations if r]
        logger.debug("type %s: φ[%s] = %r", ptype, name, value)

    for relation in relations:
        if any(s in determined for s in relation.symbols()):
            raise InconsistentSystem(f"Residual relation {relation} references a determined symbol")
        logger.warning("type %s: unsolved constraint %r = 0", ptype, relation)
    constrained = {s for relation in relations for s in relation.symbols()}
    free = [n for n in labels if n not in determined and n not in constrained]
    return CocycleSystem(ptype, tuple(labels), free, determined, relations, pres)


def generic_cocycle_relations(ptype: PeirceType, res: Optional[Resolution] = None,
                              **build_options) -> CocycleSystem:
    """Eliminate φ-symbols from the relations φ(δ4 c) = 0, one per chain of V^(3).

    A symbol is solved for when it appears bare (coefficient e⊗e, or 1
    on an inactive side) as its only occurrence in a relation. Whatever
    cannot be solved stays in ``constraints`` and its symbols are
    reported as constrained, never as free.
    """
    if ptype not in PEIRCE_TYPES:
        raise InputError(f"Unknown Peirce type {ptype}")
    pres = w1_presentation()
    if res is None:
        res = build_resolution(pres, 4, **build_options)
    labels = tuple(chain_label(c) for c in res[3].basis)
    symbols = {name: FormalBimoduleElement.symbol(ptype, pres, name) for name in labels}
    relations = [apply_functional(ptype, pres, image, symbols) for _, image in res[4]]
    return eliminate(ptype, pres, labels, relations)


def generic_cocycle(system: CocycleSystem) -> GenericCocycle:
    return GenericCocycle(system.ptype, {n: system.value(n) for n in system.symbols})


# ψ on V^(1) in terms of free symbols: chain label -> [(coef, symbol)]
COBOUNDARY_RECIPES: Dict[PeirceType, Dict[str, List[Tuple[int, str]]]] = {
    (1, 1): {"eq": [(1, "eeq")], "ep": [(1, "eep")], "qe": [(-1, "qee")], "pe": [(-1, "pee")]},
    (1, 0): {"eq": [(1, "eeq")], "ep": [(1, "eep")], "qe": [(1, "qee")], "pe": [(1, "pee")],
             "ee": [(1, "eee")], "qp": [(1, "qpe")]},
    (0, 1): {"qe": [(-1, "qee")], "pe": [(-1, "pee")], "ee": [(-1, "eee")],
             "qp": [(-1, "eqp"), (-1, "eee")]},
    (0, 0): {"qp": [(1, "qpe")], "eq": [(1, "eqe")], "ep": [(1, "epe")]},
}


@dataclass
class WitnessCertificate:
    ptype: PeirceType
    psi: Dict[str, FormalBimoduleElement]
    residues: Dict[str, FormalBimoduleElement]

    @property
    def passed(self) -> bool:
        return not any(self.residues.values())


def coboundary_witness(ptype: PeirceType, system: Optional[CocycleSystem] = None,
                       res: Optional[Resolution] = None, raise_on_failure: bool = True,
                       **build_options) -> WitnessCertificate:
    """Check ψ∘δ3 = φ on every chain of V^(2) for the recipe ψ."""
    pres = w1_presentation()
    if res is None:
        res = build_resolution(pres, 4, **build_options)
    if system is None:
        system = generic_cocycle_relations(ptype, res)
    recipe = COBOUNDARY_RECIPES[ptype]
    psi: Dict[str, FormalBimoduleElement] = {}
    for chain in enumerate_chains(pres, 1):
        label = chain_label(chain)
        value = FormalBimoduleElement(ptype, pres)
        for coef, name in recipe.get(label, []):
            value = value + system.value(name).scale(coef)
        psi[label] = value
    residues: Dict[str, FormalBimoduleElement] = {}
    for chain, image in res[3]:
        label = chain_label(chain)
        residue = apply_functional(ptype, pres, image, psi) - system.value(label)
        residues[label] = residue
        if residue and raise_on_failure:
            raise WitnessFailed(f"[{label}] in type {ptype}", residue)
    return WitnessCertificate(ptype, psi, residues)


# Enveloping algebras of Lie algebras and the Chevalley–Eilenberg check

Brackets = Mapping[Tuple[str, str], Mapping[str, int]]


def _bracket(brackets: Brackets, a: str, b: str) -> Dict[str, Fraction]:
    if (a, b) in brackets:
        return {k: Fraction(v) for k, v in brackets[(a, b)].items()}
    if (b, a) in brackets:
        return {k: -Fraction(v) for k, v in brackets[(b, a)].items()}
    return {}


def lie_presentation(order: Sequence[str], brackets: Brackets, name: str = "") -> Presentation:
    """U(g) on a basis listed greatest first: xy -> yx + [x,y] for x > y."""
    relations = []
    for i, x in enumerate(order):
        for y in order[i + 1:]:
            rhs: Dict[str, Fraction] = {y + x: Fraction(1)}
            for z, c in _bracket(brackets, x, y).items():
                rhs[z] = rhs.get(z, Fraction(0)) + c
            relations.append((x + y, rhs))
    return Presentation(list(order), relations, name=name)


HEISENBERG_ORDER = ("x", "y", "z")
HEISENBERG_BRACKETS: Brackets = {("x", "y"): {"z": 1}}
HEISENBERG_DELTA3 = "x[y|z]-[y|z]x+[x|z]y-y[x|z]+z[x|y]-[x|y]z"


def _wedge_sort(letters: Sequence[str], order: Sequence[str]) -> Tuple[int, Tuple[str, ...]]:
    """Sign and letters in decreasing order; sign 0 for a repeated letter."""
    if len(set(letters)) != len(letters):
        return 0, ()
    rank = {g: i for i, g in enumerate(order)}
    items = list(letters)
    sign = 1
    for i in range(len(items)):
        for j in range(len(items) - 1 - i):
            if rank[items[j]] > rank[items[j + 1]]:
                items[j], items[j + 1] = items[j + 1], items[j]
                sign = -sign
    return sign, tuple(items)


def chevalley_eilenberg_differential(order: Sequence[str], brackets: Brackets,
                                     wedge: Sequence[str]) -> FreeBimoduleElement:
    """d(x1∧..∧xn) = Σ(-1)^(i+1) xi⊗(..x̂i..) + Σ_{i<j}(-1)^(i+j) [xi,xj]∧(..x̂i..x̂j..).

    Wedges are encoded as divisions with letters in decreasing order.
    """
    wedge = list(wedge)
    result = FreeBimoduleElement()
    for i, x in enumerate(wedge):
        sign, rest = _wedge_sort(wedge[:i] + wedge[i + 1:], order)
        if sign:
            result.add_term(((x,), tuple((c,) for c in rest), EMPTY),
                            Fraction((-1) ** i * sign))
    for i, j in combinations(range(len(wedge)), 2):
        others = [w for k, w in enumerate(wedge) if k not in (i, j)]
        for z, c in _bracket(brackets, wedge[i], wedge[j]).items():
            sign, letters = _wedge_sort([z] + others, order)
            if sign:
                result.add_term((EMPTY, tuple((g,) for g in letters), EMPTY),
                                Fraction((-1) ** (i + j)) * c * sign)
    return result


def left_restriction(element: FreeBimoduleElement) -> FreeBimoduleElement:
    """The left Anick resolution: drop terms with a nontrivial right coefficient."""
    return element.restrict_left()


@dataclass
class HeisenbergReport:
    presentation: Presentation
    chain_counts: List[int]
    delta3: FreeBimoduleElement
    matches_reference: bool
    ce_agreement: Dict[str, bool]

    @property
    def passed(self) -> bool:
        return self.matches_reference and all(self.ce_agreement.values())


def heisenberg_fixture(**build_options) -> HeisenbergReport:
    """U(H3) with xy = yx + z: chain counts, δ3[x|y|z] and the CE comparison."""
    pres = lie_presentation(HEISENBERG_ORDER, HEISENBERG_BRACKETS, name="U(H3)")
    res = build_resolution(pres, 4, **build_options)
    counts = [len(enumerate_chains(pres, k)) for k in range(4)]
    top = AnickChain((("x",), ("y",), ("z",)))
    delta3 = res[3].differential[top]
    agreement = {}
    for degree in (1, 2, 3):
        for chain, image in res[degree]:
            ce = chevalley_eilenberg_differential(HEISENBERG_ORDER, HEISENBERG_BRACKETS, chain.word)
            agreement[str(chain)] = left_restriction(image) == ce
    return HeisenbergReport(pres, counts, delta3, delta3 == parse_element(HEISENBERG_DELTA3), agreement)


@dataclass
class WeylDemoReport:
    chain_counts: List[int]
    resolution: Resolution
    differentials: DifferentialReport
    systems: Dict[PeirceType, CocycleSystem]
    certificates: Dict[PeirceType, WitnessCertificate]

    @property
    def certified(self) -> int:
        return sum(1 for c in self.certificates.values() if c.passed)


def weyl_demo(**build_options) -> WeylDemoReport:
    """Chains, differential tables, cocycle systems and coboundary certificates for W1."""
    pres = w1_presentation()
    pres.require_gsb()
    res = build_resolution(pres, 4, **build_options)
    counts = [len(enumerate_chains(pres, k)) for k in range(4)]
    report = differential_report(res)
    systems = {t: generic_cocycle_relations(t, res) for t in PEIRCE_TYPES}
    certificates = {
        t: coboundary_witness(t, systems[t], res, raise_on_failure=False) for t in PEIRCE_TYPES
    }
    return WeylDemoReport(counts, res, report, systems, certificates)
