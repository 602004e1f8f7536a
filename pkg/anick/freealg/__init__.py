"""
Free associative algebra over the rationals: words, polynomials,
deg-lex order, rewriting to normal form and Gröbner–Shirshov checks.
"""

import hashlib
import json
import logging
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from anick.errors import NotAGSB, PresentationError

logger = logging.getLogger(__name__)

Word = Tuple[str, ...]
Scalar = Union[int, Fraction]

EMPTY: Word = ()


@dataclass(frozen=True)
class Generator:
    """A generator; lower rank means smaller in the monomial order."""
    name: str
    rank: int


class FreePoly:
    """Finite rational linear combination of words.

    Zero coefficients are never stored. Iteration follows the deg-lex
    order of the owning presentation when one is attached, otherwise a
    plain (length, letters) order.
    """

    __slots__ = ("_terms", "_ranks")

    def __init__(self, terms: Optional[Dict[Word, Scalar]] = None,
                 ranks: Optional[Dict[str, int]] = None):
        clean: Dict[Word, Fraction] = {}
        for word, coef in (terms or {}).items():
            coef = Fraction(coef)
            if coef:
                clean[tuple(word)] = coef
        self._terms = clean
        self._ranks = ranks

    @classmethod
    def monomial(cls, word: Sequence[str], coef: Scalar = 1,
                 ranks: Optional[Dict[str, int]] = None) -> "FreePoly":
        return cls({tuple(word): coef}, ranks)

    @property
    def terms(self) -> Dict[Word, Fraction]:
        return dict(self._terms)

    def _key(self, word: Word):
        if self._ranks is None:
            return (len(word), word)
        return (len(word), tuple(self._ranks[c] for c in word))

    def __iter__(self) -> Iterator[Tuple[Word, Fraction]]:
        for word in sorted(self._terms, key=self._key):
            yield word, self._terms[word]

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, FreePoly):
            return self._terms == other._terms
        if other == 0:
            return not self._terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def coefficient(self, word: Sequence[str]) -> Fraction:
        return self._terms.get(tuple(word), Fraction(0))

    def leading_word(self) -> Optional[Word]:
        if not self._terms:
            return None
        return max(self._terms, key=self._key)

    def __add__(self, other: "FreePoly") -> "FreePoly":
        terms = dict(self._terms)
        for word, coef in other._terms.items():
            terms[word] = terms.get(word, Fraction(0)) + coef
        return FreePoly(terms, self._ranks or other._ranks)

    def __neg__(self) -> "FreePoly":
        return FreePoly({w: -c for w, c in self._terms.items()}, self._ranks)

    def __sub__(self, other: "FreePoly") -> "FreePoly":
        return self + (-other)

    def scale(self, factor: Scalar) -> "FreePoly":
        return FreePoly({w: c * factor for w, c in self._terms.items()}, self._ranks)

    def __mul__(self, other: "FreePoly") -> "FreePoly":
        terms: Dict[Word, Fraction] = {}
        for w1, c1 in self._terms.items():
            for w2, c2 in other._terms.items():
                word = w1 + w2
                terms[word] = terms.get(word, Fraction(0)) + c1 * c2
        return FreePoly(terms, self._ranks or other._ranks)

    def has_constant_term(self) -> bool:
        return EMPTY in self._terms

    def __repr__(self) -> str:
        from anick.formatters import format_poly
        return format_poly(self)


@dataclass(frozen=True)
class RewriteRule:
    """Rewriting rule lhs -> rhs; lhs is the obstruction."""
    lhs: Word
    rhs: FreePoly


@dataclass(frozen=True)
class Ambiguity:
    """An overlap or inclusion of two obstructions with its verdict."""
    word: Word
    kind: str
    first: Word
    second: Word
    nf1: FreePoly
    nf2: FreePoly

    @property
    def resolved(self) -> bool:
        return self.nf1 == self.nf2


@dataclass
class GSBReport:
    """Result of the Diamond Lemma check."""
    ambiguities: List[Ambiguity] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(a.resolved for a in self.ambiguities)

    @property
    def failures(self) -> List[Ambiguity]:
        return [a for a in self.ambiguities if not a.resolved]


class Presentation:
    """Ordered generators plus a reduced rewriting system.

    Generators are given greatest first (the JSON convention); ranks are
    assigned so that the first generator has the highest rank.
    """

    def __init__(self, generators: Sequence[str],
                 relations: Iterable[Tuple[Sequence[str], Dict[Sequence[str], Scalar]]],
                 idempotent: Optional[str] = None, name: str = ""):
        names = list(generators)
        if not names:
            raise PresentationError("A presentation needs at least one generator")
        if len(set(names)) != len(names):
            raise PresentationError(f"Duplicate generator names in {names}")
        size = len(names)
        self.name = name
        self.generators: List[Generator] = [
            Generator(n, size - 1 - i) for i, n in enumerate(names)
        ]
        self.ranks: Dict[str, int] = {g.name: g.rank for g in self.generators}
        if idempotent is not None and idempotent not in self.ranks:
            raise PresentationError(f"Idempotent {idempotent!r} is not a generator")
        self.idempotent = idempotent

        raw: List[RewriteRule] = []
        for lhs, rhs in relations:
            lhs = tuple(lhs)
            rhs_poly = FreePoly({tuple(w): c for w, c in rhs.items()}, self.ranks)
            self._check_rule(lhs, rhs_poly)
            raw.append(RewriteRule(lhs, rhs_poly))
        self._check_reduced(raw)

        self._lhs: Dict[Word, RewriteRule] = {r.lhs: r for r in raw}
        self._lengths = sorted({len(r.lhs) for r in raw})
        self._nf_cache: Dict[Word, FreePoly] = {}
        self._lock = threading.Lock()
        self._gsb_report: Optional[GSBReport] = None

        # Store rules with right-hand sides reduced by the whole system
        self.rules: List[RewriteRule] = [
            RewriteRule(r.lhs, normal_form(r.rhs, self)) for r in raw
        ]
        self._lhs = {r.lhs: r for r in self.rules}
        self._nf_cache.clear()
        logger.debug("Presentation %s: %d generators, %d rules", name, size, len(self.rules))

    def _check_rule(self, lhs: Word, rhs: FreePoly):
        for word in [lhs] + [w for w, _ in rhs]:
            unknown = [c for c in word if c not in self.ranks]
            if unknown:
                raise PresentationError(f"Unknown generators {unknown} in relation for {lhs}")
        if len(lhs) < 1:
            raise PresentationError("A relation needs a nonempty left-hand side")
        if rhs.has_constant_term():
            raise PresentationError(
                f"Relation for {''.join(lhs)} has a constant term; augmentation requires ε(A)=0"
            )
        for word, _ in rhs:
            if compare_deglex(word, lhs, self) >= 0:
                raise PresentationError(
                    f"Right-hand side word {''.join(word)} is not smaller than {''.join(lhs)}"
                )

    @staticmethod
    def _check_reduced(rules: List[RewriteRule]):
        seen = set()
        for rule in rules:
            if rule.lhs in seen:
                raise PresentationError(f"Duplicate obstruction {rule.lhs}")
            seen.add(rule.lhs)
        for a in rules:
            for b in rules:
                if a is not b and _find(b.lhs, a.lhs) is not None:
                    raise PresentationError(
                        f"Obstruction {''.join(b.lhs)} is a subword of {''.join(a.lhs)}"
                    )

    @property
    def generator_names(self) -> List[str]:
        return [g.name for g in self.generators]

    @property
    def obstructions(self) -> List[Word]:
        return sorted(self._lhs, key=self.sort_key)

    def is_quadratic(self) -> bool:
        return all(len(w) == 2 for w in self._lhs)

    def rule_for(self, word: Word) -> Optional[RewriteRule]:
        return self._lhs.get(word)

    def sort_key(self, word: Sequence[str]):
        return (len(word), tuple(self.ranks[c] for c in word))

    def find_obstruction(self, word: Word) -> Optional[Tuple[int, Word]]:
        """Leftmost obstruction occurrence in word as (start, obstruction)."""
        for start in range(len(word)):
            for length in self._lengths:
                piece = word[start:start + length]
                if len(piece) == length and piece in self._lhs:
                    return start, piece
        return None

    def obstruction_occurrences(self, word: Word) -> List[Tuple[int, Word]]:
        found = []
        for start in range(len(word)):
            for length in self._lengths:
                piece = word[start:start + length]
                if len(piece) == length and piece in self._lhs:
                    found.append((start, piece))
        return found

    def is_normal(self, word: Sequence[str]) -> bool:
        return self.find_obstruction(tuple(word)) is None

    def poly(self, terms: Dict[Sequence[str], Scalar]) -> FreePoly:
        return FreePoly({tuple(w): c for w, c in terms.items()}, self.ranks)

    def word(self, text: str) -> Word:
        """Tokenize text into generator names, longest name first."""
        names = sorted(self.ranks, key=len, reverse=True)
        letters: List[str] = []
        pos = 0
        while pos < len(text):
            for n in names:
                if text.startswith(n, pos):
                    letters.append(n)
                    pos += len(n)
                    break
            else:
                raise PresentationError(f"Cannot read word {text!r} over generators {self.generator_names}")
        return tuple(letters)

    def to_dict(self) -> dict:
        from anick.formatters import format_word
        return {
            "generators": self.generator_names,
            "relations": [
                {
                    "lhs": format_word(r.lhs),
                    "rhs": [{"coef": str(c), "word": format_word(w)} for w, c in r.rhs],
                }
                for r in self.rules
            ],
            **({"idempotent": self.idempotent} if self.idempotent else {}),
        }

    def digest(self) -> str:
        """Stable sha256 over the canonical JSON form."""
        payload = json.dumps(self.to_dict(), sort_keys=True, ensure_ascii=True)
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()

    def require_gsb(self) -> GSBReport:
        """Run verify_gsb once; raise NotAGSB on failure."""
        if self._gsb_report is None:
            self._gsb_report = verify_gsb(self, raise_on_failure=True)
        return self._gsb_report

    def __repr__(self) -> str:
        return f"Presentation({self.name or self.generator_names})"


def _find(needle: Word, hay: Word) -> Optional[int]:
    n = len(needle)
    for i in range(len(hay) - n + 1):
        if hay[i:i + n] == needle:
            return i
    return None


def compare_deglex(a: Sequence[str], b: Sequence[str], pres: Presentation) -> int:
    """-1, 0 or 1: shorter words first, then letter-wise by rank."""
    ka, kb = pres.sort_key(a), pres.sort_key(b)
    return (ka > kb) - (ka < kb)


def _reduce_word(word: Word, pres: Presentation) -> FreePoly:
    cached = pres._nf_cache.get(word)
    if cached is not None:
        return cached
    hit = pres.find_obstruction(word)
    if hit is None:
        result = FreePoly({word: 1}, pres.ranks)
    else:
        start, lhs = hit
        prefix, suffix = word[:start], word[start + len(lhs):]
        rule = pres.rule_for(lhs)
        result = FreePoly({}, pres.ranks)
        for w, c in rule.rhs:
            result = result + _reduce_word(prefix + w + suffix, pres).scale(c)
    with pres._lock:
        pres._nf_cache[word] = result
    return result


def normal_form(f: FreePoly, pres: Presentation) -> FreePoly:
    """Reduce f modulo the rules, leftmost obstruction first."""
    result: Dict[Word, Fraction] = {}
    for word, coef in f:
        for w, c in _reduce_word(word, pres):
            result[w] = result.get(w, Fraction(0)) + coef * c
    return FreePoly(result, pres.ranks)


def multiply(u: Sequence[str], v: Sequence[str], pres: Presentation) -> FreePoly:
    """Normal form of the product of two words."""
    return _reduce_word(tuple(u) + tuple(v), pres)


def normal_words(pres: Presentation, max_length: int) -> List[Word]:
    """All normal words of length 1..max_length in deg-lex order."""
    names = sorted(pres.generator_names, key=lambda n: pres.ranks[n])
    layer: List[Word] = [(n,) for n in names if pres.is_normal((n,))]
    words = list(layer)
    for _ in range(max_length - 1):
        layer = [w + (n,) for w in layer for n in names if pres.is_normal(w + (n,))]
        words.extend(layer)
    return sorted(words, key=pres.sort_key)


def _ambiguities(pres: Presentation) -> Iterator[Tuple[str, Word, Word, Word, FreePoly, FreePoly]]:
    obstructions = pres.obstructions
    for a in obstructions:
        for b in obstructions:
            # overlaps: a suffix of a equals a prefix of b
            for k in range(1, min(len(a), len(b))):
                if a[len(a) - k:] == b[:k]:
                    word = a + b[k:]
                    left = pres.rule_for(a).rhs * FreePoly.monomial(b[k:], ranks=pres.ranks)
                    right = FreePoly.monomial(a[:len(a) - k], ranks=pres.ranks) * pres.rule_for(b).rhs
                    yield "overlap", word, a, b, left, right
            if a != b:
                pos = _find(b, a)
                if pos is not None:
                    left = pres.rule_for(a).rhs
                    right = (FreePoly.monomial(a[:pos], ranks=pres.ranks) * pres.rule_for(b).rhs
                             * FreePoly.monomial(a[pos + len(b):], ranks=pres.ranks))
                    yield "inclusion", a, a, b, left, right


def verify_gsb(pres: Presentation, raise_on_failure: bool = True) -> GSBReport:
    """Diamond Lemma check over every overlap and inclusion ambiguity."""
    report = GSBReport()
    for kind, word, a, b, left, right in _ambiguities(pres):
        amb = Ambiguity(word, kind, a, b, normal_form(left, pres), normal_form(right, pres))
        report.ambiguities.append(amb)
        if not amb.resolved:
            logger.debug("Unresolved %s ambiguity %s", kind, word)
            if raise_on_failure:
                raise NotAGSB(amb.word, amb.nf1, amb.nf2)
    logger.info("GSB check: %d ambiguities, %d unresolved",
                len(report.ambiguities), len(report.failures))
    return report
