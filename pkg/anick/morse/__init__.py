"""
Morse matching on the two-sided bar resolution and Anick differentials.

Vertices of the bar graph are divisions [a1|...|an] of nonempty normal
words. Edges come from the bar differential. The matching pairs a vertex
with a partner one dimension up or down; the Anick differential of a
critical cell is the weighted sum over paths that alternate between
ordinary edges and inverted matched edges, computed lazily with a
shared memo.
"""

import logging
import threading
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Sequence, Set, Tuple

from anick.chains import AnickChain, chain_prefix_length, completing_prefix, enumerate_chains
from anick.errors import CycleDetected, InvalidMatching
from anick.freealg import EMPTY, FreePoly, Presentation, Word, multiply

logger = logging.getLogger(__name__)

Division = Tuple[Word, ...]
TermKey = Tuple[Word, Division, Word]


@dataclass(frozen=True)
class BarVertex:
    """Basis tensor [a1|...|an] of B_n."""
    entries: Division

    @property
    def dimension(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class BimoduleTerm:
    left: Word
    vertex: Division
    right: Word
    coef: Fraction


def lambda_product(u: Word, v: Word, pres: Presentation) -> FreePoly:
    """Normal form of u*v in Λ; the empty word is the unit."""
    if not u and not v:
        return FreePoly({EMPTY: 1}, pres.ranks)
    return multiply(u, v, pres)


class FreeBimoduleElement:
    """Finite sum of coef * left [division] right over Λ⊗kV⊗Λ.

    Keys are (left, division, right) with Λ-coefficients in normal form;
    zero coefficients are dropped.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Optional[Dict[TermKey, Fraction]] = None):
        self._terms: Dict[TermKey, Fraction] = {
            k: Fraction(c) for k, c in (terms or {}).items() if c
        }

    @classmethod
    def basis(cls, entries: Sequence[Word], coef=1) -> "FreeBimoduleElement":
        return cls({(EMPTY, tuple(entries), EMPTY): Fraction(coef)})

    @staticmethod
    def _order(key: TermKey):
        left, div, right = key
        return (len(div), [len(e) for e in div], div, len(left), left, len(right), right)

    def __iter__(self) -> Iterator[Tuple[TermKey, Fraction]]:
        for key in sorted(self._terms, key=self._order):
            yield key, self._terms[key]

    def terms(self) -> List[BimoduleTerm]:
        return [BimoduleTerm(l, v, r, c) for (l, v, r), c in self]

    def coefficient(self, left: Word, vertex: Division, right: Word) -> Fraction:
        return self._terms.get((tuple(left), tuple(vertex), tuple(right)), Fraction(0))

    def vertices(self) -> Set[Division]:
        return {v for _, v, _ in self._terms}

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, FreeBimoduleElement):
            return self._terms == other._terms
        if other == 0:
            return not self._terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def add_term(self, key: TermKey, coef: Fraction):
        """In-place accumulation, used while an element is being built."""
        total = self._terms.get(key, Fraction(0)) + coef
        if total:
            self._terms[key] = total
        else:
            self._terms.pop(key, None)

    def __add__(self, other: "FreeBimoduleElement") -> "FreeBimoduleElement":
        result = FreeBimoduleElement(self._terms)
        for key, coef in other._terms.items():
            result.add_term(key, coef)
        return result

    def __neg__(self) -> "FreeBimoduleElement":
        return self.scale(-1)

    def __sub__(self, other: "FreeBimoduleElement") -> "FreeBimoduleElement":
        return self + (-other)

    def scale(self, factor) -> "FreeBimoduleElement":
        factor = Fraction(factor)
        return FreeBimoduleElement({k: c * factor for k, c in self._terms.items()})

    def act(self, left: Word, right: Word, pres: Presentation) -> "FreeBimoduleElement":
        """left · self · right with Λ-coefficients renormalized."""
        if not left and not right:
            return self
        result = FreeBimoduleElement()
        for (l, v, r), coef in self._terms.items():
            for new_l, cl in lambda_product(left, l, pres):
                for new_r, cr in lambda_product(r, right, pres):
                    result.add_term((new_l, v, new_r), coef * cl * cr)
        return result

    def restrict_left(self) -> "FreeBimoduleElement":
        """Keep the terms whose right coefficient is the unit."""
        return FreeBimoduleElement({k: c for k, c in self._terms.items() if not k[2]})

    def __repr__(self) -> str:
        from anick.formatters import format_element
        return format_element(self)


def bar_differential(entries: Sequence[Word], pres: Presentation) -> FreeBimoduleElement:
    """d[a1|...|an] = a1[a2..] + Σ(-1)^i[..|a_i a_{i+1}|..] + (-1)^n[..a_{n-1}]a_n."""
    v = tuple(tuple(e) for e in entries)
    n = len(v)
    if n == 0:
        raise ValueError("The bar differential is not defined on the empty division")
    result = FreeBimoduleElement()
    result.add_term((v[0], v[1:], EMPTY), Fraction(1))
    for i in range(1, n):
        sign = -1 if i % 2 else 1
        for word, coef in multiply(v[i - 1], v[i], pres):
            result.add_term((EMPTY, v[:i - 1] + (word,) + v[i + 1:], EMPTY), sign * coef)
    result.add_term((EMPTY, v[:-1], v[-1]), Fraction(-1 if n % 2 else 1))
    return result


class MatchKind(Enum):
    CRITICAL = "critical"
    LOWER_OF = "lower"
    UPPER_OF = "upper"


@dataclass(frozen=True)
class MatchStatus:
    """Matching verdict for one vertex.

    LOWER_OF: the partner is one dimension lower, coef is the weight of
    the edge vertex -> partner. UPPER_OF: the partner is one dimension
    higher, coef is the weight of the edge partner -> vertex.
    """
    kind: MatchKind
    partner: Optional[Division] = None
    coef: Optional[Fraction] = None

    @property
    def critical(self) -> bool:
        return self.kind is MatchKind.CRITICAL


CRITICAL = MatchStatus(MatchKind.CRITICAL)


def match(entries: Sequence[Word], pres: Presentation) -> MatchStatus:
    """Pair a bar vertex with its Morse partner.

    With k the length of the longest chain prefix: the vertex is critical
    when k covers everything; otherwise it is split at the shortest prefix
    of entry k+1 that continues the chain, or merged with entry k when no
    such prefix exists.
    """
    v = tuple(tuple(e) for e in entries)
    n = len(v)
    k = chain_prefix_length(v, pres)
    if k == n:
        return CRITICAL
    word = v[k]
    head = word[:1] if k == 0 else completing_prefix(v[k - 1], word, pres)
    if head is not None:
        partner = v[:k] + (head, word[len(head):]) + v[k + 1:]
        return MatchStatus(MatchKind.UPPER_OF, partner, Fraction(-1 if (k + 1) % 2 else 1))
    merged = v[k - 1] + word
    if not pres.is_normal(merged):
        raise InvalidMatching(
            f"Merging entries {k} and {k + 1} of {v} gives a reducible word", witness=v
        )
    partner = v[:k - 1] + (merged,) + v[k + 1:]
    return MatchStatus(MatchKind.LOWER_OF, partner, Fraction(-1 if k % 2 else 1))


class MorseEngine:
    """Path tracking with a shared, thread-safe memo of vertex values.

    value(v) is the image of a bar vertex in the Anick complex: the vertex
    itself when critical, zero when matched downwards, and for a vertex
    matched upwards with u the sum over the other edges out of u weighted
    by -1/c, c being the weight of u -> v.
    """

    def __init__(self, pres: Presentation, memo: bool = True, record_graph: bool = False):
        self.pres = pres
        self.memo_enabled = memo
        self._memo: Dict[Division, FreeBimoduleElement] = {}
        self._lock = threading.Lock()
        self._local = threading.local()
        self.record_graph = record_graph
        self.edges: Set[Tuple[Division, Division, str]] = set()

    def _in_progress(self) -> Set[Division]:
        if not hasattr(self._local, "stack"):
            self._local.stack = set()
        return self._local.stack

    def _record(self, source: Division, target: Division, style: str):
        if self.record_graph:
            with self._lock:
                self.edges.add((source, target, style))

    def value(self, entries: Sequence[Word]) -> FreeBimoduleElement:
        v = tuple(tuple(e) for e in entries)
        status = match(v, self.pres)
        if status.kind is MatchKind.CRITICAL:
            return FreeBimoduleElement.basis(v)
        if status.kind is MatchKind.LOWER_OF:
            return FreeBimoduleElement()
        if self.memo_enabled:
            with self._lock:
                cached = self._memo.get(v)
            if cached is not None:
                return cached

        stack = self._in_progress()
        if v in stack:
            raise CycleDetected(f"Path tracking re-entered {v}", witness=v)
        stack.add(v)
        try:
            result = self._track(v, status)
        finally:
            stack.discard(v)

        if self.memo_enabled:
            with self._lock:
                result = self._memo.setdefault(v, result)
        return result

    def _track(self, v: Division, status: MatchStatus) -> FreeBimoduleElement:
        upper = status.partner
        image = bar_differential(upper, self.pres)
        weight = image.coefficient(EMPTY, v, EMPTY)
        if weight != status.coef or not weight:
            raise InvalidMatching(
                f"Matched edge {upper} -> {v} has weight {weight}, expected {status.coef}",
                witness=(upper, v),
            )
        self._record(upper, v, "matched")
        result = FreeBimoduleElement()
        for (left, target, right), coef in image:
            if (left, target, right) == (EMPTY, v, EMPTY):
                continue
            self._record(v, target, "path")
            result = result + self.value(target).act(left, right, self.pres).scale(coef)
        return result.scale(Fraction(-1) / weight)

    def differential(self, chain: AnickChain) -> FreeBimoduleElement:
        """δ_n on a chain of degree n-1, expressed over V^(n-2)."""
        result = FreeBimoduleElement()
        for (left, target, right), coef in bar_differential(chain.entries, self.pres):
            self._record(chain.entries, target, "bar")
            result = result + self.value(target).act(left, right, self.pres).scale(coef)
        return result

    def memo_size(self) -> int:
        with self._lock:
            return len(self._memo)

    def to_dot(self) -> str:
        """Explored fragment of the bar graph; matched edges are dashed."""
        from anick.formatters import format_division

        lines = ["digraph bar_graph {", "  rankdir=TB;"]
        nodes = sorted({n for s, t, _ in self.edges for n in (s, t)}, key=lambda d: (len(d), d))
        for node in nodes:
            shape = "box" if match(node, self.pres).critical else "ellipse"
            lines.append(f'  "{format_division(node)}" [shape={shape}];')
        for source, target, style in sorted(self.edges, key=lambda e: (len(e[0]), e)):
            attrs = ' [style=dashed, dir=back]' if style == "matched" else ""
            lines.append(f'  "{format_division(source)}" -> "{format_division(target)}"{attrs};')
        lines.append("}")
        return "\n".join(lines) + "\n"


_ENGINES: Dict[Tuple[str, bool], MorseEngine] = {}
_ENGINES_LOCK = threading.Lock()


def shared_engine(pres: Presentation, memo: bool = True) -> MorseEngine:
    """One engine per presentation digest so the memo is reused across calls."""
    key = (pres.digest(), memo)
    with _ENGINES_LOCK:
        engine = _ENGINES.get(key)
        if engine is None:
            engine = _ENGINES[key] = MorseEngine(pres, memo=memo)
        return engine


def anick_differential(chain: AnickChain, pres: Presentation,
                       memo: bool = True) -> FreeBimoduleElement:
    """δ_{n+1} of a chain in V^(n); δ_1[x] = x[] - []x."""
    return shared_engine(pres, memo).differential(chain)


def augmentation(element: FreeBimoduleElement) -> Fraction:
    """δ_0 on A_0: l[]r maps to ε(l)ε(r)."""
    return sum(
        (c for (l, v, r), c in element if not v and not l and not r), Fraction(0)
    )


@dataclass
class MatchingReport:
    """Outcome of validate_matching on the reachable support."""
    max_degree: int
    vertices: int = 0
    critical: int = 0
    pairs: int = 0


def _check_pair(v: Division, status: MatchStatus, pres: Presentation):
    back = match(status.partner, pres)
    expected = MatchKind.UPPER_OF if status.kind is MatchKind.LOWER_OF else MatchKind.LOWER_OF
    if back.kind is not expected or back.partner != v or back.coef != status.coef:
        raise InvalidMatching(f"Matching is not an involution at {v}", witness=(v, status.partner))
    if not status.coef:
        raise InvalidMatching(f"Matched edge at {v} has zero weight", witness=v)
    upper = status.partner if status.kind is MatchKind.UPPER_OF else v
    lower = v if status.kind is MatchKind.UPPER_OF else status.partner
    weight = bar_differential(upper, pres).coefficient(EMPTY, lower, EMPTY)
    if weight != status.coef:
        raise InvalidMatching(
            f"Matched edge {upper} -> {lower} has weight {weight}, not {status.coef}",
            witness=(upper, lower),
        )


def validate_matching(pres: Presentation, max_degree: int) -> MatchingReport:
    """Check involution, invertible weights and acyclicity on the support
    reached by path tracking from V^(0..max_degree)."""
    report = MatchingReport(max_degree)
    # 0 = unseen, 1 = on the DFS stack, 2 = done
    color: Dict[Division, int] = {}
    successors: Dict[Division, List[Division]] = {}

    def expand(v: Division) -> List[Division]:
        if v in successors:
            return successors[v]
        status = match(v, pres)
        report.vertices += 1
        nxt: List[Division] = []
        if status.kind is MatchKind.CRITICAL:
            report.critical += 1
        else:
            _check_pair(v, status, pres)
            if status.kind is MatchKind.UPPER_OF:
                report.pairs += 1
                nxt = [t for (l, t, r), _ in bar_differential(status.partner, pres)
                       if (l, t, r) != (EMPTY, v, EMPTY)]
        successors[v] = nxt
        return nxt

    for degree in range(max_degree + 1):
        for chain in enumerate_chains(pres, degree):
            roots = sorted(bar_differential(chain.entries, pres).vertices())
            for root in roots:
                if not root or color.get(root) == 2:
                    continue
                stack = [(root, iter(expand(root)))]
                color[root] = 1
                while stack:
                    node, it = stack[-1]
                    child = next(it, None)
                    if child is None:
                        color[node] = 2
                        stack.pop()
                        continue
                    if not child:
                        continue
                    state = color.get(child, 0)
                    if state == 1:
                        cycle = [n for n, _ in stack] + [child]
                        raise InvalidMatching(f"Inverted-edge graph has a cycle through {child}",
                                              witness=cycle)
                    if state == 0:
                        color[child] = 1
                        stack.append((child, iter(expand(child))))
    logger.info("Matching valid to degree %d: %d vertices, %d pairs, %d critical",
                max_degree, report.vertices, report.pairs, report.critical)
    return report
