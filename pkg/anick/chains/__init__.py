"""
Anick chains V^(n) of a verified presentation.

A division [w0|w1|...|wn] is a chain when w0 is a letter and every
adjacent pair w(i-1)w(i) contains exactly one obstruction, occurring as
a suffix that starts inside w(i-1).
"""

import logging
import threading
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from anick.freealg import Presentation, Word

logger = logging.getLogger(__name__)

Division = Tuple[Word, ...]


@dataclass(frozen=True)
class AnickChain:
    """A chain with its marked division; degree = number of entries - 1."""
    entries: Division

    @property
    def degree(self) -> int:
        return len(self.entries) - 1

    @property
    def word(self) -> Word:
        return tuple(c for entry in self.entries for c in entry)

    def __str__(self) -> str:
        from anick.formatters import format_division
        return format_division(self.entries)


def completes(prev: Word, tail: Word, pres: Presentation) -> bool:
    """True if tail hooks onto prev as the next chain entry."""
    if not tail or not prev:
        return False
    joined = prev + tail
    hits = pres.obstruction_occurrences(joined)
    if len(hits) != 1:
        return False
    start, lhs = hits[0]
    return start + len(lhs) == len(joined) and start < len(prev)


def completing_prefix(prev: Word, word: Word, pres: Presentation) -> Optional[Word]:
    """Shortest prefix of word that hooks onto prev, if any."""
    for cut in range(1, len(word) + 1):
        if completes(prev, word[:cut], pres):
            return word[:cut]
    return None


def chain_prefix_length(entries: Sequence[Word], pres: Presentation) -> int:
    """Largest k such that the first k entries form an Anick chain."""
    if not entries or len(entries[0]) != 1:
        return 0
    k = 1
    while k < len(entries) and completes(entries[k - 1], entries[k], pres):
        k += 1
    return k


def is_chain(entries: Sequence[Word], pres: Presentation) -> Tuple[bool, Optional[int]]:
    """Membership test for V^(n); returns (True, n) or (False, None)."""
    entries = tuple(tuple(e) for e in entries)
    if not entries or any(not e for e in entries):
        return False, None
    if chain_prefix_length(entries, pres) == len(entries):
        return True, len(entries) - 1
    return False, None


def _tails(prev: Word, pres: Presentation) -> List[Word]:
    found = []
    for lhs in pres.obstructions:
        for split in range(1, min(len(lhs), len(prev) + 1)):
            if prev[len(prev) - split:] == lhs[:split]:
                tail = lhs[split:]
                if tail not in found and completes(prev, tail, pres):
                    found.append(tail)
    return found


class ChainCache:
    """Synchronized memo of enumerated chains keyed by (presentation digest, degree)."""

    def __init__(self):
        self._table: Dict[Tuple[str, int], Tuple[AnickChain, ...]] = {}
        self._lock = threading.Lock()

    def get(self, key):
        with self._lock:
            return self._table.get(key)

    def put(self, key, chains):
        with self._lock:
            # first writer wins; values are identical anyway
            return self._table.setdefault(key, chains)

    def clear(self):
        with self._lock:
            self._table.clear()


_CACHE = ChainCache()


def _ordered(chains: List[AnickChain], pres: Presentation) -> Tuple[AnickChain, ...]:
    return tuple(sorted(
        chains,
        key=lambda c: (pres.sort_key(c.word), tuple(len(e) for e in c.entries)),
    ))


def _quadratic_chains(pres: Presentation, degree: int) -> List[AnickChain]:
    # paths with `degree` edges in the graph x -> y iff xy is an obstruction
    edges: Dict[str, List[str]] = {n: [] for n in pres.generator_names}
    for lhs in pres.obstructions:
        edges[lhs[0]].append(lhs[1])
    paths = [[n] for n in pres.generator_names]
    for _ in range(degree):
        paths = [p + [y] for p in paths for y in edges[p[-1]]]
    return [AnickChain(tuple((c,) for c in p)) for p in paths]


def _hooked_chains(pres: Presentation, degree: int) -> List[AnickChain]:
    chains = [AnickChain(((n,),)) for n in pres.generator_names]
    for _ in range(degree):
        chains = [
            AnickChain(c.entries + (tail,))
            for c in chains
            for tail in _tails(c.entries[-1], pres)
        ]
    return chains


def enumerate_chains(pres: Presentation, degree: int,
                     quadratic_fast_path: bool = True) -> Tuple[AnickChain, ...]:
    """V^(degree) in deg-lex order of the word, then by division.

    degree = -1 yields the single empty chain spanning A_0 = Λ⊗Λ.
    """
    if degree < -1:
        raise ValueError(f"Chain degree must be >= -1, got {degree}")
    if degree == -1:
        return (AnickChain(()),)
    pres.require_gsb()
    fast = quadratic_fast_path and pres.is_quadratic()
    key = (pres.digest() + (":q" if fast else ":h"), degree)
    cached = _CACHE.get(key)
    if cached is not None:
        return cached
    found = _quadratic_chains(pres, degree) if fast else _hooked_chains(pres, degree)
    chains = _ordered(found, pres)
    logger.debug("V^(%d) of %r: %d chains", degree, pres, len(chains))
    return _CACHE.put(key, chains)


def chain_graph_paths(pres: Presentation, degree: int) -> int:
    """Number of paths with `degree` edges in the obstruction graph (quadratic case)."""
    return len(_quadratic_chains(pres, degree))
