"""
Anick resolutions (A_•, δ_•) as immutable snapshots.
"""

import logging
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Mapping, Optional, Tuple

from anick.chains import AnickChain, enumerate_chains
from anick.errors import CompositionNonzero
from anick.freealg import Presentation
from anick.morse import FreeBimoduleElement, MorseEngine, augmentation, shared_engine

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ResolutionSlice:
    """δ_degree : A_degree -> A_(degree-1), with basis V^(degree-1)."""
    degree: int
    basis: Tuple[AnickChain, ...]
    differential: Mapping[AnickChain, FreeBimoduleElement]

    def __iter__(self) -> Iterator[Tuple[AnickChain, FreeBimoduleElement]]:
        for chain in self.basis:
            yield chain, self.differential[chain]

    def __eq__(self, other) -> bool:
        if not isinstance(other, ResolutionSlice):
            return NotImplemented
        return (self.degree == other.degree and self.basis == other.basis
                and dict(self.differential) == dict(other.differential))

    def __hash__(self):
        return hash((self.degree, self.basis))


@dataclass
class CompositionReport:
    """Residues of δ_(degree-1)∘δ_degree per chain (δ_0 is the augmentation)."""
    degree: int
    residues: Dict[AnickChain, object] = field(default_factory=dict)

    @property
    def failures(self) -> Dict[AnickChain, object]:
        return {c: r for c, r in self.residues.items() if r}

    @property
    def passed(self) -> bool:
        return not self.failures


@dataclass(frozen=True)
class Resolution:
    """Slices δ_1..δ_max_degree of one presentation."""
    presentation_hash: str
    max_degree: int
    slices: Tuple[ResolutionSlice, ...]
    reports: Tuple[CompositionReport, ...] = field(default=(), compare=False)

    def slice(self, degree: int) -> ResolutionSlice:
        if not 1 <= degree <= self.max_degree:
            raise KeyError(f"Degree {degree} outside 1..{self.max_degree}")
        return self.slices[degree - 1]

    def __getitem__(self, degree: int) -> ResolutionSlice:
        return self.slice(degree)

    def __iter__(self) -> Iterator[ResolutionSlice]:
        return iter(self.slices)

    def __len__(self) -> int:
        return len(self.slices)


def check_composition(upper: ResolutionSlice, lower: Optional[ResolutionSlice],
                      pres: Presentation) -> CompositionReport:
    """Expand lower∘upper on every chain of upper; lower=None means δ_0."""
    report = CompositionReport(upper.degree)
    for chain, image in upper:
        if lower is None:
            report.residues[chain] = augmentation(image)
            continue
        residue = FreeBimoduleElement()
        for (left, target, right), coef in image:
            step = lower.differential[AnickChain(target)]
            residue = residue + step.act(left, right, pres).scale(coef)
        report.residues[chain] = residue
    return report


class ResolutionCache:
    """Snapshots keyed by (presentation hash, max degree)."""

    def __init__(self):
        self._table: Dict[Tuple[str, int], Resolution] = {}
        self._lock = threading.Lock()

    def lookup(self, digest: str, max_degree: int) -> Optional[Resolution]:
        with self._lock:
            hit = self._table.get((digest, max_degree))
            if hit is not None:
                return hit
            # a longer build contains every shorter one
            for (d, n), res in self._table.items():
                if d == digest and n > max_degree:
                    return truncate(res, max_degree)
        return None

    def store(self, res: Resolution) -> Resolution:
        with self._lock:
            return self._table.setdefault((res.presentation_hash, res.max_degree), res)

    def clear(self):
        with self._lock:
            self._table.clear()


_CACHE = ResolutionCache()


def truncate(res: Resolution, max_degree: int) -> Resolution:
    return Resolution(
        res.presentation_hash, max_degree, res.slices[:max_degree],
        tuple(r for r in res.reports if r.degree <= max_degree),
    )


def _build_slice(degree: int, engine: MorseEngine, workers: int,
                 progress=None) -> ResolutionSlice:
    basis = enumerate_chains(engine.pres, degree - 1)
    task = None
    if progress is not None:
        task = progress.add_task(f"δ_{degree} on {len(basis)} chains", total=len(basis))

    def compute(chain: AnickChain) -> FreeBimoduleElement:
        image = engine.differential(chain)
        if task is not None:
            progress.advance(task)
        return image

    if workers > 1 and len(basis) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            images = list(pool.map(compute, basis))
    else:
        images = [compute(c) for c in basis]
    return ResolutionSlice(degree, basis, dict(zip(basis, images)))


def build_resolution(pres: Presentation, max_degree: int, workers: int = 1,
                     memo: bool = True, progress=None, use_cache: bool = True) -> Resolution:
    """Compute δ_1..δ_max_degree and verify δδ = 0 between neighbours.

    Raises CompositionNonzero on the first chain with a nonzero residue.
    """
    if max_degree < 1:
        raise ValueError(f"max_degree must be >= 1, got {max_degree}")
    pres.require_gsb()
    digest = pres.digest()
    if use_cache and memo:
        cached = _CACHE.lookup(digest, max_degree)
        if cached is not None:
            logger.debug("Resolution cache hit for %s up to %d", pres, max_degree)
            return cached

    engine = shared_engine(pres, memo) if memo else MorseEngine(pres, memo=False)
    slices: List[ResolutionSlice] = []
    reports: List[CompositionReport] = []
    for degree in range(1, max_degree + 1):
        current = _build_slice(degree, engine, workers, progress)
        report = check_composition(current, slices[-1] if slices else None, pres)
        if not report.passed:
            chain, residue = next(iter(report.failures.items()))
            raise CompositionNonzero(chain, residue)
        slices.append(current)
        reports.append(report)
        logger.info("δ_%d: %d chains, δδ = 0 verified", degree, len(current.basis))

    res = Resolution(digest, max_degree, tuple(slices), tuple(reports))
    if use_cache and memo:
        res = _CACHE.store(res)
    return res


def composition_residue_count(res: Resolution) -> int:
    """Number of (chain, degree) residues that were checked, bottom included."""
    return sum(len(r.residues) for r in res.reports)
