"""
Hochschild cohomology H^n(A, M) from the Anick resolution.

Cochains C^n = Hom(A_n, M) are identified with M^{V^(n-1)}; vectors are
laid out chain-major, coordinate-minor. The coboundary Δ^n φ = φ∘δ_{n+1}
is assembled as a sparse rational matrix and ranks are taken with sympy's
exact elimination over QQ.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from sympy import ImmutableMatrix, Matrix, Rational, eye, zeros
from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

from anick.chains import AnickChain, enumerate_chains
from anick.errors import ActionsDontCommute, CompositionNonzero, InputError, NotIdempotent, RelationViolated
from anick.freealg import Presentation, Word
from anick.resolution import Resolution, ResolutionSlice, build_resolution

logger = logging.getLogger(__name__)


def to_fraction(value) -> Fraction:
    """sympy Rational or QQ element to Fraction."""
    if hasattr(value, "p") and hasattr(value, "q"):
        return Fraction(int(value.p), int(value.q))
    return Fraction(int(value.numerator), int(value.denominator))


def rational_matrix(rows: Sequence[Sequence]) -> ImmutableMatrix:
    return ImmutableMatrix([[Rational(str(Fraction(x))) for x in row] for row in rows])


def sparse_matrix(entries: Mapping[int, Mapping[int, Fraction]], shape: Tuple[int, int]) -> DomainMatrix:
    """Dict-of-dicts of Fractions to a sparse DomainMatrix over QQ."""
    dod = {}
    for i, row in entries.items():
        clean = {j: QQ(v.numerator, v.denominator) for j, v in row.items() if v}
        if clean:
            dod[i] = clean
    return DomainMatrix(dod, shape, QQ)


def matrix_rank(matrix: DomainMatrix) -> int:
    rows, cols = matrix.shape
    if rows == 0 or cols == 0:
        return 0
    return matrix.rank()


def is_zero(matrix) -> bool:
    if isinstance(matrix, DomainMatrix):
        matrix = matrix.to_Matrix()
    return all(x == 0 for x in matrix)


@dataclass(frozen=True)
class FiniteBimodule:
    """d-dimensional bimodule with one left and one right matrix per generator.

    The unit of Λ acts by the identity on both sides.
    """
    dim: int
    left: Mapping[str, ImmutableMatrix]
    right: Mapping[str, ImmutableMatrix]
    name: str = ""

    def left_word(self, word: Word) -> ImmutableMatrix:
        """L(x1...xk) = L(x1)...L(xk)."""
        return reduce(lambda acc, x: acc * self.left[x], word, ImmutableMatrix(eye(self.dim)))

    def right_word(self, word: Word) -> ImmutableMatrix:
        """R(y1...yk) = R(yk)...R(y1), since m·(y1 y2) = (m·y1)·y2."""
        return reduce(lambda acc, y: self.right[y] * acc, word, ImmutableMatrix(eye(self.dim)))

    def block(self, left: Word, right: Word) -> ImmutableMatrix:
        return self.left_word(left) * self.right_word(right)


def make_bimodule(dim: int, left: Mapping[str, Sequence[Sequence]],
                  right: Mapping[str, Sequence[Sequence]], generators: Sequence[str],
                  name: str = "") -> FiniteBimodule:
    """Build a bimodule; missing generators act by zero."""
    if dim < 0:
        raise InputError(f"Bimodule dimension must be >= 0, got {dim}")
    for side, table in (("left", left), ("right", right)):
        unknown = set(table) - set(generators)
        if unknown:
            raise InputError(f"{side} action names unknown generators {sorted(unknown)}")
        for gen, rows in table.items():
            if len(rows) != dim or any(len(r) != dim for r in rows):
                raise InputError(f"{side} matrix of {gen} is not {dim}x{dim}")
    zero = ImmutableMatrix(zeros(dim, dim))
    return FiniteBimodule(
        dim,
        {g: rational_matrix(left[g]) if g in left else zero for g in generators},
        {g: rational_matrix(right[g]) if g in right else zero for g in generators},
        name,
    )


def trivial_bimodule(pres: Presentation, dim: int = 1) -> FiniteBimodule:
    """All generators act by zero."""
    return make_bimodule(dim, {}, {}, pres.generator_names, name=f"trivial{dim}")


@dataclass
class BimoduleReport:
    violations: List[Exception] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations


def validate_bimodule(M: FiniteBimodule, pres: Presentation,
                      raise_on_failure: bool = True) -> BimoduleReport:
    """Relations on both sides and commuting actions."""
    report = BimoduleReport()
    for gen in pres.generator_names:
        for side, table in (("left", M.left), ("right", M.right)):
            if gen not in table or table[gen].shape != (M.dim, M.dim):
                report.violations.append(InputError(f"{side} action of {gen} missing or not square"))
    if report.violations:
        if raise_on_failure:
            raise report.violations[0]
        return report

    from anick.formatters import format_poly, format_word

    for rule in pres.rules:
        rhs_left = reduce(lambda acc, t: acc + M.left_word(t[0]) * Rational(str(t[1])), rule.rhs,
                          ImmutableMatrix(zeros(M.dim, M.dim)))
        rhs_right = reduce(lambda acc, t: acc + M.right_word(t[0]) * Rational(str(t[1])), rule.rhs,
                           ImmutableMatrix(zeros(M.dim, M.dim)))
        text = f"{format_word(rule.lhs)} = {format_poly(rule.rhs)}"
        if M.left_word(rule.lhs) != rhs_left:
            report.violations.append(RelationViolated(text, "left"))
        if M.right_word(rule.lhs) != rhs_right:
            report.violations.append(RelationViolated(text, "right"))
    for x in pres.generator_names:
        for y in pres.generator_names:
            if M.left[x] * M.right[y] != M.right[y] * M.left[x]:
                report.violations.append(ActionsDontCommute((x, y)))
    if report.violations and raise_on_failure:
        raise report.violations[0]
    return report


@dataclass(frozen=True)
class CochainSpace:
    """C^degree = M^{V^(degree-1)}."""
    degree: int
    basis: Tuple[AnickChain, ...]
    module_dim: int

    @property
    def dimension(self) -> int:
        return len(self.basis) * self.module_dim

    def index(self, chain_position: int, coordinate: int) -> int:
        return chain_position * self.module_dim + coordinate


def cochain_space(pres: Presentation, degree: int, M: FiniteBimodule,
                  reverse: bool = False) -> CochainSpace:
    basis = enumerate_chains(pres, degree - 1)
    if reverse:
        basis = tuple(reversed(basis))
    return CochainSpace(degree, basis, M.dim)


def coboundary_matrix(upper: ResolutionSlice, M: FiniteBimodule, pres: Presentation,
                      reverse: bool = False) -> DomainMatrix:
    """Δ^n : C^n -> C^(n+1) where upper is δ_(n+1)."""
    n = upper.degree - 1
    source = cochain_space(pres, n, M, reverse)
    target = cochain_space(pres, n + 1, M, reverse)
    col_of = {chain: i for i, chain in enumerate(source.basis)}
    entries: Dict[int, Dict[int, Fraction]] = {}
    blocks: Dict[Tuple[Word, Word], ImmutableMatrix] = {}
    d = M.dim
    for row_pos, chain in enumerate(target.basis):
        for (left, vertex, right), coef in upper.differential[chain]:
            key = (left, right)
            if key not in blocks:
                blocks[key] = M.block(left, right)
            block = blocks[key]
            col_pos = col_of[AnickChain(vertex)]
            for a in range(d):
                row = entries.setdefault(target.index(row_pos, a), {})
                for b in range(d):
                    value = block[a, b]
                    if value:
                        col = source.index(col_pos, b)
                        row[col] = row.get(col, Fraction(0)) + coef * to_fraction(value)
    return sparse_matrix(entries, (target.dimension, source.dimension))


@dataclass
class CohomologyResult:
    dims: List[int]
    cochain_dims: List[int]
    ranks: List[int]
    matrices: List[DomainMatrix] = field(default_factory=list, repr=False)


def _coboundaries(pres: Presentation, M: FiniteBimodule, max_degree: int, workers: int,
                  memo: bool, reverse: bool, progress=None) -> Tuple[Resolution, List[DomainMatrix]]:
    validate_bimodule(M, pres)
    res = build_resolution(pres, max_degree + 1, workers=workers, memo=memo, progress=progress)
    return res, [coboundary_matrix(res[n + 1], M, pres, reverse) for n in range(max_degree + 1)]


def cohomology_dims(pres: Presentation, M: FiniteBimodule, max_degree: int,
                    workers: int = 1, memo: bool = True, reverse_basis: bool = False,
                    check_squares: bool = True, progress=None) -> CohomologyResult:
    """dim H^n = dim C^n - rank Δ^n - rank Δ^(n-1), n = 0..max_degree."""
    if max_degree < 0:
        raise InputError(f"max_degree must be >= 0, got {max_degree}")
    _, mats = _coboundaries(pres, M, max_degree, workers, memo, reverse_basis, progress)
    if check_squares:
        for n in range(len(mats) - 1):
            upper, lower = mats[n + 1], mats[n]
            if 0 in (upper.shape[0], lower.shape[0], lower.shape[1]):
                continue
            if not is_zero(upper * lower):
                raise CompositionNonzero(f"Δ^{n + 1}Δ^{n}", "nonzero matrix")
    ranks = [matrix_rank(m) for m in mats]
    cochain_dims = [m.shape[1] for m in mats]
    dims = [
        cochain_dims[n] - ranks[n] - (ranks[n - 1] if n > 0 else 0)
        for n in range(max_degree + 1)
    ]
    logger.info("Hochschild dims of %s with %s: %s", pres, M.name or f"dim {M.dim}", dims)
    return CohomologyResult(dims, cochain_dims, ranks, mats)


def _span_rank(vectors: List[List]) -> int:
    if not vectors:
        return 0
    return Matrix(vectors).rank()


def cohomology_basis(pres: Presentation, M: FiniteBimodule, degree: int,
                     memo: bool = True) -> List[Tuple[Fraction, ...]]:
    """Cocycles whose classes form a basis of H^degree."""
    _, mats = _coboundaries(pres, M, degree, 1, memo, False)
    delta = mats[degree]
    width = delta.shape[1]
    if width == 0:
        return []
    if delta.shape[0] == 0:
        kernel = [list(row) for row in eye(width).tolist()]
    else:
        kernel = [list(v) for v in delta.to_Matrix().nullspace()]
    image: List[List] = []
    if degree > 0:
        previous = mats[degree - 1].to_Matrix()
        image = [list(previous.col(j)) for j in range(previous.shape[1])]
        image = [v for v in image if any(x != 0 for x in v)]
    chosen: List[List] = []
    base = _span_rank(image)
    for vector in kernel:
        if _span_rank(image + chosen + [vector]) > base + len(chosen):
            chosen.append(vector)
    return [tuple(to_fraction(x) for x in v) for v in chosen]


PEIRCE_TYPES = ((1, 1), (1, 0), (0, 1), (0, 0))


def _restrict(action: ImmutableMatrix, basis: Matrix, projector: ImmutableMatrix) -> ImmutableMatrix:
    image = action * basis
    if projector * image != image:
        raise InputError("Peirce component is not stable under the action")
    gram = (basis.T * basis).inv()
    return ImmutableMatrix(gram * basis.T * image)


def peirce_decompose(M: FiniteBimodule, pres: Presentation,
                     idempotent: Optional[str] = None) -> Dict[Tuple[int, int], FiniteBimodule]:
    """Split M into M_ij with e·m = i·m and m·e = j·m."""
    e = idempotent or pres.idempotent
    if e is None:
        raise InputError("No idempotent generator designated")
    if e not in M.left:
        raise InputError(f"Unknown idempotent generator {e!r}")
    le, re = M.left[e], M.right[e]
    if le * le != le or re * re != re:
        raise NotIdempotent(f"{e} does not act by an idempotent on both sides")
    identity = ImmutableMatrix(eye(M.dim))
    side = {1: (le, re), 0: (identity - le, identity - re)}
    parts: Dict[Tuple[int, int], FiniteBimodule] = {}
    for i, j in PEIRCE_TYPES:
        projector = ImmutableMatrix(side[i][0] * side[j][1])
        columns = Matrix(projector).columnspace()
        if not columns:
            parts[(i, j)] = make_bimodule(0, {}, {}, pres.generator_names, name=f"M{i}{j}")
            continue
        basis = Matrix.hstack(*columns)
        parts[(i, j)] = FiniteBimodule(
            len(columns),
            {g: _restrict(M.left[g], basis, projector) for g in pres.generator_names},
            {g: _restrict(M.right[g], basis, projector) for g in pres.generator_names},
            name=f"M{i}{j}",
        )
        validate_bimodule(parts[(i, j)], pres)
    total = sum(p.dim for p in parts.values())
    if total != M.dim:
        raise NotIdempotent(f"Peirce components have total dimension {total}, expected {M.dim}")
    return parts
