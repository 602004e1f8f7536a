"""
Brute-force Hochschild cohomology through the normalized bar complex.

No chains and no matching: cochains are maps A^{⊗n} -> M on a finite
basis of normal words, with the standard Hochschild differential.
"""

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Tuple

from anick.errors import CheckFailed, InfiniteDimensional, ResourceLimit
from anick.freealg import Presentation, Word, multiply
from anick.hochschild import FiniteBimodule, make_bimodule, matrix_rank, sparse_matrix, to_fraction, validate_bimodule

logger = logging.getLogger(__name__)

DEFAULT_CAP = 1_000_000


@dataclass(frozen=True)
class FiniteAlgebra:
    """Nonunital algebra A on a basis of normal words with structure constants."""
    basis: Tuple[Word, ...]
    table: Dict[Tuple[int, int], Dict[int, Fraction]]
    presentation: Presentation

    @property
    def dim(self) -> int:
        return len(self.basis)

    def product(self, i: int, j: int) -> Dict[int, Fraction]:
        return self.table[(i, j)]


def finite_basis(pres: Presentation, max_length: int = 32) -> FiniteAlgebra:
    """Enumerate normal words layer by layer until a layer is empty."""
    pres.require_gsb()
    names = sorted(pres.generator_names, key=lambda n: pres.ranks[n])
    layer: List[Word] = [(n,) for n in names if pres.is_normal((n,))]
    words: List[Word] = []
    length = 1
    while layer:
        if length > max_length:
            raise InfiniteDimensional(
                f"{pres} has normal words of every length up to {max_length}"
            )
        words.extend(layer)
        layer = [w + (n,) for w in layer for n in names if pres.is_normal(w + (n,))]
        length += 1
    basis = tuple(sorted(words, key=pres.sort_key))
    index = {w: i for i, w in enumerate(basis)}
    table = {}
    for (i, u), (j, v) in itertools.product(enumerate(basis), repeat=2):
        table[(i, j)] = {index[w]: c for w, c in multiply(u, v, pres)}
    alg = FiniteAlgebra(basis, table, pres)
    check_associativity(alg)
    logger.debug("Finite basis of %s: %d words", pres, len(basis))
    return alg


def _mul_vec(alg: FiniteAlgebra, left: Dict[int, Fraction], right: Dict[int, Fraction]) -> Dict[int, Fraction]:
    out: Dict[int, Fraction] = {}
    for i, a in left.items():
        for j, b in right.items():
            for k, c in alg.table[(i, j)].items():
                out[k] = out.get(k, Fraction(0)) + a * b * c
    return {k: c for k, c in out.items() if c}


def check_associativity(alg: FiniteAlgebra):
    """(ab)c = a(bc) on every basis triple."""
    n = alg.dim
    for i, j, k in itertools.product(range(n), repeat=3):
        left = _mul_vec(alg, alg.table[(i, j)], {k: Fraction(1)})
        right = _mul_vec(alg, {i: Fraction(1)}, alg.table[(j, k)])
        if left != right:
            raise CheckFailed(f"Structure constants not associative on {(i, j, k)}")


def regular_bimodule(alg: FiniteAlgebra) -> FiniteBimodule:
    """Λ = k1 ⊕ A acting on itself; basis (1, basis of A)."""
    d = alg.dim + 1
    pres = alg.presentation
    index = {w: i + 1 for i, w in enumerate(alg.basis)}
    left, right = {}, {}
    for g in pres.generator_names:
        lm = [[Fraction(0)] * d for _ in range(d)]
        rm = [[Fraction(0)] * d for _ in range(d)]
        for col, word in enumerate([()] + list(alg.basis)):
            for w, c in multiply((g,), word, pres):
                lm[index[w]][col] += c
            for w, c in multiply(word, (g,), pres):
                rm[index[w]][col] += c
        left[g], right[g] = lm, rm
    return make_bimodule(d, left, right, pres.generator_names, name="regular")


def bar_cohomology(alg: FiniteAlgebra, M: FiniteBimodule, max_degree: int,
                   cap: int = DEFAULT_CAP) -> List[int]:
    """dim H^n from Hom(A^{⊗n}, M), n = 0..max_degree."""
    pres = alg.presentation
    validate_bimodule(M, pres)
    n_a, d = alg.dim, M.dim
    rows_needed = (n_a ** (max_degree + 1)) * max(d, 1)
    if rows_needed > cap:
        raise ResourceLimit(f"Bar complex needs {rows_needed} rows, cap is {cap}")

    lefts = [M.left_word(w) for w in alg.basis]
    rights = [M.right_word(w) for w in alg.basis]
    ranks = []
    for n in range(max_degree + 1):
        ranks.append(matrix_rank(_bar_coboundary(alg, lefts, rights, d, n)))
    dims = [
        (n_a ** n) * d - ranks[n] - (ranks[n - 1] if n > 0 else 0)
        for n in range(max_degree + 1)
    ]
    logger.info("Bar complex dims of %s with %s: %s", pres, M.name or f"dim {d}", dims)
    return dims


def bar_coboundary_matrix(alg: FiniteAlgebra, M: FiniteBimodule, n: int):
    """Δ^n of the bar complex, exposed for the Δ∘Δ = 0 check."""
    lefts = [M.left_word(w) for w in alg.basis]
    rights = [M.right_word(w) for w in alg.basis]
    return _bar_coboundary(alg, lefts, rights, M.dim, n)


def _bar_coboundary(alg, lefts, rights, d: int, n: int):
    n_a = alg.dim
    cols = list(itertools.product(range(n_a), repeat=n))
    col_pos = {t: i for i, t in enumerate(cols)}
    entries: Dict[int, Dict[int, Fraction]] = {}

    def put(row_tuple: int, col_tuple: int, block, scale):
        for a in range(d):
            row = entries.setdefault(row_tuple * d + a, {})
            for b in range(d):
                value = block(a, b)
                if value:
                    col = col_tuple * d + b
                    row[col] = row.get(col, Fraction(0)) + scale * value

    def identity(a, b):
        return Fraction(1) if a == b else Fraction(0)

    for r, tup in enumerate(itertools.product(range(n_a), repeat=n + 1)):
        first, last = tup[0], tup[-1]
        put(r, col_pos[tup[1:]], lambda a, b: to_fraction(lefts[first][a, b]), Fraction(1))
        for i in range(1, n + 1):
            sign = Fraction(-1 if i % 2 else 1)
            for k, c in alg.table[(tup[i - 1], tup[i])].items():
                put(r, col_pos[tup[:i - 1] + (k,) + tup[i + 1:]], identity, sign * c)
        put(r, col_pos[tup[:-1]], lambda a, b: to_fraction(rights[last][a, b]),
            Fraction(-1 if (n + 1) % 2 else 1))
    return sparse_matrix(entries, ((n_a ** (n + 1)) * d, len(cols) * d))
