"""
Conformal endomorphisms Cend_k and the positive part of their
coefficient algebra.

Cend_k is the space of k×k matrices over k[∂, x] with the λ-product
f(∂, x) ∘_λ g(∂, x) = f(-λ, x) g(∂+λ, x+λ), extended by the row-column
rule. Coefficients a(n), n >= 0, multiply by
a(n) b(m) = Σ_s C(n, s) (a ∘_s b)(n+m-s), with (∂a)(n) = -n a(n-1).
"""

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Dict, Iterator, List, Optional, Tuple

from sympy import Poly, Rational, symbols
from sympy.polys.domains import QQ

from anick.errors import InputError, IsoFailure, LeftPositivePart, RankMismatch
from anick.freealg import FreePoly, normal_form

logger = logging.getLogger(__name__)

D, X, LAM = symbols("d x lam")


def _poly(expr) -> Poly:
    return Poly(expr, D, X, domain=QQ)


def _poly3(expr) -> Poly:
    return Poly(expr, D, X, LAM, domain=QQ)


@dataclass(frozen=True)
class ConformalElement:
    """k×k matrix over QQ[∂, x]; ∂ is the symbol d."""
    k: int
    matrix: Tuple[Tuple[Poly, ...], ...]

    def __post_init__(self):
        if self.k < 1:
            raise InputError(f"Rank must be >= 1, got {self.k}")
        if len(self.matrix) != self.k or any(len(row) != self.k for row in self.matrix):
            raise InputError(f"Matrix is not {self.k}x{self.k}")

    @classmethod
    def scalar(cls, expr) -> "ConformalElement":
        return cls(1, ((_poly(expr),),))

    @classmethod
    def unit(cls, k: int, a: int, b: int, expr=1) -> "ConformalElement":
        """expr placed at matrix position (a, b), 0-indexed."""
        zero = _poly(0)
        return cls(k, tuple(
            tuple(_poly(expr) if (i, j) == (a, b) else zero for j in range(k)) for i in range(k)
        ))

    def entry(self, a: int, b: int) -> Poly:
        return self.matrix[a][b]

    def __add__(self, other: "ConformalElement") -> "ConformalElement":
        _same_rank(self, other)
        return ConformalElement(self.k, tuple(
            tuple(self.matrix[i][j] + other.matrix[i][j] for j in range(self.k)) for i in range(self.k)
        ))

    def scale(self, factor) -> "ConformalElement":
        factor = Rational(str(Fraction(factor)))
        return ConformalElement(self.k, tuple(tuple(p * factor for p in row) for row in self.matrix))

    def times_d(self, power: int = 1) -> "ConformalElement":
        """∂^power · self."""
        factor = _poly(D ** power)
        return ConformalElement(self.k, tuple(tuple(p * factor for p in row) for row in self.matrix))

    def is_zero(self) -> bool:
        return all(p.is_zero for row in self.matrix for p in row)

    def __str__(self) -> str:
        if self.k == 1:
            return str(self.matrix[0][0].as_expr())
        return "[" + "; ".join(", ".join(str(p.as_expr()) for p in row) for row in self.matrix) + "]"


def _same_rank(f: ConformalElement, g: ConformalElement):
    if f.k != g.k:
        raise RankMismatch(f"Cannot combine rank {f.k} with rank {g.k}")


def _at_minus_lambda(p: Poly) -> Poly:
    """f(∂, x) -> f(-λ, x)."""
    result = _poly3(0)
    for (i, j), c in p.terms():
        result += _poly3(c * (-LAM) ** i * X ** j)
    return result


@lru_cache(maxsize=None)
def _shifted(p: Poly) -> Poly:
    """g(∂, x) -> g(∂+λ, x+λ)."""
    result = _poly3(0)
    shifted_d, shifted_x = _poly3(D + LAM), _poly3(X + LAM)
    for (i, j), c in p.terms():
        result += shifted_d ** i * shifted_x ** j * c
    return result


LambdaMatrix = Tuple[Tuple[Poly, ...], ...]


def lambda_product(f: ConformalElement, g: ConformalElement) -> LambdaMatrix:
    """Matrix of polynomials in (∂, x, λ)."""
    _same_rank(f, g)
    k = f.k
    left = [[_at_minus_lambda(f.matrix[i][j]) for j in range(k)] for i in range(k)]
    right = [[_shifted(g.matrix[i][j]) for j in range(k)] for i in range(k)]
    return tuple(
        tuple(sum((left[i][b] * right[b][j] for b in range(k)), _poly3(0)) for j in range(k))
        for i in range(k)
    )


def lambda_degree(product: LambdaMatrix) -> int:
    return max((m[2] for row in product for p in row for m in p.monoms() if not p.is_zero), default=0)


def _lambda_coefficient(p: Poly, s: int) -> Poly:
    terms = {(i, j): c for (i, j, l), c in p.terms() if l == s}
    result = _poly(0)
    for (i, j), c in terms.items():
        result += _poly(c * D ** i * X ** j)
    return result


def s_product(f: ConformalElement, g: ConformalElement, s: int) -> ConformalElement:
    """f ∘_s g = s! times the λ^s coefficient of f ∘_λ g."""
    if s < 0:
        raise InputError(f"s must be >= 0, got {s}")
    product = lambda_product(f, g)
    return ConformalElement(f.k, tuple(
        tuple(_lambda_coefficient(p, s) * factorial(s) for p in row) for row in product
    ))


# Coefficient algebra: keys (a, b, j, n) stand for E_ab x^j (n)
CoeffKey = Tuple[int, int, int, int]


class CoefficientElement:
    """Finite linear combination of E_ab x^j (n) with n >= 0."""

    __slots__ = ("k", "_terms")

    def __init__(self, k: int, terms: Optional[Dict[CoeffKey, Fraction]] = None):
        self.k = k
        self._terms = {key: Fraction(c) for key, c in (terms or {}).items() if c}

    @classmethod
    def monomial(cls, j: int, n: int, k: int = 1, a: int = 0, b: int = 0, coef=1) -> "CoefficientElement":
        if n < 0:
            raise LeftPositivePart(f"Index {n} is negative")
        return cls(k, {(a, b, j, n): Fraction(coef)})

    def __iter__(self) -> Iterator[Tuple[CoeffKey, Fraction]]:
        for key in sorted(self._terms):
            yield key, self._terms[key]

    def __eq__(self, other) -> bool:
        if isinstance(other, CoefficientElement):
            return self.k == other.k and self._terms == other._terms
        return NotImplemented

    def __hash__(self):
        return hash((self.k, frozenset(self._terms.items())))

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __add__(self, other: "CoefficientElement") -> "CoefficientElement":
        terms = dict(self._terms)
        for key, c in other._terms.items():
            terms[key] = terms.get(key, Fraction(0)) + c
        return CoefficientElement(self.k, terms)

    def scale(self, factor) -> "CoefficientElement":
        return CoefficientElement(self.k, {key: c * Fraction(factor) for key, c in self._terms.items()})

    def __mul__(self, other: "CoefficientElement") -> "CoefficientElement":
        if self.k != other.k:
            raise RankMismatch(f"Cannot multiply rank {self.k} by rank {other.k}")
        terms: Dict[CoeffKey, Fraction] = {}
        for (a, b, j, n), c1 in self._terms.items():
            for (b2, d, l, m), c2 in other._terms.items():
                if b != b2:
                    continue
                for (_, _, jj, nn), c in _scalar_product(j, n, l, m):
                    key = (a, d, jj, nn)
                    terms[key] = terms.get(key, Fraction(0)) + c1 * c2 * c
        return CoefficientElement(self.k, terms)

    def __repr__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for (a, b, j, n), c in self:
            unit = f"E{a + 1}{b + 1}·" if self.k > 1 else ""
            base = "1" if j == 0 else ("x" if j == 1 else f"x^{j}")
            parts.append(f"{c}*{unit}{base}({n})")
        return " + ".join(parts)


def _falling(n: int, i: int) -> int:
    out = 1
    for r in range(i):
        out *= n - r
    return out


def _normalize(element: ConformalElement, index: int) -> CoefficientElement:
    """(∂^i x^j)(N) = (-1)^i N(N-1)...(N-i+1) x^j(N-i)."""
    terms: Dict[CoeffKey, Fraction] = {}
    for a in range(element.k):
        for b in range(element.k):
            p = element.matrix[a][b]
            if p.is_zero:
                continue
            for (i, j), c in p.terms():
                value = Fraction(int(c.p), int(c.q)) * (-1) ** i * _falling(index, i)
                if not value:
                    continue
                if index - i < 0:
                    raise LeftPositivePart(f"Nonzero term at index {index - i}")
                key = (a, b, j, index - i)
                terms[key] = terms.get(key, Fraction(0)) + value
    return CoefficientElement(element.k, terms)


def coeff_product(a: ConformalElement, n: int, b: ConformalElement, m: int) -> CoefficientElement:
    """a(n) b(m) = Σ_s C(n, s) (a ∘_s b)(n+m-s)."""
    if n < 0 or m < 0:
        raise LeftPositivePart(f"Indices must be >= 0, got {n} and {m}")
    _same_rank(a, b)
    result = CoefficientElement(a.k)
    product = lambda_product(a, b)
    top = min(n, lambda_degree(product))
    for s in range(top + 1):
        piece = ConformalElement(a.k, tuple(
            tuple(_lambda_coefficient(p, s) * factorial(s) for p in row) for row in product
        ))
        if not piece.is_zero():
            result = result + _normalize(piece, n + m - s).scale(comb(n, s))
    return result


@lru_cache(maxsize=None)
def _scalar_product(j: int, n: int, l: int, m: int) -> Tuple[Tuple[CoeffKey, Fraction], ...]:
    product = coeff_product(ConformalElement.scalar(X ** j), n, ConformalElement.scalar(X ** l), m)
    return tuple(product)


def coeff_actions(u: ConformalElement, a: ConformalElement, n: int) -> Tuple[ConformalElement, ConformalElement]:
    """a(n)·u = a ∘_n u and u·a(n) = Σ_s (-1)^(n+s)/s! ∂^s (u ∘_(n+s) a) in Cend_1."""
    if n < 0:
        raise LeftPositivePart(f"Index {n} is negative")
    _same_rank(u, a)
    left = s_product(a, u, n)
    right = _zero(u.k)
    top = lambda_degree(lambda_product(u, a))
    for s in range(max(top - n + 1, 0)):
        right = right + s_product(u, a, n + s).times_d(s).scale(Fraction((-1) ** (n + s), factorial(s)))
    return left, right


def _zero(k: int) -> ConformalElement:
    return ConformalElement(k, tuple(tuple(_poly(0) for _ in range(k)) for _ in range(k)))


def left_action(a: ConformalElement, n: int, u: ConformalElement) -> ConformalElement:
    return coeff_actions(u, a, n)[0]


def right_action(u: ConformalElement, a: ConformalElement, n: int) -> ConformalElement:
    return coeff_actions(u, a, n)[1]


# Identification with W1: x^a(b) -> p^a q^b and 1(0) -> e

def window_monomials(degree: int) -> List[Tuple[int, int]]:
    """(j, n) with j + n <= degree, in total-degree order."""
    return [(j, t - j) for t in range(degree + 1) for j in range(t, -1, -1)]


def to_weyl(element: CoefficientElement, pres) -> Dict[Tuple[int, int], FreePoly]:
    """Entrywise image in M_k(W1)."""
    out: Dict[Tuple[int, int], FreePoly] = {}
    for (a, b, j, n), c in element:
        word = ("p",) * j + ("q",) * n or ("e",)
        out[(a, b)] = out.get((a, b), FreePoly({}, pres.ranks)) + FreePoly({word: c}, pres.ranks)
    return {key: value for key, value in out.items() if value}


def _weyl_product(j: int, n: int, l: int, m: int, pres) -> FreePoly:
    u = ("p",) * j + ("q",) * n or ("e",)
    v = ("p",) * l + ("q",) * m or ("e",)
    return normal_form(FreePoly({u + v: 1}, pres.ranks), pres)


@dataclass
class IsoCertificate:
    rank: int
    window: int
    pairs_checked: int


def weyl_iso_check(window: int, rank: int = 1, pres=None) -> IsoCertificate:
    """Compare coefficient products with W1 products on all monomial pairs of degree <= window."""
    if window < 2:
        raise InputError(f"Window must be >= 2, got {window}")
    if pres is None:
        from anick.weyl_showcase import w1_presentation
        pres = w1_presentation()
    monomials = window_monomials(window)
    units = list(itertools.product(range(rank), repeat=2))
    checked = 0
    for (j, n), (l, m) in itertools.product(monomials, repeat=2):
        expected = _weyl_product(j, n, l, m, pres)
        for (a, b), (c, d) in itertools.product(units, repeat=2):
            left = CoefficientElement.monomial(j, n, rank, a, b)
            right = CoefficientElement.monomial(l, m, rank, c, d)
            got = to_weyl(left * right, pres)
            want = {(a, d): expected} if b == c and expected else {}
            checked += 1
            if got != want:
                raise IsoFailure(((a, b, j, n), (c, d, l, m), got, want))
    logger.info("Coefficient algebra of Cend_%d agrees with M_%d(W1) on %d pairs", rank, rank, checked)
    return IsoCertificate(rank, window, checked)


def associativity_check(total_degree: int = 5) -> int:
    """(uv)w = u(vw) for monomial triples whose degrees sum to at most total_degree."""
    monomials = window_monomials(total_degree)
    checked = 0
    for first, second, third in itertools.product(monomials, repeat=3):
        if sum(first) + sum(second) + sum(third) > total_degree:
            continue
        u = CoefficientElement.monomial(*first)
        v = CoefficientElement.monomial(*second)
        w = CoefficientElement.monomial(*third)
        if (u * v) * w != u * (v * w):
            raise IsoFailure(("associativity", first, second, third))
        checked += 1
    return checked


def bimodule_check(window: int = 2, max_index: int = 2) -> int:
    """(a(n)·u)·b(m) = a(n)·(u·b(m)) for monomials ∂^i x^j of degree <= window."""
    monos = [ConformalElement.scalar(D ** i * X ** j)
             for i, j in itertools.product(range(window + 1), repeat=2) if i + j <= window]
    coefs = [ConformalElement.scalar(X ** j) for j in range(window + 1)]
    checked = 0
    for u in monos:
        for a, b in itertools.product(coefs, repeat=2):
            for n, m in itertools.product(range(max_index + 1), repeat=2):
                one = right_action(left_action(a, n, u), b, m)
                two = left_action(a, n, right_action(u, b, m))
                if not (one + two.scale(-1)).is_zero():
                    raise IsoFailure(("bimodule", str(a), n, str(u), str(b), m))
                checked += 1
    return checked


def weyl_relation_holds() -> bool:
    """t·x = x·t + 1 in the coefficient algebra of Cend_1, with t = 1(1), x = x(0), 1 = 1(0)."""
    one = ConformalElement.scalar(1)
    x = ConformalElement.scalar(X)
    commutator = coeff_product(one, 1, x, 0) + coeff_product(x, 0, one, 1).scale(-1)
    return commutator == CoefficientElement.monomial(0, 0)
