"""
Text formatters for words, chains, polynomials and bimodule elements.

Plain strings are produced for the result stream; the `style_*` helpers
add rich markup for console tables and panels only.
"""

from fractions import Fraction
from typing import Any, Iterable, Sequence, Tuple


def format_fraction(value: Any) -> str:
    """Rationals as "p" or "p/q"."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def format_word(word: Sequence[str]) -> str:
    """Concatenate single-letter names, otherwise join with '*'."""
    if all(len(c) == 1 for c in word):
        return "".join(word)
    return "*".join(word)


def format_division(entries: Sequence[Sequence[str]]) -> str:
    return "[" + "|".join(format_word(e) for e in entries) + "]"


def format_compact_division(entries: Sequence[Sequence[str]]) -> str:
    """Bar-free notation used by the W1 reference tables, e.g. [qpe]."""
    return "[" + "".join(format_word(e) for e in entries) + "]"


def _signed(parts: Iterable[Tuple[Fraction, str]]) -> str:
    out = []
    for coef, body in parts:
        sign = "-" if coef < 0 else "+"
        mag = abs(coef)
        text = body if mag == 1 and body else (
            f"{format_fraction(mag)}{body}" if body else format_fraction(mag)
        )
        if not out:
            out.append(("-" if sign == "-" else "") + text)
        else:
            out.append(f" {sign} {text}")
    return "".join(out) if out else "0"


def format_poly(poly) -> str:
    """Human form such as 'pq + e'; the empty word prints as 1."""
    return _signed((c, format_word(w) or "1") for w, c in poly)


def format_term(coef: Fraction, left, entries, right) -> str:
    """CLI form coef*left[chain]right."""
    return f"{format_fraction(coef)}*{format_word(left)}{format_division(entries)}{format_word(right)}"


def format_element(element, compact: bool = False) -> str:
    """Bimodule element; compact=True drops the bars and unit coefficients."""
    if compact:
        return _signed(
            (c, f"{format_word(l)}{format_compact_division(v)}{format_word(r)}")
            for (l, v, r), c in element
        )
    terms = [format_term(c, l, v, r) for (l, v, r), c in element]
    return " + ".join(terms) if terms else "0"


def style_verdict(ok: bool, yes: str = "OK", no: str = "FAIL") -> str:
    """Rich markup for a pass/fail verdict."""
    return f"[green]{yes}[/green]" if ok else f"[red]{no}[/red]"


def escape(text: str) -> str:
    """Escape square brackets so rich does not read chains as markup."""
    from rich.markup import escape as rich_escape
    return rich_escape(text)
