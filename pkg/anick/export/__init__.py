"""
JSON readers and writers for presentations, bimodules and resolutions.
"""

import json
import logging
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from rich.console import Console
from rich.progress import Progress, SpinnerColumn, TextColumn

from anick.chains import AnickChain
from anick.errors import InputError
from anick.formatters import format_division, format_fraction, format_word
from anick.freealg import Presentation, Word
from anick.hochschild import FiniteBimodule, make_bimodule
from anick.morse import FreeBimoduleElement
from anick.resolution import Resolution, ResolutionSlice

logger = logging.getLogger(__name__)

RESOLUTION_FORMAT = "anick-resolution/1"

PathLike = Union[str, Path]


class FractionEncoder(json.JSONEncoder):
    """Write Fraction values as "p" or "p/q" strings."""
    def default(self, obj):
        if isinstance(obj, Fraction):
            return format_fraction(obj)
        return super(FractionEncoder, self).default(obj)


def read_json(path: PathLike) -> Any:
    file_path = Path(path)
    if not file_path.exists():
        raise InputError(f"File not found: {file_path}")
    try:
        with open(file_path, "r", encoding="utf-8") as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise InputError(f"Invalid JSON in {file_path}: {e}") from e


def _write_json(payload: Any, path: PathLike, description: str, console: Optional[Console] = None):
    with Progress(
        SpinnerColumn(),
        TextColumn("[progress.description]{task.description}"),
        console=console or Console(stderr=True),
        transient=True,
    ) as progress:
        task = progress.add_task(description, total=None)
        file_path = Path(path)
        file_path.parent.mkdir(parents=True, exist_ok=True)
        with open(file_path, "w", encoding="utf-8") as f:
            json.dump(payload, f, cls=FractionEncoder, indent=2, ensure_ascii=False)
            f.write("\n")
        progress.update(task, description=f"✅ Wrote {file_path}")
    logger.info("Wrote %s", path)


def parse_coefficient(text: Any) -> Fraction:
    """Coefficients arrive as decimal strings of rationals; ints are tolerated."""
    if isinstance(text, bool) or not isinstance(text, (str, int)):
        raise InputError(f"Coefficient must be a string such as \"3/2\", got {text!r}")
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as e:
        raise InputError(f"Bad coefficient {text!r}: {e}") from e


def _read_word(text: str, generators: List[str], pres: Optional[Presentation] = None) -> Word:
    if not isinstance(text, str):
        raise InputError(f"Word must be a string, got {text!r}")
    if not text:
        return ()
    if "*" in text:
        letters = tuple(text.split("*"))
        unknown = [c for c in letters if c not in generators]
        if unknown:
            raise InputError(f"Unknown generators {unknown} in word {text!r}")
        return letters
    if pres is not None:
        return pres.word(text)
    if all(len(g) == 1 for g in generators):
        unknown = [c for c in text if c not in generators]
        if unknown:
            raise InputError(f"Unknown generators {unknown} in word {text!r}")
        return tuple(text)
    if text in generators:
        return (text,)
    raise InputError(f"Multi-letter generator words must be written with '*': {text!r}")


def presentation_from_dict(data: Dict[str, Any], name: str = "") -> Presentation:
    if not isinstance(data, dict):
        raise InputError("Presentation JSON must be an object")
    generators = data.get("generators")
    if not isinstance(generators, list) or not all(isinstance(g, str) and g for g in generators):
        raise InputError("'generators' must be a list of nonempty names, greatest first")
    relations = []
    for i, rel in enumerate(data.get("relations", [])):
        if not isinstance(rel, dict) or "lhs" not in rel:
            raise InputError(f"Relation {i} needs an 'lhs'")
        lhs = _read_word(rel["lhs"], generators)
        rhs: Dict[Word, Fraction] = {}
        for term in rel.get("rhs", []):
            if not isinstance(term, dict) or "word" not in term or "coef" not in term:
                raise InputError(f"Relation {i}: every rhs term needs 'coef' and 'word'")
            word = _read_word(term["word"], generators)
            rhs[word] = rhs.get(word, Fraction(0)) + parse_coefficient(term["coef"])
        relations.append((lhs, {w: c for w, c in rhs.items() if c}))
    return Presentation(generators, relations, idempotent=data.get("idempotent"),
                        name=data.get("name", name))


def load_presentation(path: PathLike) -> Presentation:
    """Read a presentation file; generator order is the list order, greatest first."""
    data = read_json(path)
    pres = presentation_from_dict(data, name=Path(path).stem)
    logger.debug("Loaded %s from %s", pres, path)
    return pres


def dump_presentation(pres: Presentation, path: PathLike, console: Optional[Console] = None):
    payload = pres.to_dict()
    if pres.name:
        payload["name"] = pres.name
    _write_json(payload, path, "Writing presentation...", console)


def _read_matrix(rows: Any, dim: int, where: str) -> List[List[Fraction]]:
    if not isinstance(rows, list) or len(rows) != dim:
        raise InputError(f"{where}: expected {dim} rows")
    out = []
    for row in rows:
        if not isinstance(row, list) or len(row) != dim:
            raise InputError(f"{where}: expected {dim} columns in every row")
        out.append([parse_coefficient(x) for x in row])
    return out


def load_bimodule(path: PathLike, pres: Presentation) -> FiniteBimodule:
    """Read {"dim", "left", "right"}; absent generators act by zero."""
    data = read_json(path)
    if not isinstance(data, dict) or not isinstance(data.get("dim"), int) or data["dim"] < 0:
        raise InputError(f"{path}: 'dim' must be a nonnegative integer")
    dim = data["dim"]
    sides = {}
    for side in ("left", "right"):
        table = data.get(side, {})
        if not isinstance(table, dict):
            raise InputError(f"{path}: '{side}' must map generators to matrices")
        unknown = [g for g in table if g not in pres.ranks]
        if unknown:
            raise InputError(f"{path}: unknown generators {unknown} in '{side}'")
        sides[side] = {g: _read_matrix(m, dim, f"{path} {side}[{g}]") for g, m in table.items()}
    return make_bimodule(dim, sides["left"], sides["right"], pres.generator_names,
                         name=data.get("name", Path(path).stem))


def _element_records(element: FreeBimoduleElement) -> List[Dict[str, Any]]:
    return [
        {"coef": c, "left": format_word(l), "chain": format_division(v), "right": format_word(r)}
        for (l, v, r), c in element
    ]


def resolution_to_dict(res: Resolution) -> Dict[str, Any]:
    return {
        "format": RESOLUTION_FORMAT,
        "presentation_hash": res.presentation_hash,
        "max_degree": res.max_degree,
        "slices": [
            {
                "degree": s.degree,
                "basis": [format_division(c.entries) for c in s.basis],
                "differential": {
                    format_division(c.entries): _element_records(image) for c, image in s
                },
            }
            for s in res
        ],
    }


def export_resolution(res: Resolution, path: PathLike, console: Optional[Console] = None):
    """Write the slices in the documented anick-resolution/1 format."""
    _write_json(resolution_to_dict(res), path, "Exporting resolution...", console)


def _read_division(text: str, pres: Presentation) -> Word:
    if not isinstance(text, str) or not (text.startswith("[") and text.endswith("]")):
        raise InputError(f"Chain must be written as [a|b|...], got {text!r}")
    body = text[1:-1]
    if not body:
        return ()
    return tuple(_read_word(part, pres.generator_names, pres) for part in body.split("|"))


def load_resolution(path: PathLike, pres: Presentation) -> Resolution:
    """Read an exported resolution; InputError when it was built for another presentation."""
    data = read_json(path)
    if not isinstance(data, dict) or data.get("format") != RESOLUTION_FORMAT:
        raise InputError(f"{path}: not an {RESOLUTION_FORMAT} file")
    digest = pres.digest()
    if data.get("presentation_hash") != digest:
        raise InputError(
            f"{path} is stale: built for presentation {data.get('presentation_hash')}, "
            f"current is {digest}"
        )
    slices = []
    for record in data.get("slices", []):
        basis = tuple(AnickChain(_read_division(t, pres)) for t in record["basis"])
        differential = {}
        for chain in basis:
            element = FreeBimoduleElement()
            for term in record["differential"].get(format_division(chain.entries), []):
                key = (
                    _read_word(term["left"], pres.generator_names, pres),
                    _read_division(term["chain"], pres),
                    _read_word(term["right"], pres.generator_names, pres),
                )
                element.add_term(key, parse_coefficient(term["coef"]))
            differential[chain] = element
        slices.append(ResolutionSlice(record["degree"], basis, differential))
    return Resolution(digest, data.get("max_degree", len(slices)), tuple(slices))
