"""Plain-text input and output formats.

``.crv``  one polynomial per non-comment line; the curve is their product and
          each line is kept as a separate part (one branch per line where a
          command needs residues).
``.frm``  one 1-form ``A dx + B dy`` or ``d(f)``; lines are joined.
``.eqt``  JSON document describing an EquisType (see :func:`eqt_to_doc`).
``.dg``   a dual graph in the DOT dialect written by ``DualGraph.to_dot``, or
          the JSON document of ``DualGraph.to_structured``.

``#`` starts a comment in ``.crv`` and ``.frm`` files.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Sequence

from ..dualgraph import DualGraph
from ..numfield import NumberField, ParseError, Poly2, parse_polys
from ..puiseux import BranchType, EquisType, LabeledType

__all__ = [
    "strip_comments",
    "read_curve_text",
    "read_curve_file",
    "read_form_file",
    "eqt_to_doc",
    "eqt_from_doc",
    "read_eqt_file",
    "read_dg_file",
    "parse_lambda",
    "describe_type",
]

EQT_SCHEMA = "polarkind.equistype/1"


def strip_comments(text: str) -> List[str]:
    out = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append(line)
    return out


def read_curve_text(lines: Sequence[str], field: Optional[NumberField] = None) -> List[Poly2]:
    if not lines:
        raise ParseError("the curve has no equations")
    parts = parse_polys(list(lines), field=field)
    for k, P in enumerate(parts):
        if P.is_zero():
            raise ParseError(f"equation {k + 1} is identically zero")
        if P.coeff(0, 0) != P.field.zero():
            raise ParseError(f"equation {k + 1} does not pass through the origin")
    return parts


def read_curve_file(path: str, field: Optional[NumberField] = None) -> List[Poly2]:
    return read_curve_text(strip_comments(Path(path).read_text()), field)


def read_form_file(path: str) -> str:
    lines = strip_comments(Path(path).read_text())
    if not lines:
        raise ParseError(f"{path} holds no form")
    return " ".join(lines)


# ---------------------------------------------------------------------------
# EquisType documents
# ---------------------------------------------------------------------------


def eqt_to_doc(e, labels: Optional[Sequence[str]] = None) -> dict:
    """``{"schema", "branches": [[beta_0, ...], ...], "coincidence": [[...]], "labels"}``.

    Coincidences are strings (``"3/2"``); the diagonal is ``null``.
    """
    if isinstance(e, LabeledType):
        labels = e.labels if labels is None else labels
        e = e.etype
    doc = {
        "schema": EQT_SCHEMA,
        "branches": [list(b.char_exponents) for b in e.branches],
        "coincidence": [[None if c is None else str(c) for c in row] for row in e.coincidence],
    }
    if labels is not None:
        doc["labels"] = list(labels)
    return doc


def eqt_from_doc(doc) -> LabeledType:
    if isinstance(doc, str):
        doc = json.loads(doc)
    if not isinstance(doc, dict) or "branches" not in doc:
        raise ParseError("an EquisType document needs a 'branches' list")
    branches = [BranchType(tuple(int(b) for b in bs)) for bs in doc["branches"]]
    r = len(branches)
    mat = doc.get("coincidence")
    if mat is None:
        if r > 1:
            raise ParseError("a curve with several branches needs a coincidence matrix")
        mat = [[None]]
    mat = [[None if c is None else Fraction(c) for c in row] for row in mat]
    e = EquisType(branches, mat)
    labels = doc.get("labels") or [f"C{i + 1}" for i in range(r)]
    return LabeledType(e, list(labels))


def read_eqt_file(path: str) -> LabeledType:
    try:
        return eqt_from_doc(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: not a JSON document ({exc})") from None


def read_dg_file(path: str) -> DualGraph:
    text = Path(path).read_text()
    if text.lstrip().startswith("{"):
        return DualGraph.from_structured(text)
    return DualGraph.from_dot(text)


# ---------------------------------------------------------------------------
# residues and descriptions
# ---------------------------------------------------------------------------


def parse_lambda(text: str):
    """Comma-separated scalar expressions, returned as exact field elements."""
    pieces = [t.strip() for t in text.split(",")]
    if not pieces or any(not t for t in pieces):
        raise ParseError(f"lambda must be a comma-separated list, got {text!r}")
    polys = parse_polys(pieces)
    out = []
    for t, P in zip(pieces, polys):
        if any(k != (0, 0) for k in P.terms):
            raise ParseError(f"residue {t!r} depends on x or y")
        out.append(P.coeff(0, 0))
    return out


def _exps(b: BranchType) -> str:
    return "(" + ";".join(map(str, b.char_exponents)) + ")" if len(b.char_exponents) > 1 else "smooth"


def describe_type(e) -> str:
    """Short human description: ``2 smooth branches, coincidence 2``."""
    if isinstance(e, LabeledType):
        e = e.etype
    r = e.r
    if r == 1:
        b = e.branches[0]
        return "1 smooth branch" if b.genus == 0 else f"1 branch, characteristic exponents {_exps(b)}"
    coins = sorted({e.coincidence[i][j] for i in range(r) for j in range(i + 1, r)})
    ctext = ("coincidence " if len(coins) == 1 else "coincidences ") + ", ".join(str(c) for c in coins)
    if all(b.genus == 0 for b in e.branches):
        return f"{r} smooth branches, {ctext}"
    types = ", ".join(_exps(b) for b in e.branches)
    return f"{r} branches [{types}], {ctext}"
