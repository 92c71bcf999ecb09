"""Parsing of the arithmetic expression grammar shared by scalars, germs and forms.

Grammar (whitespace insensitive)::

    expr   := term (("+" | "-") term)*
    term   := factor (("*" | "/") factor)*
    factor := ("+" | "-") factor | atom ("^" int | "**" int)?
    atom   := integer | decimal-free rational via "/" | "i" | "sqrt(" int ")"
            | variable | "(" expr ")"

``sqrt`` only accepts an integer literal (optionally signed).  Variables are
restricted to the names passed by the caller (``x``, ``y`` for germs).
The text is tokenized and parsed with the standard :mod:`ast` module after
rewriting ``^`` as ``**``; anything outside the grammar is rejected.
"""

from __future__ import annotations

import ast
from fractions import Fraction
from typing import Iterable, Tuple

__all__ = ["ParseError", "DomainError", "parse_expr", "expr_to_str", "collect_radicands"]


class ParseError(ValueError):
    """Malformed expression text."""


class DomainError(ValueError):
    """Well-formed text outside the supported value domain."""


Expr = tuple


def parse_expr(text: str, variables: Iterable[str] = ()) -> Expr:
    """Parse ``text`` into a small tuple-based expression tree."""
    if not isinstance(text, str) or not text.strip():
        raise ParseError("empty expression")
    src = text.replace("^", "**")
    try:
        tree = ast.parse(src, mode="eval")
    except SyntaxError as exc:
        raise ParseError(f"cannot parse {text!r}: {exc.msg}") from None
    return _convert(tree.body, frozenset(variables), text)


def _int_literal(node) -> int:
    if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
        return node.value
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _int_literal(node.operand)
        return -v if isinstance(node.op, ast.USub) else v
    raise DomainError("sqrt argument must be an integer literal")


def _convert(node, variables, text) -> Expr:
    if isinstance(node, ast.Constant):
        if isinstance(node.value, bool) or not isinstance(node.value, int):
            raise ParseError(f"unsupported literal {node.value!r} in {text!r}")
        return ("num", Fraction(node.value))
    if isinstance(node, ast.Name):
        if node.id == "i":
            return ("i",)
        if node.id in variables:
            return ("var", node.id)
        raise ParseError(f"unknown symbol {node.id!r} in {text!r}")
    if isinstance(node, ast.UnaryOp):
        inner = _convert(node.operand, variables, text)
        if isinstance(node.op, ast.USub):
            return ("neg", inner)
        if isinstance(node.op, ast.UAdd):
            return inner
        raise ParseError(f"unsupported unary operator in {text!r}")
    if isinstance(node, ast.BinOp):
        ops = {ast.Add: "add", ast.Sub: "sub", ast.Mult: "mul", ast.Div: "div"}
        if isinstance(node.op, ast.Pow):
            base = _convert(node.left, variables, text)
            try:
                k = _int_literal(node.right)
            except DomainError:
                raise ParseError(f"exponent must be an integer literal in {text!r}") from None
            if k < 0:
                raise ParseError(f"negative exponent in {text!r}")
            return ("pow", base, k)
        for cls, name in ops.items():
            if isinstance(node.op, cls):
                return (name, _convert(node.left, variables, text), _convert(node.right, variables, text))
        raise ParseError(f"unsupported operator in {text!r}")
    if isinstance(node, ast.Call):
        if isinstance(node.func, ast.Name) and node.func.id == "sqrt" and len(node.args) == 1 and not node.keywords:
            return ("sqrt", _int_literal(node.args[0]))
        raise ParseError(f"unsupported function call in {text!r}")
    raise ParseError(f"unsupported syntax in {text!r}")


def expr_to_str(e: Expr) -> str:
    tag = e[0]
    if tag == "num":
        v = e[1]
        return str(v) if v.denominator == 1 else f"({v})"
    if tag == "i":
        return "i"
    if tag == "var":
        return e[1]
    if tag == "sqrt":
        return f"sqrt({e[1]})"
    if tag == "neg":
        return f"(-{expr_to_str(e[1])})"
    if tag == "pow":
        return f"{expr_to_str(e[1])}^{e[2]}"
    sym = {"add": "+", "sub": "-", "mul": "*", "div": "/"}[tag]
    return f"({expr_to_str(e[1])}{sym}{expr_to_str(e[2])})"


def collect_radicands(e: Expr, out=None) -> Tuple[bool, set]:
    """Return (uses_i, set of sqrt radicands) of an expression tree."""
    if out is None:
        out = [False, set()]
    tag = e[0]
    if tag == "i":
        out[0] = True
    elif tag == "sqrt":
        out[1].add(e[1])
    elif tag in ("neg",):
        collect_radicands(e[1], out)
    elif tag == "pow":
        collect_radicands(e[1], out)
    elif tag in ("add", "sub", "mul", "div"):
        collect_radicands(e[1], out)
        collect_radicands(e[2], out)
    return out[0], out[1]
