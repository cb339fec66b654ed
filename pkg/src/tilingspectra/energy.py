"""Exact energy tokens such as ``4``, ``6-phi``, ``1/phi^2`` or ``2+sqrt2``."""

from __future__ import annotations

import ast
import operator

from .exactnum import QSQRT2, QSQRT5, QuadScalar

_NAMES = {
    "phi": (QSQRT5, QuadScalar(QSQRT5, 1, 1, 2)),
    "sqrt5": (QSQRT5, QuadScalar(QSQRT5, 0, 1)),
    "sqrt2": (QSQRT2, QuadScalar(QSQRT2, 0, 1)),
    "silver": (QSQRT2, QuadScalar(QSQRT2, 1, 1)),
}

_BINOPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
}


class EnergyParseError(ValueError):
    """The token is not an exact energy expression."""


def _fields(node) -> set[str]:
    return {_NAMES[n.id][0] for n in ast.walk(node) if isinstance(n, ast.Name) and n.id in _NAMES}


def parse_energy(token: str, default_field: str = QSQRT5) -> QuadScalar:
    """Parse an arithmetic expression in integers, phi, sqrt5, sqrt2 and silver."""
    text = token.strip().replace("^", "**")
    try:
        tree = ast.parse(text, mode="eval")
    except SyntaxError as exc:
        raise EnergyParseError(f"cannot parse energy {token!r}") from exc
    fields = _fields(tree)
    if len(fields) > 1:
        raise EnergyParseError(f"{token!r} mixes sqrt5 and sqrt2")
    fld = fields.pop() if fields else default_field

    def ev(node) -> QuadScalar:
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
            return QuadScalar(fld, node.value)
        if isinstance(node, ast.Name) and node.id in _NAMES:
            return _NAMES[node.id][1]
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Pow):
                if not (isinstance(node.right, ast.Constant) and isinstance(node.right.value, int)):
                    raise EnergyParseError("exponents must be integer literals")
                return ev(node.left) ** node.right.value
            op = _BINOPS.get(type(node.op))
            if op is not None:
                return op(ev(node.left), ev(node.right))
        raise EnergyParseError(f"unsupported element in energy {token!r}")

    try:
        return ev(tree)
    except ZeroDivisionError as exc:
        raise EnergyParseError(f"division by zero in {token!r}") from exc
