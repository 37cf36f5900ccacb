"""Scalars of the max-plus semiring.

The carrier is the reals extended by a bottom element (read as -inf).
Addition is ``max`` and multiplication is ordinary ``+``; bottom is the
additive identity and absorbs under multiplication, 0 is the multiplicative
identity.  There is no top element, so ``-inf + inf`` can never arise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import total_ordering

from tropatt.errors import InvalidValueError

__all__ = [
    "BOTTOM",
    "ONE",
    "TropicalScalar",
    "format_scalar",
    "parse_scalar",
    "trop_add",
    "trop_leq",
    "trop_mul",
]


@total_ordering
@dataclass(frozen=True, slots=True)
class TropicalScalar:
    """An extended real: a finite float, or bottom when ``value is None``.

    ``float('-inf')`` is accepted on input and normalised to bottom.  NaN and
    ``+inf`` are rejected.
    """

    value: float | None

    def __post_init__(self):
        v = self.value
        if v is None:
            return
        if isinstance(v, bool):
            raise InvalidValueError("booleans are not tropical scalars")
        v = float(v)
        if math.isnan(v):
            raise InvalidValueError("NaN is not a tropical scalar")
        if v == math.inf:
            raise InvalidValueError("+inf is not in the max-plus carrier")
        object.__setattr__(self, "value", None if v == -math.inf else v)

    @property
    def is_bottom(self) -> bool:
        return self.value is None

    def __float__(self) -> float:
        return -math.inf if self.value is None else self.value

    def __lt__(self, other):
        if not isinstance(other, TropicalScalar):
            return NotImplemented
        return not trop_leq(other, self)

    def __str__(self):
        return format_scalar(self)

    def __repr__(self):
        return f"TropicalScalar({format_scalar(self)})"


BOTTOM = TropicalScalar(None)
ONE = TropicalScalar(0.0)


def _coerce(x) -> TropicalScalar:
    return x if isinstance(x, TropicalScalar) else TropicalScalar(x)


def trop_add(a, b) -> TropicalScalar:
    """``a ⊕ b = max(a, b)`` with bottom below every finite value."""
    a, b = _coerce(a), _coerce(b)
    if a.value is None:
        return b
    if b.value is None:
        return a
    return a if a.value >= b.value else b


def trop_mul(a, b) -> TropicalScalar:
    """``a ⊗ b = a + b``; bottom if either factor is bottom."""
    a, b = _coerce(a), _coerce(b)
    if a.value is None or b.value is None:
        return BOTTOM
    return TropicalScalar(a.value + b.value)


def trop_leq(a, b) -> bool:
    """The order induced by idempotent addition: ``a <= b`` iff ``a ⊕ b == b``."""
    return trop_add(a, b) == _coerce(b)


def format_scalar(x) -> str:
    """Render bottom as ``-inf`` and finite values as shortest round-trip decimals."""
    x = _coerce(x)
    if x.value is None:
        return "-inf"
    return repr(x.value)


def parse_scalar(text: str) -> TropicalScalar:
    s = text.strip()
    if s.lower() in ("-inf", "-infinity"):
        return BOTTOM
    try:
        v = float(s)
    except ValueError:
        raise InvalidValueError(f"not a tropical scalar: {text!r}") from None
    if not math.isfinite(v):
        raise InvalidValueError(f"not a tropical scalar: {text!r}")
    return TropicalScalar(v)
