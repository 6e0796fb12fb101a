"""Value universe helpers: canonical ordering, exact numbers and JSON codec.

Values are any hashable Python objects with decidable equality. In practice
they are ints, exact :class:`~fractions.Fraction` numbers, strings, tuples of
values and :class:`~adjudication.outcome.Interval` results.

The canonical key defined here is only meant for deterministic iteration and
serialization. It is *not* the semantic order used by GLB or the median;
those take an explicit :class:`~adjudication.order.OrderRelation`.
"""

from __future__ import annotations

import decimal
from fractions import Fraction
from numbers import Rational
from typing import Any, Hashable

from .errors import InputError

Value = Hashable

SIGNIFICANT_DIGITS = 12


def is_numeric(v: Any) -> bool:
    return isinstance(v, Rational) and not isinstance(v, bool)


def as_fraction(v: Any) -> Fraction:
    """Return ``v`` as an exact Fraction, rejecting non-numeric values."""
    if not is_numeric(v):
        raise InputError(f"expected an exact numeric value, got {v!r}")
    return Fraction(v)


def normalize(v: Any) -> Value:
    """Collapse integral Fractions to int so equal numbers share one form."""
    if isinstance(v, Fraction) and v.denominator == 1:
        return int(v)
    return v


def canonical_key(v: Any) -> tuple:
    """Total ordering key over heterogeneous values.

    Numbers sort numerically before strings, strings before tuples, and all
    remaining objects sort by type name and ``repr``.
    """
    if is_numeric(v):
        return (0, Fraction(v))
    if isinstance(v, str):
        return (1, v)
    if isinstance(v, tuple):
        return (2, tuple(canonical_key(x) for x in v))
    to_key = getattr(v, "canonical_key", None)
    if to_key is not None:
        return (3, type(v).__name__, to_key())
    return (4, type(v).__name__, repr(v))


def decimal_string(q: Fraction | int) -> str:
    """Render an exact rational with a fixed number of significant digits."""
    q = Fraction(q)
    ctx = decimal.Context(prec=SIGNIFICANT_DIGITS, rounding=decimal.ROUND_HALF_EVEN)
    d = ctx.divide(decimal.Decimal(q.numerator), decimal.Decimal(q.denominator))
    text = format(d, "f")
    if "." in text:
        text = text.rstrip("0").rstrip(".")
    return text


def rational_to_json(q: Fraction | int) -> dict:
    q = Fraction(q)
    return {"num": q.numerator, "den": q.denominator}


def rational_from_json(obj: Any) -> Fraction:
    """Parse ``{"num": n, "den": d}``, an int, a decimal float or a ``"n/d"`` string."""
    if isinstance(obj, dict):
        try:
            num, den = obj["num"], obj["den"]
        except KeyError as exc:
            raise InputError(f"rational object needs 'num' and 'den': {obj!r}") from exc
        if not isinstance(num, int) or not isinstance(den, int) or isinstance(num, bool) or den == 0:
            raise InputError(f"invalid rational {obj!r}")
        return Fraction(num, den)
    if isinstance(obj, bool):
        raise InputError(f"invalid rational {obj!r}")
    if isinstance(obj, int):
        return Fraction(obj)
    if isinstance(obj, float):
        # decimal reading of the literal, not the binary float
        return Fraction(repr(obj))
    if isinstance(obj, str):
        try:
            return Fraction(obj)
        except ValueError as exc:
            raise InputError(f"invalid rational {obj!r}") from exc
    raise InputError(f"invalid rational {obj!r}")


def value_to_json(v: Any) -> Any:
    v = normalize(v)
    if isinstance(v, bool) or v is None:
        return v
    if isinstance(v, int) or isinstance(v, str):
        return v
    if isinstance(v, Fraction):
        return rational_to_json(v)
    if isinstance(v, tuple):
        return {"tuple": [value_to_json(x) for x in v]}
    to_json = getattr(v, "to_json", None)
    if to_json is not None:
        return to_json()
    raise InputError(f"value {v!r} has no JSON form")


def value_from_json(obj: Any) -> Value:
    """Inverse of :func:`value_to_json`; JSON floats are read as exact decimals."""
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, float):
        return normalize(Fraction(repr(obj)))
    if isinstance(obj, dict):
        if "num" in obj:
            return normalize(rational_from_json(obj))
        if "tuple" in obj:
            return tuple(value_from_json(x) for x in obj["tuple"])
        if "interval" in obj:
            from .outcome import Interval

            return Interval.from_json(obj)
    if isinstance(obj, list):
        raise InputError(f"a bare JSON array is not a value: {obj!r}")
    raise InputError(f"cannot decode value {obj!r}")


def parse_scalar(text: str) -> Value:
    """Read a command-line token: int, rational ``n/d``, decimal, else string."""
    text = text.strip()
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return normalize(Fraction(text))
    except ValueError:
        return text
