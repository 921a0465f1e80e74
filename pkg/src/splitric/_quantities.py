"""Physical quantities in canonical SI units and their text form.

Configuration files, command line arguments and the parameter tables of the
model mix units freely (kB, Mbit, GFLOPS, minutes). All of them are converted
into one canonical unit per dimension when they are parsed, so that the cost
model only ever sees bits, seconds, joules, watts and FLOPs.
"""

import decimal
import enum
import math
import re
from dataclasses import dataclass
from decimal import Decimal
from typing import Optional


class Dimension(enum.Enum):
    """The dimensions used by the cost model. The value of each member is the
    symbol of its canonical unit."""

    BITS = "bit"
    BIT_RATE = "bit/s"
    SECONDS = "s"
    JOULES = "J"
    WATTS = "W"
    FLOP = "FLOP"
    FLOP_RATE = "FLOPS"
    JOULES_PER_FLOP = "J/FLOP"
    HERTZ = "Hz"
    DIMENSIONLESS = ""

    @property
    def column_suffix(self) -> str:
        """Unit suffix used in CSV column names, e.g., *bits* or *J*."""
        return _COLUMN_SUFFIXES[self]


_COLUMN_SUFFIXES = {
    Dimension.BITS: "bits",
    Dimension.BIT_RATE: "bps",
    Dimension.SECONDS: "s",
    Dimension.JOULES: "J",
    Dimension.WATTS: "W",
    Dimension.FLOP: "FLOP",
    Dimension.FLOP_RATE: "FLOPS",
    Dimension.JOULES_PER_FLOP: "J_per_FLOP",
    Dimension.HERTZ: "Hz",
    Dimension.DIMENSIONLESS: "",
}


# Unit symbol -> (dimension, factor to the canonical unit). Prefixes are decimal
# SI prefixes throughout, so a kilobyte is 8000 bits. The factors are kept as
# Decimal, so that the conversion rounds only once.
_UNITS: dict[str, tuple[Dimension, Decimal]] = {
    "b": (Dimension.BITS, Decimal(1)),
    "bit": (Dimension.BITS, Decimal(1)),
    "kbit": (Dimension.BITS, Decimal("1e3")),
    "Mbit": (Dimension.BITS, Decimal("1e6")),
    "Gbit": (Dimension.BITS, Decimal("1e9")),
    "B": (Dimension.BITS, Decimal(8)),
    "kB": (Dimension.BITS, Decimal("8e3")),
    "MB": (Dimension.BITS, Decimal("8e6")),
    "GB": (Dimension.BITS, Decimal("8e9")),
    "bit/s": (Dimension.BIT_RATE, Decimal(1)),
    "kbit/s": (Dimension.BIT_RATE, Decimal("1e3")),
    "Mbit/s": (Dimension.BIT_RATE, Decimal("1e6")),
    "Gbit/s": (Dimension.BIT_RATE, Decimal("1e9")),
    "FLOP": (Dimension.FLOP, Decimal(1)),
    "MFLOP": (Dimension.FLOP, Decimal("1e6")),
    "GFLOP": (Dimension.FLOP, Decimal("1e9")),
    "TFLOP": (Dimension.FLOP, Decimal("1e12")),
    "FLOPS": (Dimension.FLOP_RATE, Decimal(1)),
    "GFLOPS": (Dimension.FLOP_RATE, Decimal("1e9")),
    "TFLOPS": (Dimension.FLOP_RATE, Decimal("1e12")),
    "PFLOPS": (Dimension.FLOP_RATE, Decimal("1e15")),
    "J/FLOP": (Dimension.JOULES_PER_FLOP, Decimal(1)),
    "pJ/FLOP": (Dimension.JOULES_PER_FLOP, Decimal("1e-12")),
    "J": (Dimension.JOULES, Decimal(1)),
    "kJ": (Dimension.JOULES, Decimal("1e3")),
    "W": (Dimension.WATTS, Decimal(1)),
    "s": (Dimension.SECONDS, Decimal(1)),
    "ms": (Dimension.SECONDS, Decimal("1e-3")),
    "min": (Dimension.SECONDS, Decimal(60)),
    "h": (Dimension.SECONDS, Decimal(3600)),
    "Hz": (Dimension.HERTZ, Decimal(1)),
    "MHz": (Dimension.HERTZ, Decimal("1e6")),
    "GHz": (Dimension.HERTZ, Decimal("1e9")),
    "": (Dimension.DIMENSIONLESS, Decimal(1)),
}

_QUANTITY_PATTERN = re.compile(r"^\s*(?P<number>\S+?)\s*(?P<unit>[A-Za-z/]*)\s*$")


class QuantityError(ValueError):
    """A text could not be read as a quantity."""


@dataclass(frozen=True)
class Quantity:
    """A non-negative, finite value in the canonical unit of its dimension.

    >>> Quantity(680000.0, Dimension.BITS)
    Quantity(value=680000.0, dimension=<Dimension.BITS: 'bit'>)
    """

    value: float
    dimension: Dimension

    def __post_init__(self) -> None:
        if not math.isfinite(self.value):
            raise ValueError(f"Quantity value {self.value!r} is not finite")
        if self.value < 0:
            raise ValueError(f"Quantity value {self.value!r} is negative")

    def __str__(self) -> str:
        return format_quantity(self)


def parse_quantity(text: str, expected: Optional[Dimension] = None) -> Quantity:
    """Read a quantity of the form *<number> <unit>* and convert it to the
    canonical unit of its dimension. Byte units are converted to bits,
    minutes and hours to seconds. A bare number is a dimensionless quantity.

    >>> parse_quantity("85 kB").value
    680000.0
    >>> parse_quantity("10 Gbit").value
    10000000000.0
    >>> parse_quantity("45 min")
    Quantity(value=2700.0, dimension=<Dimension.SECONDS: 's'>)
    >>> parse_quantity("20 pJ/FLOP").value == 20e-12
    True
    >>> parse_quantity("3 parsec")
    Traceback (most recent call last):
    ...
    splitric._quantities.QuantityError: unknown unit 'parsec' in '3 parsec'

    :param text: The quantity, e.g., *"15 W"* or *"500 Mbit/s"*.
    :param expected: If given, the quantity needs to have this dimension.
    """
    match = _QUANTITY_PATTERN.match(text)
    if match is None:
        raise QuantityError(f"malformed quantity {text!r}")
    number, unit = match.group("number"), match.group("unit")
    try:
        dimension, factor = _UNITS[unit]
    except KeyError:
        raise QuantityError(f"unknown unit {unit!r} in {text!r}") from None
    try:
        amount = Decimal(number)
    except decimal.InvalidOperation:
        raise QuantityError(f"invalid number {number!r} in {text!r}") from None
    if not amount.is_finite():
        raise QuantityError(f"non-finite number {number!r} in {text!r}")
    if amount < 0:
        raise QuantityError(f"negative number {number!r} in {text!r}")
    if expected is not None and dimension is not expected:
        wanted = expected.value or "a bare number"
        raise QuantityError(
            f"unit {unit!r} in {text!r} is not compatible with {wanted}"
        )
    value = float(amount * factor)
    if not math.isfinite(value):
        raise QuantityError(f"number {number!r} in {text!r} is out of range")
    # -0 is read as 0
    return Quantity(value + 0.0, dimension)


def format_quantity(quantity: Quantity) -> str:
    """Write a quantity in its canonical unit, such that *parse_quantity*
    reads back the identical value.

    >>> format_quantity(parse_quantity("85 kB"))
    '680000.0 bit'
    >>> format_quantity(Quantity(1e5, Dimension.DIMENSIONLESS))
    '100000.0'
    """
    number = repr(quantity.value)
    unit = quantity.dimension.value
    return f"{number} {unit}" if unit else number
