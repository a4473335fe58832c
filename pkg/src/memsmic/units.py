"""SI quantity parsing/formatting and the dB re 1 V/Pa scale.

Every value inside the package is a plain ``float`` in SI units. Unit strings
exist only at the boundaries (CLI flags, human-readable reports); conversion
goes through :class:`decimal.Decimal` so that power-of-ten prefixes are exact,
e.g. ``parse("1.9 mm") == parse("1900 um")``.
"""
from __future__ import annotations

import enum
import math
import re
from decimal import Decimal, InvalidOperation

from .errors import InvalidInput


class Kind(enum.Enum):
    """Quantity kinds and their SI unit symbol."""

    LENGTH = "m"
    PRESSURE = "Pa"
    VOLTAGE = "V"
    CAPACITANCE = "F"
    FREQUENCY = "Hz"
    TIME = "s"
    MECH_SENSITIVITY = "m/Pa"
    ELEC_SENSITIVITY = "V/m"
    OPEN_CIRCUIT_SENSITIVITY = "V/Pa"
    MECH_RESISTANCE = "N*s/m"
    VISCOSITY = "Pa*s"
    PERMITTIVITY = "F/m"
    DENSITY = "kg/m^3"
    AREA_DENSITY = "1/m^2"
    DIMENSIONLESS = ""


# Stress and pressure share a unit; the alias keeps call sites readable.
STRESS = Kind.PRESSURE

_PREFIXES = {
    "G": 9, "M": 6, "k": 3, "": 0, "m": -3,
    "u": -6, "μ": -6, "µ": -6, "n": -9, "p": -12, "f": -15,
}

# Base symbols that accept an SI prefix on their leading factor.
_PREFIXABLE = {
    "m": Kind.LENGTH,
    "Pa": Kind.PRESSURE,
    "V": Kind.VOLTAGE,
    "F": Kind.CAPACITANCE,
    "Hz": Kind.FREQUENCY,
    "s": Kind.TIME,
    "m/Pa": Kind.MECH_SENSITIVITY,
    "V/m": Kind.ELEC_SENSITIVITY,
    "V/Pa": Kind.OPEN_CIRCUIT_SENSITIVITY,
    "N*s/m": Kind.MECH_RESISTANCE,
    "Pa*s": Kind.VISCOSITY,
    "F/m": Kind.PERMITTIVITY,
}

# Symbols taken verbatim (scale exponent, kind).
_FIXED = {
    "kg/m^3": (0, Kind.DENSITY),
    "g/cm^3": (3, Kind.DENSITY),
    "1/m^2": (0, Kind.AREA_DENSITY),
    "1/mm^2": (6, Kind.AREA_DENSITY),
    "": (0, Kind.DIMENSIONLESS),
    "%": (-2, Kind.DIMENSIONLESS),
}

_NUMBER = re.compile(r"^\s*([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)\s*(.*?)\s*$")


def _normalize_unit(unit: str) -> str:
    return (
        unit.replace("·", "*")
        .replace(" ", "")
        .replace("³", "^3")
        .replace("²", "^2")
        .replace("m3", "m^3")
        .replace("m2", "m^2")
    )


def _lookup(unit: str) -> tuple[int, Kind]:
    if unit in _FIXED:
        return _FIXED[unit]
    if unit in _PREFIXABLE:
        return 0, _PREFIXABLE[unit]
    for prefix, exponent in _PREFIXES.items():
        if prefix and unit.startswith(prefix) and unit[len(prefix):] in _PREFIXABLE:
            return exponent, _PREFIXABLE[unit[len(prefix):]]
    raise InvalidInput(f"unknown unit {unit!r}")


def parse(text: str | float | int, kind: Kind | None = None, default_unit: str | None = None) -> float:
    """Parse ``"<number> <unit>"`` into an SI float.

    A bare number is taken in ``default_unit`` if given, otherwise in SI.
    If ``kind`` is given the unit must belong to it.

    >>> parse("1.9 mm")
    0.0019
    >>> parse("8.68 MPa", STRESS)
    8680000.0
    """
    if isinstance(text, bool):
        raise InvalidInput("boolean is not a quantity")
    if isinstance(text, (int, float)):
        value = float(text)
        if not math.isfinite(value):
            raise InvalidInput(f"quantity must be finite, got {text!r}")
        text = repr(value)
    m = _NUMBER.match(text)
    if m is None:
        raise InvalidInput(f"cannot parse quantity {text!r}")
    number, unit = m.groups()
    unit = _normalize_unit(unit)
    if not unit and default_unit is not None:
        unit = _normalize_unit(default_unit)
    if not unit and kind is not None:
        exponent, found = 0, kind
    else:
        exponent, found = _lookup(unit)
    if kind is not None and found is not kind:
        raise InvalidInput(f"{text!r} is not a {kind.name.lower()} (expected unit {kind.value!r})")
    try:
        value = float(Decimal(number).scaleb(exponent))
    except InvalidOperation as exc:  # pragma: no cover - regex already filters
        raise InvalidInput(f"cannot parse quantity {text!r}") from exc
    if not math.isfinite(value):
        raise InvalidInput(f"quantity {text!r} overflows")
    return value


def format_quantity(value: float, unit: str, digits: int = 4) -> str:
    """Render an SI value in ``unit`` (which may carry a prefix), e.g. ``format_quantity(2.51e-12, "pF")``."""
    exponent, _ = _lookup(_normalize_unit(unit))
    return f"{value / 10.0 ** exponent:.{digits}g} {unit}".rstrip()


def sensitivity_to_db(s: float) -> float:
    """Open-circuit sensitivity in V/Pa to dB re 1 V/Pa."""
    if not (s > 0) or not math.isfinite(s):
        raise InvalidInput(f"sensitivity must be finite and > 0 for a dB value, got {s!r}")
    return 20.0 * math.log10(s)


def db_to_sensitivity(db: float) -> float:
    if not math.isfinite(db):
        raise InvalidInput(f"dB value must be finite, got {db!r}")
    return 10.0 ** (db / 20.0)
