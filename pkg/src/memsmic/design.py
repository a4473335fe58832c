"""Design data model, validation and the JSON design-file format.

All fields are SI floats. Diaphragm area (used by the sensitivity and
capacitance formulas) and backplate hole-area ratio (used by the damping
formulas) are deliberately separate attributes.
"""
from __future__ import annotations

import json
import math
import sys
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any

from .errors import InvalidInput

EPSILON_0 = 8.854e-12  # F/m
AIR_VISCOSITY = 1.86e-5  # Pa*s
AIR_DENSITY = 1.2  # kg/m^3
POLYIMIDE_DENSITY = 1420.0  # kg/m^3


@dataclass(frozen=True)
class Diaphragm:
    diameter: float
    thickness: float
    residual_stress: float
    density: float = POLYIMIDE_DENSITY

    @property
    def area(self) -> float:
        return math.pi * (self.diameter / 2.0) ** 2

    @property
    def radius(self) -> float:
        return self.diameter / 2.0


@dataclass(frozen=True)
class Backplate:
    thickness: float
    hole_side: float
    hole_fraction: float
    diameter: float

    @property
    def hole_density(self) -> float:
        """Holes per square metre."""
        return self.hole_fraction / self.hole_side**2

    @property
    def effective_area(self) -> float:
        return math.pi * (self.diameter / 2.0) ** 2


@dataclass(frozen=True)
class Environment:
    air_viscosity: float = AIR_VISCOSITY
    epsilon0: float = EPSILON_0
    air_density: float = AIR_DENSITY


@dataclass(frozen=True)
class MicrophoneDesign:
    diaphragm: Diaphragm
    backplate: Backplate
    gap: float
    environment: Environment = field(default_factory=Environment)

    def with_parameter(self, name: str, value: float) -> "MicrophoneDesign":
        """Copy with one search/sweep parameter replaced.

        ``diameter`` moves the diaphragm and backplate diameters together.
        """
        d, b = self.diaphragm, self.backplate
        if name == "diameter":
            return replace(self, diaphragm=replace(d, diameter=value), backplate=replace(b, diameter=value))
        if name == "thickness":
            return replace(self, diaphragm=replace(d, thickness=value))
        if name == "stress":
            return replace(self, diaphragm=replace(d, residual_stress=value))
        if name == "gap":
            return replace(self, gap=value)
        if name == "hole_fraction":
            return replace(self, backplate=replace(b, hole_fraction=value))
        if name == "hole_side":
            return replace(self, backplate=replace(b, hole_side=value))
        raise InvalidInput(f"unknown design parameter {name!r}; expected one of {', '.join(PARAMETERS)}")

    def parameter(self, name: str) -> float:
        getters = {
            "diameter": lambda: self.diaphragm.diameter,
            "thickness": lambda: self.diaphragm.thickness,
            "stress": lambda: self.diaphragm.residual_stress,
            "gap": lambda: self.gap,
            "hole_fraction": lambda: self.backplate.hole_fraction,
            "hole_side": lambda: self.backplate.hole_side,
        }
        try:
            return getters[name]()
        except KeyError:
            raise InvalidInput(f"unknown design parameter {name!r}") from None


# Fixed order: also the lexicographic tie-break order of the design search.
PARAMETERS = ("diameter", "thickness", "stress", "gap", "hole_fraction", "hole_side")


@dataclass(frozen=True)
class Violation:
    path: str
    message: str

    def __str__(self) -> str:
        return f"{self.path}: {self.message}"


def _positive(path: str, label: str, value: float, out: list[Violation]) -> bool:
    if not math.isfinite(value):
        out.append(Violation(path, f"{label} must be finite"))
        return False
    if not value > 0:
        out.append(Violation(path, f"{label} must be > 0"))
        return False
    return True


def validate(design: MicrophoneDesign) -> list[Violation]:
    """Return every violated invariant, in a fixed order. Empty list means valid."""
    out: list[Violation] = []
    dia, bp, env = design.diaphragm, design.backplate, design.environment

    dia_ok = all([
        _positive("diaphragm.diameter", "diameter", dia.diameter, out),
        _positive("diaphragm.thickness", "thickness", dia.thickness, out),
        _positive("diaphragm.residual_stress", "residual_stress", dia.residual_stress, out),
    ])
    _positive("diaphragm.density", "density", dia.density, out)

    bp_ok = all([
        _positive("backplate.thickness", "thickness", bp.thickness, out),
        _positive("backplate.hole_side", "hole_side", bp.hole_side, out),
        _positive("backplate.diameter", "diameter", bp.diameter, out),
    ])
    if not (math.isfinite(bp.hole_fraction) and 0.0 < bp.hole_fraction < 1.0):
        out.append(Violation("backplate.hole_fraction", "hole_fraction in (0,1)"))
        bp_ok = False

    gap_ok = _positive("gap", "gap", design.gap, out)

    _positive("environment.air_viscosity", "air_viscosity", env.air_viscosity, out)
    eps_ok = _positive("environment.epsilon0", "epsilon0", env.epsilon0, out)
    _positive("environment.air_density", "air_density", env.air_density, out)

    if bp_ok:
        count = math.floor(bp.hole_density * bp.effective_area + 0.5)
        if count < 1:
            out.append(Violation("backplate", "hole count must be >= 1"))

    if dia_ok:
        sm = dia.area / (8.0 * math.pi * dia.residual_stress * dia.thickness)
        if not (math.isfinite(sm) and sm >= sys.float_info.min):
            out.append(Violation("diaphragm", "mechanical sensitivity is degenerate (not a normal positive number)"))
        elif gap_ok and eps_ok:
            vp2 = (8.0 / 27.0) * design.gap**3 / (env.epsilon0 * sm)
            if not (math.isfinite(vp2) and vp2 > 0):
                out.append(Violation("gap", "pull-in voltage is not finite and positive"))
    return out


def require_valid(design: MicrophoneDesign) -> MicrophoneDesign:
    violations = validate(design)
    if violations:
        raise InvalidInput("invalid design: " + "; ".join(map(str, violations)))
    return design


# --- design file -----------------------------------------------------------

_SCHEMA = {
    "diaphragm": ("diameter_m", "thickness_m", "residual_stress_pa", "density_kg_m3"),
    "backplate": ("thickness_m", "hole_side_m", "hole_fraction", "diameter_m"),
    "environment": ("air_viscosity_pa_s", "epsilon0_f_m", "air_density_kg_m3"),
}
_TOP_KEYS = ("diaphragm", "backplate", "gap_m", "environment")


def _number(obj: dict, key: str, where: str) -> float:
    if key not in obj:
        raise InvalidInput(f"{where}: missing key {key!r}")
    value = obj[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise InvalidInput(f"{where}.{key}: expected a number, got {type(value).__name__}")
    return float(value)


def _section(obj: Any, keys: tuple[str, ...], where: str) -> dict:
    if not isinstance(obj, dict):
        raise InvalidInput(f"{where}: expected an object")
    unknown = sorted(set(obj) - set(keys))
    if unknown:
        raise InvalidInput(f"{where}: unknown key(s) {', '.join(unknown)}")
    return {k: _number(obj, k, where) for k in keys}


def design_from_dict(data: Any) -> MicrophoneDesign:
    top = data
    if not isinstance(top, dict):
        raise InvalidInput("design: expected a JSON object")
    unknown = sorted(set(top) - set(_TOP_KEYS))
    if unknown:
        raise InvalidInput(f"design: unknown key(s) {', '.join(unknown)}")
    for key in ("diaphragm", "backplate", "environment"):
        if key not in top:
            raise InvalidInput(f"design: missing key {key!r}")
    d = _section(top["diaphragm"], _SCHEMA["diaphragm"], "diaphragm")
    b = _section(top["backplate"], _SCHEMA["backplate"], "backplate")
    e = _section(top["environment"], _SCHEMA["environment"], "environment")
    return MicrophoneDesign(
        diaphragm=Diaphragm(d["diameter_m"], d["thickness_m"], d["residual_stress_pa"], d["density_kg_m3"]),
        backplate=Backplate(b["thickness_m"], b["hole_side_m"], b["hole_fraction"], b["diameter_m"]),
        gap=_number(top, "gap_m", "design"),
        environment=Environment(e["air_viscosity_pa_s"], e["epsilon0_f_m"], e["air_density_kg_m3"]),
    )


def design_to_dict(design: MicrophoneDesign) -> dict:
    d, b, e = design.diaphragm, design.backplate, design.environment
    return {
        "diaphragm": {
            "diameter_m": d.diameter,
            "thickness_m": d.thickness,
            "residual_stress_pa": d.residual_stress,
            "density_kg_m3": d.density,
        },
        "backplate": {
            "thickness_m": b.thickness,
            "hole_side_m": b.hole_side,
            "hole_fraction": b.hole_fraction,
            "diameter_m": b.diameter,
        },
        "gap_m": design.gap,
        "environment": {
            "air_viscosity_pa_s": e.air_viscosity,
            "epsilon0_f_m": e.epsilon0,
            "air_density_kg_m3": e.air_density,
        },
    }


def _reject_constant(name: str):
    raise InvalidInput(f"non-finite number {name} is not allowed")


def loads_json(text: str, what: str = "input") -> Any:
    """Strict JSON: NaN/Infinity literals and duplicate keys are rejected."""

    def no_duplicates(pairs):
        out = {}
        for k, v in pairs:
            if k in out:
                raise InvalidInput(f"{what}: duplicate key {k!r}")
            out[k] = v
        return out

    try:
        return json.loads(text, parse_constant=_reject_constant, object_pairs_hook=no_duplicates)
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"{what}: malformed JSON ({exc})") from exc


def read_json_file(path: str | Path, what: str) -> Any:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InvalidInput(f"cannot read {what} {str(path)!r}: {exc.strerror}") from exc
    return loads_json(text, what)


def load_design(path: str | Path) -> MicrophoneDesign:
    return design_from_dict(read_json_file(path, "design file"))


def dumps_design(design: MicrophoneDesign) -> str:
    return json.dumps(design_to_dict(design), indent=2) + "\n"


def save_design(design: MicrophoneDesign, path: str | Path) -> None:
    Path(path).write_text(dumps_design(design), encoding="utf-8")


def table1_design(residual_stress: float = 11.06e6) -> MicrophoneDesign:
    """The reference prototype: 1.9 mm / 0.6 um polyimide diaphragm, 10 um gap,
    24 % of 80 um square holes in a 100 um backplate.

    The default stress is the value that reproduces the measured 17 nm/Pa
    mechanical sensitivity; pass ``6.64e6`` for the literally reported stress.
    """
    return MicrophoneDesign(
        diaphragm=Diaphragm(diameter=1.9e-3, thickness=0.6e-6, residual_stress=residual_stress),
        backplate=Backplate(thickness=100e-6, hole_side=80e-6, hole_fraction=0.24, diameter=1.9e-3),
        gap=10e-6,
    )
