"""Closed-form sensitivities, pull-in, and the piston-model electrostatic equilibrium.

The electrostatic solve treats the diaphragm as a rigid piston on a spring of
compliance ``S_m`` (m/Pa), loaded by static pressure plus the electrostatic
pressure ``eps0 V^2 / (2 (d - x)^2)``. The closed-form pull-in voltage
``sqrt(8 d^3 / (27 eps0 S_m))`` is exactly the fold of that model, so the
bisection-based :func:`pull_in_numeric` is an independent check of it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

from . import kernels
from .design import EPSILON_0, Diaphragm, MicrophoneDesign, require_valid
from .errors import InvalidInput, NumericFailure, PullInExceeded

ROOT_RTOL = 1e-10
PULL_IN_AGREEMENT = 1e-3

# Measured mechanical sensitivity of the 1.9 mm prototype diaphragms and the
# average stress reported for each: (thickness [m], S_m [m/Pa], stress [Pa]).
# Only the 1 um row is consistent with the membrane formula; see
# ``stress_discrepancies``.
MEASURED_DIAPHRAGMS = (
    (1.0e-6, 13e-9, 8.68e6),
    (0.8e-6, 15e-9, 7.52e6),
    (0.6e-6, 17e-9, 6.64e6),
)
MEASURED_DIAMETER = 1.9e-3


@dataclass(frozen=True)
class OperatingPoint:
    bias_voltage: float = 0.0
    static_pressure: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.bias_voltage) and self.bias_voltage >= 0):
            raise InvalidInput(f"bias_voltage must be finite and >= 0, got {self.bias_voltage!r}")
        if not (math.isfinite(self.static_pressure) and self.static_pressure >= 0):
            raise InvalidInput(f"static_pressure must be finite and >= 0, got {self.static_pressure!r}")


@dataclass(frozen=True)
class StaticState:
    piston_deflection: float
    gap_remaining: float
    capacitance: float
    stable: bool = True


def mechanical_sensitivity(diaphragm: Diaphragm) -> float:
    """Low-frequency membrane compliance ``A / (8 pi sigma h)`` in m/Pa."""
    return diaphragm.area / (8.0 * math.pi * diaphragm.residual_stress * diaphragm.thickness)


def stress_from_sensitivity(diameter: float, thickness: float, sensitivity: float) -> float:
    """Residual stress implied by a measured mechanical sensitivity (inverse of the above)."""
    if not (sensitivity > 0 and math.isfinite(sensitivity)):
        raise InvalidInput(f"mechanical sensitivity must be > 0, got {sensitivity!r}")
    if not (diameter > 0 and thickness > 0):
        raise InvalidInput("diameter and thickness must be > 0")
    area = math.pi * (diameter / 2.0) ** 2
    return area / (8.0 * math.pi * thickness * sensitivity)


def electrical_sensitivity(bias: float, gap: float) -> float:
    if not gap > 0:
        raise InvalidInput(f"gap must be > 0, got {gap!r}")
    if not bias >= 0:
        raise InvalidInput(f"bias must be >= 0, got {bias!r}")
    return bias / gap


def open_circuit_sensitivity(mech: float, elec: float) -> float:
    if not (mech >= 0 and elec >= 0):
        raise InvalidInput("sensitivities must be >= 0")
    return mech * elec


def pull_in_voltage(gap: float, sm: float, eps0: float = EPSILON_0) -> float:
    if not (gap > 0 and sm > 0 and eps0 > 0):
        raise InvalidInput("gap, S_m and eps0 must be > 0")
    return math.sqrt((8.0 / 27.0) * gap**3 / (eps0 * sm))


def max_open_circuit_sensitivity(gap: float, sm: float, eps0: float = EPSILON_0) -> float:
    """Upper bound on open-circuit sensitivity, reached as the bias approaches pull-in."""
    if not (gap > 0 and sm >= 0 and eps0 > 0):
        raise InvalidInput("gap and eps0 must be > 0, S_m >= 0")
    return math.sqrt(8.0 * gap * sm / (27.0 * eps0))


def design_pull_in(design: MicrophoneDesign) -> float:
    return pull_in_voltage(design.gap, mechanical_sensitivity(design.diaphragm), design.environment.epsilon0)


def parallel_plate_capacitance(design: MicrophoneDesign, deflection: float = 0.0) -> float:
    return design.environment.epsilon0 * design.diaphragm.area / (design.gap - deflection)


def equilibrium(design: MicrophoneDesign, op: OperatingPoint) -> StaticState:
    require_valid(design)
    sm = mechanical_sensitivity(design.diaphragm)
    eps0 = design.environment.epsilon0
    vp = pull_in_voltage(design.gap, sm, eps0)
    if op.bias_voltage >= vp:
        raise PullInExceeded(
            f"bias {op.bias_voltage:.6g} V is at or above the pull-in voltage {vp:.3g} V",
            bias=op.bias_voltage,
            limit=vp,
        )
    x = kernels.equilibrium_deflection(sm, design.gap, eps0, op.bias_voltage, op.static_pressure, ROOT_RTOL)
    if x == kernels.NO_EQUILIBRIUM:
        raise PullInExceeded(
            f"no stable equilibrium at {op.bias_voltage:.6g} V and {op.static_pressure:.6g} Pa "
            "(diaphragm collapses onto the backplate)",
            bias=op.bias_voltage,
            limit=vp,
        )
    if x == kernels.NOT_CONVERGED or not (0.0 <= x < design.gap):
        raise NumericFailure(f"equilibrium bisection failed at {op!r}")
    return StaticState(
        piston_deflection=x,
        gap_remaining=design.gap - x,
        capacitance=parallel_plate_capacitance(design, x),
    )


def pull_in_numeric(design: MicrophoneDesign) -> float:
    """Pull-in voltage found as the loss of static equilibrium (bisection on bias)."""
    require_valid(design)
    sm = mechanical_sensitivity(design.diaphragm)
    v = kernels.pull_in_search(sm, design.gap, design.environment.epsilon0, ROOT_RTOL)
    if v < 0 or not math.isfinite(v):
        raise NumericFailure("could not bracket the pull-in voltage")
    return v


def pull_in_check(design: MicrophoneDesign) -> tuple[float, float, float]:
    """Closed-form V_p, numeric V_p, and their relative difference.

    Raises NumericFailure when they disagree by more than 0.1 %.
    """
    closed = design_pull_in(design)
    numeric = pull_in_numeric(design)
    rel = abs(numeric - closed) / closed
    if rel > PULL_IN_AGREEMENT:
        raise NumericFailure(
            f"pull-in self-check failed: closed form {closed:.9g} V vs numeric {numeric:.9g} V (rel diff {rel:.3g})"
        )
    return closed, numeric, rel


def capacitance_vs_pressure(
    design: MicrophoneDesign, bias: float, pressures: Iterable[float]
) -> list[tuple[float, float]]:
    out = []
    for i, p in enumerate(pressures):
        try:
            state = equilibrium(design, OperatingPoint(bias, p))
        except PullInExceeded as exc:
            raise PullInExceeded(f"pressure index {i} ({p:.6g} Pa): {exc}", bias=bias, limit=exc.limit, index=i) from exc
        out.append((p, state.capacitance))
    return out


def capacitance_vs_bias(design: MicrophoneDesign, biases: Iterable[float], pressure: float = 0.0) -> list[tuple[float, float]]:
    return [(v, equilibrium(design, OperatingPoint(v, pressure)).capacitance) for v in biases]


def capacitance_profile(design: MicrophoneDesign, center_deflection: float) -> float:
    """Capacitance with a parabolic membrane profile of centre deflection ``w0``.

    ``eps0 pi a^2 / w0 * ln(d / (d - w0))``; reduces to the flat-plate value at ``w0 = 0``.
    """
    d = design.gap
    w0 = center_deflection
    if not (0.0 <= w0 < d):
        raise InvalidInput(f"centre deflection must satisfy 0 <= w0 < gap, got {w0!r}")
    flat = design.environment.epsilon0 * math.pi * design.diaphragm.radius**2 / d
    u = w0 / d
    if u < 1e-6:
        factor = 1.0 + u / 2.0 + u * u / 3.0
    else:
        factor = -math.log1p(-u) / u
    return flat * factor


@dataclass(frozen=True)
class StressDiscrepancy:
    thickness: float
    measured_sensitivity: float
    reported_stress: float
    implied_stress: float

    @property
    def relative_error(self) -> float:
        return (self.reported_stress - self.implied_stress) / self.implied_stress


def stress_discrepancies() -> list[StressDiscrepancy]:
    """Reported vs. formula-implied stress for each measured prototype diaphragm."""
    return [
        StressDiscrepancy(h, sm, reported, stress_from_sensitivity(MEASURED_DIAMETER, h, sm))
        for h, sm, reported in MEASURED_DIAPHRAGMS
    ]
