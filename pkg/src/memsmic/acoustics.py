"""Perforated-backplate damping and single-degree-of-freedom dynamics.

Gap and hole resistances are mechanical resistances (N*s/m) and are added
directly as the dashpot of a mass-spring-damper whose stiffness is
``A / S_m`` and whose effective mass is that of a parabolic membrane mode,
``rho h A / 3``. There is no electrostatic spring softening: resonance and
damping ratio do not depend on bias, only the DC gain does.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import kernels
from .design import Backplate, Environment, MicrophoneDesign, require_valid
from .errors import InvalidInput, NumericFailure, PullInExceeded
from .statics import design_pull_in, electrical_sensitivity, mechanical_sensitivity, open_circuit_sensitivity
from .units import sensitivity_to_db

CUTOFF_DB = 3.0
SCAN_FMIN = 10.0
SCAN_POINTS_PER_DECADE = 200.0
SCAN_SPAN = 10.0  # scan up to SCAN_SPAN * f0
CUTOFF_RTOL = 1e-9

# Returned when the response stays within 3 dB over the whole scan range.
FLAT_BEYOND_RANGE = math.inf


@dataclass(frozen=True)
class HoleGeometry:
    density: float  # holes per m^2
    count: int
    equivalent_radius: float


@dataclass(frozen=True)
class DampingBreakdown:
    gap_resistance: float
    hole_resistance: float
    total: float
    hole_count: int
    equivalent_hole_radius: float


@dataclass(frozen=True)
class LumpedModel:
    stiffness: float
    effective_mass: float
    damping: float
    dc_sensitivity: float
    resonance: float
    damping_ratio: float


@dataclass(frozen=True)
class FrequencyResponse:
    frequency: np.ndarray
    magnitude_db: np.ndarray
    phase_deg: np.ndarray

    @property
    def points(self) -> list[tuple[float, float, float]]:
        return list(zip(self.frequency.tolist(), self.magnitude_db.tolist(), self.phase_deg.tolist()))


def skvor_bracket(hole_fraction: float) -> float:
    """``A/2 - A^2/8 - ln(A)/4 - 3/8``: how perforation relieves squeeze-film resistance."""
    a = hole_fraction
    if not (a > 0 and a <= 1):
        raise InvalidInput(f"hole fraction must be in (0, 1], got {a!r}")
    return a / 2.0 - a * a / 8.0 - math.log(a) / 4.0 - 3.0 / 8.0


def hole_geometry(backplate: Backplate) -> HoleGeometry:
    n = backplate.hole_density
    count = math.floor(n * backplate.effective_area + 0.5)
    if count < 1:
        raise InvalidInput("backplate: hole count must be >= 1")
    # square hole -> circle of equal open area
    return HoleGeometry(n, count, backplate.hole_side / math.sqrt(math.pi))


def gap_resistance(backplate: Backplate, gap: float, env: Environment) -> float:
    if not gap > 0:
        raise InvalidInput(f"gap must be > 0, got {gap!r}")
    n = backplate.hole_density
    return (
        12.0 * env.air_viscosity * backplate.effective_area / (math.pi * gap**3 * n)
        * skvor_bracket(backplate.hole_fraction)
    )


def hole_resistance(backplate: Backplate, env: Environment) -> float:
    n = backplate.hole_density
    r = backplate.hole_side / math.sqrt(math.pi)
    return 8.0 * env.air_viscosity * backplate.thickness * backplate.effective_area / (n * math.pi * r**4)


def damping(design: MicrophoneDesign) -> DampingBreakdown:
    require_valid(design)
    geo = hole_geometry(design.backplate)
    ra = gap_resistance(design.backplate, design.gap, design.environment)
    rh = hole_resistance(design.backplate, design.environment)
    return DampingBreakdown(ra, rh, ra + rh, geo.count, geo.equivalent_radius)


def _dynamics(design: MicrophoneDesign) -> tuple[float, float, float]:
    dia = design.diaphragm
    k = dia.area / mechanical_sensitivity(dia)
    m = dia.density * dia.thickness * dia.area / 3.0
    c = damping(design).total
    return k, m, c


def resonance_and_damping_ratio(design: MicrophoneDesign) -> tuple[float, float]:
    """``(f0, zeta)``; bias-independent, so defined even beyond pull-in."""
    require_valid(design)
    k, m, c = _dynamics(design)
    return math.sqrt(k / m) / (2.0 * math.pi), c / (2.0 * math.sqrt(k * m))


def lumped_model(design: MicrophoneDesign, bias: float) -> LumpedModel:
    require_valid(design)
    vp = design_pull_in(design)
    if bias >= vp:
        raise PullInExceeded(f"bias {bias:.6g} V is at or above the pull-in voltage {vp:.3g} V", bias=bias, limit=vp)
    k, m, c = _dynamics(design)
    so = open_circuit_sensitivity(mechanical_sensitivity(design.diaphragm), electrical_sensitivity(bias, design.gap))
    return LumpedModel(
        stiffness=k,
        effective_mass=m,
        damping=c,
        dc_sensitivity=so,
        resonance=math.sqrt(k / m) / (2.0 * math.pi),
        damping_ratio=c / (2.0 * math.sqrt(k * m)),
    )


def normalized_response(f: np.ndarray, f0: float, zeta: float) -> np.ndarray:
    """Complex ``H(f)/S_o`` of the second-order low-pass."""
    u = np.asarray(f, dtype=float) / f0
    return 1.0 / (1.0 - u * u + 2j * zeta * u)


def frequency_response(design: MicrophoneDesign, bias: float, frequencies: Sequence[float]) -> FrequencyResponse:
    f = np.asarray(frequencies, dtype=float)
    if f.ndim != 1 or f.size == 0:
        raise InvalidInput("frequency grid must be a non-empty 1-D sequence")
    if not np.all(np.isfinite(f)) or f[0] <= 0 or np.any(np.diff(f) <= 0):
        raise InvalidInput("frequency grid must be finite, positive and strictly increasing")
    model = lumped_model(design, bias)
    if model.dc_sensitivity <= 0:
        raise InvalidInput("bias must be > 0 for a finite dB response")
    h = normalized_response(f, model.resonance, model.damping_ratio)
    magnitude = sensitivity_to_db(model.dc_sensitivity) + 20.0 * np.log10(np.abs(h))
    phase = np.degrees(np.angle(h))
    return FrequencyResponse(f, magnitude, phase)


def _search(f0: float, zeta: float, two_sided: bool) -> float:
    f = kernels.cutoff_search(
        f0,
        zeta,
        SCAN_FMIN,
        SCAN_SPAN * f0,
        SCAN_POINTS_PER_DECADE,
        CUTOFF_DB,
        two_sided,
        CUTOFF_RTOL,
    )
    if f == kernels.NOT_CONVERGED:
        raise NumericFailure("cutoff bisection did not converge")
    return f


def cutoff_from_model(model: LumpedModel) -> float:
    return _search(model.resonance, model.damping_ratio, two_sided=False)


def cutoff_from_dynamics(f0: float, zeta: float, two_sided: bool = False) -> float:
    return _search(f0, zeta, two_sided)


def cutoff_frequency(design: MicrophoneDesign, bias: float) -> float:
    """First frequency at which the response has fallen 3 dB below its DC value.

    Returns :data:`FLAT_BEYOND_RANGE` if that does not happen below ``10 f0``.
    """
    return cutoff_from_model(lumped_model(design, bias))


def flat_band_edge(design: MicrophoneDesign, bias: float) -> float:
    """First frequency at which the response leaves the +/-3 dB band around DC.

    Unlike :func:`cutoff_frequency`, a resonant peak above +3 dB ends the band.
    """
    model = lumped_model(design, bias)
    return _search(model.resonance, model.damping_ratio, two_sided=True)
