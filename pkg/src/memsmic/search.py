"""Deterministic constrained grid search over microphone designs.

Objective: open-circuit sensitivity ``S_m * V_b / d`` at a fixed bias.
Constraints: bias margin to pull-in, -3 dB cutoff, rest capacitance.
Ties are broken by the lexicographically smallest parameter vector in
:data:`memsmic.design.PARAMETERS` order, so the result never depends on the
order in which points are evaluated.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping

from . import acoustics, statics
from .design import (
    PARAMETERS,
    MicrophoneDesign,
    design_from_dict,
    design_to_dict,
    read_json_file,
    validate,
)
from .errors import Infeasible, InvalidInput, MicError
from .report import AnalysisReport, analyze
from .units import sensitivity_to_db


@dataclass(frozen=True)
class Axis:
    lower: float
    upper: float
    steps: int = 1

    def __post_init__(self):
        if isinstance(self.steps, bool) or not isinstance(self.steps, int) or self.steps < 1:
            raise InvalidInput(f"axis steps must be an integer >= 1, got {self.steps!r}")
        if not (math.isfinite(self.lower) and math.isfinite(self.upper)):
            raise InvalidInput("axis bounds must be finite")
        if self.lower > self.upper:
            raise InvalidInput(f"axis lower {self.lower!r} > upper {self.upper!r}")
        if self.steps == 1 and self.lower != self.upper:
            raise InvalidInput("a single-step axis must have lower == upper")

    def values(self) -> tuple[float, ...]:
        return linspace(self.lower, self.upper, self.steps)


def linspace(lower: float, upper: float, steps: int) -> tuple[float, ...]:
    if steps == 1:
        return (lower,)
    span = upper - lower
    return tuple(lower + span * i / (steps - 1) for i in range(steps - 1)) + (upper,)


@dataclass(frozen=True)
class DesignSpace:
    """Base design plus an interval axis for any subset of the search parameters."""

    base: MicrophoneDesign
    axes: Mapping[str, Axis] = field(default_factory=dict)

    def __post_init__(self):
        unknown = sorted(set(self.axes) - set(PARAMETERS))
        if unknown:
            raise InvalidInput(f"unknown search parameter(s): {', '.join(unknown)}")

    def axis(self, name: str) -> Axis:
        if name in self.axes:
            return self.axes[name]
        v = self.base.parameter(name)
        return Axis(v, v, 1)

    def grid_values(self) -> dict[str, tuple[float, ...]]:
        return {name: self.axis(name).values() for name in PARAMETERS}

    @property
    def size(self) -> int:
        return math.prod(self.axis(name).steps for name in PARAMETERS)


@dataclass(frozen=True)
class Constraints:
    bias: float = 12.0
    max_bias_fraction_of_pullin: float = 0.6
    min_cutoff: float = 20e3
    min_capacitance: float = 1e-12

    def __post_init__(self):
        if not (math.isfinite(self.bias) and self.bias >= 0):
            raise InvalidInput("bias must be finite and >= 0")
        if not (0 < self.max_bias_fraction_of_pullin < 1):
            raise InvalidInput("max_bias_fraction_of_pullin must be in (0, 1)")
        if not (math.isfinite(self.min_cutoff) and self.min_cutoff > 0):
            raise InvalidInput("min_cutoff must be finite and > 0")
        if not (math.isfinite(self.min_capacitance) and self.min_capacitance >= 0):
            raise InvalidInput("min_capacitance must be finite and >= 0")


@dataclass(frozen=True)
class Evaluation:
    parameters: tuple[float, ...]
    objective: float
    feasible: bool
    reasons: tuple[str, ...]


@dataclass(frozen=True)
class SearchResult:
    best_design: MicrophoneDesign
    best_parameters: tuple[float, ...]
    best_objective: float
    feasible_count: int
    evaluated_count: int
    report: AnalysisReport
    constraints: Constraints

    @property
    def best_objective_db(self) -> float | None:
        return sensitivity_to_db(self.best_objective) if self.best_objective > 0 else None

    def to_dict(self) -> dict[str, Any]:
        c = self.constraints
        return {
            "best_parameters": dict(zip(PARAMETERS, self.best_parameters)),
            "best_objective_v_pa": self.best_objective,
            "best_objective_db": self.best_objective_db,
            "feasible_count": self.feasible_count,
            "evaluated_count": self.evaluated_count,
            "constraints": {
                "bias_v": c.bias,
                "max_bias_fraction_of_pullin": c.max_bias_fraction_of_pullin,
                "min_cutoff_hz": c.min_cutoff,
                "min_capacitance_f": c.min_capacitance,
            },
            "best_design": design_to_dict(self.best_design),
            "report": self.report.to_dict(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def feasible(design: MicrophoneDesign, constraints: Constraints) -> tuple[bool, list[str]]:
    """Check every constraint; the reason list names each one that fails."""
    reasons = []
    vp = statics.design_pull_in(design)
    if not constraints.bias <= constraints.max_bias_fraction_of_pullin * vp:
        reasons.append("bias margin")
    f0, zeta = acoustics.resonance_and_damping_ratio(design)
    if not acoustics.cutoff_from_dynamics(f0, zeta) >= constraints.min_cutoff:
        reasons.append("cutoff")
    if not statics.parallel_plate_capacitance(design) >= constraints.min_capacitance:
        reasons.append("capacitance")
    return not reasons, reasons


def objective(design: MicrophoneDesign, bias: float) -> float:
    sm = statics.mechanical_sensitivity(design.diaphragm)
    return statics.open_circuit_sensitivity(sm, statics.electrical_sensitivity(bias, design.gap))


def design_at(base: MicrophoneDesign, params: Iterable[float]) -> MicrophoneDesign:
    d = base
    for name, value in zip(PARAMETERS, params):
        d = d.with_parameter(name, value)
    return d


def evaluate(base: MicrophoneDesign, params: tuple[float, ...], constraints: Constraints) -> Evaluation:
    design = design_at(base, params)
    violations = validate(design)
    if violations:
        pairs = ", ".join(f"{n}={v!r}" for n, v in zip(PARAMETERS, params))
        raise InvalidInput(f"grid point ({pairs}) is not a valid design: {'; '.join(map(str, violations))}")
    ok, reasons = feasible(design, constraints)
    return Evaluation(params, objective(design, constraints.bias), ok, tuple(reasons))


def better(a: Evaluation, b: Evaluation | None) -> bool:
    """Deterministic comparator: higher objective, then smaller parameter vector."""
    if b is None:
        return True
    if a.objective != b.objective:
        return a.objective > b.objective
    return a.parameters < b.parameters


def reduce_best(evaluations: Iterable[Evaluation]) -> tuple[Evaluation | None, int, int]:
    best = None
    n = n_ok = 0
    for ev in evaluations:
        n += 1
        if ev.feasible:
            n_ok += 1
            if better(ev, best):
                best = ev
    return best, n_ok, n


def _search_grid(
    base: MicrophoneDesign, values: Mapping[str, tuple[float, ...]], constraints: Constraints
) -> SearchResult:
    axes = [values[name] for name in PARAMETERS]
    if any(len(v) == 0 for v in axes):
        raise InvalidInput("design space is empty")
    evaluations = (evaluate(base, params, constraints) for params in itertools.product(*axes))
    best, n_ok, n = reduce_best(evaluations)
    if best is None:
        raise Infeasible(f"no feasible design among {n} grid points")
    design = design_at(base, best.parameters)
    ok, reasons = feasible(design, constraints)
    if not ok:  # pragma: no cover - post-hoc guard
        raise MicError(f"internal error: selected design violates {reasons}")
    return SearchResult(
        best_design=design,
        best_parameters=best.parameters,
        best_objective=best.objective,
        feasible_count=n_ok,
        evaluated_count=n,
        report=analyze(design, constraints.bias),
        constraints=constraints,
    )


def grid_search(space: DesignSpace, constraints: Constraints) -> SearchResult:
    """Exhaustive search in lexicographic parameter order.

    Raises Infeasible when no grid point satisfies the constraints and
    InvalidInput when a grid point is not a valid design.
    """
    return _search_grid(space.base, space.grid_values(), constraints)


def refine(space: DesignSpace, constraints: Constraints, incumbent: SearchResult, rounds: int = 3) -> SearchResult:
    """Zoom the grid around the incumbent ``rounds`` times.

    Round ``k`` searches, on every non-degenerate axis, an interval of
    ``2**-k`` times the original width centred on the incumbent and clipped
    to the original bounds, with the original step count. The incumbent value
    itself is always added to each axis, so the objective never decreases.
    """
    if isinstance(rounds, bool) or not isinstance(rounds, int) or rounds < 0:
        raise InvalidInput(f"rounds must be an integer >= 0, got {rounds!r}")
    best = incumbent
    for k in range(1, rounds + 1):
        values = {}
        for name, centre in zip(PARAMETERS, best.best_parameters):
            axis = space.axis(name)
            if axis.steps == 1:
                values[name] = (centre,)
                continue
            half = (axis.upper - axis.lower) / 2.0**k / 2.0
            lo = max(axis.lower, centre - half)
            hi = min(axis.upper, centre + half)
            values[name] = tuple(sorted(set(linspace(lo, hi, axis.steps)) | {centre}))
        best = _search_grid(space.base, values, constraints)
    return best


# --- JSON -------------------------------------------------------------------

_CONSTRAINT_KEYS = {
    "bias_v": "bias",
    "max_bias_fraction_of_pullin": "max_bias_fraction_of_pullin",
    "min_cutoff_hz": "min_cutoff",
    "min_capacitance_f": "min_capacitance",
}


def _num(value: Any, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise InvalidInput(f"{where}: expected a number")
    return float(value)


def constraints_from_dict(data: Any) -> Constraints:
    if not isinstance(data, dict):
        raise InvalidInput("constraints: expected a JSON object")
    unknown = sorted(set(data) - set(_CONSTRAINT_KEYS))
    if unknown:
        raise InvalidInput(f"constraints: unknown key(s) {', '.join(unknown)}")
    return Constraints(**{_CONSTRAINT_KEYS[k]: _num(v, f"constraints.{k}") for k, v in data.items()})


def space_from_dict(data: Any) -> DesignSpace:
    if not isinstance(data, dict):
        raise InvalidInput("space: expected a JSON object")
    unknown = sorted(set(data) - {"base", "axes"})
    if unknown:
        raise InvalidInput(f"space: unknown key(s) {', '.join(unknown)}")
    if "base" not in data:
        raise InvalidInput("space: missing key 'base'")
    base = design_from_dict(data["base"])
    raw_axes = data.get("axes", {})
    if not isinstance(raw_axes, dict):
        raise InvalidInput("space.axes: expected an object")
    axes = {}
    for name, entry in raw_axes.items():
        if name not in PARAMETERS:
            raise InvalidInput(f"space.axes: unknown parameter {name!r}")
        if not isinstance(entry, dict) or set(entry) - {"lower", "upper", "steps"} or not {"lower", "upper"} <= set(entry):
            raise InvalidInput(f"space.axes.{name}: expected keys lower, upper and optional steps")
        steps = entry.get("steps", 1)
        if isinstance(steps, bool) or not isinstance(steps, int):
            raise InvalidInput(f"space.axes.{name}.steps: expected an integer")
        axes[name] = Axis(_num(entry["lower"], f"space.axes.{name}.lower"), _num(entry["upper"], f"space.axes.{name}.upper"), steps)
    return DesignSpace(base, axes)


def space_to_dict(space: DesignSpace) -> dict:
    return {
        "base": design_to_dict(space.base),
        "axes": {n: {"lower": a.lower, "upper": a.upper, "steps": a.steps} for n, a in space.axes.items()},
    }


def load_space(path) -> DesignSpace:
    return space_from_dict(read_json_file(path, "space file"))


def load_constraints(path) -> Constraints:
    return constraints_from_dict(read_json_file(path, "constraints file"))
