"""Design analysis and constrained search for capacitive MEMS microphones."""
from . import acoustics, kernels, search, statics
from .acoustics import (
    FLAT_BEYOND_RANGE,
    DampingBreakdown,
    FrequencyResponse,
    HoleGeometry,
    LumpedModel,
    cutoff_frequency,
    damping,
    flat_band_edge,
    frequency_response,
    gap_resistance,
    hole_geometry,
    hole_resistance,
    lumped_model,
    skvor_bracket,
)
from .design import (
    Backplate,
    Diaphragm,
    Environment,
    MicrophoneDesign,
    Violation,
    load_design,
    save_design,
    table1_design,
    validate,
)
from .errors import Infeasible, InvalidInput, MicError, NumericFailure, PullInExceeded
from .report import AnalysisReport, analyze
from .search import Axis, Constraints, DesignSpace, SearchResult, feasible, grid_search, refine
from .statics import (
    OperatingPoint,
    StaticState,
    capacitance_profile,
    capacitance_vs_pressure,
    electrical_sensitivity,
    equilibrium,
    max_open_circuit_sensitivity,
    mechanical_sensitivity,
    open_circuit_sensitivity,
    pull_in_numeric,
    pull_in_voltage,
    stress_from_sensitivity,
)
from .units import db_to_sensitivity, parse, sensitivity_to_db

__version__ = "0.1.0"
