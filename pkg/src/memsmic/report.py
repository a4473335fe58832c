"""Full analysis of one design at one bias: every derived scalar plus caveats."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

from . import acoustics, statics
from .design import AIR_VISCOSITY, POLYIMIDE_DENSITY, MicrophoneDesign, require_valid
from .units import sensitivity_to_db

MEASURED_SENSITIVITY_DB = {12.0: -50.2, 24.0: -45.3}


@dataclass(frozen=True)
class AnalysisReport:
    bias_v: float
    s_m_m_per_pa: float
    s_e_v_per_m: float
    s_o_v_per_pa: float
    s_o_db: float | None
    s_o_max_v_per_pa: float
    v_p_closed_form_v: float
    v_p_numeric_v: float
    v_p_relative_difference: float
    c0_f: float
    c_bias_f: float
    r_a_n_s_per_m: float
    r_h_n_s_per_m: float
    r_total_n_s_per_m: float
    hole_count: int
    f0_hz: float
    zeta: float
    cutoff_hz: float | None
    flat_band_edge_hz: float | None
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)


def _finite_or_none(x: float) -> float | None:
    return x if math.isfinite(x) else None


def _notes(design: MicrophoneDesign, bias: float, s_o: float) -> list[str]:
    notes = []
    if design.diaphragm.density == POLYIMIDE_DENSITY:
        notes.append(
            f"diaphragm density {POLYIMIDE_DENSITY:g} kg/m^3 is an assumed default (polyimide); "
            "it only affects f0, zeta and the cutoff"
        )
    if design.environment.air_viscosity == AIR_VISCOSITY:
        notes.append(f"air viscosity {AIR_VISCOSITY:g} Pa*s is an assumed default; it only affects damping")
    measured = ", ".join(f"{db:g} dB at {v:g} V" for v, db in MEASURED_SENSITIVITY_DB.items())
    modeled = f"{sensitivity_to_db(s_o):.2f} dB re 1 V/Pa" if s_o > 0 else "zero (no bias)"
    notes.append(
        f"modeled open-circuit sensitivity is {modeled} for the bare element; parasitic capacitance and "
        f"preamplifier loading are not modeled (the packaged reference prototype measured {measured})"
    )
    dia = design.diaphragm
    if dia.diameter == statics.MEASURED_DIAMETER:
        for row in statics.stress_discrepancies():
            if math.isclose(dia.thickness, row.thickness, rel_tol=1e-9):
                notes.append(
                    f"measured S_m {row.measured_sensitivity * 1e9:g} nm/Pa at {row.thickness * 1e6:g} um implies "
                    f"{row.implied_stress / 1e6:.2f} MPa by the membrane formula, while {row.reported_stress / 1e6:.2f} MPa "
                    f"was reported; this analysis uses the file's stress {dia.residual_stress / 1e6:.4g} MPa"
                )
    return notes


def analyze(design: MicrophoneDesign, bias: float) -> AnalysisReport:
    """Raises PullInExceeded for bias >= V_p and NumericFailure if the pull-in self-check fails."""
    require_valid(design)
    sm = statics.mechanical_sensitivity(design.diaphragm)
    se = statics.electrical_sensitivity(bias, design.gap)
    so = statics.open_circuit_sensitivity(sm, se)
    eps0 = design.environment.epsilon0
    vp, vp_num, rel = statics.pull_in_check(design)
    state = statics.equilibrium(design, statics.OperatingPoint(bias, 0.0))
    damp = acoustics.damping(design)
    model = acoustics.lumped_model(design, bias)
    cutoff = acoustics.cutoff_from_model(model)
    band = acoustics.flat_band_edge(design, bias)
    return AnalysisReport(
        bias_v=bias,
        s_m_m_per_pa=sm,
        s_e_v_per_m=se,
        s_o_v_per_pa=so,
        s_o_db=sensitivity_to_db(so) if so > 0 else None,
        s_o_max_v_per_pa=statics.max_open_circuit_sensitivity(design.gap, sm, eps0),
        v_p_closed_form_v=vp,
        v_p_numeric_v=vp_num,
        v_p_relative_difference=rel,
        c0_f=statics.parallel_plate_capacitance(design),
        c_bias_f=state.capacitance,
        r_a_n_s_per_m=damp.gap_resistance,
        r_h_n_s_per_m=damp.hole_resistance,
        r_total_n_s_per_m=damp.total,
        hole_count=damp.hole_count,
        f0_hz=model.resonance,
        zeta=model.damping_ratio,
        cutoff_hz=_finite_or_none(cutoff),
        flat_band_edge_hz=_finite_or_none(band),
        notes=_notes(design, bias, so),
    )


def format_text(r: AnalysisReport) -> str:
    def hz(x):
        return "flat beyond scan range" if x is None else f"{x / 1e3:.3f} kHz"

    lines = [
        f"bias                          {r.bias_v:.6g} V",
        f"mechanical sensitivity S_m    {r.s_m_m_per_pa * 1e9:.4f} nm/Pa",
        f"electrical sensitivity S_e    {r.s_e_v_per_m:.6g} V/m",
        f"open-circuit sensitivity S_o  {r.s_o_v_per_pa:.6g} V/Pa"
        + ("" if r.s_o_db is None else f" ({r.s_o_db:.2f} dB re 1 V/Pa)"),
        f"S_o upper bound at pull-in    {r.s_o_max_v_per_pa:.6g} V/Pa",
        f"pull-in voltage (closed form) {r.v_p_closed_form_v:.4f} V",
        f"pull-in voltage (numeric)     {r.v_p_numeric_v:.4f} V  (rel diff {r.v_p_relative_difference:.2e})",
        f"rest capacitance C0           {r.c0_f * 1e12:.4f} pF",
        f"capacitance at bias           {r.c_bias_f * 1e12:.4f} pF",
        f"gap resistance R_a            {r.r_a_n_s_per_m:.4e} N*s/m",
        f"hole resistance R_h           {r.r_h_n_s_per_m:.4e} N*s/m",
        f"total damping                 {r.r_total_n_s_per_m:.4e} N*s/m",
        f"acoustic holes                {r.hole_count}",
        f"resonance f0                  {r.f0_hz / 1e3:.3f} kHz",
        f"damping ratio zeta            {r.zeta:.4f}",
        f"-3 dB cutoff                  {hz(r.cutoff_hz)}",
        f"+/-3 dB flat band edge        {hz(r.flat_band_edge_hz)}",
        "",
        "notes:",
    ]
    lines += [f"  - {n}" for n in r.notes]
    return "\n".join(lines) + "\n"
