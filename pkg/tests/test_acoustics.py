import math
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from memsmic import acoustics
from memsmic.acoustics import (
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
from memsmic.design import Environment
from memsmic.errors import InvalidInput, PullInExceeded

NU = 1.86e-5


def rolloff_u(zeta, db=3.0):
    """Oracle: normalized frequency where |H/S_o| first drops ``db`` below DC (closed form)."""
    g = 10 ** (db / 10)
    b = 1 - 2 * zeta**2
    return math.sqrt(b + math.sqrt(b * b + g - 1))


def peak_edge_u(zeta, db=3.0):
    """Oracle: lower frequency where a resonant peak first reaches +``db``; None if it never does."""
    g = 10 ** (-db / 10)
    b = 1 - 2 * zeta**2
    disc = b * b - (1 - g)
    if b <= 0 or disc < 0:
        return None
    return math.sqrt(b - math.sqrt(disc))


def with_zeta(design, zeta):
    """Scale viscosity so the damping ratio hits ``zeta`` exactly (damping is linear in viscosity)."""
    z0 = lumped_model(design, 1.0).damping_ratio
    env = replace(design.environment, air_viscosity=design.environment.air_viscosity * zeta / z0)
    return replace(design, environment=env)


# --- bracket and resistances --------------------------------------------------------------

def test_skvor_bracket_values():
    assert skvor_bracket(1.0) == 0.0
    assert skvor_bracket(0.24) == pytest.approx(0.0946, abs=1e-4)
    with pytest.raises(InvalidInput):
        skvor_bracket(0.0)
    with pytest.raises(InvalidInput):
        skvor_bracket(1.5)


def test_skvor_bracket_decreasing_and_divergent():
    a = np.linspace(0.001, 1.0, 2000)
    v = [skvor_bracket(x) for x in a]
    assert all(y < x for x, y in zip(v, v[1:]))
    assert skvor_bracket(1e-300) > 100


def test_hole_geometry(table1):
    g = hole_geometry(table1.backplate)
    assert g.density == pytest.approx(3.75e7, rel=1e-12)
    assert g.count == 106
    assert g.equivalent_radius == pytest.approx(45.14e-6, rel=2e-4)
    assert hole_geometry(replace(table1.backplate, hole_side=100e-6)).equivalent_radius == pytest.approx(56.42e-6, rel=1e-4)
    doubled = hole_geometry(replace(table1.backplate, hole_fraction=0.48))
    assert doubled.density == pytest.approx(2 * g.density, rel=1e-15)


def test_gap_resistance(table1):
    ra = gap_resistance(table1.backplate, table1.gap, table1.environment)
    # hand arithmetic: 12 nu A_eff / (pi d^3 n) * bracket(0.24)
    area = math.pi * 0.95e-3**2
    bracket = 0.24 / 2 - 0.24**2 / 8 - math.log(0.24) / 4 - 3 / 8
    assert ra == pytest.approx(12 * NU * area / (math.pi * 1e-15 * 3.75e7) * bracket, rel=1e-12)
    assert ra == pytest.approx(5.08e-4, rel=1e-2)
    assert gap_resistance(replace(table1.backplate, hole_fraction=1.0), table1.gap, table1.environment) == 0.0
    assert gap_resistance(table1.backplate, 2 * table1.gap, table1.environment) == pytest.approx(ra / 8, rel=1e-14)


def test_hole_resistance(table1):
    rh = hole_resistance(table1.backplate, table1.environment)
    assert rh == pytest.approx(8.63e-5, rel=1e-2)
    assert hole_resistance(replace(table1.backplate, thickness=200e-6), table1.environment) == pytest.approx(2 * rh, rel=1e-14)
    halved = replace(table1.backplate, hole_side=40e-6)
    assert hole_resistance(halved, table1.environment) == pytest.approx(4 * rh, rel=1e-12)


def test_damping_breakdown(table1):
    b = damping(table1)
    assert b.total == b.gap_resistance + b.hole_resistance
    assert b.hole_count == 106 and b.gap_resistance > 0 and b.hole_resistance > 0


def test_total_damping_decreasing_in_hole_fraction(table1):
    totals = [damping(table1.with_parameter("hole_fraction", a)).total for a in np.linspace(0.05, 0.45, 41)]
    assert all(b < a for a, b in zip(totals, totals[1:]))


# --- lumped model -----------------------------------------------------------------------

def test_lumped_model_table1(table1):
    m = lumped_model(table1, 12.0)
    area = math.pi * 0.95e-3**2
    sm = area / (8 * math.pi * 11.06e6 * 0.6e-6)
    k = area / sm
    mass = 1420 * 0.6e-6 * area / 3
    c = damping(table1).total
    assert m.stiffness == pytest.approx(k, rel=1e-12) and k == pytest.approx(166.8, rel=1e-3)
    assert m.effective_mass == pytest.approx(mass, rel=1e-12) and mass == pytest.approx(8.05e-10, rel=1e-3)
    assert m.resonance == pytest.approx(math.sqrt(k / mass) / (2 * math.pi), rel=1e-12)
    assert m.resonance == pytest.approx(72e3, rel=1e-2)
    assert m.damping_ratio == pytest.approx(c / (2 * math.sqrt(k * mass)), rel=1e-12)
    assert m.damping_ratio == pytest.approx(0.81, rel=1e-2)
    assert m.dc_sensitivity == pytest.approx(sm * 12 / 10e-6, rel=1e-12)


def test_lumped_model_bias_independent_dynamics(table1):
    a, b = lumped_model(table1, 5.0), lumped_model(table1, 30.0)
    assert (a.resonance, a.damping_ratio) == (b.resonance, b.damping_ratio)


def test_zero_damping(table1):
    d = replace(table1, environment=Environment(air_viscosity=1e-300))
    assert lumped_model(d, 12.0).damping_ratio == pytest.approx(0.0, abs=1e-200)


def test_lumped_model_pull_in(table1):
    with pytest.raises(PullInExceeded):
        lumped_model(table1, 45.0)


# --- frequency response -------------------------------------------------------------------

def test_dc_limit(table1):
    m = lumped_model(table1, 12.0)
    r = frequency_response(table1, 12.0, [m.resonance / 1000])
    assert r.magnitude_db[0] == pytest.approx(20 * math.log10(m.dc_sensitivity), abs=0.01)


def test_resonance_gain_is_one_over_two_zeta(table1):
    d = with_zeta(table1, 1 / math.sqrt(2))
    m = lumped_model(d, 12.0)
    r = frequency_response(d, 12.0, [m.resonance])
    assert r.magnitude_db[0] - 20 * math.log10(m.dc_sensitivity) == pytest.approx(20 * math.log10(1 / (2 * m.damping_ratio)), abs=1e-9)
    assert r.magnitude_db[0] - 20 * math.log10(m.dc_sensitivity) == pytest.approx(-3.0103, abs=1e-4)
    assert r.phase_deg[0] == pytest.approx(-90.0, abs=1e-9)


def test_bias_doubling_shifts_by_6_02_db(table1):
    f = np.geomspace(20, 1e5, 300)
    a = frequency_response(table1, 12.0, f).magnitude_db
    b = frequency_response(table1, 24.0, f).magnitude_db
    assert np.allclose(b - a, 20 * math.log10(2), atol=1e-9, rtol=0)


def test_phase_range_and_continuity(table1):
    f = np.geomspace(1, 1e7, 2000)
    for z in (0.05, 0.81, 3.0):
        r = frequency_response(with_zeta(table1, z), 12.0, f)
        assert np.all(r.phase_deg <= 0) and np.all(r.phase_deg > -180)
        assert np.all(np.isfinite(r.magnitude_db))
        assert np.max(np.abs(np.diff(r.magnitude_db))) < 2.0


@pytest.mark.parametrize("z", [1.0, 1.5, 4.0])
def test_overdamped_is_monotone(table1, z):
    r = frequency_response(with_zeta(table1, z), 12.0, np.geomspace(1, 1e7, 3000))
    assert np.all(np.diff(r.magnitude_db) <= 0)


@pytest.mark.parametrize("grid", [[], [0.0, 1.0], [10.0, 5.0], [1.0, 1.0], [1.0, math.nan]])
def test_bad_frequency_grid(table1, grid):
    with pytest.raises(InvalidInput):
        frequency_response(table1, 12.0, grid)


def test_zero_bias_has_no_db_response(table1):
    with pytest.raises(InvalidInput):
        frequency_response(table1, 0.0, [100.0])


# --- cutoff -------------------------------------------------------------------------------

def test_butterworth_cutoff_is_f0(table1, backend):
    d = with_zeta(table1, 1 / math.sqrt(2))
    m = lumped_model(d, 12.0)
    assert cutoff_frequency(d, 12.0) == pytest.approx(m.resonance, rel=5e-3)


def test_table1_cutoff_beyond_audio_band(table1, backend):
    fc = cutoff_frequency(table1, 12.0)
    m = lumped_model(table1, 12.0)
    assert fc > 20e3
    assert fc == pytest.approx(rolloff_u(m.damping_ratio) * m.resonance, rel=1e-8)


@settings(max_examples=80, deadline=None)
@given(st.floats(0.02, 30.0))
def test_cutoff_matches_closed_form_oracle(zeta):
    from memsmic.design import table1_design

    d = with_zeta(table1_design(), zeta)
    m = lumped_model(d, 12.0)
    expected = rolloff_u(m.damping_ratio) * m.resonance
    got = cutoff_frequency(d, 12.0)
    if expected < acoustics.SCAN_FMIN:
        # already rolled off at the first scan point: bisection runs from DC
        assert got == pytest.approx(expected, rel=1e-6)
    else:
        assert got == pytest.approx(expected, rel=1e-8)


@settings(max_examples=60, deadline=None)
@given(st.floats(0.02, 3.0))
def test_flat_band_edge_oracle(zeta):
    from memsmic.design import table1_design

    d = with_zeta(table1_design(), zeta)
    m = lumped_model(d, 12.0)
    peak = peak_edge_u(m.damping_ratio)
    expected = (peak if peak is not None else rolloff_u(m.damping_ratio)) * m.resonance
    assert flat_band_edge(d, 12.0) == pytest.approx(expected, rel=1e-8)


def test_cutoff_trend_in_hole_fraction(table1, backend):
    cut = [cutoff_frequency(table1.with_parameter("hole_fraction", a), 12.0) for a in np.linspace(0.05, 0.45, 41)]
    assert all(b >= a for a, b in zip(cut, cut[1:]))


def test_flat_band_edge_drops_once_peak_appears(table1):
    # lightly damped designs: the peak, not the roll-off, ends the flat band
    edges = [flat_band_edge(table1.with_parameter("hole_fraction", a), 12.0) for a in (0.29, 0.45)]
    assert edges[1] < edges[0]


def test_scan_range_always_reaches_rolloff():
    # |H(10 f0)| <= 1/99 of DC for any zeta, so the sentinel only arises from the kernel's range argument
    for z in (0.0, 0.3, 5.0, 30.0):
        assert math.isfinite(acoustics.cutoff_from_dynamics(1e4, z))
    assert acoustics.FLAT_BEYOND_RANGE == math.inf
