import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from spinspec.hamiltonian import (
    HamiltonianSpec,
    TripleSpinParams,
    TwoSpinParams,
    build_matrix,
    preset_H2,
    preset_H3,
    preset_K2,
)
from spinspec.linalg_core import eigh
from spinspec.spectra import (
    closed_form_H2,
    closed_form_H3,
    closed_form_K2,
    closed_form_product_model,
    format_sweep_csv,
    match_tracks,
    multiset_distance,
    partition_function,
    sweep,
)

from conftest import SX, SZ

finite = st.floats(-3, 3, allow_nan=False)
nonneg = st.floats(0, 3, allow_nan=False)


def test_h2_closed_form_example():
    cf = closed_form_H2(TwoSpinParams(1, 2, 0.5))
    assert cf.as_dict() == {"E1": 3.5, "E2": -1.5, "E3": 0.5, "E4": -2.5}


def test_k2_closed_form_example():
    cf = closed_form_K2(TwoSpinParams(1, 2, 0.5))
    np.testing.assert_allclose(cf.sorted_values(), [-math.sqrt(9.25), -math.sqrt(1.25), math.sqrt(1.25), math.sqrt(9.25)])


@settings(max_examples=40, deadline=None)
@given(finite, finite, nonneg, st.sampled_from([1.0, 2.0]))
def test_two_spin_closed_forms_match_lapack(w1, w2, eps, hbar):
    p = TwoSpinParams(w1, w2, eps, hbar)
    for preset, cf in ((preset_H2, closed_form_H2), (preset_K2, closed_form_K2)):
        ref = np.linalg.eigvalsh(build_matrix(preset(p)))
        assert multiset_distance(ref, cf(p).values) <= 1e-10


def test_product_model_matches_h2():
    p = TwoSpinParams(1.0, 2.0, 0.5)
    sz, sx = eigh(SZ), eigh(SX)
    values = [v for v, _ in closed_form_product_model(p.omega1, p.omega2, p.eps, sz, sx)]
    assert multiset_distance(values, closed_form_H2(p).values) <= 1e-14


def test_h3_sign_formula_matches_lapack():
    p = TripleSpinParams(1, 0.7, 0.3, 0.2, 0.1, 0.05, eps=0.4, hbar=2.0)
    ref = np.linalg.eigvalsh(build_matrix(preset_H3(p)))
    assert multiset_distance(ref, [v for v, _ in closed_form_H3(p)]) <= 1e-10


def test_multiset_distance_shape_mismatch():
    assert multiset_distance([1, 2], [1]) == math.inf
    assert multiset_distance([], []) == 0.0


def _h2_linear_crossings(w1, w2, eps_max):
    # solve E_i(eps) = E_j(eps) for the four linear branches
    cf = [(w1 + w2, 1), (w1 - w2, -1), (-w1 + w2, -1), (-w1 - w2, 1)]
    out = []
    for a in range(4):
        for b in range(a + 1, 4):
            (c0, s0), (c1, s1) = cf[a], cf[b]
            if s0 != s1:
                x = (c1 - c0) / (s0 - s1)
                if 0 < x < eps_max:
                    out.append((x, c0 + s0 * x))
    return sorted(out)


def test_h2_eps_sweep_exact_crossings():
    s = sweep("H2", TwoSpinParams(1, 2, 0), "eps", 0, 3, 301)
    found = sorted((c.parameter_value, c.energy) for c in s.exact_crossings)
    expected = _h2_linear_crossings(1, 2, 3)
    assert len(found) == len(expected) == 2
    for (x, e), (x0, e0) in zip(found, expected):
        assert abs(x - x0) <= 1e-8 and abs(e - e0) <= 1e-8
    assert not s.avoided_crossings


def test_h2_off_grid_crossing_is_refined():
    # 7 points on [0, 3] never hit eps=1 or eps=2
    s = sweep("H2", TwoSpinParams(1, 2, 0), "eps", 0.05, 2.95, 7)
    xs = sorted(c.parameter_value for c in s.exact_crossings)
    assert len(xs) == 2
    assert abs(xs[0] - 1) <= 1e-8 and abs(xs[1] - 2) <= 1e-8


def test_k2_eps_sweep_has_no_exact_crossing():
    s = sweep("K2", TwoSpinParams(1, 2, 0), "eps", 0, 3, 301)
    assert not s.exact_crossings
    assert s.min_pairwise_gap() >= 0.2


def _two_level(p):
    return HamiltonianSpec.from_pairs([(p.omega1, "Z"), (p.omega2, "X")])


def test_avoided_crossing_two_level():
    g = 0.05
    s = sweep(_two_level, TwoSpinParams(0, g, 0), "omega1", -1, 1.3, 41)
    assert not s.exact_crossings
    (ev,) = s.avoided_crossings
    assert abs(ev.gap_at_minimum - 2 * g) <= 1e-9
    assert abs(ev.parameter_value) <= 1e-6
    assert abs(ev.energy) <= 1e-12


def test_exact_tol_override_reclassifies():
    p = TwoSpinParams(0, 0.05, 0)
    s = sweep(_two_level, p, "omega1", -1, 1.3, 41, exact_tol=0.105)
    assert len(s.exact_crossings) == 1 and not s.degenerate_intervals
    # loose enough that several grid points count as degenerate
    s = sweep(_two_level, p, "omega1", -1, 1.3, 41, exact_tol=0.2)
    assert len(s.degenerate_intervals) == 1


def test_k2_gap_law_in_omega1():
    s = sweep("K2", TwoSpinParams(0, 2, 0.5), "omega1", 0, 4, 401)
    inner = [c for c in s.avoided_crossings if abs(c.parameter_value - 2) < 0.1]
    assert len(inner) == 1
    assert abs(inner[0].gap_at_minimum - 1.0) <= 1e-6
    assert abs(inner[0].parameter_value - 2.0) <= 1e-6


def test_degenerate_interval_for_constant_pair():
    # omega2 never touches the I(x)X spectrum at eps=0 -> Z(x)I levels stay paired
    s = sweep("H2", TwoSpinParams(0, 0, 0), "omega2", 0, 1, 5)
    assert s.degenerate_intervals
    iv = s.degenerate_intervals[0]
    assert iv.lo == 0 and iv.hi == 1


def test_match_tracks_follows_crossing_lines():
    x = np.linspace(-1, 1, 21)
    raw = np.sort(np.stack([x, -x], axis=1), axis=1)
    tracks = match_tracks(raw)
    # one track keeps going up through the crossing
    assert np.all(np.diff(tracks[0]) > 0) or np.all(np.diff(tracks[1]) > 0)


def test_sweep_rejects_bad_input():
    p = TwoSpinParams(1, 2, 0)
    with pytest.raises(ValueError):
        sweep("H2", p, "hbar", 0, 1, 10)
    with pytest.raises(ValueError):
        sweep("H2", p, "omega3", 0, 1, 10)
    with pytest.raises(ValueError):
        sweep("H2", p, "eps", 1, 0, 10)
    with pytest.raises(ValueError):
        sweep("H2", p, "eps", 0, 1, 1)


def test_sweep_csv_format():
    s = sweep("H2", TwoSpinParams(1, 2, 0), "eps", 0, 3, 31)
    text = format_sweep_csv(s)
    lines = text.splitlines()
    assert lines[0] == "param,track_0,track_1,track_2,track_3"
    assert len([l for l in lines if not l.startswith("#")]) == 32
    comments = [l for l in lines if l.startswith("# crossing")]
    assert len(comments) == 2
    assert "kind=exact" in comments[0] and "param=1" in comments[0]
    assert format_sweep_csv(s) == text


def test_partition_function_oracle():
    p = TwoSpinParams(1, 2, 0.5)
    for preset, cf in ((preset_H2, closed_form_H2), (preset_K2, closed_form_K2)):
        z = partition_function(eigh(build_matrix(preset(p))), 1.0)
        oracle = sum(math.exp(-v) for v in cf(p).values)
        assert abs(z.value - oracle) <= 1e-10 * oracle
        assert abs(z.log_value - math.log(oracle)) <= 1e-12


def test_partition_function_large_beta_stays_finite_in_log():
    z = partition_function(eigh(np.diag([-800.0, 0.0])), 1.0)
    assert z.value == math.inf
    assert abs(z.log_value - 800.0) <= 1e-9


def test_partition_equal_at_zero_coupling():
    p = TwoSpinParams(1, 2, 0)
    zh = partition_function(eigh(build_matrix(preset_H2(p))), 1.0).value
    zk = partition_function(eigh(build_matrix(preset_K2(p))), 1.0).value
    assert abs(zh - zk) <= 1e-12 * zh


@pytest.mark.parametrize("beta", [0, -1, math.nan])
def test_partition_rejects_beta(beta):
    with pytest.raises(ValueError):
        partition_function(eigh(SZ), beta)
