import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _oracles import brute_force_sum_capacity, scan_rho_star
from gmac_seit import channel, region

SYM10 = channel.from_snr(10, 10, 10, 10)
ASYM = channel.from_snr(10, 3, 5, 7)

pos_snr = st.floats(min_value=1e-6, max_value=1e6, allow_nan=False)
unit = st.floats(min_value=0.0, max_value=1.0, allow_nan=False)
pos_unit = st.floats(min_value=1e-6, max_value=1.0, allow_nan=False)


# --- phi and rho* -----------------------------------------------------------

def test_phi_hand_value():
    assert region.phi(SYM10, 1.0, 1.0, 0.0) == pytest.approx(21 - 121)


def test_phi_degenerate_split():
    assert region.phi(SYM10, 0.0, 1.0, 0.0) == pytest.approx(0.0, abs=1e-12)


@given(pos_snr, pos_snr, pos_unit, pos_unit)
@settings(max_examples=200)
def test_phi_bracket_and_residual(s11, s12, b1, b2):
    cfg = channel.from_snr(s11, s12, 1.0, 1.0)
    # a*c can cancel to zero in float64 at tiny SNR-split products
    assert region.phi(cfg, b1, b2, 0.0) <= 0.0
    assert region.phi(cfg, b1, b2, 1.0) >= 0.0
    rs = region.solve_rho_star(cfg, b1, b2)
    assert 0.0 <= rs < 1.0
    # residual scales with the product of the two exponentiated bounds
    scale = (1.0 + b1 * s11) * (1.0 + b2 * s12)
    assert abs(region.phi(cfg, b1, b2, rs)) < 1e-9 * scale


def test_rho_star_residual_sym10():
    rs = region.solve_rho_star(SYM10, 1.0, 1.0)
    assert abs(region.phi(SYM10, 1.0, 1.0, rs)) < 1e-9
    assert rs == pytest.approx(0.7116, abs=5e-4)


def test_rho_star_matches_dense_scan():
    rs = region.solve_rho_star(ASYM, 0.8, 0.6)
    assert rs == pytest.approx(scan_rho_star(ASYM, 0.8, 0.6), abs=1e-5)


def test_rho_star_zero_branch():
    assert region.solve_rho_star(SYM10, 0.0, 1.0) == 0.0
    assert region.solve_rho_star(channel.from_snr(0, 10, 1, 1), 1.0, 1.0) == 0.0


def test_rho_star_symmetry():
    assert region.solve_rho_star(SYM10, 0.3, 0.7) == \
        pytest.approx(region.solve_rho_star(SYM10, 0.7, 0.3), abs=1e-11)


def test_rho_alpha_branches():
    assert region.solve_rho_alpha(SYM10, 1.0, 0.5, 0.5) == \
        region.solve_rho_star(SYM10, 0.5, 0.5)
    assert region.solve_rho_alpha(SYM10, 0.0, 1.0, 1.0) == \
        pytest.approx(region.solve_rho_star(SYM10, 1.0, 1.0), abs=1e-11)
    assert region.solve_rho_alpha(SYM10, 0.5, 0.0, 1.0) == 0.0


def test_rho_alpha_residual():
    a1, b1, b2 = 0.5, 1.0, 1.0
    x = region.solve_rho_alpha(SYM10, a1, b1, b2)
    assert 0.0 < x < 1.0
    d = 1.0 + a1 * b1 * SYM10.snr11
    a = (1.0 - a1) * b1 * SYM10.snr11
    c = b2 * SYM10.snr12
    lhs = 1.0 + (a + c + 2.0 * x * math.sqrt(a * c)) / d
    rhs = (1.0 + a * (1.0 - x * x) / d) * (1.0 + c * (1.0 - x * x) / d)
    assert lhs == pytest.approx(rhs, abs=1e-9)


# --- xi / rho_min ------------------------------------------------------------

def test_xi_values():
    assert region.xi(SYM10, 15.0) == 0.0
    assert region.xi(SYM10, 31.0) == pytest.approx(0.5)
    assert region.xi(SYM10, channel.max_energy_rate(SYM10)) == \
        pytest.approx(1.0)


def test_xi_infeasible():
    with pytest.raises(region.InfeasibleEnergyRateError):
        region.xi(SYM10, 42.0)
    cfg = channel.from_snr(10, 10, 0, 10)
    with pytest.raises(region.InfeasibleEnergyRateError):
        region.xi(cfg, 11.5)  # above 1 + s21 + s22 with degenerate product
    assert region.xi(cfg, 11.0) == 0.0


@given(pos_unit, pos_unit, st.floats(min_value=0.0, max_value=41.0))
@settings(max_examples=200)
def test_rho_min_matches_xi_at_full_split(b1, b2, b):
    assert region.rho_min(SYM10, 1.0, 1.0, b) == region.xi(SYM10, b)
    assert 0.0 <= region.rho_min(SYM10, b1, b2, b) <= 1.0


def test_rho_min_hand_values():
    assert region.rho_min(SYM10, 0.5, 0.5, 30.0) == 0.0
    assert region.rho_min(SYM10, 1.0, 1.0, 21.0) == 0.0


# --- region boxes ------------------------------------------------------------

def test_region_box_pure_energy():
    box = region.region_box_fb(SYM10, region.OperatingPoint(0.0, 0.0, 0.0))
    assert box.r1_max == box.r2_max == box.rsum_max == 0.0
    assert box.b_max == pytest.approx(channel.max_energy_rate(SYM10))


def test_region_box_hand_values():
    box = region.region_box_fb(SYM10, region.OperatingPoint(1.0, 1.0, 0.0))
    assert box.rsum_max == pytest.approx(0.5 * math.log2(21))
    assert box.b_max == pytest.approx(21.0)
    nf = region.region_box_nf(SYM10, 1.0, 1.0)
    assert nf == box
    assert nf.r1_max == pytest.approx(0.5 * math.log2(11))
    nf2 = region.region_box_nf(SYM10, 1.0, 0.0)
    assert nf2.b_max == pytest.approx(21.0)
    assert nf2.r2_max == 0.0


@given(pos_unit, pos_unit)
@settings(max_examples=100)
def test_region_box_sum_split_at_rho_star(b1, b2):
    rs = region.solve_rho_star(SYM10, b1, b2)
    box = region.region_box_fb(SYM10, region.OperatingPoint(b1, b2, rs))
    assert box.r1_max + box.r2_max == pytest.approx(box.rsum_max, abs=1e-9)


def test_monotonicity_in_rho():
    grid = np.linspace(0.0, 1.0, 20)
    for b1 in grid:
        for b2 in grid:
            boxes = [region.region_box_fb(ASYM,
                                          region.OperatingPoint(b1, b2, r))
                     for r in grid]
            for lo, hi in zip(boxes, boxes[1:]):
                assert hi.r1_max <= lo.r1_max + 1e-12
                assert hi.r2_max <= lo.r2_max + 1e-12
                assert hi.rsum_max >= lo.rsum_max - 1e-12
                assert hi.b_max >= lo.b_max - 1e-12


# --- membership --------------------------------------------------------------

def test_contains_trivial_point():
    assert region.contains(SYM10, region.RateTriplet(0.0, 0.0, 1.0))
    assert region.contains(ASYM, region.RateTriplet(0.0, 0.0, 1.0),
                           feedback=False)


def test_contains_q5_with_and_without_feedback():
    q5 = region.RateTriplet(0.5 * math.log2(11),
                            0.5 * math.log2(1 + 10 / 11), 21.0)
    assert region.contains(SYM10, q5, feedback=True)
    assert region.contains(SYM10, q5, feedback=False)


def test_contains_rejects_absurd_point():
    assert not region.contains(SYM10, region.RateTriplet(10.0, 10.0, 1.0))


# --- capacities in b ----------------------------------------------------------

def test_max_individual_rate_values():
    assert region.max_individual_rate(SYM10, 1, 15.0) == \
        pytest.approx(0.5 * math.log2(11))
    assert region.max_individual_rate(SYM10, 2, 41.0) == pytest.approx(0.0)
    assert region.max_individual_rate(SYM10, 1, 31.0) == \
        pytest.approx(0.5 * math.log2(8.5))


def test_sum_capacity_fb_values():
    rs = region.solve_rho_star(SYM10, 1.0, 1.0)
    assert region.sum_capacity_fb(SYM10, 0.0) == \
        pytest.approx(0.5 * math.log2(21 + 20 * rs))
    assert region.sum_capacity_fb(SYM10, 41.0) == pytest.approx(0.0, abs=1e-12)


def test_sum_capacity_nf_values():
    assert region.sum_capacity_nf(SYM10, 15.0) == \
        pytest.approx(0.5 * math.log2(21))
    assert region.sum_capacity_nf(SYM10, 31.0) == \
        pytest.approx(0.5 * math.log2(11))
    assert region.sum_capacity_nf(SYM10, 41.0) == pytest.approx(0.0, abs=1e-12)


def test_sum_capacity_continuity_at_edges():
    rs = region.solve_rho_star(SYM10, 1.0, 1.0)
    edge_fb = 21.0 + 20.0 * rs
    for cfg, fun, edge in [
            (SYM10, region.sum_capacity_fb, edge_fb),
            (SYM10, region.sum_capacity_fb, 41.0),
            (SYM10, region.sum_capacity_nf, 41.0),
            (ASYM, region.sum_capacity_nf,
             1 + 12 + 2 * math.sqrt(35) * math.sqrt(3 / 10)),
            (ASYM, region.sum_capacity_nf, channel.max_energy_rate(ASYM)),
            (ASYM, region.sum_capacity_fb, channel.max_energy_rate(ASYM))]:
        assert fun(cfg, edge - 1e-12) == pytest.approx(fun(cfg, edge + 1e-12),
                                                       abs=1e-6)


def test_sum_capacity_against_brute_force_asymmetric():
    bs = np.linspace(0.0, channel.max_energy_rate(ASYM), 9)
    fb = brute_force_sum_capacity(ASYM, bs, grid_n=101, feedback=True)
    nf = brute_force_sum_capacity(ASYM, bs, grid_n=101, feedback=False)
    for b, v in zip(bs, fb):
        assert region.sum_capacity_fb(ASYM, b) == pytest.approx(v, abs=1.5e-2)
        assert region.sum_capacity_fb(ASYM, b) >= v - 1e-9  # closed form wins
    for b, v in zip(bs, nf):
        assert region.sum_capacity_nf(ASYM, b) == pytest.approx(v, abs=1.5e-2)
        assert region.sum_capacity_nf(ASYM, b) >= v - 1e-9


def test_time_sharing_matches_nf_capacity_when_unconstrained():
    assert region.time_sharing_sum_rate(SYM10, 15.0, grid_n=21) == \
        pytest.approx(region.sum_capacity_nf(SYM10, 15.0), abs=1e-12)


def test_time_sharing_strictly_below_nf_capacity():
    val = region.time_sharing_sum_rate(SYM10, 31.0, grid_n=101)
    assert val < region.sum_capacity_nf(SYM10, 31.0) - 0.01


def test_time_sharing_infeasible():
    with pytest.raises(region.InfeasibleEnergyRateError):
        region.time_sharing_sum_rate(SYM10, 42.0)


# --- feedback energy gain ------------------------------------------------------

def test_gamma_closed_form_sym10():
    gamma, b_fb = region.b_fb_at_nf_sum_capacity(SYM10)
    assert gamma == pytest.approx(0.1 * (math.sqrt(21) - 1), abs=1e-12)
    assert b_fb == pytest.approx(21 + 2 * math.sqrt((1 - gamma) * 100))
    # defining constraint: NF sum capacity recovered at b_fb
    x = region.xi(SYM10, b_fb)
    lhs = 0.5 * math.log2(1 + 20)
    rhs = math.log2(1 + (1 - x * x) * 10)
    assert lhs == pytest.approx(rhs, abs=1e-9)


def test_gamma_symmetric_form_and_swap():
    s = 3.7
    cfg = channel.from_snr(s, s, 1, 2)
    gamma, _ = region.b_fb_at_nf_sum_capacity(cfg)
    assert gamma == pytest.approx((1 / s) * (math.sqrt(1 + 2 * s) - 1))
    swapped = channel.from_snr(5, 2, 1, 1)
    flipped = channel.from_snr(2, 5, 1, 1)
    assert region.b_fb_at_nf_sum_capacity(swapped)[0] == \
        pytest.approx(region.b_fb_at_nf_sum_capacity(flipped)[0])


def test_gamma_vanishes_at_high_snr():
    cfg = channel.from_snr(1e8, 1e8, 1e8, 1e8)
    gamma, _ = region.b_fb_at_nf_sum_capacity(cfg)
    assert gamma < 1e-3


def test_degenerate_snr_rejected():
    with pytest.raises(region.DegenerateSnrError):
        region.b_fb_at_nf_sum_capacity(channel.from_snr(0, 10, 1, 1))


@given(pos_snr, pos_snr, pos_snr, pos_snr)
@settings(max_examples=1000, deadline=None)
def test_gain_ratio_bounds(s11, s12, s21, s22):
    cfg = channel.from_snr(s11, s12, s21, s22)
    ratio = region.feedback_gain_ratio(cfg)
    assert 1.0 <= ratio <= 2.0


def test_gain_ratio_limit_values():
    mk = lambda eta: region.AsymmetryRatios(nu_i=1.0, eta_i=eta, psi_i=1.0)
    assert region.gain_ratio_limit_high_snr(mk(1.0)) == pytest.approx(2.0)
    assert region.gain_ratio_limit_high_snr(mk(4.0)) == pytest.approx(1.8)
    assert region.gain_ratio_limit_high_snr(mk(0.25)) == pytest.approx(1.8)


def test_asymmetry_ratios_from_config():
    ar = region.AsymmetryRatios.from_config(ASYM, i=1)
    assert ar.nu_i == pytest.approx(10 / 3)
    assert ar.eta_i == pytest.approx(5 / 7)
    assert ar.psi_i == pytest.approx(0.5)


# --- boundary sampling ----------------------------------------------------------

def test_sample_boundary_includes_pure_energy_point():
    triplets = region.sample_boundary(SYM10, feedback=True, resolution=2)
    assert any(t.r1 == 0.0 and t.r2 == 0.0 and t.b == pytest.approx(41.0)
               for t in triplets)


def test_sample_boundary_members_pass_contains():
    for fb in (True, False):
        for t in region.sample_boundary(ASYM, feedback=fb, resolution=8):
            assert region.contains(ASYM, t, feedback=fb, grid_n=8)


def test_sample_boundary_is_pareto():
    ts = region.sample_boundary(SYM10, feedback=True, resolution=6)
    arr = np.array([(t.r1, t.r2, t.b) for t in ts])
    for k, p in enumerate(arr):
        ge = (arr >= p).all(axis=1)
        gt = (arr > p).any(axis=1)
        dominators = ge & gt
        dominators[k] = False
        assert not dominators.any()


def test_no_feedback_boundary_inside_feedback_region():
    for t in region.sample_boundary(SYM10, feedback=False, resolution=12):
        assert region.contains(SYM10, t, feedback=True, grid_n=12)


def test_csv_round_trip(tmp_path):
    recs = region.sample_boundary_records(ASYM, feedback=True, resolution=4)
    path = tmp_path / "boundary.csv"
    with open(path, "w") as fh:
        region.records_to_csv(recs, fh)
    with open(path) as fh:
        back = region.records_from_csv(fh)
    assert back == recs
