"""Wave-function routes: regional wraps, unified line integral, the
far-field laws, and the diagnostics."""

import cmath
import math

import numpy as np
import pytest

from wavecut import wiener_hopf as wh
from wavecut.model import ReducedParams, reflection
from wavecut.wavefunction import (Method, expected_displacement, far_field,
                                  phi_integral, psi_approx31, psi_atom,
                                  psi_free, psi_tail_saddle, psi_unified,
                                  psi_unified_extrapolated, scan_grid,
                                  steepest_descent, tail_exponent,
                                  unified_residue_check)

RP = ReducedParams.from_a_k0(1.0, 2.0)
K = RP.K
FAR_CONST = 0.015465667428317294  # a/(pi K^2 sqrt(2 k0 (K+k0))) at a=1, k0=2


# ----------------------------------------------------------------------
# regional forms
# ----------------------------------------------------------------------

def test_psi_free_region_guard():
    with pytest.raises(ValueError):
        psi_free(1.0, 0.0, RP)
    with pytest.raises(ValueError):
        psi_atom(-1.0, 0.0, RP)
    with pytest.raises(ValueError):
        psi_unified(0.0, 0.0, RP)


def test_psi_symmetric_in_y():
    for (R, y) in [(-3.0, 1.25), (-0.7, 4.0)]:
        assert psi_free(R, y, RP).psi == psi_free(R, -y, RP).psi
    s1, s2 = psi_atom(2.0, 0.8, RP), psi_atom(2.0, -0.8, RP)
    assert s1.psi == s2.psi


def test_vertical_leg_decay_validates_neglect():
    # the e^{-t|R|} leg shrinks with |R| (its t ~ 0 end makes the overall
    # decay ~1/|R| rather than exponential), while the segment field only
    # decays like |R|^(-1/2): the leg becomes relatively negligible
    diffs, mains = [], []
    for R in (-1.0, -2.0, -4.0):
        with_leg = psi_free(R, 0.0, RP, tol=1e-11)
        without = psi_free(R, 0.0, RP, tol=1e-11, include_vertical_leg=False)
        diffs.append(abs(with_leg.psi - without.psi))
        mains.append(abs(without.psi))
        # the neglected piece is reported inside err_est
        assert without.err_est >= 0.9 * diffs[-1]
    assert diffs[0] > diffs[1] > diffs[2]
    assert diffs[0] / diffs[2] > 3.0
    rel = [d / m for d, m in zip(diffs, mains)]
    assert rel[0] > rel[1] > rel[2]


def test_methods_recorded():
    assert psi_free(-2.0, 0.5, RP).method is Method.REGIONAL_WITH_VERTICAL_LEG
    assert psi_free(-2.0, 0.5, RP, include_vertical_leg=False).method \
        is Method.REGIONAL
    assert psi_approx31(-2.0, 0.5, RP).method is Method.APPROX_31
    assert psi_atom(2.0, 0.5, RP).method is Method.REGIONAL_WITH_VERTICAL_LEG
    assert far_field(-50.0, 0.0, RP).method is Method.FAR_FIELD_32


def test_total_reflection_segment_suppressed():
    # as k0 -> 0 the segment field vanishes like k0 and only the
    # evanescent leg remains (reported through err_est when neglected)
    rp6 = ReducedParams.from_a_k0(1.0, 1e-6)
    rp4 = ReducedParams.from_a_k0(1.0, 1e-4)
    s6 = psi_free(-2.0, 0.5, rp6, tol=1e-10, include_vertical_leg=False)
    s4 = psi_free(-2.0, 0.5, rp4, tol=1e-10, include_vertical_leg=False)
    assert abs(s6.psi) ** 2 < 2e-6
    assert abs(s6.psi) ** 2 < 1e-2 * abs(s4.psi) ** 2 * 2.0  # ~k0 scaling
    assert s6.err_est > 0.1  # evanescent remnant is order-one at R = -2
    assert reflection(rp6) > 1.0 - 1e-5


@pytest.mark.xfail(strict=True,
                   reason="stated bound |psi|^2 < 1e-8 is unattainable: the "
                          "segment field scales like k0 (~8e-7 at k0=1e-6) "
                          "because 1/S+(x) ~ (K/k0)^(1/2) on the segment")
def test_total_reflection_stated_bound():
    rp6 = ReducedParams.from_a_k0(1.0, 1e-6)
    s6 = psi_free(-2.0, 0.5, rp6, tol=1e-10, include_vertical_leg=False)
    assert abs(s6.psi) ** 2 < 1e-8


def test_psi_atom_incident_unit_and_reflected():
    # the y -> infinity limit kills the bound terms: psi -> -Phi
    s = psi_atom(3.0, 25.0, RP, tol=1e-9)
    phi = phi_integral(3.0, 25.0, RP, tol=1e-9)
    assert abs(s.psi + phi) < 1e-6
    # reflected coefficient modulus^2 equals the reflection probability
    sK = wh.splus_at_K(RP)
    coeff = 2.0 * (RP.K - RP.k0) / (RP.K + RP.k0) * sK * sK
    assert abs(abs(coeff) ** 2 - reflection(RP)) < 1e-12
    assert abs(coeff) ** 2 == pytest.approx(0.011145618, abs=1e-7)


def test_psi_atom_oscillation_period():
    # |psi(R,0)|^2 oscillates with period ~ pi/K from e^{-iKR} vs e^{iKR}
    Rs = np.linspace(0.25, 12.0, 472)
    g = scan_grid(Rs, [0.0], RP, tol=1e-8)
    a2 = np.abs(g.samples[:, 0]) ** 2
    idx = [i for i in range(1, len(a2) - 1)
           if a2[i] >= a2[i - 1] and a2[i] > a2[i + 1]]
    period = float(np.diff(g.R_values[idx]).mean())
    assert period == pytest.approx(math.pi / K, rel=0.05)


def test_phi_far_field_decay():
    vals = [abs(phi_integral(R, 0.0, RP, tol=1e-10)) for R in (10., 20., 40.)]
    assert vals[0] > vals[1] > vals[2]
    assert vals[2] < 0.5 * vals[0]
    assert vals[2] < 1e-3


def test_phi_prefactor_linear_in_a():
    phi_a = phi_integral(4.0, 1.0, ReducedParams.from_a_k0(1e-4, 2.0),
                         tol=1e-12)
    assert abs(phi_a) < 1e-3  # vanishes with the coupling


# ----------------------------------------------------------------------
# unified route
# ----------------------------------------------------------------------

def test_route_equivalence_all_points():
    for (R, y) in [(-5.0, 0.0), (-5.0, 2.0), (3.0, 1.0)]:
        uni = psi_unified_extrapolated(R, y, RP, tol=1e-7)
        reg = (psi_free if R < 0 else psi_atom)(R, y, RP, tol=1e-9)
        dev = abs(uni.psi - reg.psi) / abs(uni.psi)
        assert dev < 1e-4, (R, y, dev)


def test_route_equivalence_awkward_points():
    # near the region boundary, deep field, wide angle, other couplings
    cases = [
        (RP, -0.5, 3.0), (RP, 0.5, 0.2), (RP, 1.0, 0.0), (RP, -12.0, 1.0),
        (ReducedParams.from_a_k0(0.5, 3.0), -4.0, 1.0),
        (ReducedParams.from_a_k0(3.0, 0.7), 2.0, 0.5),
    ]
    for rp, R, y in cases:
        uni = psi_unified_extrapolated(R, y, rp, tol=1e-7)
        reg = (psi_free if R < 0 else psi_atom)(R, y, rp, tol=1e-10)
        dev = abs(uni.psi - reg.psi) / abs(uni.psi)
        assert dev < 1e-4, (rp, R, y, dev)


def test_unified_eps_guard():
    with pytest.raises(ValueError):
        psi_unified(-2.0, 0.0, RP, eps=1e-9)
    with pytest.raises(ValueError):
        psi_unified(-2.0, 0.0, RP, eps=-1.0)


def test_unified_residue_unit_incident():
    assert unified_residue_check(RP) < 1e-6
    assert unified_residue_check(RP, eps=1e-2) < 1e-6


def test_unified_spec_ladder_within_reported_error():
    # with the coarse two-value ladder the deviation must stay within
    # max(1e-4, 10 * err_est) of the regional value
    for (R, y) in [(-5.0, 0.0), (3.0, 1.0)]:
        uni = psi_unified_extrapolated(R, y, RP, eps_values=(1e-2, 1e-3),
                                       tol=1e-7)
        reg = (psi_free if R < 0 else psi_atom)(R, y, RP, tol=1e-9)
        dev = abs(uni.psi - reg.psi)
        assert dev <= max(1e-4 * abs(reg.psi), 10.0 * uni.err_est)


def test_unified_alpha_eps_stable():
    # the normalization constant moves only at first order in eps
    from wavecut.wavefunction import _eps_params
    a1 = _eps_params(RP, 1e-3)[2]
    a2 = _eps_params(RP, 2e-3)[2]
    a0 = 2.0 * a1 - a2  # linear extrapolation
    alpha_exact = 2j * K * wh.splus_at_K(RP) / (K + RP.k0)
    assert abs(a0 - alpha_exact) < 1e-5 * abs(alpha_exact)


# ----------------------------------------------------------------------
# asymptotics
# ----------------------------------------------------------------------

def test_far_field_modulus_constant():
    for R in (-50.0, -100.0, -200.0):
        s = far_field(R, 0.0, RP)
        assert abs(s.psi) * abs(R) == pytest.approx(FAR_CONST, rel=1e-12)


def test_far_field_phase_advance():
    for R in (-50.0, -200.0):
        p0 = far_field(R, 0.0, RP).psi
        p1 = far_field(R, 1.0, RP).psi
        adv = cmath.phase(p0 / p1)
        assert adv == pytest.approx(RP.k0, abs=1e-12)


def test_far_field_modulus_y_independent():
    R = -200.0
    mods = [abs(far_field(R, y, RP).psi) for y in np.linspace(0, 10, 11)]
    assert (max(mods) - min(mods)) / mods[0] < 1e-12


@pytest.mark.xfail(strict=True,
                   reason="the exact free-region field carries a "
                          "branch-point term ~|R|^-1/2 which dominates the "
                          "smooth 1/R law at y=0; the asymptotic matching "
                          "of the two routes fails at any large |R|")
def test_far_field_matches_exact_psi():
    R = -200.0
    exact = psi_free(R, 0.0, RP, tol=1e-9)
    assert abs(abs(far_field(R, 0.0, RP).psi) / abs(exact.psi) - 1.0) < 0.05


def test_exact_field_half_power_decay():
    # |psi(R, 0)| ~ C |R|^(-1/2): doubling R shrinks it by sqrt(2)
    m100 = abs(psi_free(-100.0, 0.0, RP, tol=1e-9).psi)
    m200 = abs(psi_free(-200.0, 0.0, RP, tol=1e-9).psi)
    assert m100 / m200 == pytest.approx(math.sqrt(2.0), rel=0.08)


def test_steepest_descent_structure():
    with pytest.raises(ValueError):
        steepest_descent(25.0, 26.0, RP)  # |xi| >= 1
    with pytest.raises(ValueError):
        steepest_descent(-25.0, 1.0, RP)
    assert steepest_descent(25.0, 0.0, RP) == 0.0  # xi^2 prefactor
    # modulus scales like R^(-1/2) at fixed xi
    r1 = abs(steepest_descent(25.0, 0.3 * 25.0, RP))
    r2 = abs(steepest_descent(100.0, 0.3 * 100.0, RP))
    assert r1 / r2 == pytest.approx(2.0, rel=0.01)


@pytest.mark.xfail(strict=True,
                   reason="printed steepest-descent amplitude carries "
                          "xi^2/(a^2+K^2 xi^2) where the saddle evaluation "
                          "of the exact integrand gives an extra 1/|S+| ~ "
                          "1/xi growth; measured |Phi|/|formula| -> 0.54/xi "
                          "(2.1 at xi=0.3), far outside 10%")
def test_steepest_descent_vs_phi():
    R, y = 25.0, 7.5
    sd = steepest_descent(R, y, RP)
    phi = phi_integral(R, y, RP, tol=1e-10)
    assert abs(sd - phi) / abs(phi) < 0.10


def test_phi_saddle_ratio_structure():
    # the measured ratio |Phi| / |eq-35 form| follows 0.5424/xi
    for xi in (0.15, 0.3):
        R = 100.0
        phi = phi_integral(R, xi * R, RP, tol=1e-9)
        sd = steepest_descent(R, xi * R, RP)
        assert abs(phi) / abs(sd) == pytest.approx(0.5424 / xi, rel=0.25)


def test_tail_saddle_matches_exact():
    for (R, y) in [(-10.0, 80.0), (-10.0, 160.0), (5.0, 120.0)]:
        sad = psi_tail_saddle(R, y, RP)
        exact = (psi_free if R < 0 else psi_atom)(R, y, RP, tol=1e-9)
        assert abs(sad - exact.psi) / abs(exact.psi) < 0.05


# ----------------------------------------------------------------------
# diagnostics
# ----------------------------------------------------------------------

def test_expected_displacement_free_region_grows():
    res = expected_displacement(-10.0, RP, [100.0, 1000.0, 10000.0])
    Ys = [y for _, y in res]
    assert Ys[0] < Ys[1] < Ys[2]
    assert Ys[2] / Ys[1] > 1.5  # no sign of saturation


def test_expected_displacement_symmetry_halving():
    # integrand depends on |y| only; the two-sided integral equals twice
    # the half-line one by construction, so Y is invariant
    res = expected_displacement(5.0, RP, [50.0])
    assert res[0][1] > 0.0


def test_expected_displacement_atom_region_bound_plateau():
    # at small cutoffs the bound pair e^{-a|y|} dominates and Y_L sits
    # near the pure bound-state displacement 1/(2a); the ionized tail
    # (|psi|^2 ~ 1/y, the same outgoing wave as in the free region)
    # takes over at larger L and Y_L grows again
    res = expected_displacement(5.0, RP, [10.0, 100.0, 1000.0])
    y10, y100, y1000 = (v for _, v in res)
    assert y10 == pytest.approx(1.0 / (2.0 * RP.a), rel=0.2)
    assert y10 < y100 < y1000


def test_expected_displacement_validation():
    with pytest.raises(ValueError):
        expected_displacement(0.0, RP, [10.0])
    with pytest.raises(ValueError):
        expected_displacement(-5.0, RP, [10.0, 5.0])


def test_tail_exponent_window():
    slope, err = tail_exponent(-10.0, RP, (30.0, 300.0))
    assert -1.9 < slope < -1.1
    assert err < 0.2
    # window-doubling stability
    slope2, err2 = tail_exponent(-10.0, RP, (30.0, 600.0))
    assert abs(slope2 - slope) < max(3.0 * (err + err2), 0.15)


def test_tail_exponent_rejects_pure_exponential():
    # a decaying exponential has no power-law envelope: the slope runs
    # away and the fit must either fail (too few maxima) or go steep
    with pytest.raises(ValueError):
        tail_exponent(-10.0, RP, (1e-3, 1e-2))


def test_scan_grid_matches_pointwise():
    Rs = [-6.0, -1.0, 2.0]
    ys = [0.0, 1.5, 4.0]
    g = scan_grid(Rs, ys, RP, tol=1e-9)
    for i, R in enumerate(g.R_values):
        for j, y in enumerate(g.y_values):
            ref = (psi_free if R < 0 else psi_atom)(float(R), float(y), RP,
                                                    tol=1e-11)
            assert abs(g.samples[i, j] - ref.psi) < 5e-8


def test_scan_grid_rejects_boundary():
    with pytest.raises(ValueError):
        scan_grid([-1.0, 0.0], [0.0], RP)


def test_unified_grid_worker_determinism(monkeypatch):
    # WAVECUT_WORKERS fans samples out; indexed assembly keeps the grid
    # bitwise identical to the serial result
    monkeypatch.setenv("WAVECUT_WORKERS", "1")
    g1 = scan_grid([-3.0, 2.0], [0.0, 1.0], RP, tol=1e-6,
                   method=Method.UNIFIED_A7)
    monkeypatch.setenv("WAVECUT_WORKERS", "4")
    g4 = scan_grid([-3.0, 2.0], [0.0, 1.0], RP, tol=1e-6,
                   method=Method.UNIFIED_A7)
    assert np.array_equal(g1.samples, g4.samples)
