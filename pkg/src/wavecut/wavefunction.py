"""Two-particle wave function in both regions, asymptotics, diagnostics.

The wave function follows from one shifted-line integral (the unified
route, psi_unified):

    psi(R, y) = (a alpha / 2 pi) int_{Im k = c} (k + k0)/w(k)
                e^{-i k R - |y| w(k)} / ((k^2 - K^2) S+(k)) dk,

with w = sqrt(k^2 - k0^2) carrying small positive Im k0, and alpha fixed
so the pole at k = +K reproduces a unit-amplitude incident bound pair,
alpha = 2 i K S+(K)/(K + k0).

Closing the contour gives the regional forms.  For R < 0 (interaction-free
region) only the wrap around the upper branch cut survives:

    psi = pref/(2 pi) int_0^{k0} sqrt((k0+x)/(k0-x)) e^{-i x R}
              2 cos(|y| q) / (S+(x) (K^2 - x^2)) dx   + vertical leg,

q = sqrt(k0^2 - x^2), pref = 2 a K S+(K)/(K + k0): both sides of the cut
contribute (S+ is analytic across it), which is why a cosine appears and
not the single exponential of the one-sided segment approximation (kept
separately as the APPROX_31 method).  For R > 0 the poles give the incident and
reflected pair and the lower wrap gives the ionized field Phi; there S+
continues as S * S-, so it jumps across the cut by -(a - i q)/(a + i q)
and the two sides combine with that extra phase.

Far-field closed forms: the smooth 1/R law (far_field) with entanglement
phase e^{-i k0 |y|}, and the steepest-descent outgoing wave for R > 0
(steepest_descent).  Note the exact field for R < 0 also contains a
branch-point contribution decaying like |R|^(-1/2) which dominates the
1/R component at any fixed |y|; see the saddle form psi_tail_saddle.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from .model import ReducedParams
from .quadrature import Kind, QuadratureSpec, integrate
from .specfun import dilog, im_ti2, ti2
from .wiener_hopf import splus_array, splus_at_K

PI = math.pi

__all__ = [
    "Method", "WaveSample", "WaveGrid", "AsymptoticPhases",
    "psi_free", "psi_approx31", "psi_atom", "phi_integral", "psi_unified",
    "psi_unified_extrapolated", "unified_residue_check", "far_field",
    "steepest_descent", "asymptotic_phases", "psi_tail_saddle",
    "expected_displacement", "tail_exponent", "scan_grid",
]


class Method(Enum):
    REGIONAL = "regional"
    REGIONAL_WITH_VERTICAL_LEG = "regional_with_vertical_leg"
    UNIFIED_A7 = "unified_a7"
    FAR_FIELD_32 = "far_field_32"
    STEEPEST_35 = "steepest_35"
    APPROX_31 = "approx_31"


@dataclass(frozen=True)
class WaveSample:
    R: float
    y: float
    psi: complex
    err_est: float
    method: Method
    converged: bool = True


@dataclass(frozen=True)
class WaveGrid:
    params: ReducedParams
    R_values: np.ndarray
    y_values: np.ndarray
    samples: np.ndarray          # complex, shape (len(R), len(y))
    method: Method
    tol: float
    err: np.ndarray | None = None
    converged: np.ndarray | None = None


@dataclass(frozen=True)
class AsymptoticPhases:
    phi_minus: float
    phi_plus: float
    xi: float


def _pref(rp: ReducedParams) -> complex:
    return 2.0 * rp.a * rp.K * splus_at_K(rp) / (rp.K + rp.k0)


def _hint_t(rp: ReducedParams, R: float, y: float) -> float:
    # phase -xR - |y| q in t = sqrt(k0 - x): |d phase/dt| <~ 2 sqrt(k0)|R|
    # + 2 sqrt(2 k0)|y|
    rate = 2.0 * math.sqrt(rp.k0) * abs(R) + 2.0 * math.sqrt(2 * rp.k0) * abs(y)
    return 2.0 * PI / max(rate, 2.0)


def _main_wrap_integral(R: float, y: float, rp: ReducedParams, tol: float,
                        single_exponential: bool):
    """Segment part over (0, k0) via x = k0 - t^2 (exact in t).

    Returns the integral of sqrt((k0+x)/(k0-x)) e^{-ixR} OSC /
    (S+(x)(K^2-x^2)) dx with OSC = 2 cos(|y| q) (wrap) or e^{-i|y|q}
    (single exponential)."""
    a, k0, K = rp.a, rp.k0, rp.K
    ay = abs(y)

    def f(t: np.ndarray) -> np.ndarray:
        g = np.sqrt(2.0 * k0 - t * t)
        x = k0 - t * t
        q = t * g
        if single_exponential:
            osc = np.exp(-1j * ay * q)
        else:
            osc = 2.0 * np.cos(ay * q)
        sp = splus_array(x, rp)
        return 2.0 * g * np.exp(-1j * x * R) * osc / (sp * (K * K - x * x))

    spec = QuadratureSpec(Kind.FINITE, (0.0, math.sqrt(k0)), tol=tol,
                          oscillation_hint=_hint_t(rp, R, y))
    return integrate(f, spec)


def _leg_integral(R: float, y: float, rp: ReducedParams, tol: float):
    """Vertical-leg integral for R < 0 (decays like e^{-t|R|})."""
    a, k0, K = rp.a, rp.k0, rp.K
    ay, aR = abs(y), abs(R)

    def f(t: np.ndarray) -> np.ndarray:
        v = np.sqrt(k0 * k0 + t * t)
        sp = splus_array(1j * t, rp)
        return ((k0 + 1j * t) / v * np.exp(-t * aR) * 2.0 * np.cos(ay * v)
                / ((t * t + K * K) * sp))

    spec = QuadratureSpec(Kind.DECAYING_RAY, (0.0, 1.0, aR), tol=tol,
                          oscillation_hint=2.0 * PI / max(ay, 0.5))
    return integrate(f, spec)


def psi_free(R: float, y: float, rp: ReducedParams, tol: float = 1e-8,
             include_vertical_leg: bool = True) -> WaveSample:
    """Wave function in the interaction-free region R < 0.

    Exact wrap of the upper branch-cut contour: the (0, k0) segment with
    both cut sides (cosine form) plus, optionally, the leg along the
    positive imaginary axis whose contribution decays like e^{-t|R|}.
    With include_vertical_leg=False the leg magnitude (the evanescent
    correction) is estimated and reported inside err_est.
    """
    if R >= 0.0:
        raise ValueError("psi_free requires R < 0")
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    pref = _pref(rp)
    scale = abs(pref) / (2.0 * PI)
    main = _main_wrap_integral(R, y, rp, tol / max(scale, 1e-30), False)
    psi = pref / (2.0 * PI) * main.value
    err = scale * main.err_est
    ok = main.converged
    if include_vertical_leg:
        leg = _leg_integral(R, y, rp, tol / max(scale, 1e-30))
        psi += -1j * pref / (2.0 * PI) * leg.value
        err += scale * leg.err_est
        ok = ok and leg.converged
        method = Method.REGIONAL_WITH_VERTICAL_LEG
    else:
        # neglected evanescent piece, reported but not added
        leg = _leg_integral(R, y, rp, max(100 * tol, 1e-6) / max(scale, 1e-30))
        err += scale * abs(leg.value)
        method = Method.REGIONAL
    return WaveSample(R, y, psi, err, method, ok)


def psi_approx31(R: float, y: float, rp: ReducedParams,
                 tol: float = 1e-8) -> WaveSample:
    """Single-exponential small-|y| approximation for R < 0 (one cut side,
    no leg).  Kept as its own method; differs from the exact wrap at O(1)."""
    if R >= 0.0:
        raise ValueError("psi_approx31 requires R < 0")
    pref = _pref(rp)
    scale = abs(pref) / (2.0 * PI)
    main = _main_wrap_integral(R, y, rp, tol / max(scale, 1e-30), True)
    return WaveSample(R, y, pref / (2.0 * PI) * main.value,
                      scale * main.err_est, Method.APPROX_31, main.converged)


def _phi_pieces(R: float, y: float, rp: ReducedParams, tol: float):
    """Lower-wrap (ionized-field) contour pieces for R > 0.

    Across the lower cut the continued plus factor jumps by
    -(a - i q)/(a + i q); equivalently the far side carries the factor
    jump = (a + i q)/(a - i q) on its e^{-i|y|q} exponential.
    """
    a, k0, K = rp.a, rp.k0, rp.K
    ay = abs(y)

    def f_h(t: np.ndarray) -> np.ndarray:
        g = np.sqrt(2.0 * k0 - t * t)
        x = -k0 + t * t
        q = t * g
        jump = (a + 1j * q) / (a - 1j * q)
        osc = jump * np.exp(-1j * ay * q) - np.exp(1j * ay * q)
        sp = splus_array(x, rp)
        return (2.0 * t * t / g) * np.exp(-1j * x * R) * osc / (
            sp * (x * x - K * K))

    spec_h = QuadratureSpec(Kind.FINITE, (0.0, math.sqrt(k0)), tol=tol,
                            oscillation_hint=_hint_t(rp, R, y))
    res_h = integrate(f_h, spec_h)

    def f_v(t: np.ndarray) -> np.ndarray:
        v = np.sqrt(k0 * k0 + t * t)
        jump = (a + 1j * v) / (a - 1j * v)
        osc = np.exp(1j * ay * v) - jump * np.exp(-1j * ay * v)
        sp = splus_array(-1j * t, rp)
        return (k0 - 1j * t) / v * np.exp(-t * R) * osc / (
            (t * t + K * K) * sp)

    spec_v = QuadratureSpec(Kind.DECAYING_RAY, (0.0, 1.0, R), tol=tol,
                            oscillation_hint=2.0 * PI / max(ay, 0.5))
    res_v = integrate(f_v, spec_v)
    return res_h, res_v


def phi_integral(R: float, y: float, rp: ReducedParams,
                 tol: float = 1e-8) -> complex:
    """Ionized-field contour integral Phi(R, y) for R > 0."""
    if R <= 0.0:
        raise ValueError("phi_integral requires R > 0")
    pref = _pref(rp)
    res_h, res_v = _phi_pieces(R, y, rp, tol * 2.0 * PI / abs(pref))
    # Phi = (i pref / 2 pi) (i I_H + I_V)
    return pref / (2.0 * PI) * (-res_h.value + 1j * res_v.value)


def psi_atom(R: float, y: float, rp: ReducedParams,
             tol: float = 1e-8) -> WaveSample:
    """Wave function in the interacting region R > 0: incident bound pair
    + reflected pair - ionized field Phi."""
    if R <= 0.0:
        raise ValueError("psi_atom requires R > 0")
    a, k0, K = rp.a, rp.k0, rp.K
    ay = abs(y)
    sK = splus_at_K(rp)
    inc = cmath.exp(-1j * K * R - a * ay)
    refl_coeff = 2.0 * (a * a / (K + k0)) / (K + k0) * sK * sK
    refl = refl_coeff * cmath.exp(1j * K * R - a * ay)
    pref = _pref(rp)
    scale = abs(pref) / (2.0 * PI)
    res_h, res_v = _phi_pieces(R, y, rp, tol / max(scale, 1e-30))
    phi = pref / (2.0 * PI) * (-res_h.value + 1j * res_v.value)
    err = scale * (res_h.err_est + res_v.err_est)
    return WaveSample(R, y, inc + refl - phi, err,
                      Method.REGIONAL_WITH_VERTICAL_LEG,
                      res_h.converged and res_v.converged)


# ----------------------------------------------------------------------
# unified shifted-line route
# ----------------------------------------------------------------------

def _eps_params(rp: ReducedParams, eps: float):
    k0e = complex(rp.k0, eps)
    Ke = cmath.sqrt(k0e * k0e + rp.a * rp.a)
    sKe = (cmath.sqrt((Ke + k0e) / (2.0 * Ke))
           * cmath.exp(-(1.0 / PI) * ti2(1j * rp.a / Ke)))
    alpha = 2j * Ke * sKe / (Ke + k0e)
    return k0e, Ke, alpha


def unified_residue_check(rp: ReducedParams, eps: float = 1e-3,
                          n_points: int = 256) -> float:
    """|incident coefficient - 1| for the frozen alpha convention.

    The residue of the line integrand at k = +K (picked up when the
    contour closes for R > 0) is extracted numerically on a small circle
    around K and must reproduce the unit-amplitude incident pair."""
    from . import _backend
    a = rp.a
    k0e, Ke, alpha = _eps_params(rp, eps)
    r = 0.2 * min(abs(Ke - k0e), abs(Ke))
    th = (np.arange(n_points) + 0.5) * (2.0 * PI / n_points)
    k = Ke + r * np.exp(1j * th)
    w = np.sqrt(k * k - k0e * k0e)
    sp = _backend.splus(np.ascontiguousarray(k), a, k0e, Ke)
    # integrand at R = 0, y = 0 up to the e^{-ikR-|y|w} factor, whose
    # value at k = K is supplied analytically (e^{-iKR-a|y|} coefficient)
    f = (k + k0e) / w / ((k * k - Ke * Ke) * sp)
    res = np.mean(f * r * np.exp(1j * th))  # (1/2pi i) contour integral
    coeff = -1j * a * alpha * res
    return abs(coeff - 1.0)


def psi_unified(R: float, y: float, rp: ReducedParams, eps: float = 1e-3,
                tol: float = 1e-7) -> WaveSample:
    """Single shifted-line integral along Im k = c, Im K < c < Im k0 = eps.

    Works in both regions (R != 0).  The value carries an O(eps) bias;
    psi_unified_extrapolated removes it.  eps below ~2e-5 K is rejected:
    the line-to-pole distance shrinks like 0.05 eps and the quadrature
    can no longer resolve the pole spike.
    """
    if R == 0.0:
        raise ValueError("the two contour closures degenerate at R = 0")
    if eps <= 0.0:
        raise ValueError("eps must be positive")
    if eps < 2e-5 * max(rp.K, 1.0):
        raise ValueError("eps too small: pole distance below quadrature "
                         "resolution")
    a = rp.a
    ay = abs(y)
    k0e, Ke, alpha = _eps_params(rp, eps)
    c = 0.5 * (eps + Ke.imag)

    def f(x: np.ndarray) -> np.ndarray:
        k = x + 1j * c
        w = np.sqrt(k * k - k0e * k0e)
        from . import _backend
        sp = _backend.splus(np.ascontiguousarray(k, dtype=np.complex128),
                            a, k0e, Ke)
        return (k + k0e) / w * np.exp(-1j * k * R - ay * w) / (
            (k * k - Ke * Ke) * sp)

    aR = abs(R)
    X = max(50.0, rp.K + 10.0, (1.0 / (tol * max(aR, 0.3) ** 2)) ** (1.0 / 3.0))
    if ay > 0:
        X = min(X, max(rp.K + 10.0, 45.0 / ay + rp.K))
    d = max(c - Ke.imag, 1e-9)
    Kr = Ke.real
    cuts = []
    for p in (-Kr, -rp.k0, rp.k0, Kr):
        cuts.extend([p - 30 * d, p - 3 * d, p + 3 * d, p + 30 * d, p - 0.4,
                     p + 0.4])
    edges = sorted({-X, X, *[e for e in cuts if -X < e < X]})
    hint = 2.0 * PI / (aR + ay + 1.0)
    total = 0j
    err = 0.0
    ok = True
    neval = 0
    for lo, hi in zip(edges[:-1], edges[1:]):
        spec = QuadratureSpec(Kind.FINITE, (lo, hi),
                              tol=tol / (len(edges) - 1),
                              oscillation_hint=hint, max_subdivisions=6000)
        res = integrate(f, spec)
        total += res.value
        err += res.err_est
        ok = ok and res.converged
        neval += res.evaluations
    # one-step integration-by-parts truncation correction at both ends
    if aR > 0:
        fX = complex(f(np.array([X]))[0])
        fmX = complex(f(np.array([-X]))[0])
        total += (fX - fmX) / (1j * R)
        err += (abs(fX) + abs(fmX)) / (R * R * X) * 10.0
    pref = a * alpha / (2.0 * PI)
    return WaveSample(R, y, pref * total, abs(pref) * err,
                      Method.UNIFIED_A7, ok)


def psi_unified_extrapolated(R: float, y: float, rp: ReducedParams,
                             eps_values: Sequence[float] = (3e-3, 1e-3, 3e-4),
                             tol: float = 1e-7) -> WaveSample:
    """Richardson extrapolation of psi_unified to eps -> 0 (linear for two
    eps values, quadratic for three).

    The eps bias is dominantly linear with a weak non-polynomial tail, so
    closely spaced small eps values extrapolate better than a wide ladder.
    """
    samples = [psi_unified(R, y, rp, eps=e, tol=tol) for e in eps_values]
    es = np.array(eps_values, dtype=float)
    vs = np.array([s.psi for s in samples])
    while len(vs) > 1:
        vs = (es[:-1] * vs[1:] - es[1:] * vs[:-1]) / (es[:-1] - es[1:])
        es = es[1:]
    err = sum(s.err_est for s in samples) + abs(vs[0] - samples[-1].psi) * 0.1
    return WaveSample(R, y, complex(vs[0]), err, Method.UNIFIED_A7,
                      all(s.converged for s in samples))


# ----------------------------------------------------------------------
# asymptotics
# ----------------------------------------------------------------------

def asymptotic_phases(rp: ReducedParams, xi: float) -> AsymptoticPhases:
    """Far-field phase constants.

    phi_minus = (2/pi) Im Ti2((k0 + i a)/K);
    phi_plus  = Li2(a^2/K^2)/2 - 2 Li2(a/K)
                - Im Ti2((k0 xi + i a)/(K - k0 + k0 xi^2 / 2)).
    """
    if abs(xi) >= 1.0:
        raise ValueError("xi = y/R must satisfy |xi| < 1")
    a, k0, K = rp.a, rp.k0, rp.K
    pm = (2.0 / PI) * im_ti2(complex(k0, a) / K)
    z = complex(k0 * xi, a) / (K - k0 + 0.5 * k0 * xi * xi)
    # at xi = 0 the argument sits on the arctangent-integral cut; take the
    # side continuous from xi > 0
    side = 1 if z.real == 0.0 else None
    pp = (0.5 * dilog(a * a / (K * K)).real - 2.0 * dilog(a / K).real
          - im_ti2(z, side=side))
    return AsymptoticPhases(phi_minus=pm, phi_plus=pp, xi=xi)


def far_field(R: float, y: float, rp: ReducedParams) -> WaveSample:
    """Smooth far-field law for R -> -inf, |y| << |R|:

        psi ~ a e^{-i (k0 |y| + phi_minus)} / (i pi K^2 R sqrt(2 k0 (K+k0)))

    The modulus is y-independent while the phase advances by k0 per unit
    |y| (the entanglement signature).  This is the k ~ 0 component of the
    segment integral; the exact field also carries a branch-point term
    ~|R|^(-1/2) not described by this law.
    """
    if R >= 0.0:
        raise ValueError("far_field requires R < 0")
    a, k0, K = rp.a, rp.k0, rp.K
    pm = (2.0 / PI) * im_ti2(complex(k0, a) / K)
    amp = a / (1j * PI * K * K * R * math.sqrt(2.0 * k0 * (K + k0)))
    psi = amp * cmath.exp(-1j * (k0 * abs(y) + pm))
    return WaveSample(R, y, psi, 0.0, Method.FAR_FIELD_32)


def steepest_descent(R: float, y: float, rp: ReducedParams) -> complex:
    """Steepest-descent form of the ionized field for R > 0, k0 R >> 1:

        Phi ~ i^(3/2) k0 a / (4 sqrt(pi) sqrt(k0 R)) * xi^2/(a^2+K^2 xi^2)
              * sqrt((k0/K)(K+k0)/(K + k0 xi^2/2))
              * exp[i(k0 R (1 - xi^2/2) + (2/pi) phi_plus)]

    with xi = y/R, |xi| < 1.
    """
    if R <= 0.0:
        raise ValueError("steepest_descent requires R > 0")
    xi = y / R
    if xi == 0.0:
        return 0j  # forward direction carries no ionized flux here
    ph = asymptotic_phases(rp, xi)
    a, k0, K = rp.a, rp.k0, rp.K
    amp = (cmath.exp(0.75j * PI) * k0 * a / (4.0 * math.sqrt(PI * k0 * R))
           * xi * xi / (a * a + K * K * xi * xi)
           * math.sqrt((k0 / K) * (K + k0) / (K + 0.5 * k0 * xi * xi)))
    return amp * cmath.exp(1j * (k0 * R * (1.0 - 0.5 * xi * xi)
                                 + (2.0 / PI) * ph.phi_plus))


def psi_tail_saddle(R: float, y: float, rp: ReducedParams) -> complex:
    """Stationary-phase form of the exact field for |y| >> 1 (either
    region): an outgoing circular wave e^{i k0 sqrt(R^2+y^2)} of amplitude
    ~ y^(-1/2), evaluated at the interior saddle x* = -k0 R/sqrt(R^2+y^2).

    Used for the displacement diagnostic beyond the exact-quadrature
    window; accuracy a few percent once the saddle width clears the
    segment ends."""
    a, k0, K = rp.a, rp.k0, rp.K
    ay = abs(y)
    if ay == 0.0:
        raise ValueError("saddle form needs |y| > 0")
    rho = math.hypot(R, y)
    xs = -k0 * R / rho
    qs = k0 * ay / rho
    sp = complex(splus_array(np.array([xs + 0j]), rp)[0])
    amp = (math.sqrt((k0 + xs) / (k0 - xs))
           * math.sqrt(2.0 * PI * qs ** 3 / (ay * k0 * k0))
           / ((K * K - xs * xs) * sp))
    return (_pref(rp) / (2.0 * PI) * amp
            * cmath.exp(1j * (k0 * rho - 0.25 * PI)))


# ----------------------------------------------------------------------
# grid evaluation (shared fixed panels, vectorized across samples)
# ----------------------------------------------------------------------

def _fixed_nodes(t0: float, t1: float, n_panels: int):
    from .quadrature import _NODES, _W15, _W7
    edges = np.linspace(t0, t1, n_panels + 1)
    c = 0.5 * (edges[:-1] + edges[1:])
    h = 0.5 * (edges[1:] - edges[:-1])
    ts = (c[:, None] + h[:, None] * _NODES[None, :])
    w15 = h[:, None] * _W15[None, :]
    w7 = h[:, None] * _W7[None, :]
    return ts.ravel(), w15.ravel(), w7.ravel(), n_panels


def _scan_region(rp: ReducedParams, R_vals: np.ndarray, y_vals: np.ndarray,
                 tol: float, single_exponential: bool,
                 include_legs: bool = True):
    """All-pairs evaluation for one sign of R with shared nodes."""
    a, k0, K = rp.a, rp.k0, rp.K
    neg = bool(R_vals[0] < 0)
    Rmax = float(np.max(np.abs(R_vals)))
    Rmin = float(np.min(np.abs(R_vals)))
    ymax = float(np.max(np.abs(y_vals)))
    pref = _pref(rp)
    sK = splus_at_K(rp)

    # quarter-wavelength initial panels for the worst sample of the grid
    rate = 2.0 * math.sqrt(k0) * Rmax + 2.0 * math.sqrt(2 * k0) * ymax
    n_panels = int(min(6000, max(24, math.ceil(
        math.sqrt(k0) * rate * 2.0 / PI))))
    ts, w15, w7, npan = _fixed_nodes(0.0, math.sqrt(k0), n_panels)
    w15 = w15.reshape(npan, 15)
    w7 = w7.reshape(npan, 15)
    g = np.sqrt(2.0 * k0 - ts * ts)
    xs = (k0 - ts * ts) if neg else (-k0 + ts * ts)
    qs = ts * g
    sp = splus_array(xs, rp)
    if neg:
        base = 2.0 * g / (sp * (K * K - xs * xs))
        jump_h = None
    else:
        base = (2.0 * ts * ts / g) / (sp * (xs * xs - K * K))
        jump_h = (a + 1j * qs) / (a - 1j * qs)

    # leg nodes on the unit-rate rational map u = s/(1-s);
    # the per-sample factor e^{-u |R|} supplies the decay
    phase_ray = ymax * min(30.0 / max(Rmin, 1e-3), 1e4)
    n_ray = int(min(3000, max(24, math.ceil(phase_ray * 2.0 / PI))))
    ss, v15, v7, nray = _fixed_nodes(0.0, 1.0 - 1e-6, n_ray)
    v15 = v15.reshape(nray, 15)
    v7 = v7.reshape(nray, 15)
    u = ss / (1.0 - ss)
    jac = 1.0 / (1.0 - ss) ** 2
    vv = np.sqrt(k0 * k0 + u * u)
    sp_leg = splus_array((1j if neg else -1j) * u, rp)
    if neg:
        leg_base = (k0 + 1j * u) / vv / ((u * u + K * K) * sp_leg) * jac
        jump_v = None
    else:
        leg_base = (k0 - 1j * u) / vv / ((u * u + K * K) * sp_leg) * jac
        jump_v = (a + 1j * vv) / (a - 1j * vv)

    def pair(fv, wa, wb):
        rows = fv.reshape(-1, 15)
        s15 = (rows * wa).sum(axis=1)
        s7 = (rows * wb).sum(axis=1)
        return s15.sum(), float(np.abs(s15 - s7).sum())

    nR, ny = len(R_vals), len(y_vals)
    out = np.empty((nR, ny), dtype=np.complex128)
    err = np.empty((nR, ny))
    sc = abs(pref) / (2 * PI)
    for i, R in enumerate(R_vals):
        osc_R = np.exp(-1j * xs * R)
        osc_leg_R = np.exp(-abs(R) * u)
        for j, y in enumerate(y_vals):
            ay = abs(y)
            if neg:
                if single_exponential:
                    oscy = np.exp(-1j * ay * qs)
                else:
                    oscy = 2.0 * np.cos(ay * qs)
                m, em = pair(base * osc_R * oscy, w15, w7)
                val = pref / (2 * PI) * m
                e = sc * em
                if not single_exponential and include_legs:
                    lf = leg_base * osc_leg_R * (2.0 * np.cos(ay * vv))
                    lv, el = pair(lf, v15, v7)
                    val += -1j * pref / (2 * PI) * lv
                    e += sc * el
            else:
                oscy = jump_h * np.exp(-1j * ay * qs) - np.exp(1j * ay * qs)
                h, eh = pair(base * osc_R * oscy, w15, w7)
                lf = leg_base * osc_leg_R * (np.exp(1j * ay * vv)
                                             - jump_v * np.exp(-1j * ay * vv))
                lv, el = pair(lf, v15, v7)
                phi = pref / (2 * PI) * (-h + 1j * lv)
                e = sc * (eh + el)
                val = (cmath.exp(-1j * K * R - a * ay)
                       + 2.0 * (a * a / (K + k0) ** 2) * sK * sK
                       * cmath.exp(1j * K * R - a * ay) - phi)
            out[i, j] = val
            err[i, j] = e
    return out, err


def scan_grid(R_values: Iterable[float], y_values: Iterable[float],
              rp: ReducedParams, tol: float = 1e-8,
              method: Method = Method.REGIONAL_WITH_VERTICAL_LEG) -> WaveGrid:
    """Evaluate psi on the product grid R_values x y_values.

    Uses fixed shared quadrature panels (plus-factor values computed once
    per grid) with the embedded-pair error estimate per sample; samples
    whose estimate exceeds tol are re-evaluated adaptively.  R = 0 is
    excluded.  Deterministic: fixed panel layout and summation order.
    """
    R_vals = np.asarray(sorted(set(float(r) for r in R_values)))
    y_vals = np.asarray(sorted(set(float(v) for v in y_values)))
    if len(R_vals) == 0 or len(y_vals) == 0:
        raise ValueError("empty grid")
    if np.any(R_vals == 0.0):
        raise ValueError("R = 0 is excluded (region boundary)")
    single = method is Method.APPROX_31
    if method in (Method.FAR_FIELD_32, Method.STEEPEST_35, Method.UNIFIED_A7):
        return _scan_special(R_vals, y_vals, rp, tol, method)

    legs = method is Method.REGIONAL_WITH_VERTICAL_LEG
    out = np.empty((len(R_vals), len(y_vals)), dtype=np.complex128)
    err = np.empty_like(out, dtype=float)
    for mask in (R_vals < 0, R_vals > 0):
        if not mask.any():
            continue
        vals, errs = _scan_region(rp, R_vals[mask], y_vals, tol, single,
                                  include_legs=legs)
        out[mask] = vals
        err[mask] = errs
    conv = err <= tol
    # adaptive fallback for the stragglers
    for i, j in zip(*np.nonzero(~conv)):
        R, y = float(R_vals[i]), float(y_vals[j])
        try:
            if R < 0:
                s = (psi_approx31(R, y, rp, tol) if single
                     else psi_free(R, y, rp, tol, include_vertical_leg=legs))
            else:
                s = psi_atom(R, y, rp, tol)
            out[i, j] = s.psi
            err[i, j] = s.err_est
            conv[i, j] = s.converged and s.err_est <= tol
        except ValueError:
            pass
    return WaveGrid(rp, R_vals, y_vals, out, method, tol, err, conv)


def _worker_count() -> int:
    import os
    try:
        return max(1, int(os.environ.get("WAVECUT_WORKERS", "1")))
    except ValueError:
        return 1


def _scan_special(R_vals, y_vals, rp, tol, method):
    out = np.empty((len(R_vals), len(y_vals)), dtype=np.complex128)
    err = np.zeros_like(out, dtype=float)
    conv = np.ones(out.shape, dtype=bool)
    if method is Method.UNIFIED_A7:
        # samples are independent; WAVECUT_WORKERS fans them out, and the
        # indexed writes keep the assembled grid deterministic
        from concurrent.futures import ThreadPoolExecutor
        tasks = [(i, j, float(R), float(y))
                 for i, R in enumerate(R_vals)
                 for j, y in enumerate(y_vals)]

        def run(task):
            i, j, R, y = task
            s = psi_unified_extrapolated(R, y, rp, tol=tol)
            return i, j, s

        nw = _worker_count()
        if nw > 1:
            with ThreadPoolExecutor(max_workers=nw) as pool:
                results = list(pool.map(run, tasks))
        else:
            results = [run(t) for t in tasks]
        for i, j, s in results:
            out[i, j] = s.psi
            err[i, j] = s.err_est
            conv[i, j] = s.converged
        return WaveGrid(rp, R_vals, y_vals, out, method, tol, err, conv)
    for i, R in enumerate(R_vals):
        for j, y in enumerate(y_vals):
            if method is Method.FAR_FIELD_32:
                out[i, j] = far_field(R, y, rp).psi if R < 0 else np.nan
            else:
                out[i, j] = steepest_descent(R, y, rp) if R > 0 else np.nan
    return WaveGrid(rp, R_vals, y_vals, out, method, tol, err, conv)


# ----------------------------------------------------------------------
# diagnostics
# ----------------------------------------------------------------------

def expected_displacement(R: float, rp: ReducedParams,
                          y_cutoffs: Sequence[float],
                          tol: float = 1e-6,
                          return_components: bool = False):
    """Relative-displacement expectation with explicit cutoffs:

        Y_L = int_-L^L |y| |psi|^2 dy / int_-L^L |psi|^2 dy.

    Returns [(L, Y_L), ...] so (non-)convergence in L is observable; no
    claim of a finite limit is made for R < 0, where the numerator grows
    essentially linearly in L.  |psi|^2 is sampled exactly (shared-panel
    scan) up to y ~ 60 and via the stationary-phase tail beyond.  With
    return_components=True each entry is (L, Y_L, numerator, denominator).
    """
    if R == 0.0:
        raise ValueError("R = 0 excluded")
    cutoffs = list(y_cutoffs)
    if any(c2 <= c1 for c1, c2 in zip(cutoffs, cutoffs[1:])):
        raise ValueError("cutoffs must be increasing")
    y_sw = min(60.0, cutoffs[-1])
    # exact part on [0, y_sw]: Simpson on a fixed oscillation-resolving grid
    n = int(max(64, math.ceil(y_sw * rp.k0 * 8 / PI)))
    n += n % 2
    ys = np.linspace(0.0, y_sw, n + 1)
    grid = scan_grid([R], ys, rp, tol=tol)
    a2 = np.abs(grid.samples[0]) ** 2
    h = ys[1] - ys[0]

    def simpson_upto(vals, cutoff):
        m = ys <= cutoff + 1e-12
        nn = m.sum() - 1
        if nn < 2:
            return 0.0
        nn -= nn % 2
        ww = np.ones(nn + 1)
        ww[1:-1:2] = 4.0
        ww[2:-1:2] = 2.0
        return float(np.dot(ww, vals[:nn + 1]) * h / 3.0)

    results = []
    for L in cutoffs:
        lo = min(L, y_sw)
        num = simpson_upto(ys * a2, lo)
        den = simpson_upto(a2, lo)
        if L > y_sw:
            # tail: smooth ~c/y modulus-squared of the saddle wave
            yt = np.geomspace(y_sw, L, 400)
            at = np.array([abs(psi_tail_saddle(R, float(v), rp)) ** 2
                           for v in yt])
            num += float(np.trapezoid(yt * at, yt))
            den += float(np.trapezoid(at, yt))
        Y = 2.0 * num / max(2.0 * den, 1e-300)
        if return_components:
            results.append((float(L), Y, 2.0 * num, 2.0 * den))
        else:
            results.append((float(L), Y))
    return results


def tail_exponent(R: float, rp: ReducedParams,
                  y_range: tuple[float, float],
                  n_samples: int = 400,
                  method: Method = Method.APPROX_31) -> tuple[float, float]:
    """Least-squares slope of log |psi(R, y)|^2 versus log y over envelope
    maxima in y_range (R < 0).  Returns (slope, stderr).

    Defaults to the segment-approximation field, whose |psi|^2 oscillates
    in y (the exact wrap is saddle-dominated and smooth at large y, with
    no envelope maxima to extract).  Requires at least 8 local maxima.
    """
    if R >= 0.0:
        raise ValueError("tail diagnostic defined for R < 0")
    y1, y2 = y_range
    if not 0 < y1 < y2:
        raise ValueError("invalid y_range")
    ys = np.geomspace(y1, y2, n_samples)
    grid = scan_grid([R], ys, rp, tol=1e-6, method=method)
    a2 = np.abs(grid.samples[0]) ** 2
    idx = [i for i in range(1, len(a2) - 1)
           if a2[i] >= a2[i - 1] and a2[i] > a2[i + 1]]
    if len(idx) < 8:
        raise ValueError(f"only {len(idx)} envelope maxima in range")
    lx = np.log(ys[idx])
    ly = np.log(a2[idx])
    A = np.vstack([lx, np.ones_like(lx)]).T
    coef, res, *_ = np.linalg.lstsq(A, ly, rcond=None)
    dof = max(len(idx) - 2, 1)
    s2 = (res[0] / dof) if len(res) else 0.0
    cov = s2 * np.linalg.inv(A.T @ A)
    return float(coef[0]), float(math.sqrt(max(cov[0, 0], 0.0)))
