"""Dilogarithm / arctangent-integral tests against known values, the
defining power series, and brute-force path quadrature."""

import cmath
import math

import numpy as np
import pytest

from wavecut import specfun
from wavecut.specfun import (CATALAN, ZETA2, CutSideError, dilog, im_ti2,
                             ti2)

mp = pytest.importorskip("mpmath")


def test_dilog_trivial_values():
    assert dilog(0.0) == 0.0
    assert abs(dilog(1.0) - ZETA2) < 1e-14
    landen = ZETA2 / 2.0 - math.log(2.0) ** 2 / 2.0
    assert abs(dilog(0.5) - landen) < 1e-14


def test_dilog_derived_path_quadrature():
    # frozen from the independent Simpson path quadrature of -ln(1-u)/u
    z = 0.3 + 0.4j
    frozen = 0.26659686674274125 + 0.46136289181911067j
    assert abs(specfun.dilog_quadrature_reference(z, 20000) - frozen) < 1e-12
    assert abs(dilog(z) - frozen) < 1e-13


def test_dilog_against_mpmath_sweep():
    rng = np.random.default_rng(11)
    pts = rng.uniform(-6, 6, 200) + 1j * rng.uniform(-6, 6, 200)
    worst = 0.0
    for z in pts:
        ref = complex(mp.polylog(2, complex(z)))
        worst = max(worst, abs(dilog(complex(z)) - ref))
    assert worst < 5e-14


def test_dilog_cut_side_from_below():
    # on [1, inf) the value is the limit from below: Im = -pi ln x
    for x in (1.5, 2.5, 7.0):
        v = dilog(x)
        assert v.imag == pytest.approx(-math.pi * math.log(x), abs=1e-13)
        below = complex(mp.polylog(2, complex(x, -1e-30)))
        assert abs(v - below) < 1e-13


def test_dilog_matches_series_inside_disk():
    rng = np.random.default_rng(3)
    for _ in range(60):
        z = complex(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5))
        assert abs(dilog(z) - specfun.dilog_series_reference(z)) < 1e-13


def test_dilog_reflection_property():
    rng = np.random.default_rng(4)
    count = 0
    while count < 100:
        z = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
        if abs(z) >= 0.98 or abs(z) < 0.02 or abs(1 - z) < 0.02:
            continue
        count += 1
        lhs = dilog(z) + dilog(1.0 - z)
        rhs = ZETA2 - cmath.log(z) * cmath.log(1.0 - z)
        assert abs(lhs - rhs) < 1e-11


def test_ti2_trivial_values():
    assert ti2(0.0) == 0.0
    assert abs(ti2(1.0) - CATALAN) < 1e-14


def test_ti2_derived_path_quadrature():
    z = (2.0 + 1.0j) / math.sqrt(5.0)
    frozen = 0.8612243718072629 + 0.3641479805728515j
    assert abs(specfun.ti2_quadrature_reference(z, 20000) - frozen) < 1e-12
    assert abs(ti2(z) - frozen) < 1e-12


def test_ti2_oddness():
    rng = np.random.default_rng(7)
    n = 0
    while n < 100:
        z = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        if abs(z) > 2 or (abs(z.real) < 1e-3 and abs(z.imag) > 0.97):
            continue
        n += 1
        assert abs(ti2(z) + ti2(-z)) < 1e-12


def test_ti2_series_consistency():
    rng = np.random.default_rng(9)
    for _ in range(40):
        z = complex(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5))
        assert abs(ti2(z) - specfun.ti2_series_reference(z)) < 1e-12


def test_im_ti2_real_argument_is_zero():
    for x in (-3.0, -0.4, 0.2, 5.0):
        assert im_ti2(x) == 0.0


def test_im_ti2_imaginary_argument():
    # Ti2(i v) = i * integral_0^v artanh(t)/t dt: nonzero imaginary part
    frozen = 0.5153273666943293
    assert im_ti2(0.5j) == pytest.approx(frozen, abs=1e-12)
    assert abs(specfun.ti2_quadrature_reference(0.5j, 20000).imag
               - frozen) < 1e-12


def test_ti2_cut_requires_side():
    with pytest.raises(CutSideError):
        ti2(1.5j)
    left = ti2(1.5j, side=-1)
    right = ti2(1.5j, side=+1)
    assert left != right
    # sides agree with nearby off-cut values
    assert abs(right - ti2(1e-9 + 1.5j)) < 1e-7
    assert abs(left - ti2(-1e-9 + 1.5j)) < 1e-7


def test_dilog_array_shapes():
    z = np.array([[0.1 + 0.1j, 0.5], [1.0, -2.0 + 1.0j]])
    out = dilog(z)
    assert out.shape == z.shape
    assert abs(out[1, 0] - ZETA2) < 1e-14


def test_no_nan_on_plane_sweep():
    rng = np.random.default_rng(12)
    z = rng.uniform(-10, 10, 500) + 1j * rng.uniform(-10, 10, 500)
    out = dilog(z)
    assert np.all(np.isfinite(out))
    out2 = ti2(z[np.abs(z.real) > 1e-6])
    assert np.all(np.isfinite(out2))
