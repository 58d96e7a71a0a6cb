# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled twin of wavecut._purepy: scalar C loops for the hot kernels.

Same algorithms and branch conventions as the pure-NumPy backend; the
test suite asserts agreement to ~1e-13 between the two.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

cdef extern from "complex.h" nogil:
    double complex csqrt(double complex)
    double complex clog(double complex)
    double complex cexp(double complex)
    double cabs(double complex)
    double creal(double complex)
    double cimag(double complex)

cdef extern from "math.h" nogil:
    double log(double)
    double sqrt(double)

BACKEND_NAME = "compiled"

cdef double PI = 3.141592653589793238462643383279503
cdef double ZETA2 = PI * PI / 6.0
cdef int SERIES_TERMS = 135

# zeta(2 - m)/m! for m = 2, 3, 5, 7, ..., 55 (even m >= 4 vanish)
cdef double[28] LOG_C
LOG_C[0] = -0.25
LOG_C[1] = -0.013888888888888888
LOG_C[2] = 6.944444444444444e-05
LOG_C[3] = -7.873519778281683e-07
LOG_C[4] = 1.1482216343327455e-08
LOG_C[5] = -1.8978869988971e-10
LOG_C[6] = 3.387301370953521e-12
LOG_C[7] = -6.372636443183181e-14
LOG_C[8] = 1.2462059912950672e-15
LOG_C[9] = -2.5105444608999545e-17
LOG_C[10] = 5.178258806090623e-19
LOG_C[11] = -1.0887357368300849e-20
LOG_C[12] = 2.325744114302087e-22
LOG_C[13] = -5.03519521314739e-24
LOG_C[14] = 1.1026499294381215e-25
LOG_C[15] = -2.4386585509007344e-27
LOG_C[16] = 5.440142678856253e-29
LOG_C[17] = -1.2228340131217352e-30
LOG_C[18] = 2.767263468967951e-32
LOG_C[19] = -6.3000905918320136e-34
LOG_C[20] = 1.4420868388418476e-35
LOG_C[21] = -3.3170939991595428e-37
LOG_C[22] = 7.663913557920658e-39
LOG_C[23] = -1.7778714733830659e-40
LOG_C[24] = 4.1396058982341375e-42
LOG_C[25] = -9.671557036081102e-44
LOG_C[26] = 2.2667187016766123e-45
LOG_C[27] = -5.327956311328254e-47


cdef inline double complex _series(double complex w) nogil:
    cdef double complex acc = 0.0
    cdef int n
    for n in range(SERIES_TERMS, 0, -1):
        acc = acc * w + 1.0 / (<double> n * n)
    return acc * w


cdef inline double complex _logseries(double complex z) nogil:
    cdef double complex u = clog(z)
    cdef double complex acc = ZETA2 + u * (1.0 - clog(-u))
    cdef double complex u2 = u * u
    cdef double complex up = u2          # m = 2
    acc = acc + LOG_C[0] * up
    up = up * u                          # m = 3
    acc = acc + LOG_C[1] * up
    cdef int i
    for i in range(2, 28):               # m = 5, 7, ..., 55
        up = up * u2
        acc = acc + LOG_C[i] * up
    return acc


cdef double complex cdilog(double complex z) nogil:
    cdef double az, x
    cdef double complex lm, om
    if cimag(z) == 0.0 and creal(z) > 1.0:
        # on the cut: continuous from below
        x = creal(z)
        if x == 1.0:
            return ZETA2
        if x <= 1.75:
            # reflection with Log(1 - (x - i0)) = log(x-1) + i pi
            lm = log(x - 1.0) + 1j * PI
            return ZETA2 - log(x) * lm - _series(1.0 - x)
        lm = log(x) + 1j * PI            # Log(-(x - i0))
        return -_series(1.0 / x) - ZETA2 - 0.5 * lm * lm
    if creal(z) == 1.0 and cimag(z) == 0.0:
        return ZETA2
    az = cabs(z)
    if az <= 0.75:
        return _series(z)
    om = 1.0 - z
    if cabs(om) <= 0.75:
        return ZETA2 - clog(z) * clog(om) - _series(om)
    if az >= 1.4:
        lm = clog(-z)
        return -_series(1.0 / z) - ZETA2 - 0.5 * lm * lm
    return _logseries(z)


cdef inline double complex cti2(double complex z) nogil:
    return (cdilog(1j * z) - cdilog(-1j * z)) / 2j


cdef inline double complex cwsqrt(double complex k, double complex k0) nogil:
    return csqrt(k - k0) * csqrt(k + k0)


cdef inline double complex csplus(double complex k, double complex a,
                                  double complex k0, double complex K) nogil:
    cdef double complex w = cwsqrt(k, k0)
    cdef double complex denom = K + k
    cdef double complex zp = 1j * (w + a) / denom
    cdef double complex zm = 1j * (w - a) / denom
    cdef double complex expo = -(cti2(zp) - cti2(zm)) / PI
    return csqrt((k + k0) / denom) * cexp(expo)


def dilog(z):
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] arr = \
        np.ascontiguousarray(z, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] out = np.empty_like(arr)
    cdef Py_ssize_t i, n = arr.shape[0]
    for i in range(n):
        out[i] = cdilog(arr[i])
    return out


def ti2(z):
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] arr = \
        np.ascontiguousarray(z, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] out = np.empty_like(arr)
    cdef Py_ssize_t i, n = arr.shape[0]
    for i in range(n):
        out[i] = cti2(arr[i])
    return out


def wsqrt(k, k0):
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] arr = \
        np.ascontiguousarray(k, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] out = np.empty_like(arr)
    cdef double complex kk0 = k0
    cdef Py_ssize_t i, n = arr.shape[0]
    for i in range(n):
        out[i] = cwsqrt(arr[i], kk0)
    return out


def splus(k, a, k0, K):
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] arr = \
        np.ascontiguousarray(k, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] out = np.empty_like(arr)
    cdef double complex ca = a, ck0 = k0, cK = K
    cdef Py_ssize_t i, n = arr.shape[0]
    for i in range(n):
        out[i] = csplus(arr[i], ca, ck0, cK)
    return out
