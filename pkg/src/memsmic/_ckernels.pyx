# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels. Must stay arithmetic-identical to ``_pykernels.py``."""
from libc.math cimport pow, log10, fabs, INFINITY

cdef double NO_EQUILIBRIUM = -1.0
cdef double NOT_CONVERGED = -2.0
cdef int MAX_ITER = 400


cpdef double relative_db(double u, double zeta) noexcept:
    cdef double re = 1.0 - u * u
    cdef double im = 2.0 * zeta * u
    return -10.0 * log10(re * re + im * im)


cdef inline double _g(double x, double p, double c, double gap) noexcept:
    cdef double r = gap - x
    return p + c / (r * r) - x


cpdef double equilibrium_deflection(double sm, double gap, double eps0, double bias,
                                    double pressure, double rtol) noexcept:
    cdef double p = sm * pressure
    cdef double c = 0.5 * sm * eps0 * bias * bias
    cdef double xm, hi, lo, mid
    cdef int k
    if c == 0.0:
        if p < gap:
            return p
        return NO_EQUILIBRIUM
    xm = gap - pow(2.0 * c, 1.0 / 3.0)
    hi = gap / 3.0 + p
    if xm < hi:
        hi = xm
    if hi <= 0.0 or _g(hi, p, c, gap) > 0.0:
        return NO_EQUILIBRIUM
    lo = 0.0
    for k in range(MAX_ITER):
        if hi - lo <= rtol * hi:
            return 0.5 * (lo + hi)
        mid = 0.5 * (lo + hi)
        if _g(mid, p, c, gap) > 0.0:
            lo = mid
        else:
            hi = mid
    return NOT_CONVERGED


cpdef bint equilibrium_exists(double sm, double gap, double eps0, double bias) noexcept:
    cdef double c = 0.5 * sm * eps0 * bias * bias
    cdef double s
    if c == 0.0:
        return True
    s = pow(2.0 * c, 1.0 / 3.0)
    if s >= gap:
        return False
    return c / (s * s) - (gap - s) <= 0.0


cpdef double pull_in_search(double sm, double gap, double eps0, double rtol) noexcept:
    cdef double lo = 0.0
    cdef double hi = 1.0
    cdef double mid
    cdef int n = 0
    cdef int k
    while equilibrium_exists(sm, gap, eps0, hi):
        lo = hi
        hi = 2.0 * hi
        n += 1
        if n > 1100:
            return NO_EQUILIBRIUM
    for k in range(MAX_ITER):
        if hi - lo <= rtol * hi:
            return 0.5 * (lo + hi)
        mid = 0.5 * (lo + hi)
        if equilibrium_exists(sm, gap, eps0, mid):
            lo = mid
        else:
            hi = mid
    return NOT_CONVERGED


cdef inline bint _crossed(double dev, double threshold_db, bint two_sided) noexcept:
    if two_sided:
        return fabs(dev) >= threshold_db
    return dev <= -threshold_db


cpdef double cutoff_search(double f0, double zeta, double fmin, double fmax, double ppd,
                           double threshold_db, bint two_sided, double rtol) noexcept:
    cdef double prev = 0.0
    cdef double f, lo, hi, mid
    cdef long i = 0
    cdef int k
    while True:
        f = fmin * pow(10.0, <double>i / ppd)
        if f > fmax:
            return INFINITY
        if _crossed(relative_db(f / f0, zeta), threshold_db, two_sided):
            hi = f
            break
        prev = f
        i += 1
    lo = prev
    for k in range(MAX_ITER):
        if hi - lo <= rtol * hi:
            return 0.5 * (lo + hi)
        mid = 0.5 * (lo + hi)
        if _crossed(relative_db(mid / f0, zeta), threshold_db, two_sided):
            hi = mid
        else:
            lo = mid
    return NOT_CONVERGED
