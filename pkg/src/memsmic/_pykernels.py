"""Pure-Python kernels. Operation-for-operation twin of ``_ckernels.pyx``.

Return conventions are C-style sentinels because the compiled twin must use
them; :mod:`memsmic.kernels` documents them and the public modules translate
them into exceptions.
"""
import math

NO_EQUILIBRIUM = -1.0
NOT_CONVERGED = -2.0
MAX_ITER = 400


def relative_db(u, zeta):
    """Magnitude of the normalized second-order response at ``u = f/f0``, in dB."""
    re = 1.0 - u * u
    im = 2.0 * zeta * u
    return -10.0 * math.log10(re * re + im * im)


def _g(x, p, c, gap):
    r = gap - x
    return p + c / (r * r) - x


def equilibrium_deflection(sm, gap, eps0, bias, pressure, rtol):
    """Stable piston deflection solving x = sm*(P + eps0*V^2 / (2 (gap-x)^2))."""
    p = sm * pressure
    c = 0.5 * sm * eps0 * bias * bias
    if c == 0.0:
        if p < gap:
            return p
        return NO_EQUILIBRIUM
    # g is convex on [0, gap); its minimizer bounds the stable root from above
    xm = gap - (2.0 * c) ** (1.0 / 3.0)
    hi = gap / 3.0 + p
    if xm < hi:
        hi = xm
    if hi <= 0.0 or _g(hi, p, c, gap) > 0.0:
        return NO_EQUILIBRIUM
    lo = 0.0
    for _ in range(MAX_ITER):
        if hi - lo <= rtol * hi:
            return 0.5 * (lo + hi)
        mid = 0.5 * (lo + hi)
        if _g(mid, p, c, gap) > 0.0:
            lo = mid
        else:
            hi = mid
    return NOT_CONVERGED


def equilibrium_exists(sm, gap, eps0, bias):
    c = 0.5 * sm * eps0 * bias * bias
    if c == 0.0:
        return True
    s = (2.0 * c) ** (1.0 / 3.0)
    if s >= gap:
        return False
    return c / (s * s) - (gap - s) <= 0.0


def pull_in_search(sm, gap, eps0, rtol):
    """Smallest bias at which no static equilibrium exists (bisection on V)."""
    lo = 0.0
    hi = 1.0
    n = 0
    while equilibrium_exists(sm, gap, eps0, hi):
        lo = hi
        hi = 2.0 * hi
        n += 1
        if n > 1100:
            return NO_EQUILIBRIUM
    for _ in range(MAX_ITER):
        if hi - lo <= rtol * hi:
            return 0.5 * (lo + hi)
        mid = 0.5 * (lo + hi)
        if equilibrium_exists(sm, gap, eps0, mid):
            lo = mid
        else:
            hi = mid
    return NOT_CONVERGED


def _crossed(dev, threshold_db, two_sided):
    if two_sided:
        return math.fabs(dev) >= threshold_db
    return dev <= -threshold_db


def cutoff_search(f0, zeta, fmin, fmax, ppd, threshold_db, two_sided, rtol):
    """First frequency where the normalized response crosses the threshold.

    Geometric scan ``fmin * 10**(i/ppd)`` up to ``fmax``, then bisection between
    the last uncrossed point and the first crossed one. Returns ``inf`` when the
    scan never crosses.
    """
    prev = 0.0
    i = 0
    hi = -1.0
    while True:
        f = fmin * 10.0 ** (i / ppd)
        if f > fmax:
            return math.inf
        if _crossed(relative_db(f / f0, zeta), threshold_db, two_sided):
            hi = f
            break
        prev = f
        i += 1
    lo = prev
    for _ in range(MAX_ITER):
        if hi - lo <= rtol * hi:
            return 0.5 * (lo + hi)
        mid = 0.5 * (lo + hi)
        if _crossed(relative_db(mid / f0, zeta), threshold_db, two_sided):
            hi = mid
        else:
            lo = mid
    return NOT_CONVERGED
