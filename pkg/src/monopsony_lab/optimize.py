"""Scalar search routines used by the firm solver."""

import math

from .exceptions import SolverError

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0  # 1/golden ratio


def golden_section_max(func, lo, hi, tol=1e-10, max_iter=500):
    """Maximize a unimodal ``func`` on ``[lo, hi]``.

    Returns ``(x, func(x))``.  The endpoints are compared with the interior
    estimate so a maximum sitting on the boundary is returned exactly.
    """
    if not hi >= lo:
        raise SolverError(f"golden-section bracket is empty: lo={lo!r}, hi={hi!r}")
    a, b = lo, hi
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = func(c), func(d)
    n = 0
    while b - a > tol * max(abs(a) + abs(b), 1e-300) and n < max_iter:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = func(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = func(d)
        n += 1
    best = max(((x, func(x)) for x in (lo, 0.5 * (a + b), hi)), key=lambda p: p[1])
    return best


def bisect_root(func, lo, hi, tol=1e-10, max_iter=500):
    """Root of ``func`` on ``[lo, hi]`` given a sign change.

    ``tol`` is relative to the bracket magnitude.
    """
    flo, fhi = func(lo), func(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if (flo > 0) == (fhi > 0):
        raise SolverError(
            f"bisection bracket does not straddle a root: f({lo!r})={flo!r}, f({hi!r})={fhi!r}"
        )
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        fmid = func(mid)
        if fmid == 0.0:
            return mid
        if (fmid > 0) == (flo > 0):
            lo, flo = mid, fmid
        else:
            hi = mid
        if hi - lo <= tol * max(abs(lo), abs(hi), 1e-300):
            break
    return 0.5 * (lo + hi)
