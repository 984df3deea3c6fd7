"""Small numerical toolkit: golden-section minimization and bracketed bisection.

Both routines support automatic bracket growth so callers can pass a lower
bound only.  Failures raise instead of silently clamping.
"""

import math

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0  # 1/phi
_INVPHI2 = (3.0 - math.sqrt(5.0)) / 2.0  # 1/phi^2

_MAX_GROW = 2 ** 60


class BracketError(RuntimeError):
    """Raised when a root/minimum bracket cannot be established."""


def golden_min(f, lo, hi=None, tol=1e-10):
    """Minimize a unimodal scalar function by golden-section search.

    If `hi` is None the upper edge starts at lo+1 and doubles until the
    function is increasing there (adaptive bracket).  Returns (x, f(x)).
    """
    if hi is None:
        span = 1.0
        hi = lo + span
        f_hi = f(hi)
        while f(hi + span) < f_hi:
            span *= 2.0
            hi = lo + span
            f_hi = f(hi)
            if span > _MAX_GROW:
                raise BracketError("minimum bracket expansion failed")
        hi = lo + 2.0 * span

    a, b = lo, hi
    h = b - a
    c = a + _INVPHI2 * h
    d = a + _INVPHI * h
    fc, fd = f(c), f(d)
    while h > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            h = b - a
            c = a + _INVPHI2 * h
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            h = b - a
            d = a + _INVPHI * h
            fd = f(d)
    x = (a + b) / 2.0
    return x, f(x)


def bisect_root(f, lo, hi=None, tol=1e-12):
    """Find a root of f by bisection on [lo, hi] (tolerance in x).

    If `hi` is None, the upper edge grows by doubling the span from `lo`
    until the sign changes (capped; raises BracketError on failure).
    Requires a sign change over the final bracket.
    """
    f_lo = f(lo)
    if f_lo == 0.0:
        return lo
    if hi is None:
        span = 1.0
        while True:
            hi = lo + span
            f_hi = f(hi)
            if f_lo * f_hi <= 0.0:
                break
            span *= 2.0
            if span > _MAX_GROW:
                raise BracketError("root bracket expansion failed")
    else:
        f_hi = f(hi)
    if f_lo * f_hi > 0.0:
        raise BracketError("no sign change over [%g, %g]" % (lo, hi))
    a, b = lo, hi
    fa = f_lo
    while b - a > tol:
        m = 0.5 * (a + b)
        fm = f(m)
        if fm == 0.0:
            return m
        if fa * fm < 0.0:
            b = m
        else:
            a, fa = m, fm
    return 0.5 * (a + b)


def nested_min2(f, x_bounds, y_bounds, tol=1e-9):
    """Minimize f(x, y) over a box by nested golden-section search.

    Returns (x, y, value).  Suitable for smooth quasi-convex objectives;
    used with analytic warm starts elsewhere.
    """

    def inner(x):
        return golden_min(lambda y: f(x, y), y_bounds[0], y_bounds[1], tol=tol)[1]

    x, _ = golden_min(inner, x_bounds[0], x_bounds[1], tol=tol)
    y, val = golden_min(lambda yy: f(x, yy), y_bounds[0], y_bounds[1], tol=tol)
    return x, y, val
