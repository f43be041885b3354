"""Adaptive panel quadrature for real and complex integrands.

A single scheme is used throughout: Gauss-Legendre 15 against embedded
Gauss-Legendre 7 on each panel, with recursive bisection.  Panels are
seeded by the caller (so oscillation can be pre-resolved by bounding the
initial panel width) and the total panel budget is capped.
"""

from __future__ import annotations

import numpy as np

from .errors import QuadratureError

_X7, _W7 = np.polynomial.legendre.leggauss(7)
_X15, _W15 = np.polynomial.legendre.leggauss(15)


def _panel(f, a, b):
    """(gl15, |gl15-gl7|) on [a, b]; f must accept a numpy array."""
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    y15 = f(mid + half * _X15)
    v15 = half * np.sum(_W15 * y15)
    y7 = f(mid + half * _X7)
    v7 = half * np.sum(_W7 * y7)
    return v15, abs(v15 - v7)


def adaptive_quad(f, a, b, rel_tol=1e-12, abs_tol=1e-300, panel_budget=10000,
                  initial_panels=None):
    """Integrate f over the real interval [a, b].

    f is vectorized over a float array and may return complex values.
    ``initial_panels`` optionally lists interior breakpoints; otherwise the
    interval starts as one panel.  Raises QuadratureError when the budget
    runs out before the error estimate drops below
    max(abs_tol, rel_tol * |integral|).
    """
    if a == b:
        return 0.0
    pts = [a, b] if initial_panels is None else [a, *initial_panels, b]
    stack = [(pts[i], pts[i + 1]) for i in range(len(pts) - 1)]
    vals = []
    errs = []
    segs = []
    used = 0
    for lo, hi in stack:
        v, e = _panel(f, lo, hi)
        vals.append(v)
        errs.append(e)
        segs.append((lo, hi))
        used += 1
    while True:
        total = sum(vals)
        err = sum(errs)
        if err <= max(abs_tol, rel_tol * abs(total)):
            return total
        if used >= panel_budget:
            raise QuadratureError(
                f"panel budget {panel_budget} exhausted, err={err:.3g}, "
                f"value={total:.6g}")
        i = int(np.argmax(errs))
        lo, hi = segs[i]
        mid = 0.5 * (lo + hi)
        v1, e1 = _panel(f, lo, mid)
        v2, e2 = _panel(f, mid, hi)
        segs[i] = (lo, mid)
        vals[i] = v1
        errs[i] = e1
        segs.append((mid, hi))
        vals.append(v2)
        errs.append(e2)
        used += 2


def adaptive_quad_segment(f, z0, z1, **kw):
    """Integrate f along the straight complex segment z0 -> z1."""
    dz = z1 - z0

    def g(t):
        return f(z0 + t * dz) * dz

    return adaptive_quad(g, 0.0, 1.0, **kw)


def fixed_gauss(f, a, b, order=15):
    """Single non-adaptive Gauss-Legendre panel."""
    x, w = np.polynomial.legendre.leggauss(order)
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    return half * np.sum(w * f(mid + half * x))


def sawtooth_weighted_sum(g, k_start, k_end, order=8):
    """sum over unit panels [k, k+1) of  B(u) g(u)  with B = frac(1-frac).

    g is vectorized; the weight is smooth inside each panel so a fixed
    Gauss rule per panel is exact to machine level for smooth g.
    """
    x, w = np.polynomial.legendre.leggauss(order)
    s = 0.5 * (x + 1.0)            # nodes in (0, 1)
    bw = w * 0.5 * s * (1.0 - s)   # weight including B(u) and the jacobian
    ks = np.arange(k_start, k_end, dtype=float)
    u = (ks[:, None] + s[None, :]).ravel()
    vals = g(u).reshape(len(ks), len(s))
    return np.sum(vals * bw[None, :])


def sawtooth_weighted_tail(g_antideriv_diff, g_prime_at_k):
    """Tail sum_{k>=K} int_k^{k+1} B(u) g(u) du given exact pieces.

    Uses  int_K^inf B g = (1/6) int_K^inf g + g'(K)/360 + O(g''' tail),
    which follows from the Fourier expansion of B.  The caller supplies
    int_K^inf g (as ``g_antideriv_diff``) and g'(K).
    """
    return g_antideriv_diff / 6.0 + g_prime_at_k / 360.0
