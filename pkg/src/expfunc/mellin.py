"""Mellin transform of the exponential functional.

For a model with Wiener-Hopf pair (phi_plus, phi_minus),

    M(z) = phi_minus(0) Gamma(z) W_minus(1 - z) / W_plus(z),

analytic on the strip (c_psi, 1 - abar_minus) and meromorphic further
left.  Gamma comes from the reference implementation; the W factors come
from the Bernstein-gamma evaluators.  The Gamma(z)/W_plus(z) ratio is
computed through a joint recurrence pull-up so that the cancellation of
Gamma poles against W_plus poles is exact rather than numerical.
"""

from __future__ import annotations

import cmath
import math
import warnings

import numpy as np

from .errors import (BoundaryError, DomainError, MomentInfiniteError,
                     PoleError, PoleWarning, StripError)
from .levy import LevyExponent
from .refgamma import log_gamma
from .wgamma import BernsteinGammaEvaluator, EvaluatorPolicy

INF = math.inf


def _near_integer(x, tol=1e-9):
    return abs(x - round(x)) < tol


class MellinObject:
    """M(z) = E[I^{z-1}] with strip, boundary and pole metadata."""

    def __init__(self, L: LevyExponent, policy: EvaluatorPolicy | None = None,
                 rel_tol=1e-9):
        self.L = L
        self.rel_tol = rel_tol
        self.ev_plus = BernsteinGammaEvaluator(L.phi_plus, policy)
        self.ev_minus = BernsteinGammaEvaluator(L.phi_minus, policy)
        self.sp = L.strip_params()
        self.strip = (self.sp.c_psi, 1.0 - self.sp.abar_minus)

    # -- Psi on the meromorphic continuation -----------------------------------

    def psi_value(self, z) -> complex:
        """Psi(z), preferring the family closed form (it continues
        meromorphically past the factor abscissae)."""
        if self.L.closed_psi is not None:
            return complex(self.L.closed_psi(complex(z)))
        return self.L.psi(z)

    def log_psi_product(self, n, sign_in=1.0) -> tuple[float, float]:
        """(log |prod_{j=1}^n Psi(j)|, sign) computed in log space."""
        logv, sign = 0.0, float(sign_in)
        for j in range(1, n + 1):
            v = self.psi_value(float(j)).real
            if v == 0.0:
                return -INF, 0.0
            logv += math.log(abs(v))
            sign *= math.copysign(1.0, v)
        return logv, sign

    # -- the transform itself ----------------------------------------------------

    def _log_gamma_over_wplus(self, z, lift=12):
        """log of Gamma(z)/W_plus(z) with exact pole cancellation."""
        z = complex(z)
        m = max(0, int(math.ceil(lift - z.real)))
        val = (log_gamma(z + m)
               - self.ev_plus.log_wgamma(z + m))
        phi_p = self.L.phi_plus
        for j in range(m):
            w = z + j
            if w == 0:
                if phi_p.phi(0.0).real == 0.0:
                    val += cmath.log(phi_p.phi_prime(0.0))
                    continue
                raise PoleError("Mellin transform has a pole at z = 0")
            num = phi_p.phi(w)
            if abs(num) == 0.0:
                raise PoleError(f"W_plus pole trapped at z + {j} = {w}")
            val += cmath.log(num) - cmath.log(w)
        return val

    def log_mellin(self, z, n=0) -> complex:
        """log of phi_minus(0) Gamma(z+n) W_minus(1-z) / W_plus(z).

        n = 0 is log M(z); n >= 1 is the kernel of the n-th derivative
        inversion.  Exact up to 2 pi i.
        """
        z = complex(z)
        val = math.log(self.L.phi_minus.phi(0.0).real)
        val += self.ev_minus.log_wgamma(1.0 - z)
        val += self._log_gamma_over_wplus(z)
        for j in range(n):
            val += cmath.log(z + j)
        return val

    def log_mellin_many(self, zs, n=0):
        """Vectorized log_mellin over an array of strip points (no pole
        handling; intended for contour nodes off the real axis)."""
        zs = np.asarray(zs, dtype=complex)
        re_min = float(np.min(zs.real))
        m = max(0, int(math.ceil(12.0 - re_min)))
        val = np.full(zs.shape, math.log(self.L.phi_minus.phi(0.0).real),
                      dtype=complex)
        val += self.ev_minus.log_wgamma_many(1.0 - zs)
        val += log_gamma(zs + m) - self.ev_plus.log_wgamma_many(zs + m)
        phi_p = self.ev_plus._phi_v
        for j in range(m):
            val += np.log(phi_p(zs + j)) - np.log(zs + j)
        for j in range(n):
            val += np.log(zs + j)
        return val

    def mellin(self, z, boundary=False):
        """M(z) on the open strip; boundary=True opts into evaluating at a
        boundary line and returns (value, boundary_class)."""
        z = complex(z)
        lo, hi = self.strip
        x = z.real
        if lo < x < hi:
            val = cmath.exp(self.log_mellin(z))
            return (val, "interior") if boundary else val
        cls = self.boundary_classification()
        if x == hi and hi < INF:
            kind = cls["upper"]
            if kind in ("extends", "extends-at-1"):
                if not boundary:
                    raise StripError(
                        f"Re z = {x} is on the upper boundary; pass "
                        "boundary=True to opt in")
                return cmath.exp(self.log_mellin(z)), kind
            raise BoundaryError(
                "M does not extend continuously to the upper boundary")
        if x == lo and lo > -INF:
            kind = cls["lower"]
            if kind == "does-not-extend" or (
                    kind == "extends-minus-origin" and z == 0):
                raise BoundaryError(
                    f"M does not extend continuously at z = {z}")
            if not boundary:
                raise StripError(
                    f"Re z = {x} is on the lower boundary; pass "
                    "boundary=True to opt in")
            return cmath.exp(self.log_mellin(z)), kind
        raise StripError(
            f"Re z = {x} outside the Mellin strip ({lo}, {hi})")

    # -- boundary classification ---------------------------------------------------

    def boundary_classification(self):
        sp = self.sp
        if sp.abar_minus == 0.0:
            upper = "extends-at-1"
        elif sp.abar_minus == -INF:
            upper = "entire"
        elif sp.abar_minus == sp.u_minus:
            upper = "does-not-extend"
        else:       # abar = a_minus > u_minus = -inf
            upper = "extends"
        c = sp.c_psi
        if c == -INF:
            lower = "entire"
        elif c == 0.0:
            if sp.u_plus == 0.0 and self._phi_plus_slope_finite():
                lower = "extends"
            else:
                lower = "extends-minus-origin"
        else:
            lower = ("extends" if self.L.phi_plus.finite_at_a
                     else "does-not-extend")
        return {"upper": upper, "lower": lower, "strip": self.strip}

    def _phi_plus_slope_finite(self):
        try:
            with np.errstate(divide="ignore", invalid="ignore"):
                v = self.L.phi_plus.phi_prime(0.0)
        except (DomainError, ZeroDivisionError, OverflowError):
            return False
        return bool(np.isfinite(v.real)) and abs(v) < 1e200

    # -- poles and residues -----------------------------------------------------------

    def poles_and_residues(self, n_max=10):
        """Simple poles of M at non-positive integers with residues
        phi_plus(0) prod_{j<=n} Psi(j) / n!."""
        sp = self.sp
        if not sp.abar_plus > 0:
            return []
        u = sp.u_plus
        out = []
        for n in range(n_max + 1):
            if u != INF and _near_integer(u) and n >= round(u):
                break
            if not _near_integer(u) and not n < sp.a_plus:
                break
            logp, sign = self.log_psi_product(n)
            if sign == 0.0:
                res = 0.0
            else:
                res = sign * math.exp(
                    logp + math.log(self.L.phi_plus.phi(0.0).real)
                    - math.lgamma(n + 1))
            out.append((-float(n), res))
        return out

    # -- integer moments ---------------------------------------------------------------

    def moment_positive(self, n: int) -> float:
        """E[I^n] = (-1)^n n! / prod_{j=1}^n Psi(-j) when finite."""
        if n < 0:
            raise DomainError("n must be a non-negative integer")
        if n == 0:
            return 1.0
        sp = self.sp
        bound = -sp.abar_minus
        if not (n < bound or (n == bound
                              and sp.abar_minus == sp.a_minus
                              and sp.u_minus == -INF)):
            raise MomentInfiniteError(
                f"E[I^{n}] is infinite: n exceeds -abar_minus = {bound}")
        logv, sign = 0.0, 1.0
        for j in range(1, n + 1):
            v = self.psi_value(-float(j)).real
            if v == 0.0:
                raise MomentInfiniteError(
                    f"Psi(-{j}) = 0 makes E[I^{n}] infinite")
            logv += math.log(abs(v))
            sign *= math.copysign(1.0, v)
        val = sign * (-1.0) ** n * math.exp(math.lgamma(n + 1) - logv)
        return val

    def moment_negative(self, n: int) -> float:
        """E[I^-n] = E[xi_1] prod_{j=1}^{n-1} Psi(j) / (n-1)! when finite."""
        if n < 1:
            raise DomainError("n must be a positive integer")
        if self.L.psi_at_killing() != 0.0:
            raise MomentInfiniteError(
                "negative-moment formula needs an unkilled model "
                "(Psi(0) = 0)")
        mean = self.L.mean()
        if not (0.0 < mean < INF):
            raise MomentInfiniteError("E[xi_1] must be positive and finite")
        sp = self.sp
        bound = 1.0 - sp.c_psi
        if not (n < bound or (n == bound and self.L.phi_plus.finite_at_a)):
            raise MomentInfiniteError(
                f"E[I^-{n}] is infinite: n exceeds 1 - c_psi = {bound}")
        logp, sign = self.log_psi_product(n - 1)
        return mean * sign * math.exp(logp - math.lgamma(n))

    # -- diagnostics ----------------------------------------------------------------------

    def recurrence_check(self, z) -> float:
        """|M(z+1) + (z/Psi(-z)) M(z)| / |M(z+1)| on the strip."""
        z = complex(z)
        denom = self.psi_value(-z)
        m1 = self.mellin(z + 1.0)
        if abs(denom) < 1e-8 * (1.0 + abs(z)):
            warnings.warn("evaluating the recurrence near a zero of Psi(-z)",
                          PoleWarning)
        m0 = self.mellin(z)
        return abs(m1 - (-z / denom) * m0) / abs(m1)

    def decay_profile(self, a, b_grid):
        """|M(a+ib)| on the grid plus decay classification and fits."""
        bs = np.asarray(sorted(b_grid), dtype=float)
        vals = np.array([abs(cmath.exp(self.log_mellin(complex(a, b))))
                         for b in bs])
        n_psi = self.L.n_psi()
        mask = vals > 0
        slope = None
        if mask.sum() >= 2:
            slope = float(np.polyfit(np.log(bs[mask]),
                                     np.log(vals[mask]), 1)[0])
        exp_rate = None
        clas = "super-polynomial" if n_psi == INF else "polynomial"
        exp_applicable = (self.L.d_minus > 0.0) or self._is_symmetric()
        if exp_applicable:
            clas = "exponential"
            exp_rate = float(np.log(vals[-1]) / bs[-1])
        return {
            "a": float(a), "b": bs, "abs_m": vals,
            "n_psi": n_psi, "class": clas, "fit_slope": slope,
            "exp_rate": exp_rate,
            "exp_bound": (-math.pi / 2.0 if exp_applicable else None),
        }

    def _is_symmetric(self):
        # phi_plus proportional to phi_minus means a symmetric process
        try:
            zs = [0.7, 1.9, 3.3]
            r = [self.L.phi_plus.phi(z) / self.L.phi_minus.phi(z) for z in zs]
            return (abs(r[0] - r[1]) < 1e-10 * abs(r[0])
                    and abs(r[0] - r[2]) < 1e-10 * abs(r[0]))
        except DomainError:
            return False
