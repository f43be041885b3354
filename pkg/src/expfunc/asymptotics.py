"""Explicit asymptotic laws for the tails and small-x behaviour.

Every evaluator returns (value, hints) where hints records which
preconditions were checked; nothing extrapolates silently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .bernstein import BernsteinFunction
from .errors import (CaseError, ConditionHError, CramerPreconditionError,
                     DomainError, GateError)
from .levy import LevyExponent
from .mellin import MellinObject
from .quadrature import adaptive_quad
from .refgamma import log_gamma

INF = math.inf


# ---------------------------------------------------------------------------
# Cramer power tail
# ---------------------------------------------------------------------------

def cramer_constant(M: MellinObject) -> float:
    """C with P(I > x) ~ C x^{u_minus}:
    phi_minus(0) Gamma(-u) W_minus(1+u) / (phi_minus'(u+) W_plus(1-u))."""
    sp = M.sp
    u = sp.u_minus
    if not -INF < u < 0.0:
        raise CramerPreconditionError(
            "Cramer tail needs a finite negative zero of Psi")
    phi_m = M.L.phi_minus
    slope = phi_m.phi_prime(u).real
    if not (0.0 < slope < INF):
        raise CramerPreconditionError(
            f"phi_minus'(u+) = {slope} must be positive and finite")
    if not (phi_m.weak_nonlattice and M.L.phi_plus.weak_nonlattice):
        raise CramerPreconditionError(
            "model declares a lattice jump structure (weak non-lattice "
            "fails)")
    log_c = (math.log(phi_m.phi(0.0).real)
             + log_gamma(-u).real
             + M.ev_minus.log_wgamma(1.0 + u).real
             - math.log(slope)
             - M.ev_plus.log_wgamma(1.0 - u).real)
    return math.exp(log_c)


def cramer_tail(M: MellinObject, x, n=0):
    """Survival (n = 0) or n-th density derivative tail estimate at x."""
    sp = M.sp
    u = sp.u_minus
    C0 = cramer_constant(M)
    hints = {"u_minus": u, "weak_nonlattice": True}
    x = float(x)
    if n == 0:
        return C0 * x ** u, hints
    n_psi = M.L.n_psi()
    if not (n_psi > 1.0 and n <= math.ceil(n_psi) - 2):
        raise CramerPreconditionError(
            f"derivative order {n} needs N_Psi > 1 and n <= ceil(N)-2")
    hints["n_psi"] = n_psi
    phi_m = M.L.phi_minus
    slope = phi_m.phi_prime(u).real
    log_c = (math.log(phi_m.phi(0.0).real)
             + log_gamma(n + 1.0 - u).real
             + M.ev_minus.log_wgamma(1.0 + u).real
             - math.log(slope)
             - M.ev_plus.log_wgamma(1.0 - u).real)
    val = (-1.0) ** n * math.exp(log_c) * x ** (u - n - 1.0)
    return val, hints


# ---------------------------------------------------------------------------
# subordinator saddle tail
# ---------------------------------------------------------------------------

@dataclass
class SubordinatorSaddleData:
    """Saddle machinery for the tail of a driftless subordinator model.

    phi_star(x) = x / phi(x) is increasing under the growth condition
    limsup x phi'(x)/phi(x) < 1; varphi_star is its numerical inverse.
    """
    phi: BernsteinFunction
    _t_star: float = field(default=None, repr=False)
    _brackets: list = field(default_factory=list, repr=False)
    _int_anchor: tuple = field(default=None, repr=False)

    def __post_init__(self):
        if self.phi.drift > 0.0:
            raise ConditionHError(
                "saddle tail needs a driftless subordinator")
        probe = np.geomspace(1.0, 1e4, 40)
        ratios = [(u * self.phi.phi_prime(u).real
                   / self.phi.phi(u).real) for u in probe]
        self.cond_h = max(ratios[-10:])
        if not self.cond_h < 1.0 - 1e-9:
            raise ConditionHError(
                f"limsup x phi'(x)/phi(x) = {self.cond_h:.6f} is not < 1")

    def phi_star(self, w):
        return w / self.phi.phi(w).real

    def varphi_star(self, y):
        """Inverse of phi_star by bisection with a cached bracket table."""
        y = float(y)
        lo, hi = 1e-12, 2.0
        for (yk, wk) in self._brackets:
            if yk <= y:
                lo = max(lo, wk)
            if yk >= y:
                hi = min(hi, wk) if wk > lo else hi
        while self.phi_star(hi) < y:
            hi *= 4.0
            if hi > 1e300:
                raise DomainError("phi_star inverse out of range")
        w = brentq(lambda t: self.phi_star(t) - y, lo, hi,
                   xtol=1e-12, rtol=1e-13)
        self._brackets.append((y, w))
        if len(self._brackets) > 64:
            del self._brackets[0]
        return w

    def varphi_star_prime(self, y):
        w = self.varphi_star(y)
        p = self.phi.phi(w).real
        dp = self.phi.phi_prime(w).real
        return p * p / (p - w * dp)

    @property
    def t_phi_star(self):
        """Sawtooth constant of x/phi(x), from the same Binet normalization
        that reproduces the Stirling constant of Gamma."""
        if self._t_star is None:
            phi = self.phi

            def neg_log_dd(u):
                u = np.asarray(u, dtype=float)
                out = np.empty(u.shape)
                for i, ui in enumerate(u.ravel()):
                    out.flat[i] = (1.0 / ui ** 2
                                   + phi.log_phi_dd(complex(ui)).real)
                return out

            K = 400
            core = 0.0
            xg, wg = np.polynomial.legendre.leggauss(8)
            s = 0.5 * (xg + 1.0)
            bw = 0.5 * wg * s * (1.0 - s)
            for k in range(1, K):
                u = k + s
                core += float(np.sum(neg_log_dd(u) * bw))
            psi1_k = (phi.phi_prime(float(K)).real
                      / phi.phi(float(K)).real)
            tail = (1.0 / K - psi1_k) / 6.0
            self._t_star = 0.5 * (core + tail)
        return self._t_star

    def exponent_integral(self, x):
        """int_{phi_star(1)}^x varphi_star(y) / y dy with anchor caching."""
        lo = self.phi_star(1.0)
        x = float(x)
        if self._int_anchor is not None:
            x0, v0 = self._int_anchor
        else:
            x0, v0 = lo, 0.0
        val = v0 + float(np.real(adaptive_quad(
            lambda y: np.asarray([self.varphi_star(t) / t
                                  for t in np.atleast_1d(y)]),
            x0, x, rel_tol=1e-11, abs_tol=1e-13, panel_budget=4000)))
        self._int_anchor = (x, val)
        return val


def subordinator_tail(S: SubordinatorSaddleData, x, n=0):
    """Saddle-point tail: density derivative (n >= 0) or, with n = -1,
    the survival function."""
    x = float(x)
    hints = {"cond_h": S.cond_h, "t_phi_star": S.t_phi_star}
    phi_star_1 = S.phi_star(1.0)
    expo = math.exp(-S.exponent_integral(x))
    vphi = S.varphi_star(x)
    dvphi = S.varphi_star_prime(x)
    base = math.exp(-S.t_phi_star) / math.sqrt(2.0 * math.pi * phi_star_1)
    if n == -1:
        val = base * x * math.sqrt(dvphi) / vphi * expo
        return val, hints
    val = ((-1.0) ** n * base * vphi ** n * math.sqrt(dvphi)
           * x ** (-n) * expo)
    return val, hints


# ---------------------------------------------------------------------------
# convolution-equivalent tails
# ---------------------------------------------------------------------------

def convolution_tail(L: LevyExponent, x, case="auto"):
    """Heavy-tail laws P(I > x) ~ Pi_minus(ln x) (killed) or
    (1/E xi_1) int_{ln x}^inf Pi_minus(s) ds (unkilled, positive mean)."""
    if L.pibar_minus is None:
        raise CaseError("model supplies no negative jump tail")
    x = float(x)
    q = -L.psi_at_killing()
    declared_s0 = L.conv_index in (None, 0.0)
    if case == "auto":
        if not declared_s0:
            raise CaseError(
                "negative jumps carry exponential moments (declared "
                f"convolution index {L.conv_index}); the index-0 "
                "convolution cases do not apply")
        case = "a" if q > 0 else "b"
    hints = {"case": case, "subexponential": declared_s0}
    if case == "a":
        if q <= 0:
            raise CaseError("case (a) needs a killed model")
        return float(L.pibar_minus(math.log(x))), hints
    if case == "b":
        if q > 0:
            raise CaseError("case (b) needs an unkilled model")
        mean = L.mean()
        if not 0.0 < mean < INF:
            raise CaseError("case (b) needs E xi_1 in (0, inf)")
        val = adaptive_quad(lambda s: np.asarray(L.pibar_minus(s)),
                            math.log(x), math.log(x) + 80.0,
                            rel_tol=1e-10, abs_tol=1e-300)
        return float(np.real(val)) / mean, hints
    raise CaseError(f"unknown case {case!r}")


# ---------------------------------------------------------------------------
# small-x limits
# ---------------------------------------------------------------------------

def smallx_limits(M: MellinObject, probe_x=1e-3, cdf_fn=None,
                  density_fn=None):
    """Report of the small-x laws: f(0+) = -Psi(0), flat-density gates and
    the convolution-driven law for positive-jump models."""
    L = M.L
    sp = M.sp
    q = -L.psi_at_killing()
    report = {"f_at_zero": q, "probe_x": probe_x}
    if q == 0.0:
        if sp.a_plus == 0.0 and M._phi_plus_slope_finite() \
                and L.n_psi() > 1.0:
            report["case"] = "flat"      # all derivatives vanish at 0+
            if density_fn is not None:
                report["flat_probe"] = density_fn(probe_x)
        elif sp.a_plus > 0.0:
            report["case"] = "power-bound"
            eps = 0.01
            if cdf_fn is not None:
                report["power_probe"] = (
                    cdf_fn(probe_x) * probe_x ** (-sp.a_plus + eps))
        else:
            report["case"] = "none"
        if L.pibar_plus is not None:
            alpha = L.params.get("pos", None)
            alpha = min(r for _, r in alpha) if alpha else 0.0
            ok = alpha == 0.0 or M.psi_value(alpha).real < 0.0
            if ok:
                pref = M.mellin(1.0 - alpha).real / (1.0 + alpha) \
                    if alpha > 0 else 1.0
                report["convolution_smallx"] = (
                    pref * probe_x
                    * float(L.pibar_plus(math.log(1.0 / probe_x))))
    else:
        report["case"] = "killed"
        report["cdf_over_x_limit"] = q
        if cdf_fn is not None:
            report["cdf_over_x_probe"] = cdf_fn(probe_x) / probe_x
    return report


def sn_smallx_log_slope(L: LevyExponent, x):
    """log-density shape for spectrally negative unbounded-variation
    models: -int_{phi_minus(0)}^{1/x} varphi_minus(v)/v dv, constant free."""
    phi_m = L.phi_minus
    if phi_m.phi_at_inf < INF:
        raise GateError("needs phi_minus unbounded (unbounded variation)")
    lo = phi_m.phi(0.0).real

    def inv(v):
        hi = 2.0
        while phi_m.phi(hi).real < v:
            hi *= 4.0
        return brentq(lambda t: phi_m.phi(t).real - v, 1e-12, hi,
                      xtol=1e-11)

    val = adaptive_quad(
        lambda v: np.asarray([inv(t) / t for t in np.atleast_1d(v)]),
        lo * 1.000001, 1.0 / float(x), rel_tol=1e-8, abs_tol=1e-12,
        panel_budget=2000)
    return -float(np.real(val))


def log_tail_slope(xs, survival_vals, abar_minus=None):
    """Least-squares slope of ln P(I > x) against ln x, compared with the
    model's abar_minus when given."""
    xs = np.asarray(xs, dtype=float)
    sv = np.asarray(survival_vals, dtype=float)
    keep = sv > 0
    slope = float(np.polyfit(np.log(xs[keep]), np.log(sv[keep]), 1)[0])
    out = {"slope": slope}
    if abar_minus is not None:
        out["abar_minus"] = abar_minus
        out["consistent"] = (
            "minus-infinity" if abar_minus == -INF and slope < -3.0
            else abs(slope - abar_minus) < 0.25)
    return out
