"""Evaluation of Bernstein-gamma functions W_phi.

W_phi is the unique positive-definite solution of

    W(z + 1) = phi(z) W(z),   W(1) = 1,

analytic on Re z > abar_phi and meromorphic on Re z > a_phi.  Three routes
are provided and cross-validated:

* ``product``  -- Weierstrass product in log space with an exact
  Euler-Maclaurin tail correction, so the truncation level only has to
  exceed a small multiple of |z|;
* ``stirling`` -- a Binet-type contour representation
  log W(z) = log(phi(1)/phi(z))/2 + L(z-1) - T - D(z), where L integrates
  log phi from 1 to z, T is the sawtooth constant and D(z) the sawtooth
  integral of (log phi)'' shifted by z.  The identity is exact; only
  quadrature error remains;
* ``closed``   -- catalog closed forms, when the family carries one.

Arguments left of the shift threshold are pulled up through the
recurrence, which also serves the meromorphic continuation onto
(a_phi, abar_phi]; poles of the continuation raise PoleError.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .bernstein import BernsteinFunction
from .errors import (ConvergenceError, DomainError, NumericalFailure,
                     PoleError)
from .quadrature import adaptive_quad, adaptive_quad_segment
from .refgamma import log_gamma

_GL8_X, _GL8_W = np.polynomial.legendre.leggauss(8)
_S8 = 0.5 * (_GL8_X + 1.0)
_BW8 = 0.5 * _GL8_W * _S8 * (1.0 - _S8)      # Gauss weights times B(u)


@dataclass(frozen=True)
class EvaluatorPolicy:
    rel_tol: float = 1e-12
    product_start_n: int = 64
    product_cap: int = 2 ** 20
    shift_threshold: float = 10.0
    panel_budget: int = 10000
    im_product_max: float = 30.0
    cross_check_band: tuple = (20.0, 40.0)


def _vec(f):
    """Wrap a scalar-or-vector callable to always accept complex arrays."""
    def g(u):
        arr = np.asarray(u)
        try:
            out = f(arr)
            out = np.asarray(out)
            if out.shape == arr.shape:
                return out
        except Exception:
            pass
        flat = np.asarray([f(w) for w in np.atleast_1d(arr).ravel()])
        return flat.reshape(np.atleast_1d(arr).shape)
    return g


class BernsteinGammaEvaluator:
    """Evaluator for W_phi with cached constants gamma_phi and T_phi.

    Immutable and shareable once constructed; the constants and the
    real-axis tables are filled on first use and never change afterwards.
    """

    def __init__(self, phi: BernsteinFunction, policy: EvaluatorPolicy | None = None):
        self.phi = phi
        self.policy = policy or EvaluatorPolicy()
        self._phi_v = _vec(phi._raw)
        self._d1_v = _vec(phi._raw_d1)
        self._d2_v = _vec(phi._raw_d2)
        self._gamma_phi = None
        self._t_phi = None
        self._lnphi_k = np.empty(0)
        self._psi1_k = np.empty(0)

    # -- cached real-axis tables ---------------------------------------------

    def _grow_tables(self, n):
        have = len(self._lnphi_k)
        if n <= have:
            return
        ks = np.arange(have + 1, n + 1, dtype=float)
        pk = self._phi_v(ks)
        self._lnphi_k = np.concatenate([self._lnphi_k, np.log(pk.real)])
        self._psi1_k = np.concatenate(
            [self._psi1_k, (self._d1_v(ks) / pk).real])

    def _psi2(self, w):
        """(log phi)'' on an array of points."""
        p = self._phi_v(w)
        r = self._d1_v(w) / p
        return self._d2_v(w) / p - r * r

    # -- constants -----------------------------------------------------------

    @property
    def gamma_phi(self):
        if self._gamma_phi is None:
            self._gamma_phi = self._compute_gamma_phi()
        return self._gamma_phi

    def _partial_gamma(self, n):
        self._grow_tables(n)
        s = float(np.sum(self._psi1_k[:n])) - float(self._lnphi_k[n - 1])
        # Euler-Maclaurin correction for the discarded tail
        psi1_n = float(self._psi1_k[n - 1])
        psi2_n = float(self._psi2(np.asarray([float(n)]))[0].real)
        return s - 0.5 * psi1_n - psi2_n / 12.0

    def _compute_gamma_phi(self):
        tol = self.policy.rel_tol
        n = 64
        prev = self._partial_gamma(n)
        extr_prev = prev
        while n < 10 ** 5:
            n *= 2
            cur = self._partial_gamma(n)
            # one Richardson step on the leading 1/n^4 error
            extr = cur + (cur - prev) / 15.0
            if abs(extr - extr_prev) < tol * max(1.0, abs(extr)):
                lo = -float(self._lnphi_k[0])
                hi = lo + float(self._psi1_k[0])
                if not (lo - 1e-8 <= extr <= hi + 1e-8):
                    raise ConvergenceError(
                        f"gamma_phi={extr} escapes its bracket [{lo}, {hi}]")
                return extr
            prev, extr_prev = cur, extr
        raise ConvergenceError("gamma_phi series did not settle in 1e5 terms")

    @property
    def t_phi(self):
        if self._t_phi is None:
            self._t_phi = -self._sawtooth_psi2(1.0 + 0.0j).real
        return self._t_phi

    def _sawtooth_psi2(self, z, k_panels=None):
        """D(z) = (1/2) int_0^inf B(u) (log phi)''(z + u) du.

        Unit Gauss panels plus the Fourier tail
        (1/6) int + psi2'(K)/360 evaluated exactly through psi1.
        """
        K = k_panels or max(128, int(4 + 2 * abs(z.real)))
        K = min(K, 2048)
        u = (np.arange(K, dtype=float)[:, None] + _S8[None, :]).ravel()
        vals = self._psi2(z + u).reshape(K, len(_S8))
        core = 0.5 * np.sum(vals @ _BW8)
        wk = z + float(K)
        p = self._phi_v(np.asarray([wk]))[0]
        psi1_k = self._d1_v(np.asarray([wk]))[0] / p
        h = 1e-3
        psi2p = (self._psi2(np.asarray([wk + h]))[0]
                 - self._psi2(np.asarray([wk - h]))[0]) / (2.0 * h)
        tail = 0.5 * (-psi1_k / 6.0 + psi2p / 360.0)
        return core + tail

    # -- L, A and the Stirling estimate ---------------------------------------

    def log_L_phi(self, z):
        """L(z) = int over 1 -> 1+Re z -> z+1 of log phi, Re z > -1."""
        z = complex(z)
        if z.real <= -1.0:
            raise DomainError("L_phi needs Re z > -1")
        a, b = z.real, z.imag
        phiv = self._phi_v
        floor = max(1e-15, 0.01 * self.policy.rel_tol)
        leg1 = adaptive_quad(lambda u: np.log(phiv(u + 0.0j)),
                             1.0, 1.0 + a,
                             rel_tol=self.policy.rel_tol, abs_tol=floor,
                             panel_budget=self.policy.panel_budget)
        if b == 0.0:
            return leg1
        line = 1.0 + a
        leg2 = adaptive_quad(lambda u: 1j * np.log(phiv(line + 1j * u)),
                             0.0, b,
                             rel_tol=self.policy.rel_tol, abs_tol=floor,
                             panel_budget=self.policy.panel_budget)
        return leg1 + leg2

    def a_phi_integral(self, a, b):
        """A(a + ib) = int_0^b arg phi(a + iu) du, a > 0."""
        if a <= 0:
            raise DomainError("A_phi needs a > 0")
        phiv = self._phi_v
        return float(adaptive_quad(
            lambda u: np.angle(phiv(a + 1j * u)), 0.0, float(b),
            rel_tol=max(self.policy.rel_tol, 1e-11),
            panel_budget=self.policy.panel_budget).real)

    def a_phi_integral_alt(self, a, b, cutoff=None):
        """Alternative form int_a^inf ln|phi(u+ib)/phi(u)| du (cross-check)."""
        U = cutoff or max(200.0, 60.0 * abs(b))
        phiv = self._phi_v

        def f(u):
            return np.log(np.abs(phiv(u + 1j * b))) - np.log(np.abs(phiv(u)))

        return float(adaptive_quad(f, a, U, rel_tol=1e-9,
                                   panel_budget=self.policy.panel_budget).real)

    def wgamma_stirling_estimate(self, z):
        """sqrt(phi(1)) e^{-T} e^{L(z-1)} / sqrt(phi(z+1)); an estimate."""
        z = complex(z)
        if z.real <= 0:
            raise DomainError("the Stirling estimate needs Re z > 0")
        ln_phi1 = math.log(self.phi.phi(1.0).real)
        return cmath.exp(0.5 * ln_phi1 - self.t_phi + self.log_L_phi(z - 1.0)
                         - 0.5 * cmath.log(self.phi.phi(z + 1.0)))

    # -- the three routes ------------------------------------------------------

    def _log_w_stirling(self, z):
        """Exact Binet-type form; z must satisfy Re z > 0."""
        ln_phi1 = math.log(self.phi.phi(1.0).real)
        return (0.5 * (ln_phi1 - cmath.log(self.phi.phi(z)))
                + self.log_L_phi(z - 1.0)
                - self.t_phi - self._sawtooth_psi2(z))

    def _log_w_product(self, z):
        pol = self.policy
        n = max(pol.product_start_n, int(8 + 2 * abs(z)))
        prev = None
        while n <= pol.product_cap:
            val = self._log_w_product_at(z, n)
            if prev is not None and abs(val - prev) <= 0.5 * pol.rel_tol * max(
                    1.0, abs(val)):
                return val
            prev = val
            n *= 2
        raise ConvergenceError(f"product for W(z={z}) did not settle "
                               f"below N={pol.product_cap}")

    def _log_w_product_at(self, z, n):
        self._grow_tables(n)
        ks = np.arange(1, n + 1, dtype=float)
        pkz = self._phi_v(ks + z)
        terms = z * self._psi1_k[:n] - np.log(pkz) + self._lnphi_k[:n]
        s = complex(np.sum(terms))
        s += -self.gamma_phi * z - cmath.log(self.phi.phi(z))
        # Euler-Maclaurin tail: sum_{k>n} [z psi1(k) - log(phi(k+z)/phi(k))]
        fn = float(n)
        ln_phi_n = float(self._lnphi_k[n - 1])
        integral = adaptive_quad_segment(
            lambda w: np.log(self._phi_v(w)), fn, fn + z,
            rel_tol=self.policy.rel_tol, abs_tol=1e-15) - z * ln_phi_n
        pn = self._phi_v(np.asarray([fn + z]))[0]
        t_n = z * self._psi1_k[n - 1] - (cmath.log(pn) - ln_phi_n)
        psi2_n = self._psi2(np.asarray([fn]))[0]
        psi1_nz = self._d1_v(np.asarray([fn + z]))[0] / pn
        tp_n = z * psi2_n - psi1_nz + self._psi1_k[n - 1]
        return s + integral - 0.5 * t_n - tp_n / 12.0

    # -- public evaluation -----------------------------------------------------

    def log_wgamma(self, z, route="auto"):
        """log W(z), exact modulo 2 pi i.  Raises PoleError at poles."""
        z = complex(z)
        a_phi = self.phi.a_phi
        on_boundary = (z.real == a_phi and self.phi.finite_at_a)
        if not (z.real > a_phi or on_boundary):
            raise DomainError(
                f"Re z = {z.real} outside the meromorphic strip (> {a_phi})")
        pol = self.policy
        m = 0
        if z.real < pol.shift_threshold:
            m = int(math.ceil(pol.shift_threshold - z.real))
        shift_log = 0.0 + 0.0j
        for j in range(m):
            pj = self.phi.phi(z + j)
            if pj == 0 or abs(pj) < 1e-280:
                raise PoleError(f"phi vanishes at z+{j} = {z + j}; "
                                "W has a pole there")
            shift_log += cmath.log(pj)
        w = z + m
        core = self._core_log_w(w, route)
        return core - shift_log

    def _core_log_w(self, w, route):
        pol = self.policy
        if route == "closed" or (route == "auto"
                                 and self.phi.closed_logw is not None):
            if self.phi.closed_logw is None:
                raise DomainError(f"family {self.phi.family!r} has no "
                                  "closed form for W")
            return self.phi.closed_logw(w)
        if route == "product":
            return self._log_w_product(w)
        if route == "stirling":
            return self._log_w_stirling(w)
        if route != "auto":
            raise ValueError(f"unknown route {route!r}")
        im = abs(w.imag)
        lo, hi = pol.cross_check_band
        if im <= pol.im_product_max:
            val = self._log_w_product(w)
            if lo <= im <= hi:
                other = self._log_w_stirling(w)
                self._assert_agreement(val, other, w)
            return val
        val = self._log_w_stirling(w)
        if lo <= im <= hi:
            other = self._log_w_product(w)
            self._assert_agreement(val, other, w)
        return val

    def _assert_agreement(self, a, b, w):
        tol = 10.0 * self.policy.rel_tol
        if abs(cmath.exp(a - b) - 1.0) > tol:
            raise NumericalFailure(
                f"product and Stirling routes disagree at z={w}: "
                f"{a} vs {b}")

    def wgamma(self, z, route="auto"):
        """W_phi(z) on Re z > a_phi (meromorphic pull-back left of abar)."""
        return cmath.exp(self.log_wgamma(z, route=route))

    def log_wgamma_many(self, zs, route="auto"):
        """Vectorized log W over an array of points (closed forms evaluate
        in one shot; engine routes fall back to a scalar loop)."""
        zs = np.asarray(zs, dtype=complex)
        pol = self.policy
        re_min = float(np.min(zs.real))
        a_phi = self.phi.a_phi
        if not (re_min > a_phi or (re_min == a_phi and self.phi.finite_at_a)):
            raise DomainError(f"Re z reaches {re_min} <= a_phi = {a_phi}")
        use_closed = (route in ("auto", "closed")
                      and self.phi.closed_logw is not None)
        if not use_closed:
            return np.asarray([self.log_wgamma(complex(w), route=route)
                               for w in zs.ravel()]).reshape(zs.shape)
        m = max(0, int(math.ceil(pol.shift_threshold - re_min)))
        shift_log = np.zeros(zs.shape, dtype=complex)
        for j in range(m):
            pj = self._phi_v(zs + j)
            if np.any(np.abs(pj) < 1e-280):
                raise PoleError("phi vanishes on the shift path")
            shift_log += np.log(pj)
        try:
            core = self.phi.closed_logw(zs + m)
            core = np.asarray(core)
            if core.shape != zs.shape:
                raise ValueError
        except Exception:
            core = np.asarray([self.phi.closed_logw(complex(w) + m)
                               for w in zs.ravel()]).reshape(zs.shape)
        return core - shift_log

    # -- transforms --------------------------------------------------------------

    def transform_shift(self, beta):
        """Evaluator for phi_beta(z) = phi(z + beta)."""
        phi = self.phi
        a, u, _ = phi.abscissae()
        beta = float(beta)
        if beta < u or (beta == u and phi.phi(u).real != 0.0):
            raise DomainError(f"shift beta={beta} must exceed u_phi={u}")
        if beta <= a:
            raise DomainError(f"shift beta={beta} must exceed a_phi={a}")
        parent = self

        def cf(z):
            return phi._raw(np.asarray(z) + beta) if isinstance(z, np.ndarray) \
                else phi._raw(z + beta)

        lw_1b = parent.log_wgamma(1.0 + beta)
        shifted = BernsteinFunction(
            kill=phi.phi(beta).real, drift=phi.drift,
            a_phi=a - beta,
            closed_form=cf,
            d1=lambda z: phi._raw_d1(z + beta),
            d2=lambda z: phi._raw_d2(z + beta),
            closed_logw=lambda z: parent.log_wgamma(z + beta) - lw_1b,
            family=phi.family + "+shift",
            params={**phi.params, "beta": beta},
            u_phi=(u - beta if u > -math.inf and u - beta <= 0 else -math.inf),
            phi_at_inf=phi.phi_at_inf,
            mu_mass=(0.0 if phi.mu_mass == 0.0 else phi.mu_mass),
            weak_nonlattice=phi.weak_nonlattice)
        return BernsteinGammaEvaluator(shifted, self.policy)

    def transform_tbeta(self, beta):
        """Evaluator for (T_beta phi)(z) = z phi(z + beta) / (z + beta)."""
        beta = float(beta)
        if beta <= 0:
            raise DomainError("T_beta needs beta > 0")
        phi = self.phi
        parent = self
        lg1b = log_gamma(1.0 + beta)

        def cf(z):
            z = z if isinstance(z, np.ndarray) else complex(z)
            return z * phi._raw(z + beta) / (z + beta)

        def d1(z):
            z = complex(z)
            p, dp = phi._raw(z + beta), phi._raw_d1(z + beta)
            g = z / (z + beta)
            gp = beta / (z + beta) ** 2
            return gp * p + g * dp

        def d2(z):
            z = complex(z)
            p = phi._raw(z + beta)
            dp = phi._raw_d1(z + beta)
            ddp = phi._raw_d2(z + beta)
            g = z / (z + beta)
            gp = beta / (z + beta) ** 2
            gpp = -2.0 * beta / (z + beta) ** 3
            return gpp * p + 2.0 * gp * dp + g * ddp

        lw_1b = parent.log_wgamma(1.0 + beta)

        def lw(z):
            # the Gamma-ratio factor composes with the beta-shifted W so
            # that the recurrence for z phi(z+beta)/(z+beta) holds
            return (lg1b + log_gamma(z) - log_gamma(z + beta)
                    + parent.log_wgamma(z + beta) - lw_1b)

        tphi = BernsteinFunction(
            kill=0.0, drift=phi.drift, a_phi=max(phi.a_phi - beta, -beta),
            closed_form=cf, d1=d1, d2=d2, closed_logw=lw,
            family=phi.family + "+tbeta",
            params={**phi.params, "beta": beta},
            u_phi=0.0,
            phi_at_inf=phi.phi_at_inf,
            weak_nonlattice=phi.weak_nonlattice)
        return BernsteinGammaEvaluator(tphi, self.policy)


# module-level conveniences mirroring the operation names

def gamma_phi_constant(ev: BernsteinGammaEvaluator) -> float:
    return ev.gamma_phi


def t_phi_constant(ev: BernsteinGammaEvaluator) -> float:
    return ev.t_phi


def wgamma(ev: BernsteinGammaEvaluator, z, route="auto") -> complex:
    return ev.wgamma(z, route=route)


def log_l_phi(ev: BernsteinGammaEvaluator, z) -> complex:
    return ev.log_L_phi(z)


def a_phi(ev: BernsteinGammaEvaluator, a, b) -> float:
    return ev.a_phi_integral(a, b)


def wgamma_stirling_estimate(ev: BernsteinGammaEvaluator, z) -> complex:
    return ev.wgamma_stirling_estimate(z)


def transform_shift(ev: BernsteinGammaEvaluator, beta) -> BernsteinGammaEvaluator:
    return ev.transform_shift(beta)


def transform_tbeta(ev: BernsteinGammaEvaluator, beta) -> BernsteinGammaEvaluator:
    return ev.transform_tbeta(beta)
