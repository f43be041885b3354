"""Levy exponents assembled from explicit Wiener-Hopf pairs.

A model is a pair of Bernstein functions (phi_plus, phi_minus) with

    Psi(z) = -phi_plus(-z) * phi_minus(z),

together with family metadata (jump tails, diffusion part, drift terms)
needed by the moment, smoothness and asymptotic machinery.  Construction
enforces the existence criterion phi_minus(0) > 0 and probes that the
factor pair reproduces the family's closed-form exponent on the
imaginary axis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .bernstein import (BernsteinFunction, LevyMeasureSpec, _affine, _const,
                        _gamma_sub, _ig_sub, bernstein_family, make_rational)
from .errors import (DomainError, ExistenceError, MissingDataError,
                     RootBracketError)

INF = math.inf


@dataclass(frozen=True)
class StripParams:
    """Analyticity abscissae and first zeros of Psi, plus c_psi."""
    a_plus: float
    a_minus: float
    u_plus: float
    u_minus: float
    abar_plus: float
    abar_minus: float
    c_psi: float

    def as_dict(self):
        return {
            "a_plus": self.a_plus, "a_minus": self.a_minus,
            "u_plus": self.u_plus, "u_minus": self.u_minus,
            "abar_plus": self.abar_plus, "abar_minus": self.abar_minus,
            "c_psi": self.c_psi,
        }


@dataclass(frozen=True)
class SupportDescriptor:
    kind: str          # "interval" | "point" | "halfline"
    lo: float
    hi: float

    def contains_interior(self, x):
        if self.kind == "point":
            return False
        return self.lo < x < self.hi


class LevyExponent:
    """Killed Levy process described by its Wiener-Hopf factor pair."""

    def __init__(self, phi_plus: BernsteinFunction, phi_minus: BernsteinFunction,
                 family="custom-pair", params=None, closed_psi=None,
                 sigma2=0.0, lin=0.0, pibar_plus=None, pibar_minus=None,
                 pibar_total=0.0, v_minus_0=None, conv_index=None,
                 check_pair=True):
        if phi_minus.phi(0.0).real <= 0.0:
            raise ExistenceError(
                "phi_minus(0) must be positive for the exponential "
                "functional to be finite a.s.")
        self.phi_plus = phi_plus
        self.phi_minus = phi_minus
        self.family = family
        self.params = dict(params or {})
        self.closed_psi = closed_psi
        self.sigma2 = float(sigma2)
        self.lin = float(lin)
        self.pibar_plus = pibar_plus      # x -> Pi((x, inf)), x > 0
        self.pibar_minus = pibar_minus    # x -> Pi((-inf, -x)), x > 0
        self.pibar_total = pibar_total    # Pi(R), may be inf
        self._v_minus_0 = v_minus_0
        self.conv_index = conv_index      # declared convolution class index
        if check_pair and closed_psi is not None:
            self._probe_pair()

    def _probe_pair(self):
        for t in (0.3, 1.1, 2.7, 5.0, 9.3):
            z = 1j * t
            a = self.psi(z)
            b = self.closed_psi(z)
            if abs(a - b) > 1e-8 * (1.0 + abs(b)):
                raise ValueError(
                    f"Wiener-Hopf pair does not reproduce Psi at {z}: "
                    f"{a} vs {b}")

    # -- basic evaluation ------------------------------------------------------

    def psi(self, z) -> complex:
        """Psi(z) = -phi_plus(-z) phi_minus(z) on the joint strip."""
        z = complex(z)
        return -self.phi_plus.phi(-z) * self.phi_minus.phi(z)

    def psi_at_killing(self) -> float:
        return self.psi(0.0).real

    @property
    def d_plus(self):
        return self.phi_plus.drift

    @property
    def d_minus(self):
        return self.phi_minus.drift

    @property
    def is_subordinator(self):
        return self.phi_minus.is_const

    @property
    def is_neg_subordinator(self):
        return self.phi_plus.is_const

    def mean(self) -> float:
        """E xi_1 = Psi'(0) for unkilled models (Psi(0) = 0)."""
        if abs(self.psi_at_killing()) > 0:
            raise DomainError("mean is defined through Psi'(0) only when "
                              "Psi(0) = 0")
        with np.errstate(divide="ignore"):
            try:
                dplus0 = self.phi_plus.phi_prime(0.0).real
            except (DomainError, ZeroDivisionError, OverflowError):
                dplus0 = INF
        return dplus0 * self.phi_minus.phi(0.0).real

    # -- strip parameters ------------------------------------------------------

    def strip_params(self) -> StripParams:
        ap, up, abp = self.phi_plus.abscissae()
        am, um, abm = self.phi_minus.abscissae()
        a_plus = -ap
        u_plus = -up
        abar_plus = -abp
        c_psi = -a_plus if u_plus == 0.0 else 0.0
        sp = StripParams(a_plus=a_plus, a_minus=am, u_plus=u_plus,
                         u_minus=um, abar_plus=abar_plus, abar_minus=abm,
                         c_psi=c_psi)
        assert sp.u_minus < 0.0, "existence forces u_minus < 0"
        assert (sp.abar_minus == 0.0) == (sp.a_minus == 0.0)
        assert (sp.u_plus == 0.0) == (self.psi_at_killing() == 0.0)
        return sp

    # -- decay index N_Psi -------------------------------------------------------

    def n_psi(self) -> float:
        """Polynomial decay index of the Mellin transform along lines."""
        if not (self.d_plus > 0.0 and self.d_minus == 0.0
                and self.pibar_total < INF):
            return INF
        mbar_minus = self.phi_minus.mu_mass
        mbar_plus = self.phi_plus.mu_mass
        if mbar_minus > 0.0:
            v0 = self._v_minus_0
            if v0 is None:
                raise MissingDataError(
                    "finite N_Psi needs the analytic value v_minus(0+)")
        else:
            v0 = 0.0
        first = v0 / (self.phi_minus.phi(0.0).real + mbar_minus)
        second = (self.phi_plus.phi(0.0).real + mbar_plus) / self.d_plus
        return first + second

    # -- support ---------------------------------------------------------------

    def support(self) -> SupportDescriptor:
        phim_inf = self.phi_minus.phi_at_inf
        d = self.d_plus
        if self.is_subordinator:
            edge = 1.0 / (phim_inf * d) if d > 0 and phim_inf < INF else INF
            if self.phi_plus.is_pure_drift and self.psi_at_killing() == 0.0:
                return SupportDescriptor("point", edge, edge)
            return SupportDescriptor("interval", 0.0, edge)
        if self.phi_plus.is_pure_drift:
            lo = 0.0 if phim_inf == INF else 1.0 / (phim_inf * d)
            return SupportDescriptor("halfline", lo, INF)
        return SupportDescriptor("halfline", 0.0, INF)


# ---------------------------------------------------------------------------
# families
# ---------------------------------------------------------------------------

def brownian(q=0.0, sigma2=1.0, mu=0.0):
    """Potentially killed Brownian motion: Psi(z) = s2/2 z^2 + mu z - q."""
    q = float(q)
    sigma2 = float(sigma2)
    mu = float(mu)
    if sigma2 <= 0 or q < 0:
        raise ValueError("brownian needs sigma2 > 0 and q >= 0")
    if q == 0.0 and mu <= 0.0:
        raise ExistenceError("unkilled brownian needs positive drift")
    disc = math.sqrt(mu * mu + 2.0 * q * sigma2)
    b_plus = (mu + disc) / sigma2
    b_minus = (mu - disc) / sigma2
    phi_p = _affine(-b_minus)                      # z - b_minus
    phi_m = _affine(b_plus, scale=0.5 * sigma2)    # s2/2 (z + b_plus)
    return LevyExponent(
        phi_p, phi_m, family="brownian",
        params={"q": q, "sigma2": sigma2, "mu": mu},
        closed_psi=lambda z: 0.5 * sigma2 * z * z + mu * z - q,
        sigma2=sigma2, lin=mu, pibar_total=0.0, v_minus_0=0.0)


def dufresne(mu=1.0):
    """xi = 2(B + mu t); the exponential functional is 1/(2 Gamma(mu))."""
    return brownian(q=0.0, sigma2=4.0, mu=2.0 * float(mu))


def killed_drift(q=1.0, d=1.0):
    """xi_t = d t killed at rate q; Psi(z) = d z - q."""
    q = float(q)
    d = float(d)
    if q < 0 or d <= 0:
        raise ValueError("killed drift needs q >= 0 and d > 0")
    phi_p = _affine(q / d, scale=d)
    phi_m = _const(1.0)
    return LevyExponent(
        phi_p, phi_m, family="killed-drift", params={"q": q, "d": d},
        closed_psi=lambda z: d * z - q,
        sigma2=0.0, lin=d, pibar_total=0.0, v_minus_0=0.0)


def subordinator(phi: BernsteinFunction, family="subordinator", params=None,
                 pibar_plus=None, pibar_total=None):
    """Potentially killed subordinator with Laplace exponent phi."""
    phi_m = _const(1.0)
    if pibar_plus is None and phi.measure is not None:
        pibar_plus = phi.measure.tail
    total = phi.mu_mass if pibar_total is None else pibar_total
    return LevyExponent(
        phi, phi_m, family=family, params=params or dict(phi.params),
        closed_psi=lambda z: -phi.phi(-z),
        sigma2=0.0, lin=phi.drift, pibar_plus=pibar_plus,
        pibar_total=total, v_minus_0=0.0)


def gamma_subordinator(c=1.0, theta=1.0, q=0.0):
    return subordinator(_gamma_sub(c, theta, q), family="gamma-sub",
                        params={"c": c, "theta": theta, "q": q})


def ig_subordinator(s=1.0, b=1.0, q=0.0):
    return subordinator(_ig_sub(s, b, q), family="ig-sub",
                        params={"s": s, "b": b, "q": q})


def stable_subordinator(alpha=0.5, q=0.0):
    alpha = float(alpha)
    q = float(q)
    if not 0.0 < alpha < 1.0 or q < 0:
        raise ValueError("stable subordinator needs alpha in (0,1), q >= 0")
    if q == 0.0:
        phi = bernstein_family("stable", {"alpha": alpha})
    else:
        phi = BernsteinFunction(
            kill=q, drift=0.0, a_phi=0.0,
            closed_form=lambda z: q + np.asarray(z, dtype=complex) ** alpha,
            d1=lambda z: alpha * np.asarray(z, dtype=complex) ** (alpha - 1.0),
            d2=lambda z: alpha * (alpha - 1.0)
            * np.asarray(z, dtype=complex) ** (alpha - 2.0),
            family="stable-killed", params={"alpha": alpha, "q": q},
            u_phi=-INF, phi_at_inf=INF, mu_mass=INF, finite_at_a=True)
    # Pi tail of the stable measure: pibar(x) = x^-alpha / Gamma(1-alpha)
    from scipy.special import gamma as _g
    coef = 1.0 / _g(1.0 - alpha)
    lev = subordinator(phi, family="stable-sub",
                       params={"alpha": alpha, "q": q},
                       pibar_plus=lambda x: coef * np.asarray(x) ** -alpha,
                       pibar_total=INF)
    return lev


def neg_subordinator(phi: BernsteinFunction, family="neg-subordinator",
                     params=None):
    """xi = -(killed subordinator); needs phi(0) = q > 0."""
    if phi.phi(0.0).real <= 0.0:
        raise ExistenceError("the negated subordinator must be killed")
    phi_p = _const(1.0)
    pibar_minus = phi.measure.tail if phi.measure is not None else None
    return LevyExponent(
        phi_p, phi, family=family, params=params or dict(phi.params),
        closed_psi=lambda z: -phi.phi(z),
        sigma2=0.0, lin=-phi.drift, pibar_minus=pibar_minus,
        pibar_total=phi.mu_mass, v_minus_0=None)


def hypergeometric(beta=0.5, gamma=0.5, beta_hat=0.5, gamma_hat=0.5):
    """Psi(z) = -G(1-b+g-z)/G(1-b-z) * G(bh+gh+z)/G(bh+z)."""
    from .refgamma import digamma, log_gamma, trigamma
    beta = float(beta)
    gamma = float(gamma)
    beta_hat = float(beta_hat)
    gamma_hat = float(gamma_hat)
    if beta > 1 or beta_hat < 0 or not (0 < gamma < 1 and 0 < gamma_hat < 1):
        raise ValueError("hypergeometric needs beta <= 1, beta_hat >= 0, "
                         "gamma, gamma_hat in (0, 1)")
    if beta_hat == 0.0:
        raise ExistenceError("beta_hat = 0 gives phi_minus(0) = 0")

    def _ratio_factor(a):
        # phi(z) = Gamma(z + a + b) / Gamma(z + a) with b in (0, 1)
        def make(b):
            import cmath as _c

            def f(z):
                z = np.asarray(z, dtype=complex)
                flat = z.ravel()
                out = np.asarray([_c.exp(log_gamma(w + a + b)
                                         - log_gamma(w + a)) for w in flat])
                return out.reshape(z.shape) if z.shape else out[0]

            def f1(z):
                z = complex(z)
                return f(z) * (digamma(z + a + b) - digamma(z + a))

            def f2(z):
                z = complex(z)
                d = digamma(z + a + b) - digamma(z + a)
                return f(z) * (d * d + trigamma(z + a + b) - trigamma(z + a))

            return f, f1, f2
        return make

    b_p, g_p = 1.0 - beta, gamma
    f_p, f1_p, f2_p = _ratio_factor(b_p)(g_p)
    phi_p = BernsteinFunction(
        kill=f_p(0.0).real if b_p > 0 else 0.0, drift=0.0,
        a_phi=-(b_p + g_p), closed_form=f_p, d1=f1_p, d2=f2_p,
        family="gamma-shift-ratio", params={"a": b_p, "b": g_p},
        u_phi=(-b_p if b_p > 0 else 0.0), phi_at_inf=INF, mu_mass=INF)
    b_m, g_m = beta_hat, gamma_hat
    f_m, f1_m, f2_m = _ratio_factor(b_m)(g_m)
    phi_m = BernsteinFunction(
        kill=f_m(0.0).real, drift=0.0,
        a_phi=-(b_m + g_m), closed_form=f_m, d1=f1_m, d2=f2_m,
        family="gamma-shift-ratio", params={"a": b_m, "b": g_m},
        u_phi=-b_m, phi_at_inf=INF, mu_mass=INF)

    import cmath as _c

    def closed_psi(z):
        return -_c.exp(log_gamma(1 - beta + gamma - z) - log_gamma(1 - beta - z)
                       + log_gamma(beta_hat + gamma_hat + z)
                       - log_gamma(beta_hat + z))

    return LevyExponent(
        phi_p, phi_m, family="hypergeometric",
        params={"beta": beta, "gamma": gamma, "beta_hat": beta_hat,
                "gamma_hat": gamma_hat},
        closed_psi=closed_psi, sigma2=0.0, pibar_total=INF)


# -- hyper-exponential -------------------------------------------------------

def _hyperexp_psi(q, sigma2, mu, pos, neg):
    def psi(z):
        z = np.asarray(z, dtype=complex) if isinstance(z, np.ndarray) \
            else complex(z)
        val = -q + mu * z + 0.5 * sigma2 * z * z
        for a, r in pos:
            val = val + a * z / (r - z)
        for a, r in neg:
            val = val - a * z / (z + r)
        return val
    return psi


def _interlaced_roots(f, rates, has_outer):
    """Roots of f on the positive axis, one per interval between the
    consecutive ``rates`` (poles of f), plus an outer root past the last
    rate when ``has_outer``.  f(0+) < 0 is assumed."""
    eps = 1e-9
    roots = []
    prev = 0.0
    for r in rates:
        lo = prev + eps * max(1.0, prev)
        hi = r - eps * max(1.0, r)
        if f(lo) * f(hi) > 0:
            raise RootBracketError(
                f"no sign change in predicted interval ({lo}, {hi})")
        roots.append(brentq(f, lo, hi, xtol=1e-14, rtol=1e-14))
        prev = r
    if has_outer:
        lo = prev + eps * max(1.0, prev)
        width = max(1.0, prev)
        for _ in range(100):
            hi = lo + width
            if f(lo) * f(hi) < 0:
                break
            width *= 2.0
        else:
            raise RootBracketError("outer root bracket not found")
        roots.append(brentq(f, lo, hi, xtol=1e-14, rtol=1e-14))
    return sorted(roots)


def hyperexp_roots(q, sigma2, mu, pos, neg):
    """All real roots of Psi(z) = 0 located inside interlacing intervals.

    Returns (chi, chi_hat): the positive roots ascending and the absolute
    values of the negative roots ascending.  Raises RootBracketError when
    a predicted sign change is absent.
    """
    if q <= 0:
        raise DomainError("root interlacing needs a killed model (q > 0)")
    psi = _hyperexp_psi(float(q), float(sigma2), float(mu), pos, neg)
    rhos = sorted(r for _, r in pos)
    rho_hats = sorted(r for _, r in neg)
    chi = _interlaced_roots(lambda x: psi(x).real, rhos,
                            has_outer=(sigma2 > 0 or mu > 0))
    chi_hat = _interlaced_roots(lambda y: psi(-y).real, rho_hats,
                                has_outer=(sigma2 > 0 or mu < 0))
    return chi, chi_hat


def hyper_exponential(q=1.0, sigma2=1.0, mu=0.0, pos=((1.0, 2.0),),
                      neg=((1.0, 3.0),)):
    """Compound Poisson with two-sided exponential-mixture jumps,
    Brownian part sigma2, drift mu, killing q > 0.

    ``pos`` and ``neg`` are sequences of (weight a_j, rate rho_j); the jump
    density is sum a_j rho_j e^{-rho_j x} on x > 0 and the mirror image
    with the ``neg`` parameters on x < 0.
    """
    q = float(q)
    sigma2 = float(sigma2)
    mu = float(mu)
    pos = [(float(a), float(r)) for a, r in pos]
    neg = [(float(a), float(r)) for a, r in neg]
    if q <= 0:
        raise ValueError("hyper-exponential family needs q > 0")
    psi = _hyperexp_psi(q, sigma2, mu, pos, neg)
    chi, chi_hat = hyperexp_roots(q, sigma2, mu, pos, neg)
    rhos = sorted(r for _, r in pos)
    rhostars = sorted(r for _, r in neg)
    _check_interlacing(chi, rhos)
    _check_interlacing(chi_hat, rhostars)

    r_plus = make_rational(1.0, zeros=chi, poles=rhos)
    r_minus = make_rational(1.0, zeros=chi_hat, poles=rhostars)
    # overall scale from matching Psi at a probe away from all poles
    probe = None
    for cand in (1.0, 0.73, 1.31, 0.52, 1.87):
        if all(abs(cand - r) > 0.05 for r in rhos):
            probe = cand
            break
    c = (-psi(probe) / (r_plus.phi(-probe) * r_minus.phi(probe))).real
    if c <= 0:
        raise ValueError("factor normalization came out non-positive")
    root_c = math.sqrt(c)
    phi_p = r_plus.scaled(root_c)
    phi_m = r_minus.scaled(root_c)

    def pibar_plus(x):
        x = np.asarray(x, dtype=float)
        return sum(a * np.exp(-r * x) for a, r in pos)

    def pibar_minus(x):
        x = np.asarray(x, dtype=float)
        return sum(a * np.exp(-r * x) for a, r in neg)

    total = sum(a for a, _ in pos) + sum(a for a, _ in neg)
    lev = LevyExponent(
        phi_p, phi_m, family="hyperexp",
        params={"q": q, "sigma2": sigma2, "mu": mu,
                "pos": tuple(pos), "neg": tuple(neg)},
        closed_psi=psi, sigma2=sigma2, lin=mu,
        pibar_plus=pibar_plus if pos else None,
        pibar_minus=pibar_minus if neg else None,
        pibar_total=total,
        v_minus_0=_exp_mixture_v0(phi_m) if phi_m.drift == 0.0 else None,
        conv_index=(min(r for _, r in neg) if neg else None))
    lev.roots = {"chi": chi, "chi_hat": chi_hat,
                 "rho": rhos, "rho_hat": rhostars}
    return lev


def _check_interlacing(zeros, poles):
    seq = []
    for k, p in enumerate(poles):
        seq.append(zeros[k])
        seq.append(p)
    seq.extend(zeros[len(poles):])
    if any(seq[i] >= seq[i + 1] for i in range(len(seq) - 1)):
        raise RootBracketError(f"roots fail interlacing: {zeros} vs {poles}")


def _exp_mixture_v0(phi: BernsteinFunction):
    """v(0+) = sum r_k rho_k for a driftless rational factor whose jump
    tail is sum r_k e^{-rho_k y}."""
    if phi.family != "rational" and "zeros" not in phi.params:
        return None
    zeros = phi.params.get("zeros")
    poles = phi.params.get("poles")
    scale = phi.params.get("scale", 1.0)
    if zeros is None or len(zeros) != len(poles):
        return None
    v0 = 0.0
    for j, p in enumerate(poles):
        num = scale
        for x in zeros:
            num *= (-p + x)
        den = -p
        for i, x in enumerate(poles):
            if i != j:
                den *= (-p + x)
        v0 += (num / den) * p
    return v0


def custom_pair(phi_plus, phi_minus, **meta):
    return LevyExponent(phi_plus, phi_minus, family="custom-pair", **meta)


def spectrally_negative_norm(lev: LevyExponent):
    """Rescale the pair so phi_plus has unit drift (used by series laws
    that fix the normalization of the one-sided factor)."""
    d = lev.phi_plus.drift
    if d <= 0:
        raise DomainError("requires positive drift in phi_plus")
    return lev.phi_plus.scaled(1.0 / d), lev.phi_minus.scaled(d)


LEVY_FAMILIES = {
    "brownian": brownian,
    "dufresne": dufresne,
    "killed-drift": killed_drift,
    "gamma-sub": gamma_subordinator,
    "ig-sub": ig_subordinator,
    "stable-sub": stable_subordinator,
    "hyperexp": hyper_exponential,
    "hypergeometric": hypergeometric,
}


def levy_family(family_id: str, params=None) -> LevyExponent:
    try:
        builder = LEVY_FAMILIES[family_id]
    except KeyError:
        raise DomainError(f"unknown Levy family {family_id!r}") from None
    params = dict(params or {})
    if family_id == "hyperexp":
        for key in ("pos", "neg"):
            if key in params:
                params[key] = [tuple(p) for p in params[key]]
    return builder(**params)
