"""Recovery of the density, CDF and survival function by Mellin inversion.

The n-th derivative of the density is

    f^(n)(x) = (-1)^n / (2 pi) * int_R x^{-a-ib-n} K(a+ib) db,
    K(z) = phi_minus(0) Gamma(z+n) W_minus(1-z) / W_plus(z),

integrated along a vertical line inside the analyticity strip.  The line
is placed automatically by minimizing the integrand magnitude at b = 0
(a Laplace-point rule, which adapts the line to tail queries), and the
truncation height comes from a fitted decay model of |K| with a safety
factor.  Grid evaluation shares the kernel nodes across all x values;
everything is assembled in log space so saddle-adapted lines far to the
right cannot overflow.

Series forms for one-sided models and the integral-equation residual
diagnostics live here as well.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import (DivergenceWarning, DomainError, RadiusError,
                     RegimeError, SmoothnessError, TruncationError)
from .levy import LevyExponent
from .mellin import MellinObject
from .quadrature import adaptive_quad
from .refgamma import log_gamma
from .wgamma import BernsteinGammaEvaluator

INF = math.inf

_GL16_X, _GL16_W = np.polynomial.legendre.leggauss(16)
_GL8_X, _GL8_W = np.polynomial.legendre.leggauss(8)


@dataclass(frozen=True)
class InversionPolicy:
    line_a: float | None = None        # None: choose automatically
    truncation_b: float | None = None  # None: fit the kernel decay
    target_tol: float = 1e-8           # absolute tolerance on the result
    b_cap: float = 5e5
    safety: float = 4.0
    a_max: float = 160.0               # cap for the automatic line search


@dataclass
class DensityGrid:
    x: np.ndarray
    n: int
    values: np.ndarray
    est_error: np.ndarray
    method: list
    raw_values: np.ndarray


# ---------------------------------------------------------------------------
# line placement and truncation
# ---------------------------------------------------------------------------

def _kernel_log(M: MellinObject, z, n):
    return M.log_mellin(z, n=n)


def choose_line(M: MellinObject, x_ref, n, policy: InversionPolicy):
    """Pick the inversion abscissa by minimizing |K(a) x^{-a-n}| at b = 0."""
    if policy.line_a is not None:
        return float(policy.line_a)
    lo, hi = M.sp.c_psi, 1.0 - M.sp.abar_minus
    margin = 0.05 if hi - lo > 0.2 else 0.25 * (hi - lo)
    lo_eff = (lo + margin) if lo > -INF else min(hi, 1.0) - 18.0
    hi_eff = (hi - margin) if hi < INF else policy.a_max
    if hi_eff <= lo_eff:
        return 0.5 * (lo + hi)
    grid = np.linspace(lo_eff, hi_eff, 48)
    lnx = math.log(x_ref)
    best_a, best_v = None, INF
    for a in grid:
        if _near_nonpos_int(a + n) or _near_nonpos_int(a):
            continue
        try:
            v = _kernel_log(M, complex(a, 0.0), n).real - (a + n) * lnx
        except Exception:
            continue
        if v < best_v:
            best_a, best_v = float(a), v
    if best_a is None:
        raise DomainError("no admissible inversion line found")
    return best_a


def _near_nonpos_int(x, d=0.2):
    return x <= 0.25 and abs(x - round(x)) < d


class _TailModel:
    """Fitted decay of ln|K(a+ib)|: polynomial (c + s ln b) or
    exponential (c + s b), whichever fits the probes better."""

    def __init__(self, M, a, n, extra_inverse_power=0.0):
        b0 = max(8.0, 2.0 + n)
        bs = b0 * 2.0 ** np.arange(6)
        vals = np.asarray([_kernel_log(M, complex(a, b), n).real
                           for b in bs])
        vals = vals - extra_inverse_power * np.log(bs)
        sp_, cp = np.polyfit(np.log(bs), vals, 1)
        se, ce = np.polyfit(bs, vals, 1)
        rp = float(np.sum((vals - (cp + sp_ * np.log(bs))) ** 2))
        re_ = float(np.sum((vals - (ce + se * bs)) ** 2))
        self.exp_model = re_ < rp
        self.s = se if self.exp_model else sp_
        self.c = ce if self.exp_model else cp
        self.b_lo = float(bs[-1])

    def log_abs_k(self, B):
        return self.c + (self.s * B if self.exp_model
                         else self.s * math.log(B))

    def log_abs_tail(self, B):
        """log of int_B^inf |K| under the fitted model (inf if divergent)."""
        if self.exp_model:
            if self.s >= -1e-12:
                return INF
            return self.log_abs_k(B) - math.log(-self.s)
        if self.s >= -1.05:
            return INF
        return self.log_abs_k(B) + math.log(B) - math.log(-self.s - 1.0)

    def log_ibp_tail(self, B, lam_min):
        """log residual of the oscillatory tail after one explicit
        integration-by-parts correction term."""
        if lam_min < 0.02:
            return INF
        dlog = abs(self.s) * (1.0 if self.exp_model else 1.0 / B)
        return (self.log_abs_k(B) + math.log(max(dlog, 1e-300))
                + math.log(2.0) - 2.0 * math.log(lam_min))

    def log_tail(self, B, lam_min):
        return min(self.log_abs_tail(B), self.log_ibp_tail(B, lam_min))


def _fit_truncation(M: MellinObject, a, n, lnx_arr, policy: InversionPolicy,
                    extra_inverse_power=0.0, pref_coeff=None):
    """Truncation height B with the per-x discarded-tail estimate below
    target_tol at every requested x.  ``extra_inverse_power`` models
    additional 1/b^k factors of the integrand (the CDF forms)."""
    model = _TailModel(M, a, n, extra_inverse_power)
    lnx_arr = np.atleast_1d(np.asarray(lnx_arr, dtype=float))
    if pref_coeff is None:
        pref_coeff = -(a + n)

    def worst(B):
        return max(model.log_tail(B, abs(l)) + pref_coeff * l
                   - math.log(math.pi) for l in lnx_arr)

    if policy.truncation_b is not None:
        B = float(policy.truncation_b)
        return B, math.exp(min(worst(B), 300.0)), model
    target = math.log(policy.target_tol / policy.safety)
    B = model.b_lo
    while B < policy.b_cap:
        if worst(B) < target:
            return B, math.exp(min(worst(B), 300.0)), model
        B *= 1.4
    if worst(policy.b_cap) < target:
        return float(policy.b_cap), math.exp(min(worst(policy.b_cap), 300.0)), model
    raise TruncationError(
        f"kernel decay ({'exp' if model.exp_model else 'poly'} "
        f"rate {model.s:.3g}) cannot reach tolerance "
        f"{policy.target_tol:g} below the cap {policy.b_cap:g}")


# ---------------------------------------------------------------------------
# shared-node inversion
# ---------------------------------------------------------------------------

def _panel_nodes(B, width):
    n_panels = max(4, int(math.ceil(B / width)))
    edges = np.linspace(0.0, B, n_panels + 1)
    mid = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * (edges[1:] - edges[:-1])
    b16 = (mid[:, None] + half[:, None] * _GL16_X[None, :]).ravel()
    b8 = (mid[:, None] + half[:, None] * _GL8_X[None, :]).ravel()
    w16 = (half[:, None] * _GL16_W[None, :]).ravel()
    w8 = (half[:, None] * _GL8_W[None, :]).ravel()
    return n_panels, b16, b8, w16, w8


def _invert_on_grid(M, xs, n, a, B, policy, model=None):
    """Shared-node inversion for many x.

    Kernel values are scaled by a reference level so saddle-adapted lines
    far to the right cannot overflow.  For x with |ln x| >= 0.02 the
    oscillatory tail past B is corrected by one explicit
    integration-by-parts term K(B) e^{-iB ln x} / (i ln x).
    """
    xs = np.asarray(xs, dtype=float)
    lnx = np.log(xs)
    ref = _kernel_log(M, complex(a, 0.0), n).real
    width = min(2.0, 0.5 * math.pi / max(0.25, float(np.max(np.abs(lnx)))))
    sign = (-1.0) ** n
    vals = np.zeros(len(xs))
    errs = np.full(len(xs), INF)
    k_at_b = cmath.exp(_kernel_log(M, complex(a, B), n) - ref)
    for _ in range(3):
        n_panels, b16, b8, w16, w8 = _panel_nodes(B, width)
        k16 = np.exp(M.log_mellin_many(a + 1j * b16, n) - ref)
        k8 = np.exp(M.log_mellin_many(a + 1j * b8, n) - ref)
        vals = np.empty(len(xs))
        errs = np.empty(len(xs))
        for i0 in range(0, len(xs), 32):
            sl = slice(i0, min(i0 + 32, len(xs)))
            ph16 = np.exp(-1j * np.outer(lnx[sl], b16))
            ph8 = np.exp(-1j * np.outer(lnx[sl], b8))
            s16 = (ph16 * (k16 * w16)[None, :]).reshape(
                -1, n_panels, 16).sum(axis=2)
            s8 = (ph8 * (k8 * w8)[None, :]).reshape(
                -1, n_panels, 8).sum(axis=2)
            total = s16.sum(axis=1)
            lam = lnx[sl]
            osc = np.abs(lam) >= 0.02
            corr = np.where(
                osc,
                k_at_b * np.exp(-1j * B * lam) / (1j * np.where(osc, lam, 1.0)),
                0.0)
            pref = np.exp(ref - (a + n) * lam) / math.pi
            vals[sl] = sign * pref * np.real(total + corr)
            errs[sl] = pref * np.abs(s16 - s8).sum(axis=1)
        quad_ok = np.all(errs <= policy.target_tol)
        if model is not None:
            tails = np.asarray([
                math.exp(min(300.0, model.log_tail(B, abs(l)) - ref))
                for l in lnx])
            errs = errs + np.exp(ref - (a + n) * lnx) / math.pi * tails
        if quad_ok:
            break
        width *= 0.5
    return vals, errs


def density_grid(M: MellinObject, xs, n=0,
                 policy: InversionPolicy | None = None):
    """f^(n) on a grid of x values via shared-kernel Mellin inversion.

    The grid is split into log-x bands one e-fold wide; each band gets its
    own inversion line and truncation height, and shares kernel nodes
    across its x values.
    """
    policy = policy or InversionPolicy()
    _smoothness_gate(M, n)
    xs = np.asarray(xs, dtype=float)
    supp = M.L.support()
    for x in xs:
        if not supp.contains_interior(float(x)):
            raise DomainError(f"x = {x} outside the interior of the support")
    lnx = np.log(xs)
    order = np.argsort(lnx)
    vals = np.empty(len(xs))
    errs = np.empty(len(xs))
    i = 0
    while i < len(order):
        j = i + 1
        while j < len(order) and lnx[order[j]] - lnx[order[i]] <= 1.0:
            j += 1
        band = order[i:j]
        bx = xs[band]
        x_ref = float(np.exp(np.mean(np.log(bx))))
        a = choose_line(M, x_ref, n, policy)
        B, _, model = _fit_truncation(M, a, n, np.log(bx), policy)
        v, e = _invert_on_grid(M, bx, n, a, B, policy, model)
        vals[band] = v
        errs[band] = e
        i = j
    raw = vals.copy()
    clamped = vals.copy()
    neg = (clamped < 0) & (clamped > -10.0 * policy.target_tol)
    clamped[neg] = 0.0
    return DensityGrid(x=xs, n=n, values=clamped, est_error=errs,
                       method=["inversion"] * len(xs), raw_values=raw)


def density(M: MellinObject, x, n=0, policy: InversionPolicy | None = None):
    """(f^(n)(x), est_error) at a single point."""
    g = density_grid(M, [float(x)], n=n, policy=policy)
    return float(g.raw_values[0]), float(g.est_error[0])


def _smoothness_gate(M: MellinObject, n):
    n_psi = M.L.n_psi()
    if not n_psi > n + 1:
        raise SmoothnessError(
            f"derivative order {n} needs N_Psi > {n + 1}, got {n_psi}")


# ---------------------------------------------------------------------------
# CDF / survival
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CdfValue:
    cdf: float
    survival: float
    err: float


def cdf(M: MellinObject, x, policy: InversionPolicy | None = None) -> CdfValue:
    """F(x) and the complementary survival value by contour inversion.

    F inverts -M(w)/(w-1) along Re w in (0, 1); the survival value uses
    its own line in (0, -abar_minus) when that strip is non-empty and
    1 - F otherwise.
    """
    policy = policy or InversionPolicy()
    x = float(x)
    if x <= 0:
        raise DomainError("x must be positive")
    supp = M.L.support()
    if x >= supp.hi:
        return CdfValue(1.0, 0.0, 0.0)
    lnx = math.log(x)
    width = min(2.0, 2.0 * math.pi / max(0.5, abs(lnx)))

    sigma = 0.5
    Bf, tail_f, _ = _fit_truncation(M, sigma, 0, [lnx], policy,
                                    extra_inverse_power=1.0,
                                    pref_coeff=1.0 - sigma)

    def f_int(b):
        w = sigma + 1j * np.asarray(b, dtype=float)
        return np.exp(M.log_mellin_many(w) + (1.0 - w) * lnx) / (1.0 - w)

    breaks = list(np.arange(width, Bf, width)[:20000])
    val_f = adaptive_quad(f_int, 0.0, Bf, rel_tol=1e-10,
                          abs_tol=0.1 * policy.target_tol,
                          panel_budget=40000, initial_panels=breaks or None)
    F = float(np.real(val_f)) / math.pi
    err = tail_f + 1e-12

    upper = -M.sp.abar_minus
    if upper > 0.05:
        ap = 1.0 if upper == INF else min(0.5 * upper, upper - 0.05)
        Bs, tail_s, _ = _fit_truncation(M, ap + 1.0, 0, [lnx], policy,
                                        extra_inverse_power=1.0,
                                        pref_coeff=-ap)

        def s_int(b):
            zz = ap + 1j * np.asarray(b, dtype=float)
            return np.exp(M.log_mellin_many(zz + 1.0) - zz * lnx) / zz

        breaks = list(np.arange(width, Bs, width)[:20000])
        val_s = adaptive_quad(s_int, 0.0, Bs, rel_tol=1e-10,
                              abs_tol=0.1 * policy.target_tol,
                              panel_budget=40000,
                              initial_panels=breaks or None)
        S = float(np.real(val_s)) / math.pi
        err = max(err, tail_s)
    else:
        S = 1.0 - F
    return CdfValue(cdf=min(max(F, 0.0), 1.0), survival=max(S, 0.0), err=err)


# ---------------------------------------------------------------------------
# one-sided series laws
# ---------------------------------------------------------------------------

def _unit_minus_drift_pair(L: LevyExponent):
    """Rescale the pair so the descending factor has unit drift (the
    normalization under which the spectrally positive series holds)."""
    d = L.phi_minus.drift
    if d <= 0:
        raise DomainError("needs a descending factor with positive drift")
    if d == 1.0:
        return L.phi_plus, L.phi_minus
    return L.phi_plus.scaled(d), L.phi_minus.scaled(1.0 / d)


def density_series_spectrally_positive(L: LevyExponent, x, n_terms=40):
    """Density of a spectrally positive model as the alternating series

        sum_k (-1)^k x^{g-1-k} Gamma(k-g+1) / (k! Gamma(-g) W_plus(k-g+1)),

    g the negative root of Psi and phi_minus normalized to unit drift.
    Returns (value, remainder_bound)."""
    if L.pibar_minus is not None:
        raise DomainError("model has negative jumps; series needs a "
                          "spectrally positive exponent")
    phi_p, phi_m = _unit_minus_drift_pair(L)
    gamma = phi_m.abscissae()[1]        # negative root of Psi
    if not gamma < 0:
        raise DomainError("Psi must have a negative root")
    ev = BernsteinGammaEvaluator(phi_p)
    x = float(x)
    lnx = math.log(x)
    lg_neg_gamma = math.lgamma(-gamma)
    total = 0.0
    prev_mag = INF
    mag = INF
    grew = False
    for k in range(n_terms):
        s = k - gamma + 1.0
        lt = ((gamma - 1.0 - k) * lnx + log_gamma(s).real
              - math.lgamma(k + 1) - lg_neg_gamma
              - ev.log_wgamma(s).real)
        term = (-1.0) ** k * math.exp(lt)
        mag = abs(term)
        if mag > prev_mag and k > 2:
            grew = True
            break
        total += term
        if mag < 1e-17 * max(1.0, abs(total)):
            break
        prev_mag = mag
    if grew:
        warnings.warn("series terms grew before the asymptotic regime; "
                      "remainder bound is the first discarded term",
                      DivergenceWarning)
    return total, mag


def density_series_neg_subordinator(L: LevyExponent, x, n_terms=200,
                                    tol=1e-12):
    """f(x) = q (1 + sum_{n>=1} prod_{j<=n} Psi(j) / n! x^n) for the
    negative of a killed subordinator, on x < 1/d_minus."""
    if not L.is_neg_subordinator:
        raise DomainError("model is not the negative of a subordinator")
    q = -L.psi_at_killing()
    if q <= 0:
        raise DomainError("needs a killed model (q > 0)")
    d = L.d_minus
    x = float(x)
    if d > 0 and x >= 1.0 / d:
        raise RadiusError(f"series radius is 1/d_minus = {1.0 / d}")
    total = 1.0
    logp, sign = 0.0, 1.0
    last = 0.0
    prev_mag = INF
    for n in range(1, n_terms + 1):
        v = -L.phi_minus.phi(float(n)).real     # Psi(n)
        if v == 0.0:
            break
        logp += math.log(abs(v))
        sign *= math.copysign(1.0, v)
        term = sign * math.exp(logp - math.lgamma(n + 1) + n * math.log(x))
        total += term
        last = abs(term)
        if last < tol * abs(total) and last < prev_mag:
            break
        prev_mag = last
    return q * total, q * last


def smallx_asymptotic_series(M: MellinObject, x, m_terms=8):
    """F(x) ~ -Psi(0) sum_{k>=1} prod_{j<k} Psi(j) / k! x^k near zero.

    Returns (value, regime) with regime in {"convergent", "asymptotic",
    "divergent"}; RegimeError when m_terms reaches the pole budget.
    """
    q = -M.L.psi_at_killing()
    if q <= 0:
        raise RegimeError("the small-x series needs a killed model")
    sp = M.sp
    if _is_int(sp.u_plus):
        n_plus = round(sp.u_plus)
    else:
        n_plus = math.ceil(sp.a_plus + 1.0) if sp.a_plus < INF else INF
    if not m_terms < n_plus + 1:
        raise RegimeError(f"m_terms = {m_terms} exceeds the admissible "
                          f"budget N+ = {n_plus}")
    phi_p = M.L.phi_plus
    phi_m = M.L.phi_minus
    x = float(x)
    regime = "asymptotic"
    if phi_p.is_const:
        if M.L.d_minus == 0.0:
            regime = "convergent"
        else:
            radius = 1.0 / (phi_p.phi_at_inf * M.L.d_minus)
            regime = "convergent" if x < radius else "divergent"
    elif phi_p.mu_mass == 0.0 and phi_p.drift > 0.0:
        if phi_m.phi_at_inf < INF:
            radius = 1.0 / (phi_m.phi_at_inf * M.L.d_plus)
            regime = "convergent" if x < radius else "divergent"
    total = 0.0
    for k in range(1, m_terms + 1):
        logp, sign = M.log_psi_product(k - 1)
        if sign == 0.0:
            break
        total += sign * math.exp(logp - math.lgamma(k + 1)
                                 + k * math.log(x))
    return q * total, regime


def smallx_series_term(M: MellinObject, k: int) -> float:
    """Coefficient of x^k in the small-x expansion of F."""
    q = -M.L.psi_at_killing()
    logp, sign = M.log_psi_product(k - 1)
    if sign == 0.0:
        return 0.0
    return q * sign * math.exp(logp - math.lgamma(k + 1))


def _is_int(u):
    return u != INF and abs(u - round(u)) < 1e-9


# ---------------------------------------------------------------------------
# integral-equation residuals
# ---------------------------------------------------------------------------

def integral_equation_residual(L: LevyExponent, xs, f, survival=None,
                               form="auto"):
    """Sup-norm residual of the stationarity integral equations.

    form "tail":      (1 - d x) f(x) = int_x^hi Pi((ln(y/x), inf)) f(y) dy
                      + q int_x^hi f(y) dy   (subordinator, known jump tail)
    form "potential": S(x) = int_0^inf f(x e^y) e^{-q y / d} / d dy
                      (killed linear drift, whose potential measure is
                      exponential)
    """
    if form == "auto":
        form = "potential" if L.family == "killed-drift" else "tail"
    if not L.is_subordinator:
        raise DomainError("residual diagnostics apply to subordinator "
                          "models")
    supp = L.support()
    if supp.kind == "point":
        raise DomainError("pure drift has no density")
    hi = supp.hi if supp.hi < INF else None
    q = -L.psi_at_killing()
    worst = 0.0
    if form == "potential":
        d = L.d_plus
        if survival is None:
            raise DomainError("potential form needs the survival callable")
        for x in xs:
            x = float(x)
            top = math.log(hi / x) if hi else 40.0 / max(q, 1e-2)

            def integrand(y):
                y = np.atleast_1d(np.asarray(y, dtype=float))
                fy = np.asarray([f(x * math.exp(t)) for t in y])
                return fy * np.exp(-(q / d) * y) / d

            val = adaptive_quad(integrand, 0.0, top, rel_tol=1e-9,
                                abs_tol=1e-12, panel_budget=4000)
            worst = max(worst, abs(float(np.real(val)) - survival(x)))
        return worst
    if L.pibar_plus is None and L.pibar_total > 0:
        raise DomainError("tail form needs the jump tail Pi((x, inf))")
    d = L.d_plus
    for x in xs:
        x = float(x)
        top = hi if hi else x * math.exp(20.0)
        lhs = (1.0 - d * x) * f(x)

        def integrand(y):
            y = np.atleast_1d(np.asarray(y, dtype=float))
            fy = np.asarray([f(t) for t in y])
            tail = (np.asarray(L.pibar_plus(np.log(y / x)))
                    if L.pibar_plus is not None else 0.0)
            return (tail + q) * fy

        rhs = adaptive_quad(integrand, x, top, rel_tol=1e-9,
                            abs_tol=1e-12, panel_budget=8000)
        worst = max(worst, abs(lhs - float(np.real(rhs))))
    return worst
