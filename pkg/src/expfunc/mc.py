"""Monte-Carlo oracle for the law of the exponential functional.

Two independent sampling routes:

* ``simulate_I``      -- time-discretized trapezoid integral of e^{-xi}
  with exact increment samplers per family and killing by an exact
  exponential clock (never per-step thinning).  With ``richardson`` the
  dt and dt/2 trapezoids are coupled on one path and extrapolated.
* ``sample_factorized`` -- i.i.d. draws from the exact factorized laws
  (Beta / inverse-Gamma products) available for Brownian models, killed
  drift and hyper-exponential models.

Reductions are chunked and order-independent; a fixed seed gives the
same summary regardless of chunking.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import HorizonError, UnsupportedFamilyError
from .levy import LevyExponent

INF = math.inf


@dataclass(frozen=True)
class PathSimConfig:
    dt: float = 1e-3
    t_max: float = 30.0
    n_samples: int = 10 ** 4
    seed: int = 0
    richardson: bool = True
    chunk: int = 20000


@dataclass
class SampleSet:
    values: np.ndarray
    method: str

    @property
    def mean(self):
        return float(np.mean(self.values))

    @property
    def var(self):
        return float(np.var(self.values))

    def stderr(self):
        return math.sqrt(self.var / len(self.values))

    def quantiles(self, qs=(0.05, 0.25, 0.5, 0.75, 0.95)):
        return {q: float(v) for q, v in
                zip(qs, np.quantile(self.values, qs))}

    def ks_against(self, cdf_callable):
        """Kolmogorov-Smirnov distance against a CDF callable."""
        v = np.sort(self.values)
        n = len(v)
        F = np.asarray([cdf_callable(x) for x in v])
        up = np.max(np.arange(1, n + 1) / n - F)
        dn = np.max(F - np.arange(0, n) / n)
        return float(max(up, dn))


def ks_between(a: np.ndarray, b: np.ndarray) -> float:
    """Two-sample KS distance."""
    a = np.sort(np.asarray(a))
    b = np.sort(np.asarray(b))
    both = np.concatenate([a, b])
    fa = np.searchsorted(a, both, side="right") / len(a)
    fb = np.searchsorted(b, both, side="right") / len(b)
    return float(np.max(np.abs(fa - fb)))


# ---------------------------------------------------------------------------
# increment samplers
# ---------------------------------------------------------------------------

def _one_sided_stable(rng, alpha, size):
    """Positive alpha-stable draws with Laplace transform e^{-s^alpha}
    (Kanter / Chambers-Mallows-Stuck construction)."""
    u = rng.uniform(0.0, math.pi, size=size)
    e = rng.standard_exponential(size=size)
    sin_u = np.sin(u)
    a = (np.sin(alpha * u) / sin_u) ** (alpha / (1.0 - alpha)) \
        * np.sin((1.0 - alpha) * u) / sin_u
    return (a / e) ** ((1.0 - alpha) / alpha)


def _make_stepper(L: LevyExponent, rng):
    """Returns increment(dt_array) -> xi increments, exact in law."""
    fam = L.family
    p = L.params
    if fam in ("brownian", "dufresne"):
        sig = math.sqrt(L.sigma2)
        mu = L.lin

        def step(dts):
            return mu * dts + sig * np.sqrt(dts) * rng.standard_normal(
                len(dts))
        return step
    if fam == "killed-drift":
        d = p["d"]

        def step(dts):
            return d * dts
        return step
    if fam == "gamma-sub":
        c, theta = p["c"], p["theta"]

        def step(dts):
            return rng.gamma(np.maximum(c * dts, 1e-300), 1.0 / theta)
        return step
    if fam == "stable-sub":
        alpha = p["alpha"]

        def step(dts):
            return dts ** (1.0 / alpha) * _one_sided_stable(
                rng, alpha, len(dts))
        return step
    if fam == "hyperexp":
        sig = math.sqrt(L.sigma2)
        mu = L.lin
        pos = list(p["pos"])
        neg = list(p["neg"])
        lam_p = sum(a for a, _ in pos)
        lam_n = sum(a for a, _ in neg)

        def mixture(rates_weights, counts):
            total = np.zeros(len(counts))
            todo = counts.copy()
            weights = np.asarray([a for a, _ in rates_weights], dtype=float)
            rates = np.asarray([r for _, r in rates_weights], dtype=float)
            weights = weights / weights.sum()
            while np.any(todo > 0):
                active = todo > 0
                comp = rng.choice(len(rates), size=int(active.sum()),
                                  p=weights)
                total[active] += rng.standard_exponential(
                    int(active.sum())) / rates[comp]
                todo[active] -= 1
            return total

        def step(dts):
            inc = mu * dts + sig * np.sqrt(dts) * rng.standard_normal(
                len(dts))
            if lam_p > 0:
                inc += mixture(pos, rng.poisson(lam_p * dts))
            if lam_n > 0:
                inc -= mixture(neg, rng.poisson(lam_n * dts))
            return inc
        return step
    raise UnsupportedFamilyError(
        f"no exact increment sampler for family {fam!r}")


# ---------------------------------------------------------------------------
# path simulation
# ---------------------------------------------------------------------------

def simulate_I(L: LevyExponent, cfg: PathSimConfig) -> SampleSet:
    """Trapezoid-rule draws of int_0^{min(e_q, t_max)} e^{-xi_s} ds."""
    rng = np.random.default_rng(np.random.SeedSequence(cfg.seed))
    q = -L.psi_at_killing()
    out = np.empty(cfg.n_samples)
    truncated_mass = 0.0
    truncated_weight = 0.0
    done = 0
    while done < cfg.n_samples:
        m = min(cfg.chunk, cfg.n_samples - done)
        vals, trunc_mass, trunc_w = _simulate_chunk(L, rng, m, q, cfg)
        out[done:done + m] = vals
        truncated_mass += trunc_mass
        truncated_weight += trunc_w
        done += m
    est = float(np.mean(out))
    if truncated_weight > 0:
        # neglected tail estimate: E[e^{-xi_T}] * E[I] must be small
        neglected = truncated_mass / cfg.n_samples * max(est, 1e-12)
        if neglected > 1e-4 * max(est, 1e-12):
            raise HorizonError(
                f"t_max = {cfg.t_max} leaves a relative tail "
                f"{neglected / max(est, 1e-12):.2e} > 1e-4")
    return SampleSet(values=out, method="path")


def _simulate_chunk(L, rng, m, q, cfg):
    h = cfg.dt / 2.0 if cfg.richardson else cfg.dt
    step = _make_stepper(L, rng)
    if q > 0:
        taus = rng.standard_exponential(m) / q
        taus = np.minimum(taus, cfg.t_max)
    else:
        taus = np.full(m, cfg.t_max)
    order = np.argsort(taus)
    taus = taus[order]
    xi = np.zeros(m)
    ecur = np.ones(m)               # e^{-xi} at the current fine node
    eeven = np.ones(m)              # e^{-xi} at the last coarse node
    I_f = np.zeros(m)
    I_c = np.zeros(m)
    trunc_mass = 0.0
    trunc_w = 0
    t = 0.0
    start = 0                       # samples [start:] still alive
    parity = 0
    while start < m:
        t_next = t + h
        # samples dying inside (t, t_next]
        n_die = np.searchsorted(taus, t_next, side="right") - start
        if n_die > 0:
            sl = slice(start, start + n_die)
            dts = taus[sl] - t
            inc = step(dts)
            xi_end = xi[sl] + inc
            eend = np.exp(-xi_end)
            I_f[sl] += 0.5 * dts * (ecur[sl] + eend)
            if cfg.richardson:
                dtc = taus[sl] - (t - parity * h)
                I_c[sl] += 0.5 * dtc * (eeven[sl] + eend)
            if taus[start] >= cfg.t_max:        # horizon truncation
                trunc_mass += float(np.sum(eend))
                trunc_w += n_die
            start += n_die
        if start >= m:
            break
        sl = slice(start, m)
        dts = np.full(m - start, h)
        xi[sl] += step(dts)
        enew = np.exp(-xi[sl])
        I_f[sl] += 0.5 * h * (ecur[sl] + enew)
        ecur[sl] = enew
        parity ^= 1
        if cfg.richardson and parity == 0:
            I_c[sl] += 0.5 * (2.0 * h) * (eeven[sl] + enew)
            eeven[sl] = enew
        t = t_next
    vals = 2.0 * I_f - I_c if cfg.richardson else I_f
    return vals, trunc_mass, trunc_w


# ---------------------------------------------------------------------------
# exact factorized samplers
# ---------------------------------------------------------------------------

def sample_factorized(L: LevyExponent, n_samples=10 ** 4, seed=0) -> SampleSet:
    """i.i.d. draws from the exact factorized law, where available."""
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    fam = L.family
    if fam in ("brownian", "dufresne"):
        return SampleSet(_sample_brownian(L, rng, n_samples), "factorized")
    if fam == "killed-drift":
        q, d = L.params["q"], L.params["d"]
        return SampleSet(rng.beta(1.0, q / d, size=n_samples) / d,
                         "factorized")
    if fam == "hyperexp":
        return SampleSet(_sample_hyperexp(L, rng, n_samples), "factorized")
    raise UnsupportedFamilyError(
        f"no factorized sampler for family {fam!r}")


def _sample_brownian(L, rng, n):
    q = L.params["q"]
    sigma2 = L.params["sigma2"]
    mu = L.params["mu"]
    disc = math.sqrt(mu * mu + 2.0 * q * sigma2)
    b_plus = (mu + disc) / sigma2
    b_minus = (mu - disc) / sigma2
    # I = Beta(1, -b_minus) * 2 / (sigma2 Gamma(b_plus))
    out = 2.0 / (sigma2 * rng.gamma(b_plus, 1.0, size=n))
    if b_minus < 0.0:
        out *= rng.beta(1.0, -b_minus, size=n)
    return out


def _beta_product_moment(alpha, beta, s):
    """log E[((beta/alpha) Beta(alpha, beta-alpha))^{s-1}]."""
    return ((s - 1.0) * (math.log(beta) - math.log(alpha))
            + math.lgamma(alpha + s - 1.0) + math.lgamma(beta)
            - math.lgamma(alpha) - math.lgamma(beta + s - 1.0))


def _sample_hyperexp(L, rng, n):
    """Finite Beta / inverse-Gamma product for the hyper-exponential law.

    From the rational Wiener-Hopf factors,

        Gamma(z)/W_plus(z)  = Mellin of Beta(1, chi_1) * prod_{k>=2}
                              Beta(1 + rho_{k-1}, chi_k - rho_{k-1}) / c_+,
        W_minus(1-z) factors into reciprocal Betas 1/Beta(chih_k,
        rhoh_k - chih_k) and, when phi_minus carries drift, one
        leftover 1/Gamma(chih_last).

    The deterministic scale C is pinned by matching one fractional
    moment of the Mellin transform.
    """
    from .mellin import MellinObject
    roots = L.roots
    chi = list(roots["chi"])
    chi_hat = list(roots["chi_hat"])
    rho = list(roots["rho"])
    rho_hat = list(roots["rho_hat"])
    if len(chi) != len(rho) + 1:
        raise UnsupportedFamilyError(
            "factorized sampler needs an ascending factor with drift "
            "(sigma2 > 0 or mu > 0)")
    out = np.ones(n)
    log_prod = 0.0
    s = 1.0 + min(0.5, 0.5 * chi_hat[0])
    # ascending side: Beta(1, chi_1) then Beta(1 + rho_{k-1}, chi_k - ...)
    asc = [(1.0, 1.0 + chi[0])]
    for k in range(1, len(chi)):
        asc.append((1.0 + rho[k - 1], 1.0 + chi[k]))
    for a, apb in asc:
        out *= rng.beta(a, apb - a, size=n)
        log_prod += (math.lgamma(a + s - 1.0) + math.lgamma(apb)
                     - math.lgamma(a) - math.lgamma(apb + s - 1.0))
    # descending side: same-index reciprocal Betas, plus an inverse Gamma
    # for the leftover zero when phi_minus has drift
    for ch, rh in zip(chi_hat, rho_hat):
        out /= rng.beta(ch, rh - ch, size=n)
        log_prod += (math.lgamma(ch + 1.0 - s) + math.lgamma(rh)
                     - math.lgamma(ch) - math.lgamma(rh + 1.0 - s))
    if len(chi_hat) == len(rho_hat) + 1:
        nu = chi_hat[-1]
        out /= rng.gamma(nu, 1.0, size=n)
        log_prod += math.lgamma(nu + 1.0 - s) - math.lgamma(nu)
    elif len(chi_hat) != len(rho_hat):
        raise UnsupportedFamilyError("unexpected root structure")
    M = MellinObject(L)
    log_target = M.log_mellin(complex(s, 0.0)).real
    C = math.exp((log_target - log_prod) / (s - 1.0))
    return C * out
