"""Bernstein functions: evaluation, derivatives and abscissae.

A Bernstein function is represented as

    phi(z) = kill + drift * z + z * int_0^inf e^{-z y} mubar(y) dy,

with kill, drift >= 0 and mubar the non-increasing tail of the Levy
measure.  Catalog families carry closed forms (and usually closed
derivatives and a closed log of the associated Bernstein-gamma function);
custom families fall back to adaptive quadrature against the tail.

Evaluation domain: the open half-plane Re z > a_phi, plus the real
interval (a_phi, 0] for the analytic extension.  Complex arguments with
Re z <= 0 are only accepted for closed-form families, where the closed
expression itself provides the continuation.
"""

from __future__ import annotations

import cmath
import math
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import DomainError, ToleranceError
from .quadrature import adaptive_quad
from .refgamma import digamma, log_gamma, trigamma

INF = math.inf


class LevyMeasureSpec:
    """Levy measure of a subordinator, given as tail, atoms or density.

    The tail bound beta declares mubar(y) <= K e^{-beta y} for large y
    (beta = 0 means no exponential tail).  Construction spot-checks that
    the tail is non-increasing, that int_0^1 mubar < inf numerically, and
    that the declared bound is consistent on a probe grid.
    """

    def __init__(self, kind="tail-function", tail=None, atoms=None,
                 density=None, beta=0.0, check=True):
        if kind not in ("tail-function", "atom-list", "density-function"):
            raise ValueError(f"unknown measure kind {kind!r}")
        self.kind = kind
        self.atoms = [(float(y), float(m)) for y, m in (atoms or [])]
        self.beta = float(beta)
        if kind == "atom-list":
            if any(y <= 0 or m < 0 for y, m in self.atoms):
                raise ValueError("atoms need positions > 0 and masses >= 0")
            self.tail = self._tail_from_atoms
        elif kind == "density-function":
            if density is None:
                raise ValueError("density-function kind needs a density")
            self.density = density
            self.tail = tail if tail is not None else self._tail_from_density
        else:
            if tail is None:
                raise ValueError("tail-function kind needs a tail callable")
            self.tail = tail
        if check:
            self._validate()

    def _tail_from_atoms(self, y):
        y = np.asarray(y, dtype=float)
        out = np.zeros_like(y)
        for pos, mass in self.atoms:
            out += mass * (y < pos)
        return out

    def _tail_from_density(self, y):
        scalar = np.isscalar(y)
        ys = np.atleast_1d(np.asarray(y, dtype=float))
        out = np.empty_like(ys)
        for i, yi in enumerate(ys):
            out[i] = adaptive_quad(
                lambda t: np.asarray(self.density(t)), yi, yi + 60.0,
                rel_tol=1e-10, abs_tol=1e-14)
        return out[0] if scalar else out

    def _validate(self):
        grid = 2.0 ** np.arange(-20, 7, dtype=float)
        vals = np.asarray(self.tail(grid), dtype=float)
        if np.any(np.diff(vals) > 1e-12 * (1.0 + np.abs(vals[:-1]))):
            raise ValueError("measure tail is not non-increasing")
        # int_0^1 mubar < inf: the dyadic-grid trapezoid mass must be finite
        # and stable as the grid is refined toward 0
        take = grid <= 1.0
        mass = np.trapezoid(vals[take], grid[take])
        coarse = (grid <= 1.0) & (grid >= 2.0 ** -10)
        mass_coarse = np.trapezoid(vals[coarse], grid[coarse])
        if not np.isfinite(mass) or mass > 50.0 * max(mass_coarse, 1e-12):
            raise ValueError("int_0^1 mubar(y) dy diverges")
        if self.beta > 0.0:
            probe = np.linspace(5.0, 60.0, 12)
            scaled = np.asarray(self.tail(probe)) * np.exp(
                0.5 * self.beta * probe)
            if np.any(scaled > 1e6 * (1.0 + scaled[0])):
                raise ValueError("declared exponential tail bound violated")


class BernsteinFunction:
    """One Bernstein function phi with its analytic metadata.

    Immutable after construction; evaluators and Levy models share
    instances freely.
    """

    def __init__(self, kill=0.0, drift=0.0, measure: Optional[LevyMeasureSpec] = None,
                 a_phi=-INF, closed_form=None, d1=None, d2=None,
                 closed_logw=None, family="custom", params=None,
                 u_phi="auto", phi_at_inf=None, mu_mass=None,
                 weak_nonlattice=True, finite_at_a=False):
        self.kill = float(kill)
        self.drift = float(drift)
        self.measure = measure
        self.a_phi = float(a_phi)
        self.closed_form = closed_form
        self._d1 = d1
        self._d2 = d2
        self.closed_logw = closed_logw
        self.family = family
        self.params = dict(params or {})
        self._u_declared = u_phi
        self._phi_at_inf = phi_at_inf
        self._mu_mass = mu_mass
        self.weak_nonlattice = weak_nonlattice
        self.finite_at_a = finite_at_a
        if self.kill < 0 or self.drift < 0:
            raise ValueError("kill and drift must be non-negative")
        if closed_form is None and measure is None and not (
                self.drift > 0 or self.kill > 0):
            raise ValueError("phi identically zero is excluded")
        self._absc = None

    # -- basic structure ----------------------------------------------------

    @property
    def is_const(self):
        """phi(z) == phi(0) for all z (pure killing, no movement)."""
        return self.drift == 0.0 and self.mu_mass == 0.0

    @property
    def is_pure_drift(self):
        return self.kill == 0.0 and self.drift > 0.0 and self.mu_mass == 0.0

    @property
    def mu_mass(self):
        """Total jump mass mubar(0+) (may be inf)."""
        if self._mu_mass is not None:
            return self._mu_mass
        if self.measure is None:
            return 0.0
        return float(self.measure.tail(1e-12))

    @property
    def phi_at_inf(self):
        """Limit of phi along the positive reals (inf when drift > 0)."""
        if self._phi_at_inf is not None:
            return self._phi_at_inf
        if self.drift > 0:
            return INF
        m = self.mu_mass
        return INF if m == INF else self.kill + m

    def scaled(self, c):
        """The Bernstein function c * phi, with W rescaled accordingly."""
        if c <= 0:
            raise ValueError("scale must be positive")
        cf = self.closed_form
        d1, d2 = self._d1, self._d2
        lw = self.closed_logw
        return BernsteinFunction(
            kill=c * self.kill, drift=c * self.drift, measure=None,
            a_phi=self.a_phi,
            closed_form=(lambda z, c=c: c * self._raw(z)),
            d1=None if d1 is None and cf is None else (lambda z, c=c: c * self._raw_d1(z)),
            d2=None if d2 is None and cf is None else (lambda z, c=c: c * self._raw_d2(z)),
            closed_logw=None if lw is None else (
                lambda z, c=c, lw=lw: (z - 1.0) * math.log(c) + lw(z)),
            family=self.family, params={**self.params, "scale": c},
            u_phi=self.abscissae()[1],
            phi_at_inf=(INF if self.phi_at_inf == INF else c * self.phi_at_inf),
            mu_mass=(INF if self.mu_mass == INF else c * self.mu_mass),
            weak_nonlattice=self.weak_nonlattice,
            finite_at_a=self.finite_at_a)

    # -- evaluation ---------------------------------------------------------

    def _check_domain(self, z):
        x = z.real
        if x > self.a_phi or (x == self.a_phi and self.finite_at_a):
            if z.imag != 0.0 and x <= 0.0 and self.closed_form is None:
                raise DomainError(
                    "complex evaluation left of the imaginary axis needs a "
                    "closed form")
            return
        raise DomainError(f"Re z = {x} is <= a_phi = {self.a_phi}")

    def _raw(self, z):
        if self.closed_form is not None:
            return self.closed_form(z)
        return self._from_measure(z)

    def phi(self, z) -> complex:
        """phi(z) on Re z > a_phi (and the permitted boundary cases)."""
        z = complex(z)
        self._check_domain(z)
        return complex(self._raw(z))

    def _tail_integral(self, z, weight):
        """int_0^inf e^{-zy} weight(y) mubar(y) dy by adaptive panels."""
        mubar = self.measure.tail
        x = z.real
        if x < 0 and x + self.measure.beta <= 0:
            raise DomainError(f"Re z = {x} below the declared tail abscissa")
        # truncation: |e^{-zy} mubar(y)| decays at least at rate
        # max(x, 0) + beta/2 by the declared exponential tail bound
        rate = max(x, 0.0) + 0.5 * self.measure.beta
        damp = max(rate, abs(z.imag), 1e-2)
        Y = 1.0
        while Y < 2.0 ** 40:
            bound = float(mubar(Y)) * math.exp(-rate * Y) / damp
            if bound < 1e-16:
                break
            Y *= 2.0
        breaks = {1.0} if Y > 1.0 else set()
        osc = abs(z.imag)
        if osc > 0:
            width = math.pi / osc
            breaks |= set(np.arange(width, min(Y, 4000.0 * width), width))
        breaks = sorted(b for b in breaks if 0.0 < b < Y)

        def integrand(y):
            return np.exp(-z * y) * weight(y) * np.asarray(mubar(y))

        return adaptive_quad(integrand, 1e-300, Y, rel_tol=1e-12,
                             abs_tol=1e-16, panel_budget=10000,
                             initial_panels=breaks or None)

    def _from_measure(self, z):
        val = self.kill + self.drift * z
        if self.measure is None:
            return val
        if self.measure.kind == "atom-list":
            for y, m in self.measure.atoms:
                val += m * (1.0 - np.exp(-z * y))
            return val
        if z == 0.0:
            return val
        return val + z * self._tail_integral(z, lambda y: 1.0)

    def _raw_d1(self, z):
        if self._d1 is not None:
            return self._d1(z)
        if self.closed_form is not None:
            return self._cauchy_deriv(z, 1)
        if self.measure is not None and self.measure.kind == "atom-list":
            return self.drift + sum(m * y * np.exp(-z * y)
                                    for y, m in self.measure.atoms)
        # phi'(z) = d + int e^{-zy} (1 - zy) mubar(y) dy
        return self.drift + self._tail_integral(z, lambda y: 1.0 - z * y)

    def phi_prime(self, z) -> complex:
        """phi'(z) = drift + int e^{-zy} y mu(dy)."""
        z = complex(z)
        self._check_domain(z)
        return complex(self._raw_d1(z))

    def _raw_d2(self, z):
        if self._d2 is not None:
            return self._d2(z)
        if self.closed_form is not None:
            return self._cauchy_deriv(z, 2)
        if self.measure is not None and self.measure.kind == "atom-list":
            return -sum(m * y * y * np.exp(-z * y)
                        for y, m in self.measure.atoms)
        # phi''(z) = -int e^{-zy} (2y - z y^2) mubar(y) dy
        return -self._tail_integral(z, lambda y: 2.0 * y - z * y * y)

    def phi_dprime(self, z) -> complex:
        z = complex(z)
        self._check_domain(z)
        return complex(self._raw_d2(z))

    def _cauchy_deriv(self, z, order, m=64):
        """Derivative of the closed form by a Cauchy circle integral."""
        gap = z.real - self.a_phi if self.a_phi > -INF else 1.0
        r = 0.5 * min(1.0, gap)
        theta = 2.0 * math.pi * np.arange(m) / m
        ring = z + r * np.exp(1j * theta)
        vals = np.asarray([self.closed_form(w) for w in ring])
        coef = np.mean(vals * np.exp(-1j * order * theta))
        return coef * math.factorial(order) / r ** order

    def log_phi_dd(self, z):
        """(log phi)''(z) = phi''/phi - (phi'/phi)^2."""
        p = self._raw(z)
        r1 = self._raw_d1(z) / p
        return self._raw_d2(z) / p - r1 * r1

    # -- abscissae ----------------------------------------------------------

    def abscissae(self):
        """(a_phi, u_phi, abar_phi) as extended reals.

        u_phi is the declared value when the family provides one; otherwise
        phi(0) = 0 short-circuits to 0, no sign change on (a_phi, 0) gives
        -inf, and a sign change is bisected to width 2^-60 max(1, |a_phi|).
        """
        if self._absc is not None:
            return self._absc
        a = self.a_phi
        if self._u_declared != "auto":
            u = self._u_declared
        elif self.phi(0.0).real == 0.0:
            u = 0.0
        else:
            u = self._bisect_u()
        abar = max(a, u)
        self._absc = (a, u, abar)
        return self._absc

    def _bisect_u(self):
        a = self.a_phi
        # find a bracket [lo, hi] with phi(lo) < 0 < phi(hi)
        hi = 0.0
        if a == -INF:
            lo = -1.0
            for _ in range(120):
                if self._real_phi(lo) < 0.0:
                    break
                hi = lo
                lo *= 2.0
            else:
                return -INF
        else:
            lo = None
            step = 0.5
            while step > 2.0 ** -50:
                cand = a + step * max(1.0, abs(a))
                if cand < 0.0 and self._real_phi(cand) < 0.0:
                    lo = cand
                    break
                step *= 0.5
            if lo is None:
                return -INF        # phi(a_phi+) >= 0, no sign change
        width_target = 2.0 ** -60 * max(1.0, abs(a) if a > -INF else abs(lo))
        for _ in range(200):
            if hi - lo <= width_target:
                break
            mid = 0.5 * (lo + hi)
            if mid <= lo or mid >= hi:
                break
            if self._real_phi(mid) < 0.0:
                lo = mid
            else:
                hi = mid
        else:
            raise ToleranceError("u_phi bisection did not terminate")
        return 0.5 * (lo + hi)

    def _real_phi(self, x):
        return self.phi(complex(x, 0.0)).real

    def __repr__(self):
        ps = ", ".join(f"{k}={v}" for k, v in self.params.items())
        return f"BernsteinFunction({self.family}: {ps})"


# ---------------------------------------------------------------------------
# catalog families
# ---------------------------------------------------------------------------

def _affine(q, scale=1.0):
    q = float(q)
    c = float(scale)

    def lw(z):
        return (z - 1.0) * math.log(c) + log_gamma(z + q) - log_gamma(1.0 + q)

    return BernsteinFunction(
        kill=c * q, drift=c, a_phi=-INF,
        closed_form=lambda z: c * (z + q),
        d1=lambda z: c + 0.0 * z, d2=lambda z: 0.0 * z,
        closed_logw=lw, family="affine", params={"q": q, "scale": c},
        u_phi=-q, phi_at_inf=INF, mu_mass=0.0)


def _power(q, alpha):
    q = float(q)
    alpha = float(alpha)
    if not 0.0 < alpha < 1.0:
        raise ValueError("power family needs alpha in (0, 1)")
    if q < 0:
        raise ValueError("power family needs q >= 0")
    lg1q = log_gamma(1.0 + q)

    return BernsteinFunction(
        kill=q ** alpha, drift=0.0, a_phi=-q,
        closed_form=lambda z: (z + q) ** alpha,
        d1=lambda z: alpha * (z + q) ** (alpha - 1.0),
        d2=lambda z: alpha * (alpha - 1.0) * (z + q) ** (alpha - 2.0),
        closed_logw=lambda z: alpha * (log_gamma(z + q) - lg1q),
        family="power", params={"q": q, "alpha": alpha},
        u_phi=(0.0 if q == 0.0 else -INF),
        phi_at_inf=INF, mu_mass=INF, finite_at_a=True)


def _stable(alpha):
    bf = _power(0.0, alpha)
    bf.family = "stable"
    bf.params = {"alpha": alpha}
    return bf


def _gamma_ratio(a, b):
    a = float(a)
    b = float(b)
    if not 0.0 < a < 1.0 or b < a:
        raise ValueError("gamma-ratio family needs a in (0,1), b >= a")
    lgb = log_gamma(b)

    def f(z):
        return cmath.exp(log_gamma(a * z + b) - log_gamma(a * z - a + b))

    def f1(z):
        return f(z) * a * (digamma(a * z + b) - digamma(a * z - a + b))

    def f2(z):
        d = a * (digamma(a * z + b) - digamma(a * z - a + b))
        dd = a * a * (trigamma(a * z + b) - trigamma(a * z - a + b))
        return f(z) * (d * d + dd)

    return BernsteinFunction(
        kill=math.exp((log_gamma(b) - log_gamma(b - a)).real) if b > a else 0.0,
        drift=0.0, a_phi=1.0 - b / a,
        closed_form=f, d1=f1, d2=f2,
        closed_logw=lambda z: log_gamma(a * z - a + b) - lgb,
        family="gamma-ratio", params={"a": a, "b": b},
        u_phi=-INF if b > a else 0.0,
        phi_at_inf=INF, mu_mass=INF)


def _geom(q, b):
    q = float(q)
    b = float(b)
    if not 0.0 < q < 1.0 or b < 0:
        raise ValueError("geom family needs q in (0,1), b >= 0")
    lnq = math.log(q)

    def lw(z):
        # W(z) = prod_{k>=0} (1 - q^{b+1+k}) / (1 - q^{b+z+k})
        arr = isinstance(z, np.ndarray)
        zz = np.asarray(z, dtype=complex)
        re_min = float(np.min(zz.real))
        k_max = int(math.ceil(-42.0 / lnq - b - min(re_min, 1.0))) + 2
        k_max = min(max(k_max, 4), 6000)
        s = np.zeros(zz.shape, dtype=complex)
        for k in range(k_max):
            top = math.log1p(-q ** (b + 1.0 + k))
            s += top - np.log(1.0 - np.exp((b + zz + k) * lnq))
        return s if arr else complex(s)

    return BernsteinFunction(
        kill=1.0 - q ** b, drift=0.0,
        measure=LevyMeasureSpec("atom-list", atoms=[(-lnq, q ** b)]),
        a_phi=-INF,
        closed_form=lambda z: 1.0 - np.exp((z + b) * lnq),
        d1=lambda z: -lnq * np.exp((z + b) * lnq),
        d2=lambda z: -lnq * lnq * np.exp((z + b) * lnq),
        closed_logw=lw, family="geom", params={"q": q, "b": b},
        u_phi=-b, phi_at_inf=1.0, mu_mass=q ** b,
        weak_nonlattice=False)


def _ratio(a):
    a = float(a)
    if a <= 0:
        raise ValueError("ratio family needs a > 0")
    lg1a = log_gamma(1.0 + a)

    return BernsteinFunction(
        kill=0.0, drift=0.0,
        measure=LevyMeasureSpec("tail-function",
                                tail=lambda y: np.exp(-a * y), beta=a,
                                check=False),
        a_phi=-a,
        closed_form=lambda z: z / (z + a),
        d1=lambda z: a / (z + a) ** 2,
        d2=lambda z: -2.0 * a / (z + a) ** 3,
        closed_logw=lambda z: log_gamma(z) + lg1a - log_gamma(z + a),
        family="ratio", params={"a": a},
        u_phi=0.0, phi_at_inf=1.0, mu_mass=1.0)


def _ratio_power(a, alpha):
    a = float(a)
    alpha = float(alpha)
    if a <= 0 or not 0.0 < alpha < 1.0:
        raise ValueError("ratio-power family needs a > 0, alpha in (0,1)")
    lg1a = log_gamma(1.0 + a)

    def f(z):
        return z * (z + a) ** -alpha

    def f1(z):
        return f(z) * (1.0 / z - alpha / (z + a))

    def f2(z):
        r = 1.0 / z - alpha / (z + a)
        return f(z) * (r * r - 1.0 / z ** 2 + alpha / (z + a) ** 2)

    return BernsteinFunction(
        kill=0.0, drift=0.0, a_phi=-a,
        closed_form=f, d1=f1, d2=f2,
        closed_logw=lambda z: log_gamma(z) + alpha * (lg1a - log_gamma(z + a)),
        family="ratio-power", params={"a": a, "alpha": alpha},
        u_phi=0.0, phi_at_inf=INF, mu_mass=INF)


def _const(c):
    c = float(c)
    if c <= 0:
        raise ValueError("const family needs c > 0")
    return BernsteinFunction(
        kill=c, drift=0.0, a_phi=-INF,
        closed_form=lambda z: c + 0.0 * z,
        d1=lambda z: 0.0 * z, d2=lambda z: 0.0 * z,
        closed_logw=lambda z: (z - 1.0) * math.log(c),
        family="const", params={"c": c},
        u_phi=-INF, phi_at_inf=c, mu_mass=0.0)


def _gamma_sub(c, theta, q=0.0):
    c = float(c)
    theta = float(theta)
    q = float(q)
    if c <= 0 or theta <= 0 or q < 0:
        raise ValueError("gamma-subordinator needs c, theta > 0, q >= 0")
    u = 0.0 if q == 0.0 else theta * (math.expm1(-q / c))
    from scipy.special import exp1

    return BernsteinFunction(
        kill=q, drift=0.0,
        measure=LevyMeasureSpec(
            "density-function",
            density=lambda y: c * np.exp(-theta * y) / y,
            tail=lambda y: c * exp1(theta * np.asarray(y, dtype=float)),
            beta=theta, check=False),
        a_phi=-theta,
        closed_form=lambda z: q + c * cmath.log(1.0 + complex(z) / theta),
        d1=lambda z: c / (theta + z),
        d2=lambda z: -c / (theta + z) ** 2,
        family="gamma-sub", params={"c": c, "theta": theta, "q": q},
        u_phi=u, phi_at_inf=INF, mu_mass=INF)


def _ig_sub(s, b, q=0.0):
    s = float(s)
    b = float(b)
    q = float(q)
    if s <= 0 or b <= 0 or q < 0:
        raise ValueError("ig-subordinator needs s, b > 0, q >= 0")
    if q == 0.0:
        u = 0.0
    elif q < s * b:
        u = q * q / (2.0 * s * s) - b * q / s
    else:
        u = -INF

    return BernsteinFunction(
        kill=q, drift=0.0, a_phi=-0.5 * b * b,
        closed_form=lambda z: q + s * (cmath.sqrt(b * b + 2.0 * complex(z)) - b),
        d1=lambda z: s / cmath.sqrt(b * b + 2.0 * complex(z)),
        d2=lambda z: -s * (b * b + 2.0 * complex(z)) ** -1.5,
        family="ig-sub", params={"s": s, "b": b, "q": q},
        u_phi=u, phi_at_inf=INF, mu_mass=INF, finite_at_a=True)


def make_rational(scale, zeros: Sequence[float], poles: Sequence[float]):
    """phi(z) = scale * prod (z + zeros_k) / prod (z + poles_j).

    zeros and poles are the negated roots (all > 0 except possibly
    zeros[0] = 0) and must interlace so that phi is Bernstein:
    zeros[0] < poles[0] < zeros[1] < poles[1] < ...  The number of zeros
    is len(poles) or len(poles) + 1 (the latter giving positive drift).
    """
    zeros = [float(x) for x in zeros]
    poles = [float(x) for x in poles]
    c = float(scale)
    if len(zeros) not in (len(poles), len(poles) + 1):
        raise ValueError("rational phi needs #zeros in {#poles, #poles+1}")
    inter = []
    for k in range(len(poles)):
        inter.append(zeros[k])
        inter.append(poles[k])
    inter.extend(zeros[len(poles):])
    if any(inter[i] >= inter[i + 1] for i in range(len(inter) - 1)):
        raise ValueError("zeros and poles must interlace")

    def f(z):
        z = complex(z)
        v = c + 0.0j
        for x in zeros:
            v *= z + x
        for x in poles:
            v /= z + x
        return v

    def logd(z):
        return (sum(1.0 / (z + x) for x in zeros)
                - sum(1.0 / (z + x) for x in poles))

    def logdd(z):
        return (-sum(1.0 / (z + x) ** 2 for x in zeros)
                + sum(1.0 / (z + x) ** 2 for x in poles))

    def f1(z):
        z = complex(z)
        return f(z) * logd(z)

    def f2(z):
        z = complex(z)
        d = logd(z)
        return f(z) * (d * d + logdd(z))

    def lw(z):
        v = (z - 1.0) * math.log(c)
        for x in zeros:
            v += log_gamma(z + x) - log_gamma(1.0 + x)
        for x in poles:
            v += log_gamma(1.0 + x) - log_gamma(z + x)
        return v

    drift = c if len(zeros) == len(poles) + 1 else 0.0
    kill = f(0.0).real
    first_zero = zeros[0]
    a_phi = -poles[0] if poles else -INF
    # total jump mass from partial fractions of (phi(z)-kill-drift z)/z
    mass = 0.0
    for j, p in enumerate(poles):
        num = c
        for x in zeros:
            num *= (-p + x)
        den = -p
        for i, x in enumerate(poles):
            if i != j:
                den *= (-p + x)
        mass += num / den
    return BernsteinFunction(
        kill=kill, drift=drift, a_phi=a_phi,
        closed_form=f, d1=f1, d2=f2, closed_logw=lw,
        family="rational",
        params={"scale": c, "zeros": tuple(zeros), "poles": tuple(poles)},
        u_phi=(-first_zero if first_zero > 0 else 0.0),
        phi_at_inf=(INF if drift > 0 else c), mu_mass=float(mass))


def _custom_tail(beta=0.0, a_phi=None, table=None, tail=None, **_):
    """Measure-driven family: tail callable or a (y, mubar) table."""
    if tail is None:
        if table is None:
            raise ValueError("custom-tail needs a tail callable or a table")
        ys = np.asarray([p[0] for p in table], dtype=float)
        vs = np.asarray([p[1] for p in table], dtype=float)

        def tail(y, ys=ys, vs=vs):
            y = np.asarray(y, dtype=float)
            out = np.interp(y, ys, vs, left=vs[0], right=0.0)
            return out
    spec = LevyMeasureSpec("tail-function", tail=tail, beta=beta)
    a = -beta if a_phi is None else float(a_phi)
    return BernsteinFunction(kill=0.0, drift=0.0, measure=spec, a_phi=a,
                             family="custom-tail", params={"beta": beta})


FAMILIES = {
    "affine": _affine,
    "power": _power,
    "stable": _stable,
    "gamma-ratio": _gamma_ratio,
    "geom": _geom,
    "ratio": _ratio,
    "ratio-power": _ratio_power,
    "const": _const,
    "gamma-sub": _gamma_sub,
    "ig-sub": _ig_sub,
    "custom-tail": _custom_tail,
}


def bernstein_family(family_id: str, params=None) -> BernsteinFunction:
    """Construct a catalog Bernstein function from its id and parameters."""
    try:
        builder = FAMILIES[family_id]
    except KeyError:
        raise UnsupportedFamily(family_id) from None
    return builder(**(params or {}))


class UnsupportedFamily(DomainError):
    pass
