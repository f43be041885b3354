"""Reference complex log-gamma, digamma and trigamma.

The log-gamma implementation uses the published Lanczos coefficients for
g = 607/128, n = 15 (Godfrey's set, also used by Boost and the GSL).  It is
deliberately independent of the generic Bernstein-gamma engine so that the
engine can be validated against it without circularity.

All functions accept real or complex scalars.  ``log_gamma`` returns the
principal analytic branch on the right half-plane; on the left half-plane
the value is exact modulo 2*pi*i (callers there only ever exponentiate it).
"""

from __future__ import annotations

import cmath
import math

import numpy as np

LANCZOS_G = 607.0 / 128.0

# Godfrey's coefficients for g = 607/128, n = 15.
LANCZOS_COEFFS = (
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    0.33994649984811888699e-4,
    0.46523628927048575665e-4,
    -0.98374475304879564677e-4,
    0.15808870322491248884e-3,
    -0.21026444172410488319e-3,
    0.21743961811521264320e-3,
    -0.16431810653676389022e-3,
    0.84418223983852743293e-4,
    -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
)

_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)


def _lanczos_sum(z: complex) -> complex:
    s = LANCZOS_COEFFS[0]
    for k in range(1, len(LANCZOS_COEFFS)):
        s += LANCZOS_COEFFS[k] / (z + k)
    return s


def log_gamma(z):
    """Principal log Gamma(z) for Re z > 0; a valid branch elsewhere.

    Accepts scalars or numpy arrays (vectorized on Re z >= 0.5, scalar
    reflection fallback left of it).
    """
    if isinstance(z, np.ndarray):
        return _log_gamma_array(z)
    z = complex(z)
    if z.real >= 0.5:
        zm1 = z - 1.0
        t = zm1 + LANCZOS_G + 0.5
        return (_LOG_SQRT_2PI + (zm1 + 0.5) * cmath.log(t) - t
                + cmath.log(_lanczos_sum(zm1)))
    if z.real == math.floor(z.real) and z.imag == 0.0 and z.real <= 0.0:
        raise ValueError(f"log_gamma pole at z={z}")
    # Reflection; the log-sin term is evaluated in an overflow-safe form.
    return math.log(math.pi) - _log_sin_pi(z) - log_gamma(1.0 - z)


def _log_gamma_array(z):
    z = np.asarray(z, dtype=complex)
    out = np.empty(z.shape, dtype=complex)
    right = z.real >= 0.5
    if np.any(right):
        zm1 = z[right] - 1.0
        t = zm1 + LANCZOS_G + 0.5
        s = np.full(zm1.shape, LANCZOS_COEFFS[0], dtype=complex)
        for k in range(1, len(LANCZOS_COEFFS)):
            s += LANCZOS_COEFFS[k] / (zm1 + k)
        out[right] = (_LOG_SQRT_2PI + (zm1 + 0.5) * np.log(t) - t
                      + np.log(s))
    if np.any(~right):
        out[~right] = [log_gamma(complex(w)) for w in z[~right].ravel()]
    return out


def _log_sin_pi(z: complex) -> complex:
    """log sin(pi z), exact modulo 2*pi*i, stable for large |Im z|."""
    if abs(z.imag) < 1.0:
        return cmath.log(cmath.sin(math.pi * z))
    if z.imag > 0:
        # sin(pi z) = e^{-i pi z} (i/2) (1 - e^{2 i pi z})
        return (-1j * math.pi * z + cmath.log(0.5j)
                + cmath.log(1.0 - cmath.exp(2j * math.pi * z)))
    return _log_sin_pi(z.conjugate()).conjugate()


def gamma(z: complex) -> complex:
    """Gamma(z) through the Lanczos log form."""
    return cmath.exp(log_gamma(z))


def digamma(z: complex) -> complex:
    """psi(z) = Gamma'(z)/Gamma(z) by recurrence plus asymptotic series."""
    z = complex(z)
    if z.real < 0.5:
        # reflection: psi(z) = psi(1-z) - pi cot(pi z)
        return digamma(1.0 - z) - math.pi / cmath.tan(math.pi * z)
    s = 0.0 + 0.0j
    while z.real < 16.0:
        s -= 1.0 / z
        z += 1.0
    inv = 1.0 / z
    inv2 = inv * inv
    # psi(z) ~ ln z - 1/(2z) - sum B_{2n}/(2n z^{2n})
    r = cmath.log(z) - 0.5 * inv
    r -= inv2 * (1.0 / 12.0 + inv2 * (-1.0 / 120.0 + inv2 * (1.0 / 252.0
         + inv2 * (-1.0 / 240.0 + inv2 * (1.0 / 132.0)))))
    return r + s


def trigamma(z: complex) -> complex:
    """psi'(z) by recurrence plus asymptotic series."""
    z = complex(z)
    if z.real < 0.5:
        # psi'(z) + psi'(1-z) = pi^2 / sin^2(pi z)
        sp = cmath.sin(math.pi * z)
        return math.pi ** 2 / (sp * sp) - trigamma(1.0 - z)
    s = 0.0 + 0.0j
    while z.real < 16.0:
        s += 1.0 / (z * z)
        z += 1.0
    inv = 1.0 / z
    inv2 = inv * inv
    # psi'(z) ~ 1/z + 1/(2z^2) + sum B_{2n}/z^{2n+1}
    r = inv + 0.5 * inv2
    r += inv * inv2 * (1.0 / 6.0 + inv2 * (-1.0 / 30.0 + inv2 * (1.0 / 42.0
         + inv2 * (-1.0 / 30.0 + inv2 * (5.0 / 66.0)))))
    return r + s
