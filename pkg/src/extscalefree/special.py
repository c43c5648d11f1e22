"""Riemann/Hurwitz zeta and the real polylogarithm on [0, 1].

All three are evaluated with the same Euler-Maclaurin scheme applied to
``f(x) = x**-alpha * exp(mu * x)``: a short direct sum followed by the
integral, the boundary half-term and a fixed number of Bernoulli
corrections.  With the shift at 20 and 10 corrections the truncation
error is far below 1e-15 for every ``alpha > 1``.
"""
import math
import warnings

import numpy as np
from scipy.integrate import IntegrationWarning, quad

__all__ = ["zeta", "hurwitz_zeta", "polylog"]

_SHIFT = 20
# B_2j / (2j)!
_BERN = [
    1.0 / 6 / 2,
    -1.0 / 30 / 24,
    1.0 / 42 / 720,
    -1.0 / 30 / 40320,
    5.0 / 66 / 3628800,
    -691.0 / 2730 / 479001600,
    7.0 / 6 / 87178291200,
    -3617.0 / 510 / 20922789888000,
    43867.0 / 798 / 6402373705728000,
    -174611.0 / 330 / 2432902008176640000,
]
_DIRECT_POLYLOG_MAX_S = 0.5


def _check_alpha(alpha):
    alpha = float(alpha)
    if not alpha > 1.0 or not math.isfinite(alpha):
        raise ValueError(f"alpha must be a finite number > 1, got {alpha!r}")
    return alpha


def _expint_tail(p, z):
    """``E_p(z) = int_1^inf exp(-z t) t**-p dt`` for p > 1, z >= 0."""
    if z == 0.0:
        return 1.0 / (p - 1.0)
    # t = e^u turns the algebraic tail into an exponential one
    def integrand(u):
        e = -(p - 1.0) * u - z * math.exp(min(u, 700.0))
        return math.exp(e) if e > -745.0 else 0.0

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IntegrationWarning)
        val, _ = quad(integrand, 0.0, np.inf, epsabs=1e-16, epsrel=1e-14, limit=200)
    return val


def _em_tail(alpha, mu, a):
    """``sum_{k>=0} (a+k)**-alpha * exp(mu*(a+k))`` for a >= _SHIFT, mu <= 0.

    ``a`` may be an array; ``alpha`` and ``mu`` are scalars.
    """
    a = np.asarray(a, dtype=float)
    # f^(m)(a) = exp(mu a) * sum_i C(m,i) mu^(m-i) * (-alpha)_i a^(-alpha-i)
    nterms = 2 * len(_BERN)
    falling = np.empty(nterms)
    falling[0] = 1.0
    for i in range(1, nterms):
        falling[i] = falling[i - 1] * (-alpha - i + 1)
    inv_a = 1.0 / a
    base = a ** -alpha
    pow_a = [base]
    for _ in range(1, nterms):
        pow_a.append(pow_a[-1] * inv_a)
    damp = np.exp(mu * a)

    if mu == 0.0:
        integral = a ** (1.0 - alpha) / (alpha - 1.0)
    else:
        flat = np.atleast_1d(a)
        vals = np.array([x ** (1.0 - alpha) * _expint_tail(alpha, -mu * x) for x in flat.ravel()])
        integral = vals.reshape(a.shape)
    total = integral + 0.5 * base * damp
    for j, b in enumerate(_BERN):
        m = 2 * j + 1
        deriv = np.zeros_like(a)
        for i in range(m + 1):
            deriv = deriv + math.comb(m, i) * mu ** (m - i) * falling[i] * pow_a[i]
        total = total - b * deriv * damp
    return total


def hurwitz_zeta(alpha, a):
    """``sum_{k>=0} (a+k)**-alpha`` for integer ``a >= 1`` (scalar or array)."""
    alpha = _check_alpha(alpha)
    a_arr = np.asarray(a)
    if np.any(a_arr < 1):
        raise ValueError("hurwitz_zeta needs a >= 1")
    a_int = a_arr.astype(np.int64)
    small = np.arange(1, _SHIFT, dtype=float) ** -alpha
    # cum[j] = sum_{k=1}^{j} k^-alpha, j = 0.._SHIFT-1
    cum = np.concatenate(([0.0], np.cumsum(small)))
    start = np.maximum(a_int, _SHIFT)
    lo = np.minimum(a_int, _SHIFT) - 1
    direct = cum[_SHIFT - 1] - cum[lo]
    out = direct + _em_tail(alpha, 0.0, start.astype(float))
    if np.ndim(a) == 0:
        return float(out)
    return out


def zeta(alpha):
    """Riemann zeta ``sum_{k>=1} k**-alpha`` for real ``alpha > 1``."""
    return hurwitz_zeta(alpha, 1)


def polylog(alpha, s):
    """Real polylogarithm ``Li_alpha(s) = sum_{k>=1} k**-alpha s**k``.

    Defined here for ``alpha > 1`` and ``0 <= s <= 1``; absolute accuracy
    is about 1e-14 over that domain.
    """
    alpha = _check_alpha(alpha)
    s = float(s)
    if not 0.0 <= s <= 1.0:
        raise ValueError(f"polylog needs 0 <= s <= 1, got {s!r}")
    if s == 0.0:
        return 0.0
    if s == 1.0:
        return zeta(alpha)
    if s <= _DIRECT_POLYLOG_MAX_S:
        # terms shrink at least geometrically with ratio s
        nmax = int(math.ceil(math.log(1e-18) / math.log(s))) + 1
        k = np.arange(1, nmax + 1, dtype=float)
        return float(np.sum(k ** -alpha * s ** k))
    mu = math.log(s)
    k = np.arange(1, _SHIFT, dtype=float)
    direct = float(np.sum(k ** -alpha * np.exp(mu * k)))
    return direct + float(_em_tail(alpha, mu, np.array(float(_SHIFT))))
