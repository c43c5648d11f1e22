"""Discrete heavy-tailed degree laws on {1, 2, 3, ...}.

Six families share one interface: :class:`Zipf`, :class:`DPareto`,
:class:`DGpd`, :class:`DEpd`, :class:`Mixture` and :class:`Shifted`.
The module-level functions (:func:`pmf`, :func:`ccdf`, :func:`quantile`,
:func:`sample`, :func:`mean`, :func:`pgf`) accept any of them.

Discretisation conventions
--------------------------
``DPareto``, ``DEpd`` and ``Mixture`` are floors of a continuous law with
survival ``S`` on ``[1, inf)``::

    P[D = k] = S(k) - S(k + 1),      P[D > k] = S(k + 1)

``DGpd`` is the ceiling of a GPD on ``[0, inf)``::

    P[D = k] = S(k - 1) - S(k),      P[D > k] = S(k)

Point masses are computed from ratios of survivals with ``expm1``/``log1p``
so they keep full relative precision far into the tail.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import ClassVar

import numpy as np

from .special import _em_tail, hurwitz_zeta, polylog, zeta

__all__ = [
    "DegreeDistribution",
    "Zipf",
    "DPareto",
    "DGpd",
    "DEpd",
    "Mixture",
    "Shifted",
    "point_mass",
    "pmf",
    "ccdf",
    "cdf",
    "quantile",
    "sample",
    "sample_continuous",
    "mean",
    "pgf",
    "to_dict",
    "from_dict",
    "FAMILIES",
]

# largest integer that float64 still represents exactly; quantiles are capped here
K_MAX = 2**53
PGF_TOL = 1e-12


def _as_int_array(k):
    arr = np.asarray(k)
    if arr.dtype.kind == "f":
        if not np.all(np.isfinite(arr)) or np.any(arr != np.floor(arr)):
            raise ValueError("degrees must be integers")
    elif arr.dtype.kind not in "iu":
        raise TypeError(f"expected integer degrees, got dtype {arr.dtype}")
    return arr


def _power_step(z, r, inv_xi):
    """``z**-inv_xi - (z*(1+r))**-inv_xi`` without cancellation."""
    return np.exp(-inv_xi * np.log(z)) * -np.expm1(-inv_xi * np.log1p(r))


class DegreeDistribution:
    """Common interface; subclasses are frozen dataclasses."""

    family: ClassVar[str]

    def _ccdf(self, k: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _pmf(self, k: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def params(self) -> dict:
        raise NotImplementedError

    def pmf(self, k):
        return pmf(self, k)

    def ccdf(self, k):
        return ccdf(self, k)

    def quantile(self, q):
        return quantile(self, q)

    def sample(self, rng, n):
        return sample(self, rng, n)

    def mean(self):
        return mean(self)

    def pgf(self, s):
        return pgf(self, s)


@dataclass(frozen=True)
class Zipf(DegreeDistribution):
    """``P[D = k] = k**-alpha / zeta(alpha)``."""

    alpha: float
    family: ClassVar[str] = "zipf"

    def __post_init__(self):
        if not (math.isfinite(self.alpha) and self.alpha > 1.0):
            raise ValueError(f"Zipf needs alpha > 1, got {self.alpha!r}")
        object.__setattr__(self, "_z", zeta(self.alpha))

    def _ccdf(self, k):
        k = np.asarray(k, dtype=float)
        out = np.ones_like(k)
        pos = k >= 1
        if np.any(pos):
            out[pos] = hurwitz_zeta(self.alpha, k[pos] + 1) / self._z
        return out

    def _pmf(self, k):
        return np.asarray(k, dtype=float) ** -self.alpha / self._z

    def params(self):
        return {"alpha": self.alpha}


@dataclass(frozen=True)
class DPareto(DegreeDistribution):
    """Floor of the strict Pareto with survival ``x**(-1/xi)`` on ``[1, inf)``."""

    xi: float
    family: ClassVar[str] = "pareto"

    def __post_init__(self):
        if not (math.isfinite(self.xi) and self.xi > 0):
            raise ValueError(f"DPareto needs xi > 0, got {self.xi!r}")

    def survival(self, x):
        return np.asarray(x, dtype=float) ** (-1.0 / self.xi)

    def _ccdf(self, k):
        # (k+1)**(-1/xi) via log1p: the d-GPD(1, 1) ccdf takes the same path
        return np.exp(-np.log1p(np.asarray(k, dtype=float)) / self.xi)

    def _pmf(self, k):
        z = np.asarray(k, dtype=float)
        return _power_step(z, 1.0 / z, 1.0 / self.xi)

    def params(self):
        return {"xi": self.xi}


@dataclass(frozen=True)
class DGpd(DegreeDistribution):
    """Ceiling of the GPD with survival ``(1 + xi*x/sigma)**(-1/xi)``, ``x >= 0``."""

    sigma: float
    xi: float
    family: ClassVar[str] = "gpd"

    def __post_init__(self):
        if not (math.isfinite(self.sigma) and self.sigma > 0):
            raise ValueError(f"DGpd needs sigma > 0, got {self.sigma!r}")
        if not (math.isfinite(self.xi) and self.xi > 0):
            raise ValueError(f"DGpd needs xi > 0, got {self.xi!r}")

    def survival(self, x):
        x = np.asarray(x, dtype=float)
        return np.exp(-np.log1p(self.xi * x / self.sigma) / self.xi)

    def _ccdf(self, k):
        return self.survival(k)

    def _pmf(self, k):
        k = np.asarray(k, dtype=float)
        # written so sigma = xi = 1 reproduces DPareto(1) bit for bit
        w = self.sigma + self.xi * (k - 1.0)
        return _power_step(w / self.sigma, self.xi / w, 1.0 / self.xi)

    def params(self):
        return {"sigma": self.sigma, "xi": self.xi}


@dataclass(frozen=True)
class DEpd(DegreeDistribution):
    """Floor of the extended Pareto, survival ``[x(1 + delta - delta x**tau)]**(-1/xi)``.

    Requires ``xi > 0``, ``tau <= 0`` and ``delta > max(-1, 1/tau)``.  Those
    bounds make ``h(x) = x(1 + delta - delta x**tau)`` increasing on
    ``[1, inf)``: ``h'(x) = 1 + delta - delta(1 + tau) x**tau`` is linear in
    ``x**tau`` in ``(0, 1]`` with end values ``1 + delta > 0`` and
    ``1 - delta tau > 0``.
    """

    xi: float
    tau: float
    delta: float
    family: ClassVar[str] = "epd"

    def __post_init__(self):
        xi, tau, delta = self.xi, self.tau, self.delta
        if not all(math.isfinite(v) for v in (xi, tau, delta)):
            raise ValueError("EPD parameters must be finite")
        if xi <= 0:
            raise ValueError(f"EPD needs xi > 0, got {xi!r}")
        if tau > 0:
            raise ValueError(f"EPD needs tau <= 0, got {tau!r}")
        lower = -1.0 if tau == 0 else max(-1.0, 1.0 / tau)
        if delta <= lower:
            raise ValueError(f"EPD needs delta > max(-1, 1/tau) = {lower!r}, got {delta!r}")

    def log_survival(self, x):
        x = np.asarray(x, dtype=float)
        # log(1 + delta - delta x^tau) = log1p(-delta * expm1(tau log x))
        return -(np.log(x) + np.log1p(-self.delta * np.expm1(self.tau * np.log(x)))) / self.xi

    def survival(self, x):
        return np.exp(self.log_survival(x))

    def _ccdf(self, k):
        return self.survival(np.asarray(k, dtype=float) + 1.0)

    def _pmf(self, k):
        k = np.asarray(k, dtype=float)
        inv_xi = 1.0 / self.xi
        lk = np.log(k)
        lstep = np.log1p(1.0 / k)
        h = -self.delta * np.expm1(self.tau * lk)  # h(k) - 1
        dh = -self.delta * np.exp(self.tau * lk) * np.expm1(self.tau * lstep)  # h(k+1) - h(k)
        log_ratio = lstep + np.log1p(dh / (1.0 + h))
        return np.exp(-inv_xi * (lk + np.log1p(h))) * -np.expm1(-inv_xi * log_ratio)

    def params(self):
        return {"xi": self.xi, "tau": self.tau, "delta": self.delta}


@dataclass(frozen=True)
class Mixture(DegreeDistribution):
    """Two-Pareto mixture, survival ``c1 x**-gamma1 + c2 x**-gamma2`` on ``[1, inf)``."""

    c1: float
    gamma1: float
    c2: float
    gamma2: float
    family: ClassVar[str] = "mixture"

    def __post_init__(self):
        if min(self.c1, self.c2) < 0 or abs(self.c1 + self.c2 - 1.0) > 1e-12:
            raise ValueError("mixture weights must be non-negative and sum to 1")
        if not (self.gamma1 > 0 and self.gamma2 > 0):
            raise ValueError("mixture exponents must be positive")

    def survival(self, x):
        x = np.asarray(x, dtype=float)
        return self.c1 * x**-self.gamma1 + self.c2 * x**-self.gamma2

    def _ccdf(self, k):
        return self.survival(np.asarray(k, dtype=float) + 1.0)

    def _pmf(self, k):
        z = np.asarray(k, dtype=float)
        return self.c1 * _power_step(z, 1.0 / z, self.gamma1) + self.c2 * _power_step(
            z, 1.0 / z, self.gamma2
        )

    def params(self):
        return {"c1": self.c1, "gamma1": self.gamma1, "c2": self.c2, "gamma2": self.gamma2}


@dataclass(frozen=True)
class Shifted(DegreeDistribution):
    """``D`` such that ``D - u`` follows ``inner``; support ``{u+1, u+2, ...}``."""

    u: int
    inner: DegreeDistribution
    family: ClassVar[str] = "shifted"

    def __post_init__(self):
        if int(self.u) != self.u or self.u < 0:
            raise ValueError(f"shift must be a non-negative integer, got {self.u!r}")
        if isinstance(self.inner, Shifted):
            raise ValueError("nested shifts are not allowed; add the offsets instead")
        if not isinstance(self.inner, DegreeDistribution):
            raise TypeError("inner must be a DegreeDistribution")

    def _ccdf(self, k):
        k = np.asarray(k, dtype=float)
        return np.where(k <= self.u, 1.0, self.inner._ccdf(np.maximum(k - self.u, 0.0)))

    def _pmf(self, k):
        k = np.asarray(k, dtype=float)
        return np.where(k > self.u, self.inner._pmf(np.maximum(k - self.u, 1.0)), 0.0)

    def params(self):
        return {"u": int(self.u), "inner": to_dict(self.inner)}


FAMILIES = {cls.family: cls for cls in (Zipf, DPareto, DGpd, DEpd, Mixture, Shifted)}


def point_mass(k: int) -> Shifted:
    """Degenerate law at ``k``: a shifted ``DPareto`` whose mass at 1 is 1 - 2**-100."""
    if k < 1:
        raise ValueError("point mass needs k >= 1")
    return Shifted(int(k) - 1, DPareto(0.01))


def _scalar_or_array(arr, like):
    return float(arr) if np.ndim(like) == 0 else arr


def ccdf(dist: DegreeDistribution, k):
    """``P[D > k]`` for integer ``k >= 0`` (scalar or array)."""
    karr = _as_int_array(k)
    if np.any(karr < 0):
        raise ValueError("ccdf needs k >= 0")
    out = dist._ccdf(karr.astype(float))
    out = np.where(karr == 0, 1.0, out)
    return _scalar_or_array(out, k)


def cdf(dist: DegreeDistribution, k):
    """``P[D <= k]``."""
    out = 1.0 - np.asarray(ccdf(dist, k))
    return _scalar_or_array(out, k)


def pmf(dist: DegreeDistribution, k):
    """``P[D = k]`` for integer ``k >= 1`` (scalar or array)."""
    karr = _as_int_array(k)
    if np.any(karr < 1):
        raise ValueError("pmf needs k >= 1")
    return _scalar_or_array(dist._pmf(karr.astype(float)), k)


def _quantile_array(dist, q):
    # compare on the cdf side, 1 - ccdf(k) >= q, so results agree with cdf()

    def short(k, qq):
        return 1.0 - dist._ccdf(k) < qq

    hi = np.ones(q.shape)
    lo = np.zeros(q.shape)
    todo = short(hi, q)
    while np.any(todo):
        lo[todo] = hi[todo]
        hi[todo] = np.minimum(hi[todo] * 2.0, K_MAX)
        todo = todo & (hi < K_MAX) & short(hi, q)
    # invariant: cdf(lo) < q <= cdf(hi), except at the K_MAX cap
    active = hi - lo > 1
    while np.any(active):
        mid = np.floor((lo[active] + hi[active]) / 2.0)
        below = short(mid, q[active])
        lo_a, hi_a = lo[active], hi[active]
        lo_a[below] = mid[below]
        hi_a[~below] = mid[~below]
        lo[active], hi[active] = lo_a, hi_a
        active = hi - lo > 1
    return hi.astype(np.int64)


def quantile(dist: DegreeDistribution, q):
    """Smallest ``k >= 1`` with ``P[D <= k] >= q``, for ``0 <= q < 1``.

    Results are capped at ``K_MAX`` (2**53).
    """
    qarr = np.asarray(q, dtype=float)
    if np.any(~((qarr >= 0) & (qarr < 1))):
        raise ValueError("quantile needs 0 <= q < 1")
    out = _quantile_array(dist, np.atleast_1d(qarr))
    return int(out[0]) if np.ndim(q) == 0 else out.reshape(qarr.shape)


def sample(dist: DegreeDistribution, rng: np.random.Generator, n: int) -> np.ndarray:
    """``n`` i.i.d. degrees by inverse transform of uniforms drawn from ``rng``."""
    if n < 1:
        raise ValueError("sample size must be >= 1")
    return _quantile_array(dist, rng.random(int(n)))


def _epd_inverse(dist: DEpd, target):
    """Solve ``log x + log(1 + delta - delta x**tau) = target`` (target >= 0)."""
    tau, delta = dist.tau, dist.delta

    def g(y):
        return y + np.log1p(-delta * np.expm1(tau * y))

    def dg(y):
        e = np.exp(tau * y)
        return 1.0 - delta * tau * e / (1.0 + delta - delta * e)

    # g(0) = 0 and |g(y) - y| <= |log(1 + delta)|, so the root lies in [0, hi]
    lo = np.zeros_like(target)
    hi = target + abs(math.log1p(delta)) + 1.0
    y = np.clip(target - math.log1p(delta), lo, hi)
    for _ in range(100):
        f = g(y) - target
        lo = np.where(f < 0, y, lo)
        hi = np.where(f >= 0, y, hi)
        y_new = y - f / dg(y)
        outside = (y_new <= lo) | (y_new >= hi)
        y_new = np.where(outside, 0.5 * (lo + hi), y_new)
        done = np.all(np.abs(y_new - y) <= 1e-14 * np.maximum(1.0, np.abs(y)))
        y = y_new
        if done:
            break
    return np.exp(y)


def sample_continuous(dist: DegreeDistribution, rng: np.random.Generator, n: int) -> np.ndarray:
    """Draws from the continuous law behind a ``DPareto``, ``DEpd`` or ``DGpd``.

    ``floor`` of a draw follows the discrete ``DPareto``/``DEpd``; ``ceil``
    of a ``DGpd`` draw follows the discrete ``DGpd``.
    """
    u = 1.0 - rng.random(int(n))  # (0, 1]
    if isinstance(dist, DPareto):
        return u ** -dist.xi
    if isinstance(dist, DGpd):
        return dist.sigma / dist.xi * np.expm1(-dist.xi * np.log(u))
    if isinstance(dist, DEpd):
        return _epd_inverse(dist, -dist.xi * np.log(u))
    raise TypeError(f"no continuous counterpart for {type(dist).__name__}")


def _hurwitz_real(s, a):
    """``sum_{k>=0} (a+k)**-s`` for real ``a > 0``."""
    if a >= 1 and a == int(a):
        return hurwitz_zeta(s, int(a))
    m = max(0, int(math.ceil(20 - a)))
    head = float(np.sum((a + np.arange(m)) ** -s))
    return head + float(_em_tail(s, 0.0, np.array(a + m)))


def mean(dist: DegreeDistribution) -> float:
    """Expected degree, or ``math.inf`` when the tail makes it diverge."""
    if isinstance(dist, Shifted):
        return dist.u + mean(dist.inner)
    if isinstance(dist, Zipf):
        return math.inf if dist.alpha <= 2 else zeta(dist.alpha - 1) / zeta(dist.alpha)
    if isinstance(dist, DPareto):
        return math.inf if dist.xi >= 1 else zeta(1.0 / dist.xi)
    if isinstance(dist, DGpd):
        if dist.xi >= 1:
            return math.inf
        # E[D] = sum_{k>=0} S(k) = (sigma/xi)^(1/xi) * zeta(1/xi, sigma/xi)
        a = dist.sigma / dist.xi
        return a ** (1.0 / dist.xi) * _hurwitz_real(1.0 / dist.xi, a)
    if isinstance(dist, Mixture):
        active = [(c, g) for c, g in ((dist.c1, dist.gamma1), (dist.c2, dist.gamma2)) if c > 0]
        if min(g for _, g in active) <= 1:
            return math.inf
        return sum(c * zeta(g) for c, g in active)
    if isinstance(dist, DEpd):
        return _epd_mean(dist)
    raise TypeError(f"unknown distribution {dist!r}")


def _epd_mean(dist: DEpd) -> float:
    xi, tau, delta = dist.xi, dist.tau, dist.delta
    if xi >= 1:
        return math.inf
    a = 1.0 / xi
    if tau == 0 or delta == 0:
        return zeta(a)
    # E[D] = sum_{k>=1} S(k).  Beyond K expand (1 + delta - delta k^tau)^(-a)
    # binomially in r = delta k^tau / (1 + delta); |r| <= 1/2 there.
    ratio = abs(delta) / (1.0 + delta)
    K = 64
    if ratio > 0.5:
        K = max(K, int(math.ceil((0.5 / ratio) ** (1.0 / tau))))
    if K > 10**7:
        raise ValueError(f"EPD mean tail expansion needs K={K}; parameters too close to the boundary")
    k = np.arange(1, K + 1, dtype=float)
    head = float(np.sum(dist.survival(k)))
    r0 = delta / (1.0 + delta)
    coef = 1.0
    tail = 0.0
    for j in range(400):
        term = coef * r0**j * hurwitz_zeta(a - tau * j, K + 1)
        tail += term
        if j > 2 and abs(term) < 1e-17 * max(1.0, abs(tail)):
            break
        # coefficients of (1 - r)^(-a)
        coef *= (a + j) / (j + 1)
    return head + (1.0 + delta) ** -a * tail


def pgf(dist: DegreeDistribution, s):
    """Probability-generating function ``E[s**D]`` for ``|s| <= 1``.

    ``s`` is normally real in ``[0, 1]``; any real or complex ``s`` in the
    closed unit disk is accepted (the result is complex for complex ``s``).
    Zipf on ``[0, 1]`` uses ``Li_alpha(s) / zeta(alpha)``; everything else
    sums the pmf up to a cut-off ``K`` with ``|s|**(K+1) * P[D > K] <= 1e-12``.
    """
    is_complex = isinstance(s, (complex, np.complexfloating))
    z = complex(s) if is_complex else float(s)
    if not abs(z) <= 1.0:
        raise ValueError(f"pgf needs |s| <= 1, got {s!r}")
    if z == 1.0:
        return complex(1.0) if is_complex else 1.0
    if z == 0.0:
        return complex(0.0) if is_complex else 0.0
    if isinstance(dist, Shifted):
        return z ** dist.u * pgf(dist.inner, s)
    if isinstance(dist, Zipf) and not is_complex and z > 0:
        return polylog(dist.alpha, z) / dist._z
    log_r = math.log(abs(z))

    def bound(K):
        return math.exp((K + 1) * log_r) * float(dist._ccdf(np.array([float(K)]))[0])

    K = 16
    while bound(K) > PGF_TOL:
        K *= 2
        if K > 2**31:
            raise ValueError(f"|s|={abs(z)!r} is too close to 1 for a truncated pgf sum")
    total = 0.0
    chunk = 1 << 20
    for start in range(1, K + 1, chunk):
        k = np.arange(start, min(K, start + chunk - 1) + 1, dtype=float)
        total += np.sum(dist._pmf(k) * np.power(z, k))
    return complex(total) if is_complex else float(total)


def to_dict(dist: DegreeDistribution) -> dict:
    """JSON-ready ``{"family": ..., <params>}``."""
    return {"family": dist.family, **dist.params()}


def from_dict(obj: dict) -> DegreeDistribution:
    obj = dict(obj)
    try:
        family = obj.pop("family")
        cls = FAMILIES[family]
    except KeyError as exc:
        raise ValueError(f"unknown or missing family in {obj!r}") from exc
    if cls is Shifted:
        return Shifted(int(obj["u"]), from_dict(obj["inner"]))
    return cls(**{k: float(v) for k, v in obj.items()})
