"""Tail-index and parameter estimation for degree data.

Hill-type estimators work on continuous-looking samples; the discrete fits
(:func:`fit_chisq`, :func:`fit_mle_discrete`) minimise either a binned
chi-square distance or the negative log-likelihood with Nelder-Mead in an
unconstrained reparameterisation of each family.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import expit, logit

from . import distributions as dd
from .optimize import nelder_mead

__all__ = [
    "Bin",
    "BinnedHistogram",
    "FitResult",
    "HillCurve",
    "FIT_FAMILIES",
    "hill",
    "hill_top_k",
    "hill_plot",
    "mle_continuous_alpha",
    "bin_histogram",
    "chisq_stat",
    "neg_log_likelihood",
    "fit_chisq",
    "fit_mle_discrete",
    "fit",
]

FIT_FAMILIES = ("zipf", "pareto", "gpd", "epd", "mixture")
DELTA_MAX = 10.0
DELTA_EPS = 1e-9
N_RESTARTS = 5
EDGE_PROBE = 5.0
HILL_PLOT_MAX_POINTS = 2000


def _as_sample(samples, minimum=2):
    x = np.asarray(samples, dtype=float).ravel()
    if x.size < minimum:
        raise ValueError(f"need at least {minimum} samples, got {x.size}")
    if np.any(~np.isfinite(x)) or np.any(x < 1):
        raise ValueError("samples must be finite and >= 1")
    return x


# -- Hill-type estimators ----------------------------------------------------


def hill(samples) -> float:
    """Full-sample Hill estimate ``mean(log x) - log(min x)``."""
    x = _as_sample(samples)
    logs = np.log(x)
    return float(logs.mean() - logs.min())


def hill_top_k(samples, k: int) -> float:
    """Hill estimate from the ``k`` largest order statistics, ``1 <= k <= n-1``."""
    x = _as_sample(samples)
    n = x.size
    if not 1 <= k <= n - 1:
        raise ValueError(f"k must lie in [1, {n - 1}], got {k}")
    logs = np.sort(np.log(x))
    return float(logs[n - k :].mean() - logs[n - k - 1])


@dataclass
class HillCurve:
    """Hill estimates ``xi_hat`` at each number of top order statistics ``k``."""

    k: np.ndarray
    xi_hat: np.ndarray

    @property
    def points(self):
        return list(zip(self.k.tolist(), self.xi_hat.tolist()))


def _hill_all(logs_sorted):
    n = logs_sorted.size
    top_sums = np.cumsum(logs_sorted[::-1])  # top_sums[k-1] = sum of k largest
    k = np.arange(1, n)
    return k, top_sums[: n - 1] / k - logs_sorted[n - k - 1]


def hill_plot(samples, max_points: int = HILL_PLOT_MAX_POINTS) -> HillCurve:
    """Hill curve for ``k = 2 .. n-1``.

    All ``k`` are returned for ``n <= 1e4``; larger samples are thinned to a
    log-spaced grid of at most ``max_points`` values of ``k``.
    """
    x = _as_sample(samples, minimum=3)
    k, xi = _hill_all(np.sort(np.log(x)))
    k, xi = k[1:], xi[1:]
    if x.size > 10_000 and k.size > max_points:
        grid = np.unique(np.round(np.geomspace(2, x.size - 1, max_points)).astype(np.int64))
        k, xi = k[grid - 2], xi[grid - 2]
    return HillCurve(k.astype(np.int64), xi)


def mle_continuous_alpha(samples) -> float:
    """MLE ``1 + n / sum(log x)`` of the density ``(alpha-1) x**-alpha`` on ``[1, inf)``."""
    x = _as_sample(samples, minimum=1)
    total = float(np.sum(np.log(x)))
    if total == 0.0:
        raise ValueError("all samples equal 1; the exponent is not identifiable")
    return 1.0 + x.size / total


# -- binning and objectives --------------------------------------------------


@dataclass(frozen=True)
class Bin:
    k_lo: int
    k_hi: int
    count: int


@dataclass
class BinnedHistogram:
    """Consecutive degree classes covering ``1 .. max degree``."""

    bins: list[Bin]
    n: int

    def edges(self):
        lo = np.array([b.k_lo for b in self.bins], dtype=np.int64)
        hi = np.array([b.k_hi for b in self.bins], dtype=np.int64)
        counts = np.array([b.count for b in self.bins], dtype=float)
        return lo, hi, counts

    def to_dict(self):
        return {"n": self.n, "bins": [[b.k_lo, b.k_hi, b.count] for b in self.bins]}


def _as_degrees(degrees, minimum=1):
    d = np.asarray(degrees)
    if d.size < minimum:
        raise ValueError(f"need at least {minimum} degrees, got {d.size}")
    if d.dtype.kind == "f":
        if np.any(d != np.floor(d)):
            raise ValueError("degrees must be integers")
        d = d.astype(np.int64)
    if np.any(d < 1):
        raise ValueError("degrees must be >= 1")
    return d.ravel()


def bin_histogram(degrees, min_count: int = 10) -> BinnedHistogram:
    """Greedy left-to-right grouping of degree values ``1..max`` into classes.

    A class closes as soon as it holds ``min_count`` nodes; a short final
    class is merged into the one before it, so every class but (possibly)
    a lone first class reaches ``min_count`` and counts sum to ``n``.
    """
    d = _as_degrees(degrees)
    values, counts = np.unique(d, return_counts=True)
    bins = []
    lo, acc = 1, 0
    # unobserved degrees add nothing, so only observed values can close a class
    for k, c in zip(values.tolist(), counts.tolist()):
        acc += c
        if acc >= min_count:
            bins.append(Bin(lo, k, acc))
            lo, acc = k + 1, 0
    kmax = int(values[-1])
    if lo <= kmax:
        if bins:
            last = bins.pop()
            bins.append(Bin(last.k_lo, kmax, last.count + acc))
        else:
            bins.append(Bin(1, kmax, acc))
    return BinnedHistogram(bins, int(d.size))


def chisq_stat(dist: dd.DegreeDistribution, hist: BinnedHistogram) -> float:
    """``sum_j (n p_j - n_j)**2 / (n p_j)`` over the classes of ``hist``.

    The last class is open-ended so class probabilities sum to one.  Returns
    ``inf`` when some ``p_j`` is not positive.
    """
    lo, hi, counts = hist.edges()
    upper = dist._ccdf(lo.astype(float) - 1.0)
    upper[lo == 1] = 1.0
    lower = dist._ccdf(hi.astype(float))
    lower[-1] = 0.0
    p = upper - lower
    if not np.all(p > 0):
        return math.inf
    expected = hist.n * p
    with np.errstate(over="ignore"):
        return float(np.sum((expected - counts) ** 2 / expected))


def neg_log_likelihood(dist: dd.DegreeDistribution, degrees) -> float:
    """``-sum_i log pmf(d_i)``; ``inf`` when some ``pmf(d_i)`` is not positive."""
    values, counts = np.unique(_as_degrees(degrees), return_counts=True)
    return _nll_counts(dist, values, counts)


def _nll_counts(dist, values, counts):
    p = dist._pmf(np.asarray(values, dtype=float))
    if not np.all(p > 0):
        return math.inf
    return float(-np.sum(counts * np.log(p)))


# -- reparameterisation ------------------------------------------------------


def _epd_delta_lower(tau):
    return (-1.0 if tau > -1.0 else 1.0 / tau) + DELTA_EPS


def _decode(family, theta):
    if family == "zipf":
        return dd.Zipf(1.0 + math.exp(theta[0]))
    if family == "pareto":
        return dd.DPareto(math.exp(theta[0]))
    if family == "gpd":
        return dd.DGpd(sigma=math.exp(theta[1]), xi=math.exp(theta[0]))
    if family == "epd":
        tau = -math.exp(theta[1])
        lo = _epd_delta_lower(tau)
        delta = lo + (DELTA_MAX - lo) * float(expit(theta[2]))
        return dd.DEpd(xi=math.exp(theta[0]), tau=tau, delta=delta)
    if family == "mixture":
        c1 = float(expit(theta[0]))
        return dd.Mixture(c1, math.exp(theta[1]), 1.0 - c1, math.exp(theta[2]))
    raise ValueError(f"unknown family {family!r}; expected one of {FIT_FAMILIES}")


def _encode(family, params):
    if family == "zipf":
        return np.array([math.log(params["alpha"] - 1.0)])
    if family == "pareto":
        return np.array([math.log(params["xi"])])
    if family == "gpd":
        return np.array([math.log(params["xi"]), math.log(params["sigma"])])
    if family == "epd":
        tau = params["tau"]
        lo = _epd_delta_lower(tau)
        frac = (params["delta"] - lo) / (DELTA_MAX - lo)
        return np.array([math.log(params["xi"]), math.log(-tau), float(logit(frac))])
    if family == "mixture":
        return np.array(
            [float(logit(params["c1"])), math.log(params["gamma1"]), math.log(params["gamma2"])]
        )
    raise ValueError(f"unknown family {family!r}; expected one of {FIT_FAMILIES}")


def _start(family, degrees):
    xi0 = hill(degrees)
    if not xi0 > 0.05:
        xi0 = 0.1
    if family == "zipf":
        return {"alpha": 1.0 + 1.0 / xi0}
    if family == "pareto":
        return {"xi": xi0}
    if family == "gpd":
        return {"xi": xi0, "sigma": float(np.mean(degrees))}
    if family == "epd":
        return {"xi": xi0, "tau": -1.0, "delta": 0.1}
    if family == "mixture":
        return {"c1": 0.5, "gamma1": 1.0 / xi0, "gamma2": 2.0 / xi0}
    raise ValueError(f"unknown family {family!r}; expected one of {FIT_FAMILIES}")


def _at_boundary(dist):
    if isinstance(dist, dd.DEpd):
        lo = _epd_delta_lower(dist.tau)
        return (
            not 1e-3 < dist.xi < 50
            or not 1e-6 < -dist.tau < 1e3
            or dist.delta - lo < 1e-3
            or DELTA_MAX - dist.delta < 1e-6
        )
    if isinstance(dist, dd.Mixture):
        return not (1e-6 < dist.c1 < 1 - 1e-6) or not (1e-3 < min(dist.gamma1, dist.gamma2))
    if isinstance(dist, dd.Zipf):
        return not 1e-3 < dist.alpha - 1.0 < 50
    return not 1e-3 < dist.xi < 50


# -- fitting ------------------------------------------------------------------


@dataclass
class FitResult:
    family: str
    method: str
    dist: dd.DegreeDistribution
    objective: float
    converged: bool
    iterations: int
    boundary: bool = False
    bins: BinnedHistogram | None = field(default=None, repr=False)

    @property
    def params(self):
        return self.dist.params()

    def to_dict(self):
        return {
            "family": self.family,
            "params": self.params,
            "method": self.method,
            "objective": self.objective,
            "converged": self.converged,
            "iterations": self.iterations,
            "boundary": self.boundary,
        }


def _minimise(family, objective, degrees, max_iter, seed):
    def wrapped(theta):
        try:
            dist = _decode(family, theta)
        except (ValueError, OverflowError):
            return math.inf
        return objective(dist)

    theta0 = _encode(family, _start(family, degrees))
    rng = np.random.default_rng(seed)
    best = None
    for restart in range(N_RESTARTS):
        start = theta0 if restart == 0 else theta0 + rng.normal(0.0, 0.5, theta0.size)
        if not math.isfinite(wrapped(start)):
            continue
        res = nelder_mead(wrapped, start, max_iter=max_iter)
        key = (res.fun, res.iterations)
        if best is None or key < (best.fun, best.iterations):
            best = res
    if best is None:
        raise RuntimeError(f"no feasible starting point for family {family!r}")
    return _decode(family, best.x), best, _flat_to_edge(wrapped, best)


def _flat_to_edge(f, res, reach=EDGE_PROBE):
    """True if some far-away point along a coordinate is as good as the optimum.

    In the unconstrained coordinates the edge of the parameter space is at
    infinity; an objective that has not risen ``reach`` units away means the
    optimum sits on that edge or is not identified.
    """
    tol = 1e-9 * max(1.0, abs(res.fun))
    for i in range(res.x.size):
        for sign in (-1.0, 1.0):
            x = res.x.copy()
            x[i] += sign * reach
            if f(x) <= res.fun + tol:
                return True
    return False


def fit_chisq(family: str, degrees, min_count: int = 10, max_iter: int = 2000, seed: int = 0) -> FitResult:
    """Minimum chi-square fit of ``family`` to a degree sample (at least 30 degrees)."""
    d = _as_degrees(degrees, minimum=30)
    hist = bin_histogram(d, min_count)
    dist, res, edge = _minimise(family, lambda dist: chisq_stat(dist, hist), d, max_iter, seed)
    return FitResult(
        family, "chisq", dist, res.fun, res.converged, res.iterations, edge or _at_boundary(dist), hist
    )


def fit_mle_discrete(family: str, degrees, max_iter: int = 2000, seed: int = 0) -> FitResult:
    """Discrete maximum-likelihood fit of ``family`` (at least 10 degrees)."""
    d = _as_degrees(degrees, minimum=10)
    values, counts = np.unique(d, return_counts=True)
    values = values.astype(float)
    dist, res, edge = _minimise(
        family, lambda dist: _nll_counts(dist, values, counts), d, max_iter, seed
    )
    return FitResult(
        family, "mle", dist, res.fun, res.converged, res.iterations, edge or _at_boundary(dist)
    )


def fit(family: str, method: str, degrees, **kwargs) -> FitResult:
    if method == "chisq":
        return fit_chisq(family, degrees, **kwargs)
    if method == "mle":
        return fit_mle_discrete(family, degrees, **kwargs)
    raise ValueError(f"unknown method {method!r}; expected 'chisq' or 'mle'")
