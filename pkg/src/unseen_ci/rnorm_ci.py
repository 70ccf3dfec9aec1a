"""Sample-independent confidence intervals for the largest unseen-symbol
probability over unbounded alphabets.

The statistic of interest is the largest true mass among symbols missing
from an n-sample.  Its r-th-power sum is bounded in expectation by a closed
form that is maximized (over all distributions) by a uniform distribution
with per-symbol mass (r-1)/(r-1+n); dividing by the error budget alpha and
taking the 1/r-th root gives a valid one-sided interval for every r >= 1,
and the interval reported is the minimum over r.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .distributions import Pmf
from .utils import golden_min


@dataclass(frozen=True)
class CiConfig:
    """A problem instance: sample size, error budget, optional alphabet size."""

    n: int
    alpha: float
    k: int | None = None

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ValueError("n must be a positive integer")
        if not 0 < self.alpha < 1:
            raise ValueError("alpha must be in (0, 1)")
        if self.k is not None and (int(self.k) != self.k or self.k < 1):
            raise ValueError("k must be a positive integer when given")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "alpha", float(self.alpha))
        if self.k is not None:
            object.__setattr__(self, "k", int(self.k))


@dataclass(frozen=True)
class UpperCi:
    """A one-sided interval [0, upper] with the norm order that produced it.

    ``e_value`` is the worst-case expectation of the r-norm statistic at
    ``r_star``; for the unbounded/bounded methods
    ``upper == min(1, (e_value / alpha) ** (1 / r_star))``.
    """

    upper: float
    r_star: float
    e_value: float
    method: str


@dataclass(frozen=True)
class RGrid:
    """Search space for the norm-order minimization.

    ``r_max`` defaults to 10 ln(max(n, 2)) + 20, comfortably above the
    empirically optimal order; a coarse log-spaced scan guards the
    golden-section refinement against non-global local minima.
    """

    r_min: float = 1.0
    r_max: float | None = None
    refine_tol: float = 1e-10
    coarse_points: int = 256

    def resolve(self, n: int) -> "RGrid":
        if self.r_max is not None:
            if not self.r_min < self.r_max:
                raise ValueError("need r_min < r_max")
            return self
        return RGrid(self.r_min, 10.0 * math.log(max(n, 2)) + 20.0,
                     self.refine_tol, self.coarse_points)


def e_r_unbounded(r: float, n: int) -> float:
    """Worst-case expectation of the r-th-power missing-mass sum over all
    distributions: q^(r-1) (1-q)^n at q = (r-1)/(r-1+n).

    Computed in log space; r = 1 returns exactly 1 (the missing mass of any
    distribution is at most 1 in expectation, attained in the limit of a
    fine uniform distribution).
    """
    if r < 1:
        raise ValueError("r must be >= 1")
    if int(n) != n or n < 1:
        raise ValueError("n must be a positive integer")
    if r == 1.0:
        return 1.0
    q = (r - 1.0) / (r - 1.0 + n)
    return math.exp((r - 1.0) * math.log(q) + n * math.log1p(-q))


def _ln_e_unbounded_vec(r: np.ndarray, n: int) -> np.ndarray:
    r = np.asarray(r, dtype=float)
    q = (r - 1.0) / (r - 1.0 + n)
    with np.errstate(divide="ignore", invalid="ignore"):
        ln = (r - 1.0) * np.log(q) + n * np.log1p(-q)
    return np.where(r == 1.0, 0.0, ln)


def _minimize_over_r(ln_e, n: int, alpha: float, grid: RGrid,
                     ln_e_vec=None) -> tuple[float, float]:
    """Minimize ((e(r)/alpha)^(1/r)) over r; returns (r_star, ln_objective)."""
    grid = grid.resolve(n)
    ln_alpha = math.log(alpha)
    rs = np.geomspace(grid.r_min, grid.r_max, grid.coarse_points)
    if ln_e_vec is not None:
        coarse = (ln_e_vec(rs) - ln_alpha) / rs
    else:
        coarse = np.array([(ln_e(r) - ln_alpha) / r for r in rs])
    i = int(np.argmin(coarse))

    def obj(r: float) -> float:
        return (ln_e(r) - ln_alpha) / r

    lo = float(rs[max(i - 1, 0)])
    hi = float(rs[min(i + 1, rs.size - 1)])
    r_star, val = golden_min(obj, lo, hi, ftol=grid.refine_tol)
    if coarse[i] < val:
        return float(rs[i]), float(coarse[i])
    return float(r_star), float(val)


def ci_unbounded(cfg: CiConfig, grid: RGrid = RGrid()) -> UpperCi:
    """One-sided CI for the largest missing probability, valid for every
    distribution over any countable alphabet.

    Minimizes (e_r_unbounded(r, n) / alpha)^(1/r) over r >= 1 by a coarse
    log-spaced scan plus golden-section refinement; the bound is clamped
    to 1.
    """
    r_star, _ = _minimize_over_r(lambda r: math.log(e_r_unbounded(r, cfg.n)),
                                 cfg.n, cfg.alpha, grid,
                                 ln_e_vec=lambda rs: _ln_e_unbounded_vec(rs, cfg.n))
    e_val = e_r_unbounded(r_star, cfg.n)
    upper = min(1.0, (e_val / cfg.alpha) ** (1.0 / r_star))
    return UpperCi(upper=upper, r_star=r_star, e_value=e_val, method="unbounded")


def exact_expectation(p: Pmf, r: float, n: int) -> float:
    """Expected r-th-power missing-mass sum under a known distribution:
    sum of p(u)^r (1 - p(u))^n; zero-mass symbols contribute nothing."""
    if r < 1:
        raise ValueError("r must be >= 1")
    if int(n) != n or n < 1:
        raise ValueError("n must be a positive integer")
    probs = p.probs if isinstance(p, Pmf) else np.asarray(p, dtype=float)
    pos = probs[probs > 0]
    with np.errstate(divide="ignore"):
        terms = np.exp(r * np.log(pos) + n * np.log1p(-pos))
    return float(np.where(pos == 1.0, 0.0, terms).sum())


def rot_bonferroni(n: int, k: int, alpha: float) -> float:
    """Multiplicity-corrected rule-of-three bound -ln(alpha/k)/n, clamped
    to 1."""
    if int(n) != n or n < 1:
        raise ValueError("n must be a positive integer")
    if int(k) != k or k < 1:
        raise ValueError("k must be a positive integer")
    if not 0 < alpha < 1:
        raise ValueError("alpha must be in (0, 1)")
    return min(1.0, -math.log(alpha / k) / n)
