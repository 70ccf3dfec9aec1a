"""Rectangular simultaneous confidence regions over large alphabets.

The error budget alpha is split by c in [0, 1]: observed symbols get
binomial intervals at per-symbol level 1 - alpha(1-c)/min(n, k) (at most
min(n, k) symbols can appear), and every unobserved symbol shares the
sample-independent unseen-event interval at level 1 - alpha*c.  A budget
split is accepted when two closed-form conditions certify that the
expected log-volume is no worse than the Bonferroni-corrected baseline for
every underlying distribution; the largest feasible c on a millesimal grid
is used by default.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .bounded_k import ci_bounded
from .distributions import Pmf, SampleCounts
from .rnorm_ci import CiConfig, ci_unbounded, rot_bonferroni
from .utils import mix_seed, replicate_rng

_LOG_FLOOR = 1e-300
_C_GRID = [i / 1000.0 for i in range(1, 1000)]


@dataclass(frozen=True)
class ConfidenceRegion:
    """Per-symbol intervals over a full alphabet, with the budget split
    that produced them (c = 0 for the Bonferroni baseline)."""

    intervals: np.ndarray  # shape (k, 2)
    c: float
    alpha: float
    method: str

    def __post_init__(self):
        iv = np.asarray(self.intervals, dtype=float)
        if iv.ndim != 2 or iv.shape[1] != 2 or iv.shape[0] < 1:
            raise ValueError("intervals must be a (k, 2) array")
        if np.any(iv < -1e-12) or np.any(iv > 1 + 1e-12) or np.any(iv[:, 0] > iv[:, 1] + 1e-12):
            raise ValueError("intervals must satisfy 0 <= lo <= hi <= 1")
        iv = iv.copy()
        iv.setflags(write=False)
        object.__setattr__(self, "intervals", iv)

    @property
    def k(self) -> int:
        return int(self.intervals.shape[0])

    @property
    def lo(self) -> np.ndarray:
        return self.intervals[:, 0]

    @property
    def hi(self) -> np.ndarray:
        return self.intervals[:, 1]


@dataclass(frozen=True)
class SplitCheck:
    """Evaluation of the two volume-dominance conditions at a split c,
    in the log-difference form (both must be <= 0)."""

    c: float
    cond_a: float
    cond_b: float
    feasible: bool


# rational minimax approximation of the standard normal quantile
# (Wichura's PPND16), absolute error well below 1e-9
_A = (3.3871328727963666080e0, 1.3314166789178437745e2,
      1.9715909503065514427e3, 1.3731693765509461125e4,
      4.5921953931549871457e4, 6.7265770927008700853e4,
      3.3430575583588128105e4, 2.5090809287301226727e3)
_B = (1.0, 4.2313330701600911252e1, 6.8718700749205790830e2,
      5.3941960214247511077e3, 2.1213794301586595867e4,
      3.9307895800092710610e4, 2.8729085735721942674e4,
      5.2264952788528545610e3)
_C = (1.42343711074968357734e0, 4.63033784615654529590e0,
      5.76949722146069140550e0, 3.64784832476320460504e0,
      1.27045825245236838258e0, 2.41780725177450611770e-1,
      2.27238449892691845833e-2, 7.74545014278341407640e-4)
_D = (1.0, 2.05319162663775882187e0, 1.67638483018380384940e0,
      6.89767334985100004550e-1, 1.48103976427480074590e-1,
      1.51986665636164571966e-2, 5.47593808499534494600e-4,
      1.05075007164441684324e-9)
_E = (6.65790464350110377720e0, 5.46378491116411436990e0,
      1.78482653991729133580e0, 2.96560571828504891230e-1,
      2.65321895265761230930e-2, 1.24266094738807843860e-3,
      2.71155556874348757815e-5, 2.01033439929228813265e-7)
_F = (1.0, 5.99832206555887937690e-1, 1.36929880922735805310e-1,
      1.48753612908506148525e-2, 7.86869131145613259100e-4,
      1.84631831751005468180e-5, 1.42151175831644588870e-7,
      2.04426310338993978564e-15)


def _poly(coeffs, x: float) -> float:
    acc = 0.0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def normal_quantile(p: float) -> float:
    """Inverse standard normal CDF on (0, 1)."""
    if not 0.0 < p < 1.0:
        raise ValueError("p must be in (0, 1)")
    q = p - 0.5
    if abs(q) <= 0.425:
        r = 0.180625 - q * q
        return q * _poly(_A, r) / _poly(_B, r)
    r = p if q < 0 else 1.0 - p
    r = math.sqrt(-math.log(r))
    if r <= 5.0:
        r -= 1.6
        val = _poly(_C, r) / _poly(_D, r)
    else:
        r -= 5.0
        val = _poly(_E, r) / _poly(_F, r)
    return -val if q < 0 else val


def wald_ci(i: int, n: int, level: float) -> tuple[float, float]:
    """Normal-approximation binomial interval for i successes out of n,
    clipped to [0, 1]."""
    if not 0 <= i <= n:
        raise ValueError("need 0 <= i <= n")
    if not 0 < level < 1:
        raise ValueError("level must be in (0, 1)")
    z = normal_quantile(0.5 * (1.0 + level))
    phat = i / n
    half = z * math.sqrt(phat * (1.0 - phat) / n)
    return max(0.0, phat - half), min(1.0, phat + half)


def clopper_pearson_ci(i: int, n: int, level: float) -> tuple[float, float]:
    """Exact equal-tailed binomial interval (beta quantiles)."""
    if not 0 <= i <= n:
        raise ValueError("need 0 <= i <= n")
    if not 0 < level < 1:
        raise ValueError("level must be in (0, 1)")
    from scipy.stats import beta

    tail = 0.5 * (1.0 - level)
    lo = float(beta.ppf(tail, i, n - i + 1)) if i > 0 else 0.0
    hi = float(beta.ppf(1.0 - tail, i + 1, n - i)) if i < n else 1.0
    return lo, hi


def _unobserved_upper(n: int, alpha2: float, k: int | None = None,
                      bounded: bool = False) -> float:
    if alpha2 <= 0.0:
        return 1.0  # vacuous interval when no budget is left for the unseen
    if bounded and k is not None:
        return ci_bounded(CiConfig(n, alpha2, k)).upper
    return ci_unbounded(CiConfig(n, alpha2)).upper


def split_check(n: int, k: int, alpha: float, c: float, *,
                form: str = "log") -> SplitCheck:
    """Evaluate the two dominance conditions for a budget split c.

    ``form="log"`` compares log interval lengths and log z-values (the
    quantity the expected-log-volume bound actually controls); ``raw``
    compares plain differences.  c = 1 leaves no budget for observed
    symbols and is infeasible by convention.
    """
    if not 0.0 <= c <= 1.0:
        raise ValueError("c must be in [0, 1]")
    if form not in ("log", "raw"):
        raise ValueError("form must be 'log' or 'raw'")
    if c >= 1.0:
        return SplitCheck(c=c, cond_a=math.inf, cond_b=math.inf, feasible=False)
    alpha1 = alpha * (1.0 - c)
    a_ours = _unobserved_upper(n, alpha * c)
    a_bc = rot_bonferroni(n, k, alpha)
    z0 = normal_quantile(1.0 - alpha / (2.0 * k))
    zc = normal_quantile(1.0 - alpha1 / (2.0 * min(n, k)))
    if form == "log":
        da = math.log(a_ours) - math.log(a_bc)
        dz = math.log(zc) - math.log(z0)
    else:
        da = a_ours - a_bc
        dz = zc - z0
    unseen_weight = k * (1.0 - 1.0 / k) ** n  # expected unseen count, uniform extreme
    cond_a = unseen_weight * da + (k - unseen_weight) * dz
    cond_b = (k - 1.0) * da + dz
    return SplitCheck(c=c, cond_a=cond_a, cond_b=cond_b,
                      feasible=cond_a <= 0.0 and cond_b <= 0.0)


def choose_c(n: int, k: int, alpha: float) -> float | None:
    """Largest budget split on the grid {0.001, ..., 0.999} passing both
    dominance conditions, or None when no split is feasible."""
    for c in reversed(_C_GRID):
        if split_check(n, k, alpha, c).feasible:
            return c
    return None


def _wald_bounds_dense(counts: np.ndarray, n: int, z: float,
                       unobs_hi: float) -> np.ndarray:
    phat = counts / n
    half = z * np.sqrt(phat * (1.0 - phat) / n)
    lo = np.clip(phat - half, 0.0, 1.0)
    hi = np.clip(phat + half, 0.0, 1.0)
    unseen = counts == 0
    lo[unseen] = 0.0
    hi[unseen] = unobs_hi
    return np.column_stack([lo, hi])


def _exact_bounds_dense(counts: np.ndarray, n: int, level: float,
                        unobs_hi: float) -> np.ndarray:
    iv = np.empty((counts.size, 2))
    for value in np.unique(counts):
        mask = counts == value
        if value == 0:
            iv[mask] = (0.0, unobs_hi)
        else:
            iv[mask] = clopper_pearson_ci(int(value), n, level)
    return iv


def build_region(counts: SampleCounts, k: int, alpha: float, c: float, *,
                 binomial: str = "wald",
                 unobserved: str = "unbounded") -> ConfidenceRegion:
    """Simultaneous intervals for all k symbols from one sample.

    Observed symbols get binomial intervals at level
    1 - alpha(1-c)/min(n, k); unobserved symbols share [0, A] where A is
    the unseen-event bound at level 1 - alpha*c (``unobserved="bounded"``
    uses the known-alphabet bound instead).
    """
    if not 0.0 <= c <= 1.0 or not math.isfinite(c):
        raise ValueError("c must be a finite value in [0, 1]")
    if binomial not in ("wald", "exact"):
        raise ValueError("binomial must be 'wald' or 'exact'")
    if unobserved not in ("unbounded", "bounded"):
        raise ValueError("unobserved must be 'unbounded' or 'bounded'")
    dense = counts.dense(k)
    n = counts.n
    alpha1 = alpha * (1.0 - c)
    level = 1.0 - alpha1 / min(n, k)
    a_hi = _unobserved_upper(n, alpha * c, k, bounded=(unobserved == "bounded"))
    if binomial == "wald":
        z = normal_quantile(1.0 - alpha1 / (2.0 * min(n, k)))
        iv = _wald_bounds_dense(dense, n, z, a_hi)
    else:
        iv = _exact_bounds_dense(dense, n, level, a_hi)
    return ConfidenceRegion(intervals=iv, c=c, alpha=alpha, method="ours")


def build_region_bonferroni(counts: SampleCounts, k: int, alpha: float, *,
                            binomial: str = "wald") -> ConfidenceRegion:
    """Baseline region: per-symbol binomial intervals at level 1 - alpha/k,
    with the corrected rule-of-three for unobserved symbols."""
    if binomial not in ("wald", "exact"):
        raise ValueError("binomial must be 'wald' or 'exact'")
    dense = counts.dense(k)
    n = counts.n
    a_hi = rot_bonferroni(n, k, alpha)
    if binomial == "wald":
        z = normal_quantile(1.0 - alpha / (2.0 * k))
        iv = _wald_bounds_dense(dense, n, z, a_hi)
    else:
        iv = _exact_bounds_dense(dense, n, 1.0 - alpha / k, a_hi)
    return ConfidenceRegion(intervals=iv, c=0.0, alpha=alpha, method="bonferroni")


def log_volume(region: ConfidenceRegion) -> float:
    """Sum of log interval lengths; zero-length intervals are floored at
    1e-300 here (but reported unfloored in the region itself)."""
    lengths = region.hi - region.lo
    return float(np.log(np.maximum(lengths, _LOG_FLOOR)).sum())


def region_covers(region: ConfidenceRegion, p: Pmf) -> bool:
    """True iff every true mass lies inside its interval."""
    if p.k != region.k:
        raise ValueError("distribution and region have different alphabets")
    return bool(np.all((p.probs >= region.lo) & (p.probs <= region.hi)))


REGION_HEADER = ["symbol", "count", "lo", "hi"]


def region_rows(region: ConfidenceRegion, counts: SampleCounts,
                labels: tuple[str, ...] | None = None) -> list[tuple]:
    dense = counts.dense(region.k)
    names = labels if labels is not None else range(region.k)
    return [(names[j], int(dense[j]), float(region.lo[j]), float(region.hi[j]))
            for j in range(region.k)]


def _replicated_regions(pmf: Pmf, n: int, k: int, alpha: float,
                        c: float | None, reps: int, seed: int,
                        workers: int = 1) -> tuple[np.ndarray, ...]:
    """Per-replicate log-volumes and coverage for both region methods,
    sharing the same samples."""
    cdf = np.cumsum(pmf.probs)
    z_bc = normal_quantile(1.0 - alpha / (2.0 * k))
    a_bc = rot_bonferroni(n, k, alpha)
    if c is not None:
        alpha1 = alpha * (1.0 - c)
        z_ours = normal_quantile(1.0 - alpha1 / (2.0 * min(n, k)))
        a_ours = _unobserved_upper(n, alpha * c)
    lv_ours = np.empty(reps)
    lv_bc = np.empty(reps)
    cov_ours = np.empty(reps, dtype=bool)
    cov_bc = np.empty(reps, dtype=bool)

    def one(i: int) -> None:
        rng = replicate_rng(seed, i)
        draws = np.searchsorted(cdf, rng.random(n), side="right")
        np.clip(draws, 0, k - 1, out=draws)
        dense = np.bincount(draws, minlength=k)
        iv_bc = _wald_bounds_dense(dense, n, z_bc, a_bc)
        lv_bc[i] = np.log(np.maximum(iv_bc[:, 1] - iv_bc[:, 0], _LOG_FLOOR)).sum()
        cov_bc[i] = np.all((pmf.probs >= iv_bc[:, 0]) & (pmf.probs <= iv_bc[:, 1]))
        if c is None:
            lv_ours[i] = lv_bc[i]
            cov_ours[i] = cov_bc[i]
        else:
            iv = _wald_bounds_dense(dense, n, z_ours, a_ours)
            lv_ours[i] = np.log(np.maximum(iv[:, 1] - iv[:, 0], _LOG_FLOOR)).sum()
            cov_ours[i] = np.all((pmf.probs >= iv[:, 0]) & (pmf.probs <= iv[:, 1]))

    def run(lo: int, hi: int) -> None:
        for i in range(lo, hi):
            one(i)

    if workers <= 1:
        run(0, reps)
    else:
        chunk = -(-reps // workers)
        spans = [(s, min(s + chunk, reps)) for s in range(0, reps, chunk)]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(lambda sp: run(*sp), spans))
    return lv_ours, lv_bc, cov_ours, cov_bc


FIG3_HEADER = ["dist", "k", "n", "alpha", "c", "reps", "seed",
               "mean_logvol_ours", "mean_logvol_bonferroni",
               "coverage_ours", "coverage_bonferroni"]


def run_fig3(dists, k_grid, n: int, alpha: float, reps: int, seed: int,
             workers: int = 1) -> tuple[list[str], list[tuple]]:
    """Mean log-volume and empirical coverage of both region methods as
    the alphabet grows, at the largest feasible budget split per point."""
    from .simulate import benchmark_pmf

    rows = []
    for di, dist in enumerate(dists):
        for k in k_grid:
            pmf = benchmark_pmf(dist, k, n, alpha)
            kk = len(pmf)
            c = choose_c(n, kk, alpha)
            lv_o, lv_b, cov_o, cov_b = _replicated_regions(
                pmf, n, kk, alpha, c, reps, mix_seed(seed, di, k), workers)
            rows.append((dist, kk, n, alpha, c if c is not None else "", reps, seed,
                         float(lv_o.mean()), float(lv_b.mean()),
                         float(cov_o.mean()), float(cov_b.mean())))
    return FIG3_HEADER, rows


FIG4_HEADER = ["dist", "k", "c", "feasible", "n", "alpha", "reps", "seed",
               "mean_logvol_ours", "mean_logvol_bonferroni"]


def run_fig4(dists, k_grid, c_grid, n: int, alpha: float, reps: int,
             seed: int, workers: int = 1) -> tuple[list[str], list[tuple]]:
    """Sensitivity of the region volume to the budget split c."""
    from .simulate import benchmark_pmf

    rows = []
    for di, dist in enumerate(dists):
        for k in k_grid:
            pmf = benchmark_pmf(dist, k, n, alpha)
            kk = len(pmf)
            for c in c_grid:
                ok = split_check(n, kk, alpha, c).feasible
                lv_o, lv_b, _, _ = _replicated_regions(
                    pmf, n, kk, alpha, c, reps, mix_seed(seed, di, k), workers)
                rows.append((dist, kk, c, int(ok), n, alpha, reps, seed,
                             float(lv_o.mean()), float(lv_b.mean())))
    return FIG4_HEADER, rows
