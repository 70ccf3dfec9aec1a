"""Monte Carlo verification: the missing-probability statistics, coverage
estimation against fixed thresholds, oracle quantiles, and the synthetic /
count-data experiment sweeps.

Replicate i of a run draws its sample from an independent generator keyed
by a 64-bit hash of (seed, i), so results are identical for any worker
count and any partition of the replicate range.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .bounded_k import ci_bounded
from .distributions import (Pmf, SampleCounts, from_counts, make_beta_binomial,
                            make_geometric, make_negative_binomial, make_uniform,
                            make_zipf)
from .rnorm_ci import CiConfig, ci_unbounded, rot_bonferroni
from .utils import mix_seed, replicate_rng
from .worstcase import worst_case_pmf

BENCHMARKS = ("zipf", "geometric", "negbin", "betabin", "uniform", "worstcase")


@dataclass(frozen=True)
class SimulationReport:
    """Outcome of estimating P(statistic >= threshold) over many samples."""

    reps: int
    non_coverage: int
    coverage_rate: float
    mean_m_max: float
    quantile_1_minus_alpha: float
    seed: int
    threshold: float


def m_max(p: Pmf, counts: SampleCounts) -> float:
    """Largest true mass among symbols absent from the sample."""
    observed = counts.dense(p.k) > 0
    missing = p.probs[~observed]
    return float(missing.max()) if missing.size else 0.0


def m_r(p: Pmf, counts: SampleCounts, r: float) -> float:
    """Sum of r-th powers of the missing masses; its 1/r-th root shrinks
    toward the largest missing mass as r grows."""
    if r < 1:
        raise ValueError("r must be >= 1")
    observed = counts.dense(p.k) > 0
    missing = p.probs[~observed]
    missing = missing[missing > 0]
    if not missing.size:
        return 0.0
    return float(np.exp(r * np.log(missing)).sum())


def _mmax_one(cdf: np.ndarray, psorted: np.ndarray, n: int, rng) -> float:
    k = psorted.size
    draws = np.searchsorted(cdf, rng.random(n), side="right")
    np.clip(draws, 0, k - 1, out=draws)
    bound = n + 1
    present = np.zeros(bound + 2, dtype=bool)
    present[np.minimum(draws, bound + 1)] = True
    first_missing = int(np.argmin(present[: bound + 1]))
    if first_missing >= k:
        return 0.0
    return float(psorted[first_missing])


def mmax_replicates(p: Pmf, n: int, reps: int, seed: int,
                    workers: int = 1) -> np.ndarray:
    """Largest-missing-mass values for ``reps`` independent n-samples.

    Masses are pre-sorted descending so each replicate only needs the first
    unobserved rank.  Output is indexed by replicate and independent of
    ``workers``.
    """
    if reps < 1:
        raise ValueError("reps must be >= 1")
    order = np.argsort(-p.probs, kind="stable")
    psorted = p.probs[order]
    cdf = np.cumsum(psorted)
    out = np.empty(reps, dtype=float)

    def run(lo: int, hi: int) -> None:
        for i in range(lo, hi):
            out[i] = _mmax_one(cdf, psorted, n, replicate_rng(seed, i))

    if workers <= 1:
        run(0, reps)
    else:
        chunk = -(-reps // workers)
        spans = [(s, min(s + chunk, reps)) for s in range(0, reps, chunk)]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(lambda sp: run(*sp), spans))
    return out


def _upper_quantile(values: np.ndarray, alpha: float) -> float:
    """Smallest observed value whose upper tail frequency is within alpha;
    the largest observed value if none qualifies."""
    vs = np.sort(values)
    uniq = np.unique(vs)
    count_ge = vs.size - np.searchsorted(vs, uniq, side="left")
    ok = count_ge <= alpha * vs.size
    if np.any(ok):
        return float(uniq[int(np.argmax(ok))])
    return float(vs[-1])


def coverage(p: Pmf, cfg: CiConfig, threshold: float, reps: int, seed: int,
             workers: int = 1) -> SimulationReport:
    """Estimate how often the largest missing mass reaches ``threshold``
    over ``reps`` independent samples of size cfg.n from p."""
    if not 0 <= threshold <= 1:
        raise ValueError("threshold must be in [0, 1]")
    values = mmax_replicates(p, cfg.n, reps, seed, workers)
    non_cov = int(np.sum(values >= threshold))
    return SimulationReport(
        reps=reps,
        non_coverage=non_cov,
        coverage_rate=1.0 - non_cov / reps,
        mean_m_max=float(values.mean()),
        quantile_1_minus_alpha=_upper_quantile(values, cfg.alpha),
        seed=seed,
        threshold=float(threshold),
    )


def oracle_quantile(p: Pmf, cfg: CiConfig, reps: int, seed: int,
                    workers: int = 1) -> float:
    """Best achievable constant bound when p is known: the conservative
    empirical upper quantile of the largest missing mass.

    For uniform p this is available exactly: the statistic is either 0 or
    1/k, so the answer is 1/k (or 0 for a single-symbol alphabet, which is
    always fully observed).
    """
    probs = p.probs
    if np.all(np.abs(probs - probs[0]) <= 1e-12):
        return 0.0 if p.k == 1 else 1.0 / p.k
    values = mmax_replicates(p, cfg.n, reps, seed, workers)
    return _upper_quantile(values, cfg.alpha)


def benchmark_pmf(name: str, k: int, n: int, alpha: float,
                  params: dict | None = None,
                  counts_rows: list | None = None) -> Pmf:
    """The six synthetic benchmark families plus empirical count data."""
    params = params or {}
    if name == "zipf":
        return make_zipf(k, params.get("s", 1.01))
    if name == "geometric":
        return make_geometric(k, params.get("a", 0.4))
    if name == "negbin":
        return make_negative_binomial(k, params.get("l", 1), params.get("r", 0.003))
    if name == "betabin":
        return make_beta_binomial(k, params.get("a", 2.0), params.get("b", 2.0))
    if name == "uniform":
        return make_uniform(k)
    if name == "worstcase":
        return worst_case_pmf(n, alpha)
    if name == "file":
        if not counts_rows:
            raise ValueError("dist 'file' needs count rows")
        return from_counts(counts_rows)
    raise ValueError(f"unknown distribution {name!r}")


FIG1_HEADER = ["dist", "k", "alphabet", "n", "alpha", "reps", "seed",
               "rot", "bounded", "unbounded", "oracle"]


def run_fig1(dists, n: int, alpha: float, k_grid, reps: int, seed: int,
             workers: int = 1) -> tuple[list[str], list[tuple]]:
    """Interval lengths versus alphabet size for the synthetic benchmarks:
    multiplicity-corrected rule-of-three, the bounded- and unbounded-
    alphabet intervals, and the known-distribution oracle."""
    unbounded = {}
    bounded_cache: dict[int, float] = {}
    rows = []
    for di, dist in enumerate(dists):
        for k in k_grid:
            pmf = benchmark_pmf(dist, k, n, alpha)
            alphabet = k if dist == "worstcase" else len(pmf)
            if not unbounded:
                unbounded["u"] = ci_unbounded(CiConfig(n, alpha)).upper
            if alphabet not in bounded_cache:
                bounded_cache[alphabet] = ci_bounded(CiConfig(n, alpha, alphabet)).upper
            oracle = oracle_quantile(pmf, CiConfig(n, alpha), reps,
                                     mix_seed(seed, di, k), workers)
            rows.append((dist, k, alphabet, n, alpha, reps, seed,
                         rot_bonferroni(n, alphabet, alpha),
                         bounded_cache[alphabet], unbounded["u"], oracle))
    return FIG1_HEADER, rows


FIG2_HEADER = ["n", "k", "alpha", "reps", "seed", "rot", "unbounded",
               "noncov_rot", "noncov_unbounded"]


def run_fig2(counts_rows, n_grid, alpha: float, reps: int, seed: int,
             workers: int = 1) -> tuple[list[str], list[tuple]]:
    """Count-data sweep: empirical distribution from a label,count table,
    proposed unbounded interval versus the corrected rule-of-three, with
    paired non-coverage estimates against the full-data frequencies."""
    pmf = from_counts(counts_rows)
    k = len(pmf)
    rows = []
    for ni, n in enumerate(n_grid):
        rot = rot_bonferroni(n, k, alpha)
        unb = ci_unbounded(CiConfig(n, alpha)).upper
        values = mmax_replicates(pmf, n, reps, mix_seed(seed, ni), workers)
        rows.append((n, k, alpha, reps, seed, rot, unb,
                     float(np.mean(values >= rot)),
                     float(np.mean(values >= unb))))
    return FIG2_HEADER, rows


COVERAGE_HEADER = ["dist", "k", "alphabet", "n", "alpha", "reps", "seed",
                   "threshold_unbounded", "noncov_unbounded",
                   "threshold_bounded", "noncov_bounded",
                   "mean_m_max", "quantile"]


def run_coverage_suite(n: int, alpha: float, k: int, reps: int, seed: int,
                       workers: int = 1) -> tuple[list[str], list[tuple]]:
    """Empirical non-coverage of the proposed intervals on every benchmark
    family; the worst-case family runs at its own hardest alphabet size."""
    unb = ci_unbounded(CiConfig(n, alpha)).upper
    bounded_cache: dict[int, float] = {}
    rows = []
    for di, dist in enumerate(BENCHMARKS):
        pmf = benchmark_pmf(dist, k, n, alpha)
        alphabet = len(pmf)
        if alphabet not in bounded_cache:
            bounded_cache[alphabet] = ci_bounded(CiConfig(n, alpha, alphabet)).upper
        bnd = bounded_cache[alphabet]
        values = mmax_replicates(pmf, n, reps, mix_seed(seed, di), workers)
        rows.append((dist, k, alphabet, n, alpha, reps, seed,
                     unb, float(np.mean(values >= unb)),
                     bnd, float(np.mean(values >= bnd)),
                     float(values.mean()), _upper_quantile(values, alpha)))
    return COVERAGE_HEADER, rows


TIGHTNESS_HEADER = ["n", "alpha", "m_alpha", "exceedance_at_m",
                    "exceedance_at_m_plus_1", "ci_upper", "r_star",
                    "threshold", "mc_noncoverage", "mc_se", "reps", "seed"]


def run_tightness(n: int, alpha: float, reps: int, seed: int,
                  workers: int = 1) -> tuple[list[str], list[tuple]]:
    """Worst-case tightness check: the hardest uniform distribution, its
    exact exceedance at the quantile 1/m_alpha, the Monte Carlo estimate of
    the same quantity, and the proposed interval that must sit above it."""
    from .worstcase import find_m_alpha

    wc = find_m_alpha(n, alpha)
    ci = ci_unbounded(CiConfig(n, alpha))
    pmf = make_uniform(wc.m_alpha)
    thr = 1.0 / wc.m_alpha
    values = mmax_replicates(pmf, n, reps, mix_seed(seed, 0), workers)
    noncov = float(np.mean(values >= thr))
    se = math.sqrt(max(noncov * (1 - noncov), 1e-12) / reps)
    row = (n, alpha, wc.m_alpha, wc.exceedance_at_m, wc.exceedance_at_m_plus_1,
           ci.upper, ci.r_star, thr, noncov, se, reps, seed)
    return TIGHTNESS_HEADER, [row]
