"""Confidence intervals for the probabilities of unobserved events.

One-sided sample-independent intervals for the largest unseen-symbol mass
(for unknown and known alphabet sizes), exact worst-case occupancy
analysis, benchmark distributions, a Monte Carlo coverage harness, and
rectangular simultaneous confidence regions over large alphabets.
"""

from .bounded_k import (ConcavityBounds, StructuredMaximizer, ci_bounded,
                        concavity_bounds, e_r_bounded)
from .distributions import (Pmf, SampleCounts, from_counts, make_beta_binomial,
                            make_geometric, make_negative_binomial, make_uniform,
                            make_zipf, read_counts_csv, sample)
from .rnorm_ci import (CiConfig, RGrid, UpperCi, ci_unbounded, e_r_unbounded,
                       exact_expectation, rot_bonferroni)
from .sci import (ConfidenceRegion, SplitCheck, build_region,
                  build_region_bonferroni, choose_c, clopper_pearson_ci,
                  log_volume, normal_quantile, region_covers, split_check,
                  wald_ci)
from .simulate import (BENCHMARKS, SimulationReport, benchmark_pmf, coverage,
                       m_max, m_r, mmax_replicates, oracle_quantile)
from .worstcase import (WorstCaseResult, exceedance_uniform, find_m_alpha,
                        worst_case_pmf)

__version__ = "0.1.0"

__all__ = [
    "BENCHMARKS", "CiConfig", "ConcavityBounds", "ConfidenceRegion", "Pmf",
    "RGrid", "SampleCounts", "SimulationReport", "SplitCheck",
    "StructuredMaximizer", "UpperCi", "WorstCaseResult", "benchmark_pmf",
    "build_region", "build_region_bonferroni", "choose_c", "ci_bounded",
    "ci_unbounded", "clopper_pearson_ci", "concavity_bounds", "coverage",
    "e_r_bounded", "e_r_unbounded", "exact_expectation", "exceedance_uniform",
    "find_m_alpha", "from_counts", "log_volume", "m_max", "m_r",
    "make_beta_binomial", "make_geometric", "make_negative_binomial",
    "make_uniform", "make_zipf", "mmax_replicates", "normal_quantile",
    "oracle_quantile", "read_counts_csv", "region_covers", "rot_bonferroni",
    "sample", "split_check", "wald_ci", "worst_case_pmf",
]
