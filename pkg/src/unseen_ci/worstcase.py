"""Exact occupancy probabilities for uniform distributions and the
worst-case alphabet size.

For a uniform distribution over m symbols, the largest missing probability
is 1/m exactly when some symbol is unseen, so its exceedance probability is
one minus the probability that n balls occupy all m bins.  The largest m
whose exceedance stays within the error budget defines the hardest uniform
distribution to cover; no constant interval below 1/m_alpha can be valid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.special import gammaln

from .distributions import Pmf, make_uniform

# above this work bound the exact big-integer cross-check is skipped
_EXACT_WORK_LIMIT = 90_000


@dataclass(frozen=True)
class WorstCaseResult:
    m_alpha: int
    exceedance_at_m: float
    exceedance_at_m_plus_1: float


def _exceedance_exact(n: int, m: int) -> Fraction:
    """1 - m! S(n, m) / m^n by integer inclusion-exclusion over surjections."""
    onto = sum((-1) ** j * math.comb(m, j) * (m - j) ** n for j in range(m + 1))
    return 1 - Fraction(onto, m ** n)


def exceedance_uniform(n: int, m: int) -> float:
    """P(largest missing probability >= 1/m) for n draws from uniform(m).

    Evaluated as 1 - sum_j (-1)^j C(m,j) (1-j/m)^n with log-space terms and
    compensated summation in descending magnitude order; returns 1 exactly
    for n < m (no surjection exists) and is clamped to [0, 1].  For small
    problems the float result is verified against exact integer arithmetic.
    """
    if int(n) != n or n < 1:
        raise ValueError("n must be a positive integer")
    if int(m) != m or m < 1:
        raise ValueError("m must be a positive integer")
    if n < m:
        return 1.0
    j = np.arange(m, dtype=float)  # the j = m term vanishes since n >= 1
    ln_terms = (gammaln(m + 1) - gammaln(j + 1) - gammaln(m - j + 1)
                + n * np.log((m - j) / m))
    signs = np.where(j % 2 == 0, 1.0, -1.0)
    order = np.argsort(-ln_terms, kind="stable")
    scale = float(ln_terms[order[0]])
    terms = signs[order] * np.exp(ln_terms[order] - scale)
    onto = math.exp(scale) * math.fsum(terms.tolist())
    result = min(1.0, max(0.0, 1.0 - onto))
    if n * m <= _EXACT_WORK_LIMIT:
        exact = float(_exceedance_exact(n, m))
        if abs(result - exact) > 1e-12:
            raise ArithmeticError(
                f"float occupancy sum lost precision at n={n}, m={m}: "
                f"{result!r} vs exact {exact!r}")
    return result


def find_m_alpha(n: int, alpha: float) -> WorstCaseResult:
    """Largest m whose uniform-exceedance stays at or below alpha.

    Exponential-then-binary search exploiting monotonicity of the
    exceedance in m; the bracketing assumption is verified on the returned
    boundary and a linear scan is used as a fallback if it fails.
    """
    if not 0 < alpha < 1:
        raise ValueError("alpha must be in (0, 1)")
    if int(n) != n or n < 1:
        raise ValueError("n must be a positive integer")

    def feasible(m: int) -> bool:
        return exceedance_uniform(n, m) <= alpha

    lo = 1  # exceedance is 0 at m = 1: the single symbol is always seen
    hi = 2
    while hi <= n and feasible(hi):
        lo = hi
        hi *= 2
    hi = min(hi, n + 1)  # exceedance is 1 for every m > n
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if feasible(mid):
            lo = mid
        else:
            hi = mid
    m = lo
    boundary_ok = feasible(m) and not feasible(m + 1)
    if boundary_ok and m >= 2 and exceedance_uniform(n, m - 1) > exceedance_uniform(n, m) + 1e-12:
        boundary_ok = False
    if not boundary_ok:
        m = 1
        while m <= n and feasible(m + 1):
            m += 1
    return WorstCaseResult(m_alpha=m,
                           exceedance_at_m=exceedance_uniform(n, m),
                           exceedance_at_m_plus_1=exceedance_uniform(n, m + 1))


def worst_case_pmf(n: int, alpha: float) -> Pmf:
    """The uniform distribution over m_alpha symbols."""
    return make_uniform(find_m_alpha(n, alpha).m_alpha)
