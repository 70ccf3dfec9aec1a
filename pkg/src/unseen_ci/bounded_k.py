"""Worst-case expectation of the r-th-power missing-mass sum over a known
alphabet size, and the resulting confidence interval.

The per-symbol summand h(t) = t^r (1-t)^n is convex on [0, t1], concave on
[t1, t2] and convex again on [t2, 1].  A maximizer over the k-simplex
therefore gives every symbol in the concave band the same mass q, places at
most one symbol in each convex region (mass a below t1, mass b above t2),
and zeroes the rest.  That reduces the k-dimensional problem to an
enumeration over the number j of shared-mass symbols with a one- or
two-variable search for each configuration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .rnorm_ci import CiConfig, RGrid, UpperCi, _minimize_over_r
from .utils import grid_golden_max

_EPS = 1e-12
# exhaustive configuration sweep below this many shared-mass symbols;
# above it, a pivot window plus integer hill climbing
_EXHAUSTIVE_J = 48


@dataclass(frozen=True)
class ConcavityBounds:
    """Interior critical point and inflection points of t^r (1-t)^n,
    clamped into [0, 1]."""

    t_star: float
    t1: float
    t2: float


@dataclass(frozen=True)
class StructuredMaximizer:
    """Witness of the structured worst case.

    ``a`` is the mass of the at-most-one low-convex-region symbol (0 when
    absent), ``b`` the high-convex-region counterpart, ``q`` the shared
    mass of the ``j`` concave-band symbols (stored as 0 when j = 0), and
    ``zeros`` the count of zero-mass symbols padding the alphabet.
    """

    a: float
    b: float
    q: float
    j: int
    zeros: int


def concavity_bounds(r: float, n: int) -> ConcavityBounds:
    """t* = r/(r+n) and t* +- sqrt(r n / (r+n-1)) / (r+n), clamped to [0,1]."""
    if r < 1:
        raise ValueError("r must be >= 1")
    if int(n) != n or n < 1:
        raise ValueError("n must be a positive integer")
    if r + n - 1 <= 0:
        raise ValueError("need r + n > 1")
    t_star = r / (r + n)
    spread = math.sqrt(r * n / (r + n - 1.0)) / (r + n)
    t1 = min(max(t_star - spread, 0.0), 1.0)
    t2 = min(max(t_star + spread, 0.0), 1.0)
    return ConcavityBounds(t_star=t_star, t1=t1, t2=t2)


def _summand(r: float, n: int):
    def h(t: float) -> float:
        if t <= 0.0 or t >= 1.0:
            return 0.0
        return math.exp(r * math.log(t) + n * math.log1p(-t))

    return h


def _uniform_best(r: float, n: int, k: int, t1: float, t2: float):
    """Best all-equal configuration, scanned in closed form over all
    feasible symbol counts."""
    if t2 <= 0.0:
        return None
    jlo = max(1, math.ceil(1.0 / t2 - 1e-9))
    jhi = k if t1 <= 0.0 else min(k, math.floor(1.0 / t1 + 1e-9))
    if jhi < jlo:
        return None
    jv = np.arange(jlo, jhi + 1, dtype=float)
    q = 1.0 / jv
    with np.errstate(divide="ignore"):
        vals = jv * np.exp(r * np.log(q) + n * np.log1p(-q))
    i = int(np.argmax(vals))
    return float(vals[i]), int(jv[i]), 0.0, 0.0


def _single_low_high(j: int, k: int, t1: float, t2: float, h):
    """One-variable configurations at a given j: a single symbol in the
    low or the high convex region, remainder shared equally."""
    out = []
    if j > k - 1:
        return out
    lo = max(0.0, 1.0 - j * t2)
    hi = min(t1, 1.0 - j * t1)
    if hi >= lo:
        res = grid_golden_max(lambda a: h(a) + j * h((1.0 - a) / j), lo, hi, coarse=17)
        if res is not None:
            out.append((res[1], j, res[0], 0.0))
    b_floor = t2 * (1.0 + _EPS) + 1e-300
    lo = max(b_floor, 1.0 - j * t2)
    hi = min(1.0, 1.0 - j * t1)
    if hi >= lo:
        res = grid_golden_max(lambda b: h(b) + j * h((1.0 - b) / j), lo, hi, coarse=17)
        if res is not None:
            out.append((res[1], j, 0.0, res[0]))
    return out


def _low_and_high(j: int, k: int, t1: float, t2: float, h):
    """Two-variable configuration: one symbol in each convex region."""
    if j > k - 2 or t2 >= 1.0:
        return None
    b_floor = t2 * (1.0 + _EPS) + 1e-300

    def inner(a: float):
        blo = max(b_floor, 1.0 - a - j * t2)
        bhi = min(1.0, 1.0 - a - j * t1)
        if bhi < blo:
            return None
        return grid_golden_max(
            lambda b: h(a) + h(b) + j * h((1.0 - a - b) / j), blo, bhi, coarse=9)

    a_hi = min(t1, 1.0 - b_floor - j * t1)
    if a_hi < 0.0:
        return None
    probe = grid_golden_max(lambda a: (inner(a) or (0.0, -1.0))[1], 0.0, a_hi, coarse=9)
    if probe is None or probe[1] < 0.0:
        return None
    res = inner(probe[0])
    if res is None:
        return None
    return (res[1], j, probe[0], res[0])


def e_r_bounded(r: float, n: int, k: int) -> tuple[float, StructuredMaximizer]:
    """Maximum of sum_u p(u)^r (1-p(u))^n over distributions on k symbols,
    with the structured witness that attains it.

    Configurations are enumerated over j (the shared-mass symbol count) and
    the presence of the two convex-region singletons; each is solved by a
    coarse scan plus golden-section refinement.  For large feasible j
    ranges the enumeration samples pivot windows and hill-climbs in j.
    Structurally different ties resolve to the smallest j.
    """
    if r < 1:
        raise ValueError("r must be >= 1")
    if int(n) != n or n < 1:
        raise ValueError("n must be a positive integer")
    if int(k) != k or k < 1:
        raise ValueError("k must be a positive integer")
    cb = concavity_bounds(r, n)
    t1, t2 = cb.t1, cb.t2
    h = _summand(r, n)

    candidates: list[tuple[float, int, float, float]] = []  # (value, j, a, b)
    # degenerate fallback: everything on one symbol, worth exactly 0
    if t2 >= 1.0:
        candidates.append((0.0, 1, 0.0, 0.0))  # q = 1 sits in the concave band
    else:
        candidates.append((0.0, 0, 0.0, 1.0))
    # one symbol in each convex region, none shared
    if k >= 2 and t2 < 1.0:
        a_hi = min(t1, 1.0 - t2 * (1.0 + _EPS) - 1e-300)
        if a_hi >= 0.0:
            res = grid_golden_max(lambda a: h(a) + h(1.0 - a), 0.0, a_hi, coarse=17)
            if res is not None:
                candidates.append((res[1], 0, res[0], 1.0 - res[0]))

    uni = _uniform_best(r, n, k, t1, t2)
    if uni is not None:
        candidates.append(uni)

    jmax = k if t1 <= 0.0 else min(k, int(1.0 / t1) + 1)
    jmax = max(jmax, 1)
    if jmax <= _EXHAUSTIVE_J:
        js = list(range(1, jmax + 1))
    else:
        pivots = set(range(1, 9)) | set(range(jmax - 2, jmax + 1))
        if r > 1:
            q_star = (r - 1.0) / (r - 1.0 + n)
            pivots |= set(range(int(1.0 / q_star) - 4, int(1.0 / q_star) + 6))
        if t2 > 0:
            pivots |= set(range(int(1.0 / t2) - 4, int(1.0 / t2) + 6))
        pivots |= {int(round(x)) for x in np.geomspace(1, jmax, 33)}
        js = sorted(j for j in pivots if 1 <= j <= jmax)

    seen = set(js)
    for j in js:
        candidates.extend(_single_low_high(j, k, t1, t2, h))

    def best_entry():
        return max(candidates, key=lambda c: (c[0], -c[1]))

    if jmax > _EXHAUSTIVE_J:
        # integer hill climb around the incumbent j
        for _ in range(80):
            top = best_entry()
            grew = False
            for j in (top[1] - 1, top[1] + 1):
                if 1 <= j <= jmax and j not in seen:
                    seen.add(j)
                    candidates.extend(_single_low_high(j, k, t1, t2, h))
                    grew = True
            if not grew:
                break

    top_j = best_entry()[1]
    js_both = sorted({j for j in seen if j <= 6}
                     | ({top_j - 1, top_j, top_j + 1} & seen))
    for j in js_both:
        res = _low_and_high(j, k, t1, t2, h)
        if res is not None:
            candidates.append(res)

    value, j, a, b = best_entry()
    q = (1.0 - a - b) / j if j > 0 else 0.0
    if j > 0:
        q = min(max(q, t1), t2)
    zeros = k - j - (1 if a > 0 else 0) - (1 if b > 0 else 0)
    return float(value), StructuredMaximizer(a=a, b=b, q=q, j=j, zeros=zeros)


def ci_bounded(cfg: CiConfig, grid: RGrid = RGrid()) -> UpperCi:
    """One-sided CI for the largest missing probability when the alphabet
    size is known; coincides with the unbounded interval once the alphabet
    comfortably exceeds the worst-case support."""
    if cfg.k is None:
        raise ValueError("cfg.k is required for the bounded interval")
    if cfg.k == 1:
        # the single symbol always appears, so nothing is ever missing
        return UpperCi(upper=0.0, r_star=1.0, e_value=0.0, method="bounded")

    def ln_e(r: float) -> float:
        v = e_r_bounded(r, cfg.n, cfg.k)[0]
        return math.log(v) if v > 0.0 else -math.inf

    r_star, _ = _minimize_over_r(ln_e, cfg.n, cfg.alpha, grid)
    e_val = e_r_bounded(r_star, cfg.n, cfg.k)[0]
    upper = min(1.0, (e_val / cfg.alpha) ** (1.0 / r_star))
    return UpperCi(upper=upper, r_star=r_star, e_value=e_val, method="bounded")
