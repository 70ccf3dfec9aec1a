"""Benchmark distributions over finite alphabets, empirical distributions
from count data, and reproducible categorical sampling.

Support conventions (symbol ids are 0-based vector indices; the generating
formulas below use their natural supports):

* power law: ranks 1..k, so ``probs[i]`` is the mass of rank ``i + 1``
* geometric: trials 1..k, truncated and renormalized
* negative binomial: failure counts 0..k-1, truncated and renormalized
* beta-binomial: successes 0..k, i.e. k+1 symbols
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np
from scipy.special import betaln, gammaln

from .utils import mix_seed

_NORM_TOL = 1e-9


@dataclass(frozen=True)
class Pmf:
    """A finite probability vector with optional symbol labels."""

    probs: np.ndarray
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=float)
        if p.ndim != 1 or p.size < 1:
            raise ValueError("probs must be a non-empty 1-D vector")
        if not np.all(np.isfinite(p)) or np.any(p < 0):
            raise ValueError("probs must be finite and nonnegative")
        if abs(float(p.sum()) - 1.0) > _NORM_TOL:
            raise ValueError(f"probs must sum to 1 within {_NORM_TOL}, got {p.sum()!r}")
        if self.labels is not None and len(self.labels) != p.size:
            raise ValueError("labels length must match probs length")
        p = p.copy()
        p.setflags(write=False)
        object.__setattr__(self, "probs", p)

    @property
    def k(self) -> int:
        return int(self.probs.size)

    def __len__(self) -> int:
        return self.k


@dataclass(frozen=True)
class SampleCounts:
    """A multiset of n draws, stored as symbol id -> positive count."""

    counts: dict[int, int]
    n: int = field(default=0)

    def __post_init__(self):
        cleaned = {int(s): int(c) for s, c in self.counts.items() if c != 0}
        if any(c < 0 for c in cleaned.values()):
            raise ValueError("counts must be nonnegative")
        total = sum(cleaned.values())
        n = self.n if self.n else total
        if total != n:
            raise ValueError(f"counts sum to {total}, expected n={n}")
        if n < 1:
            raise ValueError("need at least one observation")
        object.__setattr__(self, "counts", cleaned)
        object.__setattr__(self, "n", n)

    def dense(self, k: int) -> np.ndarray:
        """Counts as a length-k vector; raises if a symbol id is out of range."""
        out = np.zeros(k, dtype=np.int64)
        for s, c in self.counts.items():
            if not 0 <= s < k:
                raise ValueError(f"symbol id {s} outside alphabet of size {k}")
            out[s] = c
        return out


def _normalized(weights: np.ndarray, labels=None) -> Pmf:
    total = float(weights.sum())
    if not np.isfinite(total) or total <= 0:
        raise ValueError("weights must have a positive finite sum")
    return Pmf(weights / total, labels)


def make_zipf(k: int, s: float) -> Pmf:
    """Normalized power law u^-s over ranks u = 1..k."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if s < 0:
        raise ValueError("s must be >= 0")
    u = np.arange(1, k + 1, dtype=float)
    return _normalized(u ** (-s))


def make_uniform(k: int) -> Pmf:
    if k < 1:
        raise ValueError("k must be >= 1")
    return Pmf(np.full(k, 1.0 / k))


def make_geometric(k: int, a: float) -> Pmf:
    """Geometric (1-a)^(u-1) a over u = 1..k, truncated and renormalized."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if not 0 < a < 1:
        raise ValueError("a must be in (0, 1)")
    u = np.arange(1, k + 1, dtype=float)
    logw = (u - 1) * np.log1p(-a) + np.log(a)
    return _normalized(np.exp(logw - logw.max()))


def make_negative_binomial(k: int, l: int, r: float) -> Pmf:
    """Negative binomial C(u+l-1, u) r^u (1-r)^l over u = 0..k-1,
    truncated and renormalized."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if l < 1:
        raise ValueError("l must be >= 1")
    if not 0 < r < 1:
        raise ValueError("r must be in (0, 1)")
    u = np.arange(k, dtype=float)
    logw = (gammaln(u + l) - gammaln(u + 1) - gammaln(l)
            + u * np.log(r) + l * np.log1p(-r))
    return _normalized(np.exp(logw - logw.max()))


def make_beta_binomial(k: int, a: float, b: float) -> Pmf:
    """Beta-binomial C(k,u) B(u+a, k-u+b) / B(a,b) over u = 0..k.

    Note the support has k+1 symbols; callers treating ``k`` as an alphabet
    size should use ``len(pmf)``.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if a <= 0 or b <= 0:
        raise ValueError("a and b must be > 0")
    u = np.arange(k + 1, dtype=float)
    logw = (gammaln(k + 1) - gammaln(u + 1) - gammaln(k - u + 1)
            + betaln(u + a, k - u + b) - betaln(a, b))
    return _normalized(np.exp(logw - logw.max()))


def from_counts(rows: list[tuple[str, float]]) -> Pmf:
    """Empirical Pmf proportional to counts; duplicate labels are summed."""
    if not rows:
        raise ValueError("no count rows given")
    agg: dict[str, float] = {}
    for label, count in rows:
        c = float(count)
        if not np.isfinite(c) or c < 0:
            raise ValueError(f"negative or non-finite count for label {label!r}")
        agg[str(label)] = agg.get(str(label), 0.0) + c
    labels = tuple(agg.keys())
    weights = np.array([agg[x] for x in labels], dtype=float)
    if weights.sum() <= 0:
        raise ValueError("counts are all zero")
    return _normalized(weights, labels)


def read_counts_csv(path) -> list[tuple[str, float]]:
    """Read a two-column ``label,count`` CSV (UTF-8, optional header,
    blank lines ignored)."""
    rows: list[tuple[str, float]] = []
    with open(path, encoding="utf-8-sig", newline="") as fh:
        for lineno, rec in enumerate(csv.reader(fh)):
            if not rec or all(not cell.strip() for cell in rec):
                continue
            if len(rec) < 2:
                raise ValueError(f"{path}: line {lineno + 1}: expected label,count")
            label, raw = rec[0].strip(), rec[1].strip()
            try:
                count = float(raw)
            except ValueError:
                if not rows and lineno == 0:
                    continue  # header row
                raise ValueError(f"{path}: line {lineno + 1}: bad count {raw!r}")
            rows.append((label, count))
    if not rows:
        raise ValueError(f"{path}: no data rows")
    return rows


def _alias_table(probs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vose alias-table construction; O(k) setup, O(1) per draw."""
    k = probs.size
    accept = np.zeros(k, dtype=float)
    alias = np.arange(k, dtype=np.int64)
    scaled = (probs * k).tolist()
    small = [i for i in range(k) if scaled[i] < 1.0]
    large = [i for i in range(k) if scaled[i] >= 1.0]
    while small and large:
        s = small.pop()
        g = large.pop()
        accept[s] = scaled[s]
        alias[s] = g
        scaled[g] = (scaled[g] + scaled[s]) - 1.0
        if scaled[g] < 1.0:
            small.append(g)
        else:
            large.append(g)
    for q in (small, large):
        for i in q:
            accept[i] = 1.0
            alias[i] = i
    return accept, alias


def sample(p: Pmf, n: int, seed: int) -> SampleCounts:
    """Draw n independent symbols from p via the alias method.

    Deterministic given (p, n, seed); distinct seeds give independent
    streams.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.Generator(np.random.Philox(key=mix_seed(seed)))
    accept, alias = _alias_table(p.probs)
    idx = rng.integers(0, p.k, size=n)
    take = rng.random(n) < accept[idx]
    draws = np.where(take, idx, alias[idx])
    binned = np.bincount(draws, minlength=p.k)
    return SampleCounts({int(s): int(c) for s, c in enumerate(binned) if c > 0}, n)
