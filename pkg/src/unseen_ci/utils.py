"""Shared numerical and plumbing helpers: 1-D golden-section search,
deterministic per-replicate seed derivation, and stable CSV formatting."""

from __future__ import annotations

import numpy as np

_INVPHI = 0.6180339887498949  # (sqrt(5) - 1) / 2

_MASK64 = (1 << 64) - 1
_GOLDEN64 = 0x9E3779B97F4A7C15


def golden_min(f, a: float, b: float, *, ftol: float = 0.0, xtol: float = 1e-13,
               max_iter: int = 240) -> tuple[float, float]:
    """Golden-section minimization of ``f`` on ``[a, b]``.

    Stops when the bracket width falls below ``xtol`` (relative to the
    bracket scale) or the spread of the two interior values falls below
    ``ftol``.  Returns ``(x, f(x))`` at the better interior point.
    """
    if b < a:
        a, b = b, a
    if b - a <= xtol:
        x = 0.5 * (a + b)
        return x, f(x)
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
        if (b - a) <= xtol * max(1.0, abs(a), abs(b)) or abs(fc - fd) <= ftol:
            break
    return (c, fc) if fc <= fd else (d, fd)


def grid_golden_max(f, lo: float, hi: float, *, coarse: int = 33,
                    xtol: float = 1e-13) -> tuple[float, float] | None:
    """Maximize ``f`` on ``[lo, hi]``: coarse scan, then golden refinement
    around the best coarse point.  Returns ``(x, f(x))`` or None if the
    interval is empty."""
    if not (hi >= lo) or not np.isfinite(lo) or not np.isfinite(hi):
        return None
    if hi == lo:
        return lo, f(lo)
    xs = np.linspace(lo, hi, coarse)
    vals = [f(x) for x in xs]
    i = int(np.argmax(vals))
    a = xs[max(i - 1, 0)]
    b = xs[min(i + 1, coarse - 1)]
    x, neg = golden_min(lambda t: -f(t), a, b, xtol=xtol)
    if vals[i] > -neg:
        return float(xs[i]), float(vals[i])
    return float(x), float(-neg)


def _splitmix_fin(z: int) -> int:
    z &= _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


def mix_seed(*parts: int) -> int:
    """64-bit splittable hash of a tuple of integers.

    Used to derive one independent stream key per Monte Carlo replicate so
    results do not depend on worker count or scheduling.
    """
    x = 0x9E3779B97F4A7C15
    for p in parts:
        x = (x + _GOLDEN64 + (int(p) & _MASK64)) & _MASK64
        x = _splitmix_fin(x)
    return x


def replicate_rng(seed: int, index: int) -> np.random.Generator:
    """Deterministic generator for replicate ``index`` of a run seeded by
    ``seed``; independent of how replicates are partitioned over workers."""
    return np.random.Generator(np.random.Philox(key=mix_seed(seed, index)))


def fmt(x) -> str:
    """Stable scalar formatting for CSV cells: shortest round-trip for
    floats, plain str for everything else."""
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return str(x)


def rows_to_csv(header: list[str], rows: list[tuple]) -> str:
    """Render rows as deterministic CSV text (LF endings, repr floats)."""
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(fmt(x) for x in row))
    return "\n".join(lines) + "\n"
