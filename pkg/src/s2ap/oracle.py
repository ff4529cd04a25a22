"""Brute-force ground truth by direct enumeration of ``n``.

Counting runs over fixed-size shards of ``[0, N)``; shard results are
reduced in shard order so counts do not depend on ``jobs``.  Values that
fit in 63 bits go through numpy; anything larger falls back to Python ints.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from s2ap.digits import s2
from s2ap.dyadic import Dyadic
from s2ap.witness import Witness

SHARD = 1 << 20
DEFAULT_K_MAX = 26
_NUMPY_LIMIT = 1 << 62


class PeriodNotFound(RuntimeError):
    pass


@dataclass(frozen=True)
class CountResult:
    count: int
    N: int

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.count, self.N)


@dataclass(frozen=True)
class PeriodCertificate:
    t: int
    K: int
    exact_value: Dyadic
    window_checked: int


def _shards(N: int) -> list[tuple[int, int]]:
    return [(lo, min(lo + SHARD, N)) for lo in range(0, N, SHARD)]


def _map_shards(fn: Callable, N: int, jobs: int) -> list:
    shards = _shards(N)
    if jobs <= 1 or len(shards) == 1:
        return [fn(lo, hi) for lo, hi in shards]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(lambda s: fn(*s), shards))


def _popcounts(lo: int, hi: int, offset: int) -> np.ndarray:
    n = np.arange(lo, hi, dtype=np.uint64)
    if offset:
        n += np.uint64(offset)
    return np.bitwise_count(n).astype(np.int16)


def _diff_rows(lo: int, hi: int, offsets: Sequence[int]) -> np.ndarray:
    """Array of shape (len(offsets), hi - lo): ``s2(n + o) - s2(n)``."""
    if hi - 1 + max(offsets, default=0) < _NUMPY_LIMIT:
        base = _popcounts(lo, hi, 0)
        return np.stack([_popcounts(lo, hi, o) - base for o in offsets])
    rows = [[s2(n + o) - s2(n) for n in range(lo, hi)] for o in offsets]
    return np.array(rows, dtype=np.int64)


def _check_N(N: int) -> None:
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")


def brute_histogram_1d(t: int, N: int, jobs: int = 1) -> dict[int, int]:
    """Counts of ``s2(n + t) - s2(n)`` over ``0 <= n < N``."""
    _check_N(N)

    def shard(lo: int, hi: int) -> dict[int, int]:
        d = _diff_rows(lo, hi, [t])[0]
        vals, counts = np.unique(d, return_counts=True)
        return dict(zip(vals.tolist(), counts.tolist()))

    total: dict[int, int] = {}
    for part in _map_shards(shard, N, jobs):
        for k, c in part.items():
            total[k] = total.get(k, 0) + c
    return dict(sorted(total.items()))


def brute_count_1d(k: int, t: int, N: int, jobs: int = 1) -> CountResult:
    return CountResult(brute_histogram_1d(t, N, jobs).get(k, 0), N)


def brute_histogram_md(eps: Sequence[int], t: int, N: int, jobs: int = 1) -> dict[tuple[int, ...], int]:
    """Counts of ``(s2(n + l t + eps_l) - s2(n))_l`` over ``0 <= n < N``."""
    _check_N(N)
    offsets = [(l + 1) * t + e for l, e in enumerate(eps)]

    def shard(lo: int, hi: int) -> dict[tuple[int, ...], int]:
        rows = _diff_rows(lo, hi, offsets)
        if rows.dtype == np.int16 and len(offsets) <= 7:
            # numpy path: differences lie in [-64, 64]; pack each row into one int64
            code = np.zeros(hi - lo, dtype=np.int64)
            for r in rows:
                code = (code << 8) | (r.astype(np.int64) + 128)
            vals, counts = np.unique(code, return_counts=True)
            m = len(offsets)
            keys = [tuple(((v >> (8 * (m - 1 - i))) & 255) - 128 for i in range(m)) for v in vals.tolist()]
            return dict(zip(keys, counts.tolist()))
        vals, counts = np.unique(rows.T, axis=0, return_counts=True)
        return {tuple(v): c for v, c in zip(vals.tolist(), counts.tolist())}

    total: dict[tuple[int, ...], int] = {}
    for part in _map_shards(shard, N, jobs):
        for k, c in part.items():
            total[k] = total.get(k, 0) + c
    return dict(sorted(total.items()))


def brute_count_md(kvec: Sequence[int], eps: Sequence[int], t: int, N: int, jobs: int = 1) -> CountResult:
    if len(kvec) != len(eps):
        raise ValueError("kvec and eps must have the same length")
    hist = brute_histogram_md(eps, t, N, jobs)
    return CountResult(hist.get(tuple(kvec), 0), N)


def verify_witness(w: Witness) -> bool:
    """Exact recomputation of all ``m`` differences."""
    if len(w.targets) != w.m or w.n < 0 or w.t < 0:
        return False
    base = s2(w.n)
    return all(s2(w.n + l * w.t) - base == w.targets[l - 1] for l in range(1, w.m + 1))


def _indicator(t: int, lo: int, hi: int) -> np.ndarray:
    return _diff_rows(lo, hi, [t])[0] >= 0


def _blocks_equal(t: int, base: np.ndarray, start: int) -> bool:
    size = base.shape[0]
    for off in range(0, size, SHARD):
        end = min(off + SHARD, size)
        if not np.array_equal(base[off:end], _indicator(t, start + off, start + end)):
            return False
    return True


def detect_period(t: int, K_max: int = DEFAULT_K_MAX, window: int = 16) -> PeriodCertificate:
    """Smallest ``K`` for which ``{n : s2(n + t) >= s2(n)}`` repeats on
    ``window`` consecutive blocks of length ``2^K``.

    Candidates start at ``K = t.bit_length()``: shorter blocks never see the
    carry out of the top bit of ``t`` inside a 16-block window and pass
    vacuously (``t = 8`` would report ``K = 0``).  The window check is
    evidence, not proof; pair it with :func:`s2ap.density1d.cusick_c`.
    """
    if t < 1:
        raise ValueError(f"t must be >= 1, got {t}")
    for K in range(t.bit_length(), K_max + 1):
        size = 1 << K
        base = np.concatenate([_indicator(t, lo, hi) for lo, hi in _shards(size)])
        if all(_blocks_equal(t, base, j * size) for j in range(1, window)):
            return PeriodCertificate(t, K, Dyadic.of(int(base.sum()), K), window)
    raise PeriodNotFound(f"no period 2^K with K <= {K_max} found for t = {t}")
