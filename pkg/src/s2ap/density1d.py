"""Exact law of ``s2(n + t) - s2(n)`` over ``n`` (natural density).

The densities satisfy

    delta(k, 1)      = 2^(k-2) for k <= 1, else 0
    delta(k, 2t)     = delta(k, t)
    delta(k, 2t + 1) = delta(k - 1, t) / 2 + delta(k + 1, t + 1) / 2

Every law produced this way is a finite block of values sitting on top of a
geometric tail ``alpha * 2^(k - k_lo)`` for ``k < k_lo``.  Shifts and
half-half mixtures keep that shape, so results are exact with no cutoff.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field, replace
from typing import Iterator

from s2ap.digits import s2
from s2ap.dyadic import Dyadic


def _tz(x: int) -> int:
    return (x & -x).bit_length() - 1


@dataclass(frozen=True)
class TailedDistribution:
    """``value(k) = nums[k - k_lo] / 2^exp`` on ``[k_lo, k_hi]``,
    ``tail / 2^exp * 2^(k - k_lo)`` below ``k_lo`` and zero above ``k_hi``.

    Equality ignores ``t`` so that laws of ``t`` and ``2t`` compare equal.
    """

    k_lo: int
    exp: int
    nums: tuple[int, ...]
    tail: int
    t: int | None = field(default=None, compare=False)

    @property
    def k_hi(self) -> int:
        return self.k_lo + len(self.nums) - 1

    @property
    def tail_coeff(self) -> Dyadic:
        return Dyadic.of(self.tail, self.exp)

    @property
    def finite(self) -> dict[int, Dyadic]:
        return {self.k_lo + i: Dyadic.of(x, self.exp) for i, x in enumerate(self.nums)}

    def value(self, k: int) -> Dyadic:
        if k > self.k_hi:
            return Dyadic(0)
        if k >= self.k_lo:
            return Dyadic.of(self.nums[k - self.k_lo], self.exp)
        return Dyadic.of(self.tail, self.exp + (self.k_lo - k))

    def items(self, k_min: int) -> Iterator[tuple[int, Dyadic]]:
        """``(k, value(k))`` for ``k_min <= k <= k_hi``, increasing ``k``."""
        for k in range(k_min, self.k_hi + 1):
            yield k, self.value(k)

    def total_mass(self) -> Dyadic:
        return Dyadic.of(sum(self.nums) + self.tail, self.exp)

    def mean(self) -> Dyadic:
        # sum_{k < K} k * alpha * 2^(k - K) = alpha * (K - 2)
        s = sum((self.k_lo + i) * x for i, x in enumerate(self.nums))
        return Dyadic.of(s + self.tail * (self.k_lo - 2), self.exp)

    def mass_at_least(self, k0: int) -> Dyadic:
        """``sum(value(k) for k >= k0)``."""
        if k0 > self.k_hi:
            return Dyadic(0)
        if k0 >= self.k_lo:
            return Dyadic.of(sum(self.nums[k0 - self.k_lo:]), self.exp)
        # tail part over k0 <= k < k_lo: alpha * (1 - 2^(k0 - k_lo))
        gap = self.k_lo - k0
        tail_part = Dyadic.of((self.tail << gap) - self.tail, self.exp + gap)
        return Dyadic.of(sum(self.nums), self.exp) + tail_part

    def shifted(self, s: int) -> TailedDistribution:
        return replace(self, k_lo=self.k_lo + s, t=None)


def _canonical(k_lo: int, exp: int, nums: list[int], tail: int) -> TailedDistribution:
    while nums and nums[-1] == 0:
        nums.pop()
    lead = 0
    while lead < len(nums) and nums[lead] == 0 and tail == 0:
        lead += 1
    if lead:
        nums = nums[lead:]
        k_lo += lead
    z = exp
    for x in (*nums, tail):
        if x:
            z = min(z, _tz(x))
            if z == 0:
                break
    if z:
        nums = [x >> z for x in nums]
        tail >>= z
        exp -= z
    return TailedDistribution(k_lo, exp, tuple(nums), tail)


def _mix_half(a: TailedDistribution, b: TailedDistribution) -> TailedDistribution:
    """``(a + b) / 2``."""
    k_lo = min(a.k_lo, b.k_lo)
    k_hi = max(a.k_hi, b.k_hi)
    f = max(a.exp + (a.k_lo - k_lo), b.exp + (b.k_lo - k_lo))
    out = [0] * (k_hi - k_lo + 1)
    tail = 0
    for d in (a, b):
        gap = d.k_lo - k_lo
        up = f - d.exp
        for i in range(gap):
            # materialized tail below d.k_lo
            out[i] += d.tail << (up - gap + i)
        for i, x in enumerate(d.nums):
            out[gap + i] += x << up
        tail += d.tail << (up - gap)
    return _canonical(k_lo, f + 1, out, tail)


POINT_MASS_0 = TailedDistribution(0, 0, (1,), 0, t=0)
_BASE = TailedDistribution(1, 1, (1,), 1, t=1)

_cache: dict[int, TailedDistribution] = {1: _BASE}
_lock = threading.Lock()


def _odd_part(t: int) -> int:
    return t >> _tz(t)


def _lookup(t: int) -> TailedDistribution | None:
    return _cache.get(_odd_part(t))


def _step(a: int, la: TailedDistribution, la1: TailedDistribution, x: int) -> TailedDistribution:
    """Law of ``x`` in ``{2a, 2a+1, 2a+2}`` from laws of ``a`` and ``a + 1``."""
    if x == 2 * a:
        return la
    if x == 2 * a + 2:
        return la1
    return _mix_half(la.shifted(1), la1.shifted(-1))


def delta_1d(t: int) -> TailedDistribution:
    """Exact law of ``k -> delta(k, t)`` for ``t >= 1``.

    The point mass at 0 (``t = 0``) is ``POINT_MASS_0``; pass it explicitly.
    """
    if t < 1:
        raise ValueError(f"delta_1d needs t >= 1, got {t}")
    hit = _lookup(t)
    if hit is None:
        # the recursion only ever touches pairs (t >> j, (t >> j) + 1)
        chain = []
        a = t
        while True:
            chain.append(a)
            if a == 1 or (_lookup(a) is not None and _lookup(a + 1) is not None):
                break
            a >>= 1
        a = chain.pop()
        la, la1 = _lookup(a), _lookup(a + 1)
        if la1 is None:  # a == 1
            la1 = _BASE
        while chain:
            x = chain.pop()
            lx = _step(a, la, la1, x)
            lx1 = _step(a, la, la1, x + 1)
            with _lock:
                _cache.setdefault(_odd_part(x), lx)
                _cache.setdefault(_odd_part(x + 1), lx1)
            a, la, la1 = x, lx, lx1
        hit = _lookup(t)
    return replace(hit, t=t)


def clear_cache() -> None:
    with _lock:
        _cache.clear()
        _cache[1] = _BASE


def cusick_c(t: int) -> Dyadic:
    """``c_t = dens{n : s2(n + t) >= s2(n)}``; ``c_0 = 1``."""
    if t == 0:
        return Dyadic(1)
    return delta_1d(t).mass_at_least(0)


def positivity_check(t: int, k_floor: int) -> bool:
    """True iff ``delta(k, t) > 0`` for every ``k_floor <= k <= s2(t)``."""
    d = delta_1d(t)
    return all(d.value(k).num > 0 for k in range(k_floor, s2(t) + 1))
