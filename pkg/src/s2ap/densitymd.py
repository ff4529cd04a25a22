"""Joint law of ``(s2(n + l*t + eps_l) - s2(n))_{l=1..m}`` over ``n``.

Splitting ``n`` by parity maps a node ``(eps, T)`` to two nodes
``(eps', T // 2)`` and ``(eps'', T // 2)`` with

    e_l    = eps_l + l * (T mod 2)
    eps'_l = e_l // 2,        branch shift  +(e_l mod 2)
    eps''_l = (e_l + 1) // 2, branch shift  ((e_l + 1) mod 2) - 1

and the node's law is the half-half mixture of the shifted child laws.
At ``T = 0`` a node with ``eps`` in ``{0, 1}^m`` is its own second child; that
self-loop is a geometric ray ``sum_j 2^-(j+1) shift_{a + j u}(exit)`` and is
cut after ``J`` terms.  The discarded mass is tracked exactly, so every
entry is a certified lower bound on the true density and
``entries + lost_mass_bound == 1``.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Sequence

from s2ap.dyadic import Dyadic

MAX_PRECISION = 60

KVector = tuple[int, ...]
EpsVector = tuple[int, ...]


class StructureError(RuntimeError):
    """The node graph contains a cycle other than a characterized self-loop."""


def _tz(x: int) -> int:
    return (x & -x).bit_length() - 1


@dataclass(frozen=True)
class _Law:
    exp: int
    nums: dict[KVector, int]

    def lost_num(self) -> int:
        return (1 << self.exp) - sum(self.nums.values())


def _canonical(exp: int, nums: dict[KVector, int]) -> _Law:
    z = exp
    for x in nums.values():
        z = min(z, _tz(x))
        if z == 0:
            break
    if z:
        nums = {k: x >> z for k, x in nums.items()}
        exp -= z
    return _Law(exp, nums)


def _accumulate(out: dict[KVector, int], law: _Law, shift: KVector, up: int) -> None:
    if len(shift) == 1:
        (s0,) = shift
        for (k0,), x in law.nums.items():
            key = (k0 + s0,)
            out[key] = out.get(key, 0) + (x << up)
    elif len(shift) == 2:
        s0, s1 = shift
        for (k0, k1), x in law.nums.items():
            key = (k0 + s0, k1 + s1)
            out[key] = out.get(key, 0) + (x << up)
    else:
        for k, x in law.nums.items():
            key = tuple(a + b for a, b in zip(k, shift))
            out[key] = out.get(key, 0) + (x << up)


def _mix(a: _Law, sa: KVector, b: _Law, sb: KVector) -> _Law:
    e = max(a.exp, b.exp)
    out: dict[KVector, int] = {}
    _accumulate(out, a, sa, e - a.exp)
    _accumulate(out, b, sb, e - b.exp)
    return _canonical(e + 1, out)


def _ray(exit_law: _Law, a: KVector, u: KVector, depth: int) -> _Law:
    out: dict[KVector, int] = {}
    for j in range(depth):
        shift = tuple(x + j * y for x, y in zip(a, u))
        _accumulate(out, exit_law, shift, depth - j - 1)
    return _canonical(exit_law.exp + depth, out)


def _children(eps: EpsVector, t: int):
    odd = t & 1
    e = [x + (l + 1) * odd for l, x in enumerate(eps)]
    eps1 = tuple(x >> 1 for x in e)
    shift1 = tuple(x & 1 for x in e)
    eps2 = tuple((x + 1) >> 1 for x in e)
    shift2 = tuple(((x + 1) & 1) - 1 for x in e)
    ct = t >> 1
    return (eps1, ct), shift1, (eps2, ct), shift2


class _Engine:
    """Memoized solver for one ray depth."""

    def __init__(self, depth: int) -> None:
        self.depth = depth
        self.memo: dict[tuple[EpsVector, int], _Law] = {}
        self._lock = threading.Lock()

    def solve(self, eps: EpsVector, t: int) -> _Law:
        return self._solve((eps, t), set())

    def _solve(self, node: tuple[EpsVector, int], active: set) -> _Law:
        hit = self.memo.get(node)
        if hit is not None:
            return hit
        eps, t = node
        if t == 0 and not any(eps):
            law = _Law(0, {(0,) * len(eps): 1})
        else:
            if node in active:
                raise StructureError(f"cycle through node eps={eps}, t={t}")
            active.add(node)
            c1, s1, c2, s2_ = _children(eps, t)
            if c1 == node or c2 == node:
                if c1 == c2:
                    raise StructureError(f"double self-loop at eps={eps}, t={t}")
                if c1 == node:
                    exit_node, a, u = c2, s2_, s1
                else:
                    exit_node, a, u = c1, s1, s2_
                if t != 0 or any(x not in (0, 1) for x in eps):
                    raise StructureError(f"unexpected self-loop at eps={eps}, t={t}")
                law = _ray(self._solve(exit_node, active), a, u, self.depth)
            else:
                law = _mix(self._solve(c1, active), s1, self._solve(c2, active), s2_)
            active.discard(node)
        with self._lock:
            return self.memo.setdefault(node, law)


_engines: dict[int, _Engine] = {}
_engines_lock = threading.Lock()


def _engine(precision: int) -> _Engine:
    if not 1 <= precision <= MAX_PRECISION:
        raise ValueError(f"precision must be in [1, {MAX_PRECISION}], got {precision}")
    depth = precision + 4
    with _engines_lock:
        eng = _engines.get(depth)
        if eng is None:
            eng = _engines[depth] = _Engine(depth)
    return eng


def clear_cache() -> None:
    with _engines_lock:
        _engines.clear()


@dataclass(frozen=True)
class MdDistribution:
    """Truncated law ``k -> delta(k, eps, t)`` with numerators over ``2^exp``."""

    m: int
    t: int
    eps: EpsVector
    exp: int
    nums: dict[KVector, int]

    @property
    def entries(self) -> dict[KVector, Dyadic]:
        return {k: Dyadic.of(x, self.exp) for k, x in self.nums.items()}

    def __getitem__(self, k: Sequence[int]) -> Dyadic:
        return Dyadic.of(self.nums.get(tuple(k), 0), self.exp)

    def total(self) -> Dyadic:
        return Dyadic.of(sum(self.nums.values()), self.exp)

    @property
    def lost_mass_bound(self) -> Dyadic:
        return Dyadic.of((1 << self.exp) - sum(self.nums.values()), self.exp)

    def mass_where(self, pred) -> Dyadic:
        return Dyadic.of(sum(x for k, x in self.nums.items() if pred(k)), self.exp)


def delta_md(m: int, t: int, eps: Sequence[int] | None = None, precision: int = 30) -> MdDistribution:
    """Joint law of the ``m`` differences ``s2(n + l t + eps_l) - s2(n)``.

    ``lost_mass_bound <= 2^-precision``; each entry undershoots its true
    density by at most that amount.
    """
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    eps_t = (0,) * m if eps is None else tuple(int(x) for x in eps)
    if len(eps_t) != m or any(x < 0 for x in eps_t):
        raise ValueError(f"eps must be {m} nonnegative integers, got {eps}")
    law = _engine(precision).solve(eps_t, t)
    return MdDistribution(m, t, eps_t, law.exp, law.nums)


def marginal(dist: MdDistribution, component: int) -> dict[int, Dyadic]:
    """Law of the ``component``-th coordinate (1-based)."""
    if not 1 <= component <= dist.m:
        raise ValueError(f"component must be in [1, {dist.m}]")
    i = component - 1
    acc: dict[int, int] = {}
    for k, x in dist.nums.items():
        acc[k[i]] = acc.get(k[i], 0) + x
    return {k: Dyadic.of(acc[k], dist.exp) for k in sorted(acc)}


def cusick_pair_density(t: int, precision: int = 30) -> tuple[Dyadic, Dyadic]:
    """Bounds on ``dens{n : s2(n+t) >= s2(n) and s2(n+2t) <= s2(n+t)}``."""
    if t < 1:
        raise ValueError(f"t must be >= 1, got {t}")
    d = delta_md(2, t, None, precision)
    lo = d.mass_where(lambda k: k[0] >= 0 and k[1] <= k[0])
    return lo, lo + d.lost_mass_bound
