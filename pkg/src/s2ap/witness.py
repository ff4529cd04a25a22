"""Explicit ``(n, t)`` realizing prescribed digit-sum differences.

Given integers ``k_1, ..., k_m`` the builders here return ``n`` and ``t``
with ``s2(n + l*t) - s2(n) == k_l`` for ``1 <= l <= m``.  The construction
is inductive: closed-form layouts for ``m = 1`` and ``m = 2``, then for
each further step the prefix witness is padded with carry-free copies of
``+1`` / ``-1`` gadgets that only move the last consecutive difference.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from s2ap.digits import s2, tm


class VerificationError(RuntimeError):
    """A constructed witness failed its exact self-check."""


@dataclass(frozen=True)
class Block:
    n: int
    t: int

    def diffs(self, m: int) -> tuple[int, ...]:
        """Consecutive differences ``s2(n + l t) - s2(n + (l-1) t)``, ``l = 1..m``."""
        vals = [s2(self.n + l * self.t) for l in range(m + 1)]
        return tuple(vals[l] - vals[l - 1] for l in range(1, m + 1))

    def cumulative(self, m: int) -> tuple[int, ...]:
        base = s2(self.n)
        return tuple(s2(self.n + l * self.t) - base for l in range(1, m + 1))


@dataclass(frozen=True)
class Witness:
    n: int
    t: int
    m: int
    targets: tuple[int, ...]
    verified: bool = False

    def check(self) -> bool:
        return Block(self.n, self.t).cumulative(self.m) == tuple(self.targets)

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "k": list(self.targets),
            "n": str(self.n),
            "t": str(self.t),
            "bits_n": self.n.bit_length(),
            "bits_t": self.t.bit_length(),
            "verified": self.verified,
        }

    @classmethod
    def from_json(cls, obj: dict) -> Witness:
        k = tuple(int(x) for x in obj["k"])
        m = int(obj["m"])
        if len(k) != m:
            raise ValueError(f"witness lists {len(k)} targets but m = {m}")
        return cls(
            n=int(obj["n"]),
            t=int(obj["t"]),
            m=m,
            targets=k,
            verified=bool(obj.get("verified", False)),
        )


def cumulative_to_consecutive(k: Sequence[int]) -> tuple[int, ...]:
    if not k:
        raise ValueError("need at least one target")
    prev = 0
    out = []
    for x in k:
        out.append(x - prev)
        prev = x
    return tuple(out)


def consecutive_to_cumulative(d: Sequence[int]) -> tuple[int, ...]:
    if not d:
        raise ValueError("need at least one difference")
    acc = 0
    out = []
    for x in d:
        acc += x
        out.append(acc)
    return tuple(out)


def concat_blocks(blocks: Iterable[Block], m: int) -> Block:
    """Stack blocks without carry interaction for progressions of length ``m``.

    ``blocks[0]`` occupies the lowest bits.  The consecutive differences of
    the result, for ``1 <= l <= m``, are the sums of the blocks' differences.
    """
    it = iter(blocks)
    try:
        acc = next(it)
    except StopIteration:
        raise ValueError("concat_blocks needs at least one block") from None
    n, t = acc.n, acc.t
    for b in it:
        shift = (n + m * t).bit_length()
        n = (b.n << shift) | n
        t = (b.t << shift) | t
    return Block(n, t)


def witness_m1(k: int, strategy: str = "direct", a: int | None = None) -> Block:
    """Block with ``s2(n + t) - s2(n) == k`` and ``t >= 1``.

    ``strategy`` is one of ``"direct"``, ``"shifted"`` (``t = 2^c - 1``,
    ``n = 2^(c-1) (2^a - 1)`` with ``c - a = k``; ``a`` defaults to the
    smallest admissible value) or ``"intermediate"`` (digit sums chosen
    inside consecutive dyadic intervals).
    """
    if strategy == "direct":
        if k > 0:
            return Block(1 << (k + 1), (1 << k) - 1)
        if k < 0:
            return Block((1 << (1 - k)) - 1, 1)
        return Block(2, 2)
    if strategy == "shifted":
        if a is None:
            a = max(1, 1 - k)
        c = a + k
        if a < 1 or c < 1:
            raise ValueError(f"shifted layout needs a, c >= 1 (a={a}, c={c})")
        return Block(((1 << a) - 1) << (c - 1), (1 << c) - 1)
    if strategy == "intermediate":
        ak = abs(k)
        ell = 2 * ak
        n = (1 << ell) + (1 << ak) - 1
        n2 = (1 << (ell + 1)) + (1 << (ak + k)) - 1
        return Block(n, n2 - n)
    raise ValueError(f"unknown strategy {strategy!r}")


@dataclass(frozen=True)
class M2Params:
    config: str
    a: int
    b: int
    c: int
    d: int
    offset: int  # e for config A, f for config B

    def validate(self) -> None:
        if self.config == "A":
            ok = (self.a >= 2 and self.b >= 0 and self.c >= 2 and self.d >= 1
                  and self.offset >= self.d + self.b + 1)
        elif self.config == "B":
            ok = (self.a >= 2 and self.c >= 0 and self.d >= 2
                  and self.offset == self.d - 1 + self.a)
        else:
            ok = False
        if not ok:
            raise ValueError(f"invalid m=2 parameters {self}")

    def block(self) -> Block:
        self.validate()
        a, b, c, d = self.a, self.b, self.c, self.d
        if self.config == "A":
            e = self.offset
            n = (((1 << a) - 1) << (e + c - 1)) + (((1 << b) - 1) << d)
            t = (((1 << c) - 1) << e) + ((1 << d) - 1)
        else:
            n = ((1 << a) - 1) << (d - 1)
            t = (((1 << c) - 1) << self.offset) + ((1 << d) - 1)
        return Block(n, t)

    def digit_sums(self) -> tuple[int, int, int]:
        """Claimed ``(s2(n), s2(n + t), s2(n + 2t))`` for this layout."""
        if self.config == "A":
            return (self.a + self.b, self.b + self.c + self.d, self.c + self.d)
        return (self.a, self.d, self.c + self.d)


def m2_params(k1: int, k2: int) -> M2Params:
    if k2 <= k1:
        b = k1 - k2
        a = max(2, 3 - k1)
        d = 1
        return M2Params("A", a, b, k1 + a - 1, d, d + b + 1)
    a = max(2, 2 - k1)
    d = k1 + a
    return M2Params("B", a, 0, k2 - k1, d, d - 1 + a)


def witness_m2(k1: int, k2: int) -> Block:
    """Block with cumulative differences ``(k1, k2)``."""
    return m2_params(k1, k2).block()


def _gadget_level(m: int) -> int:
    if m < 2:
        raise ValueError(f"gadgets need m >= 2, got {m}")
    return (m - 1).bit_length()  # least L with 2**L >= m


def gadget_plus(m: int) -> list[Block]:
    """Blocks whose summed consecutive differences are ``(0, ..., 0, +1)``."""
    L = _gadget_level(m)
    start = 2 * (1 << L) - m + 1
    return [Block(start + j, 1) for j in range(1 << L)]


def gadget_minus(m: int) -> list[Block]:
    """Blocks whose summed consecutive differences are ``(0, ..., 0, -1)``."""
    L = _gadget_level(m)
    lo = (1 << L) - m + 1
    first = range(lo, lo + (1 << L))
    second = range(3 * (1 << (L + 1)) + 1, 4 * (1 << (L + 1)) + 1)
    return [Block(j, 1) for j in (*first, *second)]


def _build(k: tuple[int, ...]) -> Block:
    m = len(k)
    if m == 1:
        return witness_m1(k[0], "direct")
    if m == 2:
        return witness_m2(k[0], k[1])
    prefix = _build(k[:-1])
    want = k[-1] - k[-2]
    residual = s2(prefix.n + m * prefix.t) - s2(prefix.n + (m - 1) * prefix.t)
    delta = want - residual
    blocks = [prefix]
    if delta:
        gadget = gadget_plus(m) if delta > 0 else gadget_minus(m)
        blocks.extend(gadget * abs(delta))
    return concat_blocks(blocks, m)


def witness(k: Sequence[int]) -> Witness:
    """Verified witness for cumulative targets ``k`` (``k[l-1] = s2(n + l t) - s2(n)``).

    Witness size grows quickly with ``len(k)``; no attempt is made to keep it small.
    """
    targets = tuple(int(x) for x in k)
    if not targets:
        raise ValueError("need at least one target")
    b = _build(targets)
    w = Witness(b.n, b.t, len(targets), targets)
    if b.t < 1 or not w.check():
        raise VerificationError(f"construction failed for targets {targets}")
    return Witness(b.n, b.t, w.m, targets, verified=True)


def realize_tm_word(w: Sequence[int]) -> Witness:
    """Witness with ``tm(n + l t) == w[l]`` for ``0 <= l <= m`` where ``m = len(w) - 1``.

    The returned targets are the cumulative differences the construction used.
    """
    word = tuple(int(x) for x in w)
    if len(word) < 2:
        raise ValueError("word must have at least two letters")
    if any(x not in (0, 1) for x in word):
        raise ValueError("word letters must be 0 or 1")
    w0 = word[0]
    base = witness([x ^ w0 for x in word[1:]])
    n, t = base.n, base.t
    if tm(n) != w0:
        # low block (1, 0) adds one to every digit sum: parity flips, differences stay
        b = concat_blocks([Block(1, 0), Block(n, t)], base.m)
        n, t = b.n, b.t
    if any(tm(n + l * t) != word[l] for l in range(len(word))):
        raise VerificationError(f"Thue-Morse realization failed for {word}")
    out = Witness(n, t, base.m, base.targets)
    if not out.check():
        raise VerificationError(f"Thue-Morse realization failed for {word}")
    return Witness(n, t, base.m, base.targets, verified=True)
