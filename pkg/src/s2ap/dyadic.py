"""Exact rationals whose denominator is a power of two."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from numbers import Rational


def _trailing_zeros(x: int) -> int:
    return (x & -x).bit_length() - 1


@total_ordering
@dataclass(frozen=True, slots=True)
class Dyadic:
    """``num / 2**exp`` kept in canonical form.

    Canonical means ``num`` odd, or ``num == 0`` with ``exp == 0``.  Use
    :meth:`of` to build a value from an arbitrary numerator/exponent pair;
    the plain constructor rejects non-canonical input so that equality and
    hashing stay structural.
    """

    num: int
    exp: int = 0

    def __post_init__(self) -> None:
        if self.exp < 0:
            raise ValueError("exponent must be nonnegative")
        if self.num == 0 and self.exp != 0:
            raise ValueError("zero must have exponent 0")
        if self.exp > 0 and self.num % 2 == 0:
            raise ValueError(f"non-canonical dyadic {self.num}/2^{self.exp}")

    @classmethod
    def of(cls, num: int, exp: int = 0) -> Dyadic:
        if num == 0:
            return cls(0, 0)
        if exp < 0:
            return cls(num << -exp, 0)
        z = min(_trailing_zeros(num), exp)
        return cls(num >> z, exp - z)

    @classmethod
    def from_fraction(cls, value: Rational | int) -> Dyadic:
        q = Fraction(value)
        den = q.denominator
        if den & (den - 1):
            raise ValueError(f"{q} is not a dyadic rational")
        return cls.of(q.numerator, den.bit_length() - 1)

    @property
    def denominator(self) -> int:
        return 1 << self.exp

    def to_fraction(self) -> Fraction:
        return Fraction(self.num, 1 << self.exp)

    def scaled_num(self, exp: int) -> int:
        """Numerator of this value over ``2**exp`` (requires ``exp >= self.exp``)."""
        if exp < self.exp:
            raise ValueError("target exponent too small")
        return self.num << (exp - self.exp)

    def _coerce(self, other: object) -> Dyadic | None:
        if isinstance(other, Dyadic):
            return other
        if isinstance(other, int):
            return Dyadic.of(other)
        if isinstance(other, Fraction):
            return Dyadic.from_fraction(other)
        return None

    def __add__(self, other: object) -> Dyadic:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        e = max(self.exp, o.exp)
        return Dyadic.of(self.scaled_num(e) + o.scaled_num(e), e)

    __radd__ = __add__

    def __neg__(self) -> Dyadic:
        return Dyadic(-self.num, self.exp)

    def __sub__(self, other: object) -> Dyadic:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: object) -> Dyadic:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other: object) -> Dyadic:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Dyadic.of(self.num * o.num, self.exp + o.exp)

    __rmul__ = __mul__

    def half(self, times: int = 1) -> Dyadic:
        return Dyadic.of(self.num, self.exp + times)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Dyadic):
            return self.num == other.num and self.exp == other.exp
        if isinstance(other, (int, Fraction)):
            return self.to_fraction() == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.to_fraction())

    def __lt__(self, other: object) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        e = max(self.exp, o.exp)
        return self.scaled_num(e) < o.scaled_num(e)

    def __bool__(self) -> bool:
        return self.num != 0

    def __float__(self) -> float:
        return float(self.to_fraction())

    def __abs__(self) -> Dyadic:
        return self if self.num >= 0 else -self

    def __repr__(self) -> str:
        return f"Dyadic({self.num}, {self.exp})"

    def __str__(self) -> str:
        return str(self.num) if self.exp == 0 else f"{self.num}/2^{self.exp}"

    def to_json(self) -> dict:
        return {"num": str(self.num), "exp2": self.exp, "float": float(self)}

    @classmethod
    def from_json(cls, obj: dict) -> Dyadic:
        return cls.of(int(obj["num"]), int(obj["exp2"]))


ZERO = Dyadic(0)
ONE = Dyadic(1)
HALF = Dyadic(1, 1)
