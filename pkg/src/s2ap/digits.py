"""Elementary base-2 digit functions on unbounded integers."""


def _check_natural(n: int) -> None:
    if n < 0:
        raise ValueError(f"expected a nonnegative integer, got {n}")


def s2(n: int) -> int:
    """Number of ones in the binary expansion of ``n``."""
    _check_natural(n)
    return n.bit_count()


def nu2(n: int) -> int:
    """2-adic valuation: exponent of the largest power of two dividing ``n``."""
    if n <= 0:
        raise ValueError(f"nu2 is defined for n >= 1, got {n}")
    return (n & -n).bit_length() - 1


def g(j: int) -> int:
    """Increment of the digit sum, ``s2(j + 1) - s2(j)``.

    Equals ``1 - nu2(j + 1)``; in particular ``g(0) = 1``.
    """
    _check_natural(j)
    return 1 - nu2(j + 1)


def tm(n: int) -> int:
    """Thue-Morse bit ``s2(n) mod 2``."""
    return s2(n) & 1


def g_interval_sum(a: int, length: int) -> int:
    """``sum(g(j) for a <= j < a + length)`` via telescoping.

    For ``length == 2**L`` this coincides with ``g(a >> L)``.
    """
    _check_natural(a)
    _check_natural(length)
    return s2(a + length) - s2(a)
