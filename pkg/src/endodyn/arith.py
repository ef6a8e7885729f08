"""Number-theoretic helpers: factorization, divisor counts, valuations and orders.

All inputs are desk-scale integers, so everything here is plain trial division.
"""

from __future__ import annotations

import enum
from math import gcd, prod


class _Infinity(enum.Enum):
    """Distinguished infinite value, ordered above every integer."""

    INFINITY = "inf"

    def __repr__(self) -> str:
        return "INFINITY"

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True


INFINITY = _Infinity.INFINITY


def _require_positive(n: int, name: str = "n") -> None:
    if n < 1:
        raise ValueError(f"{name} must be a positive integer, got {n}")


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def _require_prime(p: int) -> None:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")


def factorize(n: int) -> list[tuple[int, int]]:
    """Return ``[(prime, exponent), ...]`` sorted by prime; ``[]`` for 1."""
    _require_positive(n)
    factors = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            factors.append((d, e))
        d += 1 if d == 2 else 2
    if n > 1:
        factors.append((n, 1))
    return factors


def divisors(n: int) -> list[int]:
    divs = [1]
    for p, e in factorize(n):
        divs = [d * p**i for d in divs for i in range(e + 1)]
    return sorted(divs)


def tau(n: int) -> int:
    """Number of positive divisors of n."""
    return prod(e + 1 for _, e in factorize(n))


def euler_phi(n: int) -> int:
    return prod((p - 1) * p ** (e - 1) for p, e in factorize(n))


def carmichael(n: int) -> int:
    """Exponent of the unit group of Z/nZ."""
    lam = 1
    for p, e in factorize(n):
        if p == 2 and e >= 3:
            part = 2 ** (e - 2)
        else:
            part = (p - 1) * p ** (e - 1)
        lam = lam * part // gcd(lam, part)
    return lam


def p_adic_valuation(a: int, p: int):
    """Exponent of the largest power of p dividing a; INFINITY when a == 0."""
    _require_prime(p)
    if a < 0:
        raise ValueError(f"a must be non-negative, got {a}")
    if a == 0:
        return INFINITY
    e = 0
    while a % p == 0:
        a //= p
        e += 1
    return e


def truncated_valuation(a: int, p: int, k: int) -> int:
    """``min(p_adic_valuation(a, p), k)``; always finite."""
    if k < 0:
        raise ValueError(f"k must be non-negative, got {k}")
    v = p_adic_valuation(a, p)
    return k if v is INFINITY else min(v, k)


def multiplicative_order(a: int, m: int) -> int:
    """Least e >= 1 with a**e == 1 (mod m).

    Starts from the Carmichael exponent and strips prime factors while the
    power stays trivial.
    """
    _require_positive(m, "m")
    if gcd(a, m) != 1:
        raise ValueError(f"{a} is not a unit modulo {m}")
    if m == 1:
        return 1
    a %= m
    e = carmichael(m)
    for q, _ in factorize(e) if e > 1 else []:
        while e % q == 0 and pow(a, e // q, m) == 1:
            e //= q
    return e


def multiplicative_order_bruteforce(a: int, m: int) -> int:
    """Scan powers of a until reaching 1; reference for ``multiplicative_order``."""
    _require_positive(m, "m")
    if gcd(a, m) != 1:
        raise ValueError(f"{a} is not a unit modulo {m}")
    if m == 1:
        return 1
    a %= m
    x, e = a, 1
    while x != 1:
        x = x * a % m
        e += 1
    return e


def unit_decomposition_mod_2k(a: int, k: int) -> tuple[int, int]:
    """Split an odd residue modulo 2**k as ``(-1)**eps * 5**e``.

    Returns ``(eps, l)`` where l is the 2-adic valuation of e truncated at
    k - 2; the residue +-1 (e == 0) gets l = k - 2.
    """
    if a % 2 == 0:
        raise ValueError(f"a must be odd, got {a}")
    if k < 3:
        raise ValueError(f"k must be at least 3, got {k}")
    mod = 2**k
    a %= mod
    eps = 0 if a % 4 == 1 else 1
    b = a if eps == 0 else (-a) % mod
    # 5 has order 2**(k-2), so 5**e has order 2**(k-2-v) with v = val_2(e)
    order = multiplicative_order(b, mod)
    return eps, k - 2 - (order.bit_length() - 1)
