"""Small integer-arithmetic helpers shared across modules."""

from __future__ import annotations

import math


def egcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, u, v) with g = gcd(a, b) >= 0 and u*a + v*b = g."""
    old_r, r = a, b
    old_u, u = 1, 0
    old_v, v = 0, 1
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_u, u = u, old_u - q * u
        old_v, v = v, old_v - q * v
    if old_r < 0:
        old_r, old_u, old_v = -old_r, -old_u, -old_v
    return old_r, old_u, old_v


def crt(r1: int, m1: int, r2: int, m2: int) -> tuple[int, int]:
    """Solve x = r1 (mod m1), x = r2 (mod m2).

    Returns (x, lcm(m1, m2)) with 0 <= x < lcm.  Raises ValueError if the
    congruences are incompatible.
    """
    g, u, _ = egcd(m1, m2)
    if (r2 - r1) % g != 0:
        raise ValueError(f"incompatible congruences mod {m1}, {m2}")
    lcm = m1 // g * m2
    # r1 + m1 * t = r2 (mod m2)  =>  t = u * (r2 - r1) / g  (mod m2 / g)
    t = (u * ((r2 - r1) // g)) % (m2 // g)
    return (r1 + m1 * t) % lcm, lcm


def is_prime(n: int) -> bool:
    """Trial-division primality test; fine for the small moduli used here."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def squarefree_part(n: int) -> int:
    """Largest squarefree divisor of n > 0 times the sign, i.e. n / (largest square)."""
    if n == 0:
        raise ValueError("squarefree_part(0) undefined")
    sign = -1 if n < 0 else 1
    n = abs(n)
    out = 1
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            if e % 2 == 1:
                out *= d
        d += 1 if d == 2 else 2
    return sign * out * n


def isqrt_exact(n: int) -> int | None:
    """Integer square root of n if n is a perfect square, else None."""
    if n < 0:
        return None
    r = math.isqrt(n)
    return r if r * r == n else None


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of n >= 1 as {prime: exponent}."""
    if n < 1:
        raise ValueError("factorize needs n >= 1")
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out
