"""Local Hilbert symbols over Q and the quadratic symbol of a + b*sqrt(2)
modulo a prime l = 1 (mod 8).

Symbol values are plain ints in {-1, +1}; a would-be zero is an error.
"""

from __future__ import annotations

from typing import Tuple

from .arith import jacobi, sqrt_mod
from .errors import DegenerateSymbol


def _split(x: int, p: int) -> Tuple[int, int]:
    if x == 0:
        raise ValueError("Hilbert symbol arguments must be nonzero")
    k = 0
    while x % p == 0:
        x //= p
        k += 1
    return k, x


def hilbert_odd(a: int, b: int, p: int) -> int:
    alpha, u = _split(a, p)
    beta, v = _split(b, p)
    s = -1 if (alpha * beta * ((p - 1) // 2)) % 2 else 1
    if beta % 2:
        s *= jacobi(u, p)
    if alpha % 2:
        s *= jacobi(v, p)
    return s


def _eps(x: int) -> int:
    return ((x - 1) // 2) % 2


def _omega(x: int) -> int:
    return ((x * x - 1) // 8) % 2


def hilbert_2(a: int, b: int) -> int:
    alpha, u = _split(a, 2)
    beta, v = _split(b, 2)
    e = _eps(u) * _eps(v) + alpha * _omega(v) + beta * _omega(u)
    return -1 if e % 2 else 1


def hilbert_inf(a: int, b: int) -> int:
    if a == 0 or b == 0:
        raise ValueError("Hilbert symbol arguments must be nonzero")
    return -1 if a < 0 and b < 0 else 1


def hilbert(a: int, b: int, place) -> int:
    """Dispatch on ``place``: 2, an odd prime, or ``"inf"``."""
    if place == "inf":
        return hilbert_inf(a, b)
    if place == 2:
        return hilbert_2(a, b)
    return hilbert_odd(a, b, place)


def quad_symbol_sqrt2(ac: int, bc: int, l: int, alpha: int | None = None) -> int:
    """Legendre symbol of ac + bc*alpha mod l, where alpha^2 = 2 (mod l).

    ``alpha`` defaults to the smaller root.  Only meaningful for l = 1 mod 8.
    """
    if l % 8 != 1:
        raise ValueError(f"l={l} is not 1 mod 8")
    if alpha is None:
        alpha = sqrt_mod(2, l)
    s = jacobi(ac + bc * alpha, l)
    if s == 0:
        raise DegenerateSymbol(f"{ac} + {bc}*sqrt(2) vanishes mod {l}")
    return s
