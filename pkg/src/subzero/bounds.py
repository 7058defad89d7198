"""Derivation-size bound functions f, g, h in exact integer arithmetic.

``f(q, n)`` bounds the size of a derivation for a realizable profile with
bound ``q`` and ``n`` ports.  ``g`` and ``h`` are affine recurrences
indexed by the pair (q, n) they are used for:

    h(0)   = f(q-1, n)
    h(k+1) = f(q-1, 2n) + h(k)*n + n^2
    g(0)   = f(q-1, n+|Q|)
    g(k+1) = f(q-1, 2(n+|Q|)) + g(k)*(n+|Q|) + (n+|Q|)^2

The values explode very quickly in ``q``, so every evaluation runs under a
bit budget and raises :class:`BoundOverflow` instead of grinding forever.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache


class BoundOverflow(ArithmeticError):
    """A bound value would exceed the configured bit budget."""

    def __init__(self, what: str, bits: int, budget: int):
        super().__init__(f"overflow: {what} needs about {bits} bits (budget {budget})")
        self.what = what
        self.bits = bits
        self.budget = budget


@dataclass(frozen=True)
class BoundParams:
    c1: int = 8
    c2: int = 8
    size_q: int = 1
    max_bits: int = 1 << 22

    def __post_init__(self):
        if self.c1 < 1 or self.c2 < 1:
            raise ValueError("c1 and c2 must be >= 1")
        if self.size_q < 1:
            raise ValueError("size_q must be >= 1")


def _affine_iterate(x0: int, mult: int, add: int, k: int, params: BoundParams, what: str) -> int:
    """k-th term of x(i+1) = add + mult*x(i), via the closed form."""
    if k == 0:
        return x0
    if mult == 0:
        return add
    if mult == 1:
        return x0 + k * add
    est = k * mult.bit_length() + max(x0, add).bit_length()
    if est > params.max_bits:
        raise BoundOverflow(what, est, params.max_bits)
    p = mult**k
    return p * x0 + add * ((p - 1) // (mult - 1))


def _check(value: int, params: BoundParams, what: str) -> int:
    if value.bit_length() > params.max_bits:
        raise BoundOverflow(what, value.bit_length(), params.max_bits)
    return value


@lru_cache(maxsize=None)
def bound_f(params: BoundParams, q: int, n: int) -> int:
    if q < 0 or n < 0:
        raise ValueError("q and n must be natural numbers")
    if q == 0:
        return params.c1 * n + params.c2
    sq = params.size_q
    prev2n = bound_f(params, q - 1, 2 * n)
    if n.bit_length() > 64 or (n + sq).bit_length() > 64:
        raise BoundOverflow(f"f({q},{n}) exponent", n + sq, params.max_bits)
    k = max(
        prev2n + bound_h(params, q, n, 2**n) * n + n * n,
        prev2n * (2**n + 1) + n * n,
        3 * bound_f(params, q - 1, 2) + 1 + bound_f(params, q - 1, 0) + 1,
        prev2n + bound_g(params, q, n, 2 ** (n + sq)) * n + n * n,
    )
    return _check(k * (sq + 1) + sq * n, params, f"f({q},{n})")


@lru_cache(maxsize=None)
def bound_h(params: BoundParams, q: int, n: int, k: int) -> int:
    if q < 1:
        raise ValueError("h is defined for q >= 1")
    x0 = bound_f(params, q - 1, n)
    add = bound_f(params, q - 1, 2 * n) + n * n
    return _affine_iterate(x0, n, add, k, params, f"h[{q},{n}]({k})")


@lru_cache(maxsize=None)
def bound_g(params: BoundParams, q: int, n: int, k: int) -> int:
    if q < 1:
        raise ValueError("g is defined for q >= 1")
    m = n + params.size_q
    x0 = bound_f(params, q - 1, m)
    add = bound_f(params, q - 1, 2 * m) + m * m
    return _affine_iterate(x0, m, add, k, params, f"g[{q},{n}]({k})")
