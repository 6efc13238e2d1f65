"""Continuant polynomials K_n, their monomial expansion, and the signed
continuant that reproduces nu_k from a string of nu_2 values.

K_0 = 1, K_1 = x_1, K_n = x_n K_{n-1} + K_{n-2}.  The monomials of K_n are
indexed by the subsets of {1..n} whose complement splits into disjoint
adjacent pairs; there are Fibonacci-many of them (seeds 1, 1).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

ContinuantMonomial = tuple[int, ...]


def continuant_eval(args: Sequence[int]) -> int:
    """Exact value of K_n at the given arguments (n = len(args))."""
    a, b = 1, 1
    for i, x in enumerate(args):
        a, b = b, (x * b + a) if i else x
    return b if args else 1


@lru_cache(maxsize=None)
def continuant_monomials(n: int) -> tuple[ContinuantMonomial, ...]:
    """Monomials of K_n as increasing index tuples, longest first and the
    constant term (empty tuple) last; ties broken lexicographically."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return ((),)
    if n == 1:
        return ((1,),)
    with_n = [m + (n,) for m in continuant_monomials(n - 1)]
    without = list(continuant_monomials(n - 2))
    return tuple(sorted(with_n + without, key=lambda m: (-len(m), m)))


def monomial_complement_pairs(m: ContinuantMonomial, n: int) -> list[tuple[int, int]] | None:
    """Split the complement of m in {1..n} into adjacent pairs, or None if
    it does not split (i.e. m is not a continuant monomial of K_n)."""
    absent = sorted(set(range(1, n + 1)) - set(m))
    pairs = []
    i = 0
    while i < len(absent):
        if i + 1 < len(absent) and absent[i + 1] == absent[i] + 1:
            pairs.append((absent[i], absent[i] + 1))
            i += 2
        else:
            return None
    return pairs


def kronecker2(n: int) -> int:
    """Kronecker symbol (n/2): 0 for even n, +1 for n = +-1 mod 8,
    -1 for n = +-3 mod 8."""
    if n % 2 == 0:
        return 0
    return 1 if n % 8 in (1, 7) else -1


def fibonacci(n: int) -> int:
    """Monomial-count Fibonacci numbers: f(0) = f(1) = 1."""
    if n < 0:
        raise ValueError("n must be >= 0")
    a, b = 1, 1
    for _ in range(n):
        a, b = b, a + b
    return a


@dataclass(frozen=True)
class SignedContinuantForm:
    """The right-hand side shape for nu_k: prefactor (2k-1 / 2) times
    K_{k-1} evaluated at alternating-sign nu_2 values."""

    k: int
    sign_prefactor: int = field(init=False)
    argument_signs: tuple[int, ...] = field(init=False)

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValueError("k must be >= 1")
        object.__setattr__(self, "sign_prefactor", kronecker2(2 * self.k - 1))
        object.__setattr__(
            self, "argument_signs", tuple(-1 if j % 2 else 1 for j in range(1, self.k))
        )

    def evaluate(self, nu2_values: Sequence[int]) -> int:
        if len(nu2_values) != self.k - 1:
            raise ValueError(
                f"k = {self.k} needs exactly {self.k - 1} nu_2 values, got {len(nu2_values)}"
            )
        args = [s * v for s, v in zip(self.argument_signs, nu2_values)]
        return self.sign_prefactor * continuant_eval(args)


def nu_k_from_nu2(k: int, nu2_values: Sequence[int]) -> int:
    """nu_k(gamma_i) reconstructed from the neighbor string
    nu_2(gamma_i), ..., nu_2(gamma_{i+k-2}) via the signed continuant."""
    return SignedContinuantForm(k).evaluate(nu2_values)
