"""Weights of the n-th exterior power of the standard representation of A_{2n-1}.

Weights are written in the basis L_1, ..., L_{2n} (with L_1 + ... + L_{2n} = 0),
simple roots are alpha_j = L_j - L_{j+1}, fundamental weights
varpi_j = L_1 + ... + L_j.  The grading element H_0 attached to the special
root alpha_p is never built; xi(H_0) is the coefficient of alpha_p in xi.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Sequence

from .errors import InvalidInput


@dataclass(frozen=True)
class DomainLabel:
    """The Hermitian symmetric domain (A_{2n-1}, alpha_p) = SU(p, 2n-p)/S(U(p) x U(2n-p))."""
    n: int
    p: int

    def __post_init__(self):
        if self.n < 1 or not 1 <= self.p <= 2 * self.n - 1:
            raise InvalidInput(f"need n >= 1 and 1 <= p <= 2n-1, got n={self.n}, p={self.p}")

    @property
    def rank(self) -> int:
        return 2 * self.n - 1


@dataclass(frozen=True)
class WeightVector:
    """Integer L-coordinates modulo the all-ones vector; canonical min is 0."""
    coords: tuple

    def __post_init__(self):
        lo = min(self.coords)
        if lo:
            object.__setattr__(self, "coords", tuple(c - lo for c in self.coords))

    @classmethod
    def from_subset(cls, subset: Sequence[int], size: int) -> "WeightVector":
        chosen = set(subset)
        return cls(tuple(1 if j in chosen else 0 for j in range(1, size + 1)))


@dataclass(frozen=True)
class HodgeVector:
    """Hodge numbers h^{a, w-a}, listed for a = w, w-1, ..., 0."""
    weight: int
    numbers: tuple
    level: int

    def __post_init__(self):
        nums = tuple(int(x) for x in self.numbers)
        object.__setattr__(self, "numbers", nums)
        if len(nums) != self.weight + 1:
            raise InvalidInput(f"weight {self.weight} needs {self.weight + 1} Hodge numbers, got {len(nums)}")
        if any(x < 0 for x in nums):
            raise InvalidInput("Hodge numbers are nonnegative")
        if nums != nums[::-1]:
            raise InvalidInput(f"Hodge symmetry fails for {nums}")
        for a in range(self.weight + 1):
            diff = 2 * a - self.weight
            if self[a] and (abs(diff) > self.level or (diff - self.level) % 2):
                raise InvalidInput(f"h^{{{a},{self.weight - a}}} lies outside level {self.level}")

    def __getitem__(self, a: int) -> int:
        """h^{a, w-a}."""
        return self.numbers[self.weight - a]

    @property
    def total(self) -> int:
        return sum(self.numbers)

    def __str__(self) -> str:
        return "(" + ", ".join(str(x) for x in self.numbers) + ")"


def alpha_coefficient(j: int, label: DomainLabel) -> Fraction:
    """Coefficient of alpha_p when L_j is expanded in simple roots."""
    size = 2 * label.n
    if not 1 <= j <= size:
        raise InvalidInput(f"j = {j} out of range 1..{size}")
    p = label.p
    return Fraction(size - p, size) if j <= p else Fraction(-p, size)


def fundamental_weight_in_simple_roots(k: int, rank: int) -> list[Fraction]:
    """varpi_k = sum_j c_j alpha_j for A_rank (column k of the inverse Cartan matrix)."""
    N = rank + 1
    return [Fraction(min(j, k) * (N - max(j, k)), N) for j in range(1, rank + 1)]


def vhs_level(label: DomainLabel) -> int:
    """2 varpi_n(H_0), read off the simple-root expansion of varpi_n.

    This is p for p <= n (the range that occurs in the construction) and
    2n - p beyond it.
    """
    coeffs = fundamental_weight_in_simple_roots(label.n, label.rank)
    twice = 2 * coeffs[label.p - 1]
    assert twice.denominator == 1
    return int(twice)


def twice_grading(subset: Sequence[int], label: DomainLabel) -> int:
    """2 xi(H_0) for xi = sum of L_j over the subset."""
    val = 2 * sum((alpha_coefficient(j, label) for j in subset), Fraction(0))
    assert val.denominator == 1
    return int(val)


def enumerate_wedge_weights(label: DomainLabel) -> list[tuple[WeightVector, int]]:
    """All C(2n, n) weights of the n-th wedge, lex order of index subsets."""
    size = 2 * label.n
    return [(WeightVector.from_subset(sub, size), twice_grading(sub, label))
            for sub in combinations(range(1, size + 1), label.n)]


def hodge_numbers(label: DomainLabel) -> HodgeVector:
    """Closed form h^{s, p-s} = C(p, s) C(2n-p, n-s), weight p."""
    n, p = label.n, label.p
    nums = [comb(p, s) * comb(2 * n - p, n - s) if s <= n else 0 for s in range(p, -1, -1)]
    return HodgeVector(p, tuple(nums), vhs_level(label))


def weight_histogram(label: DomainLabel) -> HodgeVector:
    """Hodge numbers counted from the enumerated weights (brute-force route).

    A weight with 2 xi(H_0) = 2s - p sits in h^{s, p-s}.
    """
    p = label.p
    counts = [0] * (p + 1)
    for _, t in enumerate_wedge_weights(label):
        s = (t + p) // 2
        counts[s] += 1
    level = max(t for _, t in enumerate_wedge_weights(label))
    return HodgeVector(p, tuple(counts[s] for s in range(p, -1, -1)), level)
