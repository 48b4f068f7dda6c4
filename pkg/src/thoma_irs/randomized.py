"""Random inputs for property suites and the ``fuzz`` subcommand."""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .perm import FinitaryPermutation
from .thoma import AlphaSpec, ThomaParameter


def random_fractions(rng: np.random.Generator, count: int, max_denominator: int = 12) -> list[Fraction]:
    """``count`` positive rationals, sorted descending, with total at most 1."""
    if count == 0:
        return []
    raw = [Fraction(int(rng.integers(1, max_denominator + 1)), max_denominator) for _ in range(count)]
    total = sum(raw)
    scale = Fraction(int(rng.integers(1, 5)), 4)  # leave some dust mass sometimes
    vals = [v / total * scale for v in raw] if total > scale else raw
    return sorted(vals, reverse=True)


def random_alpha(rng: np.random.Generator, max_rank: int = 6, min_rank: int = 1) -> AlphaSpec:
    m = int(rng.integers(min_rank, max_rank + 1))
    return AlphaSpec(tuple(random_fractions(rng, m)))


def random_theta(rng: np.random.Generator, max_entries: int = 4) -> ThomaParameter:
    total = int(rng.integers(0, max_entries + 1))
    vals = random_fractions(rng, total)
    rng.shuffle(vals)
    nb = int(rng.integers(0, total + 1))
    return ThomaParameter(tuple(sorted(vals[:nb], reverse=True)), tuple(sorted(vals[nb:], reverse=True)))


def random_cycles_perm(
    rng: np.random.Generator,
    max_cycles: int = 4,
    max_len: int = 6,
    n_points: int | None = None,
    min_cycles: int = 0,
) -> FinitaryPermutation:
    """Disjoint random cycles on points drawn from ``range(n_points)``."""
    t = int(rng.integers(min_cycles, max_cycles + 1))
    lengths = [int(rng.integers(2, max_len + 1)) for _ in range(t)]
    need = sum(lengths)
    pool = n_points if n_points is not None else max(need, 1) + 4
    if need > pool:
        lengths = lengths[: max(0, len(lengths) - 1)]
        need = sum(lengths)
        while need > pool and lengths:
            lengths.pop()
            need = sum(lengths)
    pts = rng.permutation(pool)[:need].tolist()
    cycles, pos = [], 0
    for k in lengths:
        cycles.append(pts[pos:pos + k])
        pos += k
    return FinitaryPermutation.from_cycles(cycles)


def random_finitary(rng: np.random.Generator, n_points: int = 12) -> FinitaryPermutation:
    """Uniform permutation of ``range(n_points)``."""
    return FinitaryPermutation.from_array(rng.permutation(n_points).tolist())
