"""Finite-n picture: Young subgroups K_n, their linear characters, and induction to S_n.

For a coloring of ``{0..n-1}`` the nonempty color blocks give the Young
subgroup K_n, and H_n = {h in K_n : sign vector of h in A_n} where
A_n = A intersected with the coordinates of nonempty blocks.  The
permutation character ratio of S_n on S_n/H_n equals the mean over the
linear characters of K_n/H_n of the induced-character ratios.

The brute-force functions enumerate all of S_n (n <= 8) and take signs by
counting inversions, so they share no arithmetic with the closed forms.
"""

from __future__ import annotations

import csv
import io
import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Iterable, Sequence

import numpy as np

from .errors import ConfigError
from .gf2 import DualCharacter, Gf2Subspace, _rref, contains_bits, dual_code
from .irs import Coloring, balanced_coloring, chi_nu_exact, sample_coloring
from .perm import FinitaryPermutation, cycle_decomposition
from .thoma import AlphaSpec, format_rational

BRUTE_CAP = 8


@dataclass(frozen=True)
class BlockSystem:
    n: int
    m: int
    blocks: tuple[tuple[int, tuple[int, ...]], ...]  # (i, sorted points), nonempty only
    dust: tuple[int, ...]

    def __post_init__(self) -> None:
        seen = set(self.dust)
        for i, pts in self.blocks:
            if not 1 <= i <= self.m or not pts:
                raise ConfigError(f"bad block {i}: {pts}")
            if seen & set(pts):
                raise ConfigError("blocks overlap")
            seen |= set(pts)
        if seen != set(range(self.n)):
            raise ConfigError("blocks and dust do not cover 0..n-1")

    @property
    def block_map(self) -> dict[int, tuple[int, ...]]:
        return dict(self.blocks)

    @property
    def active(self) -> list[int]:
        """I_n: indices of nonempty blocks."""
        return [i for i, _ in self.blocks]

    @property
    def active_mask(self) -> int:
        mask = 0
        for i in self.active:
            mask |= 1 << (i - 1)
        return mask

    def sizes(self) -> dict[int, int]:
        return {i: len(pts) for i, pts in self.blocks}

    def colors(self) -> np.ndarray:
        col = np.zeros(self.n, dtype=np.int64)
        for i, pts in self.blocks:
            col[list(pts)] = i
        return col

    def young_order(self) -> int:
        """|K_n|."""
        out = 1
        for _, pts in self.blocks:
            out *= factorial(len(pts))
        return out


def blocks_from_coloring(coloring: Coloring) -> BlockSystem:
    blocks: dict[int, list[int]] = {}
    dust = []
    for x, c in enumerate(coloring.colors):
        if c == 0:
            dust.append(x)
        else:
            blocks.setdefault(c, []).append(x)
    return BlockSystem(
        n=len(coloring),
        m=coloring.m,
        blocks=tuple((i, tuple(blocks[i])) for i in sorted(blocks)),
        dust=tuple(dust),
    )


def block_system_from_sizes(sizes: Sequence[int], m: int | None = None) -> BlockSystem:
    """Consecutive blocks 1, 2, ... of the given sizes, no dust."""
    colors = []
    for i, s in enumerate(sizes, start=1):
        colors += [i] * s
    return blocks_from_coloring(Coloring(tuple(colors), m if m is not None else len(sizes)))


def restrict_to_active(A: Gf2Subspace, active_mask: int) -> Gf2Subspace:
    """A_n = A intersected with the coordinate subspace on ``active_mask``.

    Computed as the kernel of projecting A's basis onto the other coordinates.
    """
    comp = ((1 << A.ambient_rank) - 1) & ~active_mask
    pivots: dict[int, tuple[int, int]] = {}  # pivot bit of projection -> (projection, full row)
    kernel = []
    for row in A.basis:
        proj, full = row & comp, row
        for p, (pr, fr) in pivots.items():
            if proj >> p & 1:
                proj ^= pr
                full ^= fr
        if proj:
            pivots[(proj & -proj).bit_length() - 1] = (proj, full)
        else:
            kernel.append(full)
    return Gf2Subspace(A.ambient_rank, _rref(kernel))


@dataclass(frozen=True)
class QuotientDual:
    """Linear characters of K_n trivial on H_n, as width-m vectors supported on I_n."""

    active_mask: int
    restricted: Gf2Subspace
    characters: tuple[DualCharacter, ...]

    def __len__(self) -> int:
        return len(self.characters)

    def __iter__(self):
        return iter(self.characters)


def quotient_dual(A: Gf2Subspace, bs: BlockSystem) -> QuotientDual:
    if A.ambient_rank != bs.m:
        raise ConfigError("subgroup rank does not match block system")
    mask = bs.active_mask
    A_n = restrict_to_active(A, mask)
    # annihilator of A_n inside the coordinates of I_n
    D = restrict_to_active(dual_code(A_n), mask)
    out = [0]
    for r in D.basis:
        out += [v ^ r for v in out]
    chars = tuple(DualCharacter(A.ambient_rank, v) for v in sorted(out))
    return QuotientDual(mask, A_n, chars)


def induced_ratio_single_cycle(bs: BlockSystem, sigma: DualCharacter, k: int) -> Fraction:
    """sigma^{S_n}(g) / sigma^{S_n}(1) for a k-cycle g, via binomial counts."""
    if not 2 <= k <= bs.n:
        raise ConfigError(f"cycle length {k} outside 2..{bs.n}")
    denom = comb(bs.n, k)
    total = 0
    for i, pts in bs.blocks:
        c = comb(len(pts), k)
        total += -c if (k % 2 == 0 and sigma.at(i) == -1) else c
    return Fraction(total, denom)


def product_ratio(bs: BlockSystem, sigma: DualCharacter, g: FinitaryPermutation) -> Fraction:
    """Product of single-cycle ratios over the cycles of g (exact only as n grows)."""
    value = Fraction(1)
    for cyc in cycle_decomposition(g):
        value *= induced_ratio_single_cycle(bs, sigma, len(cyc))
    return value


@lru_cache(maxsize=None)
def _all_perms(n: int) -> np.ndarray:
    return np.array(list(itertools.permutations(range(n))), dtype=np.int8).reshape(-1, n)


def _conjugates(bs: BlockSystem, g: FinitaryPermutation) -> np.ndarray:
    """Row s holds s g s^-1 in one-line form, for every s in S_n."""
    if bs.n > BRUTE_CAP:
        raise ConfigError(f"brute force limited to n <= {BRUTE_CAP}, got {bs.n}")
    if g.max_point() >= bs.n:
        raise ConfigError(f"support of {g} exceeds n = {bs.n}")
    P = _all_perms(bs.n).astype(np.int64)
    g_line = np.array([g(x) for x in range(bs.n)])
    conj = np.empty_like(P)
    # (s g s^-1)(s(x)) = s(g(x))
    np.put_along_axis(conj, P, P[:, g_line], axis=1)
    return conj


def _young_signs(bs: BlockSystem, conj: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(in K_n mask, sign-vector bits) for each row of ``conj``."""
    col = bs.colors()
    ident = np.arange(bs.n)
    in_k = (col[conj] == col[None, :]).all(axis=1)
    if bs.dust:
        dust = list(bs.dust)
        in_k &= (conj[:, dust] == ident[dust]).all(axis=1)
    vec = np.zeros(conj.shape[0], dtype=np.int64)
    for i, pts in bs.blocks:
        inv = np.zeros(conj.shape[0], dtype=np.int64)
        for a, b in itertools.combinations(pts, 2):
            inv += conj[:, a] > conj[:, b]
        vec |= (inv & 1) << (i - 1)
    return in_k, vec


def _sigma_values(sigma: DualCharacter, vec: np.ndarray) -> np.ndarray:
    return 1 - 2 * (np.bitwise_count(vec & sigma.bits) & 1).astype(np.int64)


def induced_ratio_brute(bs: BlockSystem, sigma: DualCharacter, g: FinitaryPermutation) -> Fraction:
    """sigma^{S_n}(g)/sigma^{S_n}(1) by summing sigma over all conjugates landing in K_n."""
    if sigma.width != bs.m:
        raise ConfigError("sigma width does not match block system")
    in_k, vec = _young_signs(bs, _conjugates(bs, g))
    total = int(_sigma_values(sigma, vec)[in_k].sum())
    induced = Fraction(total, bs.young_order())
    degree = factorial(bs.n) // bs.young_order()
    return induced / degree


def perm_char_ratio_brute(bs: BlockSystem, A: Gf2Subspace, g: FinitaryPermutation) -> Fraction:
    """|Fix_{S_n/H_n}(g)| / [S_n : H_n] = |{s : s g s^-1 in H_n}| / n!."""
    if A.ambient_rank != bs.m:
        raise ConfigError("subgroup rank does not match block system")
    in_k, vec = _young_signs(bs, _conjugates(bs, g))
    A_n = restrict_to_active(A, bs.active_mask)
    hits = sum(1 for v in vec[in_k].tolist() if contains_bits(A_n, v))
    return Fraction(hits, factorial(bs.n))


def clifford_average(bs: BlockSystem, A: Gf2Subspace, g: FinitaryPermutation, exact: bool = True) -> Fraction:
    """Mean of induced ratios over the quotient dual.

    ``exact=True`` induces each character by brute force (n <= 8) and equals
    the permutation character ratio.  ``exact=False`` uses the product of
    single-cycle closed forms, valid for any n and exact only in the limit.
    """
    qd = quotient_dual(A, bs)
    ratio = induced_ratio_brute if exact else product_ratio
    return sum((ratio(bs, s, g) for s in qd), Fraction(0)) / len(qd)


@dataclass(frozen=True)
class ConvergenceRow:
    n: int
    ratio: Fraction
    limit: Fraction

    @property
    def abs_error(self) -> Fraction:
        return abs(self.ratio - self.limit)


def convergence_study(
    alpha: AlphaSpec,
    A: Gf2Subspace,
    g: FinitaryPermutation,
    n_schedule: Sequence[int],
    mode: str = "balanced",
    seed: int | None = None,
) -> list[ConvergenceRow]:
    """Clifford-average ratios along ``n_schedule`` against the limit chi_nu_exact.

    ``sampled`` draws one coloring of length max(n) and uses its prefixes;
    ``balanced`` builds a balanced coloring for each n.
    """
    sched = list(n_schedule)
    if not sched or any(b <= a for a, b in zip(sched, sched[1:])):
        raise ConfigError("n_schedule must be nonempty and strictly increasing")
    if g.max_point() >= sched[0]:
        raise ConfigError(f"support of {g} exceeds smallest n = {sched[0]}")
    limit = chi_nu_exact(alpha, A, g)
    if mode == "sampled":
        if seed is None:
            raise ConfigError("sampled mode needs a seed")
        full = sample_coloring(alpha, sched[-1], np.random.default_rng(seed))
        colorings = [Coloring(full.colors[:n], alpha.m) for n in sched]
    elif mode == "balanced":
        colorings = [balanced_coloring(alpha, n) for n in sched]
    else:
        raise ConfigError(f"unknown mode {mode!r}")
    rows = []
    for n, col in zip(sched, colorings):
        bs = blocks_from_coloring(col)
        rows.append(ConvergenceRow(n, clifford_average(bs, A, g, exact=False), limit))
    return rows


def convergence_csv(rows: Iterable[ConvergenceRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "ratio", "ratio_float", "limit", "abs_error"])
    for r in rows:
        w.writerow([r.n, format_rational(r.ratio), repr(float(r.ratio)), format_rational(r.limit), repr(float(r.abs_error))])
    return buf.getvalue()


@dataclass
class GridResult:
    cases: int = 0
    failures: list[dict] | None = None

    @property
    def all_equal(self) -> bool:
        return not self.failures


def oracle_grid(
    ns: Sequence[int],
    colorings_per_n: int,
    seed: int,
    max_rank: int = 3,
    random_g: int = 4,
) -> GridResult:
    """Check the finite Clifford chain on random colorings.

    For each n and each coloring (random alpha of rank <= max_rank), every
    subspace A of S_alpha and every g in the test set must satisfy
    perm_char_ratio_brute == clifford_average(exact), and every single
    k-cycle must satisfy induced_ratio_single_cycle == induced_ratio_brute
    for each linear character of K_n.
    """
    from .gf2 import all_subspaces
    from .randomized import random_alpha, random_cycles_perm

    rng = np.random.default_rng(seed)
    result = GridResult(0, [])
    for n in ns:
        for _ in range(colorings_per_n):
            alpha = random_alpha(rng, max_rank=max_rank)
            bs = blocks_from_coloring(sample_coloring(alpha, n, rng))
            cycles = [FinitaryPermutation.from_cycles([list(range(k))]) for k in range(2, n + 1)]
            extra = [random_cycles_perm(rng, max_cycles=3, max_len=n, n_points=n) for _ in range(random_g)]
            every_sigma = [DualCharacter(alpha.m, b) for b in range(1 << alpha.m) if not b & ~bs.active_mask]
            for k, g in enumerate(cycles, start=2):
                for s in every_sigma:
                    result.cases += 1
                    closed = induced_ratio_single_cycle(bs, s, k)
                    brute = induced_ratio_brute(bs, s, g)
                    if closed != brute:
                        result.failures.append({"check": "single_cycle", "n": n, "sizes": bs.sizes(), "sigma": str(s), "k": k,
                                                "closed": format_rational(closed), "brute": format_rational(brute)})
            for A in all_subspaces(alpha.m):
                for g in [FinitaryPermutation()] + cycles + extra:
                    result.cases += 1
                    lhs = perm_char_ratio_brute(bs, A, g)
                    rhs = clifford_average(bs, A, g)
                    if lhs != rhs:
                        result.failures.append({"check": "clifford", "n": n, "sizes": bs.sizes(), "A": str(A), "g": str(g),
                                                "perm_char": format_rational(lhs), "clifford": format_rational(rhs)})
    return result
