"""The ergodic invariant random subgroups nu^A_alpha.

A coloring xi assigns each point of a finite prefix ``{0..n-1}`` a color in
``{0} | I`` (0 is dust).  The subgroup H_xi consists of permutations that
preserve every color block, move no dust point, and whose per-block sign
vector lies in A.  Whether a fixed ``g`` lies in H_xi depends only on xi
restricted to supp(g), so a finite prefix covering the support loses nothing.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import CapExceeded, ConfigError
from .gf2 import Gf2Subspace, contains_bits, parity_checks, zero_space
from .perm import FinitaryPermutation, cycle_decomposition, sign
from .thoma import AlphaSpec, format_rational

CYCLE_CAP = 12
WORK_CAP = 1 << 24
CHUNK = 8192


@dataclass(frozen=True)
class Coloring:
    colors: tuple[int, ...]
    m: int

    def __post_init__(self) -> None:
        for c in self.colors:
            if not 0 <= c <= self.m:
                raise ConfigError(f"color {c} outside 0..{self.m}")

    def __len__(self) -> int:
        return len(self.colors)

    def block_sizes(self) -> list[int]:
        """Sizes of blocks 1..m (dust excluded)."""
        counts = [0] * (self.m + 1)
        for c in self.colors:
            counts[c] += 1
        return counts[1:]

    def dust_count(self) -> int:
        return self.colors.count(0)

    def dump(self) -> str:
        return " ".join(map(str, self.colors))

    @classmethod
    def load(cls, text: str, m: int) -> "Coloring":
        try:
            return cls(tuple(int(tok) for tok in text.split()), m)
        except ValueError as exc:
            raise ConfigError(f"bad coloring dump: {exc}") from exc


@dataclass(frozen=True)
class SampledSubgroup:
    """H_xi = s_xi^-1(A), represented by its defining data."""

    coloring: Coloring
    subgroup: Gf2Subspace
    alpha: AlphaSpec

    def __post_init__(self) -> None:
        if self.subgroup.ambient_rank != self.alpha.m or self.coloring.m != self.alpha.m:
            raise ConfigError("subgroup, coloring and alpha ranks disagree")

    def __contains__(self, g: FinitaryPermutation) -> bool:
        return membership(self, g)


@dataclass
class EstimateReport:
    estimate: float
    stderr: float
    trials: int
    prefix_length: int
    seed: int
    exact: str | None = field(default=None)

    def to_dict(self) -> dict:
        d = asdict(self)
        if d["exact"] is None:
            del d["exact"]
        return d

    def within(self, exact: Fraction | float, n_stderr: float = 4.0) -> bool:
        return abs(self.estimate - float(exact)) <= n_stderr * self.stderr


def _colors_from_uniform(u: np.ndarray, cumulative: np.ndarray) -> np.ndarray:
    idx = np.searchsorted(cumulative, u, side="right")
    return np.minimum(idx, len(cumulative) - 1)


def _cumulative(alpha: AlphaSpec) -> np.ndarray:
    # exact cumulative sums, rounded once, so zero-mass colors are never drawn
    acc = Fraction(0)
    out = []
    for i in range(alpha.m + 1):
        acc += alpha[i]
        out.append(float(acc))
    return np.array(out)


def sample_coloring(alpha: AlphaSpec, n: int, rng: np.random.Generator) -> Coloring:
    """n i.i.d. colors from p_alpha (color 0 has mass alpha_0)."""
    if n < 1:
        raise ConfigError("n must be positive")
    colors = _colors_from_uniform(rng.random(n), _cumulative(alpha))
    return Coloring(tuple(int(c) for c in colors), alpha.m)


def largest_remainder_counts(alpha: AlphaSpec, n: int) -> list[int]:
    """Counts for colors 0..m summing to n, each floor or ceil of alpha_c * n.

    Leftover units go to the largest fractional parts; ties favour block
    colors in index order, dust last.
    """
    quotas = [alpha[c] * n for c in range(alpha.m + 1)]
    counts = [math.floor(q) for q in quotas]
    left = n - sum(counts)
    order = sorted(range(alpha.m + 1), key=lambda c: (-(quotas[c] - counts[c]), c == 0, c))
    for c in order[:left]:
        counts[c] += 1
    return counts


def balanced_coloring(alpha: AlphaSpec, n: int) -> Coloring:
    """Deterministic coloring with largest-remainder block sizes.

    Colors are interleaved so that every prefix stays close to proportional:
    position j takes the color whose placed count lags its target share the
    most.
    """
    if n < 1:
        raise ConfigError("n must be positive")
    targets = largest_remainder_counts(alpha, n)
    placed = [0] * (alpha.m + 1)
    colors = []
    for j in range(1, n + 1):
        best = max(
            (c for c in range(alpha.m + 1) if placed[c] < targets[c]),
            key=lambda c: (targets[c] * j - placed[c] * n, -c if c else -(alpha.m + 1)),
        )
        placed[best] += 1
        colors.append(best)
    return Coloring(tuple(colors), alpha.m)


def membership(H: SampledSubgroup, g: FinitaryPermutation) -> bool:
    colors = H.coloring.colors
    if g.max_point() >= len(colors):
        raise ConfigError(f"support of {g} exceeds coloring length {len(colors)}")
    blocks: dict[int, list[int]] = {}
    for x in g.support:
        c = colors[x]
        if c == 0:
            return False
        if colors[g(x)] != c:
            return False
        blocks.setdefault(c, []).append(x)
    vec = 0
    for c, pts in blocks.items():
        restricted = FinitaryPermutation({x: g(x) for x in pts})
        if sign(restricted) == -1:
            vec |= 1 << (c - 1)
    return contains_bits(H.subgroup, vec)


def _check_caps(m: int, t: int, cycle_cap: int, work_cap: int) -> None:
    if t > cycle_cap:
        raise CapExceeded(f"{t} cycles exceeds cycle cap {cycle_cap}")
    if m**t > work_cap:
        raise CapExceeded(f"{m}^{t} index tuples exceeds work cap {work_cap}")


def chi_nu_exact(
    alpha: AlphaSpec,
    A: Gf2Subspace,
    g: FinitaryPermutation,
    cycle_cap: int = CYCLE_CAP,
    work_cap: int = WORK_CAP,
) -> Fraction:
    """Probability that g lies in H_xi, summed over block assignments of its cycles.

    Each assignment i = (i_1..i_t) of cycles to blocks has weight
    prod alpha_{i_l}^{k_l} and counts iff the combined sign vector, with
    parity k_l + 1 at coordinate i_l, lies in A.
    """
    if A.ambient_rank != alpha.m:
        raise ConfigError(f"subgroup rank {A.ambient_rank} != alpha rank {alpha.m}")
    ks = [len(c) for c in cycle_decomposition(g)]
    if not ks:
        return Fraction(1)
    m = alpha.m
    _check_caps(m, len(ks), cycle_cap, work_cap)
    powers = [[a**k for a in alpha.alphas] for k in ks]
    bits = [[((k + 1) & 1) << i for i in range(m)] for k in ks]
    total = Fraction(0)
    for idx in itertools.product(range(m), repeat=len(ks)):
        vec = 0
        for ell, i in enumerate(idx):
            vec ^= bits[ell][i]
        if contains_bits(A, vec):
            w = Fraction(1)
            for ell, i in enumerate(idx):
                w *= powers[ell][i]
            total += w
    return total


def membership_batch(colors: np.ndarray, A: Gf2Subspace, g: FinitaryPermutation) -> np.ndarray:
    """Vectorised membership over the rows of a (trials, n) color array."""
    ok = np.ones(colors.shape[0], dtype=bool)
    vec = np.zeros(colors.shape[0], dtype=np.uint64)
    for cyc in cycle_decomposition(g):
        cols = colors[:, list(cyc.points)]
        first = cols[:, 0]
        ok &= (cols == first[:, None]).all(axis=1) & (first != 0)
        if len(cyc) % 2 == 0:
            shift = np.maximum(first.astype(np.int64) - 1, 0).astype(np.uint64)
            vec ^= np.where(first != 0, np.left_shift(np.uint64(1), shift), np.uint64(0))
    for row in parity_checks(A):
        ok &= np.bitwise_count(vec & np.uint64(row)) % 2 == 0
    return ok


def trial_stream(seed: int, chunk: int) -> np.random.Generator:
    """Generator for trials [chunk*CHUNK, (chunk+1)*CHUNK) of a run."""
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(chunk,)))


def _chunks(trials: int) -> list[tuple[int, int]]:
    return [(c, min(CHUNK, trials - c * CHUNK)) for c in range(math.ceil(trials / CHUNK))]


def run_chunked(fn, trials: int, threads: int = 1) -> list:
    """Apply ``fn(chunk_index, size)`` to every chunk, results in chunk order."""
    chunks = _chunks(trials)
    if threads <= 1:
        return [fn(c, size) for c, size in chunks]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda cs: fn(*cs), chunks))


def indicator_report(hits: int, trials: int, prefix_length: int, seed: int, exact: Fraction | None) -> EstimateReport:
    p = hits / trials
    return EstimateReport(
        estimate=p,
        stderr=math.sqrt(p * (1 - p) / trials),
        trials=trials,
        prefix_length=prefix_length,
        seed=seed,
        exact=None if exact is None else format_rational(exact),
    )


def monte_carlo_chi_nu(
    alpha: AlphaSpec,
    A: Gf2Subspace,
    g: FinitaryPermutation,
    prefix_length: int,
    trials: int,
    seed: int,
    threads: int = 1,
    exact: Fraction | None = None,
) -> EstimateReport:
    """Frequency of g in H_xi over independently sampled prefix colorings.

    Trials are grouped in fixed chunks with one derived stream per chunk, so
    the count does not depend on ``threads``.
    """
    if trials < 1:
        raise ConfigError("trials must be positive")
    if g.max_point() >= prefix_length:
        raise ConfigError(f"support of {g} exceeds prefix length {prefix_length}")
    if A.ambient_rank != alpha.m:
        raise ConfigError("subgroup rank does not match alpha")
    cumulative = _cumulative(alpha)

    def chunk_hits(c: int, size: int) -> int:
        rng = trial_stream(seed, c)
        colors = _colors_from_uniform(rng.random((size, prefix_length)), cumulative)
        return int(membership_batch(colors, A, g).sum())

    hits = sum(run_chunked(chunk_hits, trials, threads))
    return indicator_report(hits, trials, prefix_length, seed, exact)


def paintbox_partition(alpha: AlphaSpec, n: int, rng: np.random.Generator) -> list[list[int]]:
    """Kingman partition of {0..n-1}: one class per nonempty block, dust as singletons."""
    return partition_from_coloring(sample_coloring(alpha, n, rng))


def partition_from_coloring(coloring: Coloring) -> list[list[int]]:
    blocks: dict[int, list[int]] = {}
    classes = []
    for x, c in enumerate(coloring.colors):
        if c == 0:
            classes.append([x])
        else:
            if c not in blocks:
                blocks[c] = []
                classes.append(blocks[c])
            blocks[c].append(x)
    return classes


def class_size_histogram(alpha: AlphaSpec, n: int, rng: np.random.Generator, repetitions: int = 1) -> dict[int, int]:
    """Number of classes of each size, pooled over independent partitions."""
    if n < 1:
        raise ConfigError("n must be positive")
    cumulative = _cumulative(alpha)
    hist: dict[int, int] = {}
    for _ in range(repetitions):
        colors = _colors_from_uniform(rng.random(n), cumulative)
        counts = np.bincount(colors, minlength=alpha.m + 1)
        if counts[0]:
            hist[1] = hist.get(1, 0) + int(counts[0])
        for size in counts[1:]:
            if size:
                hist[int(size)] = hist.get(int(size), 0) + 1
    return dict(sorted(hist.items()))


def permute_coordinates(A: Gf2Subspace, perm: Sequence[int]) -> Gf2Subspace:
    """Image of A under coordinate i -> perm[i] (0-based)."""
    from .gf2 import _rref

    rows = []
    for r in A.basis:
        v = 0
        for i in range(A.ambient_rank):
            if r >> i & 1:
                v |= 1 << perm[i]
        rows.append(v)
    return Gf2Subspace(A.ambient_rank, _rref(rows))


def equal_alpha_images(alpha: AlphaSpec, A: Gf2Subspace) -> set[Gf2Subspace]:
    """Orbit of A under permutations of coordinates with equal alpha."""
    groups = [[i - 1 for i in grp] for grp in alpha.equal_groups()]
    images = set()
    for choice in itertools.product(*(itertools.permutations(grp) for grp in groups)):
        perm = list(range(alpha.m))
        for grp, img in zip(groups, choice):
            for src, dst in zip(grp, img):
                perm[src] = dst
        images.add(permute_coordinates(A, perm))
    return images


def irs_coincidence_check(
    alpha: AlphaSpec,
    A1: Gf2Subspace,
    A2: Gf2Subspace,
    g_suite: Iterable[FinitaryPermutation],
) -> bool:
    """True iff nu^A1 and nu^A2 agree on the suite and A2 is an equal-alpha relabelling of A1."""
    if A1.ambient_rank != A2.ambient_rank:
        raise ConfigError("subgroups have different widths")
    if A1.ambient_rank != alpha.m:
        raise ConfigError("subgroup rank does not match alpha")
    for g in g_suite:
        if chi_nu_exact(alpha, A1, g) != chi_nu_exact(alpha, A2, g):
            return False
    return A2 in equal_alpha_images(alpha, A1)


def trivial_irs_subgroup(alpha: AlphaSpec) -> Gf2Subspace:
    """For alpha with empty support the only subgroup is the zero space of rank 0."""
    return zero_space(alpha.m)
