import itertools
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import mc_configuration
from thoma_irs.errors import CapExceeded, ConfigError
from thoma_irs.gf2 import all_subspaces, full_space, random_subspace, subspace_from_rows, zero_space
from thoma_irs.irs import (
    Coloring,
    SampledSubgroup,
    balanced_coloring,
    chi_nu_exact,
    class_size_histogram,
    irs_coincidence_check,
    largest_remainder_counts,
    membership,
    membership_batch,
    monte_carlo_chi_nu,
    paintbox_partition,
    sample_coloring,
)
from thoma_irs.perm import FinitaryPermutation, compose, conjugate, inverse, parse_permutation
from thoma_irs.randomized import random_alpha, random_cycles_perm, random_finitary
from thoma_irs.thoma import AlphaSpec, ThomaParameter, thoma_character

P = parse_permutation
HALVES = AlphaSpec.parse(["1/2", "1/2"])
DIAG = subspace_from_rows(2, ["11"])


def chi_by_colorings(alpha, A, g):
    """Sum the product measure over every coloring of supp(g) on which g lies in H."""
    if g.is_identity():
        return F(1)
    pts = sorted(g.support)
    n = max(pts) + 1
    total = F(0)
    for cols in itertools.product(range(alpha.m + 1), repeat=len(pts)):
        weight = F(1)
        for c in cols:
            weight *= alpha[c]
        if not weight:
            continue
        colors = [0] * n
        for x, c in zip(pts, cols):
            colors[x] = c
        H = SampledSubgroup(Coloring(tuple(colors), alpha.m), A, alpha)
        if membership(H, g):
            total += weight
    return total


def H_of(colors, A, alpha=HALVES):
    return SampledSubgroup(Coloring(tuple(colors), alpha.m), A, alpha)


class TestColorings:
    def test_point_mass(self, rng):
        assert sample_coloring(AlphaSpec.parse(["1"]), 5, rng).colors == (1,) * 5

    def test_halves_frequency(self, rng):
        c = sample_coloring(HALVES, 100_000, rng)
        assert abs(c.colors.count(1) / 1e5 - 0.5) <= 0.005

    def test_dust_frequency(self, rng):
        c = sample_coloring(AlphaSpec.parse(["1/2"]), 100_000, rng)
        assert abs(c.dust_count() / 1e5 - 0.5) <= 0.005

    def test_deterministic(self):
        a = AlphaSpec.parse(["1/2", "1/4"])
        assert sample_coloring(a, 50, np.random.default_rng(9)) == sample_coloring(a, 50, np.random.default_rng(9))

    def test_dump_load(self, rng):
        c = sample_coloring(HALVES, 20, rng)
        assert Coloring.load(c.dump(), 2) == c
        assert "\n" not in c.dump()

    @pytest.mark.parametrize("alphas, n, sizes, dust", [
        (["1/2", "1/2"], 6, [3, 3], 0),
        (["2/3", "1/3"], 6, [4, 2], 0),
        (["1/2", "1/3"], 12, [6, 4], 2),
    ])
    def test_balanced_sizes(self, alphas, n, sizes, dust):
        c = balanced_coloring(AlphaSpec.parse(alphas), n)
        assert c.block_sizes() == sizes and c.dust_count() == dust

    def test_largest_remainder(self):
        # quotas 7*(1/3) each: floors 2,2,2 plus the dust gets the leftover last
        assert largest_remainder_counts(AlphaSpec.parse(["1/3", "1/3"]), 7) == [2, 3, 2]
        assert sum(largest_remainder_counts(AlphaSpec.parse(["3/7", "2/7", "1/7"]), 100)) == 100

    @given(st.integers(0, 10**6), st.integers(1, 300))
    def test_balanced_prefixes(self, seed, n):
        a = random_alpha(np.random.default_rng(seed), max_rank=4)
        c = balanced_coloring(a, n)
        counts = [0] * (a.m + 1)
        for j, col in enumerate(c.colors, start=1):
            counts[col] += 1
            for k in range(a.m + 1):
                assert abs(counts[k] - a[k] * j) < 2
        target = largest_remainder_counts(a, n)
        assert counts == target
        assert all(abs(t - a[k] * n) < 1 for k, t in enumerate(target))


class TestMembership:
    def test_full_group(self):
        assert membership(H_of([1, 1, 2, 2], full_space(2)), P("(0 1)"))

    def test_trivial_subgroup(self):
        H = H_of([1, 1, 2, 2], zero_space(2))
        assert not membership(H, P("(0 1)"))
        assert not membership(H, P("(0 1)(2 3)"))
        assert membership(H_of([1, 1, 1, 2, 2], zero_space(2)), P("(0 1 2)"))

    def test_diag(self):
        H = H_of([1, 1, 2, 2], DIAG)
        assert not membership(H, P("(0 1)"))
        assert membership(H, P("(0 1)(2 3)"))

    def test_dust(self):
        assert not membership(H_of([0, 1, 1, 2], full_space(2)), P("(1 2)(0 3)"))
        assert not membership(H_of([0, 0, 1, 1], full_space(2)), P("(0 1)"))

    def test_cross_block(self):
        assert not membership(H_of([1, 2, 2, 1], full_space(2)), P("(0 1)"))

    def test_support_too_large(self):
        with pytest.raises(ConfigError):
            membership(H_of([1, 1], full_space(2)), P("(0 5)"))

    @given(st.integers(0, 10**6))
    def test_subgroup_closure(self, seed):
        rng = np.random.default_rng(seed)
        a = random_alpha(rng, max_rank=4)
        A = random_subspace(a.m, rng)
        H = SampledSubgroup(sample_coloring(a, 12, rng), A, a)
        blocks = {}
        for x, c in enumerate(H.coloring.colors):
            if c:
                blocks.setdefault(c, []).append(x)

        def block_preserving():
            moved = {}
            for pts in blocks.values():
                img = rng.permutation(pts).tolist()
                moved.update(zip(pts, img))
            return FinitaryPermutation(moved)

        members = [h for h in (block_preserving() for _ in range(40)) if membership(H, h)]
        for g, h in zip(members, members[1:]):
            assert membership(H, compose(g, h))
            assert membership(H, inverse(g))

    @given(st.integers(0, 10**6))
    def test_conjugation_equivariance(self, seed):
        rng = np.random.default_rng(seed)
        a = random_alpha(rng, max_rank=3)
        A = random_subspace(a.m, rng)
        xi = sample_coloring(a, 10, rng)
        w = random_finitary(rng, 10)
        w_inv = inverse(w)
        shifted = Coloring(tuple(xi.colors[w_inv(x)] for x in range(10)), a.m)
        g = random_cycles_perm(rng, max_cycles=3, max_len=4, n_points=10)
        H, wH = SampledSubgroup(xi, A, a), SampledSubgroup(shifted, A, a)
        assert membership(H, g) == membership(wH, conjugate(w, g))

    @given(st.integers(0, 10**6))
    def test_locality(self, seed):
        rng = np.random.default_rng(seed)
        a = random_alpha(rng, max_rank=3)
        A = random_subspace(a.m, rng)
        g = random_cycles_perm(rng, max_cycles=2, max_len=3, n_points=8)
        xi = list(sample_coloring(a, 8, rng).colors)
        other = list(sample_coloring(a, 20, rng).colors)
        for x in g.support:
            other[x] = xi[x]
        assert membership(H_of(xi, A, a), g) == membership(H_of(other, A, a), g)

    @given(st.integers(0, 10**6))
    def test_batch_matches_scalar(self, seed):
        rng = np.random.default_rng(seed)
        a = random_alpha(rng, max_rank=4)
        A = random_subspace(a.m, rng)
        g = random_cycles_perm(rng, max_cycles=3, max_len=3, n_points=9)
        colors = np.array([sample_coloring(a, 9, rng).colors for _ in range(30)])
        batch = membership_batch(colors, A, g)
        scalar = [membership(H_of(row.tolist(), A, a), g) for row in colors]
        assert batch.tolist() == scalar


class TestChiNuExact:
    def test_full(self):
        assert chi_nu_exact(HALVES, full_space(2), P("(0 1)")) == F(1, 2)

    def test_diag_transposition(self):
        assert chi_nu_exact(HALVES, DIAG, P("(0 1)")) == 0

    def test_diag_double_transposition(self):
        assert chi_nu_exact(HALVES, DIAG, P("(0 1)(2 3)")) == F(1, 4)

    @pytest.mark.parametrize("A", all_subspaces(2), ids=str)
    def test_three_cycle(self, A):
        assert chi_nu_exact(HALVES, A, P("(0 1 2)")) == F(1, 4)

    def test_identity(self):
        assert chi_nu_exact(HALVES, zero_space(2), FinitaryPermutation()) == 1

    def test_empty_support(self):
        a = AlphaSpec(())
        assert chi_nu_exact(a, zero_space(0), P("(0 1 2)")) == 0
        assert chi_nu_exact(a, zero_space(0), FinitaryPermutation()) == 1

    def test_caps(self):
        g = FinitaryPermutation.from_cycles([[2 * i, 2 * i + 1] for i in range(13)])
        with pytest.raises(CapExceeded):
            chi_nu_exact(HALVES, DIAG, g)
        with pytest.raises(CapExceeded):
            chi_nu_exact(HALVES, DIAG, P("(0 1)(2 3)(4 5)"), work_cap=7)

    def test_width_mismatch(self):
        with pytest.raises(ConfigError):
            chi_nu_exact(HALVES, full_space(3), P("(0 1)"))

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 10**6))
    def test_matches_coloring_enumeration(self, seed):
        rng = np.random.default_rng(seed)
        a = random_alpha(rng, max_rank=3)
        A = random_subspace(a.m, rng)
        g = random_cycles_perm(rng, max_cycles=3, max_len=3, n_points=7)
        assert chi_nu_exact(a, A, g) == chi_by_colorings(a, A, g)

    @given(st.integers(0, 10**6))
    def test_full_group_is_thoma(self, seed):
        rng = np.random.default_rng(seed)
        a = random_alpha(rng)
        g = random_cycles_perm(rng)
        assert chi_nu_exact(a, full_space(a.m), g) == thoma_character(ThomaParameter(a.alphas, ()), g)

    @given(st.integers(0, 10**6))
    def test_conjugation_invariance(self, seed):
        rng = np.random.default_rng(seed)
        a = random_alpha(rng, max_rank=4)
        A = random_subspace(a.m, rng)
        g, h = random_cycles_perm(rng, n_points=12, max_cycles=3), random_finitary(rng, 12)
        assert chi_nu_exact(a, A, conjugate(h, g)) == chi_nu_exact(a, A, g)

    @given(st.integers(0, 10**6))
    def test_monotone_in_A(self, seed):
        rng = np.random.default_rng(seed)
        a = random_alpha(rng, max_rank=4)
        A = random_subspace(a.m, rng)
        B = subspace_from_rows(a.m, A.rows() + random_subspace(a.m, rng).rows())
        g = random_cycles_perm(rng, max_cycles=3)
        assert chi_nu_exact(a, A, g) <= chi_nu_exact(a, B, g)


class TestMonteCarlo:
    def test_full(self):
        rep = monte_carlo_chi_nu(HALVES, full_space(2), P("(0 1)"), 64, 100_000, seed=1)
        assert rep.within(F(1, 2))
        assert rep.stderr == pytest.approx((rep.estimate * (1 - rep.estimate) / 1e5) ** 0.5)

    def test_diag_zero(self):
        rep = monte_carlo_chi_nu(HALVES, DIAG, P("(0 1)"), 64, 100_000, seed=2)
        assert rep.within(0) and rep.estimate == 0.0

    def test_identity(self):
        assert monte_carlo_chi_nu(HALVES, DIAG, FinitaryPermutation(), 8, 1000, seed=3).estimate == 1.0

    def test_reproducible_and_thread_independent(self):
        args = (AlphaSpec.parse(["1/2", "1/4"]), full_space(2), P("(0 1)(2 3)"), 32, 20_000)
        r1 = monte_carlo_chi_nu(*args, seed=7)
        r2 = monte_carlo_chi_nu(*args, seed=7, threads=3)
        assert r1 == r2
        assert monte_carlo_chi_nu(*args, seed=8) != r1

    def test_support_exceeds_prefix(self):
        with pytest.raises(ConfigError):
            monte_carlo_chi_nu(HALVES, DIAG, P("(0 9)"), 8, 100, seed=0)

    def test_report_dict(self):
        rep = monte_carlo_chi_nu(HALVES, DIAG, P("(0 1)"), 4, 10, seed=0, exact=F(0))
        assert set(rep.to_dict()) == {"estimate", "stderr", "trials", "prefix_length", "seed", "exact"}

    def test_consistency_sweep(self):
        rng = np.random.default_rng(11)
        ok = 0
        for j in range(20):
            a, A, g, exact = mc_configuration(rng, 20_000)
            ok += monte_carlo_chi_nu(a, A, g, 16, 20_000, seed=j).within(exact)
        assert ok >= 19


class TestPaintbox:
    def test_single_class(self, rng):
        assert paintbox_partition(AlphaSpec.parse(["1"]), 4, rng) == [[0, 1, 2, 3]]

    def test_all_dust(self, rng):
        assert paintbox_partition(AlphaSpec(()), 4, rng) == [[0], [1], [2], [3]]

    def test_halves_sizes(self, rng):
        parts = paintbox_partition(HALVES, 10_000, rng)
        assert len(parts) == 2 and all(abs(len(p) - 5000) <= 200 for p in parts)
        assert sorted(x for p in parts for x in p) == list(range(10_000))

    def test_histogram_dichotomy(self, rng):
        hist = class_size_histogram(HALVES, 10_000, rng, repetitions=10)
        assert not any(1 < s < 4000 for s in hist)

    def test_histogram_dust(self, rng):
        hist = class_size_histogram(AlphaSpec.parse(["1/2"]), 10_000, rng)
        assert abs(hist[1] - 5000) <= 200

    def test_histogram_single(self, rng):
        assert class_size_histogram(AlphaSpec.parse(["1"]), 500, rng, repetitions=3) == {500: 3}


class TestCoincidence:
    suite = [P(t) for t in ["()", "(0 1)", "(0 1)(2 3)", "(0 1 2)", "(0 1 2 3)", "(0 1)(2 3 4 5)"]]

    def test_equal_alphas(self):
        assert irs_coincidence_check(HALVES, subspace_from_rows(2, ["10"]), subspace_from_rows(2, ["01"]), self.suite)

    def test_unequal_alphas(self):
        a = AlphaSpec.parse(["1/2", "1/3"])
        A1, A2 = subspace_from_rows(2, ["10"]), subspace_from_rows(2, ["01"])
        assert chi_nu_exact(a, A1, P("(0 1)")) == F(1, 4)
        assert chi_nu_exact(a, A2, P("(0 1)")) == F(1, 9)
        assert not irs_coincidence_check(a, A1, A2, self.suite)

    def test_same(self):
        a = AlphaSpec.parse(["1/2", "1/3"])
        assert irs_coincidence_check(a, DIAG, DIAG, self.suite)

    def test_width_mismatch(self):
        with pytest.raises(ConfigError):
            irs_coincidence_check(HALVES, DIAG, full_space(3), self.suite)
