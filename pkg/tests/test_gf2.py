import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from thoma_irs.errors import CapExceeded, ConfigError
from thoma_irs.gf2 import (
    DualCharacter,
    SignVector,
    all_subspaces,
    contains,
    dual_code,
    enumerate_elements,
    full_space,
    sample_uniform,
    subspace_from_rows,
    zero_space,
)

S = SignVector.parse


def span_bruteforce(m, rows):
    """Every XOR-combination of the rows, by subset enumeration."""
    out = set()
    for mask in range(1 << len(rows)):
        v = 0
        for j, r in enumerate(rows):
            if mask >> j & 1:
                v ^= r
        out.add(v)
    return out


@st.composite
def subspaces(draw, max_rank=12):
    m = draw(st.integers(0, max_rank))
    rows = draw(st.lists(st.integers(0, (1 << m) - 1), max_size=m + 2))
    return subspace_from_rows(m, [SignVector(m, r) for r in rows]), rows


def test_text_form_coordinate_order():
    assert S("10").bits == 1  # coordinate 1 is leftmost
    assert str(SignVector(3, 0b100)) == "001"
    assert DualCharacter.parse("10").at(1) == -1 and DualCharacter.parse("10").at(2) == 1


class TestFromRows:
    def test_single(self):
        A = subspace_from_rows(2, ["11"])
        assert A.dim == 1 and A.rows() == [S("11")]

    def test_spanning(self):
        assert subspace_from_rows(2, ["10", "01", "11"]) == full_space(2)

    def test_dependent_row(self):
        assert subspace_from_rows(3, ["110", "011", "101"]).dim == 2

    def test_width_mismatch(self):
        with pytest.raises(ConfigError):
            subspace_from_rows(2, ["110"])

    @given(subspaces())
    def test_span_matches_bruteforce(self, data):
        A, rows = data
        assert {s.bits for s in enumerate_elements(A)} == span_bruteforce(A.ambient_rank, rows)

    @given(subspaces())
    def test_canonical(self, data):
        A, rows = data
        # any spanning set of the same space gives the same basis
        assert subspace_from_rows(A.ambient_rank, [s for s in enumerate_elements(A)]) == A
        pivots = A.pivots
        assert list(pivots) == sorted(pivots)
        for p, r in zip(pivots, A.basis):
            assert sum(1 for other in A.basis if other >> p & 1) == 1


class TestContains:
    def test_zero(self):
        assert contains(subspace_from_rows(2, ["11"]), S("00"))

    def test_not_in_span(self):
        assert not contains(subspace_from_rows(2, ["11"]), S("10"))

    def test_sum_of_rows(self):
        assert contains(subspace_from_rows(3, ["110", "011"]), S("101"))

    def test_width_mismatch(self):
        with pytest.raises(ConfigError):
            contains(full_space(2), S("101"))


class TestDual:
    def test_full(self):
        assert dual_code(full_space(2)) == zero_space(2)

    def test_zero(self):
        assert dual_code(zero_space(2)) == full_space(2)

    def test_diagonal(self):
        assert dual_code(subspace_from_rows(2, ["11"])) == subspace_from_rows(2, ["11"])

    @given(subspaces())
    def test_involution_and_dimension(self, data):
        A, _ = data
        D = dual_code(A)
        assert dual_code(D) == A
        assert A.dim + D.dim == A.ambient_rank

    @given(subspaces(max_rank=6))
    def test_orthogonal(self, data):
        A, _ = data
        for a in enumerate_elements(A):
            for s in enumerate_elements(dual_code(A)):
                assert DualCharacter(s.width, s.bits)(a) == 1

    @given(subspaces(max_rank=6))
    def test_dual_is_full_annihilator(self, data):
        A, _ = data
        m = A.ambient_rank
        elems = [s.bits for s in enumerate_elements(A)]
        brute = {v for v in range(1 << m) if all((v & a).bit_count() % 2 == 0 for a in elems)}
        assert {s.bits for s in enumerate_elements(dual_code(A))} == brute


class TestEnumerate:
    def test_dim_zero(self):
        assert enumerate_elements(zero_space(3)) == [S("000")]

    def test_diagonal(self):
        assert enumerate_elements(subspace_from_rows(2, ["11"])) == [S("00"), S("11")]

    def test_full(self):
        assert set(enumerate_elements(full_space(2))) == {S("00"), S("10"), S("01"), S("11")}

    def test_cap(self):
        with pytest.raises(CapExceeded):
            enumerate_elements(full_space(21))
        assert len(enumerate_elements(full_space(3), cap=3)) == 8

    @given(subspaces())
    def test_count_and_membership(self, data):
        A, _ = data
        elems = enumerate_elements(A)
        assert len(elems) == 2**A.dim == len(set(elems))
        assert all(contains(A, s) for s in elems)


class TestSample:
    def test_point_mass(self, rng):
        assert all(sample_uniform(zero_space(3), rng) == S("000") for _ in range(50))

    def test_diagonal_frequency(self, rng):
        A = subspace_from_rows(2, ["11"])
        draws = [sample_uniform(A, rng) for _ in range(100_000)]
        assert abs(sum(d == S("11") for d in draws) / 1e5 - 0.5) <= 0.01
        assert all(contains(A, d) for d in draws[:1000])

    def test_full_rank3_frequencies(self, rng):
        from thoma_irs.gf2 import sample_uniform_bits

        bits = sample_uniform_bits(full_space(3), rng, 100_000)
        counts = np.bincount(bits, minlength=8) / 1e5
        assert np.all(np.abs(counts - 0.125) <= 0.01)


def test_all_subspaces_count():
    # Gaussian binomial sums: 2, 5, 16, 67 subspaces of GF(2)^m for m = 1..4
    assert [len(all_subspaces(m)) for m in range(1, 5)] == [2, 5, 16, 67]
