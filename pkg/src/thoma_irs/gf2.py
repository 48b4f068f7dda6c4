"""The group S_alpha as a GF(2) vector space.

Elements of S_alpha, its subgroups and its dual are all bit vectors of a fixed
width ``m`` (the number of positive alpha entries).  Coordinate ``i``
(1-based, matching the alpha index) lives in bit ``i - 1`` of a Python int.
The text form puts coordinate 1 leftmost, so ``"10"`` is the generator c_1.

Subspaces are stored in canonical reduced row-echelon form with the pivot of
each row at its lowest set bit, which makes subspace equality plain tuple
equality.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import CapExceeded, ConfigError

ENUMERATION_CAP = 20


def _parse_bits(text: str) -> tuple[int, int]:
    text = text.strip()
    if text and set(text) - {"0", "1"}:
        raise ConfigError(f"not a bitstring: {text!r}")
    bits = 0
    for i, ch in enumerate(text):
        if ch == "1":
            bits |= 1 << i
    return len(text), bits


def _format_bits(width: int, bits: int) -> str:
    return "".join("1" if bits >> i & 1 else "0" for i in range(width))


@dataclass(frozen=True, order=True)
class SignVector:
    """An element of S_alpha; bit i-1 set means coordinate i is -1."""

    width: int
    bits: int = 0

    def __post_init__(self) -> None:
        if self.width < 0 or self.bits < 0 or self.bits >> self.width:
            raise ConfigError(f"bits {self.bits:b} do not fit width {self.width}")

    @classmethod
    def parse(cls, text: str) -> "SignVector":
        return cls(*_parse_bits(text))

    @classmethod
    def unit(cls, width: int, i: int) -> "SignVector":
        """The generator c_i (1-based)."""
        return cls(width, 1 << (i - 1))

    def __xor__(self, other: "SignVector") -> "SignVector":
        _check_width(self.width, other.width)
        return SignVector(self.width, self.bits ^ other.bits)

    def __str__(self) -> str:
        return _format_bits(self.width, self.bits)


@dataclass(frozen=True)
class DualCharacter:
    """A homomorphism S_alpha -> {+1, -1}, s -> (-1)^<bits, s>."""

    width: int
    bits: int = 0

    def __post_init__(self) -> None:
        if self.width < 0 or self.bits < 0 or self.bits >> self.width:
            raise ConfigError(f"bits {self.bits:b} do not fit width {self.width}")

    @classmethod
    def parse(cls, text: str) -> "DualCharacter":
        return cls(*_parse_bits(text))

    @classmethod
    def from_signs(cls, signs: Sequence[int]) -> "DualCharacter":
        bits = 0
        for i, e in enumerate(signs):
            if e not in (1, -1):
                raise ConfigError(f"sign {e} is not +1 or -1")
            if e == -1:
                bits |= 1 << i
        return cls(len(signs), bits)

    def __call__(self, s: SignVector) -> int:
        _check_width(self.width, s.width)
        return -1 if (self.bits & s.bits).bit_count() & 1 else 1

    def at(self, i: int) -> int:
        """sigma(i) = sigma(c_i), 1-based."""
        return -1 if self.bits >> (i - 1) & 1 else 1

    def signs(self) -> tuple[int, ...]:
        return tuple(self.at(i) for i in range(1, self.width + 1))

    def is_trivial(self) -> bool:
        return self.bits == 0

    def __str__(self) -> str:
        return _format_bits(self.width, self.bits)


def _check_width(a: int, b: int) -> None:
    if a != b:
        raise ConfigError(f"width mismatch: {a} vs {b}")


def _reduce(basis: dict[int, int], v: int) -> int:
    for p, r in basis.items():
        if v >> p & 1:
            v ^= r
    return v


def _rref(rows: Iterable[int]) -> tuple[int, ...]:
    basis: dict[int, int] = {}  # pivot bit -> row
    for v in rows:
        v = _reduce(basis, v)
        if not v:
            continue
        p = (v & -v).bit_length() - 1
        for q, r in basis.items():
            if r >> p & 1:
                basis[q] = r ^ v
        basis[p] = v
    return tuple(basis[p] for p in sorted(basis))


@dataclass(frozen=True)
class Gf2Subspace:
    """A subgroup A of S_alpha held as a canonical RREF basis of int rows."""

    ambient_rank: int
    basis: tuple[int, ...] = ()

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def pivots(self) -> tuple[int, ...]:
        return tuple((r & -r).bit_length() - 1 for r in self.basis)

    def rows(self) -> list[SignVector]:
        return [SignVector(self.ambient_rank, r) for r in self.basis]

    def __contains__(self, s: SignVector) -> bool:
        return contains(self, s)

    def __str__(self) -> str:
        rows = ",".join(_format_bits(self.ambient_rank, r) for r in self.basis)
        return f"span{{{rows}}}/{self.ambient_rank}"


def subspace_from_rows(ambient_rank: int, rows: Iterable[SignVector | str]) -> Gf2Subspace:
    ints = []
    for r in rows:
        if isinstance(r, str):
            r = SignVector.parse(r)
        _check_width(ambient_rank, r.width)
        ints.append(r.bits)
    return Gf2Subspace(ambient_rank, _rref(ints))


def full_space(m: int) -> Gf2Subspace:
    return Gf2Subspace(m, tuple(1 << i for i in range(m)))


def zero_space(m: int) -> Gf2Subspace:
    return Gf2Subspace(m, ())


def contains(A: Gf2Subspace, s: SignVector) -> bool:
    _check_width(A.ambient_rank, s.width)
    return contains_bits(A, s.bits)


def contains_bits(A: Gf2Subspace, v: int) -> bool:
    for p, r in zip(A.pivots, A.basis):
        if v >> p & 1:
            v ^= r
    return v == 0


def dual_code(A: Gf2Subspace) -> Gf2Subspace:
    """The annihilator {sigma : <sigma, a> = 0 for all a in A}."""
    m = A.ambient_rank
    pivots = A.pivots
    pivot_set = set(pivots)
    rows = []
    for f in range(m):
        if f in pivot_set:
            continue
        v = 1 << f
        for p, r in zip(pivots, A.basis):
            if r >> f & 1:
                v |= 1 << p
        rows.append(v)
    return Gf2Subspace(m, _rref(rows))


def parity_checks(A: Gf2Subspace) -> tuple[int, ...]:
    """Rows of the dual code, so v is in A iff every <v, row> is even."""
    return dual_code(A).basis


def enumerate_elements(A: Gf2Subspace, cap: int = ENUMERATION_CAP) -> list[SignVector]:
    """All 2^dim elements of A in counter order (bit j of the counter picks row j)."""
    return [SignVector(A.ambient_rank, v) for v in enumerate_bits(A, cap)]


def enumerate_bits(A: Gf2Subspace, cap: int = ENUMERATION_CAP) -> list[int]:
    if A.dim > cap:
        raise CapExceeded(f"subspace of dimension {A.dim} exceeds enumeration cap {cap}")
    out = [0]
    for r in A.basis:
        out += [v ^ r for v in out]
    return out


def sample_uniform(A: Gf2Subspace, rng: np.random.Generator) -> SignVector:
    """Haar-random element: an independent fair coin for each basis row."""
    return SignVector(A.ambient_rank, sample_uniform_bits(A, rng, 1)[0])


def sample_uniform_bits(A: Gf2Subspace, rng: np.random.Generator, size: int) -> list[int]:
    if A.dim == 0:
        return [0] * size
    coins = rng.integers(0, 2, size=(size, A.dim), dtype=np.uint8)
    out = []
    for row in coins:
        v = 0
        for c, r in zip(row, A.basis):
            if c:
                v ^= r
        out.append(v)
    return out


def as_character(s: SignVector) -> DualCharacter:
    return DualCharacter(s.width, s.bits)


def all_subspaces(m: int) -> list[Gf2Subspace]:
    """Every subspace of GF(2)^m (small m only)."""
    seen = {zero_space(m)}
    frontier = [zero_space(m)]
    while frontier:
        nxt = []
        for A in frontier:
            for v in range(1, 1 << m):
                if contains_bits(A, v):
                    continue
                B = Gf2Subspace(m, _rref(A.basis + (v,)))
                if B not in seen:
                    seen.add(B)
                    nxt.append(B)
        frontier = nxt
    return sorted(seen, key=lambda S: (S.dim, S.basis))


def random_subspace(m: int, rng: np.random.Generator) -> Gf2Subspace:
    """Span of a random number of uniformly random vectors."""
    if m == 0:
        return zero_space(0)
    k = int(rng.integers(0, m + 1))
    rows = [int(rng.integers(0, 1 << m)) for _ in range(k)]
    return Gf2Subspace(m, _rref(rows))
