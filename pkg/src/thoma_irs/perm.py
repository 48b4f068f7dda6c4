"""Finitary permutations of the naturals.

A permutation is stored sparsely as the map of its moved points.  Everything
here is immutable and cheap to hash, so permutations can be used as dict keys
and shared freely between threads.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import ConfigError

POINT_BOUND = 1 << 32

_CYCLE_RE = re.compile(r"\(([^()]*)\)")


@dataclass(frozen=True)
class Cycle:
    """A nontrivial cycle, rotated so the first point is the minimum."""

    points: tuple[int, ...]

    def __post_init__(self) -> None:
        pts = self.points
        if len(pts) < 2:
            raise ConfigError(f"cycle of length {len(pts)}")
        if len(set(pts)) != len(pts):
            raise ConfigError(f"repeated point in cycle {pts}")
        if pts[0] != min(pts):
            raise ConfigError(f"cycle {pts} is not in canonical rotation")

    @classmethod
    def canonical(cls, points: Iterable[int]) -> "Cycle":
        pts = tuple(points)
        if not pts:
            raise ConfigError("empty cycle")
        j = pts.index(min(pts))
        return cls(pts[j:] + pts[:j])

    def __len__(self) -> int:
        return len(self.points)

    def __str__(self) -> str:
        return "(" + " ".join(map(str, self.points)) + ")"


class FinitaryPermutation:
    """Bijection of the naturals moving finitely many points.

    ``moved`` holds only non-fixed points.  Composition follows the usual
    right-to-left convention: ``g * h`` applies ``h`` first.
    """

    __slots__ = ("_moved", "_hash")

    def __init__(self, moved: Mapping[int, int] | None = None) -> None:
        m = {int(a): int(b) for a, b in (moved or {}).items() if a != b}
        if set(m) != set(m.values()):
            raise ConfigError("mapping is not a permutation of its support")
        for p in m:
            if p < 0:
                raise ConfigError(f"negative point {p}")
            if p >= POINT_BOUND:
                raise ConfigError(f"point {p} exceeds the supported bound 2^32")
        self._moved = m
        self._hash: int | None = None

    @classmethod
    def identity(cls) -> "FinitaryPermutation":
        return cls()

    @classmethod
    def from_cycles(cls, cycles: Iterable[Iterable[int]]) -> "FinitaryPermutation":
        moved: dict[int, int] = {}
        for c in cycles:
            pts = list(c)
            if len(pts) < 2:
                raise ConfigError(f"cycle of length {len(pts)}")
            for a, b in zip(pts, pts[1:] + pts[:1]):
                if a in moved:
                    raise ConfigError(f"point {a} repeated")
                moved[a] = b
        return cls(moved)

    @classmethod
    def from_array(cls, images: Iterable[int]) -> "FinitaryPermutation":
        """Build from one-line notation on ``{0..n-1}``."""
        return cls(dict(enumerate(images)))

    @property
    def moved(self) -> Mapping[int, int]:
        return dict(self._moved)

    @property
    def support(self) -> frozenset[int]:
        return frozenset(self._moved)

    def __call__(self, x: int) -> int:
        return self._moved.get(x, x)

    def __mul__(self, other: "FinitaryPermutation") -> "FinitaryPermutation":
        return compose(self, other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FinitaryPermutation):
            return NotImplemented
        return self._moved == other._moved

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._moved.items()))
        return self._hash

    def is_identity(self) -> bool:
        return not self._moved

    def max_point(self) -> int:
        """Largest moved point, or -1 for the identity."""
        return max(self._moved, default=-1)

    def __str__(self) -> str:
        return render(self)

    def __repr__(self) -> str:
        return f"FinitaryPermutation({render(self)!r})"


def parse_permutation(text: str) -> FinitaryPermutation:
    """Parse disjoint cycle notation such as ``"(0 1 2)(3 4)"``.

    ``""`` and ``"()"`` give the identity.  Points may not repeat and every
    cycle must have length at least two.
    """
    s = text.strip()
    if s in ("", "()"):
        return FinitaryPermutation()
    cycles = []
    pos = 0
    for m in _CYCLE_RE.finditer(s):
        if s[pos:m.start()].strip():
            raise ConfigError(f"unexpected text {s[pos:m.start()]!r} in {text!r}")
        pos = m.end()
        body = m.group(1).split()
        if not body or not all(tok.isdigit() for tok in body):
            raise ConfigError(f"malformed cycle {m.group(0)!r}")
        if len(body) < 2:
            raise ConfigError(f"cycle of length 1 in {text!r}")
        cycles.append([int(tok) for tok in body])
    if s[pos:].strip() or not cycles:
        raise ConfigError(f"malformed permutation {text!r}")
    return FinitaryPermutation.from_cycles(cycles)


def render(g: FinitaryPermutation) -> str:
    """Canonical cycle notation; the identity prints as ``"()"``."""
    cycles = cycle_decomposition(g)
    if not cycles:
        return "()"
    return "".join(str(c) for c in cycles)


def compose(g: FinitaryPermutation, h: FinitaryPermutation) -> FinitaryPermutation:
    """Return ``g o h`` (apply ``h`` first)."""
    gm, hm = g._moved, h._moved
    out = {}
    for x in gm.keys() | hm.keys():
        y = hm.get(x, x)
        out[x] = gm.get(y, y)
    return FinitaryPermutation(out)


def inverse(g: FinitaryPermutation) -> FinitaryPermutation:
    return FinitaryPermutation({b: a for a, b in g._moved.items()})


def conjugate(h: FinitaryPermutation, g: FinitaryPermutation) -> FinitaryPermutation:
    """Return ``h g h^-1``."""
    # relabel each cycle of g through h
    return FinitaryPermutation({h(a): h(b) for a, b in g._moved.items()})


def cycle_decomposition(g: FinitaryPermutation) -> list[Cycle]:
    seen: set[int] = set()
    cycles = []
    for start in sorted(g._moved):
        if start in seen:
            continue
        pts = [start]
        seen.add(start)
        x = g._moved[start]
        while x != start:
            pts.append(x)
            seen.add(x)
            x = g._moved[x]
        cycles.append(Cycle(tuple(pts)))
    return cycles


def cycle_lengths(g: FinitaryPermutation) -> list[int]:
    return [len(c) for c in cycle_decomposition(g)]


def cycle_type(g: FinitaryPermutation) -> dict[int, int]:
    """Map k -> number of k-cycles (k >= 2)."""
    counts: dict[int, int] = {}
    for k in cycle_lengths(g):
        counts[k] = counts.get(k, 0) + 1
    return dict(sorted(counts.items()))


def sign(g: FinitaryPermutation) -> int:
    parity = sum(k - 1 for k in cycle_lengths(g)) & 1
    return -1 if parity else 1
