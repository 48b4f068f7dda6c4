"""Thoma characters and their twisted (alpha, sigma) form.

All evaluation is exact over :class:`fractions.Fraction`.  Characters depend
only on cycle type, so each evaluator reduces ``g`` to its cycle type and
multiplies one power-sum factor per cycle.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import ConfigError
from .gf2 import DualCharacter
from .perm import FinitaryPermutation, compose, cycle_type, inverse


def parse_rational(text: str | int | Fraction) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise ConfigError(f"invalid rational {text!r}") from exc


def format_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _check_sequence(name: str, values: Sequence[Fraction]) -> None:
    for v in values:
        if v <= 0:
            raise ConfigError(f"{name} entries must be positive, got {v}")
    for a, b in zip(values, values[1:]):
        if a < b:
            raise ConfigError(f"{name} must be non-increasing")


@dataclass(frozen=True)
class AlphaSpec:
    """alpha_1 >= ... >= alpha_m > 0 with sum <= 1; alpha0 is the dust mass."""

    alphas: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "alphas", tuple(parse_rational(a) for a in self.alphas))
        _check_sequence("alpha", self.alphas)
        if sum(self.alphas, Fraction(0)) > 1:
            raise ConfigError("alpha sums to more than 1")

    @classmethod
    def parse(cls, items: Iterable[str | Fraction]) -> "AlphaSpec":
        return cls(tuple(parse_rational(x) for x in items))

    @property
    def m(self) -> int:
        return len(self.alphas)

    @property
    def alpha0(self) -> Fraction:
        return 1 - sum(self.alphas, Fraction(0))

    def __getitem__(self, i: int) -> Fraction:
        """alpha_i for 1-based i; alpha_0 is the dust mass."""
        return self.alpha0 if i == 0 else self.alphas[i - 1]

    def probabilities(self) -> np.ndarray:
        """p_alpha over colors 0..m as floats."""
        return np.array([float(self.alpha0)] + [float(a) for a in self.alphas])

    def equal_groups(self) -> list[list[int]]:
        """Maximal runs of equal alpha values, as lists of 1-based indices."""
        groups: list[list[int]] = []
        for i, a in enumerate(self.alphas, start=1):
            if groups and self.alphas[groups[-1][-1] - 1] == a:
                groups[-1].append(i)
            else:
                groups.append([i])
        return groups


@dataclass(frozen=True)
class ThomaParameter:
    beta: tuple[Fraction, ...] = ()
    gamma: tuple[Fraction, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "beta", tuple(parse_rational(b) for b in self.beta))
        object.__setattr__(self, "gamma", tuple(parse_rational(c) for c in self.gamma))
        _check_sequence("beta", self.beta)
        _check_sequence("gamma", self.gamma)
        if sum(self.beta, Fraction(0)) + sum(self.gamma, Fraction(0)) > 1:
            raise ConfigError("sum of beta and gamma exceeds 1")


def _power_sum_factor(beta: Sequence[Fraction], gamma: Sequence[Fraction], k: int) -> Fraction:
    s = sum((b**k for b in beta), Fraction(0))
    t = sum((c**k for c in gamma), Fraction(0))
    return s + t if k % 2 else s - t


def thoma_character(theta: ThomaParameter, g: FinitaryPermutation) -> Fraction:
    """prod_k (sum beta_i^k + (-1)^(k+1) sum gamma_i^k)^(c_k(g))."""
    value = Fraction(1)
    for k, c in cycle_type(g).items():
        value *= _power_sum_factor(theta.beta, theta.gamma, k) ** c
    return value


def chi_sigma_alpha(alpha: AlphaSpec, sigma: DualCharacter, g: FinitaryPermutation) -> Fraction:
    """prod_k (sum_i sigma(i)^(k+1) alpha_i^k)^(c_k(g))."""
    if sigma.width != alpha.m:
        raise ConfigError(f"sigma width {sigma.width} != rank {alpha.m}")
    value = Fraction(1)
    for k, c in cycle_type(g).items():
        factor = Fraction(0)
        for i, a in enumerate(alpha.alphas, start=1):
            term = a**k
            factor += -term if (k % 2 == 0 and sigma.at(i) == -1) else term
        value *= factor**c
    return value


def chi_sigma_alpha_float(alphas: Sequence[float], sigma_signs: Sequence[int], ctype: dict[int, int]) -> float:
    """Floating twin of :func:`chi_sigma_alpha` for Monte Carlo loops."""
    a = np.asarray(alphas, dtype=float)
    s = np.asarray(sigma_signs, dtype=float)
    value = 1.0
    for k, c in ctype.items():
        twist = s if k % 2 == 0 else 1.0
        value *= float(np.sum(twist * a**k)) ** c
    return value


def sigma_split(alpha: AlphaSpec, sigma: DualCharacter) -> ThomaParameter:
    """Send alpha_i to beta when sigma(i) = +1 and to gamma when sigma(i) = -1."""
    if sigma.width != alpha.m:
        raise ConfigError(f"sigma width {sigma.width} != rank {alpha.m}")
    beta = [a for i, a in enumerate(alpha.alphas, 1) if sigma.at(i) == 1]
    gamma = [a for i, a in enumerate(alpha.alphas, 1) if sigma.at(i) == -1]
    return ThomaParameter(tuple(beta), tuple(gamma))


def merge_to_alpha_sigma(theta: ThomaParameter) -> tuple[AlphaSpec, DualCharacter]:
    """Merge beta and gamma into one non-increasing alpha; sigma marks gamma entries.

    Equal values keep beta entries ahead of gamma entries.
    """
    tagged = [(b, 0) for b in theta.beta] + [(c, 1) for c in theta.gamma]
    # stable sort: descending value, then beta (0) before gamma (1)
    tagged.sort(key=lambda t: (-t[0], t[1]))
    alpha = AlphaSpec(tuple(v for v, _ in tagged))
    return alpha, DualCharacter.from_signs([-1 if tag else 1 for _, tag in tagged])


Character = Callable[[FinitaryPermutation], Fraction]


def gram_matrix(chi: Character, elements: Sequence[FinitaryPermutation]) -> list[list[Fraction]]:
    """Matrix of chi(g_j^-1 g_i), the positive-definiteness test matrix."""
    if not elements:
        raise ConfigError("gram_matrix needs at least one element")
    if len(elements) > 8:
        raise ConfigError("gram_matrix is limited to 8 elements")
    invs = [inverse(g) for g in elements]
    return [[chi(compose(invs[j], elements[i])) for j in range(len(elements))] for i in range(len(elements))]


def min_eigenvalue(matrix: Sequence[Sequence[Fraction]]) -> float:
    M = np.array([[float(x) for x in row] for row in matrix])
    return float(np.linalg.eigvalsh(M).min())
