"""chi_{nu^A_alpha} as a Haar average of twisted Thoma characters.

The dual of S_alpha / A is the dual code of A, a finite elementary abelian
2-group, so the Haar integral is an exact mean over its elements.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

import numpy as np

from .errors import ConfigError
from .gf2 import (
    ENUMERATION_CAP,
    DualCharacter,
    Gf2Subspace,
    contains_bits,
    dual_code,
    enumerate_bits,
    full_space,
    sample_uniform_bits,
)
from .irs import EstimateReport, chi_nu_exact, run_chunked, trial_stream
from .perm import FinitaryPermutation, cycle_type, parse_permutation
from .thoma import (
    AlphaSpec,
    ThomaParameter,
    chi_sigma_alpha,
    chi_sigma_alpha_float,
    format_rational,
    merge_to_alpha_sigma,
    sigma_split,
    thoma_character,
)


def dual_characters(A: Gf2Subspace, cap: int = ENUMERATION_CAP) -> list[DualCharacter]:
    return [DualCharacter(A.ambient_rank, v) for v in enumerate_bits(dual_code(A), cap)]


def chi_nu_via_integral(alpha: AlphaSpec, A: Gf2Subspace, g: FinitaryPermutation, cap: int = ENUMERATION_CAP) -> Fraction:
    """Exact mean of chi^sigma_alpha(g) over sigma in the dual code of A."""
    if A.ambient_rank != alpha.m:
        raise ConfigError("subgroup rank does not match alpha")
    sigmas = dual_characters(A, cap)
    return sum((chi_sigma_alpha(alpha, s, g) for s in sigmas), Fraction(0)) / len(sigmas)


def chi_nu_via_integral_mc(
    alpha: AlphaSpec,
    A: Gf2Subspace,
    g: FinitaryPermutation,
    samples: int,
    seed: int,
    threads: int = 1,
    exact: Fraction | None = None,
) -> EstimateReport:
    """Monte Carlo Haar average; stderr is the sample standard deviation / sqrt(samples)."""
    if samples < 1:
        raise ConfigError("samples must be positive")
    if A.ambient_rank != alpha.m:
        raise ConfigError("subgroup rank does not match alpha")
    D = dual_code(A)
    alphas = [float(a) for a in alpha.alphas]
    ctype = cycle_type(g)
    cache: dict[int, float] = {}

    def value(bits: int) -> float:
        if bits not in cache:
            signs = [-1 if bits >> i & 1 else 1 for i in range(alpha.m)]
            cache[bits] = chi_sigma_alpha_float(alphas, signs, ctype)
        return cache[bits]

    def chunk_values(c: int, size: int) -> np.ndarray:
        draws = sample_uniform_bits(D, trial_stream(seed, c), size)
        return np.array([value(b) for b in draws])

    vals = np.concatenate(run_chunked(chunk_values, samples, threads))
    est = float(vals.mean())
    sd = float(vals.std(ddof=1)) if samples > 1 else 0.0
    return EstimateReport(
        estimate=est,
        stderr=sd / math.sqrt(samples),
        trials=samples,
        prefix_length=g.max_point() + 1 if not g.is_identity() else 1,
        seed=seed,
        exact=None if exact is None else format_rational(exact),
    )


def theta_indicator(A: Gf2Subspace, cycle_lengths: list[int], assignment: list[int]) -> int:
    """1 iff the combined sign vector of cycles placed in blocks lies in A."""
    vec = 0
    for k, i in zip(cycle_lengths, assignment):
        if (k + 1) % 2:
            vec ^= 1 << (i - 1)
    return 1 if contains_bits(A, vec) else 0


def theta_pointwise_check(alpha: AlphaSpec, A: Gf2Subspace, cycle_lengths: list[int], assignment: list[int]) -> bool:
    """Compare the dual average of prod sigma(i_l)^(k_l+1) with the membership indicator.

    ``assignment`` holds 1-based block indices.  The average must be exactly
    0 or 1 and must match.
    """
    if len(cycle_lengths) != len(assignment):
        raise ConfigError("cycle_lengths and assignment differ in length")
    if A.ambient_rank != alpha.m:
        raise ConfigError("subgroup rank does not match alpha")
    for i in assignment:
        if not 1 <= i <= alpha.m:
            raise ConfigError(f"block index {i} outside 1..{alpha.m}")
    sigmas = dual_characters(A)
    total = 0
    for s in sigmas:
        prod = 1
        for k, i in zip(cycle_lengths, assignment):
            prod *= s.at(i) ** (k + 1)
        total += prod
    avg = Fraction(total, len(sigmas))
    return avg in (0, 1) and avg == theta_indicator(A, cycle_lengths, assignment)


@dataclass
class DecomposabilityReport:
    verdict: str
    codim: int
    summands: list[dict] = field(default_factory=list)
    witness: dict | None = None

    def to_dict(self) -> dict:
        d = {"verdict": self.verdict, "codim": self.codim, "summands": self.summands}
        if self.witness is not None:
            d["witness"] = self.witness
        return d


def _k_cycle(k: int) -> FinitaryPermutation:
    return FinitaryPermutation.from_cycles([list(range(k))])


def decomposability_report(alpha: AlphaSpec, A: Gf2Subspace) -> DecomposabilityReport:
    """Indecomposable iff A is all of S_alpha; otherwise list the 2^d summands and a witness."""
    if A.ambient_rank != alpha.m:
        raise ConfigError("subgroup rank does not match alpha")
    d = alpha.m - A.dim
    sigmas = dual_characters(A)
    summands = []
    for s in sigmas:
        theta = sigma_split(alpha, s)
        summands.append({
            "sigma": str(s),
            "beta": [format_rational(b) for b in theta.beta],
            "gamma": [format_rational(c) for c in theta.gamma],
        })
    if d == 0:
        return DecomposabilityReport("indecomposable", 0, summands)
    witness = None
    for k in range(2, alpha.m + 3):
        g = _k_cycle(k)
        values = {}
        for s in sigmas:
            values.setdefault(chi_sigma_alpha(alpha, s, g), s)
        if len(values) > 1:
            (v1, s1), (v2, s2) = list(values.items())[:2]
            witness = {
                "g": str(g),
                "sigma_1": str(s1),
                "value_1": format_rational(v1),
                "sigma_2": str(s2),
                "value_2": format_rational(v2),
            }
            break
    return DecomposabilityReport("decomposable", d, summands, witness)


def kernel_of(sigma: DualCharacter) -> Gf2Subspace:
    """{s : sigma(s) = 1}, the dual code of span{sigma}."""
    return dual_code(Gf2Subspace(sigma.width, (sigma.bits,) if sigma.bits else ()))


def mixture_sides(theta: ThomaParameter, g: FinitaryPermutation) -> tuple[Fraction, Fraction]:
    """(chi_{nu^A}(g), chi_{nu^S}(g)/2 + chi_theta(g)/2) for A = ker sigma."""
    alpha, sigma = merge_to_alpha_sigma(theta)
    A = kernel_of(sigma)
    lhs = chi_nu_exact(alpha, A, g)
    rhs = chi_nu_exact(alpha, full_space(alpha.m), g) / 2 + thoma_character(theta, g) / 2
    return lhs, rhs


DEFAULT_MIXTURE_SUITE = ("()", "(0 1)", "(0 1 2)", "(0 1)(2 3)", "(0 1 2 3)", "(0 1 2)(3 4)", "(0 1)(2 3)(4 5)", "(0 1 2 3 4)")


def mixture_identity_check(theta: ThomaParameter, g_suite: Iterable[FinitaryPermutation] | None = None) -> bool:
    suite = [parse_permutation(t) for t in DEFAULT_MIXTURE_SUITE] if g_suite is None else list(g_suite)
    return all(lhs == rhs for lhs, rhs in (mixture_sides(theta, g) for g in suite))
