"""Thoma characters and ergodic invariant random subgroups of the finitary symmetric group."""

from .errors import CapExceeded, ConfigError
from .gf2 import DualCharacter, Gf2Subspace, SignVector, dual_code, full_space, subspace_from_rows, zero_space
from .irs import chi_nu_exact, monte_carlo_chi_nu
from .duality import chi_nu_via_integral, chi_nu_via_integral_mc
from .perm import FinitaryPermutation, parse_permutation
from .thoma import AlphaSpec, ThomaParameter, chi_sigma_alpha, thoma_character

__all__ = [
    "AlphaSpec",
    "CapExceeded",
    "ConfigError",
    "DualCharacter",
    "FinitaryPermutation",
    "Gf2Subspace",
    "SignVector",
    "ThomaParameter",
    "chi_nu_exact",
    "chi_nu_via_integral",
    "chi_nu_via_integral_mc",
    "chi_sigma_alpha",
    "dual_code",
    "full_space",
    "monte_carlo_chi_nu",
    "parse_permutation",
    "subspace_from_rows",
    "thoma_character",
    "zero_space",
]
