import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)


def array_compose(g_line, h_line):
    """(g o h) on one-line arrays: apply h first."""
    return [g_line[h_line[x]] for x in range(len(h_line))]


def inversion_sign(line):
    inv = sum(1 for i in range(len(line)) for j in range(i + 1, len(line)) if line[i] > line[j])
    return -1 if inv % 2 else 1


def mc_configuration(rng, trials, max_rank=4, max_cycles=2, max_len=4, n_points=16, min_hits=30):
    """Random (alpha, A, g, exact) whose exact value is 0, 1, or gives >= min_hits expected hits.

    The plug-in Bernoulli stderr collapses to 0 when no hit is observed, so
    configurations with a vanishing expected hit count carry no information
    about the +-4 stderr band and are redrawn.
    """
    from thoma_irs.gf2 import random_subspace
    from thoma_irs.irs import chi_nu_exact
    from thoma_irs.randomized import random_alpha, random_cycles_perm

    while True:
        a = random_alpha(rng, max_rank=max_rank)
        A = random_subspace(a.m, rng)
        g = random_cycles_perm(rng, max_cycles=max_cycles, max_len=max_len, n_points=n_points)
        exact = chi_nu_exact(a, A, g)
        if exact in (0, 1) or min(exact, 1 - exact) * trials >= min_hits:
            return a, A, g, exact
