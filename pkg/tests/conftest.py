"""Shared strategies and fixtures.

Random instances stay tiny on purpose: the exact oracles (brute-force
set cover, Fraction simplex, enumerated recursions) are exponential in
depth, and the suite has to stay at desk scale.
"""

import math
import random

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from bowenpress.potentials import AdditivePotential
from bowenpress.systems import SymbolicSystem

settings.register_profile(
    "suite",
    max_examples=40,
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


def connected_transitions(m: int, rng: random.Random):
    """Random m x m 0/1 matrix where every symbol keeps a successor and
    a predecessor; falls back to the full matrix when sparsity breaks
    a row or column."""
    for _ in range(64):
        t = tuple(
            tuple(int(rng.random() < 0.7) for _ in range(m)) for _ in range(m)
        )
        if all(any(row) for row in t) and all(
            any(t[i][j] for i in range(m)) for j in range(m)
        ):
            return t
    return tuple(tuple(1 for _ in range(m)) for _ in range(m))


@st.composite
def small_systems(draw):
    m = draw(st.integers(min_value=2, max_value=3))
    seed = draw(st.integers(min_value=0, max_value=10**6))
    rng = random.Random(seed)
    if draw(st.booleans()):
        return SymbolicSystem(alphabet_size=m)
    return SymbolicSystem(alphabet_size=m,
                          transitions=connected_transitions(m, rng))


@st.composite
def small_potentials(draw, m: int):
    vals = draw(
        st.tuples(*[
            st.floats(min_value=-1.5, max_value=1.5,
                      allow_nan=False, allow_infinity=False)
            for _ in range(m)
        ])
    )
    return AdditivePotential(values=vals)


@st.composite
def shift_instances(draw):
    """(system, potential, big_n, epsilon, depth_cap) small enough for
    the float engines and the brute-force cover search."""
    system = draw(small_systems())
    phi = draw(small_potentials(system.alphabet_size))
    big_n = draw(st.integers(min_value=2, max_value=4))
    eps = draw(st.sampled_from([0.0, 0.1, 0.25, 0.5]))
    from bowenpress.systems import cylinder_length
    base_depth = cylinder_length(big_n, eps, system.log_base)
    slack = draw(st.integers(min_value=0, max_value=2))
    cap = 7 if system.alphabet_size == 2 else 5
    depth = min(base_depth + slack, max(base_depth, cap))
    return system, phi, big_n, eps, depth


@st.composite
def tiny_shift_instances(draw):
    """Small enough for the exact-rational simplex: leaf count stays
    double digit, so dense Fraction tableaus pivot in milliseconds."""
    system = draw(small_systems())
    phi = draw(small_potentials(system.alphabet_size))
    big_n = draw(st.integers(min_value=2, max_value=3))
    eps = draw(st.sampled_from([0.0, 0.25]))
    from bowenpress.systems import cylinder_length
    base_depth = cylinder_length(big_n, eps, system.log_base)
    cap = 5 if system.alphabet_size == 2 else 4
    depth = min(base_depth + draw(st.integers(min_value=0, max_value=1)),
                max(base_depth, cap))
    return system, phi, big_n, eps, depth


@pytest.fixture(scope="session")
def rng():
    return random.Random(20260816)
