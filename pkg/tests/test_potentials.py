"""Potential sequences: evaluation, sup over balls, variation moduli."""

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from bowenpress.potentials import (
    AdditivePotential,
    CircleLipschitzPotential,
    CocyclePotential,
    TablePotential,
    cosine_function,
    constant_function,
    evaluate,
    sawtooth_function,
    spectral_norm,
    sup_over_ball,
    tempered_report,
    variation,
    variation_brute_force,
    word_value,
)
from bowenpress.systems import (
    CirclePoint,
    CircleSystem,
    Point,
    SymbolicSystem,
    neutralized_ball,
)
from fractions import Fraction

from conftest import small_systems, small_potentials


SYS2 = SymbolicSystem(alphabet_size=2)


def test_additive_is_birkhoff_sum():
    phi = AdditivePotential(values=(0.5, -1.25))
    x = Point(preperiod=(0, 1, 1), period=(0,))
    assert evaluate(SYS2, phi, x, 5) == pytest.approx(0.5 - 1.25 - 1.25 + 1.0)


def test_word_value_matches_evaluate():
    phi = AdditivePotential(values=(0.0, 0.7))
    w = (0, 1, 1, 0, 1)
    x = Point(preperiod=w, period=(0,))
    assert word_value(SYS2, phi, w, 5) == evaluate(SYS2, phi, x, 5)


@given(
    st.integers(min_value=1, max_value=5),
    st.integers(min_value=1, max_value=5),
    st.integers(min_value=0, max_value=255),
)
def test_cocycle_subadditive(n, k, bits):
    mats = (
        ((1.0, 0.3), (0.0, 0.8)),
        ((0.5, 0.0), (0.2, 1.4)),
    )
    phi = CocyclePotential(matrices=mats)
    word = tuple((bits >> i) & 1 for i in range(n + k))
    x = Point(preperiod=word, period=(0,))
    lhs = evaluate(SYS2, phi, x, n + k)
    rhs = evaluate(SYS2, phi, x, k) + evaluate(SYS2, phi, x.shift(k), n)
    assert lhs <= rhs + 1e-9


def test_diagonal_cocycle_equals_additive_on_dominant_row():
    # diag(1,1), diag(2,1): top row dominates, so the norm of a product
    # is 2^{count of symbol 1}, matching symbol weights (0, log 2)
    mats = (((1.0, 0.0), (0.0, 1.0)), ((2.0, 0.0), (0.0, 1.0)))
    coc = CocyclePotential(matrices=mats)
    add = AdditivePotential(values=(0.0, math.log(2.0)))
    x = Point(preperiod=(1, 0, 1, 1, 0, 1), period=(0, 1))
    for n in range(1, 10):
        assert evaluate(SYS2, coc, x, n) == pytest.approx(
            evaluate(SYS2, add, x, n), abs=1e-12
        )


def test_general_cocycle_matches_numpy_norm():
    mats = (((1.0, 0.7), (0.2, 0.9)), ((0.4, 0.0), (1.1, 1.3)))
    phi = CocyclePotential(matrices=mats)
    x = Point(preperiod=(0, 1, 1, 0), period=(1,))
    prod = np.eye(2)
    for j in range(4):
        prod = np.asarray(mats[x.symbol(j)]) @ prod
    assert evaluate(SYS2, phi, x, 4) == pytest.approx(
        math.log(np.linalg.norm(prod, 2))
    )
    assert spectral_norm(np.eye(3)) == pytest.approx(1.0)


def test_table_potential_lookup_and_horizon():
    tables = ({(0,): 1.0, (1,): 2.0}, {(0, 1): 5.0, (1, 0): -1.0,
                                       (0, 0): 0.0, (1, 1): 3.0})
    phi = TablePotential(tables=tables, horizon=2)
    x = Point(preperiod=(0, 1), period=(0,))
    assert evaluate(SYS2, phi, x, 2) == 5.0
    with pytest.raises(ValueError):
        evaluate(SYS2, phi, x, 3)


@given(small_systems(), st.data())
def test_sup_over_shift_ball_is_exact_center_value(system, data):
    phi = data.draw(small_potentials(system.alphabet_size))
    word = [0]
    for _ in range(5):
        nxt = next(
            b for b in range(system.alphabet_size)
            if system.allowed(word[-1], b)
        )
        word.append(nxt)
    x = Point(preperiod=tuple(word), period=(word[-1],)
              if system.allowed(word[-1], word[-1]) else tuple(word[-2:]))
    ball = neutralized_ball(system, x, 3, 0.25)
    sup = sup_over_ball(system, phi, ball)
    assert sup.exact and sup.gap_bound == 0.0
    assert sup.value == evaluate(system, phi, x, 3)


@pytest.mark.parametrize("n", [2, 3, 4])
@pytest.mark.parametrize("eps", [0.0, 0.3])
def test_shift_variation_exactly_zero(n, eps):
    golden = SymbolicSystem(alphabet_size=2, transitions=((1, 1), (1, 0)))
    phi = AdditivePotential(values=(0.2, -0.4))
    bound = variation(golden, phi, n, eps)
    assert bound.upper == 0.0 and bound.exact
    assert variation_brute_force(golden, phi, n, eps) == 0.0


def test_circle_variation_bounds():
    circ = CircleSystem(degree=2)
    phi = CircleLipschitzPotential(func=cosine_function(0.5))
    lip = phi.lipschitz
    assert lip == pytest.approx(2 * math.pi * 0.5)
    for n in (8, 16, 32):
        b = variation(circ, phi, n, 0.2)
        assert 0.0 <= b.lower <= b.upper + 1e-15
        assert b.upper <= lip * n * math.exp(-n * 0.2) + 1e-15


def test_circle_variation_requires_circle_potential():
    circ = CircleSystem(degree=2)
    with pytest.raises(TypeError):
        variation(circ, AdditivePotential(values=(0.0, 0.0)), 8, 0.2)


def test_sawtooth_and_constant_functions():
    saw = sawtooth_function(2.0)
    assert saw(0.25) == pytest.approx(saw(0.75))
    const = constant_function(1.5)
    assert const(0.1) == const(0.9) == 1.5


def test_tempered_report_shift_exact():
    phi = AdditivePotential(values=(0.0, 1.0))
    rep = tempered_report(SYS2, phi, (0.1, 0.2), (2, 4, 8))
    assert rep.verdict == "tempered (exact)"
    assert all(v == 0.0 for v in rep.upper.values())


def test_tempered_report_circle_bounded():
    circ = CircleSystem(degree=2)
    phi = CircleLipschitzPotential(func=cosine_function(0.3))
    rep = tempered_report(circ, phi, (0.1, 0.2, 0.4), (8, 16, 32, 64))
    assert rep.verdict.startswith("tempered")
    for (n, eps), up in rep.upper.items():
        assert up <= phi.lipschitz * n * math.exp(-n * eps) + 1e-15


def test_tempered_report_rejects_adversarial_modulus():
    # inject a variation oracle that never decays: phi_n(eps)/n stuck at 1
    phi = AdditivePotential(values=(0.0, 0.0))
    rep = tempered_report(SYS2, phi, (0.1, 0.2), (2, 4, 8),
                          variation_fn=lambda n, eps: float(n))
    assert rep.verdict == "not tempered on tested grid"


def test_cosine_evaluation_on_circle():
    circ = CircleSystem(degree=2)
    phi = CircleLipschitzPotential(func=cosine_function(1.0))
    x = CirclePoint(coordinate=Fraction(1, 8))
    # orbit 1/8 -> 1/4 -> 1/2: cos(2 pi t) values
    want = math.cos(math.pi / 4) + math.cos(math.pi / 2) + math.cos(math.pi)
    assert evaluate(circ, phi, x, 3) == pytest.approx(want)
