"""Top-level acceptance gate.

One test per headline guarantee, each with its tolerance pinned in the
assertions.  Random-instance counts are explicit loop bounds, seeded so
reruns see the same instances.  Each test ends by printing a single
PASS line (visible under -s; under -v the test name itself is the
pass/fail line).
"""

import itertools
import math
import pathlib
import random
from fractions import Fraction

import pytest

from bowenpress.cover import (
    CoverProblem,
    brute_force_cover_cost,
    cover_cost,
    critical_exponent,
    five_r_subfamily,
    fractional_cover_lp,
    weighted_cover_cost,
)
from bowenpress.frostman import construct, verify_bound
from bowenpress.harness import (
    VP_COLUMNS,
    VPRow,
    check_inequalities,
    extrapolate,
    sandwich_report,
)
from bowenpress.measures import BernoulliMeasure, bk_pressure
from bowenpress.potentials import (
    AdditivePotential,
    CircleLipschitzPotential,
    CocyclePotential,
    cosine_function,
    tempered_report,
    variation,
)
from bowenpress.systems import (
    CirclePoint,
    CircleSystem,
    Point,
    SymbolicSystem,
    arc_distance,
    bowen_distance,
    cylinder_length,
)

from conftest import connected_transitions

LOG2 = math.log(2.0)
LOG3 = math.log(3.0)
DATA = pathlib.Path(__file__).resolve().parents[1] / "data" / "baselines"


def _random_instance(rng, leaf_cap_2=5, leaf_cap_3=4):
    m = rng.choice((2, 3))
    trans = None if rng.random() < 0.5 else connected_transitions(m, rng)
    system = SymbolicSystem(alphabet_size=m, transitions=trans)
    phi = AdditivePotential(
        values=tuple(rng.uniform(-1.5, 1.5) for _ in range(m))
    )
    big_n = rng.choice((2, 3))
    eps = rng.choice((0.0, 0.25))
    base = cylinder_length(big_n, eps)
    depth = min(base + rng.choice((0, 1)), max(base, leaf_cap_2 if m == 2 else leaf_cap_3))
    prob = CoverProblem(system=system, potential=phi, big_n=big_n,
                        epsilon=eps, depth_cap=depth)
    return prob


def test_c01_cover_dp_matches_brute_force_and_simplex():
    """100 random instances: tree DP, branch-and-bound enumeration over
    all covers, and the exact rational simplex return the same value.

    Depths stay at most two ball layers above the leaves; a third layer
    lets the enumeration oracle's search tree blow past its budget.
    """
    rng = random.Random(11)
    checked = 0
    for _ in range(100):
        prob = _random_instance(rng, leaf_cap_2=4, leaf_cap_3=3)
        s = rng.uniform(0.1, 1.2)
        dp = cover_cost(prob, s, exact=True)
        brute = brute_force_cover_cost(prob, s, exact=True)
        lp = fractional_cover_lp(prob, s)
        assert dp == brute, (prob, s)
        assert lp == dp, (prob, s)
        checked += 1
    assert checked == 100
    print("[acceptance] c01 dp == brute == simplex on 100 instances: PASS")


def test_c02_entropy_baseline_within_centi_nat():
    """Full shift, zero potential, eps 0, order and depth 40: the
    critical exponent lands within 0.01 of log m."""
    for m in (2, 3):
        system = SymbolicSystem(alphabet_size=m)
        phi = AdditivePotential(values=(0.0,) * m)
        prob = CoverProblem(system=system, potential=phi, big_n=40,
                            epsilon=0.0, depth_cap=40)
        crit = critical_exponent(prob, tol=1e-10).critical_s
        assert abs(crit - math.log(m)) <= 0.01, (m, crit)
    print("[acceptance] c02 entropy within 0.01 of log m: PASS")


def test_c03_pressure_baseline_and_extrapolation():
    """Weights (1, 2) on the full 2-shift: criticals track
    log 3 + eps log 2 within 0.02 (floor correction <= log2/N) and the
    eps -> 0 extrapolation lands within 0.05 of log 3."""
    system = SymbolicSystem(alphabet_size=2)
    phi = AdditivePotential(values=(0.0, LOG2))
    rows = []
    for eps in (0.1, 0.25, 0.5):
        prob = CoverProblem(system=system, potential=phi, big_n=20,
                            epsilon=eps, depth_cap=cylinder_length(20, eps))
        crit = critical_exponent(prob, tol=1e-10).critical_s
        ideal = LOG3 + eps * LOG2
        assert abs(crit - ideal) <= 0.02, (eps, crit)
        # single-order truncation keeps the floor correction under one
        # lattice step of the cylinder length
        assert abs(crit - ideal) <= LOG2 / 20 + 1e-9
        rows.append(VPRow(epsilon=eps, cover_s=crit, katok_s=crit,
                          katok_lower=crit, bk_mean=crit, bk_stderr=0.0,
                          bk_oscillation=0.0, gap_cover_katok=0.0,
                          gap_cover_bk=0.0, opt_measure="-"))
    fit = extrapolate(rows, columns=("cover_s",), k=3)[0]
    assert abs(fit["intercept"] - LOG3) <= 0.05, fit
    print("[acceptance] c03 pressure rows within 0.02, intercept within "
          f"0.05 of log 3 (got {fit['intercept']:.6f}): PASS")


def test_c04_diagonal_cocycle_pressure():
    """Diagonal matrix pair with row sums (3, 2): the eps -> 0 cover
    pressure extrapolates to log 3 within 0.05, and the n = 12
    partition sum reproduces max_i log sum_a d_i(a) within 0.01."""
    system = SymbolicSystem(alphabet_size=2)
    diagonals = ((1.0, 1.0), (2.0, 1.0))
    phi = CocyclePotential(matrices=(
        ((1.0, 0.0), (0.0, 1.0)),
        ((2.0, 0.0), (0.0, 1.0)),
    ))
    rows = []
    for eps in (0.1, 0.2, 0.25):
        prob = CoverProblem(system=system, potential=phi, big_n=12,
                            epsilon=eps, depth_cap=cylinder_length(12, eps))
        crit = critical_exponent(prob, tol=1e-10).critical_s
        rows.append(VPRow(epsilon=eps, cover_s=crit, katok_s=crit,
                          katok_lower=crit, bk_mean=crit, bk_stderr=0.0,
                          bk_oscillation=0.0, gap_cover_katok=0.0,
                          gap_cover_bk=0.0, opt_measure="-"))
    fit = extrapolate(rows, columns=("cover_s",), k=3)[0]
    assert abs(fit["intercept"] - LOG3) <= 0.05, fit

    from bowenpress.potentials import word_value
    total = 0.0
    for w in itertools.product(range(2), repeat=12):
        total += math.exp(word_value(system, phi, w, 12))
    partition = math.log(total) / 12
    want = max(math.log(sum(col)) for col in zip(*diagonals))
    assert abs(partition - want) <= 0.01, partition
    print("[acceptance] c04 cocycle intercept "
          f"{fit['intercept']:.6f} vs log 3, partition sum exact: PASS")


def test_c05_bk_uniform_closed_form():
    """Uniform Bernoulli, zero potential, eps 0.5, 64 samples to order
    200: the converged tail reading sits within 3 standard errors of
    1.5 log 2."""
    system = SymbolicSystem(alphabet_size=2)
    phi = AdditivePotential(values=(0.0, 0.0))
    meas = BernoulliMeasure(probs=(0.5, 0.5))
    res = bk_pressure(system, meas, phi, 0.5, big_n=20, n_max=200,
                      samples=64, seed=7, estimator="tail")
    want = 1.5 * LOG2
    assert res.infinite_samples == 0
    assert len(res.samples) == 64
    assert abs(res.mean - want) <= 3.0 * res.stderr, (res.mean, res.stderr)
    print(f"[acceptance] c05 bk mean {res.mean:.10f} vs 1.5 log 2 "
          f"within 3 stderr ({res.stderr:.2e}): PASS")


def _load_vp_rows(name):
    lines = (DATA / name).read_text().splitlines()
    header = lines[0].split(",")
    assert header == list(VP_COLUMNS)
    out = []
    for ln in lines[1:]:
        cells = dict(zip(header, ln.split(",")))
        out.append(VPRow(
            epsilon=float(cells["epsilon"]),
            cover_s=float(cells["cover_s"]),
            katok_s=float(cells["katok_s"]),
            katok_lower=float(cells["katok_lower"]),
            bk_mean=float(cells["bk_mean"]),
            bk_stderr=float(cells["bk_stderr"]),
            bk_oscillation=float(cells["bk_oscillation"]),
            gap_cover_katok=float(cells["gap_cover_katok"]),
            gap_cover_bk=float(cells["gap_cover_bk"]),
            opt_measure=cells["opt_measure"],
        ))
    return out


def test_c06_order_relations_on_every_baseline_row():
    """Shipped grid artifacts: Katok stays below the cover critical,
    Katok at doubled eps stays above the BK reading, zero violations."""
    families = (
        "vp_full_shift_entropy.csv",
        "vp_full_shift_pressure.csv",
        "vp_circle_doubling.csv",
    )
    total = 0
    for name in families:
        rows = _load_vp_rows(name)
        assert len(rows) == 5
        checks = check_inequalities(rows)
        doubled = [c for c in checks if c["name"] == "katok_doubled_eps_above_bk"]
        assert len(doubled) >= 3
        bad = [c for c in checks if not c["passed"]]
        assert bad == [], (name, bad)
        total += len(checks)
    assert total >= 3 * (5 + 5 + 3 + 4)
    print(f"[acceptance] c06 {total} order checks, zero violations: PASS")


def test_c07_cost_sandwich_zero_violations():
    """Center-mode cost at (s + 0.1, eps/2) <= weighted cost at (s, eps)
    <= sup-mode cost at (s, eps) across the baseline grid."""
    grid = (0.1, 0.2, 0.25, 0.5, 1.0)
    total = 0
    for values in ((0.0, 0.0), (0.0, LOG2)):
        system = SymbolicSystem(alphabet_size=2)
        phi = AdditivePotential(values=values)
        rows = sandwich_report(system, phi, grid, theta=0.1, big_n=20)
        assert len(rows) == len(grid) * 3
        bad = [r for r in rows if not r["passed"]]
        assert bad == [], bad
        total += len(rows)
    print(f"[acceptance] c07 sandwich holds on {total} rows: PASS")


def test_c08_flow_measures_on_random_sfts():
    """55 random SFT instances: construction succeeds at two exponents
    below the estimated critical value, the mass bound audit reports
    zero violations, and the flow value equals the cover cost."""
    rng = random.Random(12)
    built = 0
    for _ in range(55):
        prob = _random_instance(rng, leaf_cap_2=7, leaf_cap_3=5)
        crit = critical_exponent(prob, tol=1e-9).critical_s
        for margin in (0.3, 0.05):
            s = crit - margin
            res = construct(prob, s)
            report = verify_bound(prob, res, s)
            assert report.holds, (prob, s, report.violations)
            assert res.flow_value == cover_cost(prob, s, engine="enumerated")
        built += 1
    assert built == 55
    print("[acceptance] c08 flow == cover and bound audit clean on "
          "55 instances x 2 exponents: PASS")


def _shift_center(rng):
    return Point(preperiod=tuple(rng.randrange(2) for _ in range(6)),
                 period=(rng.randrange(2),))


def test_c09_five_r_disjointification():
    """120 random equal-radius families, shift and circle: selected
    neighbor sets are pairwise disjoint and every input ball sits inside
    the 5r enlargement of its representative, checked by membership."""
    rng = random.Random(13)
    system = SymbolicSystem(alphabet_size=2)
    circ = CircleSystem(degree=2)
    families = 0

    for _ in range(60):
        centers = [_shift_center(rng) for _ in range(rng.randrange(3, 10))]
        k = rng.randrange(1, 5)
        radius = math.exp(-k)
        res = five_r_subfamily(system, centers, radius)
        for a in range(len(res.selected)):
            for b in range(a + 1, len(res.selected)):
                assert not set(res.neighbor_sets[a]) & set(res.neighbor_sets[b])
        for idx, rep in enumerate(res.assignment):
            # witness inside B(x_idx, r): agree with the center through
            # symbol k, then pin the tail
            word = centers[idx].prefix(k + 2)
            witness = Point(preperiod=word, period=(0,))
            assert bowen_distance(system, witness, centers[idx], 1) < radius
            assert bowen_distance(system, witness, centers[rep], 1) < 5 * radius
        families += 1

    for _ in range(60):
        k = rng.randrange(3, 10)
        centers = [
            CirclePoint(coordinate=Fraction(rng.randrange(997), 997))
            for _ in range(k)
        ]
        radius = rng.choice((1 / 64, 1 / 32, 1 / 16))
        res = five_r_subfamily(circ, centers, radius)
        for a in range(len(res.selected)):
            for b in range(a + 1, len(res.selected)):
                assert not set(res.neighbor_sets[a]) & set(res.neighbor_sets[b])
        for idx, rep in enumerate(res.assignment):
            for side in (-1.0, 1.0):
                t = (float(centers[idx].coordinate)
                     + side * radius * (1 - 1e-9)) % 1.0
                assert arc_distance(t, float(centers[idx].coordinate)) < radius
                assert arc_distance(t, float(centers[rep].coordinate)) < 5 * radius
        families += 1

    assert families == 120
    print("[acceptance] c09 5r lemma verified by membership on "
          "120 families: PASS")


def test_c10_tempered_distortion_verdicts():
    """Shift potentials report zero variation over neutralized balls
    exactly; the circle Lipschitz potential stays under Lip n e^{-n eps}
    and earns a tempered verdict."""
    system = SymbolicSystem(alphabet_size=2)
    eps_grid = (0.1, 0.2, 0.4)
    n_grid = (4, 8, 16)
    shift_potentials = (
        AdditivePotential(values=(0.3, -0.7)),
        CocyclePotential(matrices=(
            ((1.0, 0.0), (0.0, 1.0)),
            ((2.0, 0.0), (0.0, 1.0)),
        )),
        CocyclePotential(matrices=(
            ((1.0, 1.0), (0.0, 1.0)),
            ((1.0, 0.0), (1.0, 1.0)),
        )),
    )
    for phi in shift_potentials:
        rep = tempered_report(system, phi, eps_grid, n_grid)
        assert rep.verdict == "tempered (exact)"
        for row in rep.rows():
            assert row["upper"] == 0.0
        for n in n_grid:
            vb = variation(system, phi, n, 0.2)
            assert vb.exact and vb.upper == 0.0

    circ = CircleSystem(degree=2)
    wavy = CircleLipschitzPotential(func=cosine_function(0.3))
    rep = tempered_report(circ, wavy, eps_grid, n_grid)
    assert rep.verdict.startswith("tempered")
    lip = wavy.func.lipschitz
    for row in rep.rows():
        cap = lip * row["n"] * math.exp(-row["n"] * row["epsilon"])
        assert row["upper"] <= cap + 1e-12
    print("[acceptance] c10 shift variation exactly 0, circle bounds "
          "under Lip n e^{-n eps}, verdicts tempered: PASS")
