"""Reference measures, sampling, and measure-side pressure estimates.

The measure side of the variational principle enters through two
quantities: the almost-sure local exponent

    liminf_n (-log mu(B_n(x, eps)) + phi_n(x)) / n

estimated along sampled orbits, and the Katok-style critical exponent
of the cheapest cover charged only with measure > 1 - delta.  Shift
measures here make both computable in closed loops: dynamical balls are
cylinders, so ball masses are finite products.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import cover as cover_mod
from . import potentials as pot
from .systems import (
    CirclePoint,
    CircleSystem,
    Point,
    SymbolicSystem,
    cylinder_length,
    neutralized_ball,
)


class UnsupportedPointError(ValueError):
    """Sampled or supplied point leaves the measure's support."""


# ---------------------------------------------------------------------------
# measure kinds


@dataclass(frozen=True)
class BernoulliMeasure:
    """Product measure on a full shift; probs must be positive."""

    probs: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "probs", tuple(float(p) for p in self.probs))
        if len(self.probs) < 2:
            raise ValueError("need at least two symbols")
        if any(p <= 0 for p in self.probs):
            raise ValueError("probabilities must be positive")
        if abs(sum(self.probs) - 1.0) > 1e-10:
            raise ValueError(f"probabilities sum to {sum(self.probs)!r}, not 1")

    kind = "bernoulli"

    def word_mass(self, word, exact: bool = False):
        if exact:
            out = Fraction(1)
            for a in word:
                out *= Fraction(self.probs[a])
            return out
        out = 1.0
        for a in word:
            out *= self.probs[a]
        return out

    def katok_adapter(self):
        return _StationaryAdapter(self.probs, None)


@dataclass(frozen=True)
class MarkovMeasure:
    """Stationary Markov chain; initial must be stationary for the rows
    and the support must respect the system's transition table."""

    rows: tuple[tuple[float, ...], ...]
    initial: tuple[float, ...]

    def __post_init__(self):
        rows = tuple(tuple(float(v) for v in r) for r in self.rows)
        init = tuple(float(v) for v in self.initial)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "initial", init)
        m = len(rows)
        if m < 2 or any(len(r) != m for r in rows) or len(init) != m:
            raise ValueError("rows must be square and match the initial vector")
        for r in rows:
            if any(v < 0 for v in r):
                raise ValueError("negative transition probability")
            if abs(sum(r) - 1.0) > 1e-10:
                raise ValueError(f"row sums to {sum(r)!r}, not 1")
        if any(v < 0 for v in init) or abs(sum(init) - 1.0) > 1e-10:
            raise ValueError("initial vector must be a distribution")
        stat = tuple(
            sum(init[i] * rows[i][j] for i in range(m)) for j in range(m)
        )
        err = max(abs(a - b) for a, b in zip(stat, init))
        if err > 1e-10:
            raise ValueError(f"initial vector is not stationary (error {err:.2e})")

    kind = "markov"

    def word_mass(self, word, exact: bool = False):
        if not word:
            return Fraction(1) if exact else 1.0
        if exact:
            out = Fraction(self.initial[word[0]])
            for a, b in zip(word, word[1:]):
                out *= Fraction(self.rows[a][b])
            return out
        out = self.initial[word[0]]
        for a, b in zip(word, word[1:]):
            out *= self.rows[a][b]
        return out

    def katok_adapter(self):
        return _StationaryAdapter(self.initial, self.rows)


@dataclass(frozen=True)
class LebesgueMeasure:
    """Arc length on the circle."""

    kind = "lebesgue"

    def katok_adapter(self):
        raise TypeError("circle covers take the mass target directly")


@dataclass(frozen=True)
class TreeMeasure:
    """Measure given by masses of all cylinders down to a fixed depth,
    as produced by the mass-distribution construction; word_mass deeper
    than the stored depth is undefined."""

    depth: int
    masses: dict = field(hash=False)

    kind = "tree"

    def word_mass(self, word, exact: bool = False):
        word = tuple(word)
        if len(word) > self.depth:
            raise ValueError(
                f"mass of a depth-{len(word)} cylinder exceeds the stored "
                f"depth {self.depth}"
            )
        v = self.masses.get(word, Fraction(0))
        return v if exact else float(v)

    def katok_adapter(self):
        raise TypeError("tree measures are not stationary; no mass adapter")


class _StationaryAdapter:
    """root/step mass factors consumed by the mass-constrained cover."""

    def __init__(self, initial, rows):
        self.initial = initial
        self.rows = rows

    def root(self, a, exact: bool = False):
        v = self.initial[a]
        return Fraction(v) if exact else v

    def step(self, prev, a, exact: bool = False):
        v = self.initial[a] if self.rows is None else self.rows[prev][a]
        return Fraction(v) if exact else v


def ball_mass(system, measure, ball, exact: bool = False):
    """Measure of a dynamical ball: cylinder mass on a shift, arc length
    under Lebesgue on the circle."""
    if isinstance(system, SymbolicSystem):
        return measure.word_mass(ball.word, exact=exact)
    if measure.kind != "lebesgue":
        raise TypeError(f"no circle ball mass for measure kind {measure.kind!r}")
    if exact:
        raise ValueError("circle arc masses are not exact rationals here")
    return min(2.0 * ball.radius, 1.0)


# ---------------------------------------------------------------------------
# sampling


def _cycle_from(system: SymbolicSystem, start: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Deterministic admissible continuation: walk least-allowed
    successors until a symbol repeats, split into (bridge, cycle)."""
    path = [start]
    seen = {start: 0}
    while True:
        cur = path[-1]
        nxt = next(b for b in range(system.alphabet_size) if system.allowed(cur, b))
        if nxt in seen:
            i = seen[nxt]
            return tuple(path[1:i + 1]), tuple(path[i:])
        seen[nxt] = len(path)
        path.append(nxt)


def sample(system, measure, length: int, count: int, seed: int):
    """Draw measure-distributed points; each orbit gets its own
    generator keyed by (seed, index) so subsets are reproducible.

    Shift samples carry `length` measure-drawn symbols and then close up
    along a deterministic admissible cycle, so every sample is a valid
    point of the system; only coordinates past `length` come from the
    closing rule.
    """
    out = []
    for i in range(count):
        rng = np.random.default_rng([seed, i])
        if isinstance(system, CircleSystem):
            num = int(rng.integers(0, 1 << 53))
            out.append(CirclePoint(coordinate=Fraction(num, 1 << 53)))
            continue
        m = system.alphabet_size
        word = []
        for _ in range(length):
            if not word:
                p = (
                    measure.probs
                    if measure.kind == "bernoulli"
                    else measure.initial
                )
            else:
                p = (
                    measure.probs
                    if measure.kind == "bernoulli"
                    else measure.rows[word[-1]]
                )
            a = int(rng.choice(m, p=p))
            if word and not system.allowed(word[-1], a):
                raise UnsupportedPointError(
                    f"measure steps {word[-1]}->{a} outside the transition table"
                )
            word.append(a)
        bridge, cycle = _cycle_from(system, word[-1])
        out.append(Point(preperiod=tuple(word) + bridge, period=cycle))
    return out


# ---------------------------------------------------------------------------
# local pressure traces


@dataclass(frozen=True)
class LocalPressureTrace:
    """(-log mu(B_n) + phi_n)/n along one orbit for n in [big_n, n_max]."""

    orders: tuple[int, ...]
    values: tuple[float, ...]
    window: tuple[int, int]
    liminf_estimate: float
    tail_estimate: float
    window_oscillation: float
    zero_mass_orders: int

    def rows(self):
        for n, v in zip(self.orders, self.values):
            yield {"order": n, "value": v}


def bk_local(system, measure, phi, x, eps: float, big_n: int, n_max: int,
             window_lo: int | None = None) -> LocalPressureTrace:
    """Local pressure trace of one point.

    The liminf estimate is the minimum over the tail window
    [window_lo, n_max] (default window_lo = max(big_n, n_max // 2));
    window_oscillation records max - min over that window, the honest
    uncertainty of reading a liminf off a finite trace.  The window
    minimum biases low by the floor wiggle of the cylinder length, so
    tail_estimate keeps the plain value at n_max: for traces that
    converge it is the better limit estimate, while the minimum is the
    conservative one.
    """
    if n_max < big_n:
        raise ValueError("n_max must be at least big_n")
    wlo = max(big_n, n_max // 2) if window_lo is None else window_lo
    orders = []
    values = []
    zero_mass = 0
    for n in range(big_n, n_max + 1):
        ball = neutralized_ball(system, x, n, eps)
        mass = ball_mass(system, measure, ball)
        val = pot.evaluate(system, phi, x, n)
        if mass <= 0.0:
            zero_mass += 1
            values.append(math.inf)
        else:
            values.append((-math.log(mass) + val) / n)
        orders.append(n)
    window_vals = [
        v for n, v in zip(orders, values) if wlo <= n <= n_max and math.isfinite(v)
    ]
    if not window_vals:
        lim, osc = math.inf, math.inf
    else:
        lim = min(window_vals)
        osc = max(window_vals) - lim
    return LocalPressureTrace(
        orders=tuple(orders),
        values=tuple(values),
        window=(wlo, n_max),
        liminf_estimate=lim,
        tail_estimate=values[-1],
        window_oscillation=osc,
        zero_mass_orders=zero_mass,
    )


@dataclass(frozen=True)
class BKPressure:
    """Sample mean of per-orbit liminf estimates with its spread."""

    mean: float
    stderr: float
    samples: tuple[float, ...]
    window: tuple[int, int]
    window_oscillation: float
    infinite_samples: int


def bk_pressure(system, measure, phi, eps: float, big_n: int, n_max: int,
                samples: int = 20, seed: int = 0,
                window_lo: int | None = None,
                estimator: str = "window_min") -> BKPressure:
    """Monte Carlo estimate of the almost-sure local pressure.

    Returns the mean of per-sample liminf estimates over finite traces,
    the standard error of that mean, and the largest window oscillation
    seen (systematic reading bias, reported separately from the
    statistical spread because it does not shrink with sample count).

    estimator picks the per-orbit statistic: "window_min" (default) is
    the conservative liminf reading, "tail" evaluates at n_max and is
    exact on traces that have already converged.
    """
    if estimator not in ("window_min", "tail"):
        raise ValueError("estimator must be 'window_min' or 'tail'")
    if isinstance(system, SymbolicSystem):
        need = cylinder_length(n_max, eps, system.log_base)
        pts = sample(system, measure, length=need, count=samples, seed=seed)
    else:
        pts = sample(system, measure, length=0, count=samples, seed=seed)
    vals = []
    osc = 0.0
    inf_count = 0
    window = None
    for x in pts:
        tr = bk_local(system, measure, phi, x, eps, big_n, n_max, window_lo)
        window = tr.window
        v = tr.liminf_estimate if estimator == "window_min" else tr.tail_estimate
        if math.isfinite(v):
            vals.append(v)
            osc = max(osc, tr.window_oscillation)
        else:
            inf_count += 1
    if not vals:
        raise UnsupportedPointError(
            "every sampled orbit had zero-mass balls on the whole window"
        )
    arr = np.asarray(vals)
    stderr = float(arr.std(ddof=1) / math.sqrt(len(arr))) if len(arr) > 1 else 0.0
    return BKPressure(
        mean=float(arr.mean()),
        stderr=stderr,
        samples=tuple(float(v) for v in vals),
        window=window,
        window_oscillation=osc,
        infinite_samples=inf_count,
    )


# ---------------------------------------------------------------------------
# Katok pressure (root of the mass-constrained cover cost)


@dataclass(frozen=True)
class KatokPressure:
    delta: float
    critical_s: float
    lower_root: float
    bracket: tuple[float, float]
    slack: float


def katok_pressure(problem: cover_mod.CoverProblem, measure, delta: float,
                   tol: float = 1e-10) -> KatokPressure:
    """Critical exponent of the cheapest (1 - delta)-mass cover.

    critical_s is the root of the certified upper cost curve (covers the
    engine can exhibit); lower_root is the root of the lower curve, so
    the truncated quantity lies between them.
    """
    if isinstance(problem.system, CircleSystem):
        adapter = None
    else:
        adapter = measure.katok_adapter()

    def upper_cost(s):
        kc = cover_mod.katok_cover_cost(problem, s, adapter, delta)
        return kc.upper

    def lower_cost(s):
        kc = cover_mod.katok_cover_cost(problem, s, adapter, delta)
        return kc.lower if kc.lower > 0.0 else 0.0

    up = cover_mod.critical_exponent(problem, cost_fn=upper_cost, tol=tol)
    lo = cover_mod.critical_exponent(problem, cost_fn=lower_cost, tol=tol)
    slack = cover_mod.katok_cover_cost(problem, up.critical_s, adapter, delta).slack
    return KatokPressure(
        delta=delta,
        critical_s=up.critical_s,
        lower_root=lo.critical_s,
        bracket=up.bracket,
        slack=slack,
    )


def katok_delta_ladder(problem: cover_mod.CoverProblem, measure,
                       deltas: tuple[float, ...], tol: float = 1e-8):
    """Katok pressure across a delta ladder; estimates are non-increasing
    in delta (looser mass targets never cost more)."""
    return tuple(katok_pressure(problem, measure, d, tol=tol) for d in deltas)
