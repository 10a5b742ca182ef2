"""Cover costs over dynamical balls and their critical exponents.

The central quantity is the infimum, over covers of a target set by
balls B_{n_i}(x_i, exp(-n_i*eps)) with orders n_i >= N, of

    sum_i exp(-n_i * s + sup_{B_i} phi_{n_i}),

truncated at a maximal cylinder depth D.  On a shift every ball is a
cylinder whose length L(n) = n + floor(n*eps/log base) is strictly
increasing in n, so ball families are laminar and the infimum is an
exact dynamic program over the cylinder tree:

    cost(v) = min(ball at v, sum over children),

with +inf poisoning branches that reach depth D without any admissible
ball.  Laminarity also kills the integrality gap, so the same program
computes the weighted (fractional) cover cost; a rational-arithmetic
simplex cross-checks that on small instances.  The mass-constrained
variant used for Katok-style pressure runs the same recursion over
convex cost-versus-covered-mass curves whose vertices all correspond to
realizable covers, which yields certified lower/upper bounds.

Circle covers are finitely many arc lengths with free placement, an
integer covering problem with a single constraint; we report the best
single-order cover (achievable, hence an upper bound for the infimum)
bracketed by its fractional relaxation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import potentials as pot
from .systems import (
    CirclePoint,
    CircleSystem,
    Point,
    SymbolicSystem,
    cylinder_length,
)


class TruncationError(RuntimeError):
    """Depth cap reached on a branch with no admissible ball."""


class InstanceTooLargeError(RuntimeError):
    """State or enumeration budget exceeded."""


class NonBracketableError(RuntimeError):
    """Cost curve never crosses 1 on the searched interval."""

    def __init__(self, message, curve):
        super().__init__(message)
        self.curve = curve


class SubcriticalFlowError(RuntimeError):
    """No positive flow: the exponent sits above the critical value."""


def ball_weight(order: int, s: float, phi_value: float) -> float:
    """Canonical weight exp(-order*s + phi_value) of one ball.

    Every engine and oracle routes through this single expression so
    that exact-arithmetic comparisons see identical rationals.
    """
    return math.exp(phi_value - order * s)


# ---------------------------------------------------------------------------
# problem statement


@dataclass(frozen=True)
class Target:
    """Cover target: the whole space or a finite union of cylinders."""

    kind: str = "full"
    words: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self):
        if self.kind not in ("full", "cylinders"):
            raise ValueError("target kind must be 'full' or 'cylinders'")
        if self.kind == "cylinders" and not self.words:
            raise ValueError("cylinder target needs at least one word")
        object.__setattr__(
            self, "words", tuple(tuple(int(a) for a in w) for w in self.words)
        )


FULL_TARGET = Target()


@dataclass(frozen=True)
class CoverProblem:
    """Cover-cost instance.

    depth_cap bounds the cylinder depth explored on a shift (and the
    maximal ball order on a circle, where there are no cylinders); it
    must admit at least the order-big_n ball.  value_mode chooses
    between charging sup phi over each ball or the center value; shift
    potentials here are determined by the pinned symbols, so the two
    modes agree on shifts and the mode is recorded for reporting.
    """

    system: object
    potential: object
    big_n: int
    epsilon: float
    depth_cap: int
    target: Target = FULL_TARGET
    value_mode: str = "sup"
    node_budget: int = 3_000_000

    def __post_init__(self):
        if self.big_n < 1:
            raise ValueError("big_n must be at least 1")
        if self.epsilon < 0:
            raise ValueError("epsilon must be nonnegative")
        if self.value_mode not in ("sup", "center"):
            raise ValueError("value_mode must be 'sup' or 'center'")
        if isinstance(self.system, SymbolicSystem):
            L0 = cylinder_length(self.big_n, self.epsilon, self.system.log_base)
            if self.depth_cap < L0:
                raise ValueError(
                    f"depth_cap {self.depth_cap} below the order-{self.big_n} "
                    f"cylinder length {L0}"
                )
            if self.potential.kind == "circle_lipschitz":
                raise TypeError("circle potential on a shift system")
            for w in self.target.words:
                if not self.system.word_admissible(w):
                    raise ValueError(f"target word {w} not admissible")
        else:
            if self.potential.kind != "circle_lipschitz":
                raise TypeError("circle systems need a circle potential")
            if self.target.kind != "full":
                raise ValueError("circle targets must be the full circle")
            if self.depth_cap < self.big_n:
                raise ValueError("depth_cap below big_n")

    def orders(self) -> list[int]:
        """Admissible ball orders under the depth cap."""
        if isinstance(self.system, SymbolicSystem):
            out = []
            n = self.big_n
            while cylinder_length(n, self.epsilon, self.system.log_base) <= self.depth_cap:
                out.append(n)
                n += 1
            return out
        lo = math.log(2 * self.system.degree)
        return [
            n
            for n in range(self.big_n, self.depth_cap + 1)
            if n * self.epsilon >= lo
        ]

    def depth_of_order(self) -> dict[int, int]:
        return {
            cylinder_length(n, self.epsilon, self.system.log_base): n
            for n in self.orders()
        }


# ---------------------------------------------------------------------------
# potential prefix oracles (incremental phi along cylinder words)


class _AdditiveOracle:
    """Normalizer equals the Birkhoff sum itself, residual key is empty."""

    def __init__(self, phi):
        self.g = phi.values

    def init(self):
        return None

    def step(self, state, a):
        return None, self.g[a]

    def key(self, state):
        return None

    def capture(self, state):
        return 0.0


class _CocycleOracle:
    """Tracks the norm-normalized matrix product; the stripped log-norm
    telescopes to phi_n at every depth."""

    def __init__(self, phi):
        self.mats = [phi.array(a) for a in range(len(phi.matrices))]

    def init(self):
        return None

    def step(self, state, a):
        prod = self.mats[a] if state is None else self.mats[a] @ state
        nrm = pot.spectral_norm(prod)
        if nrm == 0.0:
            raise ValueError("cocycle product collapsed to the zero matrix")
        return prod / nrm, math.log(nrm)

    def key(self, state):
        return None if state is None else state.tobytes()

    def capture(self, state):
        return 0.0


class _TableOracle:
    """No normalization; the captured delta is the raw table value."""

    def __init__(self, phi):
        self.phi = phi

    def init(self):
        return ()

    def step(self, state, a):
        return state + (a,), 0.0

    def key(self, state):
        return state

    def capture(self, state):
        return float(self.phi.tables[len(state) - 1][state])


def _prefix_oracle(phi):
    if phi.kind == "additive":
        return _AdditiveOracle(phi)
    if phi.kind == "cocycle":
        return _CocycleOracle(phi)
    if phi.kind == "table":
        return _TableOracle(phi)
    raise TypeError(f"no shift prefix oracle for potential kind {phi.kind!r}")


# ---------------------------------------------------------------------------
# target frontier bookkeeping

_FULL = "FULL"


def _initial_front(target: Target):
    if target.kind == "full":
        return _FULL
    if any(len(w) == 0 for w in target.words):
        return _FULL
    return frozenset(target.words)


def _advance_front(front, a):
    """Move the cylinder-target frontier across one symbol; None means
    the subtree misses the target entirely and needs no covering."""
    if front is _FULL:
        return _FULL
    nxt = set()
    for w in front:
        if w[0] != a:
            continue
        rest = w[1:]
        if not rest:
            return _FULL
        nxt.add(rest)
    return frozenset(nxt) if nxt else None


# ---------------------------------------------------------------------------
# shift engine: normalized, memoized dynamic program


def _factored_cost(problem: CoverProblem, s: float) -> float:
    sys_ = problem.system
    m = sys_.alphabet_size
    orders = problem.orders()
    if not orders:
        raise TruncationError("no admissible ball order under the depth cap")
    L_of = {
        n: cylinder_length(n, problem.epsilon, sys_.log_base) for n in orders
    }
    depth_of = {L: n for n, L in L_of.items()}
    order_set = set(orders)
    n_top = max(orders)
    D = problem.depth_cap
    oracle = _prefix_oracle(problem.potential)
    memo: dict = {}
    budget = problem.node_budget
    INF = math.inf

    def rec(d, last, front, state, skey, pending):
        if d in order_set:
            pending = pending + ((d, oracle.capture(state)),)
        key = (d, last, front, skey, pending)
        hit = memo.get(key)
        if hit is not None:
            return hit
        if len(memo) >= budget:
            raise InstanceTooLargeError(
                f"cover DP exceeded the {budget}-state budget"
            )
        n_here = depth_of.get(d)
        ball = None
        if n_here is not None:
            delta = next(dd for nn, dd in pending if nn == n_here)
            ball = ball_weight(n_here, s, delta)
        if d == D:
            res = INF if ball is None else ball
        else:
            total = 0.0
            symbols = (
                range(m)
                if last is None
                else [a for a in range(m) if sys_.allowed(last, a)]
            )
            for a in symbols:
                cf = _advance_front(front, a)
                if cf is None:
                    continue
                if d < n_top:
                    st2, dlam = oracle.step(state, a)
                    sk2 = oracle.key(st2)
                else:  # no deeper ball reads the potential past n_top
                    st2, dlam, sk2 = state, 0.0, skey
                pen2 = tuple(
                    (nn, dd - dlam) for nn, dd in pending if L_of[nn] > d
                )
                sub = rec(d + 1, a, cf, st2, sk2, pen2)
                total += sub if dlam == 0.0 else math.exp(dlam) * sub
                if total == INF:
                    break
            res = ball if (ball is not None and ball <= total) else total
        memo[key] = res
        return res

    front0 = _initial_front(problem.target)
    st0 = oracle.init()
    return rec(0, None, front0, st0, oracle.key(st0), ())


def _enumerated_cost(problem: CoverProblem, s: float, exact: bool):
    """Plain tree recursion carrying the literal word: no memoization,
    no normalization.  Exact mode sums Fraction(ball_weight(...)) so it
    agrees bit-for-bit with the brute-force enumerator."""
    sys_ = problem.system
    m = sys_.alphabet_size
    orders = problem.orders()
    if not orders:
        raise TruncationError("no admissible ball order under the depth cap")
    depth_of = problem.depth_of_order()
    D = problem.depth_cap
    phi = problem.potential
    conv = Fraction if exact else float
    INF = None  # sentinel for +infinity in exact mode
    visits = [0]

    def ball_at(word):
        n = depth_of.get(len(word))
        if n is None:
            return None
        value = pot.word_value(sys_, phi, word, n)
        return conv(ball_weight(n, s, value))

    def rec(word, front):
        visits[0] += 1
        if visits[0] > problem.node_budget:
            raise InstanceTooLargeError(
                f"enumerated cover walk exceeded the "
                f"{problem.node_budget}-node budget"
            )
        ball = ball_at(word)
        if len(word) == D:
            return ball  # None = poisoned branch
        total = conv(0)
        symbols = (
            range(m)
            if not word
            else [a for a in range(m) if sys_.allowed(word[-1], a)]
        )
        for a in symbols:
            cf = _advance_front(front, a)
            if cf is None:
                continue
            sub = rec(word + (a,), cf)
            if sub is INF:
                total = INF
                break
            total += sub
        if ball is not None and (total is INF or ball <= total):
            return ball
        return total

    res = rec((), _initial_front(problem.target))
    if res is INF:
        raise TruncationError("depth cap reached with no admissible ball")
    return res


# ---------------------------------------------------------------------------
# circle engine


def _circle_constant(problem: CoverProblem) -> float:
    f = problem.potential.func
    if f.lipschitz != 0.0:
        raise TypeError(
            "circle cover costs support constant potentials only: the "
            "infimum over arc placements of a varying potential is not "
            "finitely computable with certified bounds"
        )
    return float(f(0.0))


def _circle_arc_log_length(m, n, eps):
    return math.log(2.0) - n * eps - (n - 1) * math.log(m)


def _circle_cost(problem: CoverProblem, s: float, target_mass: float = 1.0,
                 relaxed: bool = False) -> float:
    """Best single-order arc cover (or its fractional relaxation).

    Arc covers of total length >= target can always be arranged to
    cover; the fractional relaxation is exactly the length constraint.
    """
    m = problem.system.degree
    c = _circle_constant(problem)
    orders = problem.orders()
    if not orders:
        raise TruncationError(
            "no circle order in range satisfies n*eps >= log(2m)"
        )
    if target_mass <= 0.0:
        return 0.0
    best = math.inf
    for n in orders:
        log_len = _circle_arc_log_length(m, n, eps=problem.epsilon)
        log_weight = n * (c - s)
        if relaxed:
            log_cost = log_weight + math.log(target_mass) - log_len
        else:
            ratio = math.log(target_mass) - log_len
            if ratio < 50.0:  # exact ceiling while the count is small
                count = math.ceil(target_mass / math.exp(log_len))
                log_cost = math.log(count) + log_weight
            else:  # ceiling slack is below float resolution here
                log_cost = ratio + log_weight
        cost = math.exp(log_cost) if log_cost < 700 else math.inf
        best = min(best, cost)
    return best


# ---------------------------------------------------------------------------
# public cover costs


def cover_cost(problem: CoverProblem, s: float, engine: str = "auto",
               exact: bool = False):
    """Truncated infimum cover cost at exponent s.

    Raises TruncationError when some branch admits no ball by depth_cap.
    """
    if isinstance(problem.system, CircleSystem):
        if exact:
            raise ValueError("exact arithmetic not supported on the circle")
        return _circle_cost(problem, s)
    if exact or engine == "enumerated":
        return _enumerated_cost(problem, s, exact)
    if engine in ("auto", "factored"):
        return _factored_cost(problem, s)
    raise ValueError(f"unknown engine {engine!r}")


def brute_force_cover_cost(problem: CoverProblem, s: float, exact: bool = True,
                           ball_cap: int = 1 << 16, leaf_cap: int = 1 << 12):
    """Exact minimum over all covers from the finite ball menu, found by
    branching on the first uncovered depth-D cell.  Independent oracle
    for the tree program on small instances."""
    if isinstance(problem.system, CircleSystem):
        raise TypeError("brute force enumeration is for shift systems")
    sys_ = problem.system
    D = problem.depth_cap
    depth_of = problem.depth_of_order()
    phi = problem.potential
    conv = Fraction if exact else float

    front0 = _initial_front(problem.target)
    leaves = []

    def gather(word, front):
        if len(word) == D:
            leaves.append(word)
            return
        symbols = (
            range(sys_.alphabet_size)
            if not word
            else [a for a in range(sys_.alphabet_size) if sys_.allowed(word[-1], a)]
        )
        for a in symbols:
            cf = _advance_front(front, a)
            if cf is None:
                continue
            gather(word + (a,), cf)

    gather((), front0)
    if len(leaves) > leaf_cap:
        raise InstanceTooLargeError(f"{len(leaves)} cells exceed the cap")
    leaf_index = {w: i for i, w in enumerate(leaves)}

    balls = []  # (cost, prefix word)
    for L, n in sorted(depth_of.items()):
        seen = set()
        for leaf in leaves:
            w = leaf[:L]
            if w in seen:
                continue
            seen.add(w)
            value = pot.word_value(sys_, phi, w, n)
            balls.append((conv(ball_weight(n, s, value)), w))
    if len(balls) > ball_cap:
        raise InstanceTooLargeError(f"{len(balls)} balls exceed the cap")
    if not leaves:
        return conv(0)

    masks = []
    for cost, w in balls:
        mask = 0
        for leaf, i in leaf_index.items():
            if leaf[: len(w)] == w:
                mask |= 1 << i
        masks.append(mask)
    per_leaf = [
        [j for j, mask in enumerate(masks) if mask >> i & 1]
        for i in range(len(leaves))
    ]
    if any(not cand for cand in per_leaf):
        raise TruncationError("a cell is covered by no ball in the menu")
    # admissible bound: a ball of cost c covering p cells pays >= c/p
    # per cell, so summing the per-cell minima bounds any completion
    leaf_lb = [
        min(balls[j][0] / masks[j].bit_count() for j in per_leaf[i])
        for i in range(len(leaves))
    ]

    full = (1 << len(leaves)) - 1
    best = [None]
    explored = [0]

    def bound(uncovered):
        total = conv(0)
        while uncovered:
            i = (uncovered & -uncovered).bit_length() - 1
            total += leaf_lb[i]
            uncovered &= uncovered - 1
        return total

    def search(uncovered, cost):
        explored[0] += 1
        if explored[0] > 5_000_000:
            raise InstanceTooLargeError("brute force exceeded its node budget")
        if uncovered == 0:
            if best[0] is None or cost < best[0]:
                best[0] = cost
            return
        if best[0] is not None and cost + bound(uncovered) >= best[0]:
            return
        i = (uncovered & -uncovered).bit_length() - 1
        for j in per_leaf[i]:
            search(uncovered & ~masks[j], cost + balls[j][0])

    search(full, conv(0))
    return best[0]


def weighted_cover_cost(problem: CoverProblem, s: float, exact: bool = False):
    """Infimum over weighted families c_i > 0 with sum c_i 1_{B_i} >= 1
    on the target.  Ball families on a shift are laminar, so the
    fractional optimum coincides with the integral tree optimum (no
    integrality gap); the circle relaxation is the arc-length bound."""
    if isinstance(problem.system, CircleSystem):
        return _circle_cost(problem, s, relaxed=True)
    return cover_cost(problem, s, exact=exact)


# ---------------------------------------------------------------------------
# exact rational simplex (small dense instances)


def _exact_simplex_min(A, b, c):
    """min c.x subject to A x >= b, x >= 0, all data Fractions.

    Two-phase dense tableau with Bland's rule.  Only meant for the small
    cross-check instances; sizes are a few hundred cells at most.
    """
    m, n = len(A), len(c)
    # standard form: A x - I w = b, minimize; artificials z start basic.
    # columns: x (n) | surplus w (m) | artificial z (m)
    width = n + 2 * m
    rows = []
    for i in range(m):
        row = [Fraction(v) for v in A[i]]
        row += [Fraction(-1) if j == i else Fraction(0) for j in range(m)]
        row += [Fraction(1) if j == i else Fraction(0) for j in range(m)]
        row.append(Fraction(b[i]))
        rows.append(row)
    basis = [n + m + i for i in range(m)]

    def pivot(rows, basis, objective, allowed_cols):
        while True:
            enter = None
            for j in allowed_cols:
                if objective[j] < 0:
                    enter = j
                    break
            if enter is None:
                return
            leave, best = None, None
            for i in range(m):
                if rows[i][enter] > 0:
                    ratio = rows[i][-1] / rows[i][enter]
                    if best is None or ratio < best or (
                        ratio == best and basis[i] < basis[leave]
                    ):
                        best, leave = ratio, i
            if leave is None:
                raise ValueError("unbounded linear program")
            piv = rows[leave][enter]
            rows[leave] = [v / piv for v in rows[leave]]
            for i in range(m):
                if i != leave and rows[i][enter] != 0:
                    f = rows[i][enter]
                    rows[i] = [v - f * w for v, w in zip(rows[i], rows[leave])]
            f = objective[enter]
            if f != 0:
                objective[:] = [v - f * w for v, w in zip(objective, rows[leave])]
            basis[leave] = enter

    # phase 1: minimize the artificial total.  Artificials cost 1 and
    # start basic, so the reduced costs subtract every row.
    obj1 = [Fraction(0)] * width
    for j in range(n + m, width):
        obj1[j] = Fraction(1)
    red = [
        obj1[j] - sum(rows[i][j] for i in range(m)) for j in range(width)
    ] + [-sum(rows[i][-1] for i in range(m))]
    pivot(rows, basis, red, range(width))
    if red[-1] != 0:
        raise ValueError("infeasible linear program")

    # phase 2: original objective over x columns, artificials frozen out
    cost = list(c) + [Fraction(0)] * (2 * m)
    red2 = [
        cost[j] - sum(cost[basis[i]] * rows[i][j] for i in range(m))
        for j in range(width)
    ] + [-sum(cost[basis[i]] * rows[i][-1] for i in range(m))]
    allowed = [j for j in range(n + m)]  # never re-enter artificials
    pivot(rows, basis, red2, allowed)
    return -red2[-1]


def fractional_cover_lp(problem: CoverProblem, s: float) -> Fraction:
    """Exact-rational LP value of the fractional cover on the truncated
    tree: rows are depth-D cells, columns the ball menu.  Independent
    route for weighted_cover_cost on small instances."""
    sys_ = problem.system
    D = problem.depth_cap
    depth_of = problem.depth_of_order()
    phi = problem.potential

    leaves = []

    def gather(word, front):
        if len(word) == D:
            leaves.append(word)
            return
        symbols = (
            range(sys_.alphabet_size)
            if not word
            else [a for a in range(sys_.alphabet_size) if sys_.allowed(word[-1], a)]
        )
        for a in symbols:
            cf = _advance_front(front, a)
            if cf is None:
                continue
            gather(word + (a,), cf)

    gather((), _initial_front(problem.target))
    if not leaves:
        return Fraction(0)
    balls = []
    for L, n in sorted(depth_of.items()):
        seen = set()
        for leaf in leaves:
            w = leaf[:L]
            if w in seen:
                continue
            seen.add(w)
            value = pot.word_value(sys_, phi, w, n)
            balls.append((Fraction(ball_weight(n, s, value)), w))
    if len(leaves) * len(balls) > 1 << 18:
        raise InstanceTooLargeError("LP instance too large for the simplex")
    A = [
        [Fraction(1) if leaf[: len(w)] == w else Fraction(0) for _, w in balls]
        for leaf in leaves
    ]
    b = [Fraction(1)] * len(leaves)
    c = [cost for cost, _ in balls]
    return _exact_simplex_min(A, b, c)


# ---------------------------------------------------------------------------
# mass-constrained covers (Katok-style)


@dataclass(frozen=True)
class KatokCost:
    """Certified bracket for the cheapest cover of measure > 1 - delta."""

    lower: float
    upper: float
    slack: float
    target_mass: float

    @property
    def feasible(self) -> bool:
        return math.isfinite(self.upper)


def _curve_scale(curve, mf, cf):
    return [(m * mf, c * cf) for m, c in curve]


def _curve_combine(c1, c2):
    """Infimal convolution of two convex (mass, cost) curves through the
    origin: merge segments in slope order.  Works for float and Fraction
    entries alike; the zero point keeps the incoming type."""
    segs = []
    for curve in (c1, c2):
        for (m0, v0), (m1, v1) in zip(curve, curve[1:]):
            dm, dv = m1 - m0, v1 - v0
            if dm > 0:
                segs.append((dv / dm, dm, dv))
    segs.sort(key=lambda t: t[0])
    m, v = c1[0][0] + c2[0][0], c1[0][1] + c2[0][1]
    out = [(m, v)]
    for _, dm, dv in segs:
        m = m + dm
        v = v + dv
        out.append((m, v))
    return out


def _curve_envelope(points):
    """Lower convex envelope (by mass) of achievable (mass, cost) points.

    Dominated points (some other point has at least the mass for at most
    the cost) are dropped first, so vertex costs increase with mass; the
    monotone-chain hull then keeps an achievable subset whose chords run
    under every achievable point.
    """
    best = {}
    for m, v in points:
        if m not in best or v < best[m]:
            best[m] = v
    pts = sorted(best.items())
    kept = []
    for m, v in reversed(pts):
        if not kept or v < kept[-1][1]:
            kept.append((m, v))
    pts = kept[::-1]
    hull = []
    for p in pts:
        while len(hull) >= 2:
            (m1, v1), (m2, v2) = hull[-2], hull[-1]
            # pop hull[-1] when strictly above the chord hull[-2] -> p;
            # collinear vertices stay, they are the achievable covers the
            # upper-bound scan reads off
            if (v2 - v1) * (p[0] - m1) > (p[1] - v1) * (m2 - m1):
                hull.pop()
            else:
                break
        hull.append(p)
    if hull[0][0] != 0:
        raise AssertionError("curve must contain the empty cover")
    return hull


def _curve_prune(curve, budget):
    """Drop interior vertices down to the budget; returns the raised
    curve and the total vertical slack introduced.

    Each pass removes a non-adjacent batch of the smallest-chord-gap
    vertices (collinear vertices cost zero slack), so the chord bound
    for every removed vertex is taken against surviving neighbors.
    """
    slack = 0.0
    curve = list(curve)
    while len(curve) > budget:
        gaps = []
        for i in range(1, len(curve) - 1):
            (m0, v0), (m1, v1), (m2, v2) = curve[i - 1], curve[i], curve[i + 1]
            chord = v0 + (v2 - v0) * (m1 - m0) / (m2 - m0)
            gaps.append((max(chord - v1, 0.0), i))
        gaps.sort()
        excess = len(curve) - budget
        drop, blocked = set(), set()
        for gap, i in gaps:
            if len(drop) >= excess:
                break
            if i in blocked:
                continue
            drop.add(i)
            blocked.add(i - 1)
            blocked.add(i + 1)
            slack += gap
        curve = [p for idx, p in enumerate(curve) if idx not in drop]
    return curve, slack


def katok_cover_cost(problem: CoverProblem, s: float, mass_adapter,
                     delta: float, curve_budget: int = 512,
                     exact: bool = False) -> KatokCost:
    """Cheapest cover with covered measure strictly above 1 - delta.

    Runs the cover recursion over convex cost-vs-mass curves.  Curve
    vertices are sums of realizable subtree covers, so the first vertex
    with mass > 1 - delta is an achievable cover (upper bound); the
    interpolated curve minus accumulated pruning slack is a lower bound
    for every cover.  With the default budget the small baselines stay
    exact (slack 0).

    Convexification is what keeps this tractable, and it is also why the
    upper bound need not be the exact optimum: a cover mixing ball
    orders can sit strictly above the hull (16 half-cheap balls plus one
    tiny ball beats every hull vertex near its mass), and only the
    bracket is guaranteed.  When a single ball order is admissible the
    achievable vertices are exactly collinear and the upper bound is the
    optimum, provided rounding noise does not delete them: exact=True
    runs the curves in rational arithmetic to that end.  Exact mode is
    meant for small instances and refuses to prune (the budget raises
    instead of introducing slack).
    """
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")
    conv = Fraction if exact else float
    target = 1 - conv(delta)
    if isinstance(problem.system, CircleSystem):
        if exact:
            raise ValueError("exact arithmetic not supported on the circle")
        upper = _circle_cost(problem, s, target_mass=target)
        lower = _circle_cost(problem, s, target_mass=target, relaxed=True)
        return KatokCost(lower=lower, upper=upper, slack=0.0, target_mass=target)
    if exact:
        return _katok_exact(problem, s, mass_adapter, target, curve_budget)

    sys_ = problem.system
    m = sys_.alphabet_size
    orders = problem.orders()
    if not orders:
        raise TruncationError("no admissible ball order under the depth cap")
    L_of = {n: cylinder_length(n, problem.epsilon, sys_.log_base) for n in orders}
    depth_of = {L: n for n, L in L_of.items()}
    order_set = set(orders)
    n_top = max(orders)
    D = problem.depth_cap
    oracle = _prefix_oracle(problem.potential)
    memo: dict = {}
    slack_memo: dict = {}
    budget = problem.node_budget

    def rec(d, last, state, skey, pending):
        # returns (curve relative to this node's mass/cost normalizers, slack)
        if d in order_set:
            pending = pending + ((d, oracle.capture(state)),)
        key = (d, last, skey, pending)
        if key in memo:
            return memo[key], slack_memo[key]
        if len(memo) >= budget:
            raise InstanceTooLargeError("katok DP exceeded the state budget")
        n_here = depth_of.get(d)
        points = [(0.0, 0.0)]
        if n_here is not None:
            delta_v = next(dd for nn, dd in pending if nn == n_here)
            points.append((1.0, ball_weight(n_here, s, delta_v)))
        slack = 0.0
        if d < D:
            symbols = (
                range(m)
                if last is None
                else [a for a in range(m) if sys_.allowed(last, a)]
            )
            combined = [(0.0, 0.0)]
            for a in symbols:
                mf = (
                    mass_adapter.root(a)
                    if last is None
                    else mass_adapter.step(last, a)
                )
                if d < n_top:
                    st2, dlam = oracle.step(state, a)
                    sk2 = oracle.key(st2)
                else:
                    st2, dlam, sk2 = state, 0.0, skey
                pen2 = tuple(
                    (nn, dd - dlam) for nn, dd in pending if L_of[nn] > d
                )
                sub, sub_slack = rec(d + 1, a, st2, sk2, pen2)
                cf = 1.0 if dlam == 0.0 else math.exp(dlam)
                combined = _curve_combine(combined, _curve_scale(sub, mf, cf))
                slack += sub_slack * cf
            points.extend(combined)
        curve = _curve_envelope(points)
        if len(curve) > curve_budget:
            curve, extra = _curve_prune(curve, curve_budget)
            slack += extra
        memo[key] = curve
        slack_memo[key] = slack
        return curve, slack

    st0 = oracle.init()
    curve, slack = rec(0, None, st0, oracle.key(st0), ())

    upper = math.inf
    for mass, cost in curve:
        if mass > target:
            upper = cost
            break
    lower = math.inf
    if curve[-1][0] >= target:
        for (m0, v0), (m1, v1) in zip(curve, curve[1:]):
            if m1 >= target:
                if m1 == m0:
                    lower = v1
                else:
                    lower = v0 + (v1 - v0) * (target - m0) / (m1 - m0)
                break
        else:
            lower = curve[-1][1]
        if slack:
            lower = max(lower - slack, 0.0)
    return KatokCost(lower=lower, upper=upper, slack=slack, target_mass=target)


def _katok_exact(problem: CoverProblem, s: float, mass_adapter, target,
                 curve_budget: int) -> KatokCost:
    """Rational-arithmetic curve recursion carrying literal words.

    Ball weights and masses are built from the very same atoms as the
    Pareto enumeration oracle, so bracket comparisons against it are
    exact; absolute units, no memoization, no pruning.
    """
    sys_ = problem.system
    D = problem.depth_cap
    depth_of = problem.depth_of_order()
    phi = problem.potential
    zero = Fraction(0)

    def rec(word, mass):
        points = [(zero, zero)]
        n = depth_of.get(len(word))
        if n is not None:
            value = pot.word_value(sys_, phi, word, n)
            points.append((mass, Fraction(ball_weight(n, s, value))))
        if len(word) < D:
            symbols = (
                range(sys_.alphabet_size)
                if not word
                else [a for a in range(sys_.alphabet_size) if sys_.allowed(word[-1], a)]
            )
            combined = [(zero, zero)]
            for a in symbols:
                mf = (
                    mass_adapter.root(a, exact=True)
                    if not word
                    else mass_adapter.step(word[-1], a, exact=True)
                )
                combined = _curve_combine(combined, rec(word + (a,), mass * mf))
            points.extend(combined)
        curve = _curve_envelope(points)
        if len(curve) > curve_budget:
            raise InstanceTooLargeError(
                "curve budget exceeded in exact mode; pruning would break "
                "exact brackets"
            )
        return curve

    curve = rec((), Fraction(1))
    upper = math.inf
    for mass, cost in curve:
        if mass > target:
            upper = cost
            break
    lower = math.inf
    if curve[-1][0] >= target:
        for (m0, v0), (m1, v1) in zip(curve, curve[1:]):
            if m1 >= target:
                if m1 == m0:
                    lower = v1
                else:
                    lower = v0 + (v1 - v0) * (target - m0) / (m1 - m0)
                break
        else:
            lower = curve[-1][1]
    return KatokCost(lower=lower, upper=upper, slack=0.0, target_mass=target)


def katok_cover_cost_brute(problem: CoverProblem, s: float, mass_adapter,
                           delta: float):
    """Exact-rational Pareto enumeration on tiny instances: the oracle
    for the curve-based program."""
    sys_ = problem.system
    D = problem.depth_cap
    depth_of = problem.depth_of_order()
    phi = problem.potential

    def prune(front):
        # nondominated points: walk mass-descending, keep cost improvements
        front = sorted(front, key=lambda t: (-t[0], t[1]))
        res, best_cost = [], None
        for mass, cost in front:
            if best_cost is None or cost < best_cost:
                res.append((mass, cost))
                best_cost = cost
        return sorted(res)

    def rec(word, mass):
        # returns Pareto list of (covered mass, cost), exact Fractions
        options = [(Fraction(0), Fraction(0))]
        n = depth_of.get(len(word))
        if n is not None:
            value = pot.word_value(sys_, phi, word, n)
            options.append((mass, Fraction(ball_weight(n, s, value))))
        if len(word) < D:
            symbols = (
                range(sys_.alphabet_size)
                if not word
                else [a for a in range(sys_.alphabet_size) if sys_.allowed(word[-1], a)]
            )
            combined = [(Fraction(0), Fraction(0))]
            for a in symbols:
                mf = (
                    mass_adapter.root(a, exact=True)
                    if not word
                    else mass_adapter.step(word[-1], a, exact=True)
                )
                sub = rec(word + (a,), mass * mf)
                combined = prune(
                    [(m1 + m2, c1 + c2) for m1, c1 in combined for m2, c2 in sub]
                )
            options.extend(combined)
        return prune(options)

    front = rec((), Fraction(1))
    target = 1 - Fraction(delta)
    feas = [cost for mass, cost in front if mass > target]
    return min(feas) if feas else None


# ---------------------------------------------------------------------------
# critical exponent


@dataclass(frozen=True)
class PressureEstimate:
    critical_s: float
    bracket: tuple[float, float]
    big_n: int
    epsilon: float
    depth_cap: int
    value_mode: str
    cost_curve: tuple[tuple[float, float], ...]
    diagnostics: dict = field(default_factory=dict)
    ladder: tuple[tuple[int, float], ...] = ()


def critical_exponent(
    problem: CoverProblem,
    cost_fn=None,
    tol: float = 1e-10,
    s_lo: float = -2.0,
    s_hi: float = 2.0,
    max_expand: int = 80,
    ladder: tuple[int, ...] = (),
) -> PressureEstimate:
    """Unique root of cost(s) = 1 by bracketing bisection.

    The cost is a finite positive combination of exp(-n s) terms, hence
    strictly decreasing wherever finite, so the root is unique; the
    bracket is expanded geometrically first.  ``ladder`` recomputes the
    estimate at larger starting orders (cover costs only shrink as
    options vanish, so these are non-decreasing).
    """
    fn = cost_fn if cost_fn is not None else (lambda s: cover_cost(problem, s))
    curve = []

    def probe(s):
        c = fn(s)
        curve.append((s, float(c)))
        return c

    lo, hi = float(s_lo), float(s_hi)
    clo, chi = probe(lo), probe(hi)
    k = 0
    while clo < 1.0:
        if k >= max_expand:
            raise NonBracketableError(
                "cost stays below 1 on the searched interval", tuple(curve)
            )
        hi, chi = lo, clo
        lo -= 2.0**(k // 8 + 1)
        clo = probe(lo)
        k += 1
    k = 0
    while chi >= 1.0:
        # the cost decays like exp(-N s), so +inf while s grows means a
        # truncated branch with no ball, not a large finite value
        if math.isinf(chi) and hi >= 2.0:
            raise TruncationError(
                f"cover cost is +inf at s={hi}: some branch reaches the "
                "depth cap without an admissible ball"
            )
        if k >= max_expand:
            raise NonBracketableError(
                "cost stays above 1 on the searched interval", tuple(curve)
            )
        lo, clo = hi, chi
        hi += 2.0**(k // 8 + 1)
        chi = probe(hi)
        k += 1
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if probe(mid) >= 1.0:
            lo = mid
        else:
            hi = mid
    critical = 0.5 * (lo + hi)

    diagnostics = {}
    if isinstance(problem.system, SymbolicSystem) and cost_fn is None:
        L0 = cylinder_length(problem.big_n, problem.epsilon, problem.system.log_base)
        diagnostics["cost_at_depth_cap"] = float(fn(critical))
        if problem.depth_cap - 1 >= L0:
            shallower = CoverProblem(
                system=problem.system,
                potential=problem.potential,
                big_n=problem.big_n,
                epsilon=problem.epsilon,
                depth_cap=problem.depth_cap - 1,
                target=problem.target,
                value_mode=problem.value_mode,
                node_budget=problem.node_budget,
            )
            try:
                diagnostics["cost_at_depth_cap_minus_1"] = float(
                    cover_cost(shallower, critical)
                )
            except TruncationError:
                diagnostics["cost_at_depth_cap_minus_1"] = math.inf
    if isinstance(problem.system, CircleSystem) and cost_fn is None:
        relax = lambda s: _circle_cost(problem, s, relaxed=True)
        sub = critical_exponent(problem, cost_fn=relax, tol=tol)
        diagnostics["fractional_root"] = sub.critical_s
        diagnostics["integer_fractional_gap"] = critical - sub.critical_s

    rungs = []
    for n2 in ladder:
        slack = problem.depth_cap - (
            cylinder_length(problem.big_n, problem.epsilon, problem.system.log_base)
            if isinstance(problem.system, SymbolicSystem)
            else problem.big_n
        )
        d2 = (
            cylinder_length(n2, problem.epsilon, problem.system.log_base) + slack
            if isinstance(problem.system, SymbolicSystem)
            else n2 + slack
        )
        p2 = CoverProblem(
            system=problem.system,
            potential=problem.potential,
            big_n=n2,
            epsilon=problem.epsilon,
            depth_cap=d2,
            target=problem.target,
            value_mode=problem.value_mode,
            node_budget=problem.node_budget,
        )
        rungs.append((n2, critical_exponent(p2, tol=tol).critical_s))

    dedup = {}
    for s, c in curve:
        dedup[s] = c
    return PressureEstimate(
        critical_s=critical,
        bracket=(lo, hi),
        big_n=problem.big_n,
        epsilon=problem.epsilon,
        depth_cap=problem.depth_cap,
        value_mode=problem.value_mode,
        cost_curve=tuple(sorted(dedup.items())),
        diagnostics=diagnostics,
        ladder=tuple(rungs),
    )


# ---------------------------------------------------------------------------
# 5r covering selection


@dataclass(frozen=True)
class FiveRResult:
    selected: tuple[int, ...]
    neighbor_sets: tuple[tuple[int, ...], ...]  # I(i) for i in selected
    assignment: tuple[int, ...]  # input index -> selected index with containment
    radius: float


def _pair_distance(system, x, y, order=None):
    if isinstance(system, CircleSystem):
        from .systems import arc_distance

        return float(arc_distance(x.coordinate, y.coordinate))
    from .systems import bowen_distance

    if order is None:
        order = 1  # d_1 is the plain shift metric
    return bowen_distance(system, x, y, order)


def five_r_subfamily(system, centers, radius: float, order: int | None = None) -> FiveRResult:
    """Disjointification with the classical factor 5.

    Given equal-radius balls B(x_i, r), returns indices J such that the
    neighbor sets I(i) = {j : B(x_j, r) meets B(x_i, r)} are pairwise
    disjoint across J while the 5r-enlargements of J cover every input
    ball.  Greedy in input order: after selecting i, everything whose
    ball meets a ball meeting B(x_i, r) is discarded, which puts any
    discarded center within 4r of some selected one.

    Ball intersection is exact per geometry: on the circle two open
    r-arcs meet iff their centers are closer than 2r; shift metrics
    (d and every fixed-order d_n) are ultrametrics, where open r-balls
    are identical or disjoint, meeting iff centers are closer than r.
    """
    k = len(centers)
    dist = [[0.0] * k for _ in range(k)]
    for i in range(k):
        for j in range(i + 1, k):
            d = _pair_distance(system, centers[i], centers[j], order)
            dist[i][j] = dist[j][i] = d
    thresh = 2 * radius if isinstance(system, CircleSystem) else radius
    meets = [
        [dist[i][j] < thresh for j in range(k)] for i in range(k)
    ]
    for i in range(k):
        meets[i][i] = True
    i_set = [frozenset(j for j in range(k) if meets[i][j]) for i in range(k)]

    selected: list[int] = []
    assignment = [-1] * k
    alive = set(range(k))
    for i in range(k):
        if i not in alive:
            continue
        selected.append(i)
        two_hop = set()
        for n_i in i_set[i]:
            two_hop |= i_set[n_i]
        for j in two_hop:
            if j in alive:
                alive.discard(j)
                assignment[j] = i

    # constructive verification of both guarantees
    for a in range(len(selected)):
        for b in range(a + 1, len(selected)):
            if i_set[selected[a]] & i_set[selected[b]]:
                raise AssertionError("selected neighbor sets intersect")
    for i in range(k):
        j = assignment[i]
        # containment certificate: d(x_i, x_j) + r <= 5r on the circle,
        # d(x_i, x_j) < 5r in an ultrametric
        if isinstance(system, CircleSystem):
            if not dist[i][j] + radius <= 5 * radius + 1e-15:
                raise AssertionError("containment certificate failed")
        else:
            if not dist[i][j] < 5 * radius:
                raise AssertionError("containment certificate failed")
    return FiveRResult(
        selected=tuple(selected),
        neighbor_sets=tuple(tuple(sorted(i_set[i])) for i in selected),
        assignment=tuple(assignment),
        radius=radius,
    )
