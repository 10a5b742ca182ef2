"""Dynamical systems and exact neutralized-ball geometry.

Two system kinds are supported: subshifts of finite type on a finite
alphabet, carrying the metric d(x, y) = base^-k where k is the index of
first disagreement, and expanding circle maps t -> m*t mod 1 with the
arc-length metric.  The central object is the dynamically scaled ball

    B_n(x, r_n) = { y : d(T^j x, T^j y) < r_n  for all 0 <= j <= n-1 },
    r_n = exp(-n * eps),

whose radius shrinks exponentially with the order n.  On a shift this
ball is exactly a cylinder; on the circle it is exactly an arc, but only
inside a resolution regime that we enforce rather than approximate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import gcd


class ResolutionError(ValueError):
    """Requested ball lies outside the certified geometry regime."""


class IncompatiblePointError(ValueError):
    """Point does not belong to the system (symbols or transitions)."""


def _lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


# ---------------------------------------------------------------------------
# points


@dataclass(frozen=True)
class Point:
    """Eventually periodic symbol sequence: preperiod followed by an
    infinitely repeated nonempty period word."""

    preperiod: tuple[int, ...]
    period: tuple[int, ...]

    def __post_init__(self):
        if len(self.period) == 0:
            raise ValueError("period word must be nonempty")
        if any(s < 0 for s in self.preperiod + self.period):
            raise ValueError("symbols must be nonnegative integers")

    def symbol(self, i: int) -> int:
        if i < len(self.preperiod):
            return self.preperiod[i]
        return self.period[(i - len(self.preperiod)) % len(self.period)]

    def prefix(self, length: int) -> tuple[int, ...]:
        return tuple(self.symbol(i) for i in range(length))

    def shift(self, j: int = 1) -> "Point":
        """Image under j applications of the left shift."""
        if j < 0:
            raise ValueError("cannot shift backwards")
        if j <= len(self.preperiod):
            return Point(self.preperiod[j:], self.period)
        k = (j - len(self.preperiod)) % len(self.period)
        return Point((), self.period[k:] + self.period[:k])


@dataclass(frozen=True)
class CirclePoint:
    """Exact rational coordinate on the circle [0, 1)."""

    coordinate: Fraction

    def __post_init__(self):
        c = Fraction(self.coordinate)
        if not 0 <= c < 1:
            raise ValueError("coordinate must lie in [0, 1)")
        object.__setattr__(self, "coordinate", c)

    def orbit(self, degree: int, j: int) -> Fraction:
        """Exact coordinate of the j-th image under t -> degree*t mod 1."""
        c = self.coordinate * degree**j
        return c - (c.numerator // c.denominator)


def periodic_point(word) -> Point:
    return Point((), tuple(word))


def first_disagreement(x: Point, y: Point) -> int | None:
    """Index of the first differing symbol, or None when x == y as
    infinite sequences.

    Two eventually periodic sequences agreeing on the first
    max(preperiods) + lcm(periods) symbols agree everywhere.
    """
    bound = max(len(x.preperiod), len(y.preperiod)) + _lcm(
        len(x.period), len(y.period)
    )
    for i in range(bound):
        if x.symbol(i) != y.symbol(i):
            return i
    return None


# ---------------------------------------------------------------------------
# systems


@dataclass(frozen=True)
class SymbolicSystem:
    """Subshift of finite type on ``alphabet_size`` symbols.

    ``transitions[a][b]`` says the word ``ab`` is admissible; None means
    the full shift.  The metric is d(x, y) = metric_base**-k with k the
    first disagreement index, so larger bases mean faster separation.
    """

    alphabet_size: int
    transitions: tuple[tuple[bool, ...], ...] | None = None
    metric_base: float = math.e

    def __post_init__(self):
        m = self.alphabet_size
        if m < 2:
            raise ValueError("alphabet needs at least two symbols")
        if not self.metric_base > 1:
            raise ValueError("metric base must exceed 1")
        if self.transitions is not None:
            t = tuple(tuple(bool(v) for v in row) for row in self.transitions)
            if len(t) != m or any(len(row) != m for row in t):
                raise ValueError("transition matrix must be m x m")
            for i in range(m):
                if not any(t[i]):
                    raise ValueError(f"symbol {i} has no successor")
                if not any(row[i] for row in t):
                    raise ValueError(f"symbol {i} has no predecessor")
            if all(all(row) for row in t):
                t = None  # full shift, keep the cheap code path
            object.__setattr__(self, "transitions", t)

    @property
    def log_base(self) -> float:
        # exact 1.0 for the default base keeps cylinder lengths crisp
        return 1.0 if self.metric_base == math.e else math.log(self.metric_base)

    def allowed(self, a: int, b: int) -> bool:
        if self.transitions is None:
            return True
        return self.transitions[a][b]

    def word_admissible(self, word) -> bool:
        w = tuple(word)
        if any(not 0 <= s < self.alphabet_size for s in w):
            return False
        return all(self.allowed(a, b) for a, b in zip(w, w[1:]))

    def validate_point(self, x: Point) -> None:
        """Check symbols and transitions along the whole orbit, the
        period wrap and the preperiod/period junction included."""
        full = x.preperiod + x.period + (x.period[0],)
        if any(not 0 <= s < self.alphabet_size for s in full):
            raise IncompatiblePointError("symbol out of range")
        for a, b in zip(full, full[1:]):
            if not self.allowed(a, b):
                raise IncompatiblePointError(f"transition {a}->{b} forbidden")

    def words(self, length: int):
        """Yield all admissible words of the given length."""
        if length == 0:
            yield ()
            return
        stack = [(a,) for a in range(self.alphabet_size - 1, -1, -1)]
        while stack:
            w = stack.pop()
            if len(w) == length:
                yield w
                continue
            for a in range(self.alphabet_size - 1, -1, -1):
                if self.allowed(w[-1], a):
                    stack.append(w + (a,))


@dataclass(frozen=True)
class CircleSystem:
    """Expanding circle endomorphism t -> degree * t mod 1."""

    degree: int

    def __post_init__(self):
        if self.degree < 2:
            raise ValueError("degree must be at least 2")


def arc_distance(a: Fraction, b: Fraction) -> Fraction:
    d = abs(a - b)
    return min(d, 1 - d)


# ---------------------------------------------------------------------------
# Bowen metric and balls


def bowen_distance(system, x, y, n: int) -> float:
    """max_{0 <= j < n} d(T^j x, T^j y), computed exactly.

    Shift case: if the sequences first disagree at index k, the j-th
    shifted pair disagrees at k - j, so the maximum over j < n is
    base**-max(0, k - n + 1).
    """
    if n < 1:
        raise ValueError("order must be positive")
    if isinstance(system, SymbolicSystem):
        k = first_disagreement(x, y)
        if k is None:
            return 0.0
        return self_base_pow(system, -max(0, k - n + 1))
    m = system.degree
    best = Fraction(0)
    for j in range(n):
        d = arc_distance(x.orbit(m, j), y.orbit(m, j))
        if d > best:
            best = d
    return float(best)


def self_base_pow(system: SymbolicSystem, exponent: int) -> float:
    if system.metric_base == math.e:
        return math.exp(exponent)
    return system.metric_base**exponent


def cylinder_length(n: int, eps: float, log_base: float = 1.0) -> int:
    """Length of the cylinder equal to a shift ball of order n at scale
    exp(-n*eps): the smallest integer k with base**-(k-n+1) < exp(-n*eps),
    i.e. the smallest k exceeding n - 1 + n*eps/log(base)."""
    if n < 1:
        raise ValueError("order must be positive")
    if eps < 0:
        raise ValueError("scale parameter must be nonnegative")
    return math.floor(n - 1 + n * eps / log_base) + 1


@dataclass(frozen=True)
class Ball:
    """Dynamical ball B_n(center, exp(-n*eps)).

    Shift balls store the cylinder word (length n + floor(n*eps/log base));
    circle balls store the exact-arc radius exp(-n*eps) * m**-(n-1).
    """

    center: object
    order: int
    epsilon: float
    word: tuple[int, ...] | None = None
    radius: float | None = None

    @property
    def kind(self) -> str:
        return "shift" if self.word is not None else "circle"


def neutralized_ball(system, x, n: int, eps: float) -> Ball:
    """Construct B_n(x, exp(-n*eps)) with certified geometry.

    Circle balls are only available while exp(-n*eps) <= 1/(2m): below
    that threshold every point outside the candidate arc is pushed at
    least exp(-n*eps) away by some iterate, so ball == arc exactly.
    Outside the regime the ball is not an arc (for exp(-n*eps) > 1/2 it
    is the whole circle) and we refuse rather than approximate.
    """
    if n < 1:
        raise ValueError("order must be positive")
    if eps < 0:
        raise ValueError("scale parameter must be nonnegative")
    if isinstance(system, SymbolicSystem):
        system.validate_point(x)
        L = cylinder_length(n, eps, system.log_base)
        return Ball(center=x, order=n, epsilon=eps, word=x.prefix(L))
    m = system.degree
    if n * eps < math.log(2 * m):
        raise ResolutionError(
            "circle ball of order %d at eps=%g exceeds resolution: need "
            "n*eps >= log(2m) = %.6f for the arc characterization"
            % (n, eps, math.log(2 * m))
        )
    radius = math.exp(-n * eps) * float(m) ** -(n - 1)
    return Ball(center=x, order=n, epsilon=eps, radius=radius)


def ball_contains(system, ball: Ball, y) -> bool:
    """Exact membership test; boundary points are excluded (the ball is
    open in the Bowen metric)."""
    if ball.kind == "shift":
        return y.prefix(len(ball.word)) == ball.word
    d = arc_distance(y.coordinate, ball.center.coordinate)
    return float(d) < ball.radius
