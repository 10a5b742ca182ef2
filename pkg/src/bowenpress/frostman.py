"""Frostman-type measures from min-cost flows on the cylinder tree.

At exponent s every admissible ball B (a cylinder of some order n with
weight w(B) = exp(-n*s + phi_n)) caps how much mass a candidate measure
may give it.  The maximal total mass routable from the root under all
caps is the min-cut value

    F(v) = min(cap(v), sum over children F),

which, ball families being laminar, equals the weighted cover cost: the
cut consists of the balls where the min chose cap, and those form the
optimal cover.  Distributing mass down the tree proportionally to child
flows realizes the bound mu(B) <= w(B) / F(root) for every admissible
ball simultaneously, the measure-side certificate that covers cannot be
cheaper than F(root).

F(root) underflowing to zero signals s above the critical exponent
(every candidate measure dies); a subtree with no admissible ball caps
nothing and is reported as truncation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import potentials as pot
from .cover import (
    CoverProblem,
    SubcriticalFlowError,
    TruncationError,
    ball_weight,
)
from .measures import TreeMeasure
from .systems import SymbolicSystem


@dataclass(frozen=True)
class FrostmanResult:
    flow_value: object  # float or Fraction: F(root)
    measure: TreeMeasure
    node_masses: dict  # word -> mass at every depth <= depth_cap
    depth: int
    exact: bool


def construct(problem: CoverProblem, s: float, exact: bool = False) -> FrostmanResult:
    """Build the max-flow measure at exponent s.

    Enumerates the admissible tree explicitly (meant for depths where
    that is feasible), computes F bottom-up and routes mass top-down.
    Children whose subtrees carry no cap take an equal share, since no
    constraint below distinguishes them.
    """
    sys_ = problem.system
    if not isinstance(sys_, SymbolicSystem):
        raise TypeError("flow measures are built on shift systems")
    if problem.target.kind != "full":
        raise ValueError("flow construction covers the full shift only")
    depth_of = problem.depth_of_order()
    if not depth_of:
        raise TruncationError("no admissible ball order under the depth cap")
    D = problem.depth_cap
    phi = problem.potential
    conv = Fraction if exact else float
    INF = None  # uncapped marker; arithmetic below treats None as +inf

    children: dict[tuple, list] = {}

    def cap_of(word):
        n = depth_of.get(len(word))
        if n is None:
            return INF
        return conv(ball_weight(n, s, pot.word_value(sys_, phi, word, n)))

    flow: dict[tuple, object] = {}

    def compute_flow(word):
        cap = cap_of(word)
        if len(word) == D:
            flow[word] = cap
            return cap
        kids = [
            word + (a,)
            for a in range(sys_.alphabet_size)
            if not word or sys_.allowed(word[-1], a)
        ]
        children[word] = kids
        total = conv(0)
        for kid in kids:
            f = compute_flow(kid)
            if f is INF or total is INF:
                total = INF
            else:
                total += f
        if cap is INF:
            val = total
        elif total is INF:
            val = cap
        else:
            val = min(cap, total)
        flow[word] = val
        return val

    root_flow = compute_flow(())
    if root_flow is INF:
        raise TruncationError(
            "the root flow is unbounded: no ball caps some branch"
        )
    if root_flow == 0:
        raise SubcriticalFlowError(
            f"zero flow at s={s}: the exponent sits at or above critical"
        )

    masses: dict[tuple, object] = {(): conv(1)}

    def distribute(word):
        if len(word) == D:
            return
        kids = children[word]
        mu = masses[word]
        finite = [flow[k] for k in kids if flow[k] is not INF]
        if len(finite) < len(kids):
            # uncapped children: nothing below constrains the split
            share = mu / len(kids)
            for k in kids:
                masses[k] = share
                distribute(k)
            return
        total = sum(finite)
        for k in kids:
            masses[k] = mu * flow[k] / total if total > 0 else conv(0)
            distribute(k)

    distribute(())
    measure = TreeMeasure(depth=D, masses={
        w: (m if exact else float(m)) for w, m in masses.items()
    })
    return FrostmanResult(
        flow_value=root_flow,
        measure=measure,
        node_masses=dict(masses),
        depth=D,
        exact=exact,
    )


@dataclass(frozen=True)
class BoundReport:
    checked: int
    violations: tuple
    max_ratio: object  # max over balls of mu(B) * F / w(B)

    @property
    def holds(self) -> bool:
        return not self.violations


def verify_bound(problem: CoverProblem, result: FrostmanResult, s: float,
                 rel_tol: float = 1e-12) -> BoundReport:
    """Check mu(B) * F(root) <= w(B) over every admissible ball in the
    truncated tree; exact construction admits rel_tol = 0."""
    sys_ = problem.system
    depth_of = problem.depth_of_order()
    phi = problem.potential
    F = result.flow_value
    violations = []
    checked = 0
    max_ratio = Fraction(0) if result.exact else 0.0
    for word, mu in result.node_masses.items():
        n = depth_of.get(len(word))
        if n is None:
            continue
        w = ball_weight(n, s, pot.word_value(sys_, phi, word, n))
        w = Fraction(w) if result.exact else w
        checked += 1
        lhs = mu * F
        if w > 0:
            ratio = lhs / w
            if ratio > max_ratio:
                max_ratio = ratio
        if lhs > w * (1 + rel_tol):
            violations.append((word, n, float(lhs), float(w)))
    return BoundReport(
        checked=checked,
        violations=tuple(violations),
        max_ratio=max_ratio,
    )
