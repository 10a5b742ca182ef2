#!/usr/bin/env python3
"""Regenerate every CSV artifact under data/baselines/.

Everything here is deterministic: fixed seeds, stable float repr, no
timestamps.  Rerunning must reproduce the files byte for byte.
"""

import math
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from bowenpress import cover as cover_mod
from bowenpress import harness as hz
from bowenpress import measures as ms
from bowenpress.potentials import (
    AdditivePotential,
    CircleLipschitzPotential,
    cosine_function,
    constant_function,
    tempered_report,
)
from bowenpress.systems import CircleSystem, SymbolicSystem, cylinder_length

OUT = pathlib.Path(__file__).resolve().parents[1] / "data" / "baselines"


def write(name: str, text: str):
    path = OUT / name
    path.write_text(text)
    print(f"wrote {path} ({len(text.splitlines())} lines)")


def vp_artifacts(tag, system, phi, cfg):
    rep = hz.vp_report(system, phi, cfg, system_label=tag)
    write(f"vp_{tag}.csv", hz.rows_to_csv(rep.rows, hz.VP_COLUMNS))
    write(f"vp_{tag}_extrapolation.csv",
          hz.rows_to_csv(rep.extrapolation, hz.EXTRAP_COLUMNS))
    bad = [c for c in rep.checks if not c["passed"]]
    if bad:
        raise SystemExit(f"{tag}: {len(bad)} inequality checks failed: {bad}")
    print(f"{tag}: {len(rep.checks)} checks passed")
    return rep


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    shift2 = SymbolicSystem(alphabet_size=2)
    zero2 = AdditivePotential(values=(0.0, 0.0))
    weights12 = AdditivePotential(values=(0.0, math.log(2.0)))
    circle2 = CircleSystem(degree=2)
    flat = CircleLipschitzPotential(func=constant_function(0.0))

    write("expectations.csv",
          hz.rows_to_csv(hz.baseline_expectations(), hz.BASELINE_COLUMNS))

    vp_artifacts("full_shift_entropy", shift2, zero2, hz.VPConfig())
    vp_artifacts("full_shift_pressure", shift2, weights12, hz.VPConfig())
    vp_artifacts("circle_doubling", circle2, flat,
                 hz.VPConfig(measure_family="lebesgue"))

    write("sandwich_full_shift_pressure.csv", hz.rows_to_csv(
        hz.sandwich_report(shift2, weights12, (0.1, 0.2, 0.25, 0.5, 1.0)),
        ("epsilon", "s", "theta", "center_half_cost", "weighted_cost",
         "sup_cost", "passed"),
    ))

    # cost curve of the bisection probes at one grid point
    prob = cover_mod.CoverProblem(
        system=shift2, potential=weights12, big_n=20, epsilon=0.1,
        depth_cap=cylinder_length(20, 0.1),
    )
    est = cover_mod.critical_exponent(prob)
    curve = [{"s": s, "cost": c} for s, c in sorted(est.cost_curve)]
    write("cost_curve_full_shift_pressure.csv",
          hz.rows_to_csv(curve, ("s", "cost")))

    # per-orbit local pressure traces for the tilted optimum measure
    meas = ms.BernoulliMeasure(probs=(1.0 / 3.0, 2.0 / 3.0))
    rows = []
    pts = ms.sample(shift2, meas, cylinder_length(200, 0.1), 6, seed=2026)
    for i, x in enumerate(pts):
        trace = ms.bk_local(shift2, meas, weights12, x, 0.1, 20, 200)
        for row in trace.rows():
            rows.append({
                "sample": i, "order": row["order"], "value": row["value"],
                "in_window": trace.window[0] <= row["order"] <= trace.window[1],
            })
    write("bk_traces_full_shift_pressure.csv",
          hz.rows_to_csv(rows, ("sample", "order", "value", "in_window")))

    cosine = CircleLipschitzPotential(func=cosine_function(0.3))
    rep = tempered_report(circle2, cosine, (0.05, 0.1, 0.2, 0.4),
                          (8, 16, 32, 64))
    write("distortion_circle_cosine.csv", hz.rows_to_csv(
        list(rep.rows()), ("n", "epsilon", "upper", "lower", "upper_over_n")))
    print(f"distortion verdict: {rep.verdict}")


if __name__ == "__main__":
    main()
