"""Command line front end.

Subcommands:

  pressure    critical exponent of the truncated cover cost
  weighted    weighted (fractional) cover cost or its critical exponent
  katok       mass-constrained critical exponents for a measure
  bk          sampled local pressure along measure-typical orbits
  frostman    max-flow measure construction plus the mass bound audit
  distortion  variation modulus grid and tempered verdict
  vp-check    full grid report with inequality checks (CSV artifacts)
  baselines   closed-form expectations for the bundled families

Every command reads the system and potential from an INI file
(--config); [run] values act as defaults that explicit flags override.
JSON goes to --out or stdout; CSV layouts are stable column contracts.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from . import cover as cover_mod
from . import frostman as fr
from . import harness as hz
from . import measures as ms
from . import potentials as pots
from .config import load_config
from .systems import CircleSystem, cylinder_length


def _emit(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def _jdump(payload) -> str:
    return json.dumps(payload, sort_keys=True, indent=2, default=float) + "\n"


def _run_val(spec, args, key: str, cast, default, run_key: str | None = None):
    flag = getattr(args, key, None)
    if flag is not None:
        return flag
    run_key = run_key or key
    if run_key in spec.run:
        return cast(spec.run[run_key])
    return default


def _problem(spec, args):
    system = spec.system
    eps = _run_val(spec, args, "eps", float, 0.1, run_key="epsilon")
    big_n = _run_val(spec, args, "big_n", int, 20)
    if isinstance(system, CircleSystem):
        default_depth = max(big_n, _run_val(spec, args, "n_max", int, 2 * big_n))
    else:
        default_depth = cylinder_length(big_n, eps, system.log_base)
    depth = _run_val(spec, args, "depth", int, default_depth)
    return cover_mod.CoverProblem(
        system=system, potential=spec.potential, big_n=big_n, epsilon=eps,
        depth_cap=depth, target=spec.target,
        value_mode=_run_val(spec, args, "value_mode", str, "sup"),
    )


def _estimate_payload(est) -> dict:
    return {
        "critical_s": est.critical_s,
        "bracket": list(est.bracket),
        "big_n": est.big_n,
        "epsilon": est.epsilon,
        "depth_cap": est.depth_cap,
        "value_mode": est.value_mode,
        "diagnostics": dict(est.diagnostics),
    }


def _curve_csv(est) -> str:
    rows = [{"s": s, "cost": c} for s, c in sorted(est.cost_curve)]
    return hz.rows_to_csv(rows, ("s", "cost"))


def cmd_pressure(args):
    spec = load_config(args.config)
    est = cover_mod.critical_exponent(_problem(spec, args), tol=args.tol)
    if args.format == "csv":
        _emit(_curve_csv(est), args.out)
    else:
        _emit(_jdump(_estimate_payload(est)), args.out)


def cmd_weighted(args):
    spec = load_config(args.config)
    prob = _problem(spec, args)
    if args.s is not None:
        cost = cover_mod.weighted_cover_cost(prob, args.s, exact=args.exact)
        integral = cover_mod.cover_cost(prob, args.s, exact=args.exact)
        _emit(_jdump({
            "s": args.s,
            "weighted_cost": float(cost),
            "cover_cost": float(integral),
        }), args.out)
        return
    est = cover_mod.critical_exponent(
        prob, cost_fn=lambda s: cover_mod.weighted_cover_cost(prob, s),
        tol=args.tol,
    )
    if args.format == "csv":
        _emit(_curve_csv(est), args.out)
    else:
        _emit(_jdump(_estimate_payload(est)), args.out)


def cmd_katok(args):
    spec = load_config(args.config)
    if spec.measure is None and not isinstance(spec.system, CircleSystem):
        raise SystemExit("katok needs a [measure] section in the config")
    kp = ms.katok_pressure(
        _problem(spec, args), spec.measure,
        _run_val(spec, args, "delta", float, 0.5), tol=args.tol,
    )
    _emit(_jdump({
        "delta": kp.delta,
        "critical_s": kp.critical_s,
        "lower_root": kp.lower_root,
        "bracket": list(kp.bracket),
        "slack": float(kp.slack),
    }), args.out)


def cmd_bk(args):
    spec = load_config(args.config)
    if spec.measure is None:
        raise SystemExit("bk needs a [measure] section in the config")
    eps = _run_val(spec, args, "eps", float, 0.1, run_key="epsilon")
    big_n = _run_val(spec, args, "big_n", int, 20)
    n_max = _run_val(spec, args, "n_max", int, 200)
    samples = _run_val(spec, args, "samples", int, 20)
    seed = _run_val(spec, args, "seed", int, 0)
    res = ms.bk_pressure(spec.system, spec.measure, spec.potential, eps,
                         big_n=big_n, n_max=n_max, samples=samples, seed=seed)
    if args.format == "csv":
        rows = []
        pts = ms.sample(spec.system, spec.measure,
                        cylinder_length(n_max, eps, spec.system.log_base)
                        if not isinstance(spec.system, CircleSystem) else n_max,
                        samples, seed)
        for i, x in enumerate(pts):
            trace = ms.bk_local(spec.system, spec.measure, spec.potential, x,
                                eps, big_n, n_max)
            for row in trace.rows():
                rows.append({
                    "sample": i, "order": row["order"], "value": row["value"],
                    "in_window": trace.window[0] <= row["order"] <= trace.window[1],
                })
        _emit(hz.rows_to_csv(rows, ("sample", "order", "value", "in_window")),
              args.out)
        return
    _emit(_jdump({
        "mean": res.mean,
        "stderr": res.stderr,
        "samples": list(res.samples),
        "window": list(res.window),
        "window_oscillation": res.window_oscillation,
        "infinite_samples": res.infinite_samples,
    }), args.out)


def cmd_frostman(args):
    spec = load_config(args.config)
    prob = _problem(spec, args)
    result = fr.construct(prob, args.s, exact=args.exact)
    bound = fr.verify_bound(prob, result, args.s)
    if args.format == "csv":
        rows = [
            {"word": "".join(map(str, w)), "mass": float(m)}
            for w, m in sorted(result.node_masses.items())
        ]
        _emit(hz.rows_to_csv(rows, ("word", "mass")), args.out)
        return
    _emit(_jdump({
        "s": args.s,
        "flow_value": float(result.flow_value),
        "depth": result.depth,
        "exact": result.exact,
        "bound_checked": bound.checked,
        "bound_max_ratio": float(bound.max_ratio),
        "bound_holds": bound.holds,
    }), args.out)


def cmd_distortion(args):
    spec = load_config(args.config)
    eps_grid = tuple(float(t) for t in args.eps_grid.split(";"))
    n_grid = tuple(int(t) for t in args.n_grid.split(";"))
    rep = pots.tempered_report(spec.system, spec.potential, eps_grid, n_grid)
    if args.format == "csv":
        _emit(hz.rows_to_csv(
            list(rep.rows()), ("n", "epsilon", "upper", "lower", "upper_over_n")
        ), args.out)
        return
    _emit(_jdump({
        "verdict": rep.verdict,
        "proxies": {repr(e): rep.proxies[e] for e in rep.eps_grid},
    }), args.out)


def cmd_vp_check(args):
    spec = load_config(args.config)
    if args.family is not None:
        family = args.family
    elif isinstance(spec.system, CircleSystem):
        family = "lebesgue"
    elif spec.measure is not None and spec.measure.kind == "markov":
        family = "golden_markov"
    else:
        family = "bernoulli"
    cfg = hz.VPConfig(
        eps_grid=tuple(float(t) for t in args.eps_grid.split(";")),
        bk_samples=args.samples,
        bk_n_max=args.n_max,
        seed=args.seed if args.seed is not None else 2026,
        measure_family=family,
        family_grid=args.family_grid,
        refine_rounds=args.refine_rounds,
    )
    rep = hz.vp_report(spec.system, spec.potential, cfg,
                       system_label=args.config, potential_label="")
    out = args.out or "vp_report.csv"
    extrap = args.extrap_out or out.replace(".csv", "_extrapolation.csv")
    hz.write_report_csv(rep, out, extrap)
    if args.json_out:
        _emit(hz.report_to_json(rep), args.json_out)
    failures = 0
    for c in rep.checks:
        tag = "PASS" if c["passed"] else "FAIL"
        failures += not c["passed"]
        print(f"{tag} {c['name']} eps={c['epsilon']}: lhs={c['lhs']:.6f} "
              f"rhs={c['rhs']:.6f} tol={c['tolerance']:.2e}")
    print(f"wrote {out} and {extrap}")
    if failures:
        raise SystemExit(1)


def cmd_baselines(args):
    rows = hz.baseline_expectations()
    _emit(hz.rows_to_csv(rows, hz.BASELINE_COLUMNS), args.out)


def _add_common(p, with_eps: bool = True):
    p.add_argument("--config", required=True, help="INI file path")
    p.add_argument("--out", default=None, help="output path (default stdout)")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--tol", type=float, default=1e-10)
    if with_eps:
        p.add_argument("--eps", type=float, default=None)
        p.add_argument("--big-n", dest="big_n", type=int, default=None)
        p.add_argument("--depth", type=int, default=None)
        p.add_argument("--n-max", dest="n_max", type=int, default=None)
        p.add_argument("--value-mode", dest="value_mode", default=None)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="bowenpress", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pressure", help="cover-cost critical exponent")
    _add_common(p)
    p.set_defaults(fn=cmd_pressure)

    p = sub.add_parser("weighted", help="weighted cover cost / root")
    _add_common(p)
    p.add_argument("--s", type=float, default=None)
    p.add_argument("--exact", action="store_true")
    p.set_defaults(fn=cmd_weighted)

    p = sub.add_parser("katok", help="mass-constrained critical exponents")
    _add_common(p)
    p.add_argument("--delta", type=float, default=None)
    p.set_defaults(fn=cmd_katok)

    p = sub.add_parser("bk", help="sampled local pressure")
    _add_common(p)
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(fn=cmd_bk)

    p = sub.add_parser("frostman", help="max-flow measure construction")
    _add_common(p)
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--exact", action="store_true")
    p.set_defaults(fn=cmd_frostman)

    p = sub.add_parser("distortion", help="variation modulus grid")
    _add_common(p, with_eps=False)
    p.add_argument("--eps-grid", default="0.1;0.2;0.5")
    p.add_argument("--n-grid", default="2;4;8;16")
    p.set_defaults(fn=cmd_distortion)

    p = sub.add_parser("vp-check", help="grid report with checks")
    p.add_argument("--config", required=True)
    p.add_argument("--out", default=None)
    p.add_argument("--extrap-out", dest="extrap_out", default=None)
    p.add_argument("--json-out", dest="json_out", default=None)
    p.add_argument("--eps-grid", default="0.1;0.2;0.25;0.5;1.0")
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--n-max", dest="n_max", type=int, default=200)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--family", default=None,
                   choices=(None, "bernoulli", "golden_markov", "lebesgue"))
    p.add_argument("--family-grid", dest="family_grid", type=int, default=7)
    p.add_argument("--refine-rounds", dest="refine_rounds", type=int, default=2)
    p.set_defaults(fn=cmd_vp_check)

    p = sub.add_parser("baselines", help="closed-form expectations")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_baselines)

    args = ap.parse_args(argv)
    args.fn(args)
    return 0


if __name__ == "__main__":
    sys.exit(main())
