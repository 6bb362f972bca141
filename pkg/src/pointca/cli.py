"""Command line front end.

Results go to stdout as JSON or text. Failures print a single line
``error: <kind>: <message>`` to stderr and exit nonzero (2 for bad usage,
1 for everything else).
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import harness
from .analysis import (
    RENDER_MODES,
    canonicalize,
    cover_distribution,
    is_valid,
    p_max_formula,
    quad_export,
    render,
    v_avrg,
)
from .lattice import InitSpec, format_pattern, make_rng, new_grid, read_pattern, write_pattern
from .oracle import BACKTRACK_MAX_N, oracle_report, p_max_with_source
from .rules import Pipeline, RuleParams
from .scheduler import is_quiescent, parse_order, run, window_codes
from .tiling import FORMS, format_template, hit_table, templates


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# flags shared by every command that simulates; None means "not given"
_SPEC_FLAGS = {
    "n": dict(type=int),
    "init": dict(help="zero, one, random or random:<density>"),
    "rules": dict(dest="pipeline", help="A, AB, ABC1 or ABC1C2"),
    "pi0": dict(type=float),
    "pi1": dict(type=float),
    "pi2": dict(type=float),
    "c2-mode": dict(choices=("diag", "nesw")),
    "hit-form": dict(choices=("simplified3", "reduced3")),
    "hit-pre-adjust": dict(action=argparse.BooleanOptionalAction),
    "order": dict(help="pure, sweep or strict (or the long names)"),
    "steps": dict(type=int, dest="t_max", help="time-step limit T_max"),
    "stop-on-stable": dict(action=argparse.BooleanOptionalAction),
    "seed": dict(type=int),
}


def _add_spec_flags(p, *names):
    for name in names or _SPEC_FLAGS:
        p.add_argument(f"--{name}", default=None, **_SPEC_FLAGS[name])


def _overrides(args) -> dict:
    keys = ("n", "init", "pipeline", "pi0", "pi1", "pi2", "c2_mode", "hit_form", "hit_pre_adjust",
            "order", "t_max", "stop_on_stable", "seed", "runs", "workers")
    return {k: getattr(args, k) for k in keys if getattr(args, k, None) is not None}


def _params(args) -> RuleParams:
    d = RuleParams()
    return RuleParams(*(getattr(args, k) if getattr(args, k) is not None else getattr(d, k)
                        for k in ("pi0", "pi1", "pi2")))


def _emit(obj, out=None):
    text = json.dumps(obj, indent=2) + "\n" if not isinstance(obj, str) else obj
    if out:
        _write(out, text)
    else:
        sys.stdout.write(text)


def _write(path, text):
    try:
        with open(path, "w") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"{path}: {exc.strerror or exc}") from exc


# -- commands ----------------------------------------------------------------


def cmd_run(args):
    base = {"n": 10, "init": "random", "pipeline": "ABC1C2"}
    spec = harness.ExperimentSpec(**{**base, **_overrides(args)}).validate()
    rng = make_rng(spec.seed)
    g = new_grid(spec.n, InitSpec.parse(spec.init), rng)
    tr = run(g, spec.pipeline_obj(), spec.rule_params(), spec.order, spec.stop_spec(), rng)
    if args.out:
        write_pattern(tr.final, args.out)
    if args.trace:
        rows = ["t,tau,points,valid,quiescent," + ",".join(f"hit{h}" for h in range(9))]
        rows += [f"{r.t},{r.tau},{r.points},{int(r.valid)},{int(r.quiescent)}," + ",".join(map(str, r.hits))
                 for r in tr.rows]
        _write(args.trace, "\n".join(rows) + "\n")
    _emit({
        "n": spec.n,
        "pipeline": spec.pipeline_obj().name,
        "order": parse_order(spec.order),
        "seed": spec.seed,
        "quiescent": tr.quiescent,
        "tau_stable": tr.tau_stable,
        "t_stable": tr.t_stable,
        "t_end": tr.final.t,
        "points": tr.points,
        "valid": is_valid(tr.final),
        "best_points": tr.best_points,
        "best_t": tr.best_t,
        "pattern": format_pattern(tr.final),
    })


def cmd_experiment(args):
    d = harness.ExperimentSpec.from_json(args.config).to_dict() if args.config else {}
    d.update(_overrides(args))
    if args.out:
        d["csv"] = args.out
    if args.patterns:
        d["pattern_dir"] = args.patterns
    if "n" not in d:
        raise UsageError("experiment needs --n or a config file with n")
    res = harness.experiment(harness.ExperimentSpec.from_dict(d))
    out = {"spec": res.spec.to_dict(), "summary": vars(res.summary)}
    _emit(out)


def cmd_scaling(args):
    kw = dict(runs=args.runs or 100, params=_params(args), t_max=args.t_max or 2000,
              seed=args.seed or 0, workers=args.workers or 1)
    if args.compare:
        a, b, ratio = harness.compare_orders(args.sizes, **kw)
        if args.out:
            _write(args.out, a.csv_text() + b.csv_text())
        _emit({"slow": _scaling_dict(a), "fast": _scaling_dict(b), "ratio": ratio})
        return
    res = harness.scaling_study(args.sizes, order=args.order or "random_sequence", csv_path=args.out, **kw)
    _emit(_scaling_dict(res))


def _scaling_dict(r):
    return {"order": r.order, "sizes": r.sizes, "t_avg": r.t_avg, "converged": r.converged,
            "excluded": r.excluded, "a": r.a, "b": r.b}


def cmd_odd_study(args):
    res = harness.odd_n_study(args.n, args.t_max_list, runs=args.runs or 100,
                              order=args.order or "random_sequence", params=_params(args),
                              seed=args.seed or 0, workers=args.workers or 1)
    _emit({
        "n": res.n,
        "p_max": res.p_max,
        "max_seen": res.max_seen,
        "monotone": res.monotone,
        "histograms": {str(t): {str(p): c for p, c in sorted(res.best_p[t].items())} for t in res.t_max_list},
        "fraction_at_max": {str(t): res.fraction_at_max(t) for t in res.t_max_list},
    }, args.out)


def cmd_oracle(args):
    if args.n > BACKTRACK_MAX_N:
        p, source = p_max_with_source(args.n)
        _emit({"n": args.n, "method": source, "p_max": p}, args.out)
        return
    rep = oracle_report(args.n)
    if args.emit_classes:
        try:
            os.makedirs(args.emit_classes, exist_ok=True)
            for tag, classes in (("min", rep.classes_min), ("max", rep.classes_max)):
                for i, text in enumerate(classes):
                    with open(os.path.join(args.emit_classes, f"n{rep.n}_{tag}_{i}.txt"), "w") as fh:
                        fh.write(text)
        except OSError as exc:
            raise OSError(f"{args.emit_classes}: {exc.strerror or exc}") from exc
    _emit(rep.to_json(classes=not args.no_classes) + "\n", args.out)


def cmd_verify(args):
    g = read_pattern(args.pattern)
    if not is_valid(g):
        raise ValueError(f"{args.pattern}: pattern is not valid")
    _emit({"valid": True, "n": g.n, "points": int(g.cells.sum())})


def cmd_stats(args):
    g = read_pattern(args.pattern)
    p = int(g.cells.sum())
    hist = np.bincount(hit_table("simplified3")[window_codes(g.cells)].ravel(), minlength=9)
    cd = cover_distribution(g)
    _emit({
        "n": g.n,
        "points": p,
        "p_max": p_max_formula(g.n),
        "valid": is_valid(g),
        "fixed_point": is_quiescent(g, Pipeline(("A",))),
        "v_avrg": v_avrg(p, g.n),
        "cover": {str(k): v for k, v in cd.as_dict().items()},
        "kernel": cd.kernel,
        "hull": cd.hull,
        "cover_text": str(cd),
        "hits": [int(h) for h in hist],
    })


def cmd_canon(args):
    g = read_pattern(args.pattern)
    _emit(quad_export(g, args.quad, args.quad) if args.quad else canonicalize(g), args.out)


def cmd_render(args):
    render(read_pattern(args.pattern), args.out, args.mode, args.scale)


def cmd_templates(args):
    blocks = []
    for t in templates(args.form, args.neighborhood):
        blocks.append(f"A{t.k} ref={t.ref}\n{format_template(t)}\n")
    _emit("\n".join(blocks))


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="pointca", description="Point patterns on toroidal grids by asynchronous cellular automata.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("run", help="evolve one grid")
    _add_spec_flags(s)
    s.add_argument("--out", help="write the final pattern here")
    s.add_argument("--trace", help="write the per-time-step trace CSV here")
    s.set_defaults(func=cmd_run)

    s = sub.add_parser("experiment", help="many seeded runs with CSV output")
    s.add_argument("--config", help="JSON file with ExperimentSpec fields")
    _add_spec_flags(s)
    s.add_argument("--runs", type=int)
    s.add_argument("--workers", type=int)
    s.add_argument("--out", help="CSV path")
    s.add_argument("--patterns", help="directory for final and best patterns")
    s.set_defaults(func=cmd_experiment)

    s = sub.add_parser("scaling", help="convergence time versus size, power-law fit")
    s.add_argument("--sizes", type=int, nargs="+", default=[6, 8, 10, 12])
    _add_spec_flags(s, "order", "steps", "seed", "pi0", "pi1", "pi2")
    s.add_argument("--compare", action="store_true", help="pure against sweep order, report the ratio")
    s.add_argument("--runs", type=int)
    s.add_argument("--workers", type=int)
    s.add_argument("--out", help="CSV path")
    s.set_defaults(func=cmd_scaling)

    s = sub.add_parser("odd-study", help="best point counts for an odd size under several time limits")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--t-max", dest="t_max_list", type=int, nargs="+", default=[200, 400, 800])
    _add_spec_flags(s, "order", "seed", "pi0", "pi1", "pi2")
    s.add_argument("--runs", type=int)
    s.add_argument("--workers", type=int)
    s.add_argument("--out", help="JSON path")
    s.set_defaults(func=cmd_odd_study)

    s = sub.add_parser("oracle", help="exact enumeration of valid patterns (n <= 8)")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--emit-classes", metavar="DIR", help="write one file per symmetry class")
    s.add_argument("--no-classes", action="store_true", help="omit class patterns from the JSON")
    s.add_argument("--out", help="JSON path")
    s.set_defaults(func=cmd_oracle)

    for name, func, text in (("verify", cmd_verify, "exit 0 iff the pattern is valid"),
                             ("stats", cmd_stats, "points, cover levels and hits of a pattern")):
        s = sub.add_parser(name, help=text)
        s.add_argument("pattern")
        s.set_defaults(func=func)

    s = sub.add_parser("canon", help="canonical representative of the symmetry class")
    s.add_argument("pattern")
    s.add_argument("--quad", type=int, metavar="K", help="instead print the pattern repeated K x K")
    s.add_argument("--out")
    s.set_defaults(func=cmd_canon)

    s = sub.add_parser("render", help="PPM image of a pattern")
    s.add_argument("pattern")
    s.add_argument("--mode", choices=RENDER_MODES, default="cover")
    s.add_argument("--scale", type=int, default=8)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_render)

    s = sub.add_parser("templates", help="print the tiling templates")
    s.add_argument("--form", choices=FORMS, default="full5")
    s.add_argument("--neighborhood", action="store_true", help="centre as don't-care")
    s.set_defaults(func=cmd_templates)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        args.func(args)
    except UsageError as exc:
        print(f"error: usage: {exc}", file=sys.stderr)
        return 2
    except (ValueError, RuntimeError) as exc:
        print(f"error: {type(exc).__name__.lower()}: {_one_line(exc)}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: io: {_one_line(exc)}", file=sys.stderr)
        return 1
    return 0


def _one_line(exc) -> str:
    return " ".join(str(exc).split())


if __name__ == "__main__":
    sys.exit(main())
