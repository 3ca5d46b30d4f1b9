"""Command line interface: ``ggdp <command> ...``.

Reports are ``key: value`` lines on stdout (or one JSON object with
``--json``); diagnostics go to stderr.  Exit status is 0 on success, 1 when
a computation cannot finish (e.g. budget exhausted) and 2 for bad usage or
malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys
from collections import Counter

from . import closedform, graph, lp, model, polytope, separation, sequence


class UsageError(Exception):
    pass


def _vertex_list(text: str, n: int, base: int) -> list[int]:
    """``empty``, ``all`` or a comma separated list of labels starting at ``base``."""
    if text == "empty":
        return []
    if text == "all":
        return list(range(base, n + base))
    try:
        vs = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"bad vertex list {text!r}; use empty, all or e.g. 1,3") from None
    for v in vs:
        if not base <= v < n + base:
            raise UsageError(f"vertex {v} out of range {base}..{n + base - 1}")
    return vs


def _read(path: str) -> graph.Instance:
    try:
        return graph.read_instance(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _emit(args, report: dict) -> None:
    if args.json:
        print(json.dumps(report, sort_keys=False))
    else:
        for key, val in report.items():
            if isinstance(val, (list, tuple)):
                val = " ".join(map(str, val))
            print(f"{key}: {val}")


def _write_out(path: str | None, text: str) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _default_lb(inst: graph.Instance, lb: int | None) -> int:
    return len(sequence.greedy_sequence(inst)) if lb is None else lb


# -- commands -------------------------------------------------------------------

def cmd_gen(args) -> None:
    if args.family == "path":
        inst = graph.gen_path(args.n, _vertex_list(args.C, args.n, 1))
        comment = f"path n={args.n} C={args.C}"
    elif args.family == "web":
        if args.k is None:
            raise UsageError("gen web needs -k")
        inst = graph.gen_web(args.n, args.k, _vertex_list(args.C, args.n, 0))
        comment = f"web n={args.n} k={args.k} C={args.C} (web labels 0..n-1, shifted by one)"
    else:
        inst = graph.gen_random(args.n, args.p, args.c_mode, args.seed)
        comment = f"random n={args.n} p={args.p} C={args.c_mode} seed={args.seed}"
    _write_out(args.output, graph.format_instance(inst, comment))


def cmd_solve(args) -> None:
    inst = _read(args.file)
    greedy = sequence.greedy_sequence(inst)
    report = {"m": graph.upper_bound_m(inst), "lb": len(greedy)}
    if args.greedy:
        report.update(value=len(greedy), witness=list(greedy.vertices), method="greedy")
    else:
        res = sequence.grundy_exact(inst, args.budget)
        report.update(value=res.value, witness=list(res.witness.vertices), method="exact",
                      states=res.states)
    _emit(args, {k: report[k] for k in ("value", "witness", "m", "lb", "method", "states")
                 if k in report})


def cmd_closed_form(args) -> None:
    if args.family == "path":
        value = closedform.path_grundy(args.n, _vertex_list(args.C, args.n, 1))
        _emit(args, {"value": value})
    else:
        if args.k is None:
            raise UsageError("closed-form web needs -k")
        closed = _vertex_list(args.C, args.n, 0)
        _emit(args, {"value": closedform.web_grundy(args.n, args.k, closed),
                     "m": closedform.web_m(args.n, args.k, closed)})


def cmd_model(args) -> None:
    inst = _read(args.file)
    mdl = model.build_formulation(inst, args.form, _default_lb(inst, args.lb))
    if args.export:
        _write_out(args.export, model.export_lp(mdl))
        if args.export == "-":
            return
    _emit(args, {"form": mdl.form, "m": mdl.m, "lb": mdl.lb, "variables": mdl.n_vars,
                 "rows": len(mdl.rows)})


def cmd_count(args) -> None:
    inst = _read(args.file)
    mdl = model.build_formulation(inst, args.form, _default_lb(inst, args.lb))
    count = model.enumerate_solutions(mdl, "count", args.max_vars)
    _emit(args, {"count": count, "form": mdl.form, "m": mdl.m, "lb": mdl.lb})


def cmd_poly(args) -> None:
    inst = _read(args.file)
    if args.action == "dim":
        lb = 1 if args.lb is None else args.lb
        cloud = polytope.build_cloud(inst, args.form, lb)
        report = {"dimension": polytope.affine_dimension(cloud), "ambient": cloud.dim_ambient,
                  "points": len(cloud), "form": cloud.form}
        if cloud.form == "F3" and lb == 1:
            report["formula"] = polytope.p3_dimension_formula(inst)
        _emit(args, report)
    elif args.action == "check":
        if not args.ineq:
            raise UsageError("poly check needs --ineq SPEC")
        kind, params = polytope.parse_spec(args.ineq)
        ineq = polytope.build_inequality(kind, params, inst)
        cloud = polytope.build_cloud(inst)
        chk = polytope.check_facet(ineq, cloud)
        report = {"inequality": str(ineq), "valid": chk.valid, "facet": chk.is_facet,
                  "tight_rank": chk.tight_rank, "dimension": chk.cloud_dim, "sanity": chk.sanity}
        try:
            report["predicted"] = polytope.predict_facet(kind, params, inst)
        except ValueError:
            pass
        _emit(args, report)
    else:
        rows = polytope.audit(inst)
        bad = [r for r in rows if r.predicted != r.actual or not r.valid]
        tally = Counter((r.kind, r.actual) for r in rows)
        if args.json:
            _emit(args, {"checked": len(rows), "disagreements": [
                {"spec": polytope.format_spec(r.kind, r.params), "predicted": r.predicted,
                 "facet": r.actual, "valid": r.valid} for r in bad],
                "facets": {k: tally[(k, True)] for k, _ in tally},
                "non_facets": {k: tally[(k, False)] for k, _ in tally}})
            return
        lines = [f"{'kind':<10} {'facets':>7} {'others':>7}"]
        for kind in sorted({k for k, _ in tally}):
            lines.append(f"{kind:<10} {tally[(kind, True)]:>7} {tally[(kind, False)]:>7}")
        lines.append(f"checked: {len(rows)}")
        lines.append(f"disagreements: {len(bad)}")
        for r in bad:
            lines.append(f"  {polytope.format_spec(r.kind, r.params)}  predicted={r.predicted} "
                         f"facet={r.actual} valid={r.valid}")
        print("\n".join(lines))


def cmd_separate(args) -> None:
    inst = _read(args.file)
    m = graph.upper_bound_m(inst) if args.m is None else args.m
    try:
        with open(args.point, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {args.point}: {exc.strerror}") from None
    point = separation.parse_point(text, inst.n, m)
    both = not (args.type1 or args.type2)
    state = separation.precompute(inst)
    cuts = separation.separate(inst, state, point, args.type1 or both, args.type2 or both)
    if args.json:
        _emit(args, {"cuts": [c.spec() for c in cuts]})
    else:
        sys.stdout.write("".join(c.spec() + "\n" for c in cuts))


def cmd_root_bound(args) -> None:
    inst = _read(args.file)
    cuts = tuple(c for c in args.cuts.split(",") if c)
    res = lp.root_cut_loop(inst, args.form, args.rounds, cuts, args.lb)
    if res.status != "optimal" and not res.history:
        raise RuntimeError(f"LP solve failed: {res.status}")
    if args.json:
        _emit(args, {"history": res.history, "cuts_added": res.cuts_added, "status": res.status})
        return
    lines = [f"{'round':>5} {'bound':>12}"]
    lines += [f"{r:>5} {b:>12.6f}" for r, b in enumerate(res.history)]
    lines += [f"cuts_added: {res.cuts_added}", f"status: {res.status}"]
    print("\n".join(lines))


def cmd_reduce(args) -> None:
    inst = _read(args.file)
    reduced, removed = graph.reduce_twins(inst)
    if args.output:
        _write_out(args.output, graph.format_instance(reduced))
    _emit(args, {"n": reduced.n, "removed": removed,
                 "components": len(graph.components(reduced))})


# -- parser ---------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    # --json may come before or after the command; SUPPRESS keeps the
    # subcommand default from overwriting a flag given earlier
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="print one JSON object")

    p = argparse.ArgumentParser(prog="ggdp", description="General Grundy domination toolkit.")
    p.add_argument("--json", action="store_true", help="print one JSON object")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", parents=[common], help="generate an instance file")
    g.add_argument("family", choices=["path", "web", "random"])
    g.add_argument("-n", type=int, required=True)
    g.add_argument("-k", type=int, help="web parameter")
    g.add_argument("-C", default="all",
                   help="closed set: empty, all or a list (web lists use labels 0..n-1)")
    g.add_argument("-p", type=float, default=0.5, help="edge probability (random)")
    g.add_argument("--c-mode", choices=graph.C_MODES, default="all")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("-o", "--output", help="output file (default stdout)")
    g.set_defaults(func=cmd_gen)

    s = sub.add_parser("solve", parents=[common], help="Grundy domination number")
    s.add_argument("file")
    mode = s.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true")
    mode.add_argument("--greedy", action="store_true")
    s.add_argument("--budget", type=int, help="state budget (default GGDP_BUDGET or 2000000)")
    s.set_defaults(func=cmd_solve)

    c = sub.add_parser("closed-form", parents=[common], help="closed forms for paths and webs")
    c.add_argument("family", choices=["path", "web"])
    c.add_argument("-n", type=int, required=True)
    c.add_argument("-k", type=int)
    c.add_argument("-C", default="all")
    c.set_defaults(func=cmd_closed_form)

    forms = [*model.FORMULATIONS]
    mo = sub.add_parser("model", parents=[common], help="build a formulation")
    mo.add_argument("file")
    mo.add_argument("--form", choices=forms, default="F1")
    mo.add_argument("--lb", type=int, help="lower bound LB (default greedy length)")
    mo.add_argument("--export", help="write CPLEX LP text here ('-' for stdout)")
    mo.set_defaults(func=cmd_model)

    co = sub.add_parser("count", parents=[common], help="count binary feasible points")
    co.add_argument("file")
    co.add_argument("--form", choices=forms, default="F1")
    co.add_argument("--lb", type=int, help="lower bound LB (default greedy length)")
    co.add_argument("--max-vars", type=int, default=model.MAX_ENUM_VARS)
    co.set_defaults(func=cmd_count)

    po = sub.add_parser("poly", parents=[common], help="polyhedral checks on the F1 cloud")
    po.add_argument("action", choices=["dim", "check", "audit"])
    po.add_argument("file")
    po.add_argument("--form", choices=["F1", "F3"], default="F1")
    po.add_argument("--lb", type=int, help="LB for F3 (default 1)")
    po.add_argument("--ineq", help="inequality spec, e.g. 'type1 u=1 w=2 i=3'")
    po.set_defaults(func=cmd_poly)

    se = sub.add_parser("separate", parents=[common], help="separate Type I/II cuts")
    se.add_argument("file")
    se.add_argument("--point", required=True, help="point file with 'x u i val' / 'y v i val' lines")
    se.add_argument("--m", type=int, help="step horizon (default n - delta + 1)")
    se.add_argument("--type1", action="store_true")
    se.add_argument("--type2", action="store_true")
    se.set_defaults(func=cmd_separate)

    rb = sub.add_parser(
        "root-bound", parents=[common], help="root cutting-plane loop",
        description="Solve the LP relaxation and add Type I/II cuts round by round. "
                    "Only the root node is handled; there is no branching.")
    rb.add_argument("file")
    rb.add_argument("--form", choices=forms, default="F3")
    rb.add_argument("--rounds", type=int, default=10)
    rb.add_argument("--cuts", default="type1,type2")
    rb.add_argument("--lb", type=int, help="lower bound LB (default greedy length)")
    rb.set_defaults(func=cmd_root_bound)

    r = sub.add_parser("reduce", parents=[common], help="remove twin vertices")
    r.add_argument("file")
    r.add_argument("-o", "--output")
    r.set_defaults(func=cmd_reduce)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except (UsageError, graph.InstanceError, polytope.HypothesisError) as exc:
        print(f"ggdp: error: {exc}", file=sys.stderr)
        return 2
    except sequence.BudgetExceeded as exc:
        print(f"ggdp: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"ggdp: error: {exc}", file=sys.stderr)
        return 2
    except RuntimeError as exc:
        print(f"ggdp: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
