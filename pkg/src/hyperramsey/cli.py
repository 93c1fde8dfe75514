"""Command-line front end: generators, pipeline runs, verification,
bound calculation, and report rendering.

One binary, subcommand style.  Every randomized run flows from a single
``--seed`` recorded in its output, and identical invocations produce
byte-identical reports: reports never carry wall-clock data (timings go to
stderr diagnostics when wanted).

Exit codes: 0 success verdict, 1 none/failure verdict, 2 bad arguments,
3 I/O problems, 4 domain errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import drc as drc_mod
from . import hypercore, oracle, reduction, steppingup
from .embed import embed_pattern
from .errors import HyperRamseyError, RetriesExhaustedError

ENV_PREFIX = "HYPERRAMSEY_"

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_DOMAIN = 4


def _env_default(name: str, fallback):
    raw = os.environ.get(ENV_PREFIX + name)
    if raw is None:
        return fallback
    return type(fallback)(raw) if fallback is not None else raw


def _fraction(text: str) -> Fraction:
    return Fraction(text)


def _emit(payload: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(payload)
        if not payload.endswith("\n"):
            sys.stdout.write("\n")
    else:
        Path(out).write_text(payload)


def _emit_json(obj, out: str | None) -> None:
    _emit(json.dumps(obj, sort_keys=True, indent=2) + "\n", out)


def _read_json(path: str) -> dict:
    return json.loads(Path(path).read_text())


def _load_hypergraph(path: str) -> hypercore.Hypergraph:
    return hypercore.Hypergraph.from_json(_read_json(path))


def _load_partite(path: str) -> hypercore.PartiteHypergraph:
    return hypercore.PartiteHypergraph.from_json(_read_json(path))


def _load_pattern_arg(text: str) -> hypercore.Hypergraph:
    """Pattern shorthand: ``cycle-spoke-N``, ``complete-K-L``, or a JSON path."""
    if text.startswith("cycle-spoke-"):
        return hypercore.cycle_spoke(int(text.rsplit("-", 1)[1]))
    if text.startswith("complete-"):
        _, k, l = text.split("-")
        return hypercore.complete_hypergraph(int(l), int(k))
    return _load_hypergraph(text)


def _load_base_arg(args) -> steppingup.BaseColouring:
    if args.base == "pentagon":
        return steppingup.pentagon_base()
    if args.base == "random":
        return steppingup.random_base(args.m, args.seed)
    return steppingup.BaseColouring.from_csv(Path(args.base).read_text())


def _load_colouring_arg(args) -> reduction.QColouring:
    if args.colouring == "random":
        return reduction.QColouring.random(args.k, args.n, args.q, args.seed)
    if args.colouring == "constant":
        return reduction.QColouring.constant(args.k, args.n, args.q)
    if args.colouring == "pentagon":
        return reduction.pentagon_colouring()
    if args.colouring == "stepping-up":
        base = _load_base_arg(args)
        return reduction.QColouring(
            3, 1 << base.m, 4, steppingup.StepUpColouring(base).colour_of
        )
    return reduction.QColouring.from_json(_read_json(args.colouring))


# ---------------------------------------------------------------------------
# gen


def _cmd_gen(args) -> int:
    kind = args.what
    if kind == "cycle-spoke":
        _emit_json(hypercore.cycle_spoke(args.n).to_json(), args.out)
    elif kind == "complete":
        _emit_json(hypercore.complete_hypergraph(args.l, args.k).to_json(), args.out)
    elif kind == "random":
        _emit_json(
            hypercore.random_hypergraph(args.k, args.n, args.m, args.seed).to_json(),
            args.out,
        )
    elif kind == "partite":
        if args.complete:
            host = hypercore.complete_partite(args.l, args.n)
        else:
            host = hypercore.random_partite(args.l, args.n, args.density, args.seed)
        _emit_json(host.to_json(), args.out)
    elif kind == "base":
        base = steppingup.base_colouring(args.kind, m=args.m, seed=args.seed)
        _emit(base.to_csv(), args.out)
    elif kind == "colouring":
        _emit_json(
            reduction.QColouring.random(args.k, args.n, args.q, args.seed).to_json(),
            args.out,
        )
    else:  # pragma: no cover - argparse restricts choices
        raise ValueError(kind)
    return EXIT_OK


# ---------------------------------------------------------------------------
# run


def _cmd_run_drc(args) -> int:
    host = _load_partite(args.host)
    try:
        chain = drc_mod.drc_chain(
            host,
            args.degree_bound,
            args.s,
            args.beta,
            args.seed,
            census_budget=args.budget_nodes,
        )
    except RetriesExhaustedError as exc:
        _emit_json(
            {
                "ok": False,
                "error": str(exc),
                "best_x": exc.best.x if exc.best is not None else 0,
                "seed": args.seed,
            },
            args.out,
        )
        return EXIT_NEGATIVE
    _emit_json({"ok": True, "steps": chain.step_reports()}, args.out)
    return EXIT_OK


def _cmd_run_embed(args) -> int:
    host = _load_partite(args.host)
    pattern = _load_partite(args.pattern)
    try:
        chain = drc_mod.drc_chain(
            host,
            args.degree_bound,
            args.s,
            args.beta,
            args.seed,
            min_last_survivors=max(1, len(pattern.parts[-1])),
            census_budget=args.budget_nodes,
        )
    except RetriesExhaustedError as exc:
        _emit_json({"ok": False, "error": f"chain: {exc}", "seed": args.seed}, args.out)
        return EXIT_NEGATIVE
    result = embed_pattern(chain, pattern, args.policy, args.seed, args.budget_nodes)
    _emit_json(result.to_json(), args.out)
    return EXIT_OK if result.ok else EXIT_NEGATIVE


def _cmd_run_reduce(args) -> int:
    colouring = _load_colouring_arg(args)
    pattern = _load_pattern_arg(args.pattern)
    l_mode: int | str = args.l if args.l in ("degree", "chromatic") else int(args.l)
    cfg = reduction.PipelineConfig(
        seed=args.seed,
        l=l_mode,
        s=args.s,
        attempts=args.attempts,
        node_budget=args.budget_nodes,
    )
    report = reduction.ramsey_pipeline(colouring, pattern, cfg)
    _emit_json(report.to_json(), args.out)
    return EXIT_OK if report.ok else EXIT_NEGATIVE


def _cmd_run_stepup_verify(args) -> int:
    base = _load_base_arg(args)
    pattern = _load_pattern_arg(args.pattern)
    su = steppingup.StepUpColouring(base)
    budget = oracle.SearchBudget(
        max_nodes=args.budget_nodes,
        max_millis=args.budget_ms,
        mode=args.mode,
        trials=args.trials,
    )
    verdict = steppingup.verify_no_mono_copy(su, pattern, budget, args.seed)
    payload = verdict.to_json()
    payload["base"] = {"provenance": base.provenance, "m": base.m,
                       "mono_clique_report": base.mono_clique_report}
    _emit_json(payload, args.out)
    return EXIT_OK if verdict.result == "counterexample" else EXIT_NEGATIVE


def _cmd_run_bound(args) -> int:
    params = reduction.BoundParams(
        k=args.k,
        degree=args.degree,
        q=args.q,
        rkl=args.rkl,
        erdos_rado_c=args.erdos_rado_c,
    )
    result = reduction.bound_calculator(
        params, args.mode, l=args.l, m=args.m, lower_c=args.lower_c,
        digit_cap=args.digit_cap,
    )
    _emit_json(result.to_json(), args.out)
    return EXIT_OK


def _cmd_run_chroma(args) -> int:
    h = _load_pattern_arg(args.input)
    count, colouring = hypercore.strong_chromatic_number(h, args.mode)
    _emit_json(
        {"count": count, "colouring": {str(v): c for v, c in sorted(colouring.items())}},
        args.out,
    )
    return EXIT_OK


def _cmd_run_oracle(args) -> int:
    pattern = _load_pattern_arg(args.pattern)
    if args.op == "ramsey-check":
        budget = oracle.SearchBudget(
            max_nodes=args.budget_nodes,
            max_millis=args.budget_ms,
            mode=args.mode,
            trials=args.trials,
        )
        verdict = oracle.exhaustive_ramsey_check(pattern, args.n, args.q, budget, args.seed)
        _emit_json(
            {
                "arrows": verdict.arrows,
                "mode": verdict.mode,
                "colourings_checked": verdict.colourings_checked,
                "witness": (
                    [[list(e), c] for e, c in sorted(verdict.witness.items())]
                    if verdict.witness
                    else None
                ),
                "seed": args.seed,
            },
            args.out,
        )
        return EXIT_OK if verdict.arrows is not None else EXIT_NEGATIVE
    if args.op == "find-copy":
        host = _load_hypergraph(args.host)
        edges = host.edge_set()
        res = oracle.naive_find_copy(
            list(range(host.n_vertices)),
            lambda e: e in edges,
            pattern,
            oracle.SearchBudget(max_nodes=args.budget_nodes, max_millis=args.budget_ms),
        )
        _emit_json(
            {"status": res.status, "mapping": res.mapping, "nodes": res.nodes},
            args.out,
        )
        return EXIT_OK if res.status == "found" else EXIT_NEGATIVE
    raise ValueError(args.op)  # pragma: no cover


def _cmd_run_selftest(args) -> int:
    failures = _selftest(args.seed)
    _emit_json({"ok": not failures, "failures": failures, "seed": args.seed}, args.out)
    return EXIT_OK if not failures else EXIT_NEGATIVE


def _selftest(seed: int) -> list[str]:
    """Small dual-implementation agreement suite; returns failure notes."""
    failures: list[str] = []
    # Pruned clique counts agree with the naive subset scan.
    for trial in range(5):
        col = reduction.QColouring.random(2, 7, 2, seed + trial)
        fast = reduction.count_mono_cliques(col, 3)
        slow = oracle.naive_count_mono_cliques(7, 2, 2, col.colour_of, 3)
        if fast != slow:
            failures.append(f"clique counts disagree on seed {seed + trial}")
    # Copy search agreement between the stepping-up searcher and the oracle.
    base = steppingup.pentagon_base()
    su = steppingup.StepUpColouring(base)
    pattern = hypercore.complete_hypergraph(3, 3)
    verdict = steppingup.verify_no_mono_copy(su, pattern, oracle.SearchBudget(max_nodes=10**6), seed)
    if verdict.result != "counterexample":
        failures.append("single-edge pattern should always have a monochromatic copy")
    # The lifted colouring's exhaustive small-arity sanity point.
    k3 = hypercore.complete_hypergraph(3, 2)
    check = oracle.exhaustive_ramsey_check(k3, 5, 2, oracle.SearchBudget(max_nodes=10**7))
    if check.arrows is not False:
        failures.append("triangle arrowing should fail on 5 vertices")
    return failures


# ---------------------------------------------------------------------------
# report


def _rows_to_text(rows: list[list[str]], fmt: str) -> str:
    if fmt == "csv":
        return "\n".join(",".join(row) for row in rows) + "\n"
    widths = [max(len(row[i]) for row in rows) for i in range(len(rows[0]))]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in rows]
    return "\n".join(lines) + "\n"


def _cmd_report(args) -> int:
    if args.what == "census":
        doc = _read_json(args.inputs[0])
        rows = [["level", "weight", "count", "bound", "audited"]]
        for step in doc.get("steps", []):
            for w in sorted(step["Yw"], key=int):
                rows.append(
                    [
                        str(step["level"]),
                        w,
                        str(step["Yw"][w]),
                        step["Yw_bound"][w],
                        str(step["audited"]),
                    ]
                )
        _emit(_rows_to_text(rows, args.format), args.out)
        return EXIT_OK
    if args.what == "bound":
        doc = _read_json(args.inputs[0])
        rows = [["step", "formula", "value"]]
        rows += [[r[0], r[1], r[2]] for r in doc["trace"]]
        _emit(_rows_to_text(rows, args.format), args.out)
        return EXIT_OK
    if args.what == "embed-summary":
        total = 0
        okay = 0
        nodes = 0
        for path in args.inputs:
            doc = _read_json(path)
            total += 1
            okay += bool(doc.get("verified"))
            nodes += int(doc.get("nodes_expanded", 0))
        rows = [
            ["runs", "successes", "rate", "nodes_expanded"],
            [str(total), str(okay), f"{okay / total:.3f}" if total else "n/a", str(nodes)],
        ]
        _emit(_rows_to_text(rows, args.format), args.out)
        return EXIT_OK
    raise ValueError(args.what)  # pragma: no cover


# ---------------------------------------------------------------------------
# parser


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=_env_default("SEED", 0))
    p.add_argument("--budget-nodes", type=int, default=_env_default("BUDGET_NODES", 10**6))
    p.add_argument("--budget-ms", type=int, default=None)
    p.add_argument("--threads", type=int, default=_env_default("THREADS", 1),
                   help="worker cap (current operations run serially)")
    p.add_argument("--format", choices=("json", "csv", "table"), default="table")
    p.add_argument("--out", default=None, help="output path; stdout when omitted")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hyperramsey", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="write hypergraphs, hosts, and base colourings")
    gsub = gen.add_subparsers(dest="what", required=True)
    g = gsub.add_parser("cycle-spoke")
    g.add_argument("--n", type=int, required=True)
    g = gsub.add_parser("complete")
    g.add_argument("--k", type=int, required=True)
    g.add_argument("--l", type=int, required=True)
    g = gsub.add_parser("random")
    g.add_argument("--k", type=int, required=True)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--m", type=int, required=True)
    g = gsub.add_parser("partite")
    g.add_argument("--l", type=int, required=True)
    g.add_argument("--n", type=int, required=True, help="vertices per part")
    g.add_argument("--density", type=float, default=0.5)
    g.add_argument("--complete", action="store_true")
    g = gsub.add_parser("base")
    g.add_argument("--kind", choices=("pentagon", "random"), required=True)
    g.add_argument("--m", type=int, default=5)
    g = gsub.add_parser("colouring")
    g.add_argument("--k", type=int, required=True)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--q", type=int, default=2)
    for sp in gsub.choices.values():
        _add_common(sp)

    run = sub.add_parser("run", help="execute a pipeline and write its report")
    rsub = run.add_subparsers(dest="what", required=True)
    r = rsub.add_parser("drc")
    r.add_argument("--host", required=True)
    r.add_argument("--s", type=int, default=2)
    r.add_argument("--beta", type=_fraction, default=Fraction(1, 4))
    r.add_argument("--degree-bound", type=int, default=2)
    r = rsub.add_parser("embed")
    r.add_argument("--host", required=True)
    r.add_argument("--pattern", required=True)
    r.add_argument("--s", type=int, default=1)
    r.add_argument("--beta", type=_fraction, default=Fraction(1, 4))
    r.add_argument("--degree-bound", type=int, default=2)
    r.add_argument("--policy", choices=("greedy", "random", "backtrack"), default="backtrack")
    r = rsub.add_parser("reduce")
    r.add_argument("--colouring", required=True,
                   help="path, or one of random|constant|pentagon|stepping-up")
    r.add_argument("--pattern", required=True)
    r.add_argument("--k", type=int, default=2)
    r.add_argument("--n", type=int, default=18)
    r.add_argument("--q", type=int, default=2)
    r.add_argument("--l", default="degree")
    r.add_argument("--s", type=int, default=None)
    r.add_argument("--attempts", type=int, default=10)
    r.add_argument("--base", default="pentagon")
    r.add_argument("--m", type=int, default=5)
    r = rsub.add_parser("stepup-verify")
    r.add_argument("--base", required=True, help="pentagon, random, or a CSV path")
    r.add_argument("--m", type=int, default=5)
    r.add_argument("--pattern", required=True)
    r.add_argument("--mode", choices=("exhaustive", "sampled"), default="exhaustive")
    r.add_argument("--trials", type=int, default=10**4)
    r = rsub.add_parser("bound")
    r.add_argument("--mode", choices=("degree", "chromatic", "edges", "edges-lower"),
                   required=True)
    r.add_argument("--k", type=int, required=True)
    r.add_argument("--degree", type=int, required=True)
    r.add_argument("--q", type=int, default=2)
    r.add_argument("--rkl", type=int, default=None)
    r.add_argument("--erdos-rado-c", type=_fraction, default=None)
    r.add_argument("--l", type=int, default=None)
    r.add_argument("--m", type=int, default=None)
    r.add_argument("--lower-c", type=_fraction, default=None)
    r.add_argument("--digit-cap", type=int, default=10**5)
    r = rsub.add_parser("chroma")
    r.add_argument("--input", required=True)
    r.add_argument("--mode", choices=("exact", "greedy"), default="exact")
    r = rsub.add_parser("oracle")
    r.add_argument("--op", choices=("ramsey-check", "find-copy"), required=True)
    r.add_argument("--pattern", required=True)
    r.add_argument("--host", default=None)
    r.add_argument("--n", type=int, default=6)
    r.add_argument("--q", type=int, default=2)
    r.add_argument("--mode", choices=("exhaustive", "sampled"), default="exhaustive")
    r.add_argument("--trials", type=int, default=10**3)
    rsub.add_parser("selftest")
    for sp in rsub.choices.values():
        _add_common(sp)

    rep = sub.add_parser("report", help="render machine reports for humans")
    rep.add_argument("what", choices=("census", "bound", "embed-summary"))
    rep.add_argument("inputs", nargs="+")
    _add_common(rep)
    return parser


_RUNNERS = {
    "drc": _cmd_run_drc,
    "embed": _cmd_run_embed,
    "reduce": _cmd_run_reduce,
    "stepup-verify": _cmd_run_stepup_verify,
    "bound": _cmd_run_bound,
    "chroma": _cmd_run_chroma,
    "oracle": _cmd_run_oracle,
    "selftest": _cmd_run_selftest,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "gen":
            return _cmd_gen(args)
        if args.command == "run":
            return _RUNNERS[args.what](args)
        if args.command == "report":
            return _cmd_report(args)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (HyperRamseyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    raise AssertionError("unreachable")  # pragma: no cover


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
