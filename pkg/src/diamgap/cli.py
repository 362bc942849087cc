"""Command-line harness.

Subcommands: gen, solve, build, diam, verify-small, verify-general,
scaling, report.  Exit codes: 0 all checks passed, 1 a checked bound
was violated (this should never happen and means a real bug or
counterexample), 2 bad input or arguments, 3 inconclusive because a
search budget ran out.
"""

from __future__ import annotations

import argparse
import sys
import time

import numpy as np

from . import certify, configs, report as report_mod
from .graphs import (
    Disconnected,
    bfs,
    dump_graph,
    exact_diameter,
    load_graph,
    two_approx,
    write_legend,
)
from .ovcore import (
    GenerationFailed,
    OvInstance,
    generate_no_instance,
    generate_yes_instance,
    read_instance,
    solve_kov_bruteforce,
    write_instance,
)
from .smallk import (
    WrongK,
    build_index,
    build_k4_graph,
    build_k5_graph,
    compact_endpoint_distance,
    endpoint_pair,
    vertex_bounds,
)

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_INPUT = 2
EXIT_INCONCLUSIVE = 3

DEFAULT_FULL_CAP = 2_000_000


def _build_gadget(inst: OvInstance):
    if inst.k == 4:
        return build_k4_graph(inst)
    if inst.k == 5:
        return build_k5_graph(inst)
    raise WrongK(f"explicit gadget construction covers k=4 and k=5, not k={inst.k}")


def _classify(inst: OvInstance) -> tuple[str, object]:
    """(case, k-witness) where case is "no", "yes", or "other"."""
    k = inst.k
    smaller = solve_kov_bruteforce(inst, k - 1)
    if smaller is not None:
        return "other", smaller
    full = solve_kov_bruteforce(inst, k)
    if full is None:
        return "no", None
    return "yes", full


def cmd_gen(args) -> int:
    try:
        if args.kind == "no":
            inst = generate_no_instance(args.k, args.d, args.n, args.seed)
        else:
            inst, witness = generate_yes_instance(args.k, args.d, args.n, args.seed)
            print(f"planted witness: {','.join(map(str, witness.indices))}")
        write_instance(inst, args.out)
    except GenerationFailed as exc:
        print(f"generation failed: {exc}", file=sys.stderr)
        return EXIT_INPUT
    print(f"wrote {args.kind}-instance k={args.k} d={args.d} n={args.n} -> {args.out}")
    return EXIT_OK


def cmd_solve(args) -> int:
    inst = read_instance(args.infile)
    js = [args.j] if args.j is not None else list(range(1, inst.k + 1))
    for j in js:
        witness = solve_kov_bruteforce(inst, j)
        if witness is None:
            print(f"j={j}: none")
        else:
            print(f"j={j}: {','.join(map(str, witness.indices))}")
    return EXIT_OK


def cmd_build(args) -> int:
    inst = read_instance(args.infile)
    graph, index = _build_gadget(inst)
    dump_graph(graph, args.out)
    if args.legend:
        write_legend(args.legend, index.labels())
    print(f"V={graph.num_vertices} E={graph.num_edges} -> {args.out}")
    return EXIT_OK


def cmd_diam(args) -> int:
    graph = load_graph(args.infile)
    if args.algo == "exact":
        result = exact_diameter(graph, mode="full")
        print(f"diameter={result.diameter} witness={result.witness[0]},{result.witness[1]}")
    else:
        est = two_approx(graph)
        print(f"estimate={est}")
    return EXIT_OK


def cmd_verify_small(args) -> int:
    inst = read_instance(args.infile)
    k = inst.k
    if k not in (4, 5):
        print(f"verify-small covers k=4 and k=5, not k={k}", file=sys.stderr)
        return EXIT_INPUT
    case, witness = _classify(inst)
    if case == "other":
        print(
            "instance has an orthogonal tuple smaller than k; "
            "neither promised case applies",
            file=sys.stderr,
        )
        return EXIT_INPUT

    cap = args.cap if args.cap is not None else DEFAULT_FULL_CAP
    measurements: dict = {"k": k, "case": case}
    t0 = time.perf_counter()

    try:
        return _verify_small_measured(inst, case, witness, cap, args, measurements, t0)
    except Disconnected:
        # both promised cases put every vertex within finite distance,
        # so a disconnected gadget is itself a violation
        print("VIOLATION: gadget graph is disconnected", file=sys.stderr)
        return EXIT_VIOLATION


def _verify_small_measured(inst, case, witness, cap, args, measurements, t0) -> int:
    k = inst.k
    if case == "no":
        graph, index = _build_gadget(inst)
        measurements["vertices"] = graph.num_vertices
        measurements["edges"] = graph.num_edges
        if graph.num_vertices <= cap:
            result = exact_diameter(graph, mode="full")
            measurements["mode"] = "full"
            measurements["diameter"] = result.diameter
            print(f"case=no mode=full V={graph.num_vertices} diameter={result.diameter} "
                  f"(required <= {k})")
        else:
            sources = np.arange(index.n_l1, dtype=np.int64)
            result = exact_diameter(graph, mode="targeted", sources=sources)
            measurements["mode"] = "targeted"
            measurements["max_ecc"] = result.diameter
            print(f"case=no mode=targeted V={graph.num_vertices} "
                  f"max-source-ecc={result.diameter} (required <= {k})")
    else:
        low_bound, high_bound = vertex_bounds(inst)
        v_bound = low_bound + high_bound
        if v_bound <= cap:
            graph, index = _build_gadget(inst)
            u, v = endpoint_pair(inst, witness)
            dist = int(bfs(graph, u)[v])
            result = exact_diameter(graph, mode="full")
            measurements.update(
                mode="full",
                vertices=graph.num_vertices,
                edges=graph.num_edges,
                diameter=result.diameter,
                endpoint_distance=dist,
                levels_checked=result.diameter,
            )
            print(f"case=yes mode=full V={graph.num_vertices} endpoint-distance={dist} "
                  f"(required >= {2 * k - 1})")
        else:
            levels = 2 * k - 2
            dist = compact_endpoint_distance(inst, witness, max_level=levels)
            measurements.update(
                mode="engine", endpoint_distance=dist, levels_checked=levels
            )
            shown = dist if dist is not None else f">{levels}"
            print(f"case=yes mode=engine endpoint-distance={shown} "
                  f"(required >= {2 * k - 1})")

    measurements["elapsed_s"] = round(time.perf_counter() - t0, 3)
    rep = report_mod.make_report(
        "verify-small",
        {"k": k, "d": inst.d, "n": inst.n, "path": args.infile},
        measurements,
    )
    if args.report:
        with open(args.report, "w", encoding="ascii") as fh:
            fh.write(report_mod.to_json(rep))
    print(f"verify-small: {'PASS' if rep.passed else 'FAIL'}")
    return EXIT_OK if rep.passed else EXIT_VIOLATION


def cmd_verify_general(args) -> int:
    inst = read_instance(args.infile)
    k = inst.k
    case, witness = _classify(inst)
    measurements: dict = {"k": k, "mode": args.mode}
    t0 = time.perf_counter()

    if args.mode == "no-paths":
        if case != "no":
            print("no-paths mode needs an instance with no orthogonal tuple",
                  file=sys.stderr)
            return EXIT_INPUT
        pairs = args.pairs
        seed = args.seed
        paths_ok = 0
        max_ops = 0
        for i in range(pairs):
            try:
                left = configs.random_valid_configuration(inst, k, seed + 2 * i)
                right = configs.random_valid_configuration(inst, k, seed + 2 * i + 1)
            except GenerationFailed as exc:
                print(f"configuration sampling failed: {exc}", file=sys.stderr)
                return EXIT_INPUT
            try:
                ops = configs.connecting_path(left, right, inst)
            except configs.PathConstructionFailed as exc:
                print(f"VIOLATION: pair {i}: {exc}", file=sys.stderr)
                return EXIT_VIOLATION
            paths_ok += 1
            max_ops = max(max_ops, len(ops))
        measurements.update(pairs=pairs, paths_ok=paths_ok, max_ops=max_ops)
        print(f"no-paths: {paths_ok}/{pairs} pairs connected, max {max_ops} ops "
              f"(required <= {k})")
    else:
        if case != "yes":
            print("yes-bound mode needs a k-witness and no smaller one",
                  file=sys.stderr)
            return EXIT_INPUT
        budget = args.budget if args.budget is not None else 2 * k - 2
        cap = args.cap if args.cap is not None else certify.DEFAULT_STATE_CAP
        try:
            cert = certify.endpoint_separation(
                inst, witness, depth_budget=budget, state_cap=cap
            )
        except certify.BudgetExceeded as exc:
            print(f"inconclusive: {exc}", file=sys.stderr)
            return EXIT_INCONCLUSIVE
        measurements.update(
            budget=budget,
            reached_at_budget=cert.reached,
            states_seen=cert.states_seen,
            frontier_sizes=cert.frontier_sizes,
        )
        first_depth = cert.first_depth
        if not cert.reached:
            sweep_budget = args.sweep if args.sweep is not None else 2 * k + 2
            try:
                sweep = certify.endpoint_separation(
                    inst, witness, depth_budget=sweep_budget, state_cap=cap
                )
                first_depth = sweep.first_depth
                measurements["sweep_budget"] = sweep_budget
            except certify.BudgetExceeded:
                measurements["sweep_budget"] = sweep_budget
                measurements["sweep_cap_hit"] = True
        measurements["first_depth"] = first_depth
        shown = first_depth if first_depth is not None else "not found"
        print(f"yes-bound: reached-at-{budget}={cert.reached} first-depth={shown} "
              f"(required: unreachable within {2 * k - 2})")

    measurements["elapsed_s"] = round(time.perf_counter() - t0, 3)
    rep = report_mod.make_report(
        "verify-general",
        {"k": k, "d": inst.d, "n": inst.n, "path": args.infile},
        measurements,
    )
    if args.report:
        with open(args.report, "w", encoding="ascii") as fh:
            fh.write(report_mod.to_json(rep))
    print(f"verify-general: {'PASS' if rep.passed else 'FAIL'}")
    return EXIT_OK if rep.passed else EXIT_VIOLATION


def cmd_scaling(args) -> int:
    ns = [int(x) for x in args.n.split(",")]
    seeds = [int(x) for x in args.seeds.split(",")]
    rows = []
    for n in ns:
        for seed in seeds:
            try:
                inst = generate_no_instance(args.k, args.d, n, seed)
            except GenerationFailed as exc:
                print(f"generation failed at n={n}: {exc}", file=sys.stderr)
                return EXIT_INPUT
            t0 = time.perf_counter()
            graph, _ = _build_gadget(inst)
            ms = (time.perf_counter() - t0) * 1000.0
            l1_bound, l2_bound = vertex_bounds(inst)
            if graph.num_vertices > l1_bound + l2_bound:
                print(
                    f"VIOLATION: n={n} seed={seed}: V={graph.num_vertices} exceeds "
                    f"closed-form bound {l1_bound + l2_bound}",
                    file=sys.stderr,
                )
                return EXIT_VIOLATION
            rows.append((n, graph.num_vertices, graph.num_edges, ms))
    with open(args.out, "w", encoding="ascii") as fh:
        fh.write("n,V,E,build_ms\n")
        for n, v, e, ms in rows:
            fh.write(f"{n},{v},{e},{ms:.1f}\n")
    print(f"wrote {len(rows)} rows -> {args.out}")
    return EXIT_OK


def cmd_report(args) -> int:
    try:
        with open(args.infile, "r", encoding="ascii") as fh:
            rep = report_mod.from_json(fh.read())
    except (OSError, report_mod.ReportError) as exc:
        print(f"cannot load report: {exc}", file=sys.stderr)
        return EXIT_INPUT
    print(f"kind={rep.kind} instance={rep.instance} passed={rep.passed}")
    for name, value in sorted(rep.verdicts.items()):
        print(f"  {name}: {'PASS' if value else 'FAIL'}")
    if args.replay:
        if not report_mod.replay(rep):
            print("replay: stored verdicts do NOT reproduce from measurements",
                  file=sys.stderr)
            return EXIT_VIOLATION
        print("replay: verdicts reproduce")
        return EXIT_OK if rep.passed else EXIT_VIOLATION
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="diamgap",
        description="Build and check diameter-gap graphs from orthogonal-vector "
                    "instances.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate an instance file")
    p.add_argument("--kind", choices=["no", "yes"], required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("solve", help="brute-force orthogonal tuples")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--j", type=int, default=None)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("build", help="build the k=4/k=5 gadget graph")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--legend", default=None)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("diam", help="diameter of a dumped graph")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--algo", choices=["exact", "two-approx"], default="exact")
    p.set_defaults(func=cmd_diam)

    p = sub.add_parser("verify-small", help="check the k=4/k=5 diameter promise")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--cap", type=int, default=None,
                   help="max vertex count for full all-pairs mode")
    p.add_argument("--report", default=None)
    p.set_defaults(func=cmd_verify_small)

    p = sub.add_parser("verify-general",
                       help="check the general-k path/separation promises")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--mode", choices=["no-paths", "yes-bound"], required=True)
    p.add_argument("--pairs", type=int, default=25)
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--sweep", type=int, default=None)
    p.add_argument("--cap", type=int, default=None,
                   help="state cap for the symbolic search")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--report", default=None)
    p.set_defaults(func=cmd_verify_general)

    p = sub.add_parser("scaling", help="vertex/edge growth over n")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n", required=True, help="comma-separated n values")
    p.add_argument("--seeds", default="0", help="comma-separated seeds")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_scaling)

    p = sub.add_parser("report", help="print or replay a saved report")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--replay", action="store_true")
    p.set_defaults(func=cmd_report)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (OSError, ValueError, WrongK, Disconnected) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
