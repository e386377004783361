"""Command-line surface: generators, verifiers, experiments, and plots.

Exit codes: 0 success, 1 a verification found a violation, 2 usage or
I/O or module precondition errors.  Every report file is JSON with a
"schema" version field; experiment reports can additionally be written
as CSV rows and rendered as PNG figures.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from fractions import Fraction
from random import Random

from . import jsonio
from .exact import format_rational, parse_rational
from .gadget import (
    GadgetSpec,
    check_planar_embedding,
    main_link_spec,
    planarize,
    verify_faithful,
    zero_base,
)
from .graph import (
    check_alternation_free_paths,
    dist_from_at,
    envelope_bruteforce,
    envelope_dp,
)
from .grids import gen_grid, grid_piece_experiment
from .lowerbound import build_instance, verify_instance
from .matching import min_weight_perfect_matching, recover_path, split_transform
from .polytope import cover_check, hull3_vertices, path_vectors
from .svgplot import emit_plot
from .words import (
    binary_expanded_words,
    complete_layered_graph,
    cyclic_shift_graph,
    doubling_words,
    find_alternation,
    is_davenport_schinzel,
)


def _default_jobs() -> int:
    raw = os.environ.get("PARAMENV_JOBS", "").strip()
    if not raw:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        raise ValueError(f"PARAMENV_JOBS must be an integer, got {raw!r}") from None


def _cmd_generate_phi(args) -> int:
    inst = build_instance(args.n, args.B, args.D, args.m)
    jsonio.save_json(args.out, jsonio.instance_to_json(inst))
    print(
        f"wrote {args.out}: {inst.graph.vertex_count} vertices, "
        f"{len(inst.graph.edges)} edges, {len(inst.declared_paths)} declared paths"
    )
    return 0


def _link_spec(args) -> GadgetSpec:
    if args.main_lemma:
        return main_link_spec(args.n, args.B, args.D)
    # Zero base charges admit the minimal gap constant n^2; the slope rate
    # keeps the gap-over-n^2 convention of the main instantiation.
    gap = Fraction(args.n * args.n)
    return GadgetSpec(args.B, args.n, zero_base(args.B, args.n), gap, -1)


def _cmd_generate_link(args) -> int:
    arr = planarize(_link_spec(args))
    doc = {
        "params": {
            "B": args.B,
            "n": args.n,
            "main_lemma": bool(args.main_lemma),
            "D": format_rational(args.D),
        },
        "graph": jsonio.graph_to_json(arr.graph),
    }
    jsonio.save_json(args.out, doc)
    print(
        f"wrote {args.out}: {arr.graph.vertex_count} points, "
        f"{len(arr.graph.edges)} fragments"
    )
    return 0


def _cmd_verify_link(args) -> int:
    doc = jsonio.load_json(args.inp)
    try:
        params = doc["params"]
        stored = jsonio.graph_from_json(doc["graph"])
        spec_args = argparse.Namespace(
            B=int(params["B"]),
            n=int(params["n"]),
            main_lemma=bool(params["main_lemma"]),
            D=parse_rational(params["D"]),
        )
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed link JSON: {exc}") from exc
    arr = planarize(_link_spec(spec_args))
    rebuilt = jsonio.dumps_canonical(jsonio.graph_to_json(arr.graph))
    matches = rebuilt == jsonio.dumps_canonical(jsonio.graph_to_json(stored))
    crossing = check_planar_embedding(arr.graph)
    report = verify_faithful(arr, exhaustive=True)

    print(f"graph matches parameters: {'ok' if matches else 'FAIL'}")
    print(f"planar drawing: {'ok' if crossing is None else f'FAIL {crossing}'}")
    print(f"slope decomposition: {'ok' if report.slope_decomposition_ok else 'FAIL'}")
    print(f"faithful on {report.pair_count} pairs: {'ok' if report.ok else 'FAIL'}")
    for line in report.failures:
        print(f"  {line}")
    ok = matches and crossing is None and report.ok
    if args.report:
        jsonio.save_json(
            args.report,
            {
                "schema": "paramenv/link-verify/1",
                "ok": ok,
                "graph_matches_params": matches,
                "planar": crossing is None,
                "pair_count": report.pair_count,
                "slope_decomposition_ok": report.slope_decomposition_ok,
                "max_span_denominator": report.max_span_denominator,
                "failures": list(report.failures),
            },
        )
    return 0 if ok else 1


def _cmd_generate_words(args) -> int:
    maker = binary_expanded_words if args.binary else doubling_words
    words = maker(args.n, args.ell)
    jsonio.save_json(args.out, jsonio.words_to_json(args.n, words))
    print(f"wrote {args.out}: {len(words)} words of length {len(words[0])}")
    return 0


def _cmd_generate_grid_skeleton(args) -> int:
    g = gen_grid(args.p, args.q)
    jsonio.save_json(args.out, jsonio.graph_to_json(g))
    print(f"wrote {args.out}: {g.vertex_count} vertices, {len(g.edges)} edges")
    return 0


def _cmd_generate_layered(args, maker) -> int:
    g = maker(args.n, args.layers)
    jsonio.save_json(args.out, jsonio.graph_to_json(g))
    print(f"wrote {args.out}: {g.vertex_count} vertices, {len(g.edges)} edges")
    return 0


def _load_graph(path: str):
    """Accept plain graph JSON or any document embedding one under "graph"."""
    doc = jsonio.load_json(path)
    if isinstance(doc, dict) and "graph" in doc:
        doc = doc["graph"]
    return jsonio.graph_from_json(doc)


def _cmd_envelope(args) -> int:
    g = _load_graph(args.inp)
    domain = tuple(args.domain) if args.domain else None
    env = envelope_dp(g, domain=domain)
    if args.oracle:
        ref = envelope_bruteforce(g, domain=domain)
        if ref.function != env.function:
            print(
                f"oracle mismatch: dp has {len(env.function.segments)} pieces, "
                f"path enumeration has {len(ref.function.segments)}",
                file=sys.stderr,
            )
            return 1
        print("oracle agreement: ok")
    jsonio.save_json(args.out, jsonio.envelope_to_json(env))
    print(f"wrote {args.out}: {len(env.function.segments)} pieces")
    if args.fig:
        from .figures import envelope_figure

        envelope_figure(env, args.fig)
        print(f"wrote {args.fig}")
    return 0


def _cmd_verify_phi(args) -> int:
    inst = jsonio.instance_from_json(jsonio.load_json(args.inp))
    report = verify_instance(inst)
    for check in report.checks:
        suffix = "" if check.ok else f"  ({check.detail})"
        print(f"{check.name}: {'ok' if check.ok else 'FAIL'}{suffix}")
    if args.report:
        jsonio.save_json(
            args.report,
            {
                "schema": "paramenv/phi-verify/1",
                "ok": report.ok,
                "checks": [
                    {"name": c.name, "ok": c.ok, "detail": c.detail}
                    for c in report.checks
                ],
            },
        )
    return 0 if report.ok else 1


def _cmd_verify_words(args) -> int:
    n, _, words = jsonio.words_from_json(jsonio.load_json(args.inp))
    bad_symbol = any(s < 0 or s >= n for w in words for s in w)
    if bad_symbol:
        print("alphabet: FAIL (symbol outside range)")
        return 1
    witness = find_alternation(words, n)
    print(f"alternation-free: {'ok' if witness is None else f'FAIL {witness}'}")
    ok = witness is None
    if args.ds is not None:
        # Equal words share a symbol; the file's word order is the sequence.
        ids: dict[tuple, int] = {}
        seq = [ids.setdefault(tuple(w), len(ids)) for w in words]
        ds_ok = is_davenport_schinzel(seq, args.ds)
        print(f"davenport-schinzel order {args.ds}: {'ok' if ds_ok else 'FAIL'}")
        ok = ok and ds_ok
    return 0 if ok else 1


def _cmd_verify_paths(args) -> int:
    env = jsonio.envelope_from_json(jsonio.load_json(args.inp))
    witness = check_alternation_free_paths(env.witnesses)
    print(f"paths alternation-free: {'ok' if witness is None else f'FAIL {witness}'}")
    return 0 if witness is None else 1


def _cmd_verify_ds(args) -> int:
    doc = jsonio.load_json(args.inp)
    seq = doc["sequence"] if isinstance(doc, dict) else doc
    if not isinstance(seq, list):
        raise ValueError("expected a JSON list or an object with a 'sequence' key")
    ok = is_davenport_schinzel(seq, args.order)
    print(f"davenport-schinzel order {args.order}: {'ok' if ok else 'FAIL'}")
    return 0 if ok else 1


def _cmd_hull3(args) -> int:
    g = jsonio.trigraph_from_json(jsonio.load_json(args.inp))
    vectors = path_vectors(g)
    hull = hull3_vertices([v.vector for v in vectors])
    rng = Random(args.seed)
    samples = [
        tuple(Fraction(rng.randint(-400, 400), rng.randint(1, 20)) for _ in range(3))
        for _ in range(args.samples)
    ]
    report = cover_check(g, samples)
    print(f"path vectors: {len(vectors)}")
    print(f"hull vertices: {len(hull)}")
    print(f"cover size: {report.cover_size}")
    print(f"violations: {len(report.violations)} of {report.checked} samples")
    if args.report:
        jsonio.save_json(
            args.report,
            {
                "schema": "paramenv/hull-cover/1",
                "ok": report.ok,
                "path_vectors": len(vectors),
                "hull_vertices": len(hull),
                "cover_size": report.cover_size,
                "checked": report.checked,
                "violations": [
                    [format_rational(c) for c in lam] for lam in report.violations
                ],
                "samples": args.samples,
                "seed": args.seed,
            },
        )
    return 0 if report.ok else 1


def _cmd_experiment_grid(args) -> int:
    jobs = args.jobs if args.jobs is not None else _default_jobs()
    report = grid_piece_experiment(
        args.p, args.q, args.trials, args.bits, args.seed, jobs=jobs
    )
    print(
        f"grid {args.p}x{args.q}, {args.trials} trials: "
        f"max pieces {report.max_pieces} (bound {report.piece_bound})"
    )
    print(
        f"violations: bound {report.bound_violations}, "
        f"alternation {report.alternation_violations}, "
        f"middle-row {report.middle_row_violations}"
    )
    if args.report:
        jsonio.save_json(
            args.report,
            {
                "schema": "paramenv/grid-experiment/1",
                "ok": report.ok,
                "rows": report.rows,
                "cols": report.cols,
                "trials": report.trials,
                "bit_length": report.bit_length,
                "seed": report.seed,
                "jobs": jobs,
                "piece_bound": report.piece_bound,
                "max_pieces": report.max_pieces,
                "histogram": {str(k): v for k, v in sorted(report.histogram.items())},
                "bound_violations": report.bound_violations,
                "alternation_violations": report.alternation_violations,
                "middle_row_violations": report.middle_row_violations,
            },
        )
    if args.csv:
        with open(args.csv, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(
                ["trial", "seed", "pieces", "alternation_found", "middle_row_max"]
            )
            for i, (seed, pieces, alt, mid) in enumerate(report.trial_results):
                writer.writerow([i, seed, pieces, int(alt), mid])
    if args.fig:
        from .figures import histogram_figure

        histogram_figure(report.histogram, args.fig, bound=report.piece_bound)
    return 0 if report.ok else 1


def _cmd_reduce_matching(args) -> int:
    g = _load_graph(args.inp)
    sg = split_transform(g, args.lam)
    result = min_weight_perfect_matching(sg)
    path = recover_path(result, sg)
    shortest = dist_from_at(g, args.lam, g.source)[g.sink]
    agrees = shortest is not None and shortest == result.weight
    print(f"matching weight: {format_rational(result.weight)}")
    print(f"recovered path: {' '.join(str(v) for v in path)}")
    print(f"agrees with shortest path: {'ok' if agrees else 'FAIL'}")
    if args.report:
        jsonio.save_json(
            args.report,
            {
                "schema": "paramenv/matching/1",
                "ok": agrees,
                "lambda": format_rational(args.lam),
                "matching_weight": format_rational(result.weight),
                "path": list(path),
                "pairs": [[e.left, e.right] for e in result.pairs],
                "shortest_path_cost": (
                    None if shortest is None else format_rational(shortest)
                ),
            },
        )
    return 0 if agrees else 1


def _cmd_plot(args) -> int:
    env = jsonio.envelope_from_json(jsonio.load_json(args.inp))
    lam_range = tuple(args.range) if args.range else None
    svg = emit_plot(env, args.width, args.height, lam_range=lam_range)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(svg)
    print(f"wrote {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="paramenv",
        description="Exact parametric shortest-path instances, envelopes, "
        "and verifiers.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="build instances and write them as JSON")
    gsub = gen.add_subparsers(dest="what", required=True)

    phi = gsub.add_parser("phi", help="recursive lower-bound instance")
    phi.add_argument("--n", type=int, required=True, help="branching base (>= 3)")
    phi.add_argument("--B", type=int, required=True, help="number of input tracks")
    phi.add_argument("--D", type=parse_rational, required=True, help="drift, |D| <= 1")
    phi.add_argument("--m", type=int, required=True, help="recursion depth")
    phi.add_argument("--out", required=True)
    phi.set_defaults(handler=_cmd_generate_phi)

    link = gsub.add_parser("link", help="planarized link gadget")
    link.add_argument("--B", type=int, required=True)
    link.add_argument("--n", type=int, required=True)
    link.add_argument(
        "--main-lemma",
        action="store_true",
        help="use the main construction's weights instead of zero base charges",
    )
    link.add_argument("--D", type=parse_rational, default=Fraction(0))
    link.add_argument("--out", required=True)
    link.set_defaults(handler=_cmd_generate_link)

    words = gsub.add_parser("words", help="alternation-free word family")
    words.add_argument("--n", type=int, required=True)
    words.add_argument("--ell", type=int, required=True)
    words.add_argument("--binary", action="store_true")
    words.add_argument("--out", required=True)
    words.set_defaults(handler=_cmd_generate_words)

    grid = gsub.add_parser("grid-skeleton", help="zero-weight grid graph")
    grid.add_argument("--p", type=int, required=True, help="rows")
    grid.add_argument("--q", type=int, required=True, help="columns")
    grid.add_argument("--out", required=True)
    grid.set_defaults(handler=_cmd_generate_grid_skeleton)

    gnpl = gsub.add_parser("gnpl", help="complete layered word graph")
    gnpl.add_argument("--n", type=int, required=True)
    gnpl.add_argument("--layers", type=int, required=True)
    gnpl.add_argument("--out", required=True)
    gnpl.set_defaults(handler=lambda a: _cmd_generate_layered(a, complete_layered_graph))

    gpl = gsub.add_parser("gpl", help="cyclic-shift layered word graph")
    gpl.add_argument("--n", type=int, required=True)
    gpl.add_argument("--layers", type=int, required=True)
    gpl.add_argument("--out", required=True)
    gpl.set_defaults(handler=lambda a: _cmd_generate_layered(a, cyclic_shift_graph))

    env = sub.add_parser("envelope", help="compute the shortest-path envelope")
    env.add_argument("--in", dest="inp", required=True)
    env.add_argument("--out", required=True)
    env.add_argument(
        "--domain", nargs=2, type=parse_rational, metavar=("LO", "HI"), default=None
    )
    env.add_argument(
        "--oracle",
        action="store_true",
        help="cross-check against path enumeration (exit 1 on mismatch)",
    )
    env.add_argument("--fig", help="also render a PNG figure")
    env.set_defaults(handler=_cmd_envelope)

    ver = sub.add_parser("verify", help="check instances and sequences")
    vsub = ver.add_subparsers(dest="what", required=True)

    vphi = vsub.add_parser("phi", help="all six instance properties")
    vphi.add_argument("--in", dest="inp", required=True)
    vphi.add_argument("--report")
    vphi.set_defaults(handler=_cmd_verify_phi)

    vlink = vsub.add_parser("link", help="planarity and gadget faithfulness")
    vlink.add_argument("--in", dest="inp", required=True)
    vlink.add_argument("--report")
    vlink.set_defaults(handler=_cmd_verify_link)

    vwords = vsub.add_parser("words", help="alternation freedom of a word file")
    vwords.add_argument("--in", dest="inp", required=True)
    vwords.add_argument(
        "--ds",
        type=int,
        default=None,
        metavar="ORDER",
        help="also check the word sequence is Davenport-Schinzel of this order",
    )
    vwords.set_defaults(handler=_cmd_verify_words)

    vpaths = vsub.add_parser("paths", help="alternation freedom of envelope witnesses")
    vpaths.add_argument("--in", dest="inp", required=True)
    vpaths.set_defaults(handler=_cmd_verify_paths)

    vds = vsub.add_parser("ds", help="Davenport-Schinzel check of a plain sequence")
    vds.add_argument("--in", dest="inp", required=True)
    vds.add_argument("--order", type=int, required=True)
    vds.set_defaults(handler=_cmd_verify_ds)

    hull = sub.add_parser("hull3", help="three-parameter hull cover check")
    hull.add_argument("--in", dest="inp", required=True)
    hull.add_argument("--samples", type=int, default=1000)
    hull.add_argument("--seed", type=int, default=0)
    hull.add_argument("--report")
    hull.set_defaults(handler=_cmd_hull3)

    exp = sub.add_parser("experiment", help="randomized experiments")
    esub = exp.add_subparsers(dest="what", required=True)
    egrid = esub.add_parser("grid", help="envelope piece counts on random grids")
    egrid.add_argument("--p", type=int, required=True, help="rows")
    egrid.add_argument("--q", type=int, required=True, help="columns")
    egrid.add_argument("--trials", type=int, required=True)
    egrid.add_argument("--bits", type=int, default=8)
    egrid.add_argument("--seed", type=int, default=0)
    egrid.add_argument(
        "--jobs", type=int, default=None, help="defaults to PARAMENV_JOBS or 1"
    )
    egrid.add_argument("--report")
    egrid.add_argument("--csv", help="also write per-trial rows")
    egrid.add_argument("--fig", help="also render a histogram PNG")
    egrid.set_defaults(handler=_cmd_experiment_grid)

    red = sub.add_parser("reduce", help="reductions to other problems")
    rsub = red.add_subparsers(dest="what", required=True)
    rmatch = rsub.add_parser("matching", help="fixed-parameter shortest path as matching")
    rmatch.add_argument("--in", dest="inp", required=True)
    rmatch.add_argument("--lambda", dest="lam", type=parse_rational, required=True)
    rmatch.add_argument("--report")
    rmatch.set_defaults(handler=_cmd_reduce_matching)

    plot = sub.add_parser("plot", help="render an envelope JSON as SVG")
    plot.add_argument("--in", dest="inp", required=True)
    plot.add_argument("--out", required=True)
    plot.add_argument(
        "--range", nargs=2, type=parse_rational, metavar=("LO", "HI"), default=None
    )
    plot.add_argument("--width", type=int, default=640)
    plot.add_argument("--height", type=int, default=400)
    plot.set_defaults(handler=_cmd_plot)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
