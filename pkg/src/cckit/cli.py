"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 validation error (bad inputs, failed
cover/iso checks), 3 expectation violation in benchmark runs.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import bench
from .complex import (
    CombinatorialComplex,
    NeighborhoodKind,
    NeighborhoodSpec,
    decode_json,
    encode_json,
    format_edge_list,
    parse_edge_list,
    parse_edge_list_blocks,
)
from .covering import CellMap, verify_covering
from .errors import CCError, ParseError
from .generators import (
    StripParams,
    TorusParams,
    cartesian_product,
    cycle_graph,
    cylinder,
    moebius,
    mog_example_pair,
    star_graph,
    torus,
)
from .invariants import (
    INFINITE,
        betti_gf2,
    boundary_edge_graph,
    boundary_matrices,
    connected_components,
    cross_diameter,
    cycle_lengths,
    diameter,
    euler_characteristic,
    orientability_2d,
)
from .iso import check_isomorphism
from .lifting import CyclicLiftParams, MogParams, cyclic_lift, mog_pool, triangular_lift
from .refinement import Engine, HompBlock, PoolStage, SclBlock, distinguish, homp_refine

USAGE_ERROR, VALIDATION_ERROR, EXPECTATION_ERROR = 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(USAGE_ERROR)


def _read_cc(path: str) -> CombinatorialComplex:
    with open(path, "rb") as fp:
        return decode_json(fp.read())


def _parse_spec(text: str) -> NeighborhoodSpec:
    kinds = {"A": NeighborhoodKind.ADJACENCY, "coA": NeighborhoodKind.CO_ADJACENCY,
             "B": NeighborhoodKind.INCIDENCE_UP, "BT": NeighborhoodKind.INCIDENCE_DOWN}
    try:
        kind, ranks = text.split(":")
        r1, r2 = (int(x) for x in ranks.split(","))
        return NeighborhoodSpec(kinds[kind], r1, r2)
    except (ValueError, KeyError):
        raise ParseError(
            f"bad neighborhood spec {text!r}; expected KIND:r1,r2 with KIND in A|coA|B|BT"
        ) from None


def _parse_engine(text: str, rounds: int | None) -> Engine:
    if text == "homp":
        if rounds is not None:
            return Engine("homp", (HompBlock(None, rounds),))
        return Engine.homp_full()
    if text == "oracle":
        return Engine.oracle()
    if text.startswith("scl:"):
        try:
            r1, r2, mark = text[4:].split(",")
            marking = {"dist": "distance", "bin": "binary"}[mark]
            if rounds is not None:
                return Engine(text, (SclBlock(int(r1), int(r2), marking, rounds), PoolStage()))
            return Engine.scl(int(r1), int(r2), marking)
        except (ValueError, KeyError):
            raise ParseError(f"bad engine {text!r}; expected scl:R1,R2,dist|bin") from None
    if text in ("smcn", "smcn:default"):
        return Engine.smcn()
    raise ParseError(f"unknown engine {text!r}")


def _dist_json(d):
    if d is None:
        return None
    return "inf" if d == INFINITE else int(d)


# -- subcommand handlers ----------------------------------------------------------


def _cmd_gen(args) -> int:
    out = sys.stdout
    if args.family == "torus":
        periods = tuple(int(x) for x in args.periods.split(","))
        out.write(encode_json(torus(TorusParams(periods))).decode() + "\n")
    elif args.family in ("cylinder", "moebius"):
        params = StripParams(args.height, args.perimeter)
        cc = cylinder(params) if args.family == "cylinder" else moebius(params)
        out.write(encode_json(cc).decode() + "\n")
    elif args.family == "star":
        out.write(format_edge_list(star_graph(args.n, args.k)))
    elif args.family == "cycle":
        out.write(format_edge_list(cycle_graph(args.n)))
    elif args.family == "mog-pair":
        left, right = mog_example_pair()
        out.write(format_edge_list(left if args.side == "left" else right))
    else:  # product of two cycles
        out.write(
            format_edge_list(cartesian_product(cycle_graph(args.n), cycle_graph(args.m)))
        )
    return 0


def _read_graph_arg(args) -> "SimpleGraph":
    if args.input == "-":
        return parse_edge_list(sys.stdin.read())
    with open(args.input) as fp:
        return parse_edge_list(fp.read())


def _cmd_lift(args) -> int:
    g = _read_graph_arg(args)
    if args.method == "triangular":
        cc = triangular_lift(g)
    else:
        cc = cyclic_lift(g, CyclicLiftParams(args.max_cycle_len))
    sys.stdout.write(encode_json(cc).decode() + "\n")
    return 0


def _cmd_pool(args) -> int:
    g = _read_graph_arg(args)
    if args.eta is None or args.eps is None:
        cc = mog_pool(g)  # automatically fine cover
    else:
        cc = mog_pool(g, MogParams(Fraction(args.eta), Fraction(args.eps)))
    sys.stdout.write(encode_json(cc).decode() + "\n")
    return 0


def _cmd_invariants(args) -> int:
    cc = _read_cc(args.file)
    spec = _parse_spec(args.spec)
    count, _ = connected_components(cc)
    report: dict = {
        "skeleton_sizes": list(cc.skeleton_sizes()),
        "components": count,
        "euler_characteristic": euler_characteristic(cc),
        "diameter": {str(spec): _dist_json(diameter(cc, spec))},
    }
    data = boundary_matrices(cc)
    if data.is_chain_complex:
        report["betti_gf2"] = list(betti_gf2(cc))
    else:
        report["betti_gf2"] = None
        report["chain_complex_violation"] = list(data.violation)
    if args.cross_k is not None:
        try:
            report["cross_diameter"] = {
                f"{spec};k={args.cross_k}": _dist_json(cross_diameter(cc, spec, args.cross_k))
            }
        except CCError as exc:
            report["cross_diameter"] = {f"{spec};k={args.cross_k}": f"undefined ({exc})"}
    if cc.dimension >= 2:
        verdict = orientability_2d(cc)
        report["orientability"] = verdict.verdict.value
        boundary = boundary_edge_graph(cc)
        report["boundary_cycle_lengths"] = cycle_lengths(boundary)
        report["boundary_edge_count"] = len(boundary.edges)
    if args.json:
        print(json.dumps(report, indent=2))
    else:
        for key, value in report.items():
            print(f"{key}: {value}")
    return 0


def _cmd_distinguish(args) -> int:
    a, b = _read_cc(args.a), _read_cc(args.b)
    engine = _parse_engine(args.engine, args.rounds)
    verdict = distinguish(a, b, engine)
    print(str(verdict))
    if args.emit_colors and engine.stages is not None:
        colorings = homp_refine([a, b])
        dump = [
            {"rank_histograms": [list(map(list, h)) for h in fp.rank_histograms]}
            for _, fp in colorings
        ]
        print(json.dumps(dump))
    return 0


def _read_cell_map(path: str) -> CellMap:
    with open(path) as fp:
        try:
            doc = json.load(fp)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}") from exc
    try:
        source = decode_json(json.dumps(doc["source"]))
        target = decode_json(json.dumps(doc["target"]))
        assignment = tuple(tuple(int(x) for x in row) for row in doc["assignment"])
    except KeyError as exc:
        raise ParseError(f"cover JSON missing field {exc.args[0]!r}") from exc
    return CellMap(source, target, assignment)


def _cmd_verify_cover(args) -> int:
    violation = verify_covering(_read_cell_map(args.file))
    if violation is None:
        print("Ok")
        return 0
    print(str(violation))
    return VALIDATION_ERROR


def _cmd_check_iso(args) -> int:
    violation = check_isomorphism(_read_cell_map(args.file))
    if violation is None:
        print("Ok")
        return 0
    print(violation)
    return VALIDATION_ERROR


def _cmd_gen_torus_dataset(args) -> int:
    spec = bench.TorusDatasetSpec(args.min_nodes, args.max_nodes, args.max_components)
    pairs = bench.gen_torus_dataset(spec)
    if args.output == "-":
        bench.write_dataset(pairs, sys.stdout)
    else:
        with open(args.output, "w") as fp:
            bench.write_dataset(pairs, fp)
    print(f"wrote {len(pairs)} pairs", file=sys.stderr)
    if args.expect_pairs is not None and len(pairs) != args.expect_pairs:
        print(
            f"expected {args.expect_pairs} pairs but enumerated {len(pairs)}; "
            "enumeration dump:",
            file=sys.stderr,
        )
        print(bench.enumeration_dump(spec), file=sys.stderr)
        return EXPECTATION_ERROR
    return 0


def _cmd_label_lifted(args) -> int:
    if args.input == "-":
        text = sys.stdin.read()
    else:
        with open(args.input) as fp:
            text = fp.read()
    out = sys.stdout if args.output == "-" else open(args.output, "w")
    lift = CyclicLiftParams(args.max_cycle_len)
    blocks = parse_edge_list_blocks(text)
    status = 0
    try:
        for i, item in enumerate(blocks):
            if isinstance(item, ParseError):
                print(f"record {i}: {item}", file=sys.stderr)
                out.write(json.dumps({"index": i, "error": str(item)}) + "\n")
                status = VALIDATION_ERROR
                continue
            try:
                lc = bench.label_lifted_graph(item, lift)
                out.write(json.dumps(bench.labeled_to_json(i, lc)) + "\n")
            except CCError as exc:
                print(f"record {i}: {exc}", file=sys.stderr)
                out.write(json.dumps({"index": i, "error": str(exc)}) + "\n")
                status = VALIDATION_ERROR
    finally:
        if out is not sys.stdout:
            out.close()
    return status


def _cmd_run_benchmark(args) -> int:
    with open(args.dataset) as fp:
        records = bench.read_dataset(fp)
    pairs = [(left, right) for left, right, _ in records]
    engines = [_parse_engine(name, None) for name in args.engines.split(",")]
    reports = bench.run_benchmark(
        pairs, engines, progress=lambda s: print(s, file=sys.stderr)
    )
    expectations = {}
    for item in args.expect or []:
        name, _, value = item.partition("=")
        expectations[name] = int(value)
    status = 0
    for rep in reports:
        finite_rounds = [r for r in rep.rounds if r is not None]
        earliest = min(finite_rounds) if finite_rounds else "n/a"
        print(
            f"{rep.engine}: separated {rep.separated}/{rep.total} "
            f"(earliest round {earliest}, {rep.seconds:.1f}s)"
        )
        if rep.engine in expectations and rep.separated != expectations[rep.engine]:
            print(
                f"expectation violated: {rep.engine} separated {rep.separated}, "
                f"expected {expectations[rep.engine]}",
                file=sys.stderr,
            )
            status = EXPECTATION_ERROR
    if args.json:
        print(
            json.dumps(
                [
                    {
                        "engine": r.engine,
                        "separated": r.separated,
                        "total": r.total,
                        "rounds": r.rounds,
                        "seconds": r.seconds,
                    }
                    for r in reports
                ]
            )
        )
    return status


def build_parser() -> _Parser:
    parser = _Parser(prog="cckit", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a complex or graph")
    gen_sub = p.add_subparsers(dest="family", required=True)
    g = gen_sub.add_parser("torus")
    g.add_argument("--periods", required=True, help="comma-separated, e.g. 3,4")
    g = gen_sub.add_parser("cylinder")
    g.add_argument("--height", type=int, required=True)
    g.add_argument("--perimeter", type=int, required=True)
    g = gen_sub.add_parser("moebius")
    g.add_argument("--height", type=int, required=True)
    g.add_argument("--perimeter", type=int, required=True)
    g = gen_sub.add_parser("star")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--k", type=int, required=True)
    g = gen_sub.add_parser("cycle")
    g.add_argument("--n", type=int, required=True)
    g = gen_sub.add_parser("cycle-product")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--m", type=int, required=True)
    g = gen_sub.add_parser("mog-pair")
    g.add_argument("--side", choices=("left", "right"), required=True)
    p.set_defaults(fn=_cmd_gen)

    p = sub.add_parser("lift", help="lift a graph to a complex")
    p.add_argument("--method", choices=("triangular", "cyclic"), required=True)
    p.add_argument("--max-cycle-len", type=int, default=18)
    p.add_argument("-i", "--input", default="-")
    p.set_defaults(fn=_cmd_lift)

    p = sub.add_parser("pool", help="pool a graph to a complex (Mapper)")
    p.add_argument("--method", choices=("mog",), default="mog")
    p.add_argument("--eta", default=None, help="cover stride (rational, e.g. 1/12)")
    p.add_argument("--eps", default=None, help="interval length (rational)")
    p.add_argument("-i", "--input", default="-")
    p.set_defaults(fn=_cmd_pool)

    p = sub.add_parser("invariants", help="report invariants of a complex")
    p.add_argument("file")
    p.add_argument("--spec", default="A:0,1")
    p.add_argument("--cross-k", type=int, default=None)
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=_cmd_invariants)

    p = sub.add_parser("distinguish", help="compare two complexes")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument(
        "--engine",
        default="homp",
        help="homp | scl:R1,R2,dist|bin | smcn:default | oracle",
    )
    p.add_argument(
        "--rounds",
        type=int,
        default=None,
        help="cap refinement rounds for the homp/scl engines (default: to stability)",
    )
    p.add_argument("--emit-colors", action="store_true")
    p.set_defaults(fn=_cmd_distinguish)

    p = sub.add_parser("verify-cover", help="verify a covering map JSON")
    p.add_argument("file")
    p.set_defaults(fn=_cmd_verify_cover)

    p = sub.add_parser("check-iso", help="verify an isomorphism map JSON")
    p.add_argument("file")
    p.set_defaults(fn=_cmd_check_iso)

    p = sub.add_parser("gen-torus-dataset", help="generate the torus pair dataset")
    p.add_argument("min_nodes_pos", nargs="?", type=int, default=None)
    p.add_argument("max_nodes_pos", nargs="?", type=int, default=None)
    p.add_argument("max_components_pos", nargs="?", type=int, default=None)
    p.add_argument("--min-nodes", type=int, default=18)
    p.add_argument("--max-nodes", type=int, default=40)
    p.add_argument("--max-components", type=int, default=3)
    p.add_argument("-o", "--output", default="-")
    p.add_argument("--expect-pairs", type=int, default=None)
    p.set_defaults(fn=_cmd_gen_torus_dataset)

    p = sub.add_parser("label-lifted", help="label lifted graphs with invariants")
    p.add_argument("--max-cycle-len", type=int, default=18)
    p.add_argument("-i", "--input", default="-")
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(fn=_cmd_label_lifted)

    p = sub.add_parser("run-benchmark", help="run engines over a pair dataset")
    p.add_argument("--dataset", required=True)
    p.add_argument("--engines", default="homp,smcn,oracle")
    p.add_argument("--expect", action="append", default=None, metavar="ENGINE=N")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=_cmd_run_benchmark)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "gen-torus-dataset":
        if args.min_nodes_pos is not None:
            args.min_nodes = args.min_nodes_pos
        if args.max_nodes_pos is not None:
            args.max_nodes = args.max_nodes_pos
        if args.max_components_pos is not None:
            args.max_components = args.max_components_pos
    try:
        return args.fn(args)
    except CCError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return VALIDATION_ERROR


if __name__ == "__main__":
    sys.exit(main())
