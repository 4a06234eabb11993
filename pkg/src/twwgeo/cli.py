"""Command-line front end.

Exit codes: 0 success, 2 a witness or sequence failed verification,
3 malformed input, 64 bad usage.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import random
import sys
import time
from pathlib import Path

from . import __version__
from .apus import SegmentFamily, analyze_apus, gen_Hsigma_apus_degenerate, gen_Tk_apus
from .circular_arc import ArcFamily, analyze_arcs, gen_Tk_arcs
from .errors import MalformedInput, TwwGeoError
from .families import (TransversalWitness, gen_Gbullet, gen_halfgraph, gen_Hsigma, gen_subdivided_complete,
                       gen_transversal_graph, universal_permutation, verify_transversal)
from .grids import GridWitness, PointSet, find_grid, max_grid, verify_grid
from .mergewidth import ConstructionSequence, build_halfgraph_construction, verify_construction
from .structures import Graph, OrderedBinaryStructure
from .terrain import Terrain, gen_terrain, visibility_graph
from .tww import ContractionSequence, verify_contraction

EXIT_OK, EXIT_FAIL, EXIT_MALFORMED, EXIT_USAGE = 0, 2, 3, 64


class UsageError(Exception):
    pass


class Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


class Failed(Exception):
    """Verification said no; carries the report body."""

    def __init__(self, body):
        super().__init__("verification failed")
        self.body = body


class Run:
    """Inputs read so far and their digests."""

    def __init__(self, args):
        self.args = args
        self.inputs = {}
        self.lines = []

    def load(self, path):
        try:
            raw = Path(path).read_bytes()
            doc = json.loads(raw)
        except (OSError, ValueError) as exc:
            raise MalformedInput(f"cannot read {path}: {exc}") from exc
        self.inputs[str(path)] = hashlib.sha256(raw).hexdigest()
        return doc

    def say(self, line):
        self.lines.append(line)


def _structure(doc):
    if "relations" in doc:
        return OrderedBinaryStructure.from_json(doc)
    return Graph.from_json(doc).to_structure(doc.get("order"))


def _sigma(args, rng):
    if args.sigma:
        return [int(x) for x in args.sigma.split(",")]
    if args.n is None:
        raise MalformedInput("give --sigma or --n")
    s = list(range(1, args.n + 1))
    rng.shuffle(s)
    return s


# --- handlers ------------------------------------------------------------------

def cmd_gen(run, args, rng):
    fam = args.family
    if fam == "transversal":
        return gen_transversal_graph(args.k).to_json()
    if fam == "halfgraph":
        g = gen_halfgraph(args.n)
        if args.format == "construction":
            return build_halfgraph_construction(args.n).to_json()
        return g.to_json()
    if fam == "hsigma":
        return gen_Hsigma(_sigma(args, rng), args.length).to_json()
    if fam == "universal":
        return {"sigma": list(universal_permutation(args.n))}
    if fam == "biclique-subdiv":
        return gen_subdivided_complete(args.n, args.length, not args.clique).to_json()
    if fam == "gbullet":
        return gen_Gbullet(Graph.from_json(run.load(args.input))).to_json()
    if fam == "terrain":
        return gen_terrain(_sigma(args, rng), args.length).to_json()
    if fam == "tk-arcs":
        f = gen_Tk_arcs(args.k)
        return f.to_json() if args.format != "graph" else _arcs_graph(f)
    if fam == "tk-apus":
        f = gen_Tk_apus(args.k)
        return f.to_json() if args.format != "graph" else _apus_graph(f)
    if fam == "hsigma-apus":
        return gen_Hsigma_apus_degenerate(_sigma(args, rng), args.length).to_json()
    raise UsageError(f"unknown family {fam}")


def _arcs_graph(f):
    from .circular_arc import arc_intersection_graph
    return arc_intersection_graph(f).to_json()


def _apus_graph(f, degenerate=False):
    from .apus import apus_intersection_graph
    return apus_intersection_graph(f, degenerate).to_json()


def cmd_analyze(run, args, rng):
    doc = run.load(args.input)
    if args.kind == "arcs":
        res = analyze_arcs(ArcFamily.from_json(doc), args.k)
    else:
        f = SegmentFamily.from_json(doc)
        if args.lengths and not f.fixed_length:
            raise MalformedInput("--lengths needs max_len > 1 in the input")
        res = analyze_apus(f, args.k, args.threshold)
    body = res.to_json()
    if args.emit_witness:
        what = res.witness.to_json() if res.witness is not None else res.sequence.to_json()
        Path(args.emit_witness).write_text(json.dumps(what, sort_keys=True, indent=2) + "\n")
    run.say(f"branch={res.branch}")
    if res.width is not None:
        run.say(f"width={res.width}")
    if res.witness is not None:
        run.say(f"k={res.witness.k}")
    return body


def cmd_verify(run, args, rng):
    what = args.what
    if what == "contraction":
        s = _structure(run.load(args.graph))
        seq = ContractionSequence.from_json(run.load(args.seq))
        try:
            width, steps = verify_contraction(s, seq, trace=True)
        except TwwGeoError as exc:
            raise Failed({"valid": False, "error": str(exc)}) from exc
        run.say(f"width={width}")
        if args.trace:
            for i, d in enumerate(steps[1:], 1):
                run.say(f"step {i}: merge({seq.merges[i - 1][0]},{seq.merges[i - 1][1]}) degree={d}")
        return {"valid": True, "width": width, "trace": steps if args.trace else None}
    if what == "construction":
        return _verify_mw(run, args)
    if what == "transversal":
        g = Graph.from_json(run.load(args.graph))
        w = TransversalWitness.from_json(run.load(args.witness))
        ok = verify_transversal(g, w)
        run.say(f"transversal={'ok' if ok else 'fail'} k={w.k}")
        if not ok:
            raise Failed({"valid": False, "k": w.k})
        return {"valid": True, "k": w.k}
    if what == "grid":
        ps = PointSet.from_json(run.load(args.points))
        w = GridWitness.from_json(run.load(args.witness))
        ok = verify_grid(ps, w)
        run.say(f"grid={'ok' if ok else 'fail'} t={w.t}")
        if not ok:
            raise Failed({"valid": False, "t": w.t})
        return {"valid": True, "t": w.t}
    raise UsageError(f"unknown verify target {what}")


def _verify_mw(run, args):
    g = Graph.from_json(run.load(args.graph))
    seq = ConstructionSequence.from_json(run.load(args.seq))
    try:
        width, steps = verify_construction(g, seq, args.radius, trace=True)
    except TwwGeoError as exc:
        raise Failed({"valid": False, "error": str(exc)}) from exc
    run.say(f"width={width}")
    if args.trace:
        for idx, w in steps:
            run.say(f"before op {idx}: width={w}")
    return {"valid": True, "width": width, "radius": str(args.radius),
            "trace": [list(s) for s in steps] if args.trace else None}


def cmd_mw(run, args, rng):
    return _verify_mw(run, args)


def cmd_grid(run, args, rng):
    ps = PointSet.from_json(run.load(args.points))
    if args.action == "find":
        if args.t is None:
            raise UsageError("grid find needs --t")
        w = find_grid(ps, args.t, force=args.force)
        run.say(f"t={args.t} found={'yes' if w else 'no'}")
        return {"t": args.t, "witness": w.to_json() if w else None}
    t, w = max_grid(ps, force=args.force)
    run.say(f"max_grid={t}")
    return {"t": t, "witness": w.to_json() if w else None}


def cmd_vis(run, args, rng):
    g = visibility_graph(Terrain.from_json(run.load(args.terrain)))
    run.say(f"vertices={g.n} edges={len(g.edges)}")
    return g.to_json()


def cmd_plot(run, args, rng):
    from .svg import grid_svg, transversal_svg
    doc = run.load(args.witness)
    if "cells" in doc:
        ps = PointSet.from_json(run.load(args.points)) if args.points else None
        pic = grid_svg(GridWitness.from_json(doc), ps)
    else:
        pic = transversal_svg(TransversalWitness.from_json(doc))
    Path(args.out).write_text(pic)
    run.say(f"wrote {args.out}")
    return {"out": args.out}


# --- parser ------------------------------------------------------------------

def build_parser():
    p = Parser(prog="twwgeo", description="Twin-width tools for arc and segment graphs.")
    p.add_argument("--version", action="version", version=f"twwgeo {__version__}")
    common = Parser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--report", metavar="PATH", help="write the JSON report here")
    common.add_argument("--timing", action="store_true", help="add wall time to the report")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=Parser)

    g = sub.add_parser("gen", parents=[common], help="generate a family member")
    g.add_argument("family", choices=["transversal", "halfgraph", "hsigma", "universal", "biclique-subdiv",
                                      "gbullet", "terrain", "tk-arcs", "tk-apus", "hsigma-apus"])
    g.add_argument("--k", type=int, default=1)
    g.add_argument("--n", type=int)
    g.add_argument("--sigma", help="comma-separated permutation of 1..n")
    g.add_argument("--length", type=int, default=2)
    g.add_argument("--clique", action="store_true")
    g.add_argument("--input")
    g.add_argument("--format", choices=["graph", "family", "construction"], default="family")
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)

    a = sub.add_parser("analyze", parents=[common], help="run the dichotomy pipeline")
    a.add_argument("kind", choices=["arcs", "apus"])
    a.add_argument("--input", required=True)
    a.add_argument("--k", type=int, required=True)
    a.add_argument("--threshold", type=int)
    a.add_argument("--lengths", action="store_true")
    a.add_argument("--emit-witness", metavar="PATH")
    a.set_defaults(func=cmd_analyze)

    v = sub.add_parser("verify", parents=[common], help="check a witness")
    v.add_argument("what", choices=["contraction", "construction", "transversal", "grid"])
    v.add_argument("--graph")
    v.add_argument("--seq")
    v.add_argument("--witness")
    v.add_argument("--points")
    v.add_argument("--radius", default="inf")
    v.add_argument("--trace", action="store_true")
    v.set_defaults(func=cmd_verify)

    gr = sub.add_parser("grid", parents=[common], help="grid search in a point set")
    gr.add_argument("action", choices=["find", "max"])
    gr.add_argument("--points", required=True)
    gr.add_argument("--t", type=int)
    gr.add_argument("--force", action="store_true")
    gr.set_defaults(func=cmd_grid)

    m = sub.add_parser("mw", parents=[common], help="merge-width tools")
    m.add_argument("action", choices=["verify"])
    m.add_argument("--graph", required=True)
    m.add_argument("--seq", required=True)
    m.add_argument("--radius", default="inf")
    m.add_argument("--trace", action="store_true")
    m.set_defaults(func=cmd_mw)

    vi = sub.add_parser("vis", parents=[common], help="terrain visibility graph")
    vi.add_argument("--terrain", required=True)
    vi.set_defaults(func=cmd_vis)

    pl = sub.add_parser("plot", parents=[common], help="draw a witness as SVG")
    pl.add_argument("--witness", required=True)
    pl.add_argument("--points")
    pl.add_argument("--out", required=True)
    pl.set_defaults(func=cmd_plot)
    return p


def _required(args):
    need = {("verify", "contraction"): ("graph", "seq"), ("verify", "construction"): ("graph", "seq"),
            ("verify", "transversal"): ("graph", "witness"), ("verify", "grid"): ("points", "witness")}
    for name in need.get((args.cmd, getattr(args, "what", None)), ()):
        if getattr(args, name) is None:
            raise UsageError(f"verify {args.what} needs --{name}")
    if args.cmd == "gen" and args.family == "gbullet" and not args.input:
        raise UsageError("gen gbullet needs --input")


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(argv)
        _required(args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    rng = random.Random(args.seed)
    run = Run(args)
    start = time.perf_counter()
    code, status = EXIT_OK, "ok"
    try:
        result = args.func(run, args, rng)
    except Failed as exc:
        code, status, result = EXIT_FAIL, "failed", exc.body
    except MalformedInput as exc:
        print(f"malformed input: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except TwwGeoError as exc:
        code, status, result = EXIT_FAIL, "failed", {"error": f"{type(exc).__name__}: {exc}"}

    echo = [a for i, a in enumerate(argv)
            if a != "--report" and not (i and argv[i - 1] == "--report") and not a.startswith("--report=")]
    report = {"command": echo, "inputs": run.inputs, "seed": args.seed, "status": status, "result": result}
    if args.timing:
        report["wall_time"] = round(time.perf_counter() - start, 6)
    text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    if args.report:
        Path(args.report).write_text(text)
    if args.cmd == "gen":
        out = json.dumps(result, sort_keys=True) + "\n"
        if args.out:
            Path(args.out).write_text(out)
        else:
            sys.stdout.write(out)
    elif run.lines:
        sys.stdout.write("\n".join(run.lines) + "\n")
        if not args.report and args.cmd == "analyze":
            sys.stdout.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
