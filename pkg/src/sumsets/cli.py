"""Command-line entry point: generate / sumset / verify / decompose / search.

Outputs are static files and line-oriented tables for batch experiments.
Exit codes: 0 success, 1 usage or precondition error, 2 unconditional
inequality violation.  Every file output embeds a `# run:` header and gets a
sidecar manifest recording command, version, seeds, and input/output
digests; re-running the recorded command reproduces the output bytes
(wall-clock lives only in the manifest).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import __version__, bounds, generators, io as pio, search, structure
from .bounds import HypothesisViolation, InequalityViolation
from .core import (
    DimensionMismatch,
    EmptyOperand,
    LinearMap,
    PointSet,
    dilate,
    dilate_sum,
    difference_set,
    sumset,
    transform_sum,
)
from .io import ParseError
from .search import (
    BudgetExceeded,
    DilateSumObjective,
    InfeasibleSpec,
    SearchSpec,
    TransformObjective,
)

__all__ = ["main"]


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit code 1, not argparse's 2
        raise _UsageError(message)


def _parse_point(text):
    return tuple(tok.strip() for tok in text.split(","))


def _parse_map(text) -> LinearMap:
    try:
        return LinearMap.from_string(text)
    except (ValueError, ZeroDivisionError) as err:
        raise _UsageError(f"bad matrix {text!r}: {err}") from err


def _digest_file(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()[:16]


class _Run:
    """Collects inputs/outputs/seeds for the manifest sidecar."""

    def __init__(self, argv):
        self.argv = list(argv)
        self.t0 = time.perf_counter()
        self.inputs = {}
        self.outputs = {}
        self.seeds = {}

    def read_points(self, path_text: str) -> PointSet:
        path = Path(path_text)
        try:
            ps = pio.read_points(path)
        except OSError as err:
            raise _UsageError(str(err)) from err
        self.inputs[str(path)] = _digest_file(path)
        return ps

    def header(self):
        return [
            "run: sumsets " + " ".join(self.argv),
            f"version: {__version__}",
        ] + [f"rng: {generators.RNG_NAME} {k}={v}" for k, v in self.seeds.items()]

    def emit_text(self, text: str, out: str | None):
        body = "".join(f"# {line}\n" for line in self.header()) + text
        if out is None or out == "-":
            sys.stdout.write(body)
            return
        path = Path(out)
        path.write_text(body, encoding="utf-8")
        self.outputs[str(path)] = _digest_file(path)

    def emit_points(self, ps: PointSet, out: str | None):
        self.emit_text(pio.dumps_points(ps), out)

    def write_manifest(self):
        # only once something was written to disk; stdout runs need none
        if not self.outputs:
            return
        first = next(iter(self.outputs))
        manifest = {
            "command": ["sumsets"] + self.argv,
            "version": __version__,
            "seeds": self.seeds,
            "inputs": self.inputs,
            "outputs": self.outputs,
            "wall_ms": int((time.perf_counter() - self.t0) * 1000),
        }
        Path(first + ".manifest.json").write_text(
            json.dumps(manifest, indent=2) + "\n", encoding="utf-8"
        )


def build_parser() -> _Parser:
    p = _Parser(prog="sumsets", description=__doc__)
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="emit a named point-set family")
    g.add_argument("family", choices=["AN", "BN", "CN", "ap", "progression", "random-box"])
    g.add_argument("--d", type=int, help="ambient dimension")
    g.add_argument("--N", type=int, help="family size parameter")
    g.add_argument("--side", type=int, help="box side (random-box)")
    g.add_argument("--n", type=int, help="number of points")
    g.add_argument("--seed", type=int, help="required for random-box")
    g.add_argument("--start", help="AP start point, comma-separated")
    g.add_argument("--step", help="AP step vector, comma-separated")
    g.add_argument("--v0", help="progression base point")
    g.add_argument(
        "--gen",
        action="append",
        default=[],
        metavar="VEC:L",
        help="progression generator, e.g. '1,0:3' (repeatable)",
    )
    g.add_argument("-o", "--output", help="output file (default stdout)")

    s = sub.add_parser("sumset", help="pointwise set arithmetic on files")
    s.add_argument(
        "op", choices=["sum", "difference", "dilate", "dilate-sum", "transform-sum"]
    )
    s.add_argument("--a", help="first operand file")
    s.add_argument("--b", help="second operand file")
    s.add_argument("--input", help="single operand file")
    s.add_argument("--q", type=int)
    s.add_argument("--s", type=int)
    s.add_argument("--map", dest="map_text", help="row-major rational matrix a,b;c,d")
    s.add_argument("-o", "--output")

    v = sub.add_parser("verify", help="evaluate an inequality, emit report lines")
    v.add_argument(
        "inequality",
        choices=[
            "ruzsa-triangle",
            "ruzsa-sum-diff",
            "trivial-lower",
            "ruzsa-dim",
            "gs",
            "dilate-main",
            "transform-main",
            "onedim-dilate",
            "lin-product",
            "doubling-chain",
            "lines-bound",
            "grid-bound",
            "bukh-probe",
        ],
    )
    v.add_argument("--u")
    v.add_argument("--v")
    v.add_argument("--w")
    v.add_argument("--a")
    v.add_argument("--b")
    v.add_argument("--a1")
    v.add_argument("--a2")
    v.add_argument("--input", help="point-set file, or a directory with --summary")
    v.add_argument("--q", type=int)
    v.add_argument("--s", type=int)
    v.add_argument("--c-param")
    v.add_argument("--c-qs")
    v.add_argument("--direction")
    v.add_argument(
        "--map", dest="map_text", action="append", default=[], help="repeatable"
    )
    v.add_argument(
        "--summary",
        action="store_true",
        help="aggregate slack statistics across a directory of inputs",
    )

    d = sub.add_parser("decompose", help="line or grid decomposition of a set")
    d.add_argument("--mode", choices=["lines", "grid"], required=True)
    d.add_argument("--input", required=True)
    d.add_argument("--map", dest="map_text")
    d.add_argument("-o", "--output")

    r = sub.add_parser("search", help="exact minimum sumset over box subsets")
    r.add_argument("--dim", type=int, required=True)
    r.add_argument("--box", type=int, required=True)
    r.add_argument("--n", type=int)
    r.add_argument("--n-range", help="inclusive range a:b")
    r.add_argument("--q", type=int)
    r.add_argument("--s", type=int)
    r.add_argument("--map", dest="map_text")
    r.add_argument("--full-dimensional", action="store_true")
    r.add_argument("--budget", type=int, default=10**9)
    r.add_argument("--threads", type=int, default=1)
    r.add_argument("--split-depth", type=int, default=2)
    r.add_argument("--witness-cap", type=int, default=16)
    r.add_argument("--witness-dir", help="write witness point-set files here")

    return p


def cmd_generate(args, run: _Run) -> int:
    fam = args.family

    def need(flag, value):
        if value is None:
            raise _UsageError(f"generate {fam} requires --{flag}")
        return value

    if fam == "AN":
        ps = generators.gen_an(need("d", args.d), need("N", args.N))
    elif fam == "BN":
        ps = generators.gen_bn(need("N", args.N))
    elif fam == "CN":
        ps = generators.gen_cn(need("N", args.N))
    elif fam == "ap":
        ps = generators.gen_ap(
            _parse_point(need("start", args.start)),
            _parse_point(need("step", args.step)),
            need("n", args.n),
        )
    elif fam == "progression":
        if not args.gen:
            raise _UsageError("generate progression requires at least one --gen")
        gens = []
        for item in args.gen:
            vec, _, length = item.rpartition(":")
            if not vec or not length.isdigit():
                raise _UsageError(f"bad --gen {item!r}, expected 'VEC:L'")
            gens.append((_parse_point(vec), int(length)))
        prog = generators.ProperProgression(
            v0=_parse_point(need("v0", args.v0)), generators=tuple(gens)
        )
        ps = generators.gen_proper_progression(prog)
    else:  # random-box
        seed = args.seed
        if seed is None:
            raise _UsageError("generate random-box requires an explicit --seed")
        run.seeds["seed"] = seed
        ps = generators.gen_random_box(
            need("d", args.d), need("side", args.side), need("n", args.n), seed
        )
    run.emit_points(ps, args.output)
    return 0


def cmd_sumset(args, run: _Run) -> int:
    op = args.op

    def one():
        if args.input is None:
            raise _UsageError(f"sumset {op} requires --input")
        return run.read_points(args.input)

    def two():
        if args.a is None or args.b is None:
            raise _UsageError(f"sumset {op} requires --a and --b")
        return run.read_points(args.a), run.read_points(args.b)

    if op == "sum":
        a, b = two()
        ps = sumset(a, b)
    elif op == "difference":
        a, b = two()
        ps = difference_set(a, b)
    elif op == "dilate":
        if args.q is None:
            raise _UsageError("sumset dilate requires --q")
        ps = dilate(args.q, one())
    elif op == "dilate-sum":
        if args.q is None or args.s is None:
            raise _UsageError("sumset dilate-sum requires --q and --s")
        ps = dilate_sum(args.q, args.s, one())
    else:  # transform-sum
        if not args.map_text:
            raise _UsageError("sumset transform-sum requires --map")
        ps = transform_sum(one(), _parse_map(args.map_text))
    run.emit_points(ps, args.output)
    return 0


def _single_input_checker(args, run):
    """Build (name, callable A -> report) for the single-set inequalities."""
    name = args.inequality
    if name == "dilate-main":
        if args.q is None or args.s is None:
            raise _UsageError("dilate-main requires --q and --s")
        return lambda a: bounds.check_dilate_main(a, args.q, args.s)
    if name == "transform-main":
        m = _require_single_map(args)
        return lambda a: bounds.check_transform_main(a, m)
    if name == "onedim-dilate":
        if args.q is None or args.s is None:
            raise _UsageError("onedim-dilate requires --q and --s")
        c = Fraction(args.c_param) if args.c_param is not None else None
        return lambda a: bounds.check_onedim_dilate(a, args.q, args.s, c)
    if name == "doubling-chain":
        m = _require_single_map(args)
        return lambda a: bounds.check_doubling_chain(a, m)
    if name == "lines-bound":
        if args.q is None or args.s is None or args.c_qs is None:
            raise _UsageError("lines-bound requires --q, --s and --c-qs")
        c_qs = Fraction(args.c_qs)

        def check(a):
            cover = structure.fibers_along(a, structure.best_direction(a))
            return bounds.check_lines_bound(a, args.q, args.s, cover, c_qs)

        return check
    if name == "grid-bound":
        m = _require_single_map(args)
        return lambda a: bounds.check_grid_bound(a, m, structure.grid_profile(a, m))
    if name == "bukh-probe":
        if not args.map_text:
            raise _UsageError("bukh-probe requires at least one --map")
        maps = [_parse_map(t) for t in args.map_text]
        return lambda a: bounds.probe_bukh_conjecture(a, maps)
    return None


def _require_single_map(args) -> LinearMap:
    if len(args.map_text) != 1:
        raise _UsageError(f"{args.inequality} requires exactly one --map")
    return _parse_map(args.map_text[0])


def cmd_verify(args, run: _Run) -> int:
    name = args.inequality
    reports = []

    checker = _single_input_checker(args, run)
    if checker is not None:
        if args.input is None:
            raise _UsageError(f"{name} requires --input")
        path = Path(args.input)
        if path.is_dir():
            files = sorted(path.glob("*.pts"))
            if not files:
                raise _UsageError(f"no .pts files in {path}")
            for f in files:
                reports.append(checker(run.read_points(str(f))))
        else:
            reports.append(checker(run.read_points(args.input)))
    elif name == "ruzsa-triangle":
        if not (args.u and args.v and args.w):
            raise _UsageError("ruzsa-triangle requires --u, --v and --w")
        reports.append(
            bounds.check_ruzsa_triangle(
                run.read_points(args.u), run.read_points(args.v), run.read_points(args.w)
            )
        )
    elif name == "ruzsa-sum-diff":
        if not (args.u and args.v):
            raise _UsageError("ruzsa-sum-diff requires --u and --v")
        reports.append(
            bounds.check_ruzsa_sum_diff(run.read_points(args.u), run.read_points(args.v))
        )
    elif name in ("trivial-lower", "ruzsa-dim", "gs"):
        if not (args.a and args.b):
            raise _UsageError(f"{name} requires --a and --b")
        a, b = run.read_points(args.a), run.read_points(args.b)
        if name == "trivial-lower":
            reports.append(bounds.check_trivial_lower(a, b))
        elif name == "ruzsa-dim":
            reports.append(bounds.check_ruzsa_dim(a, b))
        else:
            if not args.direction:
                raise _UsageError("gs requires --direction")
            reports.append(bounds.check_gs(a, b, _parse_point(args.direction)))
    elif name == "lin-product":
        if not (args.a1 and args.a2):
            raise _UsageError("lin-product requires --a1 and --a2")
        m = _require_single_map(args)
        reports.append(
            bounds.check_lin_product(
                run.read_points(args.a1), run.read_points(args.a2), m
            )
        )
    else:  # pragma: no cover - parser restricts choices
        raise _UsageError(f"unhandled inequality {name}")

    for rep in reports:
        print(rep.to_json_line())
    if args.summary:
        slacks = sorted(Fraction(r.slack) for r in reports)
        hist = {}
        for s in slacks:
            hist[s] = hist.get(s, 0) + 1
        print(f"# summary inequality={name} count={len(reports)}")
        print(f"# slack min={slacks[0]} max={slacks[-1]}")
        print("# histogram slack count")
        for s in sorted(hist):
            print(f"{s} {hist[s]}")
    return 0


def cmd_decompose(args, run: _Run) -> int:
    a = run.read_points(args.input)
    if args.mode == "lines":
        dec = structure.sqrt_cutoff_decompose(a)
        run.emit_text(structure.decomposition_to_text(dec), args.output)
    else:
        if not args.map_text:
            raise _UsageError("decompose --mode grid requires --map")
        gp = structure.grid_profile(a, _parse_map(args.map_text))
        run.emit_text(structure.grid_profile_to_text(gp), args.output)
    return 0


def cmd_search(args, run: _Run) -> int:
    if (args.n is None) == (args.n_range is None):
        raise _UsageError("search requires exactly one of --n or --n-range")
    if args.n_range is not None:
        lo, sep, hi = args.n_range.partition(":")
        if not sep or not lo.isdigit() or not hi.isdigit():
            raise _UsageError(f"bad --n-range {args.n_range!r}, expected a:b")
        ns = list(range(int(lo), int(hi) + 1))
    else:
        ns = [args.n]
    if (args.q is None or args.s is None) == (args.map_text is None):
        raise _UsageError("search requires either --q/--s or --map")
    if args.map_text is not None:
        objective = TransformObjective(_parse_map(args.map_text))
        label = f"transform:{args.map_text}"
    else:
        objective = DilateSumObjective(args.q, args.s)
        label = f"dilate:{args.q},{args.s}"

    constraint = "full-dimensional" if args.full_dimensional else "none"
    lines = [
        f"# sumsets search dim={args.dim} box={args.box} objective={label} "
        f"constraint={constraint} budget={args.budget}",
        "# columns: n min_value main_term slack nodes classes witnesses",
    ]
    witness_files = []
    for n in ns:
        spec = SearchSpec(
            dim=args.dim,
            box_side=args.box,
            n=n,
            objective=objective,
            full_dimensional=args.full_dimensional,
            node_budget=args.budget,
            witness_cap=args.witness_cap,
            split_depth=args.split_depth,
        )
        res = search.minimize(spec, threads=args.threads)
        main_term = objective.main_term(n, args.dim)
        lines.append(
            f"{n} {res.min_value} {main_term} {res.min_value - main_term} "
            f"{res.nodes_explored} {res.canonical_classes} {len(res.witnesses)}"
        )
        print(f"n={n}: {res.runtime_ms} ms", file=sys.stderr)
        if args.witness_dir:
            outdir = Path(args.witness_dir)
            outdir.mkdir(parents=True, exist_ok=True)
            for i, w in enumerate(res.witnesses):
                witness_files.append((outdir / f"n{n}_w{i}.pts", w))

    print("\n".join(lines))
    for path, w in witness_files:
        pio.write_points(w, path, comments=run.header())
        run.outputs[str(path)] = _digest_file(path)
    return 0


_HANDLERS = {
    "generate": cmd_generate,
    "sumset": cmd_sumset,
    "verify": cmd_verify,
    "decompose": cmd_decompose,
    "search": cmd_search,
}


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    run = _Run(argv)
    try:
        args = parser.parse_args(argv)
        code = _HANDLERS[args.command](args, run)
        run.write_manifest()
        return code
    except _UsageError as err:
        print(f"usage error: {err}", file=sys.stderr)
        return 1
    except InequalityViolation as err:
        print(err.report.to_json_line())
        print(f"VIOLATION: {err}", file=sys.stderr)
        return 2
    except (
        HypothesisViolation,
        ParseError,
        DimensionMismatch,
        EmptyOperand,
        BudgetExceeded,
        InfeasibleSpec,
        ValueError,
    ) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
