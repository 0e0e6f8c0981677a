"""Command line entry point.

Output lines are ``key=value``.  Exit codes: 0 success, 1 bad usage or
input, 2 decoder failure (``decode`` only).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from .decoders import BoundaryDecoder, PeriodicDecoder
from .lattice import LatticeError, build_boundary_slab, build_cubic_torus, validate
from .latticefile import dumps, loads
from .sim import DecoderOptions, default_threads, run_sweep
from .stabilizer import classify_zero_syndrome, logical_basis, syndrome

MAX_SIDE = 64
THREADS_ENV = "TORIC3D_THREADS"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _ints(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def parse_ps(text: str) -> list[float]:
    """``a:b:step`` (inclusive) or a comma list."""
    try:
        if ":" in text:
            a, b, step = (float(t) for t in text.split(":"))
            if step <= 0:
                raise ValueError
            count = int(round((b - a) / step))
            if a + count * step > b + 1e-9:
                count -= 1
            return [round(a + i * step, 6) for i in range(count + 1)]
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad probability list {text!r}")


def read_ids(path: str) -> list[int]:
    """One id per line; ``#`` starts a comment."""
    ids = []
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            ids.append(int(line))
        except ValueError:
            raise UsageError(f"{path}:{lineno}: expected an integer id, got {line!r}")
    return ids


def _emit(**pairs) -> None:
    for k, v in pairs.items():
        print(f"{k}={v}")


def _ids_text(ids) -> str:
    return ",".join(map(str, ids))


def _build(family: str, dims: list[int]):
    if len(dims) == 1:
        dims = dims * 3
    if len(dims) != 3:
        raise UsageError("--size takes L or Lx,Ly,Lz")
    if any(d > MAX_SIDE for d in dims):
        raise UsageError(f"sides above {MAX_SIDE} are refused")
    if family == "cubic-torus":
        if len(set(dims)) != 1:
            raise UsageError("cubic-torus takes a single side length")
        return build_cubic_torus(dims[0])
    if family == "slab":
        return build_boundary_slab(*dims)
    return build_boundary_slab(*dims, rough_axes=(0, 1))


def cmd_gen_lattice(args) -> int:
    c = _build(args.family, args.size)
    text = dumps(c)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    partial = sum(1 for e in range(c.n_edges) if c.is_partial(e))
    out = sys.stderr if not args.out else sys.stdout
    for k, v in dict(
        family=args.family,
        vertices=c.n_vertices,
        edges=c.n_edges,
        partial_edges=partial,
        faces=c.n_faces,
        volumes=c.n_volumes,
        out=args.out or "-",
    ).items():
        print(f"{k}={v}", file=out)
    return 0


def cmd_validate(args) -> int:
    c = loads(Path(args.lattice).read_text(), check=False)
    problems = validate(c)
    _emit(
        faces=c.n_faces,
        volumes=c.n_volumes,
        periodic=str(c.periodic).lower(),
        l1="verified" if c.l1_verified else "unverified",
        violations=len(problems),
    )
    for v in problems:
        print(f"violation kind={v.kind} cells={_ids_text(v.cells)} message={v.message}")
    return 1 if problems else 0


def cmd_decode(args) -> int:
    c = loads(Path(args.lattice).read_text())
    mode = args.mode or ("periodic" if c.periodic else "boundary")
    if (mode == "periodic") != c.periodic:
        raise UsageError(f"{mode} mode does not match a {'periodic' if c.periodic else 'non-periodic'} lattice")
    error = None
    try:
        if args.error:
            error = c.face_set(read_ids(args.error))
            s = syndrome(c, error)
        else:
            s = c.edge_set(read_ids(args.syndrome))
    except ValueError as exc:
        raise UsageError(str(exc))
    if mode == "periodic":
        fallback = bool(args.gf2_fallback)
        decoder = PeriodicDecoder(c, estimator=args.estimator, retries=args.retries, gf2_fallback=fallback)
    else:
        fallback = True if args.gf2_fallback is None else args.gf2_fallback
        decoder = BoundaryDecoder(c, gf2_fallback=fallback)
    outcome = decoder.decode(s)
    report = outcome.to_dict()
    report["mode"] = mode
    report["syndrome_weight"] = len(s)
    if error is not None and outcome.success:
        try:
            report["residual"] = str(classify_zero_syndrome(c, logical_basis(c), error ^ outcome.estimate))
        except LatticeError as exc:
            report["residual"] = f"unknown ({exc})"
    if args.json:
        print(json.dumps(report, sort_keys=True))
    else:
        _emit(
            status=report["status"],
            mode=mode,
            syndrome_weight=report["syndrome_weight"],
            estimate_weight=len(outcome.estimate),
            estimate=_ids_text(report["estimate"]),
        )
        if "residual" in report:
            _emit(residual=report["residual"])
    return 0 if outcome.success else 2


def cmd_simulate(args) -> int:
    options = DecoderOptions(args.estimator, args.retries, args.gf2_fallback)
    threads = args.threads if args.threads is not None else default_threads()
    if threads < 1:
        raise UsageError("--threads must be positive")
    if args.trials < 1 or args.max_logical < 1:
        raise UsageError("--trials and --max-logical must be positive")
    if any(not 0 <= p <= 1 for p in args.ps):
        raise UsageError("probabilities must lie in [0, 1]")
    if args.lattice:
        text = Path(args.lattice).read_text()
        c = loads(text)
        family = c.family.name if c.family else "file"
        sizes = [c.family.dims[0] if c.family else 0]
    else:
        text = None
        family = args.family
        sizes = args.sizes
        if any(L > MAX_SIDE for L in sizes):
            raise UsageError(f"sides above {MAX_SIDE} are refused")
    report = run_sweep(
        family, sizes, args.ps, seed=args.seed, max_trials=args.trials, max_logical=args.max_logical,
        options=options, threads=threads, lattice_text=text,
    )
    timing = not args.no_timing
    csv_text = report.to_csv(timing)
    if args.out:
        out = Path(args.out)
        out.write_text(csv_text)
        out.with_suffix(".json").write_text(report.to_json(timing))
    for row in report.rows:
        print(
            f"L={row.L} p={row.p:.6g} trials={row.trials} logical_failures={row.failures} "
            f"decode_failures={row.decode_failures} logical_rate={row.logical_rate:.6g} stderr={row.stderr:.6g}"
        )
    if args.out:
        _emit(csv=args.out, json=str(Path(args.out).with_suffix(".json")))
    else:
        sys.stdout.write(csv_text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="toric3d", description="Bit-flip decoding for 3D toric codes.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen-lattice", help="write a built-in lattice in lattice3d format")
    g.add_argument("--family", choices=("cubic-torus", "slab", "rough-slab"), required=True)
    g.add_argument("--size", type=_ints, required=True, help="L or Lx,Ly,Lz")
    g.add_argument("--out", help="output path (stdout when omitted)")
    g.set_defaults(func=cmd_gen_lattice)

    v = sub.add_parser("validate", help="check a lattice file")
    v.add_argument("--lattice", required=True)
    v.set_defaults(func=cmd_validate)

    d = sub.add_parser("decode", help="decode one syndrome")
    d.add_argument("--lattice", required=True)
    src = d.add_mutually_exclusive_group(required=True)
    src.add_argument("--syndrome", help="file of edge ids")
    src.add_argument("--error", help="file of face ids; its syndrome is decoded")
    d.add_argument("--mode", choices=("boundary", "periodic"))
    d.add_argument("--estimator", choices=("cubic", "general"), default="cubic")
    d.add_argument("--retries", type=int, default=1)
    d.add_argument("--gf2-fallback", dest="gf2_fallback", action="store_true", default=None)
    d.add_argument("--no-gf2-fallback", dest="gf2_fallback", action="store_false")
    d.add_argument("--json", action="store_true")
    d.set_defaults(func=cmd_decode)

    s = sub.add_parser("simulate", help="Monte Carlo logical error rates")
    which = s.add_mutually_exclusive_group()
    which.add_argument("--family", choices=("cubic-torus", "slab", "rough-slab"), default="cubic-torus")
    which.add_argument("--lattice", help="lattice file instead of a family")
    s.add_argument("--sizes", type=_ints, default=[4, 6, 8])
    s.add_argument("--ps", type=parse_ps, default=parse_ps("0.105:0.135:0.005"))
    s.add_argument("--trials", type=int, default=100_000, help="maximum trials per point")
    s.add_argument("--max-logical", type=int, default=300, help="stop a point after this many failures")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", help="CSV path; a JSON summary is written beside it")
    s.add_argument("--threads", type=int, default=None, help=f"worker processes (default ${THREADS_ENV} or 1)")
    s.add_argument("--estimator", choices=("cubic", "general"), default="cubic")
    s.add_argument("--retries", type=int, default=1)
    s.add_argument("--gf2-fallback", dest="gf2_fallback", action="store_true", default=None)
    s.add_argument("--no-timing", action="store_true", help="leave mean_decode_ms empty for reproducible output")
    s.set_defaults(func=cmd_simulate)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, LatticeError, OSError, ValueError) as exc:
        print(f"error={exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
