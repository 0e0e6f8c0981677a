"""Line-oriented text format for lattices (``lattice3d v1``).

::

    lattice3d v1
    vertices 8
    periodic true
    edge 0 0 1          # one endpoint => partial edge
    face 0 0 4 1 7
    volume 0 0 1 2 3 4 5
    xlogical 0 3 6 9    # optional, one line per logical qubit
    zlogical 0 12 24    # optional, paired with the xlogical lines in order

Records may appear in any order but ids of each kind must be dense and
ascending.  Blank lines and ``#`` comments are ignored.  An optional
``family <name> <Lx> <Ly> <Lz> [rough <axes...>]`` record names the builder
that produced the file; it is honoured only when rebuilding that family
reproduces the file's incidence structure exactly.
"""

from __future__ import annotations

from pathlib import Path

from .lattice import ChainComplex3, Family, LatticeError, Violation, rebuild_family, validate

HEADER = "lattice3d v1"


class LatticeParseError(LatticeError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        where = f"line {line}: " if line is not None else ""
        super().__init__(where + message)


class LatticeValidationError(LatticeError):
    def __init__(self, violations: list[Violation]):
        self.violations = violations
        shown = "; ".join(str(v) for v in violations[:10])
        more = f" (+{len(violations) - 10} more)" if len(violations) > 10 else ""
        super().__init__(f"lattice failed validation: {shown}{more}")


def _ints(tokens: list[str], lineno: int) -> list[int]:
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise LatticeParseError(f"expected integers, got {' '.join(tokens)!r}", lineno) from None


def dumps(c: ChainComplex3) -> str:
    lines = [HEADER, f"vertices {c.vertex_count}", f"periodic {'true' if c.periodic else 'false'}"]
    if c.family is not None:
        fam = c.family
        rec = f"family {fam.name} {fam.dims[0]} {fam.dims[1]} {fam.dims[2]}"
        if fam.rough_axes:
            rec += " rough " + " ".join(map(str, fam.rough_axes))
        lines.append(rec)
    lines.extend(f"edge {i} " + " ".join(map(str, ends)) for i, ends in enumerate(c.edges))
    lines.extend(f"face {i} " + " ".join(map(str, bd)) for i, bd in enumerate(c.faces))
    lines.extend(f"volume {i} " + " ".join(map(str, bd)) for i, bd in enumerate(c.volumes))
    lines.extend("xlogical " + " ".join(map(str, r)) for r in c.xlogical)
    lines.extend("zlogical " + " ".join(map(str, r)) for r in c.zlogical)
    return "\n".join(lines) + "\n"


def loads(text: str, check: bool = True) -> ChainComplex3:
    """Parse a lattice document; with ``check`` the result is validated."""
    lines = text.splitlines()
    vertex_count = None
    periodic = False
    family = None
    family_line = None
    cells: dict[str, list] = {"edge": [], "face": [], "volume": []}
    xlog: list[list[int]] = []
    zlog: list[list[int]] = []
    seen_header = False
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if not seen_header:
            if line != HEADER:
                raise LatticeParseError(f"expected header {HEADER!r}, got {line!r}", lineno)
            seen_header = True
            continue
        tok = line.split()
        kind, args = tok[0], tok[1:]
        if kind == "vertices":
            if len(args) != 1:
                raise LatticeParseError("'vertices' takes one count", lineno)
            (vertex_count,) = _ints(args, lineno)
        elif kind == "periodic":
            if args not in (["true"], ["false"]):
                raise LatticeParseError("'periodic' must be true or false", lineno)
            periodic = args[0] == "true"
        elif kind == "family":
            if len(args) < 4:
                raise LatticeParseError("'family' needs a name and three sizes", lineno)
            dims = tuple(_ints(args[1:4], lineno))
            rough: tuple[int, ...] = ()
            if len(args) > 4:
                if args[4] != "rough":
                    raise LatticeParseError(f"unexpected token {args[4]!r} in family record", lineno)
                rough = tuple(_ints(args[5:], lineno))
            family = Family(args[0], dims, rough)
            family_line = lineno
        elif kind in cells:
            if not args:
                raise LatticeParseError(f"'{kind}' record needs an id", lineno)
            ident, *rest = _ints(args, lineno)
            expected = len(cells[kind])
            if ident != expected:
                raise LatticeParseError(f"{kind} id {ident} out of order; expected {expected}", lineno)
            if kind == "edge" and len(rest) not in (1, 2):
                raise LatticeParseError(f"edge {ident} needs one or two endpoints", lineno)
            cells[kind].append(rest)
        elif kind == "xlogical":
            xlog.append(_ints(args, lineno))
        elif kind == "zlogical":
            zlog.append(_ints(args, lineno))
        else:
            raise LatticeParseError(f"unknown record {kind!r}", lineno)
    if not seen_header:
        raise LatticeParseError("empty document")
    if vertex_count is None:
        raise LatticeParseError("missing 'vertices' record")
    if len(xlog) != len(zlog):
        raise LatticeParseError(f"{len(xlog)} xlogical records but {len(zlog)} zlogical records")

    c = ChainComplex3(
        vertex_count, cells["edge"], cells["face"], cells["volume"], periodic=periodic,
        xlogical=xlog, zlogical=zlog,
    )
    if family is not None:
        try:
            ref = rebuild_family(family)
        except LatticeError as exc:
            raise LatticeParseError(str(exc), family_line) from None
        if not ref.same_structure(c):
            raise LatticeParseError("family record does not match the lattice contents", family_line)
        c = ChainComplex3(
            vertex_count, c.edges, c.faces, c.volumes, periodic=periodic, family=family,
            xlogical=xlog, zlogical=zlog,
        )
    if check:
        violations = validate(c)
        if violations:
            raise LatticeValidationError(violations)
    return c


def load_lattice(text: str) -> ChainComplex3:
    return loads(text)


def read_lattice(path: str | Path) -> ChainComplex3:
    return loads(Path(path).read_text())


def write_lattice(c: ChainComplex3, path: str | Path) -> None:
    Path(path).write_text(dumps(c))
