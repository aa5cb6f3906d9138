"""File formats and filtration ingestion for the command-line pipeline.

All formats are line-oriented structured text with explicit dimension
headers, rational literals (``7``, ``3/2``) and ``inf`` for the infinite
death.  Matrices are written one row per line.  Parsers report positioned
errors; serializers round-trip exactly.
"""

from __future__ import annotations

from tamechain.chaincx import ChainComplex, ChainMap
from tamechain.decomp import BettiDiagram
from tamechain.exactlin import FieldMatrix, check_prime
from tamechain.params import INFINITY, Param, param
from tamechain.tamecat import TameComplex, TameMap
from tamechain.zigzag import DiscreteZigzag, Profile


class FormatError(ValueError):
    """A parse or validation error with a 1-based line position."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line
        self.message = message


class _Cursor:
    """Token-line reader skipping blanks and # comments."""

    def __init__(self, text: str):
        self.rows = []
        for i, raw in enumerate(text.splitlines(), start=1):
            stripped = raw.strip()
            if not stripped or stripped.startswith("#"):
                continue
            self.rows.append((i, stripped.split()))
        self.pos = 0

    def done(self) -> bool:
        return self.pos >= len(self.rows)

    def peek(self):
        if self.done():
            return None
        return self.rows[self.pos][1]

    def line(self) -> int:
        if self.done():
            return self.rows[-1][0] if self.rows else 1
        return self.rows[self.pos][0]

    def next(self):
        row = self.peek()
        if row is None:
            raise FormatError(self.line(), "unexpected end of file")
        self.pos += 1
        return row

    def fail(self, message: str):
        raise FormatError(self.line(), message)


def _parse_int(cur: _Cursor, token: str, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        cur.fail(f"expected an integer {what}, got {token!r}")


def _parse_param(cur: _Cursor, token: str) -> Param:
    try:
        return Param.parse(token)
    except ValueError as exc:
        cur.fail(str(exc))


def _read_header(cur: _Cursor, kind: str):
    row = cur.next()
    if row[:1] != ["format"] or len(row) != 3 or row[1] != kind or row[2] != "v1":
        cur.fail(f"expected header 'format {kind} v1'")


def _read_field(cur: _Cursor) -> int:
    row = cur.next()
    if row[:1] != ["field"] or len(row) != 2:
        cur.fail("expected 'field <prime>'")
    p = _parse_int(cur, row[1], "field modulus")
    try:
        check_prime(p)
    except ValueError as exc:
        cur.fail(str(exc))
    return p


def _read_matrix(cur: _Cursor, rows: int, cols: int, p: int) -> FieldMatrix:
    ent = []
    for _ in range(rows if cols else 0):
        row = cur.next()
        if len(row) != cols:
            cur.fail(f"expected a matrix row with {cols} entries, got {len(row)}")
        for t in row:
            ent.append(_parse_int(cur, t, "matrix entry"))
    if cols == 0:
        ent = []
    return FieldMatrix(rows, cols, ent + [0] * (rows * cols - len(ent)), p)


def _read_complex_block(cur: _Cursor, p: int):
    """dims line plus diff blocks; returns (dims, diffs-dict)."""
    row = cur.next()
    if row[:1] != ["dims"]:
        cur.fail("expected 'dims ...'")
    dims = [_parse_int(cur, t, "dimension") for t in row[1:]]
    diffs = {}
    while not cur.done() and cur.peek()[:1] == ["diff"]:
        row = cur.next()
        if len(row) != 4:
            cur.fail("expected 'diff <degree> <rows> <cols>'")
        n = _parse_int(cur, row[1], "degree")
        r = _parse_int(cur, row[2], "row count")
        c = _parse_int(cur, row[3], "column count")
        diffs[n] = _read_matrix(cur, r, c, p)
    return dims, diffs


def _complex_from_block(cur: _Cursor, dims, diffs, p: int, where: str) -> ChainComplex:
    mats = []
    for n in range(max(len(dims) - 1, 0)):
        want = (dims[n], dims[n + 1])
        m = diffs.pop(n, FieldMatrix.zeros(want[0], want[1], p))
        if (m.rows, m.cols) != want:
            cur.fail(f"{where}: differential {n} has shape {m.rows}x{m.cols}, "
                     f"expected {want[0]}x{want[1]}")
        mats.append(m)
    if diffs:
        cur.fail(f"{where}: differential degree {min(diffs)} out of range")
    try:
        return ChainComplex(dims, mats, p)
    except ValueError as exc:
        cur.fail(f"{where}: {exc}")


def _read_map_block(cur: _Cursor, keyword: str, p: int):
    comps = {}
    while not cur.done() and cur.peek()[:1] == [keyword]:
        row = cur.next()
        if len(row) != 4:
            cur.fail(f"expected '{keyword} <degree> <rows> <cols>'")
        n = _parse_int(cur, row[1], "degree")
        r = _parse_int(cur, row[2], "row count")
        c = _parse_int(cur, row[3], "column count")
        comps[n] = _read_matrix(cur, r, c, p)
    return comps


def _map_from_block(cur: _Cursor, src: ChainComplex, tgt: ChainComplex, comps,
                    where: str) -> ChainMap:
    mats = []
    for n in range(max(src.top, tgt.top)):
        want = (tgt.dim(n), src.dim(n))
        m = comps.pop(n, FieldMatrix.zeros(want[0], want[1], src.p))
        if (m.rows, m.cols) != want:
            cur.fail(f"{where}: component {n} has shape {m.rows}x{m.cols}, "
                     f"expected {want[0]}x{want[1]}")
        mats.append(m)
    if comps:
        cur.fail(f"{where}: component degree {min(comps)} out of range")
    try:
        return ChainMap(src, tgt, mats)
    except ValueError as exc:
        cur.fail(f"{where}: {exc}")


# -- tame complexes ------------------------------------------------------------


def serialize_tame(x: TameComplex) -> str:
    out = ["format tame-complex v1", f"field {x.p}",
           "grid " + " ".join(str(t) for t in x.grid)]
    for a, v in enumerate(x.values):
        out.append(f"value {a}")
        out.append("dims" + ("".join(f" {d}" for d in v.dims)))
        for n in range(max(len(v.dims) - 1, 0)):
            d = v.diff(n)
            out.append(f"diff {n} {d.rows} {d.cols}")
            if d.rows * d.cols:
                for i in range(d.rows):
                    out.append(" ".join(str(e) for e in d.row_entries(i)))
    for a in range(1, len(x.grid)):
        out.append(f"transition {a}")
        t = x.transitions[a - 1]
        for n in range(max(t.source.top, t.target.top)):
            c = t.component(n)
            out.append(f"component {n} {c.rows} {c.cols}")
            if c.rows * c.cols:
                for i in range(c.rows):
                    out.append(" ".join(str(e) for e in c.row_entries(i)))
    return "\n".join(out) + "\n"


def parse_tame(text: str) -> TameComplex:
    cur = _Cursor(text)
    _read_header(cur, "tame-complex")
    p = _read_field(cur)
    row = cur.next()
    if row[:1] != ["grid"] or len(row) < 2:
        cur.fail("expected 'grid <t0> <t1> ...'")
    grid = [_parse_param(cur, t) for t in row[1:]]
    values = []
    for a in range(len(grid)):
        row = cur.next()
        if row != ["value", str(a)]:
            cur.fail(f"expected 'value {a}'")
        dims, diffs = _read_complex_block(cur, p)
        values.append(_complex_from_block(cur, dims, diffs, p, f"value {a}"))
    transitions = []
    for a in range(1, len(grid)):
        row = cur.next()
        if row != ["transition", str(a)]:
            cur.fail(f"expected 'transition {a}'")
        comps = _read_map_block(cur, "component", p)
        transitions.append(_map_from_block(cur, values[a - 1], values[a], comps,
                                           f"transition {a}"))
    if not cur.done():
        cur.fail("trailing content after the tame complex")
    try:
        return TameComplex(grid, values, transitions)
    except ValueError as exc:
        raise FormatError(cur.line(), str(exc)) from exc


# -- tame maps -------------------------------------------------------------------


def serialize_tame_map(g: TameMap) -> str:
    out = ["format tame-map v1", f"field {g.p}",
           "grid " + " ".join(str(t) for t in g.grid)]
    for a, cm in enumerate(g.components):
        out.append(f"component {a}")
        for n in range(max(cm.source.top, cm.target.top)):
            c = cm.component(n)
            out.append(f"matrix {n} {c.rows} {c.cols}")
            if c.rows * c.cols:
                for i in range(c.rows):
                    out.append(" ".join(str(e) for e in c.row_entries(i)))
    return "\n".join(out) + "\n"


def parse_tame_map(text: str, source: TameComplex, target: TameComplex) -> TameMap:
    cur = _Cursor(text)
    _read_header(cur, "tame-map")
    p = _read_field(cur)
    if p != source.p or p != target.p:
        cur.fail(f"map field {p} does not match the complexes")
    row = cur.next()
    if row[:1] != ["grid"]:
        cur.fail("expected 'grid <t0> <t1> ...'")
    grid = tuple(_parse_param(cur, t) for t in row[1:])
    if grid != source.grid or grid != target.grid:
        cur.fail("map grid must equal the source and target grids")
    comps = []
    for a in range(len(grid)):
        row = cur.next()
        if row != ["component", str(a)]:
            cur.fail(f"expected 'component {a}'")
        block = _read_map_block(cur, "matrix", p)
        comps.append(_map_from_block(cur, source.values[a], target.values[a],
                                     block, f"component {a}"))
    if not cur.done():
        cur.fail("trailing content after the tame map")
    try:
        return TameMap(source, target, comps)
    except ValueError as exc:
        raise FormatError(cur.line(), str(exc)) from exc


# -- zigzags ---------------------------------------------------------------------


def serialize_zigzag(z: DiscreteZigzag) -> str:
    out = ["format zigzag v1", f"field {z.p}",
           "profile " + " ".join(z.profile.directions)]
    for a, v in enumerate(z.spaces):
        out.append(f"space {a}")
        out.append("dims" + ("".join(f" {d}" for d in v.dims)))
        for n in range(max(len(v.dims) - 1, 0)):
            d = v.diff(n)
            out.append(f"diff {n} {d.rows} {d.cols}")
            if d.rows * d.cols:
                for i in range(d.rows):
                    out.append(" ".join(str(e) for e in d.row_entries(i)))
    for a in range(1, z.k + 1):
        out.append(f"map {a}")
        m = z.maps[a - 1]
        for n in range(max(m.source.top, m.target.top)):
            c = m.component(n)
            out.append(f"component {n} {c.rows} {c.cols}")
            if c.rows * c.cols:
                for i in range(c.rows):
                    out.append(" ".join(str(e) for e in c.row_entries(i)))
    return "\n".join(out) + "\n"


def parse_zigzag(text: str) -> DiscreteZigzag:
    cur = _Cursor(text)
    _read_header(cur, "zigzag")
    p = _read_field(cur)
    row = cur.next()
    if row[:1] != ["profile"] or len(row) < 2:
        cur.fail("expected 'profile r|l ...'")
    try:
        profile = Profile(row[1:])
    except ValueError as exc:
        cur.fail(str(exc))
    spaces = []
    for a in range(profile.k + 1):
        row = cur.next()
        if row != ["space", str(a)]:
            cur.fail(f"expected 'space {a}'")
        dims, diffs = _read_complex_block(cur, p)
        spaces.append(_complex_from_block(cur, dims, diffs, p, f"space {a}"))
    maps = []
    for a in range(1, profile.k + 1):
        row = cur.next()
        if row != ["map", str(a)]:
            cur.fail(f"expected 'map {a}'")
        comps = _read_map_block(cur, "component", p)
        if profile.directions[a - 1] == "r":
            src, tgt = spaces[a - 1], spaces[a]
        else:
            src, tgt = spaces[a], spaces[a - 1]
        maps.append(_map_from_block(cur, src, tgt, comps, f"map {a}"))
    if not cur.done():
        cur.fail("trailing content after the zigzag")
    try:
        return DiscreteZigzag(profile, spaces, maps)
    except ValueError as exc:
        raise FormatError(cur.line(), str(exc)) from exc


# -- diagrams ---------------------------------------------------------------------


def serialize_diagrams(diagrams, fmt: str = "structured") -> str:
    if fmt == "csv":
        out = ["degree,birth,death,multiplicity,diagonal"]
        for n, d in enumerate(diagrams):
            for (s, e), mult in d.points():
                out.append(f"{n},{s},{e},{mult},{1 if s == e else 0}")
        return "\n".join(out) + "\n"
    if fmt != "structured":
        raise ValueError(f"unknown diagram format {fmt!r}")
    out = ["format betti-diagrams v1"]
    for n, d in enumerate(diagrams):
        out.append(f"degree {n}")
        for (s, e), mult in d.points():
            out.append(f"point {s} {e} {mult}")
    return "\n".join(out) + "\n"


def parse_diagrams(text: str) -> list:
    cur = _Cursor(text)
    _read_header(cur, "betti-diagrams")
    out = []
    while not cur.done():
        row = cur.next()
        if row[:1] != ["degree"] or len(row) != 2:
            cur.fail("expected 'degree <n>'")
        n = _parse_int(cur, row[1], "degree")
        if n != len(out):
            cur.fail(f"expected degree {len(out)}")
        counts = {}
        while not cur.done() and cur.peek()[:1] == ["point"]:
            row = cur.next()
            if len(row) != 4:
                cur.fail("expected 'point <birth> <death> <multiplicity>'")
            s = _parse_param(cur, row[1])
            e = _parse_param(cur, row[2])
            mult = _parse_int(cur, row[3], "multiplicity")
            if (s, e) in counts:
                cur.fail(f"duplicate point ({s}, {e})")
            counts[(s, e)] = mult
        try:
            out.append(BettiDiagram(counts))
        except ValueError as exc:
            cur.fail(str(exc))
    return out


# -- filtrations --------------------------------------------------------------------


def parse_filtration(text: str) -> list:
    """Records (vertex tuple, filtration Param), in file order."""
    cur = _Cursor(text)
    _read_header(cur, "filtration")
    records = []
    while not cur.done():
        row = cur.next()
        if len(row) < 2:
            cur.fail("expected '<filtration> <v0> [v1 ...]'")
        filt = _parse_param(cur, row[0])
        if filt.is_infinite:
            cur.fail("filtration values must be finite")
        verts = tuple(_parse_int(cur, t, "vertex id") for t in row[1:])
        if any(v < 0 for v in verts):
            cur.fail("vertex ids must be non-negative")
        if list(verts) != sorted(set(verts)):
            cur.fail(f"simplex {verts} is not a sorted duplicate-free vertex list")
        records.append((verts, filt))
    return records


def serialize_filtration(records) -> str:
    out = ["format filtration v1"]
    for verts, filt in records:
        out.append(f"{filt} " + " ".join(str(v) for v in verts))
    return "\n".join(out) + "\n"


class IngestError(ValueError):
    """A filtration violates the face-before-coface discipline."""


def ingest_filtration(records, p: int) -> TameComplex:
    """Build the parametrised simplicial chain complex of a filtration.

    The grid consists of the distinct filtration values with 0 prepended;
    the value at each grid point is the chain complex of the simplices
    present, with the alternating-sign face convention; transitions are the
    basis-aligned subcomplex inclusions, so the result is cofibrant.
    """
    check_prime(p)
    times = {}
    for verts, filt in records:
        if verts in times:
            raise IngestError(f"simplex {list(verts)} appears twice")
        times[verts] = filt
    for verts, filt in times.items():
        if len(verts) == 1:
            continue
        for i in range(len(verts)):
            face = verts[:i] + verts[i + 1:]
            if face not in times:
                raise IngestError(
                    f"simplex {list(verts)} at {filt} is missing its face {list(face)}")
            if filt < times[face]:
                raise IngestError(
                    f"simplex {list(verts)} at {filt} appears before its face "
                    f"{list(face)} at {times[face]}")
    grid = sorted({param(0)} | set(times.values()))
    by_dim = {}
    for verts in times:
        by_dim.setdefault(len(verts) - 1, []).append(verts)
    for dim in by_dim:
        by_dim[dim].sort(key=lambda v: (times[v], v))
    top = max(by_dim) + 1 if by_dim else 0

    def counts_at(t):
        return [sum(1 for v in by_dim.get(n, []) if times[v] <= t)
                for n in range(top)]

    values = []
    for t in grid:
        dims = counts_at(t)
        diffs = []
        for n in range(max(len(dims) - 1, 0)):
            rows_idx = {v: i for i, v in enumerate(by_dim.get(n, [])[:dims[n]])}
            ent = [0] * (dims[n] * dims[n + 1])
            for j, simplex in enumerate(by_dim.get(n + 1, [])[:dims[n + 1]]):
                for i in range(len(simplex)):
                    face = simplex[:i] + simplex[i + 1:]
                    ent[rows_idx[face] * dims[n + 1] + j] = (-1) ** i % p
            diffs.append(FieldMatrix(dims[n], dims[n + 1], ent, p))
        values.append(ChainComplex(dims, diffs, p))
    transitions = []
    for a in range(1, len(grid)):
        prev, curv = values[a - 1], values[a]
        comps = []
        for n in range(max(prev.top, curv.top)):
            ent = [0] * (curv.dim(n) * prev.dim(n))
            for j in range(prev.dim(n)):
                ent[j * prev.dim(n) + j] = 1
            comps.append(FieldMatrix(curv.dim(n), prev.dim(n), ent, p))
        transitions.append(ChainMap(prev, curv, comps))
    return TameComplex(grid, values, transitions)


# -- format detection ----------------------------------------------------------------


KNOWN_FORMATS = ("tame-complex", "tame-map", "zigzag", "betti-diagrams", "filtration")


def detect_format(text: str) -> str:
    cur = _Cursor(text)
    row = cur.peek()
    if not row or row[:1] != ["format"] or len(row) != 3 or row[2] != "v1":
        raise FormatError(cur.line() if row else 1,
                          "missing 'format <kind> v1' header")
    kind = row[1]
    if kind not in KNOWN_FORMATS:
        raise FormatError(cur.line(), f"unknown format {kind!r}")
    return kind
