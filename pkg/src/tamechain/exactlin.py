"""Deterministic exact linear algebra over a prime field F_p.

Everything downstream (chain complexes, tame objects, decompositions) is
built on the handful of operations in this module.  All choices are pinned
to the leftmost-pivot elimination of :mod:`tamechain.kernels`, so repeated
runs produce identical bases, sections and quotients.
"""

from __future__ import annotations

from tamechain import kernels


class ExactLinError(ValueError):
    """Raised on dimension mismatches and invalid field configuration."""


_checked_primes: set[int] = set()


def check_prime(p: int) -> int:
    """Validate that ``p`` is a prime usable as the field modulus."""
    if p in _checked_primes:
        return p
    if not isinstance(p, int) or p < 2:
        raise ExactLinError(f"field modulus must be a prime >= 2, got {p!r}")
    d = 2
    while d * d <= p:
        if p % d == 0:
            raise ExactLinError(f"field modulus must be prime, got {p} = {d}*{p // d}")
        d += 1
    _checked_primes.add(p)
    return p


class FieldElement:
    """A residue in [0, p) with field arithmetic mod the prime p."""

    __slots__ = ("value", "p")

    def __init__(self, value: int, p: int):
        check_prime(p)
        self.value = value % p
        self.p = p

    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.p != self.p:
                raise ExactLinError("mixed moduli %d and %d" % (self.p, other.p))
            return other
        return FieldElement(other, self.p)

    def __add__(self, other):
        o = self._coerce(other)
        return FieldElement(self.value + o.value, self.p)

    def __sub__(self, other):
        o = self._coerce(other)
        return FieldElement(self.value - o.value, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        return FieldElement(self.value * o.value, self.p)

    def __neg__(self):
        return FieldElement(-self.value, self.p)

    def inverse(self) -> "FieldElement":
        if self.value == 0:
            raise ZeroDivisionError("0 has no inverse in F_%d" % self.p)
        return FieldElement(pow(self.value, -1, self.p), self.p)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.p == other.p and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.p))

    def __repr__(self):
        return f"FieldElement({self.value}, p={self.p})"


class FieldMatrix:
    """Immutable dense matrix over F_p, row-major, entries reduced mod p."""

    __slots__ = ("rows", "cols", "p", "entries", "_rref")

    def __init__(self, rows: int, cols: int, entries, p: int):
        check_prime(p)
        if rows < 0 or cols < 0:
            raise ExactLinError("negative matrix dimensions")
        ent = tuple(e % p for e in entries)
        if len(ent) != rows * cols:
            raise ExactLinError(
                f"expected {rows * cols} entries for a {rows}x{cols} matrix, got {len(ent)}")
        self.rows = rows
        self.cols = cols
        self.p = p
        self.entries = ent
        self._rref = None

    # -- constructors ------------------------------------------------------

    @classmethod
    def zeros(cls, rows: int, cols: int, p: int) -> "FieldMatrix":
        return cls(rows, cols, (0,) * (rows * cols), p)

    @classmethod
    def identity(cls, n: int, p: int) -> "FieldMatrix":
        ent = [0] * (n * n)
        for i in range(n):
            ent[i * n + i] = 1
        return cls(n, n, ent, p)

    @classmethod
    def from_rows(cls, rows_list, p: int) -> "FieldMatrix":
        rows = len(rows_list)
        cols = len(rows_list[0]) if rows else 0
        flat = []
        for r in rows_list:
            if len(r) != cols:
                raise ExactLinError("ragged rows")
            flat.extend(r)
        return cls(rows, cols, flat, p)

    @classmethod
    def column(cls, values, p: int) -> "FieldMatrix":
        vals = list(values)
        return cls(len(vals), 1, vals, p)

    # -- basic structure ---------------------------------------------------

    def entry(self, i: int, j: int) -> int:
        return self.entries[i * self.cols + j]

    def row_entries(self, i: int) -> tuple:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def col_entries(self, j: int) -> tuple:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def is_zero(self) -> bool:
        return not any(self.entries)

    def is_identity(self) -> bool:
        return self.rows == self.cols and self == FieldMatrix.identity(self.rows, self.p)

    def __eq__(self, other):
        if not isinstance(other, FieldMatrix):
            return NotImplemented
        return (self.rows, self.cols, self.p, self.entries) == \
            (other.rows, other.cols, other.p, other.entries)

    def __hash__(self):
        return hash((self.rows, self.cols, self.p, self.entries))

    def __repr__(self):
        body = "; ".join(" ".join(str(e) for e in self.row_entries(i))
                         for i in range(self.rows))
        return f"FieldMatrix({self.rows}x{self.cols} mod {self.p}: [{body}])"

    # -- arithmetic --------------------------------------------------------

    def _same_field(self, other: "FieldMatrix"):
        if self.p != other.p:
            raise ExactLinError(f"mixed moduli {self.p} and {other.p}")

    def mul(self, other: "FieldMatrix") -> "FieldMatrix":
        self._same_field(other)
        if self.cols != other.rows:
            raise ExactLinError(
                f"cannot compose {self.rows}x{self.cols} with {other.rows}x{other.cols}")
        out = kernels.matmul(self.entries, self.rows, self.cols,
                             other.entries, other.rows, other.cols, self.p)
        return FieldMatrix(self.rows, other.cols, out, self.p)

    __matmul__ = mul

    def add(self, other: "FieldMatrix") -> "FieldMatrix":
        self._same_field(other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ExactLinError("shape mismatch in add")
        p = self.p
        return FieldMatrix(self.rows, self.cols,
                           [(a + b) % p for a, b in zip(self.entries, other.entries)], p)

    def sub(self, other: "FieldMatrix") -> "FieldMatrix":
        return self.add(other.neg())

    def neg(self) -> "FieldMatrix":
        p = self.p
        return FieldMatrix(self.rows, self.cols, [(-a) % p for a in self.entries], p)

    def scale(self, c: int) -> "FieldMatrix":
        p = self.p
        c %= p
        return FieldMatrix(self.rows, self.cols, [a * c % p for a in self.entries], p)

    def transpose(self) -> "FieldMatrix":
        ent = [0] * (self.rows * self.cols)
        for i in range(self.rows):
            for j in range(self.cols):
                ent[j * self.rows + i] = self.entries[i * self.cols + j]
        return FieldMatrix(self.cols, self.rows, ent, self.p)

    # -- block assembly ----------------------------------------------------

    def hstack(self, other: "FieldMatrix") -> "FieldMatrix":
        self._same_field(other)
        if self.rows != other.rows:
            raise ExactLinError("hstack row mismatch")
        ent = []
        for i in range(self.rows):
            ent.extend(self.row_entries(i))
            ent.extend(other.row_entries(i))
        return FieldMatrix(self.rows, self.cols + other.cols, ent, self.p)

    def vstack(self, other: "FieldMatrix") -> "FieldMatrix":
        self._same_field(other)
        if self.cols != other.cols:
            raise ExactLinError("vstack column mismatch")
        return FieldMatrix(self.rows + other.rows, self.cols,
                           self.entries + other.entries, self.p)

    @classmethod
    def block(cls, grid, p: int) -> "FieldMatrix":
        """Assemble a matrix from a 2-d grid of blocks with matching sizes."""
        rows = []
        for brow in grid:
            acc = brow[0]
            for b in brow[1:]:
                acc = acc.hstack(b)
            rows.append(acc)
        acc = rows[0]
        for r in rows[1:]:
            acc = acc.vstack(r)
        if acc.p != p:
            raise ExactLinError("block modulus mismatch")
        return acc

    @classmethod
    def block_diag(cls, blocks, p: int) -> "FieldMatrix":
        rows = sum(b.rows for b in blocks)
        cols = sum(b.cols for b in blocks)
        ent = [0] * (rows * cols)
        r0 = c0 = 0
        for b in blocks:
            for i in range(b.rows):
                base = (r0 + i) * cols + c0
                ent[base:base + b.cols] = b.row_entries(i)
            r0 += b.rows
            c0 += b.cols
        return cls(rows, cols, ent, p)

    def take_columns(self, idx) -> "FieldMatrix":
        ent = []
        for i in range(self.rows):
            base = i * self.cols
            for j in idx:
                ent.append(self.entries[base + j])
        return FieldMatrix(self.rows, len(idx), ent, self.p)

    def take_rows(self, idx) -> "FieldMatrix":
        ent = []
        for i in idx:
            ent.extend(self.row_entries(i))
        return FieldMatrix(len(idx), self.cols, ent, self.p)


# -- elimination-backed operations ----------------------------------------


def rref(m: FieldMatrix):
    """Reduced row echelon form.

    Returns ``(reduced, pivots, transform)`` with ``transform`` invertible,
    ``transform @ m == reduced`` and strictly increasing pivot columns.
    """
    if m._rref is None:
        red, piv, tr = kernels.rref(m.entries, m.rows, m.cols, m.p)
        m._rref = (FieldMatrix(m.rows, m.cols, red, m.p), tuple(piv),
                   FieldMatrix(m.rows, m.rows, tr, m.p))
    return m._rref


def rank(m: FieldMatrix) -> int:
    return len(rref(m)[1])


def kernel_basis(m: FieldMatrix) -> FieldMatrix:
    """Columns spanning ker(m); one column per non-pivot column of m."""
    red, piv, _ = rref(m)
    free = [j for j in range(m.cols) if j not in set(piv)]
    ent = [0] * (m.cols * len(free))
    for k, j in enumerate(free):
        ent[j * len(free) + k] = 1
        for r, pc in enumerate(piv):
            ent[pc * len(free) + k] = (-red.entry(r, j)) % m.p
    return FieldMatrix(m.cols, len(free), ent, m.p)


def image_basis(m: FieldMatrix) -> FieldMatrix:
    """The pivot columns of m itself: a subset-echelon basis of im(m)."""
    _, piv, _ = rref(m)
    return m.take_columns(piv)


def solve(a: FieldMatrix, b: FieldMatrix):
    """Some X with a @ X == b, or None when b is not in the column space.

    Among all solutions, the one with zero free coordinates under the rref
    pivot choice is returned.
    """
    a._same_field(b)
    if a.rows != b.rows:
        raise ExactLinError(f"solve row mismatch: {a.rows} vs {b.rows}")
    _, piv, tr = rref(a)
    tb = tr.mul(b)
    for i in range(len(piv), a.rows):
        if any(tb.row_entries(i)):
            return None
    ent = [0] * (a.cols * b.cols)
    for r, pc in enumerate(piv):
        ent[pc * b.cols:(pc + 1) * b.cols] = tb.row_entries(r)
    return FieldMatrix(a.cols, b.cols, ent, a.p)


def inverse(m: FieldMatrix) -> FieldMatrix:
    if m.rows != m.cols:
        raise ExactLinError("inverse of a non-square matrix")
    _, piv, tr = rref(m)
    if len(piv) != m.rows:
        raise ExactLinError("matrix is singular")
    return tr


def pullback(f: FieldMatrix, g: FieldMatrix):
    """Limit of W1 --f--> U <--g-- W0 as a subspace of W1 (+) W0.

    Returns ``(dim, into_w1, into_w0)`` with ``f @ into_w1 == g @ into_w0``.
    """
    f._same_field(g)
    if f.rows != g.rows:
        raise ExactLinError("pullback target mismatch")
    k = kernel_basis(f.hstack(g.neg()))
    into_w1 = k.take_rows(range(f.cols))
    into_w0 = k.take_rows(range(f.cols, f.cols + g.cols))
    return k.cols, into_w1, into_w0


def factor_through_pullback(into_w1: FieldMatrix, into_w0: FieldMatrix,
                            f1: FieldMatrix, f0: FieldMatrix) -> FieldMatrix:
    """The unique factoring map for a commuting pair (f1, f0) into V."""
    x = solve(into_w1.vstack(into_w0), f1.vstack(f0))
    if x is None:
        raise ExactLinError("pair does not factor through the pullback")
    return x


def pushout(f: FieldMatrix, g: FieldMatrix):
    """Colimit of W0 <--f-- V --g--> W1 as a quotient of W0 (+) W1.

    Returns ``(dim, from_w0, from_w1)`` with ``from_w0 @ f == from_w1 @ g``.
    """
    f._same_field(g)
    if f.cols != g.cols:
        raise ExactLinError("pushout source mismatch")
    rel = image_basis(f.vstack(g.neg()))
    proj, _ = complement_section(rel, f.rows + g.rows)
    from_w0 = proj.take_columns(range(f.rows))
    from_w1 = proj.take_columns(range(f.rows, f.rows + g.rows))
    return proj.rows, from_w0, from_w1


def factor_through_pushout(from_w0: FieldMatrix, from_w1: FieldMatrix,
                           h0: FieldMatrix, h1: FieldMatrix) -> FieldMatrix:
    """The unique factoring map out of the pushout for a commuting pair."""
    x = solve(from_w0.hstack(from_w1).transpose(), h0.hstack(h1).transpose())
    if x is None:
        raise ExactLinError("pair does not factor through the pushout")
    return x.transpose()


def split_basis(sub: FieldMatrix, total: int):
    """Complete independent columns ``sub`` to a basis by standard vectors.

    Returns ``(retraction, quotient_proj, section)`` where

    - ``section`` has the non-pivot standard basis vectors (under rref of
      ``sub`` transposed) as columns,
    - ``retraction @ sub == 1`` and ``retraction @ section == 0``,
    - ``quotient_proj @ sub == 0`` and ``quotient_proj @ section == 1``.
    """
    if sub.rows != total:
        raise ExactLinError("subspace ambient dimension mismatch")
    k = sub.cols
    if rank(sub) != k:
        raise ExactLinError("subspace columns are dependent")
    _, piv, _ = rref(sub.transpose())
    free = [j for j in range(total) if j not in set(piv)]
    ent = [0] * (total * len(free))
    for c, j in enumerate(free):
        ent[j * len(free) + c] = 1
    sect = FieldMatrix(total, len(free), ent, sub.p)
    binv = inverse(sub.hstack(sect))
    retraction = binv.take_rows(range(k))
    proj = binv.take_rows(range(k, total))
    return retraction, proj, sect


def complement_section(sub: FieldMatrix, total: int):
    """Quotient projection and section for a subspace given by ``sub``.

    ``quotient_proj @ section == 1`` on the quotient, ``ker(quotient_proj)``
    is the span of ``sub``, and the section image is spanned by the chosen
    complementary standard basis vectors.
    """
    _, proj, sect = split_basis(sub, total)
    return proj, sect
