"""Shared random generators for the test suite.

All generators take an explicit ``random.Random`` so every test run is
reproducible.  Chain maps and tame maps are drawn uniformly from the exact
solution space of their commutation constraints (computed by one kernel
call), so the samples cover degenerate cases too.
"""

import random

from tamechain.chaincx import ChainComplex, ChainMap
from tamechain.exactlin import FieldMatrix, kernel_basis
from tamechain.params import Param, param
from tamechain.tamecat import TameComplex, TameMap, common_grid


def random_matrix(rng: random.Random, rows: int, cols: int, p: int) -> FieldMatrix:
    return FieldMatrix(rows, cols, [rng.randrange(p) for _ in range(rows * cols)], p)


def random_invertible(rng: random.Random, n: int, p: int) -> FieldMatrix:
    from tamechain.exactlin import rank
    while True:
        m = random_matrix(rng, n, n, p)
        if rank(m) == n:
            return m


def random_complex(rng: random.Random, p: int, max_degrees: int = 4,
                   max_dim: int = 4) -> ChainComplex:
    """Random compact complex; differentials built top-down inside kernels."""
    degrees = rng.randrange(0, max_degrees + 1)
    dims = [rng.randrange(0, max_dim + 1) for _ in range(degrees)]
    diffs = []
    prev_kernel = None
    for n in range(len(dims) - 1):
        if prev_kernel is None:
            d = random_matrix(rng, dims[n], dims[n + 1], p)
        else:
            coeff = random_matrix(rng, prev_kernel.cols, dims[n + 1], p)
            d = prev_kernel.mul(coeff)
        diffs.append(d)
        prev_kernel = kernel_basis(d)
    return ChainComplex(dims, diffs, p)


def _hom_space_sample(rng, x: ChainComplex, y: ChainComplex, p: int) -> ChainMap:
    """A random point of the linear space of chain maps x -> y."""
    top = max(x.top, y.top)
    sizes = [(y.dim(n), x.dim(n)) for n in range(top)]
    offsets = [0]
    for r, c in sizes:
        offsets.append(offsets[-1] + r * c)
    total = offsets[-1]
    if total == 0:
        return ChainMap.zero(x, y)
    # rows: one block of constraints per degree of the commutation identity
    rows = []
    for n in range(top):
        dx = x.diff(n)
        dy = y.diff(n)
        rcount = y.dim(n) * x.dim(n + 1)
        if rcount == 0:
            continue
        for i in range(y.dim(n)):
            for j in range(x.dim(n + 1)):
                row = [0] * total
                # entry of component(n) @ dx  at (i, j)
                rn, cn = sizes[n]
                for k in range(x.dim(n)):
                    row[offsets[n] + i * cn + k] = (row[offsets[n] + i * cn + k]
                                                    + dx.entry(k, j)) % p
                # minus entry of dy @ component(n+1) at (i, j)
                if n + 1 < top:
                    rn1, cn1 = sizes[n + 1]
                    for k in range(y.dim(n + 1)):
                        idx = offsets[n + 1] + k * cn1 + j
                        row[idx] = (row[idx] - dy.entry(i, k)) % p
                rows.append(row)
    if rows:
        constraint = FieldMatrix.from_rows(rows, p)
        basis = kernel_basis(constraint)
    else:
        basis = FieldMatrix.identity(total, p)
    coeffs = FieldMatrix.column([rng.randrange(p) for _ in range(basis.cols)], p)
    flat = basis.mul(coeffs)
    comps = []
    for n in range(top):
        r, c = sizes[n]
        ent = [flat.entry(offsets[n] + k, 0) for k in range(r * c)]
        comps.append(FieldMatrix(r, c, ent, p))
    return ChainMap(x, y, comps)


def random_chain_map(rng: random.Random, x: ChainComplex, y: ChainComplex) -> ChainMap:
    return _hom_space_sample(rng, x, y, x.p)


def random_grid(rng: random.Random, max_points: int = 4) -> tuple:
    from fractions import Fraction
    pts = {param(0)}
    for _ in range(rng.randrange(0, max_points)):
        pts.add(param(Fraction(rng.randrange(1, 24), rng.choice([1, 1, 2]))))
    return tuple(sorted(pts))


def random_tame_complex(rng: random.Random, p: int, max_points: int = 4,
                        max_degrees: int = 3, max_dim: int = 3) -> TameComplex:
    grid = random_grid(rng, max_points)
    values = [random_complex(rng, p, max_degrees, max_dim) for _ in grid]
    transitions = [random_chain_map(rng, values[a - 1], values[a])
                   for a in range(1, len(grid))]
    return TameComplex(grid, values, transitions)


def random_tame_vector_space(rng: random.Random, p: int, max_points: int = 6,
                             max_dim: int = 5) -> TameComplex:
    grid = random_grid(rng, max_points)
    values = [ChainComplex.graded([rng.randrange(0, max_dim + 1)], p) for _ in grid]
    transitions = []
    for a in range(1, len(grid)):
        transitions.append(ChainMap(
            values[a - 1], values[a],
            [random_matrix(rng, values[a].dim(0), values[a - 1].dim(0), p)]))
    return TameComplex(grid, values, transitions)


def random_tame_map(rng: random.Random, x: TameComplex, y: TameComplex) -> TameMap:
    """A uniform random natural transformation x -> y.

    All components across all grid points are unknowns of one homogeneous
    linear system (chain-map squares plus ladder squares); a random kernel
    element is returned.
    """
    x, y = common_grid(x, y)
    p = x.p
    npts = len(x.grid)
    tops = [max(x.values[a].top, y.values[a].top) for a in range(npts)]
    sizes = [[(y.values[a].dim(n), x.values[a].dim(n)) for n in range(tops[a])]
             for a in range(npts)]
    offsets = [[0] for _ in range(npts)]
    total = 0
    starts = []
    for a in range(npts):
        starts.append(total)
        for r, c in sizes[a]:
            total += r * c
            offsets[a].append(offsets[a][-1] + r * c)

    def entry_index(a, n, i, j):
        return starts[a] + offsets[a][n] + i * sizes[a][n][1] + j

    rows = []
    for a in range(npts):
        xa, ya = x.values[a], y.values[a]
        # chain-map squares at grid point a
        for n in range(tops[a]):
            dx, dy = xa.diff(n), ya.diff(n)
            for i in range(ya.dim(n)):
                for j in range(xa.dim(n + 1)):
                    row = [0] * total
                    for k in range(xa.dim(n)):
                        idx = entry_index(a, n, i, k)
                        row[idx] = (row[idx] + dx.entry(k, j)) % p
                    if n + 1 < tops[a]:
                        for k in range(ya.dim(n + 1)):
                            idx = entry_index(a, n + 1, k, j)
                            row[idx] = (row[idx] - dy.entry(i, k)) % p
                    rows.append(row)
        # ladder squares between a-1 and a
        if a >= 1:
            trx = x.transitions[a - 1]
            trg = y.transitions[a - 1]
            for n in range(max(tops[a], tops[a - 1])):
                txn = trx.component(n)
                tyn = trg.component(n)
                for i in range(ya.dim(n)):
                    for j in range(x.values[a - 1].dim(n)):
                        row = [0] * total
                        if n < tops[a]:
                            for k in range(xa.dim(n)):
                                idx = entry_index(a, n, i, k)
                                row[idx] = (row[idx] + txn.entry(k, j)) % p
                        if n < tops[a - 1]:
                            for k in range(y.values[a - 1].dim(n)):
                                idx = entry_index(a - 1, n, k, j)
                                row[idx] = (row[idx] - tyn.entry(i, k)) % p
                        rows.append(row)
    if total == 0:
        return TameMap.zero(x, y)
    if rows:
        basis = kernel_basis(FieldMatrix.from_rows(rows, p))
    else:
        basis = FieldMatrix.identity(total, p)
    coeffs = FieldMatrix.column([rng.randrange(p) for _ in range(basis.cols)], p)
    flat = basis.mul(coeffs)
    comps = []
    for a in range(npts):
        cms = []
        for n in range(tops[a]):
            r, c = sizes[a][n]
            ent = [flat.entry(starts[a] + offsets[a][n] + k, 0) for k in range(r * c)]
            cms.append(FieldMatrix(r, c, ent, p))
        comps.append(ChainMap(x.values[a], y.values[a], cms))
    return TameMap(x, y, comps)


def scramble_presentation(rng: random.Random, x: TameComplex) -> TameComplex:
    """An isomorphic copy of x written in random bases at every grid point."""
    p = x.p
    changes = []
    for value in x.values:
        changes.append([random_invertible(rng, d, p) for d in value.dims])
    new_values = []
    for value, ch in zip(x.values, changes):
        from tamechain.exactlin import inverse
        diffs = [ch[n].mul(value.diff(n)).mul(inverse(ch[n + 1]))
                 for n in range(len(value.dims) - 1)]
        new_values.append(ChainComplex(value.dims, diffs, p))
    new_transitions = []
    for a in range(1, len(x.grid)):
        from tamechain.exactlin import inverse
        src, tgt = new_values[a - 1], new_values[a]
        comps = []
        for n in range(max(src.top, tgt.top)):
            cm = x.transitions[a - 1].component(n)
            left = changes[a][n] if n < len(changes[a]) else \
                FieldMatrix.identity(cm.rows, p)
            right = changes[a - 1][n] if n < len(changes[a - 1]) else \
                FieldMatrix.identity(cm.cols, p)
            comps.append(left.mul(cm).mul(inverse(right)))
        new_transitions.append(ChainMap(src, tgt, comps))
    return TameComplex(x.grid, new_values, new_transitions)
