"""Independent oracles for the acceptance suite.

Self-contained on purpose: the elimination here is a naive fraction-free
row reduction written separately from the library kernels, so a bug in the
library cannot hide behind a shared code path.
"""

from tamechain.decomp import BettiDiagram
from tamechain.params import INFINITY


def naive_rank(rows, p):
    """Rank of a dense matrix (list of int rows) over F_p."""
    rows = [list(r) for r in rows]
    if not rows or not rows[0]:
        return 0
    m, n = len(rows), len(rows[0])
    r = 0
    for c in range(n):
        piv = None
        for i in range(r, m):
            if rows[i][c] % p:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][c] % p, -1, p)
        rows[r] = [(e * inv) % p for e in rows[r]]
        for i in range(m):
            if i != r and rows[i][c] % p:
                f = rows[i][c]
                rows[i] = [(a - f * b) % p for a, b in zip(rows[i], rows[r])]
        r += 1
    return r


def _matrix_rows(m):
    return [[m.entry(i, j) for j in range(m.cols)] for i in range(m.rows)]


def _mat_mul(a, b, p):
    if not a:
        return []
    inner = len(b)
    return [[sum(a[i][k] * b[k][j] for k in range(inner)) % p
             for j in range(len(b[0]) if b else 0)] for i in range(len(a))]


def persistence_barcode(module):
    """Degree-0 barcode of a tame parametrised vector space.

    Uses the rank-invariant inclusion-exclusion over the composite
    transition ranks: the multiplicity of the bar covering grid indices
    [a, b] is r(a,b) - r(a-1,b) - r(a,b+1) + r(a-1,b+1).
    """
    p = module.p
    k = len(module.grid) - 1
    dims = [v.dim(0) for v in module.values]
    steps = [_matrix_rows(t.component(0)) for t in module.transitions]

    composites = {}
    for a in range(k + 1):
        cur = [[1 if i == j else 0 for j in range(dims[a])] for i in range(dims[a])]
        composites[(a, a)] = cur
        for b in range(a, k):
            cur = _mat_mul(steps[b], cur, p)
            composites[(a, b + 1)] = cur

    def r(a, b):
        if a < 0 or b > k or a > b:
            return 0
        if a == b:
            return dims[a]
        return naive_rank(composites[(a, b)], p)

    counts = {}
    for a in range(k + 1):
        for b in range(a, k + 1):
            mult = r(a, b) - r(a - 1, b)
            if b < k:
                mult -= r(a, b + 1) - r(a - 1, b + 1)
            if mult:
                death = module.grid[b + 1] if b < k else INFINITY
                key = (module.grid[a], death)
                counts[key] = counts.get(key, 0) + mult
    return BettiDiagram(counts)


def filtration_persistence(records, p, top_degree=None):
    """Classical boundary-matrix column reduction over F_p.

    Returns per-degree BettiDiagrams of the filtration (zero-length bars
    dropped, matching the minimal Betti diagrams of the ingested complex).
    """
    simplices = sorted(records, key=lambda r: (r[1], len(r[0]), r[0]))
    index = {verts: i for i, (verts, _) in enumerate(simplices)}
    cols = []
    for verts, _ in simplices:
        col = {}
        if len(verts) > 1:
            for i in range(len(verts)):
                face = verts[:i] + verts[i + 1:]
                col[index[face]] = (-1) ** i % p
        cols.append(col)

    return _reduce(simplices, cols, p, top_degree)


def _reduce(simplices, cols, p, top_degree):
    owner = {}
    reduced = {}
    unpaired = set()
    pairs = []

    for j in range(len(simplices)):
        col = dict(cols[j])
        while col:
            l = max(col)
            if l not in owner:
                owner[l] = j
                pairs.append((l, j))
                break
            k = owner[l]
            factor = (col[l] * pow(reduced[k][l], -1, p)) % p
            for i, v in reduced[k].items():
                nv = (col.get(i, 0) - factor * v) % p
                if nv:
                    col[i] = nv
                elif i in col:
                    del col[i]
        reduced[j] = col
        if not col:
            unpaired.add(j)

    paired_births = {i for i, _ in pairs}
    diagrams = {}
    for i, j in pairs:
        verts, birth = simplices[i]
        death = simplices[j][1]
        if birth == death:
            continue
        deg = len(verts) - 1
        diagrams.setdefault(deg, {})
        key = (birth, death)
        diagrams[deg][key] = diagrams[deg].get(key, 0) + 1
    for j in unpaired:
        if j in paired_births:
            continue
        verts, birth = simplices[j]
        deg = len(verts) - 1
        diagrams.setdefault(deg, {})
        key = (birth, INFINITY)
        diagrams[deg][key] = diagrams[deg].get(key, 0) + 1

    top = top_degree if top_degree is not None else (max(diagrams) + 1 if diagrams else 0)
    return [BettiDiagram(diagrams.get(n, {})) for n in range(top)]
