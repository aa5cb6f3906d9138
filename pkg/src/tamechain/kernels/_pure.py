"""Pure-Python elimination kernels over a prime field.

Matrices are flat row-major lists of ints already reduced mod p.  The same
function signatures are exported by the compiled backend; see
``tamechain.kernels`` for the selection logic.

Pivot policy (relied on for determinism everywhere downstream): scan columns
left to right, take the topmost unused row with a nonzero entry.
"""

BACKEND = "pure"


def rref(entries, rows, cols, p):
    """Reduced row echelon form with a row-operation transform.

    Returns ``(reduced, pivots, transform)`` where ``transform`` is an
    invertible ``rows x rows`` matrix with ``transform @ entries == reduced``.
    """
    red = list(entries)
    tr = [0] * (rows * rows)
    for i in range(rows):
        tr[i * rows + i] = 1
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        pr = -1
        for i in range(r, rows):
            if red[i * cols + c]:
                pr = i
                break
        if pr < 0:
            continue
        if pr != r:
            a, b = pr * cols, r * cols
            for j in range(cols):
                red[a + j], red[b + j] = red[b + j], red[a + j]
            a, b = pr * rows, r * rows
            for j in range(rows):
                tr[a + j], tr[b + j] = tr[b + j], tr[a + j]
        piv = red[r * cols + c]
        if piv != 1:
            inv = pow(piv, -1, p)
            base = r * cols
            for j in range(c, cols):
                red[base + j] = red[base + j] * inv % p
            base = r * rows
            for j in range(rows):
                tr[base + j] = tr[base + j] * inv % p
        for i in range(rows):
            if i == r:
                continue
            f = red[i * cols + c]
            if f:
                bi, br = i * cols, r * cols
                for j in range(c, cols):
                    red[bi + j] = (red[bi + j] - f * red[br + j]) % p
                bi, br = i * rows, r * rows
                for j in range(rows):
                    tr[bi + j] = (tr[bi + j] - f * tr[br + j]) % p
        pivots.append(c)
        r += 1
    return red, pivots, tr


def matmul(a, ar, ac, b, br, bc, p):
    """Product of an ``ar x ac`` and a ``br x bc`` matrix (``ac == br``)."""
    out = [0] * (ar * bc)
    for i in range(ar):
        ia = i * ac
        io = i * bc
        for k in range(ac):
            f = a[ia + k]
            if f:
                kb = k * bc
                for j in range(bc):
                    v = b[kb + j]
                    if v:
                        out[io + j] = (out[io + j] + f * v) % p
    return out
