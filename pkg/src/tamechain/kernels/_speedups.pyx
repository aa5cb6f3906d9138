# cython: language_level=3
"""Compiled elimination kernels over a prime field.

Mirrors ``tamechain.kernels._pure`` exactly: flat row-major int lists in,
flat lists out, identical pivot policy.
"""

from libc.stdlib cimport free, malloc

BACKEND = "compiled"


cdef long long inv_mod(long long a, long long p):
    # extended Euclid; a is nonzero mod p, p prime
    cdef long long t = 0, newt = 1, r = p, newr = a % p, q, tmp
    while newr != 0:
        q = r / newr
        tmp = t - q * newt
        t = newt
        newt = tmp
        tmp = r - q * newr
        r = newr
        newr = tmp
    if t < 0:
        t += p
    return t


def rref(entries, Py_ssize_t rows, Py_ssize_t cols, long long p):
    """Reduced row echelon form with a row-operation transform."""
    cdef long long *red = <long long *> malloc(rows * cols * sizeof(long long) if rows * cols else 1)
    cdef long long *tr = <long long *> malloc(rows * rows * sizeof(long long) if rows * rows else 1)
    if red == NULL or tr == NULL:
        free(red)
        free(tr)
        raise MemoryError()
    cdef Py_ssize_t i, j, c, r, pr, a, b, bi, brr
    cdef long long piv, inv, f, v
    try:
        for i in range(rows * cols):
            red[i] = entries[i]
        for i in range(rows * rows):
            tr[i] = 0
        for i in range(rows):
            tr[i * rows + i] = 1
        pivots = []
        r = 0
        for c in range(cols):
            if r == rows:
                break
            pr = -1
            for i in range(r, rows):
                if red[i * cols + c] != 0:
                    pr = i
                    break
            if pr < 0:
                continue
            if pr != r:
                a = pr * cols
                b = r * cols
                for j in range(cols):
                    v = red[a + j]
                    red[a + j] = red[b + j]
                    red[b + j] = v
                a = pr * rows
                b = r * rows
                for j in range(rows):
                    v = tr[a + j]
                    tr[a + j] = tr[b + j]
                    tr[b + j] = v
            piv = red[r * cols + c]
            if piv != 1:
                inv = inv_mod(piv, p)
                b = r * cols
                for j in range(c, cols):
                    red[b + j] = red[b + j] * inv % p
                b = r * rows
                for j in range(rows):
                    tr[b + j] = tr[b + j] * inv % p
            for i in range(rows):
                if i == r:
                    continue
                f = red[i * cols + c]
                if f != 0:
                    bi = i * cols
                    brr = r * cols
                    for j in range(c, cols):
                        v = (red[bi + j] - f * red[brr + j]) % p
                        if v < 0:
                            v += p
                        red[bi + j] = v
                    bi = i * rows
                    brr = r * rows
                    for j in range(rows):
                        v = (tr[bi + j] - f * tr[brr + j]) % p
                        if v < 0:
                            v += p
                        tr[bi + j] = v
            pivots.append(c)
            r += 1
        out_red = [0] * (rows * cols)
        for i in range(rows * cols):
            out_red[i] = red[i]
        out_tr = [0] * (rows * rows)
        for i in range(rows * rows):
            out_tr[i] = tr[i]
        return out_red, pivots, out_tr
    finally:
        free(red)
        free(tr)


def matmul(a, Py_ssize_t ar, Py_ssize_t ac, b, Py_ssize_t br, Py_ssize_t bc, long long p):
    """Product of an ``ar x ac`` and a ``br x bc`` matrix (``ac == br``)."""
    cdef long long *ca = <long long *> malloc(ar * ac * sizeof(long long) if ar * ac else 1)
    cdef long long *cb = <long long *> malloc(br * bc * sizeof(long long) if br * bc else 1)
    cdef long long *co = <long long *> malloc(ar * bc * sizeof(long long) if ar * bc else 1)
    if ca == NULL or cb == NULL or co == NULL:
        free(ca)
        free(cb)
        free(co)
        raise MemoryError()
    cdef Py_ssize_t i, j, k, ia, io, kb
    cdef long long f, acc
    try:
        for i in range(ar * ac):
            ca[i] = a[i]
        for i in range(br * bc):
            cb[i] = b[i]
        for i in range(ar * bc):
            co[i] = 0
        for i in range(ar):
            ia = i * ac
            io = i * bc
            for k in range(ac):
                f = ca[ia + k]
                if f != 0:
                    kb = k * bc
                    for j in range(bc):
                        acc = (co[io + j] + f * cb[kb + j]) % p
                        co[io + j] = acc
        out = [0] * (ar * bc)
        for i in range(ar * bc):
            out[i] = co[i]
        return out
    finally:
        free(ca)
        free(cb)
        free(co)
