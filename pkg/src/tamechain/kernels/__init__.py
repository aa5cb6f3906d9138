"""Backend selection for the elimination kernels.

The compiled Cython backend is used when available; set ``TAMECHAIN_PURE=1``
to force the pure-Python fallback (useful for benchmarking and debugging).
Both backends implement the same two functions with identical pivoting, so
every downstream result is bit-identical across backends.
"""

import os

if os.environ.get("TAMECHAIN_PURE") == "1":
    from tamechain.kernels._pure import BACKEND, matmul, rref
else:
    try:
        from tamechain.kernels._speedups import BACKEND, matmul, rref
    except ImportError:
        from tamechain.kernels._pure import BACKEND, matmul, rref

__all__ = ["BACKEND", "matmul", "rref"]
