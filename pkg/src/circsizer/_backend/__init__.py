"""Backend selection for the bootstrap hot kernels.

Two interchangeable implementations exist: a numpy one built on BLAS
matrix products and a compiled Cython one with fused per-replicate loops.
On BLAS-backed numpy installs the matrix-product formulation measures
faster at every relevant problem size (see benchmarks/bench_backends.py),
so it is the default; set CIRCSIZER_BACKEND=compiled to opt into the
extension, or CIRCSIZER_PURE to any non-empty value to force numpy.
Both expose the same two functions with identical contracts.

Note the two backends accumulate sums in different orders, so their
results can differ in the last floating-point bits; outputs are
byte-reproducible only under a fixed backend choice.
"""

import os

from . import numpy_backend

_impl = numpy_backend
BACKEND = "numpy"

if os.environ.get("CIRCSIZER_BACKEND") == "compiled" and not os.environ.get(
    "CIRCSIZER_PURE"
):
    from . import _speedups as _impl  # noqa: F811

    BACKEND = "compiled"

density_boot = _impl.density_boot
reg_boot = _impl.reg_boot

__all__ = ["BACKEND", "density_boot", "reg_boot", "numpy_backend"]
