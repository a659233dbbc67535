"""Compare the compiled and pure-numpy bootstrap backends.

Run with:  python benchmarks/bench_backends.py

Times the two hot kernels (density_boot, reg_boot) on problem sizes
matching the default map configurations, and checks that both backends
agree numerically on the same inputs.
"""

import time

import numpy as np

from circsizer._backend import numpy_backend
from circsizer.inference import substream
from circsizer.kernels import TWO_PI, vm_kernel, vm_kernel_deriv
from circsizer.regression import SINGULARITY_RTOL

try:
    from circsizer._backend import _speedups
except ImportError:
    _speedups = None


def make_problem(n, ngrid, B, nu=10.0, seed=0):
    rng = substream(seed, 0)
    angles = rng.uniform(0, TWO_PI, n)
    theta = TWO_PI * np.arange(ngrid) / ngrid
    diff = theta[:, None] - angles[None, :]
    kp = vm_kernel_deriv(diff, nu)
    w = vm_kernel(diff, nu)
    s = np.sin(-diff)
    y = np.cos(angles) + 0.3 * rng.standard_normal(n)
    idx = rng.integers(0, n, size=(B, n)).astype(np.int64)
    return kp, w, s, y, idx


def bench(fn, *args, repeat=5):
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    if _speedups is None:
        print("compiled backend not built; timing numpy backend only")
    cases = [
        ("density n=200 ngrid=250 B=500", "density", (200, 250, 500)),
        ("density n=1000 ngrid=250 B=500", "density", (1000, 250, 500)),
        ("regression n=200 ngrid=150 B=250", "regression", (200, 150, 250)),
        ("regression n=500 ngrid=150 B=250", "regression", (500, 150, 250)),
    ]
    for label, kind, (n, ngrid, B) in cases:
        kp, w, s, y, idx = make_problem(n, ngrid, B)
        if kind == "density":
            t_np = bench(numpy_backend.density_boot, kp, idx)
            line = f"{label:38s} numpy {t_np * 1e3:8.1f} ms"
            if _speedups is not None:
                t_c = bench(_speedups.density_boot, kp, idx)
                e1, s1 = _speedups.density_boot(kp, idx)
                e2, s2 = numpy_backend.density_boot(kp, idx)
                assert np.allclose(e1, e2) and np.allclose(s1, s2)
                line += f"   compiled {t_c * 1e3:8.1f} ms   speedup {t_np / t_c:5.2f}x"
        else:
            t_np = bench(numpy_backend.reg_boot, w, s, y, idx, SINGULARITY_RTOL)
            line = f"{label:38s} numpy {t_np * 1e3:8.1f} ms"
            if _speedups is not None:
                t_c = bench(_speedups.reg_boot, w, s, y, idx, SINGULARITY_RTOL)
                b1, o1 = _speedups.reg_boot(w, s, y, idx, SINGULARITY_RTOL)
                b2, o2 = numpy_backend.reg_boot(w, s, y, idx, SINGULARITY_RTOL)
                assert np.array_equal(o1, o2) and np.allclose(
                    b1, b2, equal_nan=True
                )
                line += f"   compiled {t_c * 1e3:8.1f} ms   speedup {t_np / t_c:5.2f}x"
        print(line)


if __name__ == "__main__":
    main()
