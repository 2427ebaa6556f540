"""Time the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import timeit

import numpy as np

from clonefeedback import _purepy
from clonefeedback.qmath import random_density

try:
    from clonefeedback import _kernels
except ImportError:
    _kernels = None


def cases(rng):
    rho = random_density(rng)
    m = 0.66 * np.linalg.qr(rng.normal(size=(3, 3)))[0]
    c = rng.normal(size=3)
    return {
        "rk4_lindblad t=10 dt=1e-3": lambda k: k.rk4_lindblad(rho, 5.0, 1.0, 1e-3, 10_000),
        "rk4_lindblad t=1 dt=1e-4": lambda k: k.rk4_lindblad(rho, 5.0, 1.0, 1e-4, 10_000),
        "iterate_affine tol=1e-13": lambda k: k.iterate_affine(m, c, np.zeros(3), 1e-13, 10_000),
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    backends = {"python": _purepy}
    if _kernels is not None:
        backends["compiled"] = _kernels
    else:
        print("compiled extension not built; timing the fallback only")
    print(f"{'kernel':<28}" + "".join(f"{name:>14}" for name in backends) + f"{'speedup':>10}")
    for label, fn in cases(np.random.default_rng(42)).items():
        times = {}
        for name, mod in backends.items():
            n = 1 if name == "python" else 20
            times[name] = min(timeit.repeat(lambda: fn(mod), number=n, repeat=args.repeat)) / n
        row = f"{label:<28}" + "".join(f"{times[k] * 1e3:>12.3f}ms" for k in backends)
        if "compiled" in times:
            row += f"{times['python'] / times['compiled']:>9.0f}x"
        print(row)


if __name__ == "__main__":
    main()
