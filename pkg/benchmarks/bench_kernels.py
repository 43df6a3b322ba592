"""Time the numba and numpy flavours of the tensor kernels.

    python3 benchmarks/bench_kernels.py [--repeat 50] [--sizes 4x4x5 16x16x16 ...]

Prints best-of-repeat wall time per call for each flavour and for the
size-based dispatch the library uses, plus the max difference between the
two results. The dense LAPACK work (SVD, eigenvalues) is shared by both paths
and is not timed here.
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from qtdrazin import _kernels


def _parse_size(text: str) -> tuple[int, int, int]:
    n1, n2, n3 = (int(v) for v in text.lower().split("x"))
    return n1, n2, n3


def _time(fn, args, repeat: int) -> float:
    fn(*args)  # warm up (includes JIT compilation on first use)
    number = 5
    return min(timeit.repeat(lambda: fn(*args), number=number, repeat=repeat)) / number


def main(argv=None) -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=20)
    parser.add_argument("--sizes", nargs="+", default=["2x2x3", "4x4x5", "8x8x8", "16x16x16", "32x32x24"])
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)

    if _kernels.bcirc_z_parts_numba is None:
        print("numba unavailable or disabled; timing the numpy path only")
    rng = np.random.default_rng(args.seed)
    print(f"{'kernel':<12} {'size':>10} {'numpy [ms]':>12} {'numba [ms]':>12} {'auto [ms]':>10} {'speedup':>8} {'max diff':>9}")
    for size in args.sizes:
        n1, n2, n3 = _parse_size(size)

        def part(shape):
            return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)

        ad, ac = part((n3, n1, n2)), part((n3, n1, n2))
        bd, bc = part((n3, n2, n1)), part((n3, n2, n1))
        cases = (
            ("bcirc_z", _kernels.bcirc_z_parts_numpy, _kernels.bcirc_z_parts_numba, _kernels.bcirc_z_parts, (ad, ac)),
            (
                "qt_product",
                _kernels.qt_product_parts_numpy,
                _kernels.qt_product_parts_numba,
                _kernels.qt_product_parts,
                (ad, ac, bd, bc),
            ),
        )
        for name, np_fn, nb_fn, auto_fn, fargs in cases:
            t_np = _time(np_fn, fargs, args.repeat)
            t_auto = _time(auto_fn, fargs, args.repeat)
            if nb_fn is None:
                print(f"{name:<12} {size:>10} {t_np * 1e3:12.4f} {'-':>12} {t_auto * 1e3:10.4f} {'-':>8} {'-':>9}")
                continue
            t_nb = _time(nb_fn, fargs, args.repeat)
            diff = max(np.max(np.abs(x - y)) for x, y in zip(np_fn(*fargs), nb_fn(*fargs)))
            print(
                f"{name:<12} {size:>10} {t_np * 1e3:12.4f} {t_nb * 1e3:12.4f} {t_auto * 1e3:10.4f}"
                f" {t_np / t_nb:8.2f} {diff:9.1e}"
            )


if __name__ == "__main__":
    main()
