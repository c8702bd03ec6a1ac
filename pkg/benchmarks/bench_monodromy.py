"""Compare the compiled and pure-Python monodromy kernels.

    python benchmarks/bench_monodromy.py [--repeat 3] [--points 8]

Times ``F(lam)`` batches on a Fourier, a piecewise and a sampled potential
at a few spectral parameters and prints the speed-up together with the
largest difference between the backends.  The two agree to rounding;
step-size control can amplify last-bit differences in the elementary
functions into differences near the integration tolerance.
"""

import argparse
import time

import numpy as np

from hillzone import _backend, mathieu, sample_function, sawtooth
from hillzone.floquet import TOL_ODE


def _time(impl, q, lams, tol, repeat):
    mode, freqs, fco, breaks, pco = q.kernel_data()
    best, out = np.inf, None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = impl.monodromy_batch(mode, lams, tol, freqs, fco, breaks, pco)
        best = min(best, time.perf_counter() - t0)
    return best, out[0]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--points", type=int, default=8)
    ap.add_argument("--tol", type=float, default=TOL_ODE)
    args = ap.parse_args(argv)

    names = _backend.available()
    if "compiled" not in names:
        print("compiled kernel not built; only the Python backend is available")
    potentials = {
        "fourier (2cos 2pi x)": mathieu(),
        "piecewise (sawtooth)": sawtooth(),
        "sampled (256 pts)": sample_function(lambda x: 2 * np.cos(2 * np.pi * x)
                                             + 0.5j * np.sin(2 * np.pi * x), 256),
    }
    print(f"{'potential':24s} {'lambda':>8s} " + " ".join(f"{n:>12s}" for n in names)
          + f" {'speed-up':>9s} {'max |diff|':>11s}")
    for label, q in potentials.items():
        for lam in (10.0, 1000.0, 4000.0):
            lams = lam + np.linspace(0.0, 1.0, args.points) + 0j
            times, vals = {}, {}
            for name in names:
                times[name], vals[name] = _time(_backend.kernel(name), q, lams, args.tol, args.repeat)
            per = " ".join(f"{times[n] / args.points * 1e3:10.3f}ms" for n in names)
            if len(names) == 2:
                ratio = times["python"] / times["compiled"]
                diff = float(np.max(np.abs(vals["python"] - vals["compiled"])))
                print(f"{label:24s} {lam:8.0f} {per} {ratio:8.1f}x {diff:11.2e}")
            else:
                print(f"{label:24s} {lam:8.0f} {per}")


if __name__ == "__main__":
    main()
