"""Time the exact scalar backends against each other.

Each measurement runs in a fresh interpreter because the backend is
chosen at import time from QUATCLIFF_RATIONAL_BACKEND.  The child
prints the backend it actually got (requesting gmpy2 without the
package installed falls back to Fraction) so a silent fallback cannot
masquerade as a speedup.

Usage: python3 benchmarks/bench_backends.py [--repeats N] [--workload NAME]
"""

import argparse
import os
import subprocess
import sys

WORKLOADS = {
    "relations": (
        "from quatcliff import relations\n"
        "reports = relations.verify_table(1, 2)\n"
        "assert all(r.passed for r in reports)\n"),
    "tiling": (
        "from quatcliff import fischer\n"
        "rep = fischer.symplectic_harmonic_decomposition(2, 1, 1)\n"
        "assert rep.passed\n"
        "grid = fischer.symplectic_harmonics_16_decomposition(2, 1, 1, 1)\n"
        "assert grid.passed\n"),
    "projection": (
        "import random\n"
        "from quatcliff import fischer\n"
        "from quatcliff.operators import apply\n"
        "from quatcliff.scalars import xs\n"
        "from quatcliff.poly import SpinorPolynomial\n"
        "rng = random.Random(1)\n"
        "for _ in range(20):\n"
        "    T = SpinorPolynomial.zero(4)\n"
        "    for v in fischer.harmonic_space(2, 2, 1).vectors:\n"
        "        T = T + v.scale(xs(rng.randint(-3, 3)))\n"
        "    T = T + apply('mul_r2', fischer.harmonic_space(2, 1, 0)"
        ".vectors[0])\n"
        "    out = fischer.project_ker('laplace', T, (2, 2, 1, 0))\n"
        "    assert not apply('laplace', out).terms\n"),
}


def run_once(backend, body):
    env = dict(os.environ, QUATCLIFF_RATIONAL_BACKEND=backend)
    code = ("import time\n"
            "from quatcliff.scalars import BACKEND_NAME\n"
            "t0 = time.perf_counter()\n"
            + body +
            "print(BACKEND_NAME)\n"
            "print(time.perf_counter() - t0)\n")
    proc = subprocess.run([sys.executable, "-c", code], env=env,
                          capture_output=True, text=True)
    if proc.returncode != 0:
        raise RuntimeError(f"workload failed under {backend}:\n"
                           f"{proc.stderr}")
    got_backend, elapsed = proc.stdout.strip().splitlines()[-2:]
    return got_backend, float(elapsed)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeats", type=int, default=3)
    ap.add_argument("--workload", choices=sorted(WORKLOADS),
                    help="run just one workload")
    args = ap.parse_args(argv)

    names = [args.workload] if args.workload else sorted(WORKLOADS)
    for name in names:
        print(f"== {name} ==")
        row = {}
        for backend in ("fraction", "gmpy2"):
            times = []
            actual = backend
            for _ in range(args.repeats):
                actual, dt = run_once(backend, WORKLOADS[name])
                times.append(dt)
            tag = actual if actual == backend else \
                f"{backend} -> fell back to {actual}"
            row[actual] = min(times)
            print(f"  {tag:<28} best of {args.repeats}: "
                  f"{min(times):8.3f}s")
        if "gmpy2" in row and "fraction" in row and row["gmpy2"] > 0:
            print(f"  speedup fraction/gmpy2: "
                  f"{row['fraction'] / row['gmpy2']:.2f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
