"""Compare the compiled and pure-Python polynomial kernels.

Each backend runs in its own interpreter because the choice is made at
import time (``SOMOSLAB_PURE=1`` forces the fallback).

    python3 benchmarks/bench_kernels.py [--repeat 3]
"""

import argparse
import json
import os
import subprocess
import sys
import time

WORKER = r"""
import json, random, sys, time
from somoslab import kernels
from somoslab.exact import LaurentPoly, exact_div
from somoslab.engine import iterate_symbolic
from somoslab.recdsl import catalog

def rand_poly(rng, names, terms, deg):
    xs = [LaurentPoly.var(n) for n in names]
    p = LaurentPoly.const(0)
    for _ in range(terms):
        m = LaurentPoly.const(rng.randint(-9, 9) or 1)
        for x in xs:
            m = m * x ** rng.randint(0, deg)
        p = p + m
    return p

def best(fn, repeat):
    out = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        out.append(time.perf_counter() - t)
    return min(out)

repeat = int(sys.argv[1])
rng = random.Random(1)
a = rand_poly(rng, ["a", "b", "c", "d"], 300, 6)
b = rand_poly(rng, ["a", "b", "c", "d"], 300, 6)
ab = a * b
res = {
    "backend": kernels.BACKEND,
    "mul 300x300": best(lambda: a * b, repeat),
    "square 300": best(lambda: a * a, repeat),
    "exact_div": best(lambda: exact_div(ab, b), repeat),
    "somos4 symbolic n=16": best(lambda: iterate_symbolic(catalog("somos4"), 16), repeat),
}
print(json.dumps(res))
"""


def run(pure: bool, repeat: int) -> dict:
    env = dict(os.environ)
    env.pop("SOMOSLAB_PURE", None)
    if pure:
        env["SOMOSLAB_PURE"] = "1"
    out = subprocess.run([sys.executable, "-c", WORKER, str(repeat)], env=env,
                         capture_output=True, text=True, check=True)
    return json.loads(out.stdout)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    t = time.perf_counter()
    fast = run(False, args.repeat)
    slow = run(True, args.repeat)
    if fast["backend"] != "cython":
        print("compiled kernels not built; both columns use the pure-Python backend", file=sys.stderr)
    print(f"{'workload':<24}{fast['backend']:>12}{'python':>12}{'speedup':>10}")
    for key in fast:
        if key == "backend":
            continue
        print(f"{key:<24}{fast[key]:>11.4f}s{slow[key]:>11.4f}s{slow[key] / fast[key]:>9.2f}x")
    print(f"(total {time.perf_counter() - t:.1f}s, best of {args.repeat})")


if __name__ == "__main__":
    main()
