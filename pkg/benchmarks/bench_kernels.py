"""Compare the numba and pure-python kernel backends.

Each workload runs in a fresh interpreter with ``NDSTK_NUMBA`` set, since the
backend is chosen at import time. The numba timing excludes compilation (one
warm-up call first). Both backends must return the same counts.

    python3 benchmarks/bench_kernels.py [--repeat 3]
"""
import argparse
import json
import os
import subprocess
import sys

WORKLOADS = {
    "separated tent n=6 eps=1/64": "sep",
    "cover tent n=6 eps=1/64": "cover",
    "bowen cross hyper(2) n=4": "cross",
}

CHILD = r"""
import json, sys, time
from fractions import Fraction as F
from ndstk import kernels
from ndstk.entropy import _GridRunner
from ndstk.spaces import autonomous, tent
from ndstk.systems import base_system, hyper_system

kind, repeat = sys.argv[1], int(sys.argv[2])
eps = F(1, 64)

def job():
    if kind in ("sep", "cover"):
        s = base_system(autonomous(tent()))
        r = _GridRunner(s, 6, 0, 1 << 12, s.lattice_denominator(5, 0, [eps]), 1 << 18)
        return r.separated(eps) if kind == "sep" else r.cover(eps)
    s = hyper_system(autonomous(tent()), 2)
    g = s.grid(32, 32)
    rows = g.rows(0, g.count)
    lm = s.lattice_maps(3, 0, 32)
    out = [rows]
    for t in range(3):
        rows = s.apply_lattice(lm[t], rows, 32)
        out.append(rows)
    import numpy as np
    tr = np.stack(out, axis=1)
    nb, m, _ = g.layout
    d = kernels.bowen_cross2(tr[:200], tr, s.metric_code, nb, m, 32)
    return int((d <= 2).sum())

result = job()  # warm-up, includes numba compilation
times = []
for _ in range(repeat):
    t = time.perf_counter()
    assert job() == result
    times.append(time.perf_counter() - t)
print(json.dumps({"result": result, "best": min(times), "backend": kernels.USE_NUMBA}))
"""


def run(kind: str, numba: bool, repeat: int) -> dict:
    env = dict(os.environ, NDSTK_NUMBA="1" if numba else "0")
    out = subprocess.run([sys.executable, "-c", CHILD, kind, str(repeat)], env=env, check=True,
                         capture_output=True, text=True)
    return json.loads(out.stdout.strip().splitlines()[-1])


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    print(f"{'workload':34s} {'numba s':>10s} {'python s':>10s} {'speedup':>8s}")
    for name, kind in WORKLOADS.items():
        fast, slow = run(kind, True, args.repeat), run(kind, False, args.repeat)
        if fast["result"] != slow["result"]:
            raise SystemExit(f"{name}: backends disagree ({fast['result']} vs {slow['result']})")
        print(f"{name:34s} {fast['best']:10.4f} {slow['best']:10.4f} {slow['best'] / fast['best']:8.1f}x")


if __name__ == "__main__":
    main()
