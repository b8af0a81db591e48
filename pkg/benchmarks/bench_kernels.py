"""Time the survey kernel with numba and with K2RANK_NO_JIT=1.

Each backend runs in its own interpreter because the flag is read at import.
The compiled run is timed twice so the first (compile or cache load) is
reported separately.

    python3 benchmarks/bench_kernels.py --max 30000
"""

import argparse
import json
import os
import subprocess
import sys

CHILD = r"""
import json, sys, time
from k2rank import backend, build_sieve, Family, tally
bound, kind = int(sys.argv[1]), sys.argv[2]
sieve = build_sieve(bound)
fam = Family(kind, 3, bound)
times = []
for _ in range(2):
    t0 = time.perf_counter()
    res = tally(fam, sieve)
    times.append(time.perf_counter() - t0)
print(json.dumps({"backend": backend(), "first": times[0], "steady": times[1],
                  "counts": res.counts, "total": res.total}))
"""


def run(bound, kind, no_jit):
    env = dict(os.environ)
    env.pop("K2RANK_NO_JIT", None)
    if no_jit:
        env["K2RANK_NO_JIT"] = "1"
    out = subprocess.run([sys.executable, "-c", CHILD, str(bound), kind], env=env,
                         check=True, capture_output=True, text=True)
    return json.loads(out.stdout)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max", type=int, default=30_000)
    ap.add_argument("--family", default="ODD")
    args = ap.parse_args()
    fast = run(args.max, args.family, False)
    slow = run(args.max, args.family, True)
    if fast["counts"] != slow["counts"]:
        sys.exit(f"backends disagree: {fast['counts']} vs {slow['counts']}")
    print(f"family {args.family}, |d| <= {args.max}, {fast['total']} fields, counts {fast['counts']}")
    for r in (fast, slow):
        print(f"  {r['backend']:>6}: first {r['first']:8.3f}s  steady {r['steady']:8.3f}s")
    print(f"  speedup (steady): {slow['steady'] / fast['steady']:.1f}x")


if __name__ == "__main__":
    main()
