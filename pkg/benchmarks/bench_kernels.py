"""Compare the compiled and pure-Python kernel backends.

Usage: python3 benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import json
import timeit

from bddlat import _kernels
from bddlat.lattice import Basis


def workloads():
    B = Basis([[3, 1, 0, 2, 1], [1, 4, 1, 0, 0], [0, 1, 5, 1, 2], [2, 0, 1, 3, 1], [1, 1, 0, 1, 4]])
    mu, bsq = B._cholesky
    center = [0.3, -0.2, 0.7, 0.1, -0.4]
    return {
        "theta_sum(p=2.5, tau=0.01)": lambda k: k.theta_sum(2.5, 0.01, 1e-15),
        "golden_min(p=3, slope=0.2)": lambda k: k.golden_min(3.0, 0.2, 1e-15, 1e-10),
        "fp_enumerate(rank 5, r^2=40)": lambda k: k.fp_enumerate(mu, bsq, center, 40.0),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--number", type=int, default=20)
    args = ap.parse_args()
    found = _kernels.backends()
    rows = []
    for name, fn in workloads().items():
        row = {"kernel": name}
        for bname, mod in found.items():
            best = min(timeit.repeat(lambda: fn(mod), number=args.number, repeat=args.repeat))
            row[bname + "_us"] = round(best / args.number * 1e6, 2)
        if "cython_us" in row:
            row["speedup"] = round(row["python_us"] / row["cython_us"], 1)
        rows.append(row)
    print(json.dumps({"backends": sorted(found), "selected": _kernels.BACKEND, "results": rows}, indent=2))


if __name__ == "__main__":
    main()
