"""Compare the compiled term kernels against the pure-Python fallback.

Runs the same workloads twice in subprocesses (once normally, once with
ACCESSKIT_PURE=1) so each process binds its kernel at import time, and
prints a timing table.

Usage: python benchmarks/bench_kernels.py
"""

import json
import os
import subprocess
import sys

WORKER = r"""
import json, sys, time
import accesskit
from accesskit._kernels import IMPLEMENTATION
from accesskit import parse_system, to_system_model, algorithm2, build_M
from accesskit.system import minor_determinants

def timeit(fn):
    t0 = time.perf_counter()
    fn()
    return time.perf_counter() - t0

root = sys.argv[1]
results = {"implementation": IMPLEMENTATION}

coil = to_system_model(parse_system(open(root + "/systems/coil.sys").read()))
rat = to_system_model(parse_system(open(root + "/systems/rational2d.sys").read()))
rat2 = to_system_model(parse_system(open(root + "/systems/rational2d.sys").read()))
ex1 = to_system_model(parse_system(open(root + "/systems/fivestep.sys").read()))

# dense polynomial multiplication
from accesskit.ring import VariableRegistry, RationalFunction
reg = VariableRegistry(("x", "y", "z"), ("u",), (), 1)
p = (RationalFunction(reg.var("x")) + RationalFunction(reg.var("y"))
     + RationalFunction(reg.var("z")) + RationalFunction(reg.one())) ** 9
q = p.num
results["poly_mul_9th_power_squared"] = timeit(lambda: q * q)

results["chain_coil"] = timeit(lambda: algorithm2(coil))
results["chain_rational2d"] = timeit(lambda: algorithm2(rat))
results["matrix_fivestep_k4"] = timeit(lambda: build_M(ex1, 4))
results["minors_rational2d_k3"] = timeit(lambda: minor_determinants(rat2, 3))
print(json.dumps(results))
"""


def run(pure):
    env = dict(os.environ)
    if pure:
        env["ACCESSKIT_PURE"] = "1"
    else:
        env.pop("ACCESSKIT_PURE", None)
    root = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
    out = subprocess.run(
        [sys.executable, "-c", WORKER, root],
        capture_output=True,
        text=True,
        env=env,
        check=True,
    )
    return json.loads(out.stdout.splitlines()[-1])


def main():
    fast = run(pure=False)
    pure = run(pure=True)
    print(f"{'workload':<32} {fast['implementation']:>10} {'pure':>10} {'speedup':>8}")
    for key in fast:
        if key == "implementation":
            continue
        f, p = fast[key], pure[key]
        ratio = p / f if f > 0 else float("inf")
        print(f"{key:<32} {f:>9.3f}s {p:>9.3f}s {ratio:>7.2f}x")
    if fast["implementation"] == "pure":
        print(
            "note: compiled extension unavailable; both columns ran the "
            "pure kernels"
        )


if __name__ == "__main__":
    main()
