"""Compare the compiled and pure-Python polynomial kernels.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Workloads are dense products and exact divisions of random bivariate and
trivariate polynomials with big integer coefficients, close to what the
focal value computation does.
"""
import argparse
import random
import time

from lvcycles.mpoly import MPoly
from lvcycles.mpoly import _kernels_py as py

try:
    from lvcycles.mpoly import _ckernels as cy
except ImportError:
    cy = None


def random_poly(rng, vars, degree, terms, bits):
    p = MPoly.const(0, vars)
    for _ in range(terms):
        e = [rng.randint(0, degree) for _ in vars]
        m = MPoly.const(rng.getrandbits(bits) - (1 << (bits - 1)), vars)
        for v, k in zip(vars, e):
            m = m * MPoly.var(v, vars) ** k
        p = p + m
    return p


def workloads(seed=1):
    rng = random.Random(seed)
    out = []
    for vars, deg, terms in ((("λ", "n"), 14, 60), (("λ", "n", "μ"), 6, 50)):
        a = random_poly(rng, vars, deg, terms, 64)
        b = random_poly(rng, vars, deg, terms, 64)
        prod = a * b
        limit = max(prod.terms) // 2
        out.append((f"mul {len(vars)}v", lambda k, a=a, b=b: k.mul_terms(a.terms, b.terms)))
        out.append((f"mul_trunc {len(vars)}v", lambda k, a=a, b=b, L=limit: k.mul_terms_trunc(a.terms, b.terms, L)))
        out.append((f"add {len(vars)}v", lambda k, a=prod, b=prod: k.add_terms(a.terms, b.terms, -1)))
        out.append((f"divexact {len(vars)}v", lambda k, p=prod, b=b: k.divexact_terms(p.vars, p.terms, b.terms)))
    return out


def best(fn, kernel, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(kernel)
        times.append(time.perf_counter() - t0)
    return min(times)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    if cy is None:
        print("compiled kernels not built; only the pure-Python timings are shown")
    print(f"{'workload':<16}{'python':>12}{'compiled':>12}{'speedup':>10}")
    for name, fn in workloads():
        tp = best(fn, py, args.repeat)
        if cy is None:
            print(f"{name:<16}{tp * 1e3:>10.2f}ms")
            continue
        assert fn(py) == fn(cy), f"kernels disagree on {name}"
        tc = best(fn, cy, args.repeat)
        print(f"{name:<16}{tp * 1e3:>10.2f}ms{tc * 1e3:>10.2f}ms{tp / tc:>9.2f}x")


if __name__ == "__main__":
    main()
