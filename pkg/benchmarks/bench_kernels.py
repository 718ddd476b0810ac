"""Compare the compiled and pure-Python polynomial kernels.

Two levels are timed: the raw ``mul``/``add`` kernels on random sparse
polynomials, and an end-to-end pairing run in a subprocess with and without
``MNDPAIR_PURE_PYTHON``.  Results go to stdout as a small table (or JSON).
"""

from __future__ import annotations

import argparse
import json
import os
import random
import subprocess
import sys
import timeit

from mndpair.core import _pykernels
from mndpair.core.rational import Q

try:
    from mndpair.core import _ckernels
except ImportError:  # extension not built
    _ckernels = None

FIELD = _pykernels.FIELD

END_TO_END = [
    ("pair --n 2 --d 1 --g 5", ["pair", "--n", "2", "--d", "1", "--g", "5"]),
    ("pair --n 3 --d 1 --g 3", ["pair", "--n", "3", "--d", "1", "--g", "3"]),
    ("pair --n 3 --d 1 --g 2 --f 3=2", ["pair", "--n", "3", "--d", "1", "--g", "2", "--a", "2=1", "--f", "3=2"]),
]


def random_poly(rng: random.Random, nvars: int, terms: int, degree: int) -> dict:
    out = {}
    while len(out) < terms:
        key = sum(rng.randrange(degree + 1) << (FIELD * i) for i in range(nvars))
        out[key] = Q(rng.randint(-50, 50) or 1, rng.randint(1, 30))
    return out


def time_kernel(fn, repeat: int, number: int) -> float:
    return min(timeit.repeat(fn, repeat=repeat, number=number)) / number


def kernel_rows(sizes: list[int], repeat: int) -> list[dict]:
    rng = random.Random(1)
    rows = []
    for size in sizes:
        a = random_poly(rng, 3, size, 12)
        b = random_poly(rng, 3, size, 12)
        number = max(1, 20000 // (size * size))
        for op, args in (("mul", (a, b)), ("add", (a, b))):
            row = {"op": op, "terms": size}
            for name, mod in (("python", _pykernels), ("cython", _ckernels)):
                if mod is None:
                    row[name] = None
                    continue
                fn = getattr(mod, op)
                row[name] = time_kernel(lambda: fn(*args), repeat, number)
            rows.append(row)
    return rows


def end_to_end_rows(repeat: int) -> list[dict]:
    rows = []
    for label, argv in END_TO_END:
        row = {"op": label, "terms": None}
        for name, flag in (("python", "1"), ("cython", "")):
            env = dict(os.environ, MNDPAIR_PURE_PYTHON=flag)
            if not flag:
                env.pop("MNDPAIR_PURE_PYTHON")
            cmd = [sys.executable, "-m", "mndpair", *argv, "--json", "--timing"]
            best = None
            for _ in range(repeat):
                proc = subprocess.run(cmd, capture_output=True, text=True, env=env, check=True)
                ms = float(json.loads(proc.stdout)["timing_ms"])
                best = ms if best is None else min(best, ms)
            row[name] = best / 1000
        rows.append(row)
    return rows


def render(rows: list[dict]) -> str:
    lines = [f"{'operation':<34}{'terms':>7}{'python s':>13}{'cython s':>13}{'speedup':>9}"]
    for r in rows:
        py, cy = r["python"], r["cython"]
        speed = f"{py / cy:.1f}x" if py and cy else "n/a"
        cy_s = f"{cy:.2e}" if cy is not None else "missing"
        lines.append(f"{r['op']:<34}{r['terms'] or '':>7}{py:>13.2e}{cy_s:>13}{speed:>9}")
    return "\n".join(lines)


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="10,50,200", help="comma separated term counts")
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--skip-end-to-end", action="store_true")
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args(argv)

    rows = kernel_rows([int(s) for s in args.sizes.split(",")], args.repeat)
    if not args.skip_end_to_end:
        rows += end_to_end_rows(args.repeat)
    print(json.dumps(rows, indent=2) if args.json else render(rows))
    return 0


if __name__ == "__main__":
    sys.exit(main())
