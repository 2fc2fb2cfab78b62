#!/usr/bin/env python3
"""Print the r-convergence thresholds of the ring family and the snake-gadget
systems: the ring flips from convergent to non-convergent at r = n-1, the
snake systems at r = |S| for the snake length |S| of the underlying hypercube.

Usage: python scripts/r_thresholds.py [--max-ring N] [--snake-nodes N]
"""

import argparse
import time

from asyncdyn.analyze import Convergent, decide_r_convergence
from asyncdyn.reductions import build_snake_system, fixture, snake_for_system


def ring_row(n: int) -> str:
    ring = fixture("ring", n=n)
    cells = []
    for r in range(1, n + 1):
        verdict = decide_r_convergence(ring, r)
        cells.append("conv" if isinstance(verdict, Convergent) else "osc ")
    return f"ring n={n}:  " + "  ".join(f"r={r}:{c}" for r, c in enumerate(cells, 1))


def snake_row(n: int) -> str:
    system = build_snake_system(n)
    q = len(snake_for_system(n))
    t0 = time.time()
    low = decide_r_convergence(system, q - 1)
    high = decide_r_convergence(system, q)
    return (
        f"snake n={n} (|S|={q}):  r={q-1}:"
        f"{'conv' if isinstance(low, Convergent) else 'osc'}  r={q}:"
        f"{'conv' if isinstance(high, Convergent) else 'osc'}"
        f"  ({time.time() - t0:.1f}s)"
    )


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--max-ring", type=int, default=6)
    parser.add_argument("--snake-nodes", type=int, default=5)
    args = parser.parse_args()
    for n in range(3, args.max_ring + 1):
        print(ring_row(n))
    print(snake_row(args.snake_nodes))


if __name__ == "__main__":
    main()
