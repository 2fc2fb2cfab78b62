#!/usr/bin/env python3
"""Self-stabilization grid for the uncoupled protocols.

Sweeps, per protocol, a family of games and reports how many self-stabilize.
The default run covers the exhaustive 2x2 family with utilities in {0,1,2},
seeded random 4x4 games for the 2-recall protocol, seeded 2xk games for
stay-or-roll, and the 2x2x2 fixture game on which stay-or-roll fails.  With
--exhaustive-2x3 it additionally sweeps all 531441 2x3 games with utilities in
{0,1,2} through the 3-recall protocol (takes several minutes).
"""

import argparse
import itertools
import random
import time

from asyncdyn.core import ActionSpace
from asyncdyn.games import Game
from asyncdyn.uncoupled import (
    Fails,
    NoPNE,
    SelfStabilizing,
    check_self_stabilization,
    check_self_stabilization_randomized,
    fixture_game_2x2x2,
    to_one_based,
)


def sweep_exhaustive(protocol: str, sizes, values=(0, 1, 2)):
    space = ActionSpace(sizes)
    cells = space.num_states
    counts = {"self-stabilizing": 0, "fails": 0, "no-pne": 0}
    t0 = time.time()
    for tables in itertools.product(
        itertools.product(values, repeat=cells), repeat=space.n
    ):
        game = Game(space, tables)
        verdict = check_self_stabilization(protocol, game)
        if isinstance(verdict, SelfStabilizing):
            counts["self-stabilizing"] += 1
        elif isinstance(verdict, NoPNE):
            counts["no-pne"] += 1
        else:
            counts["fails"] += 1
    total = sum(counts.values())
    print(f"{protocol} on all {total} {'x'.join(map(str, sizes))} games: {counts} ({time.time()-t0:.0f}s)")


def sweep_random(protocol: str, sizes, count: int, seed: int, hi: int = 9):
    rng = random.Random(seed)
    space = ActionSpace(sizes)
    checked = fails = 0
    t0 = time.time()
    while checked < count:
        game = Game(
            space,
            tuple(
                tuple(rng.randrange(hi + 1) for _ in range(space.num_states))
                for _ in range(space.n)
            ),
        )
        if protocol == "stay-or-roll":
            verdict = check_self_stabilization_randomized(game)
        else:
            verdict = check_self_stabilization(protocol, game)
        if isinstance(verdict, NoPNE):
            continue
        checked += 1
        fails += isinstance(verdict, Fails)
    print(
        f"{protocol} on {checked} random {'x'.join(map(str, sizes))} games "
        f"(seed {seed}): {fails} failures ({time.time()-t0:.1f}s)"
    )


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--exhaustive-2x3", action="store_true")
    args = parser.parse_args()

    sweep_exhaustive("three-recall", (2, 2))
    sweep_random("two-recall", (4, 4), count=200, seed=404)
    for k in (2, 3, 4, 5):
        sweep_random("stay-or-roll", (2, k), count=50, seed=500 + k, hi=5)

    verdict = check_self_stabilization_randomized(fixture_game_2x2x2())
    witness = to_one_based(verdict.witness) if isinstance(verdict, Fails) else None
    print(f"stay-or-roll on the 2x2x2 fixture game: {verdict.__class__.__name__}, witness {witness}")

    if args.exhaustive_2x3:
        sweep_exhaustive("three-recall", (2, 3))


if __name__ == "__main__":
    main()
