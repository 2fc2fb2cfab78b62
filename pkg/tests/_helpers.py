"""Independent oracles and generators shared by the test modules.

Everything here is deliberately naive and separate from the library's
implementation paths: plain-dict breadth-first searches instead of SCC
decompositions, subset enumeration instead of backtracking, direct simulation
instead of product graphs.  Tests compare library answers against these.
"""

from __future__ import annotations

import itertools
from collections import deque

from asyncdyn.core import ActionSpace, HistorylessSystem


def all_subsets(n):
    return [frozenset(i + 1 for i in range(n) if s >> i & 1) for s in range(1 << n)]


def reaction_table(system: HistorylessSystem) -> dict:
    return {a: system.reaction(a) for a in system.space.states()}


def naive_step(table, state, active):
    target = table[state]
    return tuple(target[i] if (i + 1) in active else a for i, a in enumerate(state))


def naive_reachable(system: HistorylessSystem, state) -> set:
    """Reachability closure via plain BFS over all activation subsets."""
    table = reaction_table(system)
    subsets = all_subsets(system.space.n)
    seen = {tuple(state)}
    queue = deque([tuple(state)])
    while queue:
        a = queue.popleft()
        for s in subsets:
            b = naive_step(table, a, s)
            if b not in seen:
                seen.add(b)
                queue.append(b)
    return seen


def naive_stables(system: HistorylessSystem) -> set:
    return {a for a, b in reaction_table(system).items() if a == b}


def naive_spectrum(system: HistorylessSystem, state) -> set:
    return naive_reachable(system, state) & naive_stables(system)


def has_fair_oscillation_from(system: HistorylessSystem, start) -> bool:
    """Is there a closed walk from ``start`` whose activation labels cover
    every node and which changes the state at least once?  BFS over
    (state, covered labels, changed flag) triples; the walk depth is bounded
    by the number of such triples, |A| * 2^n * 2."""
    table = reaction_table(system)
    n = system.space.n
    subsets = all_subsets(n)
    full = frozenset(range(1, n + 1))
    start = tuple(start)
    init = (start, frozenset(), False)
    seen = {init}
    queue = deque([init])
    while queue:
        a, covered, changed = queue.popleft()
        for s in subsets:
            b = naive_step(table, a, s)
            key = (b, covered | s, changed or b != a)
            if b == start and key[1] == full and key[2]:
                return True
            if key not in seen:
                seen.add(key)
                queue.append(key)
    return False


def oracle_convergent(system: HistorylessSystem) -> bool:
    """A system is convergent iff no state starts a covering, state-changing
    closed walk (the recurrent part of any fair non-convergent run is one)."""
    return not any(
        has_fair_oscillation_from(system, a) for a in system.space.states()
    )


def oracle_committed(system: HistorylessSystem, state):
    """Committed target of a state: its unique reachable stable state, provided
    no fair oscillation is reachable; None otherwise."""
    reach = naive_reachable(system, state)
    stables = naive_stables(system) & reach
    if len(stables) != 1:
        return None
    if any(has_fair_oscillation_from(system, a) for a in reach):
        return None
    return next(iter(stables))


# ---------------------------------------------------------------------------
# Hypercube snakes
# ---------------------------------------------------------------------------


def oracle_max_induced_cycle(z: int) -> int:
    """Maximum induced-cycle length in Q_z by enumerating all vertex subsets
    and checking 2-regularity plus connectedness.  Feasible for z <= 4."""
    size = 1 << z
    best = 0
    for mask in range(1, 1 << size):
        verts = [v for v in range(size) if mask >> v & 1]
        if len(verts) < 4 or len(verts) <= best:
            continue
        member = set(verts)
        degs = {}
        ok = True
        for v in verts:
            nbs = [v ^ (1 << b) for b in range(z) if (v ^ (1 << b)) in member]
            if len(nbs) != 2:
                ok = False
                break
            degs[v] = nbs
        if not ok:
            continue
        seen = {verts[0]}
        stack = [verts[0]]
        while stack:
            v = stack.pop()
            for w in degs[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        if len(seen) == len(verts):
            best = len(verts)
    return best


# ---------------------------------------------------------------------------
# Turing machine simulation
# ---------------------------------------------------------------------------


def tm_step(tm, config):
    """One machine step on a configuration (state, tape, 1-based position);
    None once halted.  Moves off the tape edge leave the head in place,
    matching the reduction's clamping."""
    q, tape, pos = config
    if q in tm.halting:
        return None
    q2, sym2, move = tm.delta[(q, tape[pos - 1])]
    tape2 = tape[: pos - 1] + (sym2,) + tape[pos:]
    pos2 = pos + move if 1 <= pos + move <= tm.tape_cells else pos
    return (q2, tape2, pos2)


def tm_run_outcome(tm, config) -> str:
    """Direct simulation with cycle detection: 'halts' when a halting machine
    state is reached, 'stuck' when the run freezes at a non-halting fixed
    configuration, 'loops' when a longer cycle repeats."""
    seen = set()
    while True:
        if config in seen:
            return "loops"
        seen.add(config)
        nxt = tm_step(tm, config)
        if nxt is None:
            return "halts"
        if nxt == config:
            return "stuck"
        config = nxt


def tm_all_configs(tm):
    for q in tm.states:
        if q in tm.halting:
            continue
        for tape in itertools.product(range(tm.n_symbols), repeat=tm.tape_cells):
            for pos in range(1, tm.tape_cells + 1):
                yield (q, tape, pos)


def oracle_shc(tm) -> bool:
    """Space-bounded halting from all configurations, strictly: every run must
    reach a halting machine state."""
    return all(tm_run_outcome(tm, c) == "halts" for c in tm_all_configs(tm))


def oracle_always_stabilizes(tm) -> bool:
    """Every run either halts or freezes at a fixed configuration."""
    return all(tm_run_outcome(tm, c) in ("halts", "stuck") for c in tm_all_configs(tm))


def enumerate_tms(n_q: int, symbols: int = 2, cells: int = 2):
    """All machines with n_q non-halting states plus one halting state."""
    from asyncdyn.reductions import TMDescription

    states = tuple(f"q{i}" for i in range(n_q)) + ("h",)
    targets = [
        (q2, s2, m) for q2 in states for s2 in range(symbols) for m in (-1, 0, 1)
    ]
    keys = [(q, s) for q in states[:n_q] for s in range(symbols)]
    for combo in itertools.product(targets, repeat=len(keys)):
        yield TMDescription(
            states=states,
            halting=frozenset({"h"}),
            n_symbols=symbols,
            tape_cells=cells,
            delta=dict(zip(keys, combo)),
        )


# ---------------------------------------------------------------------------
# Random instances
# ---------------------------------------------------------------------------


def random_self_independent_system(rng, max_nodes=4, max_actions=3) -> HistorylessSystem:
    """Random system built from per-node tables over the other nodes' actions,
    so self-independence holds by construction."""
    n = rng.randrange(2, max_nodes + 1)
    sizes = tuple(rng.randrange(2, max_actions + 1) for _ in range(n))
    space = ActionSpace(sizes)
    other_spaces = [
        ActionSpace(tuple(k for j, k in enumerate(sizes) if j != i)) for i in range(n)
    ]
    tables = [
        [rng.randrange(sizes[i]) for _ in range(other_spaces[i].num_states)]
        for i in range(n)
    ]

    def rule(state, tables=tables, other_spaces=other_spaces, n=n):
        return tuple(
            tables[i][other_spaces[i].encode(state[:i] + state[i + 1:])]
            for i in range(n)
        )

    return HistorylessSystem.from_rule(space, rule, self_independent_hint=True)


def random_table_system(rng, max_nodes=3, max_actions=3) -> HistorylessSystem:
    n = rng.randrange(1, max_nodes + 1)
    sizes = tuple(rng.randrange(1, max_actions + 1) for _ in range(n))
    space = ActionSpace(sizes)
    rows = [
        tuple(rng.randrange(k) for k in sizes) for _ in range(space.num_states)
    ]
    return HistorylessSystem.from_table(space, rows)


def random_game(rng, sizes, lo=0, hi=4):
    from asyncdyn.games import Game

    space = ActionSpace(tuple(sizes))
    return Game(
        space,
        tuple(
            tuple(rng.randrange(lo, hi + 1) for _ in range(space.num_states))
            for _ in range(space.n)
        ),
    )
