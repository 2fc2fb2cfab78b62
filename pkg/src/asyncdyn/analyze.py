"""Exact decision procedures over the full transition graph.

Every operation enumerates the whole state space (within the enumeration
budget), so verdicts are exact rather than sampled.  Non-convergence verdicts
always carry a replayable witness: an initial state plus a periodic schedule
read off a closed walk whose activation labels cover every node and which
changes the state at least once.  Such a walk exists inside a strongly
connected component if and only if some fair trajectory oscillates forever, so
SCC decomposition decides convergence.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy import sparse
from scipy.sparse.csgraph import connected_components

from .core import (
    ActivationSet,
    HistorylessSystem,
    LiftedSystem,
    State,
    resolve_budget,
)
from .errors import BudgetExceeded, InvalidInput, Unsupported
from .simulate import Witness

MAX_SUBSET_NODES = 16  # 2^n activation subsets are enumerated per state


def subset_to_nodes(s: int, n: int) -> ActivationSet:
    return frozenset(i + 1 for i in range(n) if (s >> i) & 1)


def nodes_to_subset(active, n: int) -> int:
    s = 0
    for i in active:
        if not 1 <= i <= n:
            raise InvalidInput(f"node index {i} out of range 1..{n}")
        s |= 1 << (i - 1)
    return s


@dataclass(frozen=True)
class Convergent:
    pass


@dataclass(frozen=True)
class NonConvergent:
    witness: Witness


ConvergenceVerdict = Union[Convergent, NonConvergent]


@dataclass(frozen=True, eq=False)
class TransitionGraph:
    """Complete labeled multigraph: one edge per (state, activation subset)."""

    system: HistorylessSystem
    states: tuple[State, ...]
    edges: tuple[tuple[State, ActivationSet, State], ...]


@dataclass(frozen=True, eq=False)
class CommitMap:
    """Per-state commitment: the single stable state every fair trajectory
    reaches, or None for uncommitted states."""

    entries: dict

    def target(self, state):
        return self.entries[state]

    def is_committed(self, state) -> bool:
        return self.entries[state] is not None

    def uncommitted(self):
        return sorted(s for s, t in self.entries.items() if t is None)


# ---------------------------------------------------------------------------
# Vectorized successor tables
# ---------------------------------------------------------------------------


def _radix_weights(sizes) -> np.ndarray:
    w = np.ones(len(sizes), dtype=np.int64)
    for i in range(len(sizes) - 2, -1, -1):
        w[i] = w[i + 1] * sizes[i + 1]
    return w


def _digit_matrix(count: int, sizes, weights) -> np.ndarray:
    idx = np.arange(count, dtype=np.int64)
    return (idx[:, None] // weights[None, :]) % np.asarray(sizes, dtype=np.int64)[None, :]


def _subset_masks(n: int) -> np.ndarray:
    if n > MAX_SUBSET_NODES:
        raise BudgetExceeded(
            f"{n} nodes means 2^{n} activation subsets per state; refusing beyond {MAX_SUBSET_NODES}"
        )
    s = np.arange(1 << n, dtype=np.int64)
    return ((s[:, None] >> np.arange(n)[None, :]) & 1).astype(bool)


def _reaction_rows(system: HistorylessSystem) -> np.ndarray:
    space = system.space
    if system.table is not None:
        rows = np.asarray(system.table, dtype=np.int64)
    else:
        rows = np.empty((space.num_states, space.n), dtype=np.int64)
        for i, state in enumerate(space.states()):
            rows[i] = system.rule(state)
    sizes = np.asarray(space.sizes, dtype=np.int64)
    if (rows < 0).any() or (rows >= sizes[None, :]).any():
        raise InvalidInput("reaction rule produced an out-of-range action")
    return rows


def successor_matrix(system, budget: int | None = None) -> np.ndarray:
    """(2^n, N) array: entry [s, a] is the encoded successor of state a under
    the activation subset with bitmask s (bit i-1 = node i)."""
    limit = resolve_budget(budget)
    if isinstance(system, HistorylessSystem):
        space = system.space
        space.check_budget(limit)
        n = space.n
        weights = _radix_weights(space.sizes)
        digits = _digit_matrix(space.num_states, space.sizes, weights)
        react = _reaction_rows(system)
        masks = _subset_masks(n)
        succ = np.empty((1 << n, space.num_states), dtype=np.int64)
        for s in range(1 << n):
            mixed = np.where(masks[s][None, :], react, digits)
            succ[s] = mixed @ weights
        return succ
    if isinstance(system, LiftedSystem):
        return _lifted_successor_matrix(system, limit)
    raise Unsupported(f"no transition interface for {type(system).__name__}")


def _lifted_successor_matrix(system: LiftedSystem, limit: int) -> np.ndarray:
    base = system.base.space
    k = system.k
    n = base.n
    total = system.num_states
    if total > limit:
        raise BudgetExceeded(f"{total} window states exceed the enumeration budget {limit}")
    weights = _radix_weights(base.sizes)
    react = np.empty((total, n), dtype=np.int64)
    for i in range(total):
        react[i] = system.base.reaction(system.decode(i))
    idx = np.arange(total, dtype=np.int64)
    nb = base.num_states
    last_enc = idx % nb
    last_digits = (last_enc[:, None] // weights[None, :]) % np.asarray(base.sizes, dtype=np.int64)[None, :]
    shifted = (idx % (nb ** (k - 1))) * nb
    masks = _subset_masks(n)
    succ = np.empty((1 << n, total), dtype=np.int64)
    for s in range(1 << n):
        mixed = np.where(masks[s][None, :], react, last_digits)
        succ[s] = shifted + mixed @ weights
    return succ


def _decode(system, idx: int):
    if isinstance(system, HistorylessSystem):
        return system.space.decode(idx)
    return system.decode(idx)


def _initial_window(system, idx: int):
    if isinstance(system, HistorylessSystem):
        return (system.space.decode(idx),)
    return system.decode(idx)


def _scc(succ: np.ndarray) -> tuple[int, np.ndarray]:
    m, count = succ.shape
    indices = succ.T.ravel()
    indptr = np.arange(0, count * m + 1, m, dtype=np.int64)
    graph = sparse.csr_matrix(
        (np.ones(count * m, dtype=np.int8), indices, indptr), shape=(count, count)
    )
    return connected_components(graph, directed=True, connection="strong")[0:2]


def _oscillating_components(succ: np.ndarray, labels: np.ndarray, ncomp: int, n: int) -> np.ndarray:
    """Components with an internal state-changing edge whose internal labels
    jointly activate every node."""
    count = succ.shape[1]
    idx = np.arange(count, dtype=np.int64)
    cover = np.zeros(ncomp, dtype=np.int64)
    changing = np.zeros(ncomp, dtype=bool)
    for s in range(succ.shape[0]):
        v = succ[s]
        internal = labels == labels[v]
        np.bitwise_or.at(cover, labels[internal], s)
        moved = internal & (v != idx)
        if moved.any():
            np.logical_or.at(changing, labels[moved], True)
    return changing & (cover == (1 << n) - 1)


# ---------------------------------------------------------------------------
# Public operations
# ---------------------------------------------------------------------------


def scc_count(system, budget: int | None = None) -> int:
    """Number of strongly connected components of the transition graph."""
    succ = successor_matrix(system, budget)
    return int(_scc(succ)[0])


def transition_graph(system: HistorylessSystem, budget: int | None = None) -> TransitionGraph:
    """Materialize the full transition multigraph (one edge per activation subset)."""
    succ = successor_matrix(system, budget)
    space = system.space
    n = space.n
    states = tuple(space.states())
    edges = []
    for a_idx, a in enumerate(states):
        for s in range(1 << n):
            edges.append((a, subset_to_nodes(s, n), states[succ[s, a_idx]]))
    return TransitionGraph(system=system, states=states, edges=tuple(edges))


def stable_states(system, budget: int | None = None) -> frozenset:
    """Exactly the fixed points of the full reaction map."""
    succ = successor_matrix(system, budget)
    idx = np.arange(succ.shape[1], dtype=np.int64)
    fixed = (succ[0] == idx) & (succ[-1] == idx)
    return frozenset(_decode(system, int(i)) for i in np.where(fixed)[0])


def spectrum(system, state, budget: int | None = None) -> frozenset:
    """Stable states reachable from the given state in the transition graph."""
    succ = successor_matrix(system, budget)
    count = succ.shape[1]
    if isinstance(system, HistorylessSystem):
        start = system.space.encode(system.space.validate_state(state))
    else:
        start = system.encode(system.validate_state(state))
    visited = np.zeros(count, dtype=bool)
    visited[start] = True
    frontier = np.array([start], dtype=np.int64)
    while frontier.size:
        nxt = np.unique(succ[:, frontier])
        nxt = nxt[~visited[nxt]]
        visited[nxt] = True
        frontier = nxt
    idx = np.arange(count, dtype=np.int64)
    fixed = (succ[0] == idx) & (succ[-1] == idx)
    return frozenset(_decode(system, int(i)) for i in np.where(fixed & visited)[0])


def decide_convergence(system, budget: int | None = None) -> ConvergenceVerdict:
    """Does every fair trajectory from every initial state converge?

    NonConvergent verdicts carry a witness: any state of an oscillating SCC as
    the initial state, with the periodic schedule read off a covering closed
    walk inside that SCC.
    """
    succ = successor_matrix(system, budget)
    n = system.n
    ncomp, labels = _scc(succ)
    osc = _oscillating_components(succ, labels, ncomp, n)
    if not osc.any():
        return Convergent()
    start = int(np.argmax(osc[labels]))
    witness = _component_witness(system, succ, labels, int(labels[start]), n)
    return NonConvergent(witness)


def _bfs_inside(succ, labels, comp, start, is_goal):
    """Deterministic BFS over internal edges; returns (subset labels, goal node)."""
    if is_goal(start):
        return [], start
    m = succ.shape[0]
    parent = {start: None}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for s in range(m):
            v = int(succ[s, u])
            if labels[v] != comp or v in parent:
                continue
            parent[v] = (u, s)
            if is_goal(v):
                path = []
                node = v
                while parent[node] is not None:
                    pu, ps = parent[node]
                    path.append(ps)
                    node = pu
                return list(reversed(path)), v
            queue.append(v)
    raise AssertionError("no internal path found; SCC invariant violated")


def _primitive_cycle(cycle: tuple) -> tuple:
    length = len(cycle)
    for p in range(1, length):
        if length % p == 0 and cycle == cycle[:p] * (length // p):
            return cycle[:p]
    return cycle


def _component_witness(system, succ, labels, comp, n) -> Witness:
    m = succ.shape[0]
    members = np.where(labels == comp)[0]
    # deterministic first state-changing internal edge
    edge = None
    for u in members.tolist():
        for s in range(1, m):
            v = int(succ[s, u])
            if v != u and labels[v] == comp:
                edge = (u, s, v)
                break
        if edge:
            break
    assert edge is not None, "oscillating component must contain a changing edge"
    u0, s0, v0 = edge
    walk = [s0]
    covered = s0
    pos = v0
    full = (1 << n) - 1
    for b in range(n):
        if covered >> b & 1:
            continue

        def has_b_edge(x, _b=b):
            return any(
                (s >> _b) & 1 and labels[int(succ[s, x])] == comp for s in range(m)
            )

        path, reached = _bfs_inside(succ, labels, comp, pos, has_b_edge)
        walk.extend(path)
        s_b = next(
            s for s in range(m) if (s >> b) & 1 and labels[int(succ[s, reached])] == comp
        )
        walk.append(s_b)
        covered |= s_b
        pos = int(succ[s_b, reached])
        if covered == full:
            break
    back, _ = _bfs_inside(succ, labels, comp, pos, lambda x: x == u0)
    walk.extend(back)
    cycle = _primitive_cycle(tuple(subset_to_nodes(s, n) for s in walk))
    return Witness(initial=_initial_window(system, u0), cycle=cycle)


def committed_map(system, budget: int | None = None) -> CommitMap:
    """For each state: the unique stable state all fair trajectories reach, or
    None when the state is uncommitted (several reachable stable states, or a
    reachable fair oscillation)."""
    succ = successor_matrix(system, budget)
    count = succ.shape[1]
    n = system.n
    ncomp, labels = _scc(succ)
    osc = _oscillating_components(succ, labels, ncomp, n)

    pair_keys = set()
    for s in range(succ.shape[0]):
        lu = labels
        lv = labels[succ[s]]
        diff = lu != lv
        if diff.any():
            keys = np.unique(lu[diff].astype(np.int64) * ncomp + lv[diff])
            pair_keys.update(keys.tolist())
    cadj: list[list[int]] = [[] for _ in range(ncomp)]
    radj: list[list[int]] = [[] for _ in range(ncomp)]
    indeg = [0] * ncomp
    for key in sorted(pair_keys):
        cu, cv = divmod(key, ncomp)
        cadj[cu].append(cv)
        radj[cv].append(cu)
        indeg[cv] += 1

    reaches_osc = osc.copy()
    queue = deque(int(c) for c in np.where(osc)[0])
    while queue:
        c = queue.popleft()
        for p in radj[c]:
            if not reaches_osc[p]:
                reaches_osc[p] = True
                queue.append(p)

    idx = np.arange(count, dtype=np.int64)
    fixed = (succ[0] == idx) & (succ[-1] == idx)
    stable_idx = np.where(fixed)[0].tolist()
    stable_bit = {int(si): 1 << j for j, si in enumerate(stable_idx)}
    own_bits = [0] * ncomp
    for si in stable_idx:
        own_bits[int(labels[si])] |= stable_bit[int(si)]

    order = []
    todo = deque(c for c in range(ncomp) if indeg[c] == 0)
    indeg_work = list(indeg)
    while todo:
        c = todo.popleft()
        order.append(c)
        for child in cadj[c]:
            indeg_work[child] -= 1
            if indeg_work[child] == 0:
                todo.append(child)
    reach_bits = list(own_bits)
    for c in reversed(order):
        for child in cadj[c]:
            reach_bits[c] |= reach_bits[child]

    entries = {}
    for i in range(count):
        c = int(labels[i])
        bits = reach_bits[c]
        if reaches_osc[c] or bits == 0 or bits & (bits - 1):
            entries[_decode(system, i)] = None
        else:
            entries[_decode(system, i)] = _decode(system, stable_idx[bits.bit_length() - 1])
    return CommitMap(entries=entries)


# ---------------------------------------------------------------------------
# r-fair convergence via the counter product graph
# ---------------------------------------------------------------------------


def decide_r_convergence(system, r: int, budget: int | None = None) -> ConvergenceVerdict:
    """Does every r-fair trajectory converge?

    Each state is augmented with per-node steps-since-activation counters in
    0..r-1 (initially 0); transitions that would push a counter to r are
    forbidden, so every infinite path of the product graph is exactly an r-fair
    run.  The system is r-convergent iff no cycle reachable from a zero-counter
    state changes the underlying state.
    """
    if r < 1:
        raise InvalidInput(f"r must be >= 1, got {r}")
    succ = successor_matrix(system, budget)
    n = system.n
    count = succ.shape[1]
    m = succ.shape[0]
    M = r ** n
    limit = resolve_budget(budget)
    if count * M > limit:
        raise BudgetExceeded(
            f"product graph has {count * M} states, exceeding the budget {limit}"
        )

    rweights = _radix_weights([r] * n)
    cdig = _digit_matrix(M, [r] * n, rweights)
    masks = _subset_masks(n)
    cmap = np.empty((m, M), dtype=np.int64)
    for s in range(m):
        new = np.where(masks[s][None, :], 0, cdig + 1)
        bad = (new >= r).any(axis=1)
        enc = new @ rweights
        enc[bad] = -1
        cmap[s] = enc

    total = count * M
    sources = np.arange(count, dtype=np.int64) * M  # all counters zero
    visited = np.zeros(total, dtype=bool)
    visited[sources] = True
    parent = np.full(total, -1, dtype=np.int64)
    pedge = np.full(total, -1, dtype=np.int16)
    frontier = sources
    while frontier.size:
        pieces = []
        for s in range(m):
            vc = cmap[s, frontier % M]
            ok = vc >= 0
            if not ok.any():
                continue
            src = frontier[ok]
            tgt = succ[s, src // M] * M + vc[ok]
            fresh = ~visited[tgt]
            if not fresh.any():
                continue
            t_new = tgt[fresh]
            s_new = src[fresh]
            uniq, first = np.unique(t_new, return_index=True)
            visited[uniq] = True
            parent[uniq] = s_new[first]
            pedge[uniq] = s
            pieces.append(uniq)
        frontier = np.sort(np.concatenate(pieces)) if pieces else np.empty(0, dtype=np.int64)

    reachable = np.where(visited)[0]
    R = reachable.size
    pos = np.full(total, -1, dtype=np.int64)
    pos[reachable] = np.arange(R)

    rows, cols, esub = [], [], []
    for s in range(m):
        vc = cmap[s, reachable % M]
        ok = vc >= 0
        src_rows = np.where(ok)[0]
        tgt = succ[s, reachable[ok] // M] * M + vc[ok]
        rows.append(src_rows)
        cols.append(pos[tgt])
        esub.append(np.full(src_rows.size, s, dtype=np.int16))
    rows = np.concatenate(rows)
    cols = np.concatenate(cols)
    esub = np.concatenate(esub)
    graph = sparse.csr_matrix(
        (np.ones(rows.size, dtype=np.int8), (rows, cols)), shape=(R, R)
    )
    ncomp, labels = connected_components(graph, directed=True, connection="strong")[0:2]

    u_state = reachable // M
    internal = labels[rows] == labels[cols]
    moved = internal & (u_state[rows] != u_state[cols])
    if not moved.any():
        return Convergent()

    # deterministic changing edge: smallest (product index, subset)
    cand = np.where(moved)[0]
    order = np.lexsort((esub[cand], reachable[rows[cand]]))
    pick = cand[order[0]]
    u_prod = int(reachable[rows[pick]])
    s_chg = int(esub[pick])
    v_row = int(cols[pick])
    comp = int(labels[rows[pick]])

    prefix_subsets = []
    node = u_prod
    while parent[node] >= 0:
        prefix_subsets.append(int(pedge[node]))
        node = int(parent[node])
    prefix_subsets.reverse()
    source_state = int(node // M)

    back = _product_bfs(succ, cmap, M, labels, pos, comp, int(reachable[v_row]), u_prod)
    cycle = _primitive_cycle(
        tuple(subset_to_nodes(s, n) for s in [s_chg] + back)
    )
    prefix = tuple(subset_to_nodes(s, n) for s in prefix_subsets)
    full_nodes = frozenset(range(1, n + 1))
    assert frozenset().union(*cycle) == full_nodes, "r-fair cycle must activate every node"
    return NonConvergent(
        Witness(initial=_initial_window(system, source_state), cycle=cycle, prefix=prefix)
    )


def _product_bfs(succ, cmap, M, labels, pos, comp, start, goal):
    """BFS over product edges restricted to one SCC, from start back to goal."""
    if start == goal:
        return []
    m = succ.shape[0]
    parent = {start: None}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        uc = u % M
        us = u // M
        for s in range(m):
            vc = int(cmap[s, uc])
            if vc < 0:
                continue
            v = int(succ[s, us]) * M + vc
            if pos[v] < 0 or labels[pos[v]] != comp or v in parent:
                continue
            parent[v] = (u, s)
            if v == goal:
                path = []
                node = v
                while parent[node] is not None:
                    pu, ps = parent[node]
                    path.append(ps)
                    node = pu
                return list(reversed(path))
            queue.append(v)
    raise AssertionError("no product path found; SCC invariant violated")
