"""Builders that compile application gadgets into historyless systems: boolean
circuits, majority diffusion in social networks, BGP route selection, space-
bounded Turing machines, snake-in-the-box r-convergence gadgets, and the
set-disjointness system, plus the named example fixtures.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .core import ActionSpace, HistorylessSystem, State
from .errors import BudgetExceeded, InvalidInput
from .uncoupled import fixture_game_2x2x2

# ---------------------------------------------------------------------------
# Asynchronous circuits
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GateSpec:
    """A logic gate: truth table over its input wires, first wire most
    significant in the table index."""

    name: str
    inputs: tuple[str, ...]
    table: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "inputs", tuple(self.inputs))
        object.__setattr__(self, "table", tuple(int(b) for b in self.table))
        if len(self.table) != 1 << len(self.inputs):
            raise InvalidInput(
                f"gate {self.name}: table has {len(self.table)} rows for {len(self.inputs)} inputs"
            )
        if any(b not in (0, 1) for b in self.table):
            raise InvalidInput(f"gate {self.name}: table entries must be bits")


@dataclass(frozen=True)
class CircuitDescription:
    inputs: tuple[tuple[str, int], ...]  # (name, fixed bit value)
    gates: tuple[GateSpec, ...]

    def __post_init__(self):
        object.__setattr__(self, "inputs", tuple((str(n), int(v)) for n, v in self.inputs))
        object.__setattr__(self, "gates", tuple(self.gates))
        names = [n for n, _ in self.inputs] + [g.name for g in self.gates]
        if len(set(names)) != len(names):
            raise InvalidInput("input and gate names must be unique")
        if any(v not in (0, 1) for _, v in self.inputs):
            raise InvalidInput("circuit input values must be bits")
        known = set(names)
        for g in self.gates:
            for w in g.inputs:
                if w not in known:
                    raise InvalidInput(f"gate {g.name}: unknown wire {w!r}")


def circuit_node_names(circuit: CircuitDescription) -> list[str]:
    """System node names in order: inputs, gates, inserted identity nodes."""
    names = [n for n, _ in circuit.inputs] + [g.name for g in circuit.gates]
    names += [f"{g.name}.id" for g in circuit.gates if g.name in g.inputs]
    return names


def build_circuit(circuit: CircuitDescription) -> HistorylessSystem:
    """One binary node per input (constant reaction) and per gate (truth table
    over its inputs' actions).  A gate reading its own output gets an
    interposed identity node, so every reaction is self-independent; stable
    states are exactly the assignments consistent with every gate."""
    base_names = [n for n, _ in circuit.inputs] + [g.name for g in circuit.gates]
    index = {name: i for i, name in enumerate(base_names)}
    identity_of = {}
    for g in circuit.gates:
        if g.name in g.inputs:
            identity_of[g.name] = len(base_names) + len(identity_of)
    sources = []
    for g in circuit.gates:
        sources.append(
            tuple(identity_of[w] if w == g.name else index[w] for w in g.inputs)
        )
    input_values = tuple(v for _, v in circuit.inputs)
    tables = [g.table for g in circuit.gates]
    identity_reads = [index[name] for name in identity_of]
    total = len(base_names) + len(identity_of)

    def rule(state: State) -> State:
        out = list(input_values)
        for table, srcs in zip(tables, sources):
            idx = 0
            for s in srcs:
                idx = (idx << 1) | state[s]
            out.append(table[idx])
        for src in identity_reads:
            out.append(state[src])
        return tuple(out)

    space = ActionSpace((2,) * total)
    return HistorylessSystem.from_rule(space, rule, self_independent_hint=True, name="circuit")


# ---------------------------------------------------------------------------
# Technology diffusion on social networks
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SocialGraph:
    """Undirected friendship graph over users 1..n, no self-loops."""

    n: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.n < 1:
            raise InvalidInput("a social graph needs at least one user")
        seen = set()
        cleaned = []
        for u, v in self.edges:
            u, v = int(u), int(v)
            if not (1 <= u <= self.n and 1 <= v <= self.n):
                raise InvalidInput(f"edge ({u},{v}) references unknown users")
            if u == v:
                raise InvalidInput(f"self-loop at user {u}")
            key = (min(u, v), max(u, v))
            if key not in seen:
                seen.add(key)
                cleaned.append(key)
        object.__setattr__(self, "edges", tuple(cleaned))


def build_majority(graph: SocialGraph) -> HistorylessSystem:
    """Each user adopts technology X (action 0) when at least half of their
    friends use it, else Y (action 1); ties favour X, and friendless users
    stick with X."""
    neighbors: list[list[int]] = [[] for _ in range(graph.n)]
    for u, v in graph.edges:
        neighbors[u - 1].append(v - 1)
        neighbors[v - 1].append(u - 1)

    def rule(state: State) -> State:
        out = []
        for i in range(graph.n):
            nbs = neighbors[i]
            if not nbs:
                out.append(0)
                continue
            using_x = sum(1 for j in nbs if state[j] == 0)
            out.append(0 if 2 * using_x >= len(nbs) else 1)
        return tuple(out)

    space = ActionSpace((2,) * graph.n)
    return HistorylessSystem.from_rule(space, rule, self_independent_hint=True, name="majority")


# ---------------------------------------------------------------------------
# BGP route selection
# ---------------------------------------------------------------------------

Route = tuple[int, ...]


@dataclass(frozen=True)
class BgpInstance:
    """Interdomain routing instance: an AS graph with destination ``dest``,
    per-AS ranked lists of permitted simple routes (best first), and an export
    policy given as explicit denials (everything else is exported)."""

    dest: int
    edges: tuple[tuple[int, int], ...]
    rankings: tuple[tuple[int, tuple[Route, ...]], ...]
    export_deny: tuple[tuple[int, Route, int], ...] = ()

    def __post_init__(self):
        edges = tuple((min(int(u), int(v)), max(int(u), int(v))) for u, v in self.edges)
        object.__setattr__(self, "edges", edges)
        rankings = tuple(
            (int(a), tuple(tuple(int(x) for x in r) for r in routes))
            for a, routes in self.rankings
        )
        object.__setattr__(self, "rankings", rankings)
        object.__setattr__(
            self,
            "export_deny",
            tuple((int(a), tuple(int(x) for x in r), int(nb)) for a, r, nb in self.export_deny),
        )
        adjacency = self.adjacency()
        as_ids = [a for a, _ in self.rankings]
        if len(set(as_ids)) != len(as_ids):
            raise InvalidInput("duplicate AS in rankings")
        if self.dest in as_ids:
            raise InvalidInput("the destination is not a source AS")
        for a, routes in self.rankings:
            if len(set(routes)) != len(routes):
                raise InvalidInput(f"AS {a}: duplicate route in ranking")
            for r in routes:
                if len(set(r)) != len(r):
                    raise InvalidInput(f"AS {a}: route {r} is not simple")
                if not r or r[0] != a or r[-1] != self.dest:
                    raise InvalidInput(f"AS {a}: route {r} must run from {a} to {self.dest}")
                for x, y in zip(r, r[1:]):
                    if (min(x, y), max(x, y)) not in set(edges):
                        raise InvalidInput(f"AS {a}: route {r} uses the missing link ({x},{y})")

    def adjacency(self) -> dict[int, set[int]]:
        adj: dict[int, set[int]] = {}
        for u, v in self.edges:
            adj.setdefault(u, set()).add(v)
            adj.setdefault(v, set()).add(u)
        return adj


def build_bgp(instance: BgpInstance) -> HistorylessSystem:
    """BGP dynamics: each AS's action is one of its permitted routes or the
    empty route; its reaction recomputes the set of loop-free routes available
    through neighbours (respecting export policy) and picks the best-ranked
    one, or the empty route when none is available.  Stable states are the
    stable routing trees."""
    as_ids = [a for a, _ in instance.rankings]
    node_of = {a: i for i, a in enumerate(as_ids)}
    ranked = {a: list(routes) for a, routes in instance.rankings}
    rank_index = {a: {r: i for i, r in enumerate(routes)} for a, routes in instance.rankings}
    adjacency = instance.adjacency()
    denied = set(instance.export_deny)
    sizes = tuple(len(ranked[a]) + 1 for a in as_ids)  # last action = empty route

    def route_of(a: int, action: int) -> Route:
        routes = ranked[a]
        return routes[action] if action < len(routes) else ()

    def rule(state: State) -> State:
        out = []
        for a in as_ids:
            best: int | None = None
            for nb in adjacency.get(a, ()):
                if nb == instance.dest:
                    candidate = (a, instance.dest)
                elif nb in node_of:
                    r_nb = route_of(nb, state[node_of[nb]])
                    if not r_nb or a in r_nb:
                        continue
                    if (nb, r_nb, a) in denied:
                        continue
                    candidate = (a,) + r_nb
                else:
                    continue
                idx = rank_index[a].get(candidate)
                if idx is not None and (best is None or idx < best):
                    best = idx
            out.append(best if best is not None else len(ranked[a]))
        return tuple(out)

    space = ActionSpace(sizes)
    return HistorylessSystem.from_rule(space, rule, self_independent_hint=True, name="bgp")


def bgp_route_of_action(instance: BgpInstance, node: int, action: int) -> Route:
    """Decode one AS's action back into its route (the empty tuple for the
    empty route); nodes are 1-based in ranking order."""
    a, routes = instance.rankings[node - 1]
    return routes[action] if action < len(routes) else ()


# ---------------------------------------------------------------------------
# Space-bounded Turing machines
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class TMDescription:
    """A Turing machine confined to ``tape_cells`` cells: machine states with a
    designated halting subset, tape symbols 0..n_symbols-1, and a transition
    table (state, symbol) -> (state, symbol, move) total on non-halting states.
    Moves off the tape edge leave the head in place."""

    states: tuple[str, ...]
    halting: frozenset[str]
    n_symbols: int
    tape_cells: int
    delta: Mapping

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "halting", frozenset(self.halting))
        if len(set(self.states)) != len(self.states):
            raise InvalidInput("duplicate machine state names")
        if not self.halting <= set(self.states):
            raise InvalidInput("halting states must be machine states")
        if self.n_symbols < 1 or self.tape_cells < 1:
            raise InvalidInput("need at least one symbol and one tape cell")
        delta = {}
        for key, value in dict(self.delta).items():
            q, sym = key
            q2, sym2, move = value
            if q not in self.states or q in self.halting:
                raise InvalidInput(f"transition from invalid state {q!r}")
            if q2 not in self.states:
                raise InvalidInput(f"transition to unknown state {q2!r}")
            if not (0 <= sym < self.n_symbols and 0 <= sym2 < self.n_symbols):
                raise InvalidInput("transition symbol out of range")
            if move not in (-1, 0, 1):
                raise InvalidInput(f"move must be -1, 0 or 1, got {move}")
            delta[(q, sym)] = (q2, sym2, move)
        for q in self.states:
            if q in self.halting:
                continue
            for sym in range(self.n_symbols):
                if (q, sym) not in delta:
                    raise InvalidInput(f"delta is not total: missing ({q!r}, {sym})")
        object.__setattr__(self, "delta", delta)

    @property
    def head_actions(self) -> int:
        return len(self.states) * self.n_symbols * self.tape_cells * 3

    def head_encode(self, q: str, sym: int, pos: int, move: int) -> int:
        qi = self.states.index(q)
        return ((qi * self.n_symbols + sym) * self.tape_cells + (pos - 1)) * 3 + (move + 1)

    def head_decode(self, action: int) -> tuple[str, int, int, int]:
        action, move = divmod(action, 3)
        action, pos = divmod(action, self.tape_cells)
        qi, sym = divmod(action, self.n_symbols)
        return self.states[qi], sym, pos + 1, move - 1


def build_tm(tm: TMDescription) -> HistorylessSystem:
    """One node per tape cell (actions = symbols) plus a head node whose action
    is (machine state, pending symbol, position, pending move).  A cell copies
    the head's pending symbol when addressed; the head waits until the
    addressed cell shows the pending symbol, then moves (clamped to the tape)
    and applies the transition table at the new position.  The head is the
    identity on halting machine states, so halting configurations are stable."""
    n = tm.tape_cells

    def rule(state: State) -> State:
        cells = state[:n]
        q, sym, pos, move = tm.head_decode(state[n])
        out = [sym if i + 1 == pos else cells[i] for i in range(n)]
        if q in tm.halting or cells[pos - 1] != sym:
            out.append(state[n])
        else:
            new_pos = pos + move if 1 <= pos + move <= n else pos
            q2, sym2, move2 = tm.delta[(q, cells[new_pos - 1])]
            out.append(tm.head_encode(q2, sym2, new_pos, move2))
        return tuple(out)

    space = ActionSpace((tm.n_symbols,) * n + (tm.head_actions,))
    return HistorylessSystem.from_rule(space, rule, self_independent_hint=False, name="tm")


# ---------------------------------------------------------------------------
# Snakes in the box
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Snake:
    """A simple chordless cycle in the hypercube Q_z, as a vertex sequence of
    bitmask integers."""

    dimension: int
    vertices: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(int(v) for v in self.vertices))
        if not is_snake(self.dimension, self.vertices):
            raise InvalidInput(f"{self.vertices} is not a snake in Q_{self.dimension}")

    def __len__(self) -> int:
        return len(self.vertices)


def is_snake(z: int, vertices) -> bool:
    """Simple chordless cycle test: consecutive vertices differ in one bit and
    no other pair is adjacent in the hypercube."""
    vs = list(vertices)
    length = len(vs)
    if length < 4 or len(set(vs)) != length:
        return False
    if any(not 0 <= v < (1 << z) for v in vs):
        return False
    for i in range(length):
        for j in range(i + 1, length):
            adjacent = bin(vs[i] ^ vs[j]).count("1") == 1
            consecutive = j - i == 1 or (i == 0 and j == length - 1)
            if adjacent != consecutive:
                return False
    return True


DEFAULT_SNAKE_BUDGET = 20_000_000


def longest_snake(z: int, budget: int | None = None) -> Snake:
    """Exhaustive backtracking search for a maximum chordless simple cycle in
    Q_z, returning the lexicographically least one among the maxima.

    The search fixes the prefix (0, 1, 3, ...) which is reachable from any
    snake by hypercube automorphisms, so the restriction loses no length and
    the least representative starts with it.
    """
    if z < 2:
        raise InvalidInput(f"snakes need dimension >= 2, got {z}")
    if z > 7:
        raise BudgetExceeded("exhaustive snake search is supported up to dimension 7")
    limit = budget if budget is not None else DEFAULT_SNAKE_BUDGET
    size = 1 << z
    neighbors = [[v ^ (1 << b) for b in range(z)] for v in range(size)]
    for row in neighbors:
        row.sort()

    # adjcount[v] counts path vertices other than the start 0 adjacent to v, so
    # an extension must have adjcount 1 (its predecessor), and a chordless
    # closure needs adjcount[0] == 2 (the second and the final vertex).
    on_path = [False] * size
    adjcount = [0] * size
    path = [0]
    on_path[0] = True
    best: tuple[int, tuple[int, ...]] | None = None
    expansions = 0

    def push(v: int):
        on_path[v] = True
        path.append(v)
        for w in neighbors[v]:
            adjcount[w] += 1

    def pop():
        v = path.pop()
        on_path[v] = False
        for w in neighbors[v]:
            adjcount[w] -= 1

    def record():
        nonlocal best
        candidate = tuple(path)
        if (
            best is None
            or len(candidate) > best[0]
            or (len(candidate) == best[0] and candidate < best[1])
        ):
            best = (len(candidate), candidate)

    def dfs():
        nonlocal expansions
        expansions += 1
        if expansions > limit:
            raise BudgetExceeded(f"snake search exceeded {limit} expansions in Q_{z}")
        last = path[-1]
        for v in neighbors[last]:
            if v == 0:
                if len(path) >= 4 and adjcount[0] == 2:
                    record()
                continue
            if on_path[v] or adjcount[v] != 1:
                continue
            push(v)
            dfs()
            pop()

    # canonical prefix 0 -> 1 -> 3, reachable from any snake by automorphisms
    push(1)
    push(3)
    dfs()
    pop()
    pop()
    if best is None:
        raise AssertionError("every hypercube of dimension >= 2 contains a 4-cycle")
    return Snake(dimension=z, vertices=best[1])


def _orientation_bits(z: int, vertices: tuple[int, ...]) -> list[list[int]]:
    """Per cube vertex and dimension, the action bit assigned by the oriented
    dimension edge: snake edges follow the cycle, edges with one endpoint on
    the snake point at it, and the remaining edges point at their
    lexicographically least endpoint.  Both endpoints of an edge get the same
    bit, which is what makes the induced reactions self-independent."""
    on = set(vertices)
    succ = {vertices[i]: vertices[(i + 1) % len(vertices)] for i in range(len(vertices))}
    bits = [[0] * z for _ in range(1 << z)]
    for v0 in range(1 << z):
        for b in range(z):
            if (v0 >> b) & 1:
                continue
            v1 = v0 | (1 << b)
            if v0 in on and v1 in on:
                head = v1 if succ[v0] == v1 else v0
            elif v1 in on:
                head = v1
            elif v0 in on:
                head = v0
            else:
                head = v0
            bit = (head >> b) & 1
            bits[v0][b] = bit
            bits[v1][b] = bit
    return bits


def _cube_vertex(state: State) -> int:
    v = 0
    for a in state[2:]:
        v = (v << 1) | a
    return v


def snake_for_system(n: int) -> Snake:
    """The snake used by build_snake_system for n nodes (in Q_{n-2})."""
    if not 5 <= n <= 9:
        raise InvalidInput(f"snake systems support 5 <= n <= 9, got {n}")
    return longest_snake(n - 2)


def build_snake_system(n: int) -> HistorylessSystem:
    """The r-convergence gadget: nodes 1 and 2 play 0 only when everyone else
    does; cube nodes walk the snake orientation unless both 1 and 2 play 1, in
    which case they head for all-ones.  The unique stable state is all-ones,
    and the system is r-convergent exactly below the snake length."""
    snake = snake_for_system(n)
    z = n - 2
    bits = _orientation_bits(z, snake.vertices)

    def rule(state: State) -> State:
        out1 = 0 if all(a == 0 for a in state[1:]) else 1
        out2 = 0 if state[0] == 0 and all(a == 0 for a in state[2:]) else 1
        v = _cube_vertex(state)
        if state[0] == 1 and state[1] == 1:
            cube = [1] * z
        else:
            cube = [bits[v][n - j] for j in range(3, n + 1)]
        return (out1, out2, *cube)

    space = ActionSpace((2,) * n)
    return HistorylessSystem.from_rule(space, rule, self_independent_hint=True, name="snake")


def disjointness_snake(n: int) -> Snake:
    """The snake indexing the disjointness instance universe [q]: the maximal
    snake of Q_{n-2}, translated (if needed) so the all-ones vertex is not on
    it; the translation keeps length and chordlessness."""
    if not 5 <= n <= 9:
        raise InvalidInput(f"disjointness systems support 5 <= n <= 9, got {n}")
    z = n - 2
    snake = longest_snake(z)
    all_ones = (1 << z) - 1
    members = set(snake.vertices)
    if all_ones not in members:
        return snake
    shift = min(t for t in range(1 << z) if (all_ones ^ t) not in members)
    return Snake(dimension=z, vertices=tuple(v ^ shift for v in snake.vertices))


def build_disjointness(n: int, A: Iterable[int], B: Iterable[int]) -> HistorylessSystem:
    """Set-disjointness gadget over the universe [q], q the snake length.

    Node 1 plays 0 exactly when the cube spells a snake vertex indexed by A
    and node 2's action is 1 (symmetrically for node 2 with B); cube nodes
    follow the snake orientation only while both 1 and 2 play 0, else they
    head for all-ones.  The system is convergent iff A and B are disjoint.
    """
    snake = disjointness_snake(n)
    z = n - 2
    q = len(snake)
    A = frozenset(int(j) for j in A)
    B = frozenset(int(j) for j in B)
    for j in A | B:
        if not 1 <= j <= q:
            raise InvalidInput(f"index {j} outside the universe 1..{q}")
    a_vertices = {snake.vertices[j - 1] for j in A}
    b_vertices = {snake.vertices[j - 1] for j in B}
    bits = _orientation_bits(z, snake.vertices)

    def rule(state: State) -> State:
        v = _cube_vertex(state)
        out1 = 0 if (v in a_vertices and state[1] == 1) else 1
        out2 = 0 if (v in b_vertices and state[0] == 1) else 1
        if state[0] == 0 and state[1] == 0:
            cube = [bits[v][n - j] for j in range(3, n + 1)]
        else:
            cube = [1] * z
        return (out1, out2, *cube)

    space = ActionSpace((2,) * n)
    return HistorylessSystem.from_rule(space, rule, self_independent_hint=True, name="disjointness")


# ---------------------------------------------------------------------------
# Named fixtures
# ---------------------------------------------------------------------------


def _fig1() -> HistorylessSystem:
    space = ActionSpace((2, 2))
    table = [(b, a) for (a, b) in space.states()]  # each node copies the other
    return HistorylessSystem.from_table(space, table, name="fig1")


def _ex_three_stable() -> HistorylessSystem:
    space = ActionSpace((2, 2))

    def rule(state: State) -> State:
        if state == (0, 0):
            return (1, 1)
        return state

    return HistorylessSystem.from_rule(space, rule, self_independent_hint=False, name="ex-three-stable")


def _ex_unbounded_latched() -> HistorylessSystem:
    """Historyless stand-in for the unbounded-recall example: node 2 copies
    node 1; a latch node remembers ever observing node 2 at action 1; node 1
    plays 1 exactly when the latch is set.  The latch reads its own action, so
    the system is not self-independent, and it converges with stable states
    projecting to (0,0) and (1,1) on the first two nodes."""
    space = ActionSpace((2, 2, 2))

    def rule(state: State) -> State:
        a1, a2, latch = state
        new_latch = 1 if (latch == 1 or a2 == 1) else 0
        return (1 if latch == 1 else 0, a1, new_latch)

    return HistorylessSystem.from_rule(space, rule, self_independent_hint=False, name="ex-unbounded-latched")


def _ring(n: int) -> HistorylessSystem:
    if n < 2:
        raise InvalidInput("the ring example needs n >= 2")
    space = ActionSpace((2,) * n)

    def rule(state: State) -> State:
        return tuple(
            0 if all(a == 0 for j, a in enumerate(state) if j != i) else 1
            for i in range(n)
        )

    return HistorylessSystem.from_rule(space, rule, self_independent_hint=True, name="ring")


def _futile(n: int) -> HistorylessSystem:
    """Three-action system in which random initialization is futile: the two
    unanimous states 0^n and 2^n are the only stable states, and they are
    reachable exactly from the 4n+2 states that already have n-1 agreeing
    extreme actions.  Every other state is trapped: extreme counts can never
    grow past n-2 again, and the trapped region churns around the all-1 state
    forever (the all-1 state bumps its last node to 2, everything else in the
    region pulls back to all-1), so no trajectory from it stabilizes."""
    if n < 3:
        raise InvalidInput("the futile example needs n >= 3")
    space = ActionSpace((3,) * n)
    all_ones = (1,) * n

    def rule(state: State) -> State:
        trapped = (
            sum(1 for a in state if a == 0) <= n - 2
            and sum(1 for a in state if a == 2) <= n - 2
        )
        out = []
        for i in range(n):
            others = state[:i] + state[i + 1:]
            if all(a == 0 for a in others):
                out.append(0)
            elif all(a == 2 for a in others):
                out.append(2)
            elif trapped and state == all_ones and i == n - 1:
                out.append(2)
            else:
                out.append(1)
        return tuple(out)

    return HistorylessSystem.from_rule(space, rule, self_independent_hint=False, name="futile")


def fixture(name: str, **params):
    """The named example instances: "fig1", "ex-three-stable",
    "ex-unbounded-latched", "ring" (n), "futile" (n), and the "m1m2" game."""
    if name == "fig1":
        return _fig1()
    if name == "ex-three-stable":
        return _ex_three_stable()
    if name == "ex-unbounded-latched":
        return _ex_unbounded_latched()
    if name == "ring":
        return _ring(int(params.get("n", 4)))
    if name == "futile":
        return _futile(int(params.get("n", 3)))
    if name == "m1m2":
        return fixture_game_2x2x2()
    raise InvalidInput(f"unknown fixture {name!r}")
