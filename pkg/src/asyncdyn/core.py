"""Finite interaction systems: states, reaction maps, schedules, single-step updates.

Nodes are numbered 1..n and activation sets are subsets of {1..n}.  Actions are
0-based integers; a joint state is a tuple with one action per node.  States are
encoded as mixed-radix integers (node n least significant) wherever a table or
graph index is needed, and the encode/decode bijection lives on ActionSpace.
"""

from __future__ import annotations

import math
import os
import random
from dataclasses import dataclass
from itertools import product
from typing import Callable, Iterable, Iterator, Union

from .errors import BudgetExceeded, InsufficientHistory, InvalidInput, Unsupported

State = tuple[int, ...]
Window = tuple[State, ...]
ActivationSet = frozenset[int]

DEFAULT_STATE_BUDGET = 2 ** 20
BUDGET_ENV_VAR = "ASYNCDYN_BUDGET"


def resolve_budget(budget: int | None = None) -> int:
    """Effective enumeration budget: explicit argument, else env override, else default."""
    if budget is not None:
        if budget < 1:
            raise InvalidInput("budget must be positive")
        return budget
    env = os.environ.get(BUDGET_ENV_VAR)
    if env:
        return int(env)
    return DEFAULT_STATE_BUDGET


def activation_set(nodes: Iterable[int]) -> ActivationSet:
    return frozenset(int(i) for i in nodes)


@dataclass(frozen=True)
class ActionSpace:
    """Per-node action counts k_1..k_n; the joint state space is their product."""

    sizes: tuple[int, ...]

    def __post_init__(self):
        sizes = tuple(int(k) for k in self.sizes)
        if not sizes:
            raise InvalidInput("an action space needs at least one node")
        if any(k < 1 for k in sizes):
            raise InvalidInput(f"every action count must be >= 1, got {sizes}")
        object.__setattr__(self, "sizes", sizes)

    @property
    def n(self) -> int:
        return len(self.sizes)

    @property
    def num_states(self) -> int:
        return math.prod(self.sizes)

    def encode(self, state: State) -> int:
        idx = 0
        for a, k in zip(state, self.sizes):
            idx = idx * k + a
        return idx

    def decode(self, idx: int) -> State:
        out = []
        for k in reversed(self.sizes):
            out.append(idx % k)
            idx //= k
        return tuple(reversed(out))

    def states(self) -> Iterator[State]:
        """All joint states in encoded (lexicographic) order."""
        return product(*(range(k) for k in self.sizes))

    def validate_state(self, state) -> State:
        state = tuple(state)
        if len(state) != self.n:
            raise InvalidInput(f"state {state} has {len(state)} coordinates, expected {self.n}")
        for a, k in zip(state, self.sizes):
            if not isinstance(a, int) or not 0 <= a < k:
                raise InvalidInput(f"action {a} out of range [0, {k}) in state {state}")
        return state

    def validate_active(self, active: Iterable[int]) -> ActivationSet:
        active = frozenset(active)
        for i in active:
            if not isinstance(i, int) or not 1 <= i <= self.n:
                raise InvalidInput(f"node index {i} out of range 1..{self.n}")
        return active

    def check_budget(self, budget: int | None = None) -> int:
        limit = resolve_budget(budget)
        if self.num_states > limit:
            raise BudgetExceeded(
                f"{self.num_states} joint states exceed the enumeration budget {limit}"
            )
        return self.num_states


def without(state: State, node: int) -> State:
    """Projection a_{-i}: drop the 1-based node's coordinate."""
    return state[: node - 1] + state[node:]


@dataclass(frozen=True)
class HistorylessSystem:
    """System whose reaction map reads only the current state.

    The reaction is stored as an explicit table (indexed by encoded state), as a
    rule evaluated lazily, or both.  ``self_independent_hint`` is a declared
    property trusted only when the space is too large to check exhaustively.
    """

    space: ActionSpace
    table: tuple[State, ...] | None = None
    rule: Callable[[State], State] | None = None
    self_independent_hint: bool | None = None
    name: str = ""

    def __post_init__(self):
        if self.table is None and self.rule is None:
            raise InvalidInput("a system needs a reaction table or a reaction rule")

    @classmethod
    def from_table(cls, space: ActionSpace, rows: Iterable[State], name: str = "") -> "HistorylessSystem":
        table = tuple(space.validate_state(row) for row in rows)
        if len(table) != space.num_states:
            raise InvalidInput(
                f"reaction table has {len(table)} rows, expected {space.num_states}"
            )
        return cls(space=space, table=table, name=name)

    @classmethod
    def from_rule(
        cls,
        space: ActionSpace,
        rule: Callable[[State], State],
        self_independent_hint: bool | None = None,
        name: str = "",
    ) -> "HistorylessSystem":
        return cls(space=space, rule=rule, self_independent_hint=self_independent_hint, name=name)

    @property
    def n(self) -> int:
        return self.space.n

    @property
    def num_states(self) -> int:
        return self.space.num_states

    def reaction(self, state: State) -> State:
        state = self.space.validate_state(state)
        if self.table is not None:
            return self.table[self.space.encode(state)]
        return self.space.validate_state(self.rule(state))

    def transition(self, state: State, active: Iterable[int]) -> State:
        return step(self, state, active)

    def tabulate(self, budget: int | None = None) -> "HistorylessSystem":
        """Materialized copy; the table is computed from the rule within budget."""
        if self.table is not None:
            return self
        self.space.check_budget(budget)
        rows = tuple(self.space.validate_state(self.rule(s)) for s in self.space.states())
        return HistorylessSystem(
            space=self.space,
            table=rows,
            rule=self.rule,
            self_independent_hint=self.self_independent_hint,
            name=self.name,
        )


@dataclass(frozen=True)
class KRecallSystem:
    """System whose reaction reads the k most recent states (and the time counter
    unless stationary).

    ``rule(window) -> State`` for stationary systems, ``rule(window, t) -> State``
    otherwise, where ``window`` is the tuple of the k most recent states and ``t``
    is the index of the state being produced.
    """

    space: ActionSpace
    k: int
    rule: Callable
    stationary: bool = True
    name: str = ""

    def __post_init__(self):
        if self.k < 1:
            raise InvalidInput(f"recall depth must be >= 1, got {self.k}")

    @property
    def n(self) -> int:
        return self.space.n

    def reaction(self, window: Window, t: int | None = None) -> State:
        if len(window) != self.k:
            raise InsufficientHistory(f"expected a window of exactly {self.k} states")
        if self.stationary:
            return self.space.validate_state(self.rule(window))
        if t is None:
            raise InvalidInput("non-stationary reactions need the time counter")
        return self.space.validate_state(self.rule(window, t))


def validate_window(space: ActionSpace, window) -> Window:
    window = tuple(space.validate_state(s) for s in window)
    if not window:
        raise InvalidInput("a history window must be nonempty")
    return window


def step(system: HistorylessSystem, state: State, active: Iterable[int]) -> State:
    """One update step: activated nodes apply the reaction map, the rest persist."""
    state = system.space.validate_state(state)
    active = system.space.validate_active(active)
    if not active:
        return state
    target = system.reaction(state)
    return tuple(
        target[i] if (i + 1) in active else a for i, a in enumerate(state)
    )


def step_history(
    system: KRecallSystem, window, t: int | None, active: Iterable[int]
) -> State:
    """One update step of a k-recall system from a history window.

    ``t`` is the index of the state being produced (histories a^0..a^{t-1} have
    length t); it must be at least k and is ignored by stationary systems.
    """
    window = validate_window(system.space, window)
    active = system.space.validate_active(active)
    if len(window) < system.k:
        raise InsufficientHistory(
            f"window of length {len(window)} is shorter than recall depth {system.k}"
        )
    if t is not None and t < system.k:
        raise InvalidInput(f"reactions are defined only for t >= {system.k}")
    if not system.stationary and t is None:
        raise InvalidInput("non-stationary systems need the time counter")
    last = window[-1]
    if not active:
        return last
    target = system.reaction(window[-system.k:], t)
    return tuple(
        target[i] if (i + 1) in active else a for i, a in enumerate(last)
    )


def is_stable(system, state) -> bool:
    """Fixed point test: the state persists under every activation set."""
    if isinstance(system, HistorylessSystem):
        state = system.space.validate_state(state)
        return system.reaction(state) == state
    if isinstance(system, LiftedSystem):
        return system.is_stable(state)
    raise Unsupported(f"is_stable is not defined for {type(system).__name__}")


@dataclass(frozen=True)
class SelfIndependence:
    """Outcome of a self-independence check, with violating witnesses if any."""

    ok: bool
    violations: tuple[tuple[int, State, State], ...]

    def __bool__(self) -> bool:
        return self.ok


def check_self_independent(
    system: HistorylessSystem, budget: int | None = None, max_violations: int = 16
) -> SelfIndependence:
    """Does every node's reaction ignore that node's own current action?

    Exhaustive over all pairs of states differing in one coordinate.  Beyond the
    enumeration budget the declared hint is trusted if present.
    """
    space = system.space
    limit = resolve_budget(budget)
    if space.num_states > limit:
        if system.self_independent_hint is not None:
            return SelfIndependence(system.self_independent_hint, ())
        raise BudgetExceeded(
            f"{space.num_states} joint states exceed the enumeration budget {limit}"
        )
    tabulated = system.tabulate(limit)
    violations: list[tuple[int, State, State]] = []
    for i in range(space.n):
        k_i = space.sizes[i]
        if k_i == 1:
            continue
        other_ranges = [range(k) for j, k in enumerate(space.sizes) if j != i]
        for others in product(*other_ranges):
            base = others[:i] + (0,) + others[i:]
            expected = tabulated.reaction(base)[i]
            for a in range(1, k_i):
                variant = others[:i] + (a,) + others[i:]
                if tabulated.reaction(variant)[i] != expected:
                    violations.append((i + 1, base, variant))
                    break
            if len(violations) >= max_violations:
                return SelfIndependence(False, tuple(violations))
    return SelfIndependence(not violations, tuple(violations))


@dataclass(frozen=True)
class LiftedSystem:
    """Window-space view of a stationary k-recall system.

    States are k-windows over the base space.  Activating S shifts the window
    and applies the recall rule at the activated coordinates; non-activated
    coordinates copy the most recent state.  This is deliberately not a
    coordinate-wise reaction table over the window space (the shift moves every
    node's column), so the object exposes the same generic transition interface
    the analyzer and simulator consume.
    """

    base: KRecallSystem

    def __post_init__(self):
        if not self.base.stationary:
            raise Unsupported("only stationary k-recall systems have a finite lifting")

    @property
    def k(self) -> int:
        return self.base.k

    @property
    def n(self) -> int:
        return self.base.space.n

    @property
    def num_states(self) -> int:
        return self.base.space.num_states ** self.base.k

    def encode(self, window: Window) -> int:
        base = self.base.space
        idx = 0
        for s in window:
            idx = idx * base.num_states + base.encode(s)
        return idx

    def decode(self, idx: int) -> Window:
        base = self.base.space
        out = []
        for _ in range(self.base.k):
            out.append(base.decode(idx % base.num_states))
            idx //= base.num_states
        return tuple(reversed(out))

    def validate_state(self, window) -> Window:
        window = validate_window(self.base.space, window)
        if len(window) != self.base.k:
            raise InvalidInput(f"lifted states are windows of exactly {self.base.k} states")
        return window

    def transition(self, window, active: Iterable[int]) -> Window:
        window = self.validate_state(window)
        active = self.base.space.validate_active(active)
        last = window[-1]
        if active:
            target = self.base.reaction(window)
            new = tuple(
                target[i] if (i + 1) in active else a for i, a in enumerate(last)
            )
        else:
            new = last
        return window[1:] + (new,)

    def is_stable(self, window) -> bool:
        window = self.validate_state(window)
        last = window[-1]
        return all(s == last for s in window) and self.base.reaction(window) == last


def lift_k_recall(system: KRecallSystem) -> LiftedSystem:
    """Historyless view of a stationary k-recall system over k-windows."""
    return LiftedSystem(system)


# ---------------------------------------------------------------------------
# Schedules
# ---------------------------------------------------------------------------


def _normalize_sets(sets) -> tuple[ActivationSet, ...]:
    return tuple(frozenset(int(i) for i in s) for s in sets)


@dataclass(frozen=True)
class Synchronous:
    """Every node is activated at every step."""


@dataclass(frozen=True)
class RoundRobin:
    """Singleton activations cycling through nodes 1..n."""


@dataclass(frozen=True)
class ExplicitList:
    """A finite list of activation sets; the schedule continues with empty sets."""

    sets: tuple[ActivationSet, ...]

    def __post_init__(self):
        object.__setattr__(self, "sets", _normalize_sets(self.sets))


@dataclass(frozen=True)
class Periodic:
    """A finite prefix followed by a nonempty cycle repeated forever."""

    cycle: tuple[ActivationSet, ...]
    prefix: tuple[ActivationSet, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "cycle", _normalize_sets(self.cycle))
        object.__setattr__(self, "prefix", _normalize_sets(self.prefix))
        if not self.cycle:
            raise InvalidInput("a periodic schedule needs a nonempty cycle")


@dataclass(frozen=True)
class SeededRandom:
    """Each node is activated independently with probability p per step."""

    seed: int
    p: float = 0.5

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise InvalidInput(f"activation probability must be in [0, 1], got {self.p}")


@dataclass(frozen=True)
class SeededRFair:
    """Seeded random schedule constrained to be r-fair from the first window."""

    seed: int
    r: int

    def __post_init__(self):
        if self.r < 1:
            raise InvalidInput(f"r must be >= 1, got {self.r}")


Schedule = Union[Synchronous, RoundRobin, ExplicitList, Periodic, SeededRandom, SeededRFair]


def schedule_stream(schedule: Schedule, n: int) -> Iterator[ActivationSet]:
    """The infinite activation-set sequence sigma(1), sigma(2), ... for n nodes."""
    if isinstance(schedule, Synchronous):
        full = frozenset(range(1, n + 1))
        while True:
            yield full
    elif isinstance(schedule, RoundRobin):
        t = 0
        while True:
            yield frozenset({(t % n) + 1})
            t += 1
    elif isinstance(schedule, ExplicitList):
        yield from schedule.sets
        while True:
            yield frozenset()
    elif isinstance(schedule, Periodic):
        yield from schedule.prefix
        while True:
            yield from schedule.cycle
    elif isinstance(schedule, SeededRandom):
        rng = random.Random(schedule.seed)
        while True:
            yield frozenset(i for i in range(1, n + 1) if rng.random() < schedule.p)
    elif isinstance(schedule, SeededRFair):
        rng = random.Random(schedule.seed)
        missed = [0] * n
        while True:
            chosen = {i for i in range(1, n + 1) if rng.random() < 0.5}
            chosen.update(i for i in range(1, n + 1) if missed[i - 1] >= schedule.r - 1)
            yield frozenset(chosen)
            for i in range(n):
                missed[i] = 0 if (i + 1) in chosen else missed[i] + 1
    else:
        raise InvalidInput(f"unknown schedule kind {type(schedule).__name__}")


def schedule_prefix(schedule: Schedule, length: int, n: int) -> list[ActivationSet]:
    """The first ``length`` activation sets of the schedule, deterministically."""
    if length < 0:
        raise InvalidInput("length must be >= 0")
    stream = schedule_stream(schedule, n)
    return [next(stream) for _ in range(length)]


def check_r_fair(prefix, r: int, n: int) -> bool:
    """Does every node appear in every window of r consecutive activation sets?

    Only windows lying fully inside the prefix are checked, starting with the
    first one.
    """
    if r < 1:
        raise InvalidInput(f"r must be >= 1, got {r}")
    sets = _normalize_sets(prefix)
    nodes = range(1, n + 1)
    for start in range(len(sets) - r + 1):
        window = frozenset().union(*sets[start : start + r])
        if any(i not in window for i in nodes):
            return False
    return True


def schedule_phase_key(schedule: Schedule, t: int, n: int):
    """Finite phase identifier at step t (1-based), or None when the schedule has
    unbounded phase (seeded schedules).  Trajectory suffixes from equal (state,
    phase) pairs coincide, which is what exact cycle detection needs."""
    if isinstance(schedule, Synchronous):
        return 0
    if isinstance(schedule, RoundRobin):
        return (t - 1) % n
    if isinstance(schedule, ExplicitList):
        if t <= len(schedule.sets):
            return ("prefix", t)
        return 0
    if isinstance(schedule, Periodic):
        if t <= len(schedule.prefix):
            return ("prefix", t)
        return (t - len(schedule.prefix) - 1) % len(schedule.cycle)
    return None
