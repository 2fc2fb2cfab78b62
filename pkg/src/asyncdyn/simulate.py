"""Trajectory simulation under explicit schedules, with exact run verdicts.

Convergence is reported only when it is permanent: a historyless system at a
fixed point, or a stationary k-recall system at a constant self-reproducing
window.  Cycling is reported only under finitely-phased schedules (periodic,
synchronous, round-robin, explicit), where a repeated (state, phase) pair is a
proof of eventual periodicity.  Seeded schedules and non-stationary systems
otherwise end in BudgetExhausted.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Union

from .core import (
    ActivationSet,
    HistorylessSystem,
    KRecallSystem,
    Periodic,
    Schedule,
    State,
    Window,
    resolve_budget,
    schedule_phase_key,
    schedule_stream,
    validate_window,
)
from .errors import InsufficientHistory, InvalidInput, InvalidWitness, Unsupported

DEFAULT_MAX_STEPS = 10 ** 6
DEFAULT_TRACE_LIMIT = 100_000


@dataclass(frozen=True)
class Trajectory:
    """Materialized prefix of a run.

    ``states`` is the retained tail of the full state sequence (which starts
    with the initial window); ``dropped`` counts states discarded at the front
    once the trace limit was hit.  ``activations[j]`` is the activation set that
    produced the state with global index ``len(initial) + adropped + j``.
    """

    initial: Window
    schedule: Schedule
    states: tuple[State, ...]
    activations: tuple[ActivationSet, ...]
    dropped: int = 0
    adropped: int = 0

    def rows(self) -> list[tuple[int, State, ActivationSet | None]]:
        """(time, state, producing activation set or None) per retained state."""
        out = []
        n_init = len(self.initial)
        for j, state in enumerate(self.states):
            g = self.dropped + j
            if g < n_init:
                out.append((g, state, None))
            else:
                local = g - n_init - self.adropped
                active = self.activations[local] if 0 <= local < len(self.activations) else None
                out.append((g, state, active))
        return out


@dataclass(frozen=True)
class Converged:
    state: State
    time: int


@dataclass(frozen=True)
class Cycling:
    period: int
    segment: tuple[State, ...]


@dataclass(frozen=True)
class BudgetExhausted:
    last_state: State


RunVerdict = Union[Converged, Cycling, BudgetExhausted]


@dataclass(frozen=True)
class Witness:
    """Replayable non-convergence certificate: an initial window plus a periodic
    schedule whose cycle activates every node."""

    initial: Window
    cycle: tuple[ActivationSet, ...]
    prefix: tuple[ActivationSet, ...] = ()

    def schedule(self) -> Periodic:
        return Periodic(cycle=self.cycle, prefix=self.prefix)


def _normalize_initial(system, initial) -> Window:
    if initial and isinstance(initial[0], int):
        initial = (tuple(initial),)
    window = validate_window(system.space, initial)
    if isinstance(system, KRecallSystem):
        if len(window) < system.k:
            raise InsufficientHistory(
                f"initial window of length {len(window)} is shorter than recall depth {system.k}"
            )
    else:
        window = window[-1:]
    return window


def run(
    system: HistorylessSystem | KRecallSystem,
    initial,
    schedule: Schedule,
    max_steps: int = DEFAULT_MAX_STEPS,
    trace_limit: int = DEFAULT_TRACE_LIMIT,
) -> tuple[Trajectory, RunVerdict]:
    """Run the system from an initial state or window under a schedule.

    Returns the materialized trajectory together with a verdict.  Verdicts are
    sound: Converged means the run can never leave the reported state again,
    and Cycling means a (state, phase) pair repeated under a finitely-phased
    schedule, so the suffix is exactly periodic.
    """
    if max_steps <= 0:
        raise InvalidInput("max_steps must be positive")
    if trace_limit < 2:
        raise InvalidInput("trace_limit must be at least 2")
    window = _normalize_initial(system, initial)
    historyless = isinstance(system, HistorylessSystem)
    k = 1 if historyless else system.k
    stationary = historyless or system.stationary
    n = system.space.n

    states: deque[State] = deque(window, maxlen=trace_limit)
    activations: deque[ActivationSet] = deque(maxlen=trace_limit)
    recent: tuple[State, ...] = window[-k:]
    t = len(window) - 1  # index of the current state a^t
    n_appended = 0

    stream = schedule_stream(schedule, n)
    for _ in range(t):
        next(stream)  # sigma(1..len(window)-1) predates the first computed state

    def stable_now() -> bool:
        if historyless:
            return system.reaction(recent[-1]) == recent[-1]
        if not stationary:
            return False
        last = recent[-1]
        return all(s == last for s in recent) and system.reaction(recent) == last

    visited: dict = {}
    verdict: RunVerdict | None = None
    for _ in range(max_steps):
        if stable_now():
            verdict = Converged(recent[-1], t)
            break
        phase = schedule_phase_key(schedule, t + 1, n)
        if phase is not None and stationary:
            key = (phase, recent)
            seen_at = visited.get(key)
            if seen_at is not None:
                period = t - seen_at
                dropped = t + 1 - len(states)
                lo = seen_at - dropped
                segment = tuple(
                    states[lo + i] for i in range(period + 1) if 0 <= lo + i < len(states)
                )
                verdict = Cycling(period, segment)
                break
            visited[key] = t
        active = next(stream)
        last = recent[-1]
        if active:
            if historyless:
                target = system.reaction(last)
            else:
                target = system.reaction(recent, t + 1)
            new = tuple(
                target[i] if (i + 1) in active else a for i, a in enumerate(last)
            )
        else:
            new = last
        t += 1
        n_appended += 1
        recent = (recent + (new,))[-k:]
        states.append(new)
        activations.append(active)
    if verdict is None:
        verdict = BudgetExhausted(recent[-1])
    dropped = t + 1 - len(states)
    adropped = n_appended - len(activations)
    trajectory = Trajectory(
        initial=window,
        schedule=schedule,
        states=tuple(states),
        activations=tuple(activations),
        dropped=dropped,
        adropped=adropped,
    )
    return trajectory, verdict


def replay_witness(
    system: HistorylessSystem | KRecallSystem,
    witness: Witness,
    budget: int | None = None,
) -> RunVerdict:
    """Re-run a witness and report the exact verdict.

    The witness cycle must be fair (its union covers every node); the replay
    budget is sized so that a repeated (state, phase) pair or a stable state is
    guaranteed within it.
    """
    n = system.space.n
    union = frozenset().union(*witness.cycle) if witness.cycle else frozenset()
    if union != frozenset(range(1, n + 1)):
        raise InvalidWitness(
            f"witness cycle activates {sorted(union)}, not all of 1..{n}"
        )
    if isinstance(system, KRecallSystem):
        if not system.stationary:
            raise Unsupported("witness replay needs a stationary system")
        phase_states = system.space.num_states ** system.k
    else:
        phase_states = system.space.num_states
    limit = resolve_budget(budget)
    if phase_states > limit:
        raise InvalidWitness(
            f"{phase_states} window states exceed the replay budget {limit}"
        )
    bound = phase_states * len(witness.cycle) + len(witness.prefix) + len(witness.initial) + 1
    _, verdict = run(system, witness.initial, witness.schedule(), max_steps=bound)
    return verdict


def format_active(active: ActivationSet) -> str:
    return "{" + ",".join(str(i) for i in sorted(active)) + "}"


def trace_lines(trajectory: Trajectory) -> list[str]:
    """Line-oriented trace: one state per line with the activation set that
    produced it (initial-window lines carry "-")."""
    lines = []
    for t, state, active in trajectory.rows():
        rendered = format_active(active) if active is not None else "-"
        lines.append(f"{t}\t{','.join(str(a) for a in state)}\t{rendered}")
    return lines
