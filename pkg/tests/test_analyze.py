"""Whole-graph analysis against independent brute-force oracles.

The convergence oracle searches, from every state, for a closed walk whose
activation labels cover all nodes and which changes the state; commitment and
spectra are checked against plain reachability closures.  Expected values in
the named-example tests were computed with these oracles and frozen.
"""

import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from asyncdyn.analyze import (
    Convergent,
    NonConvergent,
    committed_map,
    decide_convergence,
    decide_r_convergence,
    spectrum,
    stable_states,
    transition_graph,
)
from asyncdyn.core import ActionSpace, HistorylessSystem, check_r_fair, lift_k_recall, KRecallSystem
from asyncdyn.errors import BudgetExceeded, InvalidInput
from asyncdyn.reductions import fixture
from asyncdyn.simulate import Cycling, replay_witness

from _helpers import (
    naive_spectrum,
    naive_stables,
    oracle_committed,
    oracle_convergent,
    random_self_independent_system,
    random_table_system,
)


@pytest.fixture
def fig1():
    return fixture("fig1")


def assert_witness_replays(system, verdict):
    assert isinstance(verdict, NonConvergent)
    witness = verdict.witness
    n = system.space.n if isinstance(system, (HistorylessSystem, KRecallSystem)) else system.n
    assert frozenset().union(*witness.cycle) == frozenset(range(1, n + 1))
    replay_on = system.base if hasattr(system, "base") else system
    replayed = replay_witness(replay_on, witness)
    assert isinstance(replayed, Cycling)
    assert len(set(replayed.segment)) >= 2  # the oscillation really moves


class TestTransitionGraph:
    def test_fig1_shape(self, fig1):
        graph = transition_graph(fig1)
        assert len(graph.states) == 4
        assert len(graph.edges) == 16
        assert ((0, 1), frozenset({2}), (0, 0)) in graph.edges

    def test_single_node_identity(self):
        system = HistorylessSystem.from_rule(ActionSpace((1,)), lambda s: s)
        graph = transition_graph(system)
        assert len(graph.states) == 1
        assert len(graph.edges) == 2
        assert all(a == b for a, _, b in graph.edges)

    def test_out_degree_and_empty_loops(self):
        system = random_table_system(random.Random(3), max_nodes=3)
        graph = transition_graph(system)
        n = system.space.n
        per_state = {}
        for a, s, b in graph.edges:
            per_state[a] = per_state.get(a, 0) + 1
            if not s:
                assert a == b
        assert all(count == 2 ** n for count in per_state.values())

    def test_budget(self):
        system = HistorylessSystem.from_rule(ActionSpace((4, 4, 4)), lambda s: s)
        with pytest.raises(BudgetExceeded):
            transition_graph(system, budget=10)


class TestStableStates:
    def test_fig1(self, fig1):
        assert stable_states(fig1) == {(0, 0), (1, 1)}

    def test_ring(self):
        for n in (3, 4, 5):
            ring = fixture("ring", n=n)
            assert stable_states(ring) == {(0,) * n, (1,) * n}

    def test_futile(self):
        futile = fixture("futile", n=3)
        assert stable_states(futile) == {(0, 0, 0), (2, 2, 2)}

    @given(st.integers(min_value=0, max_value=10 ** 6))
    @settings(max_examples=30)
    def test_matches_naive_fixed_points(self, seed):
        system = random_table_system(random.Random(seed))
        assert stable_states(system) == naive_stables(system)


class TestSpectrum:
    def test_fig1_uncommitted_state_sees_both(self, fig1):
        expected = naive_spectrum(fig1, (0, 1))  # oracle: BFS closure
        assert expected == {(0, 0), (1, 1)}
        assert spectrum(fig1, (0, 1)) == expected

    def test_stable_state_is_its_own_spectrum(self, fig1):
        for b in stable_states(fig1):
            assert spectrum(fig1, b) == {b}

    def test_futile_middle_is_empty(self):
        futile = fixture("futile", n=3)
        assert spectrum(futile, (1, 1, 1)) == frozenset()

    @given(st.integers(min_value=0, max_value=10 ** 6))
    @settings(max_examples=25, deadline=None)
    def test_matches_reachability_oracle(self, seed):
        rng = random.Random(seed)
        system = random_table_system(rng)
        state = tuple(rng.randrange(k) for k in system.space.sizes)
        assert spectrum(system, state) == naive_spectrum(system, state)


class TestCommittedMap:
    def test_fig1(self, fig1):
        cmap = committed_map(fig1)
        assert cmap.target((0, 0)) == (0, 0)
        assert cmap.target((1, 1)) == (1, 1)
        assert not cmap.is_committed((0, 1))
        assert not cmap.is_committed((1, 0))
        for state in fig1.space.states():
            assert cmap.target(state) == oracle_committed(fig1, state)

    def test_three_stable_example(self):
        """Every stable state commits to itself; the origin reaches all three
        stable states, so it is uncommitted despite the system converging."""
        system = fixture("ex-three-stable")
        cmap = committed_map(system)
        for b in stable_states(system):
            assert cmap.target(b) == b
        assert not cmap.is_committed((0, 0))
        assert len(spectrum(system, (0, 0))) == 3

    @given(st.integers(min_value=0, max_value=10 ** 6))
    @settings(max_examples=15, deadline=None)
    def test_matches_per_state_oracle(self, seed):
        system = random_table_system(random.Random(seed), max_nodes=2, max_actions=3)
        cmap = committed_map(system)
        for state in system.space.states():
            assert cmap.target(state) == oracle_committed(system, state)

    @given(st.integers(min_value=0, max_value=10 ** 6))
    @settings(max_examples=20, deadline=None)
    def test_consistency_with_spectrum(self, seed):
        system = random_table_system(random.Random(seed))
        cmap = committed_map(system)
        convergent = isinstance(decide_convergence(system), Convergent)
        for state in system.space.states():
            target = cmap.target(state)
            if target is not None:
                assert spectrum(system, state) == {target}
            elif convergent:
                # uncommitted with no reachable oscillation: several options
                assert len(spectrum(system, state)) >= 2


class TestDecideConvergence:
    def test_fig1_witness(self, fig1):
        verdict = decide_convergence(fig1)
        assert verdict.witness.initial == ((0, 1),)
        assert verdict.witness.cycle == (frozenset({1, 2}),)
        assert_witness_replays(fig1, verdict)

    def test_three_stable_example_convergent(self):
        assert decide_convergence(fixture("ex-three-stable")) == Convergent()

    def test_latched_example_convergent(self):
        assert decide_convergence(fixture("ex-unbounded-latched")) == Convergent()

    def test_single_state(self):
        system = HistorylessSystem.from_rule(ActionSpace((1, 1)), lambda s: s)
        assert decide_convergence(system) == Convergent()

    def test_exhaustive_two_node_binary_systems(self):
        """All 256 reaction tables over the 2x2 space against the closed-walk
        oracle, witnesses replayed."""
        space = ActionSpace((2, 2))
        states = list(space.states())
        for rows in itertools.product(states, repeat=4):
            system = HistorylessSystem.from_table(space, rows)
            verdict = decide_convergence(system)
            assert isinstance(verdict, Convergent) == oracle_convergent(system)
            if isinstance(verdict, NonConvergent):
                assert_witness_replays(system, verdict)

    @given(st.integers(min_value=0, max_value=10 ** 6))
    @settings(max_examples=40, deadline=None)
    def test_random_systems_match_oracle(self, seed):
        system = random_table_system(random.Random(seed), max_nodes=3, max_actions=3)
        verdict = decide_convergence(system)
        assert isinstance(verdict, Convergent) == oracle_convergent(system)
        if isinstance(verdict, NonConvergent):
            assert_witness_replays(system, verdict)

    @given(st.integers(min_value=0, max_value=10 ** 6))
    @settings(max_examples=25, deadline=None)
    def test_multiple_stable_self_independent_never_converges(self, seed):
        """Self-independent dynamics with two or more fixed points always
        admit a fair oscillation."""
        system = random_self_independent_system(random.Random(seed))
        if len(stable_states(system)) >= 2:
            verdict = decide_convergence(system)
            assert_witness_replays(system, verdict)

    @given(st.integers(min_value=0, max_value=10 ** 6))
    @settings(max_examples=20, deadline=None)
    def test_committed_neighbours_share_target(self, seed):
        """In self-independent systems, committed states differing in one
        coordinate are committed to the same stable state."""
        system = random_self_independent_system(random.Random(seed), max_nodes=3)
        cmap = committed_map(system)
        space = system.space
        for state in space.states():
            t1 = cmap.target(state)
            if t1 is None:
                continue
            for i in range(space.n):
                for alt in range(space.sizes[i]):
                    if alt == state[i]:
                        continue
                    other = state[:i] + (alt,) + state[i + 1:]
                    t2 = cmap.target(other)
                    if t2 is not None:
                        assert t1 == t2

    @given(st.integers(min_value=0, max_value=10 ** 6))
    @settings(max_examples=20, deadline=None)
    def test_two_stables_imply_an_uncommitted_state(self, seed):
        system = random_self_independent_system(random.Random(seed), max_nodes=3)
        if len(stable_states(system)) >= 2:
            cmap = committed_map(system)
            assert cmap.uncommitted()


class TestDecideRConvergence:
    def test_ring_threshold(self):
        for n in (4, 5):
            ring = fixture("ring", n=n)
            for r in range(1, n + 1):
                verdict = decide_r_convergence(ring, r)
                assert isinstance(verdict, Convergent) == (r < n - 1)
                if isinstance(verdict, NonConvergent):
                    witness = verdict.witness
                    assert isinstance(replay_witness(ring, witness), Cycling)
                    sched = list(witness.prefix) + list(witness.cycle) * 3
                    assert check_r_fair(sched, r, n)

    def test_r_must_be_positive(self, fig1):
        with pytest.raises(InvalidInput):
            decide_r_convergence(fig1, 0)

    def test_monotone_in_r(self):
        ring = fixture("ring", n=4)
        verdicts = [
            isinstance(decide_r_convergence(ring, r), Convergent) for r in range(1, 6)
        ]
        # once non-convergent at some r, non-convergent for every larger r
        assert verdicts == sorted(verdicts, reverse=True)

    @given(st.integers(min_value=0, max_value=10 ** 6))
    @settings(max_examples=20, deadline=None)
    def test_convergent_implies_r_convergent(self, seed):
        system = random_table_system(random.Random(seed), max_nodes=3, max_actions=2)
        if isinstance(decide_convergence(system), Convergent):
            for r in (1, 2, 3):
                assert isinstance(decide_r_convergence(system, r), Convergent)

    @given(st.integers(min_value=0, max_value=10 ** 6))
    @settings(max_examples=15, deadline=None)
    def test_r_witnesses_replay_and_are_r_fair(self, seed):
        system = random_table_system(random.Random(seed), max_nodes=3, max_actions=2)
        for r in (2, 3):
            verdict = decide_r_convergence(system, r)
            if isinstance(verdict, NonConvergent):
                witness = verdict.witness
                assert isinstance(replay_witness(system, witness), Cycling)
                sched = list(witness.prefix) + list(witness.cycle) * 3
                assert check_r_fair(sched, r, system.space.n)

    def test_budget(self, fig1):
        with pytest.raises(BudgetExceeded):
            decide_r_convergence(fig1, 8, budget=100)


class TestLiftedAnalysis:
    def test_lifted_stables_are_fixed_windows(self, fig1):
        wrapped = KRecallSystem(
            space=fig1.space, k=2, rule=lambda w: fig1.reaction(w[-1]), stationary=True
        )
        lifted = lift_k_recall(wrapped)
        stables = stable_states(lifted)
        assert stables == {((0, 0), (0, 0)), ((1, 1), (1, 1))}
        for window in stables:
            assert spectrum(lifted, window) == {window}
