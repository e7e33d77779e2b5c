import json
import math
import random
from collections import Counter
from fractions import Fraction

import pytest

from lllcolor.engine import (
    ContractError,
    Event,
    EventSystem,
    VariableSpace,
    build_witness_forest,
    check_feasible,
    default_step_limit,
    dice_experiment,
    m_algorithm,
    occurs,
    sample_all,
    validate,
)
from lllcolor.dimacs import clause_system, formula_satisfied
from lllcolor.bounds import BoundParams, lll_condition

from conftest import chain_3sat, random_truth_table_system, single_event_system


# -- sampling -----------------------------------------------------------------

def test_sample_all_singleton_domain():
    system = EventSystem(VariableSpace([(7,)]), [Event(0, (0,), lambda v: False)])
    assert sample_all(system, random.Random(3)) == [7]


def test_sample_all_deterministic():
    space = VariableSpace.booleans(3)
    system = EventSystem(space, [Event(0, (0, 1, 2), lambda v: False)])
    assert sample_all(system, random.Random(11)) == sample_all(system, random.Random(11))


def test_sample_all_uniform_frequency():
    # 10^6 draws of one uniform variable on {0..5}: each frequency within
    # 3 sigma of 1/6, sigma = sqrt((1/6)(5/6)/N)
    system = EventSystem(VariableSpace([range(6)]), [Event(0, (0,), lambda v: False)])
    rng = random.Random(2024)
    n = 10**6
    counts = Counter(sample_all(system, rng)[0] for _ in range(n))
    bound = 3 * math.sqrt((1 / 6) * (5 / 6) / n)
    for value in range(6):
        assert abs(counts[value] / n - 1 / 6) <= bound


def test_weighted_sampling():
    space = VariableSpace([(0, 1)], weights=[(1, 3)])
    system = EventSystem(space, [Event(0, (0,), lambda v: v[0] == 1)])
    rng = random.Random(5)
    n = 50_000
    freq = sum(sample_all(system, rng)[0] for _ in range(n)) / n
    assert abs(freq - 0.75) <= 3 * math.sqrt(0.75 * 0.25 / n)


def test_variable_space_validation():
    with pytest.raises(ContractError):
        VariableSpace([()])
    with pytest.raises(ContractError):
        VariableSpace([(0, 1)], weights=[(1,)])


# -- occurs -------------------------------------------------------------------

def test_occurs_basic():
    ev = Event(0, (0,), lambda v: v[0] == 1)
    assert occurs(ev, [1]) is True
    assert occurs(ev, [0]) is False
    eq = Event(0, (0, 1), lambda v: v[0] == v[1])
    assert occurs(eq, [3, 3]) is True


def test_occurs_scope_out_of_range():
    ev = Event(0, (2,), lambda v: True)
    with pytest.raises(ContractError):
        occurs(ev, [0, 0])


# -- the resampling loop ------------------------------------------------------

def test_zero_events_returns_initial_assignment():
    system = EventSystem(VariableSpace.booleans(2), [])
    values, stats = m_algorithm(system, seed=9)
    assert stats.steps == 0 and stats.phases == 0 and stats.terminated
    assert values == sample_all(system, random.Random(9))


def test_single_event_mean_steps():
    # event 'X=1' on a fair bit: the initial check fires with probability
    # 1/2 and every resample clears it with probability 1/2, so
    # P(steps = k) = 2^-(k+1) for k >= 1, mean 1 and variance 2
    system = single_event_system()
    n = 10**5
    total = 0
    for seed in range(n):
        _, stats = m_algorithm(system, seed=seed)
        assert stats.terminated and stats.phases <= 1
        total += stats.steps
    mean = total / n
    assert abs(mean - 1.0) <= 3 * math.sqrt(2 / n)


def test_lll_regime_3sat_always_terminates():
    rng = random.Random(7)
    for trial in range(10**3):
        n_vars, clauses = chain_3sat(8, rng)
        system = clause_system(n_vars, clauses)
        assert system.delta <= 3 and system.p == 1 / 8
        values, stats = m_algorithm(system, seed=trial)
        assert stats.terminated
        assert formula_satisfied(clauses, values)
    flags = lll_condition(BoundParams(p=Fraction(1, 8), delta=3))
    assert flags["strict"]


def test_step_limit_flag_on_unsatisfiable_input():
    system = clause_system(1, [(1,), (-1,)])
    values, stats = m_algorithm(system, seed=0, step_limit=50)
    assert not stats.terminated
    assert stats.steps == 50 and len(stats.trace) == 50


def test_determinism_byte_for_byte():
    rng = random.Random(123)
    n_vars, clauses = chain_3sat(6, rng)
    system = clause_system(n_vars, clauses)
    runs = [m_algorithm(system, seed=42, step_limit=500) for _ in range(2)]
    assert runs[0][0] == runs[1][0]
    assert runs[0][1] == runs[1][1]
    assert runs[0][1].to_json() == runs[1][1].to_json()


def test_trace_json_schema():
    system = single_event_system()
    _, stats = m_algorithm(system, seed=2)
    payload = json.loads(stats.to_json())
    assert set(payload) == {"seed", "steps", "phases", "trace"}
    assert payload["seed"] == 2
    assert all(len(entry) == 2 for entry in payload["trace"])


def test_default_step_limit_formula():
    assert default_step_limit(1) == 64 * 1 * math.ceil(math.log2(3))
    assert default_step_limit(8) == 64 * 8 * math.ceil(math.log2(10))


def test_progress_snapshots_never_grow():
    # variables outside every occurring scope before a root call stay
    # outside after it, i.e. the occurring scope union never grows
    rng = random.Random(31337)
    checked = 0
    for _ in range(40):
        system = random_truth_table_system(rng)
        _, stats = m_algorithm(system, seed=rng.randrange(2**30), step_limit=300, snapshot_progress=True)
        for before, after in stats.phase_snapshots:
            assert after <= before
            checked += 1
    assert checked > 0


def test_phase_bound_and_root_disjointness():
    rng = random.Random(99)
    for _ in range(60):
        system = random_truth_table_system(rng)
        _, stats = m_algorithm(system, seed=rng.randrange(2**30), step_limit=400)
        roots = [j for j, d in stats.trace if d == 0]
        assert stats.steps >= stats.phases == len(roots)
        if stats.terminated:
            assert stats.phases <= system.m
        seen: set[int] = set()
        for j in roots:
            scope = set(system.events[j].scope)
            assert not (seen & scope), "root scopes must be pairwise disjoint"
            seen |= scope


def test_termination_tail_on_fixed_system():
    # property-level tail check: with the sharp convergence condition
    # satisfied, the frequency of runs at least 4x the mean length is small
    n_vars, clauses = chain_3sat(8, random.Random(1))
    system = clause_system(n_vars, clauses)
    steps = []
    for seed in range(10**4):
        _, stats = m_algorithm(system, seed=seed)
        assert stats.terminated
        steps.append(stats.steps)
    mean = sum(steps) / len(steps)
    cutoff = 4 * mean
    tail = sum(1 for s in steps if s >= cutoff) / len(steps)
    assert tail < 0.05


def test_stack_depth_beyond_interpreter_limit():
    # one heavily biased bit keeps re-occurring after almost every resample,
    # driving the call depth far past the native recursion limit; the
    # explicit stack must not care, and the forest must still rebuild
    space = VariableSpace([(0, 1)], weights=[(1, 1999)])
    system = EventSystem(space, [Event(0, (0,), lambda v: v[0] == 1)], p=0.9995)
    values, stats = m_algorithm(system, seed=1, step_limit=100_000)
    depth = max(d for _, d in stats.trace)
    assert stats.terminated and values == [0]
    assert depth == 3871 and depth > 2500  # frozen for seed 1; far past the default limit of 1000
    forest = build_witness_forest(stats.trace, system)
    assert len(forest) == stats.steps and check_feasible(forest, system)


def test_estimate_p():
    system = single_event_system()
    estimate, half = system.estimate_p(random.Random(8), samples=4000)
    assert abs(estimate - 0.5) <= half
    assert system.p_estimate == (estimate, half)


# -- witness forests ----------------------------------------------------------

def _three_event_system():
    space = VariableSpace.booleans(1)
    events = [Event(j, (0,), lambda v: False) for j in range(3)]
    return EventSystem(space, events)


def test_forest_empty_trace():
    forest = build_witness_forest([], _three_event_system())
    assert len(forest) == 0 and forest.roots == []
    assert check_feasible(forest, _three_event_system())


def test_forest_single_node():
    forest = build_witness_forest([(1, 0)], _three_event_system())
    assert forest.labels == [1] and forest.roots == [0]


def test_forest_reconstruction_two_trees():
    # stack semantics: second and third entries are recursive children of
    # the first root call, the fourth starts a new tree
    system = _three_event_system()
    forest = build_witness_forest([(0, 0), (1, 1), (0, 1), (2, 0)], system)
    assert [forest.labels[r] for r in forest.roots] == [0, 2]
    root = forest.roots[0]
    assert sorted(forest.labels[c] for c in forest.children[root]) == [0, 1]
    # children are ordered by label
    assert [forest.labels[c] for c in forest.children[root]] == [0, 1]
    assert forest.labels_in_order() == [0, 0, 1, 2]


def test_forest_malformed_trace():
    with pytest.raises(ContractError):
        build_witness_forest([(0, 0), (1, 2)], _three_event_system())
    with pytest.raises(ContractError):
        build_witness_forest([(0, 1)], _three_event_system())


def test_forests_from_real_traces_are_feasible():
    rng = random.Random(555)
    for _ in range(60):
        system = random_truth_table_system(rng)
        _, stats = m_algorithm(system, seed=rng.randrange(2**30), step_limit=300)
        forest = build_witness_forest(stats.trace, system)
        assert len(forest) == stats.steps
        assert check_feasible(forest, system)


def test_check_feasible_violations():
    space = VariableSpace.booleans(3)
    events = [
        Event(0, (0,), lambda v: True),
        Event(1, (0, 1), lambda v: True),
        Event(2, (2,), lambda v: True),
    ]
    system = EventSystem(space, events)
    # two roots sharing variable 0
    overlapping_roots = build_witness_forest([(0, 0), (1, 0)], system)
    assert not check_feasible(overlapping_roots, system)
    # child scope disjoint from parent scope
    detached_child = build_witness_forest([(0, 0), (2, 1)], system)
    assert not check_feasible(detached_child, system)
    # siblings sharing a variable
    siblings = build_witness_forest([(1, 0), (0, 1), (0, 1)], system)
    assert not check_feasible(siblings, system)


# -- the validation walk -------------------------------------------------------

def test_validate_empty_forest_always_succeeds():
    system = _three_event_system()
    forest = build_witness_forest([], system)
    assert all(validate(forest, system, random.Random(s)) for s in range(50))


def test_validate_single_node_frequency():
    system = single_event_system()  # occurs with probability 1/2
    forest = build_witness_forest([(0, 0)], system)
    n = 10**5
    hits = sum(validate(forest, system, random.Random(s)) for s in range(n))
    assert abs(hits / n - 0.5) <= 3 * math.sqrt(0.25 / n)


def test_validate_two_disjoint_roots_multiply():
    # success needs both events at once under one fresh sample: disjoint
    # scopes make that (1/2) * (1/3)
    space = VariableSpace([(0, 1), (0, 1, 2)])
    events = [Event(0, (0,), lambda v: v[0] == 1), Event(1, (1,), lambda v: v[0] == 2)]
    system = EventSystem(space, events)
    forest = build_witness_forest([(0, 0), (1, 0)], system)
    n = 10**5
    hits = sum(validate(forest, system, random.Random(s)) for s in range(n))
    p = 1 / 6
    assert abs(hits / n - p) <= 3 * math.sqrt(p * (1 - p) / n)


def test_validate_rejects_infeasible_forest():
    system = _three_event_system()
    forest = build_witness_forest([(0, 0), (1, 0)], system)  # shared variable
    with pytest.raises(ContractError):
        validate(forest, system, random.Random(0))


# -- dice demo ----------------------------------------------------------------

def test_dice_single_trial_is_binary():
    assert dice_experiment(1, random.Random(0)) in (0.0, 1.0)


def test_dice_single_phase_frequency():
    n = 10**5
    est = dice_experiment(n, random.Random(17), phases=1)
    p = 91 / 216
    assert abs(est - p) <= 3 * math.sqrt(p * (1 - p) / n)


def test_dice_deterministic_given_seed():
    assert dice_experiment(5000, random.Random(4)) == dice_experiment(5000, random.Random(4))


def test_dice_requires_trials():
    with pytest.raises(ContractError):
        dice_experiment(0, random.Random(0))
