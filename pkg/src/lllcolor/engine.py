"""Variable-resampling engine for the constructive Lovász Local Lemma.

The engine operates on a system of "undesirable" events over mutually
independent finite-domain variables.  The main loop samples every variable,
then repeatedly picks the least-indexed occurring event and resamples it;
resampling an event recursively fixes every occurring neighbour (an event
whose scope shares a variable) before returning.  If the loop ever stops,
no event occurs under the final assignment.

Every resample call is recorded as a ``(event id, call depth)`` pair, which
is enough to rebuild the exact recursion structure afterwards as a rooted
labeled forest (the witness forest).  The companion validation routine
replays such a forest against fresh randomness.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass
from typing import Callable, Sequence


class ContractError(ValueError):
    """A documented precondition was violated."""


class VariableSpace:
    """Independent finite-domain variables.

    ``domains[i]`` is an indexable collection (tuple, list or range) of the
    values variable ``i`` may take.  Sampling is uniform unless a weight
    table is supplied for the variable.  Sampling one variable never reads
    any other variable.
    """

    def __init__(self, domains: Sequence[Sequence], weights: Sequence | None = None):
        self.domains = [d if isinstance(d, range) else tuple(d) for d in domains]
        if not all(len(d) > 0 for d in self.domains):
            raise ContractError("every variable domain must be non-empty")
        self.weights = list(weights) if weights is not None else [None] * len(self.domains)
        if len(self.weights) != len(self.domains):
            raise ContractError("one weight table (or None) per variable required")
        for dom, w in zip(self.domains, self.weights):
            if w is not None and (len(w) != len(dom) or min(w) < 0 or sum(w) <= 0):
                raise ContractError("weight table must be non-negative, same length as domain")

    @property
    def count(self) -> int:
        return len(self.domains)

    @classmethod
    def booleans(cls, count: int) -> "VariableSpace":
        return cls([(0, 1)] * count)

    def sample(self, i: int, rng: random.Random):
        dom, w = self.domains[i], self.weights[i]
        if w is None:
            return dom[rng.randrange(len(dom))]
        return rng.choices(dom, weights=w, k=1)[0]


@dataclass(frozen=True)
class Event:
    """An undesirable event: a predicate over the variables in its scope.

    The predicate receives the scoped values as a tuple, in scope order, so
    it structurally cannot read variables outside the scope.
    """

    id: int
    scope: tuple[int, ...]
    predicate: Callable[[tuple], bool]
    name: str = ""

    def __post_init__(self):
        if not self.scope:
            raise ContractError("event scope must be non-empty")
        object.__setattr__(self, "scope", tuple(sorted(set(self.scope))))

    def occurs(self, values: Sequence) -> bool:
        return bool(self.predicate(tuple(values[i] for i in self.scope)))


def occurs(event: Event, assignment: Sequence) -> bool:
    """Pure check of one event against an assignment."""
    for i in event.scope:
        if i < 0 or i >= len(assignment):
            raise ContractError(f"scope index {i} out of range")
    return event.occurs(assignment)


class EventSystem:
    """Ordered events plus their scope-overlap dependency structure.

    Two events are neighbours when their scopes intersect; every event is
    its own neighbour.  ``delta`` is the largest neighbourhood size.  ``p``
    is a caller-supplied bound on the probability of any single event under
    fresh sampling; when unknown it can be estimated by ``estimate_p``.
    """

    def __init__(self, space: VariableSpace, events: Sequence[Event], p: float | None = None):
        self.space = space
        self.events = list(events)
        for j, ev in enumerate(self.events):
            if ev.id != j:
                raise ContractError(f"event at position {j} has id {ev.id}")
            if ev.scope[-1] >= space.count:
                raise ContractError(f"event {j} scope exceeds variable count")
        by_var: dict[int, list[int]] = {}
        for ev in self.events:
            for i in ev.scope:
                by_var.setdefault(i, []).append(ev.id)
        neigh = []
        for ev in self.events:
            ns = {ev.id}
            for i in ev.scope:
                ns.update(by_var[i])
            neigh.append(tuple(sorted(ns)))
        self.neighborhoods = neigh
        self.delta = max((len(ns) for ns in neigh), default=0)
        self.p = p
        self.p_estimate: tuple[float, float] | None = None

    @property
    def m(self) -> int:
        return len(self.events)

    def neighborhood(self, j: int) -> tuple[int, ...]:
        return self.neighborhoods[j]

    def first_occurring(self, values: Sequence, candidates: Sequence[int] | None = None) -> int | None:
        """Least-indexed occurring event, or None.  Plain linear scan."""
        pool = candidates if candidates is not None else range(self.m)
        for j in pool:
            if self.events[j].occurs(values):
                return j
        return None

    def occurring_scope_union(self, values: Sequence) -> frozenset[int]:
        out: set[int] = set()
        for ev in self.events:
            if ev.occurs(values):
                out.update(ev.scope)
        return frozenset(out)

    def estimate_p(self, rng: random.Random, samples: int = 2000) -> tuple[float, float]:
        """Monte-Carlo bound on the max event probability under fresh sampling.

        Returns (estimate, 3-sigma half-width of the maximizing event's
        frequency); also stored on the system for later inspection.
        """
        if self.m == 0:
            self.p_estimate = (0.0, 0.0)
            return self.p_estimate
        hits = [0] * self.m
        for _ in range(samples):
            values = sample_all(self, rng)
            for j, ev in enumerate(self.events):
                if ev.occurs(values):
                    hits[j] += 1
        p_hat = max(hits) / samples
        half = 3.0 * math.sqrt(max(p_hat * (1 - p_hat), 1.0 / samples) / samples)
        self.p_estimate = (p_hat, half)
        return self.p_estimate


def sample_all(system: EventSystem, rng: random.Random) -> list:
    """Fresh independent sample of every variable."""
    return [system.space.sample(i, rng) for i in range(system.space.count)]


def _resample_scope(system: EventSystem, values: list, j: int, rng: random.Random) -> None:
    for i in system.events[j].scope:
        values[i] = system.space.sample(i, rng)


def default_step_limit(m: int) -> int:
    """Default guard on resample calls: 64 * m * ceil(log2(m + 2))."""
    return 64 * m * math.ceil(math.log2(m + 2))


@dataclass
class RunStats:
    """Bookkeeping of one resampling run.

    ``trace`` lists every resample call as (event id, depth), depth 0 being
    a root call from the main loop; it reconstructs the exact call
    structure.  ``phase_snapshots``, when requested, holds the union of
    occurring-event scopes before and after each root call.
    """

    steps: int
    phases: int
    trace: list[tuple[int, int]]
    terminated: bool
    seed: int
    step_limit: int
    phase_snapshots: list[tuple[frozenset, frozenset]] | None = None

    def to_json_dict(self) -> dict:
        return {
            "seed": self.seed,
            "steps": self.steps,
            "phases": self.phases,
            "trace": [[j, d] for j, d in self.trace],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())


def m_algorithm(
    system: EventSystem,
    seed: int | None = None,
    step_limit: int | None = None,
    snapshot_progress: bool = False,
) -> tuple[list, RunStats]:
    """Run the resampling loop until no event occurs or the step guard trips.

    The outer loop picks the least-indexed occurring event and issues a root
    call; a call on event j resamples j's scope and then, while any
    neighbour of j occurs, recurses on the least-indexed such neighbour.
    The recursion is realized with an explicit stack so its depth is not
    limited by the interpreter.  Steps count every resample call (root or
    recursive).  Hitting ``step_limit`` is not an error: the run is returned
    flagged ``terminated=False`` and callers inspect the flag.
    """
    if seed is None:
        seed = random.SystemRandom().randrange(2**32)
    rng = random.Random(seed)
    limit = default_step_limit(system.m) if step_limit is None else step_limit

    values = sample_all(system, rng)
    steps = 0
    phases = 0
    trace: list[tuple[int, int]] = []
    snapshots: list[tuple[frozenset, frozenset]] | None = [] if snapshot_progress else None
    aborted = False

    while not aborted:
        j = system.first_occurring(values)
        if j is None:
            break
        if steps >= limit:
            aborted = True
            break
        before = system.occurring_scope_union(values) if snapshot_progress else None
        phases += 1
        stack = [j]
        steps += 1
        trace.append((j, 0))
        _resample_scope(system, values, j, rng)
        while stack:
            k = system.first_occurring(values, candidates=system.neighborhood(stack[-1]))
            if k is None:
                stack.pop()
                continue
            if steps >= limit:
                aborted = True
                break
            stack.append(k)
            steps += 1
            trace.append((k, len(stack) - 1))
            _resample_scope(system, values, k, rng)
        if snapshot_progress and not aborted:
            snapshots.append((before, system.occurring_scope_union(values)))

    terminated = not aborted
    if terminated:
        assert phases <= system.m, "more phases than events on a terminated run"
    stats = RunStats(steps, phases, trace, terminated, seed, limit, snapshots)
    return values, stats


@dataclass
class WitnessForest:
    """Rooted labeled forest mirroring the recursion of a run prefix.

    Trees appear in root-call order; within a tree, children of a node are
    ordered by their labels and traversal is preorder.  Node ``i`` carries
    event label ``labels[i]``.
    """

    labels: list[int]
    parents: list[int | None]
    children: list[list[int]]
    roots: list[int]

    def __len__(self) -> int:
        return len(self.labels)

    def node_order(self) -> list[int]:
        order: list[int] = []
        for root in self.roots:
            stack = [root]
            while stack:
                node = stack.pop()
                order.append(node)
                stack.extend(reversed(self.children[node]))
        return order

    def labels_in_order(self) -> list[int]:
        return [self.labels[i] for i in self.node_order()]


def build_witness_forest(trace: Sequence[tuple[int, int]], system: EventSystem) -> WitnessForest:
    """Rebuild the recursion forest from a run trace.

    Entry (j, d) is a resample call on event j at stack depth d; its parent
    is the call sitting at depth d-1 at that moment.  Depth may drop by any
    amount between entries (returns from recursion) but can only grow by
    entering a child, so a depth more than one past the current stack is a
    malformed trace.
    """
    labels: list[int] = []
    parents: list[int | None] = []
    children: list[list[int]] = []
    roots: list[int] = []
    path: list[int] = []
    for j, depth in trace:
        if j < 0 or j >= system.m:
            raise ContractError(f"trace references unknown event {j}")
        if depth < 0 or depth > len(path):
            raise ContractError(f"trace depth jumps to {depth} with stack of {len(path)}")
        node = len(labels)
        labels.append(j)
        parents.append(None if depth == 0 else path[depth - 1])
        children.append([])
        if depth == 0:
            roots.append(node)
        else:
            children[path[depth - 1]].append(node)
        del path[depth:]
        path.append(node)
    for ch in children:
        ch.sort(key=lambda i: labels[i])
    return WitnessForest(labels, parents, children, roots)


def check_feasible(forest: WitnessForest, system: EventSystem) -> bool:
    """Feasibility of a labeled forest.

    (i) root labels have pairwise disjoint scopes, (ii) the labels of any
    node's children have pairwise disjoint scopes, (iii) each child's label
    shares a variable with its parent's label.
    """
    scope = lambda node: set(system.events[forest.labels[node]].scope)

    def pairwise_disjoint(nodes: Sequence[int]) -> bool:
        seen: set[int] = set()
        for node in nodes:
            s = scope(node)
            if seen & s:
                return False
            seen |= s
        return True

    if not pairwise_disjoint(forest.roots):
        return False
    for node in range(len(forest)):
        kids = forest.children[node]
        if not pairwise_disjoint(kids):
            return False
        parent_scope = scope(node)
        for kid in kids:
            if not (parent_scope & scope(kid)):
                return False
    return True


def validate(forest: WitnessForest, system: EventSystem, rng: random.Random) -> bool:
    """Replay a feasible forest against fresh randomness.

    Samples all variables, then walks the node labels in forest order: if
    the labeled event does not occur the replay fails, otherwise its scope
    is resampled and the walk continues.  Returns True when every node
    passed.
    """
    if not check_feasible(forest, system):
        raise ContractError("validate requires a feasible forest")
    values = sample_all(system, rng)
    for node in forest.node_order():
        j = forest.labels[node]
        if not system.events[j].occurs(values):
            return False
        _resample_scope(system, values, j, rng)
    return True


def dice_experiment(trials: int, rng: random.Random, phases: int = 2) -> float:
    """Two-phase dice demo: fraction of trials passing every phase.

    Each phase rolls three dice and succeeds if some admissible bit choice
    works, i.e. an ace shows among dice (1,2) or among dice (2,3); the union
    of the two branches covers all three dice.  After a success the two
    examined dice are rerolled, and the third die was never examined within
    the succeeding branch, so by the principle of deferred decisions the
    next phase again faces three fresh dice.  The all-phase success
    probability is therefore (1 - (5/6)^3) ** phases.
    """
    if trials < 1:
        raise ContractError("trials must be >= 1")
    hits = 0
    for _ in range(trials):
        ok = True
        for _ in range(phases):
            d1, d2, d3 = rng.randint(1, 6), rng.randint(1, 6), rng.randint(1, 6)
            branch0 = d1 == 1 or d2 == 1
            branch1 = d2 == 1 or d3 == 1
            if not (branch0 or branch1):
                ok = False
                break
        if ok:
            hits += 1
    return hits / trials
