"""Generic two-archive evolutionary engine over pluggable problem hooks.

The engine maintains a convergence archive (CA) and a diversity archive
(DA). Each generation it mates one uniform parent from each archive,
applies crossover then mutation, evaluates the children, and offers every
feasible child to both archives. CA truncation uses additive-epsilon
indicator fitness; DA truncation removes the most crowded non-boundary
member under the fractional Lp (p = 1/m) nearest-neighbor distance.

Objectives are handled in maximization form at the surface; dominance and
the epsilon indicator run on internally negated (minimization) values.

Determinism: all randomness flows through one numpy PCG64 generator per
run. Draw order per generation: for each mating, one CA index, one DA
index, one crossover coin, then the crossover cut (if taken) and the
mutation draws for each child in order. Fixed seeds give byte-identical
serialized run logs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import exp
from typing import Any, Callable, Protocol

import numpy as np

from . import evaluation


class InitializationExhausted(RuntimeError):
    """No feasible individual found within the initialization attempt cap."""


class EmptyArchive(RuntimeError):
    pass


class Problem(Protocol):
    """Hooks a problem must expose to run under the engine."""

    def random_genome(self, rng: np.random.Generator) -> Any: ...

    def crossover(self, a: Any, b: Any, rng: np.random.Generator) -> tuple[Any, Any]: ...

    def mutate(self, genome: Any, rng: np.random.Generator, rate: float | None) -> Any: ...

    def evaluate(self, genome: Any) -> "Evaluation": ...


@dataclass(frozen=True)
class Evaluation:
    """Problem-side result of evaluating one genome."""

    objectives: tuple[float, ...]
    feasible: bool
    payload: dict[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class Individual:
    id: int
    genome: Any
    objectives: tuple[float, ...]
    feasible: bool
    payload: dict[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class EngineConfig:
    ca_capacity: int = 20
    da_capacity: int = 20
    offspring_per_generation: int = 20
    generations: int = 100
    crossover_probability: float = 0.9
    mutation_rate: float | None = None  # None -> problem default (1/L)
    rng_seed: int = 0
    indicator_scale_kappa: float = 0.05
    feasible_retry_cap: int = 50

    def __post_init__(self):
        if self.ca_capacity < 1 or self.da_capacity < 1:
            raise ValueError("archive capacities must be positive")
        if self.offspring_per_generation < 1:
            raise ValueError("offspring_per_generation must be positive")
        if self.generations < 0:
            raise ValueError("generations must be nonnegative")
        if not 0.0 <= self.crossover_probability <= 1.0:
            raise ValueError("crossover_probability must be in [0, 1]")
        if self.mutation_rate is not None and not 0.0 <= self.mutation_rate <= 1.0:
            raise ValueError("mutation_rate must be in [0, 1]")
        if self.indicator_scale_kappa <= 0.0:
            raise ValueError("indicator_scale_kappa must be positive")
        if self.feasible_retry_cap < 0:
            raise ValueError("feasible_retry_cap must be nonnegative")
        if not 0 <= self.rng_seed < 2**64:
            raise ValueError("rng_seed must be a 64-bit unsigned integer")


@dataclass
class EngineState:
    config: EngineConfig
    generation: int
    ca: list[Individual]
    da: list[Individual]
    rng: np.random.Generator
    evaluation_count: int
    next_id: int
    cumulative_front: tuple[tuple[float, ...], ...]
    init_feasible_count: int = 0

    def serialize(self) -> str:
        """Byte-stable JSON snapshot of the full state (including RNG)."""
        doc = {
            "generation": self.generation,
            "ca": [_member_doc(m) for m in self.ca],
            "da": [_member_doc(m) for m in self.da],
            "rng_state": self.rng.bit_generator.state,
            "evaluation_count": self.evaluation_count,
            "next_id": self.next_id,
            "cumulative_front": [list(v) for v in self.cumulative_front],
        }
        return json.dumps(doc, sort_keys=True)


def _member_doc(m: Individual) -> dict[str, Any]:
    return {"id": m.id, "objectives": list(m.objectives)}


@dataclass(frozen=True)
class GenerationRecord:
    generation: int
    ca: tuple[Individual, ...]
    da: tuple[Individual, ...]
    offspring: int
    feasible_offspring: int
    da_hypervolume: float
    cumulative_hypervolume: float

    def to_dict(self) -> dict[str, Any]:
        return {
            "generation": self.generation,
            "ca": [_member_doc(m) for m in self.ca],
            "da": [_member_doc(m) for m in self.da],
            "offspring": self.offspring,
            "feasible_offspring": self.feasible_offspring,
            "da_hypervolume": self.da_hypervolume,
            "cumulative_hypervolume": self.cumulative_hypervolume,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


@dataclass(frozen=True)
class RunRecord:
    config: EngineConfig
    records: tuple[GenerationRecord, ...]
    final_ca: tuple[Individual, ...]
    final_da: tuple[Individual, ...]
    evaluation_count: int


def _neg(v: tuple[float, ...]) -> tuple[float, ...]:
    return tuple(-x for x in v)


def _nondominated_members(members: list[Individual]) -> list[Individual]:
    kept = []
    for m in members:
        if not any(evaluation.dominates(o.objectives, m.objectives) for o in members):
            kept.append(m)
    return kept


def _merge(members: list[Individual], candidates: list[Individual]) -> list[Individual]:
    """Merge, deduplicating by genome identity, and sort by id for
    order-independent truncation."""
    seen = {}
    for m in sorted(list(members) + list(candidates), key=lambda m: m.id):
        if m.genome not in seen:
            seen[m.genome] = m
    return sorted(seen.values(), key=lambda m: m.id)


def update_ca(
    members: list[Individual],
    candidates: list[Individual],
    capacity: int,
    kappa: float,
) -> list[Individual]:
    """Convergence-archive update: nondominated merge, then iterative
    removal of the worst additive-epsilon indicator fitness member."""
    pool = _nondominated_members(_merge(members, candidates))
    while len(pool) > capacity:
        neg = [_neg(m.objectives) for m in pool]
        indicators = {
            (i, j): evaluation.epsilon_indicator(neg[i], neg[j])
            for i in range(len(pool))
            for j in range(len(pool))
            if i != j
        }
        c = max((abs(v) for v in indicators.values()), default=0.0)
        if c == 0.0:
            c = 1.0
        fitness = [
            sum(-exp(-indicators[(i, j)] / (kappa * c)) for i in range(len(pool)) if i != j)
            for j in range(len(pool))
        ]
        worst = min(range(len(pool)), key=lambda j: (fitness[j], pool[j].id))
        pool.pop(worst)
    return pool


def update_da(
    members: list[Individual],
    candidates: list[Individual],
    capacity: int,
) -> list[Individual]:
    """Diversity-archive update: nondominated merge, then iterative removal
    of the most crowded non-boundary member under fractional Lp distance.

    Boundary members (maximal in any single objective) are protected while
    the archive holds more than two members. Ties break on second-nearest
    neighbor distance, then lowest id.
    """
    pool = _nondominated_members(_merge(members, candidates))
    while len(pool) > capacity:
        m = len(pool[0].objectives)
        p = 1.0 / m
        best_per_objective = [max(ind.objectives[k] for ind in pool) for k in range(m)]
        removable = [
            i
            for i, ind in enumerate(pool)
            if not any(ind.objectives[k] == best_per_objective[k] for k in range(m))
        ]
        if not removable or len(pool) <= 2:
            removable = list(range(len(pool)))

        def crowding_key(i: int) -> tuple[float, float, int]:
            dists = sorted(
                evaluation.lp_distance(pool[i].objectives, other.objectives, p)
                for j, other in enumerate(pool)
                if j != i
            )
            second = dists[1] if len(dists) > 1 else float("inf")
            return (dists[0], second, pool[i].id)

        pool.pop(min(removable, key=crowding_key))
    return pool


def mating_select(
    ca: list[Individual], da: list[Individual], rng: np.random.Generator
) -> tuple[Individual, Individual]:
    """One uniform parent from CA, one from DA (cross-archive mating)."""
    if not ca or not da:
        raise EmptyArchive("mating requires both archives nonempty")
    parent_a = ca[int(rng.integers(len(ca)))]
    parent_b = da[int(rng.integers(len(da)))]
    return parent_a, parent_b


def _evaluate(state: EngineState, problem: Problem, genome: Any) -> Individual:
    result = problem.evaluate(genome)
    ind = Individual(
        id=state.next_id,
        genome=genome,
        objectives=result.objectives,
        feasible=result.feasible,
        payload=result.payload,
    )
    state.next_id += 1
    state.evaluation_count += 1
    return ind


def _update_front(state: EngineState, feasible: list[Individual]) -> None:
    merged = set(state.cumulative_front) | {ind.objectives for ind in feasible}
    front = evaluation.nondominated_filter(sorted(merged))
    state.cumulative_front = tuple(sorted(set(front)))


def _admit(state: EngineState, feasible: list[Individual]) -> None:
    cfg = state.config
    state.ca = update_ca(state.ca, feasible, cfg.ca_capacity, cfg.indicator_scale_kappa)
    state.da = update_da(state.da, feasible, cfg.da_capacity)
    _update_front(state, feasible)


def initialize(config: EngineConfig, problem: Problem, seed: int | None = None) -> EngineState:
    """Sample, repair, and evaluate an initial batch; seed both archives.

    Draws offspring_per_generation genomes, then rejection-samples up to
    feasible_retry_cap * offspring_per_generation further attempts until at
    least one feasible individual exists.
    """
    if seed is None:
        seed = config.rng_seed
    rng = np.random.Generator(np.random.PCG64(seed))
    state = EngineState(
        config=config,
        generation=0,
        ca=[],
        da=[],
        rng=rng,
        evaluation_count=0,
        next_id=0,
        cumulative_front=(),
    )
    batch = [
        _evaluate(state, problem, problem.random_genome(rng))
        for _ in range(config.offspring_per_generation)
    ]
    feasible = [ind for ind in batch if ind.feasible]
    extra_budget = config.feasible_retry_cap * config.offspring_per_generation
    while not feasible and extra_budget > 0:
        ind = _evaluate(state, problem, problem.random_genome(rng))
        extra_budget -= 1
        if ind.feasible:
            feasible.append(ind)
    if not feasible:
        raise InitializationExhausted(
            f"no feasible individual after {state.evaluation_count} attempts"
        )
    state.init_feasible_count = len(feasible)
    _admit(state, feasible)
    return state


def step(state: EngineState, problem: Problem) -> GenerationRecord:
    """Advance one generation and return its record."""
    cfg = state.config
    rng = state.rng
    children: list[Any] = []
    while len(children) < cfg.offspring_per_generation:
        parent_a, parent_b = mating_select(state.ca, state.da, rng)
        if rng.random() < cfg.crossover_probability:
            child_a, child_b = problem.crossover(parent_a.genome, parent_b.genome, rng)
        else:
            child_a, child_b = parent_a.genome, parent_b.genome
        children.append(problem.mutate(child_a, rng, cfg.mutation_rate))
        if len(children) < cfg.offspring_per_generation:
            children.append(problem.mutate(child_b, rng, cfg.mutation_rate))
    offspring = [_evaluate(state, problem, genome) for genome in children]
    feasible = [ind for ind in offspring if ind.feasible]
    if feasible:
        _admit(state, feasible)
    state.generation += 1
    return _record(state, offspring=len(offspring), feasible_offspring=len(feasible))


def _record(state: EngineState, offspring: int, feasible_offspring: int) -> GenerationRecord:
    return GenerationRecord(
        generation=state.generation,
        ca=tuple(state.ca),
        da=tuple(state.da),
        offspring=offspring,
        feasible_offspring=feasible_offspring,
        da_hypervolume=evaluation.hypervolume_2d([m.objectives for m in state.da]),
        cumulative_hypervolume=evaluation.hypervolume_2d(list(state.cumulative_front)),
    )


def run(
    config: EngineConfig,
    problem: Problem,
    sink: Callable[[GenerationRecord], None] | None = None,
    seed: int | None = None,
) -> RunRecord:
    """Initialize, then step config.generations times, streaming records."""
    state = initialize(config, problem, seed)
    records = [
        _record(
            state,
            offspring=state.evaluation_count,
            feasible_offspring=state.init_feasible_count,
        )
    ]
    if sink is not None:
        sink(records[0])
    for _ in range(config.generations):
        rec = step(state, problem)
        records.append(rec)
        if sink is not None:
            sink(rec)
    return RunRecord(
        config=config,
        records=tuple(records),
        final_ca=tuple(state.ca),
        final_da=tuple(state.da),
        evaluation_count=state.evaluation_count,
    )
