"""Binding of the Sokoban domain to the engine's problem hooks."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import domain, solver
from .engine import Evaluation


@dataclass(frozen=True)
class SokobanProblem:
    """Evolves playable Sokoban levels maximizing (emptiness, diversity)."""

    spec: domain.DesignSpec = field(default_factory=domain.DesignSpec)
    limits: solver.SolveLimits = field(default_factory=solver.SolveLimits)

    objective_names = ("f_emp", "f_div")

    def random_genome(self, rng: np.random.Generator) -> domain.Genome:
        return domain.random_genome(self.spec, rng)

    def crossover(
        self, a: domain.Genome, b: domain.Genome, rng: np.random.Generator
    ) -> tuple[domain.Genome, domain.Genome]:
        return domain.crossover(a, b, rng)

    def mutate(
        self, genome: domain.Genome, rng: np.random.Generator, rate: float | None = None
    ) -> domain.Genome:
        return domain.mutate(genome, rng, rate)

    def evaluate(self, genome: domain.Genome) -> Evaluation:
        level = domain.decode(genome)
        outcome = solver.solve(level, self.limits)
        feasible = outcome.verdict is solver.Verdict.SOLVABLE
        return Evaluation(
            objectives=(domain.f_emp(level), domain.f_div(level)),
            feasible=feasible,
            payload={
                "level": domain.serialize_level(level),
                "verdict": outcome.verdict.value,
                "solution": outcome.solution if feasible else None,
                "pushes": outcome.pushes if feasible else None,
            },
        )
