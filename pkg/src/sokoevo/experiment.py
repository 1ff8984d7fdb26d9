"""Headless experiment running and artifact handling.

An experiment config is a single YAML document whose keys are exactly the
fields below; unknown keys are errors so typos cannot silently change a
run. Each seed writes its own directory of line-delimited generation
records, final archive listings, and a metrics table, plus a top-level
manifest with the fully resolved config.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from pathlib import Path

import yaml

from . import __version__, domain, engine, evaluation, solver
from .problem import SokobanProblem


class ConfigError(ValueError):
    pass


class MissingArtifacts(FileNotFoundError):
    pass


_ENGINE_KEYS = {
    "ca_capacity",
    "da_capacity",
    "offspring_per_generation",
    "generations",
    "crossover_probability",
    "mutation_rate",
    "indicator_scale_kappa",
    "feasible_retry_cap",
}
_SPEC_KEYS = {"width", "height", "max_boxes"}
_LIMIT_KEYS = {"max_states", "max_solution_pushes"}
_TOP_KEYS = _ENGINE_KEYS | _SPEC_KEYS | _LIMIT_KEYS | {
    "seeds",
    "seed_base",
    "repetitions",
    "out_dir",
}


@dataclass(frozen=True)
class ExperimentConfig:
    engine: engine.EngineConfig = field(default_factory=engine.EngineConfig)
    spec: domain.DesignSpec = field(default_factory=domain.DesignSpec)
    limits: solver.SolveLimits = field(default_factory=solver.SolveLimits)
    seeds: tuple[int, ...] = (0,)
    out_dir: str | None = None

    def to_dict(self) -> dict:
        doc = {
            "width": self.spec.width,
            "height": self.spec.height,
            "max_boxes": self.spec.max_boxes,
            "max_states": self.limits.max_states,
            "max_solution_pushes": self.limits.max_solution_pushes,
            "seeds": list(self.seeds),
        }
        for key in sorted(_ENGINE_KEYS):
            doc[key] = getattr(self.engine, key)
        if self.out_dir is not None:
            doc["out_dir"] = self.out_dir
        return doc

    @classmethod
    def from_dict(cls, raw: dict) -> "ExperimentConfig":
        if not isinstance(raw, dict):
            raise ConfigError("config document must be a mapping")
        unknown = set(raw) - _TOP_KEYS
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        if "seeds" in raw:
            if "seed_base" in raw:
                raise ConfigError("give either 'seeds' or 'seed_base', not both")
            seeds = raw["seeds"]
            if not isinstance(seeds, list) or not all(isinstance(s, int) for s in seeds):
                raise ConfigError("'seeds' must be a list of integers")
            reps = raw.get("repetitions", len(seeds))
            if reps != len(seeds):
                raise ConfigError("'repetitions' must equal the number of listed seeds")
        else:
            base = raw.get("seed_base", 0)
            reps = raw.get("repetitions", 1)
            if not isinstance(base, int) or not isinstance(reps, int) or reps < 1:
                raise ConfigError("'seed_base' must be an integer and 'repetitions' positive")
            seeds = [base + i for i in range(reps)]
        try:
            eng = engine.EngineConfig(**{k: raw[k] for k in _ENGINE_KEYS if k in raw})
            spec = domain.DesignSpec(**{k: raw[k] for k in _SPEC_KEYS if k in raw})
            limits = solver.SolveLimits(**{k: raw[k] for k in _LIMIT_KEYS if k in raw})
        except ValueError as err:
            raise ConfigError(str(err)) from err
        return cls(
            engine=eng,
            spec=spec,
            limits=limits,
            seeds=tuple(seeds),
            out_dir=raw.get("out_dir"),
        )

    @classmethod
    def from_yaml(cls, text: str) -> "ExperimentConfig":
        try:
            raw = yaml.safe_load(text)
        except yaml.YAMLError as err:
            raise ConfigError(f"config is not valid YAML: {err}") from err
        return cls.from_dict(raw if raw is not None else {})


def _archive_row(member: engine.Individual) -> dict:
    return {
        "id": member.id,
        "f_emp": member.objectives[0],
        "f_div": member.objectives[1],
        "level": member.payload.get("level"),
        "solution": member.payload.get("solution"),
        "pushes": member.payload.get("pushes"),
    }


def run_experiment(config: ExperimentConfig, out_dir: Path) -> dict:
    """Execute every seed of an experiment, writing artifacts under out_dir.

    Returns the manifest document.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    problem = SokobanProblem(spec=config.spec, limits=config.limits)
    manifest = {
        "tool": "sokoevo",
        "version": __version__,
        "config": config.to_dict(),
        "seed_dirs": {},
    }
    for seed in config.seeds:
        seed_dir = out_dir / f"seed_{seed}"
        seed_dir.mkdir(parents=True, exist_ok=True)
        manifest["seed_dirs"][str(seed)] = seed_dir.name
        with open(seed_dir / "generations.jsonl", "w") as log:
            result = engine.run(
                config.engine,
                problem,
                sink=lambda rec: log.write(rec.to_json() + "\n"),
                seed=seed,
            )
        for name, archive in (("ca_final", result.final_ca), ("da_final", result.final_da)):
            with open(seed_dir / f"{name}.jsonl", "w") as out:
                for member in archive:
                    out.write(json.dumps(_archive_row(member), sort_keys=True) + "\n")
        _write_metrics(seed_dir / "metrics.csv", result)
    with open(out_dir / "manifest.json", "w") as out:
        json.dump(manifest, out, indent=2, sort_keys=True)
        out.write("\n")
    return manifest


def _write_metrics(path: Path, result: engine.RunRecord) -> None:
    with open(path, "w", newline="") as out:
        writer = csv.writer(out)
        writer.writerow(
            [
                "generation",
                "ca_size",
                "da_size",
                "da_hypervolume",
                "cumulative_hypervolume",
                "feasible_offspring_rate",
            ]
        )
        for rec in result.records:
            rate = rec.feasible_offspring / rec.offspring if rec.offspring else 0.0
            writer.writerow(
                [
                    rec.generation,
                    len(rec.ca),
                    len(rec.da),
                    repr(rec.da_hypervolume),
                    repr(rec.cumulative_hypervolume),
                    repr(rate),
                ]
            )


def _load_archive(seed_dir: Path, name: str) -> list[dict]:
    path = Path(seed_dir) / f"{name}_final.jsonl"
    if not path.is_file():
        raise MissingArtifacts(f"expected archive listing at {path}")
    rows = [json.loads(line) for line in path.read_text().splitlines() if line.strip()]
    if not rows:
        raise MissingArtifacts(f"archive listing {path} is empty")
    return rows


def export_front(seed_dir: Path, which: str) -> str:
    """Render a final-front CSV from run artifacts; which is ca|da|union."""
    if which not in ("ca", "da", "union"):
        raise ValueError(f"which must be ca, da, or union, got {which!r}")
    if which == "union":
        rows = _load_archive(seed_dir, "ca") + _load_archive(seed_dir, "da")
        points = [(r["f_emp"], r["f_div"]) for r in rows]
        keep = set()
        for i, p in enumerate(points):
            if not any(evaluation.dominates(q, p) for q in points):
                keep.add(i)
        seen_ids = set()
        filtered = []
        for i, r in enumerate(rows):
            if i in keep and r["id"] not in seen_ids:
                seen_ids.add(r["id"])
                filtered.append(r)
        rows = filtered
    else:
        rows = _load_archive(seed_dir, which)
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["id", "f_emp", "f_div", "level", "solution_length"])
    for r in sorted(rows, key=lambda r: r["id"]):
        solution = r.get("solution") or ""
        writer.writerow([r["id"], repr(r["f_emp"]), repr(r["f_div"]), r["level"], len(solution)])
    return buf.getvalue()


def describe_level(text: str, limits: solver.SolveLimits = solver.SolveLimits()) -> dict:
    """Spot-check report for a single level: objectives plus solver verdict."""
    level = domain.parse_level(text)
    outcome = solver.solve(level, limits)
    return {
        "width": level.width,
        "height": level.height,
        "f_emp": domain.f_emp(level),
        "f_div": domain.f_div(level),
        "verdict": outcome.verdict.value,
        "solution": outcome.solution,
        "pushes": outcome.pushes if outcome.verdict is solver.Verdict.SOLVABLE else None,
        "states_expanded": outcome.states_expanded,
    }
