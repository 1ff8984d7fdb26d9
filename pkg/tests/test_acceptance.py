"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines as they complete. The shared default run (8x8, capacities 20, 100
generations, seed 0) is executed once through the CLI experiment path and
reused by the archive-invariant, trade-off, and determinism criteria.
"""

import json
import math
import random
import time

import numpy as np
import pytest
from fastapi.testclient import TestClient

from oracles import brute_force_nondominated, entropy_oracle, naive_bfs_solvable
from sokoevo import evaluation
from sokoevo.domain import DesignSpec, Tile, decode, f_div, f_emp, parse_level, random_genome
from sokoevo.engine import EngineConfig, Individual, update_ca, update_da
from sokoevo.experiment import ExperimentConfig, run_experiment
from sokoevo.problem import SokobanProblem
from sokoevo.service import create_app
from sokoevo.solver import Verdict, solve, validate_playthrough

DEFAULT_CONFIG = ExperimentConfig(
    engine=EngineConfig(),  # capacities 20, 20 offspring, 100 generations
    spec=DesignSpec(width=8, height=8, max_boxes=3),
)


def report(name: str, ok: bool, detail: str = "") -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] {name}"
    if detail:
        line += f" ({detail})"
    print(line)
    assert ok, line


@pytest.fixture(scope="module")
def default_run(tmp_path_factory):
    """Two byte-compared executions of the default seed-0 experiment."""
    dirs = []
    for name in ("run_a", "run_b"):
        out = tmp_path_factory.mktemp(name)
        run_experiment(DEFAULT_CONFIG, out)
        dirs.append(out)
    records = [
        json.loads(line)
        for line in (dirs[0] / "seed_0" / "generations.jsonl").read_text().splitlines()
    ]
    return {"dirs": dirs, "records": records}


def test_objective_correctness():
    start = time.monotonic()
    spec = DesignSpec(width=8, height=8, max_boxes=3)
    rng = np.random.Generator(np.random.PCG64(2024))
    ok = True
    for _ in range(10_000):
        level = decode(random_genome(spec, rng))
        emp, div = f_emp(level), f_div(level)
        ok &= 0.0 <= emp <= 1.0 and 0.0 <= div <= 1.0
        counts = [
            sum(1 for c in range(1, level.width - 1) if level.grid[r][c] is Tile.FLOOR)
            for r in range(1, level.height - 1)
        ]
        ok &= abs(div - entropy_oracle(counts, level.width - 2)) <= 1e-12
    # Anchor cases on a 5x5 grid with 3 interior rows.
    uniform = parse_level("#####\n#  @#\n# $ #\n#  .#\n#####")
    single = parse_level("#####\n#   #\n#@$.#\n#####")
    skewed = parse_level("#####\n#  @#\n# $##\n# .##\n#####")
    ok &= abs(f_div(uniform) - 1.0) <= 1e-9
    ok &= abs(f_div(single) - 0.0) <= 1e-9
    ok &= abs(f_div(skewed) - 0.946394) <= 1e-6
    ok &= abs(f_div(skewed) - entropy_oracle([2, 1, 1], 3)) <= 1e-9
    elapsed = time.monotonic() - start
    report("objective correctness", ok and elapsed < 10.0, f"{elapsed:.1f}s")


def test_pareto_oracle():
    start = time.monotonic()
    rnd = random.Random(99)
    ok = True
    for _ in range(200):
        pts = [(rnd.random(), rnd.random()) for _ in range(rnd.randint(1, 64))]
        ok &= evaluation.nondominated_filter(pts) == brute_force_nondominated(pts)
    elapsed = time.monotonic() - start
    report("pareto oracle agreement", ok and elapsed < 5.0, f"{elapsed:.1f}s")


def test_solver_oracle():
    start = time.monotonic()
    spec = DesignSpec(width=5, height=5, max_boxes=2)
    ok = True
    for seed in range(500):
        rng = np.random.Generator(np.random.PCG64(seed))
        level = decode(random_genome(spec, rng))
        outcome = solve(level)
        ok &= outcome.verdict is (
            Verdict.SOLVABLE if naive_bfs_solvable(level) else Verdict.UNSOLVABLE
        )
        if outcome.verdict is Verdict.SOLVABLE:
            replay = validate_playthrough(level, outcome.solution)
            ok &= replay.won and replay.rejected_moves == ()
    elapsed = time.monotonic() - start
    report("solver oracle agreement", ok and elapsed < 60.0, f"{elapsed:.1f}s")


def test_archive_invariants(default_run):
    start = time.monotonic()
    records = default_run["records"]
    ok = len(records) == 101
    prev_hv = -1.0
    for rec in records:
        for key in ("ca", "da"):
            members = rec[key]
            ok &= len(members) <= 20
            vecs = [tuple(m["objectives"]) for m in members]
            ok &= evaluation.nondominated_filter(vecs) == vecs
        ok &= rec["cumulative_hypervolume"] >= prev_hv - 1e-12
        prev_hv = rec["cumulative_hypervolume"]
    # Feasibility of archive members: every DA member's level re-solves.
    final_da = (default_run["dirs"][0] / "seed_0" / "da_final.jsonl").read_text().splitlines()
    for line in final_da:
        row = json.loads(line)
        ok &= solve(parse_level(row["level"])).verdict is Verdict.SOLVABLE
    elapsed = time.monotonic() - start
    report("archive invariants over default run", ok, f"{elapsed:.1f}s")


def test_tradeoff_emergence(default_run):
    records = default_run["records"]
    final_da = {tuple(m["objectives"]) for m in records[-1]["da"]}
    vecs = sorted(final_da)
    distinct = len(vecs)
    nondominated = evaluation.nondominated_filter(vecs) == vecs
    emp_spread = max(v[0] for v in vecs) - min(v[0] for v in vecs)
    div_spread = max(v[1] for v in vecs) - min(v[1] for v in vecs)
    hv_ok = records[-1]["da_hypervolume"] >= records[0]["da_hypervolume"] - 1e-12
    ok = distinct >= 5 and nondominated and emp_spread >= 0.2 and div_spread >= 0.2 and hv_ok
    report(
        "trade-off emergence",
        ok,
        f"distinct={distinct}, f_emp spread={emp_spread:.3f}, f_div spread={div_spread:.3f}",
    )


def test_determinism(default_run):
    a, b = default_run["dirs"]
    logs_equal = (
        (a / "seed_0" / "generations.jsonl").read_bytes()
        == (b / "seed_0" / "generations.jsonl").read_bytes()
    )
    # Session stepping must reproduce the headless records exactly.
    with TestClient(create_app()) as client:
        resp = client.post(
            "/sessions",
            json={"width": 8, "height": 8, "max_boxes": 3, "seed": 0, "generations": 100},
        )
        sid = resp.json()["session_id"]
        stepped = []
        for _ in range(100):
            stepped.extend(client.post(f"/sessions/{sid}/step", json={"k": 1}).json()["records"])
    service_matches = stepped == default_run["records"][1:]
    report(
        "determinism",
        logs_equal and service_matches,
        f"logs_equal={logs_equal}, service_matches={service_matches}",
    )


def test_truncation_unit_anchors():
    def ind(i, vec):
        return Individual(id=i, genome=i, objectives=vec, feasible=True)

    # DA boundary-protection example.
    da_members = [
        ind(0, (0.0, 1.0)),
        ind(1, (0.4, 0.8)),
        ind(2, (0.5, 0.7)),
        ind(3, (1.0, 0.0)),
    ]
    da_out = {m.id for m in update_da([], da_members, capacity=3)}
    da_ok = da_out == {0, 2, 3}

    # CA 3-point removal vs exhaustive indicator-fitness oracle.
    ca_members = [ind(0, (1.0, 0.0)), ind(1, (0.5, 0.5)), ind(2, (0.0, 1.0))]
    kappa = 0.05
    neg = {m.id: tuple(-v for v in m.objectives) for m in ca_members}

    def indicator(x, y):
        return max(p - q for p, q in zip(neg[x], neg[y]))

    c = max(
        abs(indicator(x.id, y.id)) for x in ca_members for y in ca_members if x.id != y.id
    )
    fitness = {
        y.id: sum(
            -math.exp(-indicator(x.id, y.id) / (kappa * c)) for x in ca_members if x.id != y.id
        )
        for y in ca_members
    }
    expected_removed = min(fitness, key=lambda i: (fitness[i], i))
    ca_out = {m.id for m in update_ca(ca_members, [], capacity=2, kappa=kappa)}
    ca_ok = ca_out == {0, 1, 2} - {expected_removed}

    report("truncation unit anchors", da_ok and ca_ok, f"da_ok={da_ok}, ca_ok={ca_ok}")
