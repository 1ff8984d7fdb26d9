import { describe, expect, it } from "vitest";

import type { GenerationRecord, HistoryPoint, SessionConfigForm } from "../src/types.js";
import {
  chromosomeShape,
  mergeHistory,
  recordToHistoryPoint,
  scatterPoints,
  validateConfig,
} from "../src/viewmodel.js";

const member = (id: number, fEmp: number, fDiv: number) => ({
  id,
  objectives: [fEmp, fDiv] as [number, number],
});

const record = (generation: number, ca: number, da: number): GenerationRecord => ({
  generation,
  ca: Array.from({ length: ca }, (_, i) => member(i, 0.1 * i, 0.5)),
  da: Array.from({ length: da }, (_, i) => member(100 + i, 0.2, 0.1 * i)),
  offspring: 20,
  feasible_offspring: 10,
  da_hypervolume: 0.1 * generation,
  cumulative_hypervolume: 0.2 * generation,
});

describe("scatterPoints", () => {
  it("emits exactly one point per archive member", () => {
    const points = scatterPoints({ generation: 3, ca: record(3, 4, 0).ca, da: record(3, 0, 7).da });
    expect(points).toHaveLength(11);
    expect(points.filter((p) => p.archive === "ca")).toHaveLength(4);
    expect(points.filter((p) => p.archive === "da")).toHaveLength(7);
  });

  it("carries objectives through unchanged", () => {
    const points = scatterPoints({ generation: 0, ca: [member(5, 0.25, 0.75)], da: [] });
    expect(points[0]).toEqual({ id: 5, fEmp: 0.25, fDiv: 0.75, archive: "ca" });
  });
});

describe("mergeHistory", () => {
  it("appends new generations in order and drops overlaps", () => {
    const base: HistoryPoint[] = [recordToHistoryPoint(record(0, 2, 2))];
    const merged = mergeHistory(base, [record(2, 3, 3), record(1, 2, 2), record(0, 2, 2)]);
    expect(merged.map((h) => h.generation)).toEqual([0, 1, 2]);
    expect(merged[2]!.da_hypervolume).toBeCloseTo(0.2);
  });

  it("does not mutate its input", () => {
    const base: HistoryPoint[] = [];
    mergeHistory(base, [record(0, 1, 1)]);
    expect(base).toHaveLength(0);
  });
});

describe("validateConfig", () => {
  const good: SessionConfigForm = {
    width: 8,
    height: 8,
    max_boxes: 3,
    ca_capacity: 20,
    da_capacity: 20,
    offspring_per_generation: 20,
    generations: 100,
    crossover_probability: 0.9,
    seed: 0,
  };

  it("accepts the default configuration", () => {
    expect(validateConfig(good)).toEqual({});
  });

  it("rejects dimensions below the minimum", () => {
    expect(validateConfig({ ...good, width: 2 }).width).toMatch(/>= 3/);
    expect(validateConfig({ ...good, height: 2.5 }).height).toBeDefined();
  });

  it("rejects areas above the service limit", () => {
    const errors = validateConfig({ ...good, width: 30, height: 30 });
    expect(errors.width).toMatch(/400/);
  });

  it("caps max_boxes by a third of the interior", () => {
    // 8x8 interior is 36 cells, so at most 12 boxes.
    expect(validateConfig({ ...good, max_boxes: 12 })).toEqual({});
    expect(validateConfig({ ...good, max_boxes: 13 }).max_boxes).toMatch(/<= 12/);
  });

  it("rejects out-of-range scalars", () => {
    expect(validateConfig({ ...good, crossover_probability: 1.5 }).crossover_probability).toBeDefined();
    expect(validateConfig({ ...good, generations: -1 }).generations).toBeDefined();
    expect(validateConfig({ ...good, seed: -2 }).seed).toBeDefined();
    expect(validateConfig({ ...good, ca_capacity: 0 }).ca_capacity).toBeDefined();
  });
});

describe("chromosomeShape", () => {
  it("describes the interior gene grid", () => {
    expect(chromosomeShape(8, 8)).toEqual({ rows: 6, cols: 6, genes: 36 });
    expect(chromosomeShape(3, 3)).toEqual({ rows: 1, cols: 1, genes: 1 });
  });
});
