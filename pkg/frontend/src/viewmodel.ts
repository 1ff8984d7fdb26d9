/**
 * Pure view-model logic: scatter/trend data derived from snapshots, and
 * client-side form validation mirroring the ranges the service enforces.
 */

import type {
  GenerationRecord,
  HistoryPoint,
  MemberSnapshot,
  SessionConfigForm,
} from "./types.js";

export interface ScatterPoint {
  id: number;
  fEmp: number;
  fDiv: number;
  archive: "ca" | "da";
}

export interface ArchiveSnapshot {
  generation: number;
  ca: MemberSnapshot[];
  da: MemberSnapshot[];
}

/** One point per archive member; length is always |CA| + |DA|. */
export function scatterPoints(snapshot: ArchiveSnapshot): ScatterPoint[] {
  const points: ScatterPoint[] = [];
  for (const m of snapshot.ca) {
    points.push({ id: m.id, fEmp: m.objectives[0], fDiv: m.objectives[1], archive: "ca" });
  }
  for (const m of snapshot.da) {
    points.push({ id: m.id, fEmp: m.objectives[0], fDiv: m.objectives[1], archive: "da" });
  }
  return points;
}

export function recordToSnapshot(record: GenerationRecord): ArchiveSnapshot {
  return { generation: record.generation, ca: record.ca, da: record.da };
}

export function recordToHistoryPoint(record: GenerationRecord): HistoryPoint {
  return {
    generation: record.generation,
    ca_size: record.ca.length,
    da_size: record.da.length,
    da_hypervolume: record.da_hypervolume,
    cumulative_hypervolume: record.cumulative_hypervolume,
  };
}

/**
 * Append records in generation order, dropping any the history already
 * covers (the SSE stream and step responses may overlap).
 */
export function mergeHistory(history: HistoryPoint[], records: GenerationRecord[]): HistoryPoint[] {
  const out = [...history];
  const last = () => (out.length > 0 ? out[out.length - 1]!.generation : -1);
  const sorted = [...records].sort((a, b) => a.generation - b.generation);
  for (const rec of sorted) {
    if (rec.generation > last()) out.push(recordToHistoryPoint(rec));
  }
  return out;
}

export const MAX_LEVEL_AREA = 400;

export type FormErrors = Partial<Record<keyof SessionConfigForm, string>>;

/** Mirrors the service's validation so errors surface before submission. */
export function validateConfig(form: SessionConfigForm): FormErrors {
  const errors: FormErrors = {};
  if (!Number.isInteger(form.width) || form.width < 3) errors.width = "must be an integer >= 3";
  if (!Number.isInteger(form.height) || form.height < 3) errors.height = "must be an integer >= 3";
  if (!errors.width && !errors.height && form.width * form.height > MAX_LEVEL_AREA) {
    errors.width = errors.height = `level area must be <= ${MAX_LEVEL_AREA} tiles`;
  }
  if (!Number.isInteger(form.max_boxes) || form.max_boxes < 1) {
    errors.max_boxes = "must be an integer >= 1";
  } else if (!errors.width && !errors.height) {
    const interior = (form.width - 2) * (form.height - 2);
    if (interior >= 3 && form.max_boxes > Math.floor(interior / 3)) {
      errors.max_boxes = `must be <= ${Math.floor(interior / 3)} for this size`;
    }
  }
  if (!Number.isInteger(form.ca_capacity) || form.ca_capacity < 1) {
    errors.ca_capacity = "must be an integer >= 1";
  }
  if (!Number.isInteger(form.da_capacity) || form.da_capacity < 1) {
    errors.da_capacity = "must be an integer >= 1";
  }
  if (!Number.isInteger(form.offspring_per_generation) || form.offspring_per_generation < 1) {
    errors.offspring_per_generation = "must be an integer >= 1";
  }
  if (!Number.isInteger(form.generations) || form.generations < 0) {
    errors.generations = "must be an integer >= 0";
  }
  if (!(form.crossover_probability >= 0 && form.crossover_probability <= 1)) {
    errors.crossover_probability = "must be in [0, 1]";
  }
  if (!Number.isInteger(form.seed) || form.seed < 0) {
    errors.seed = "must be a nonnegative integer";
  }
  return errors;
}

/**
 * Chromosome panel geometry: the flattened interior gene sequence for the
 * current spec, before any session exists.
 */
export function chromosomeShape(width: number, height: number): {
  rows: number;
  cols: number;
  genes: number;
} {
  const rows = Math.max(0, height - 2);
  const cols = Math.max(0, width - 2);
  return { rows, cols, genes: rows * cols };
}

export const ALGORITHM_STAGES = [
  "mating selection",
  "reproduction",
  "evaluation",
  "survivor selection",
] as const;

export type AlgorithmStage = (typeof ALGORITHM_STAGES)[number];
