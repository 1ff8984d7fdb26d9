/** Wire types for the session service. Field names mirror the HTTP API. */

export interface MemberSnapshot {
  id: number;
  objectives: [number, number]; // [f_emp, f_div]
}

export interface SessionSnapshot {
  session_id: string;
  generation: number;
  status: "Idle" | "Stepping" | "Done";
  ca: MemberSnapshot[];
  da: MemberSnapshot[];
}

export interface GenerationRecord {
  generation: number;
  ca: MemberSnapshot[];
  da: MemberSnapshot[];
  offspring: number;
  feasible_offspring: number;
  da_hypervolume: number;
  cumulative_hypervolume: number;
}

export interface StepResponse {
  status: "Idle" | "Stepping" | "Done";
  records: GenerationRecord[];
}

export interface HistoryPoint {
  generation: number;
  ca_size: number;
  da_size: number;
  da_hypervolume: number;
  cumulative_hypervolume: number;
}

export interface SessionState {
  session_id: string;
  generation: number;
  status: string;
  ca: MemberSnapshot[];
  da: MemberSnapshot[];
  history: HistoryPoint[];
}

export interface LevelPayload {
  id: number;
  f_emp: number;
  f_div: number;
  level: string;
  solution: string | null;
  pushes: number | null;
}

export interface PlayResponse {
  member: number;
  won: boolean;
  rejected_moves: number[];
  player: [number, number];
  boxes: [number, number][];
}

export interface SessionConfigForm {
  width: number;
  height: number;
  max_boxes: number;
  ca_capacity: number;
  da_capacity: number;
  offspring_per_generation: number;
  generations: number;
  crossover_probability: number;
  seed: number;
}
