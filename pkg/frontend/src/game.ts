/**
 * Local Sokoban rules, mirroring the server's move semantics exactly:
 * the player moves one cell; a single box ahead is pushed if the cell
 * beyond is free; anything else leaves the state unchanged. A state wins
 * when every box sits on a target.
 */

export type Direction = "U" | "D" | "L" | "R";

export const DIRECTIONS: Record<Direction, [number, number]> = {
  U: [-1, 0],
  D: [1, 0],
  L: [0, -1],
  R: [0, 1],
};

export interface GameState {
  width: number;
  height: number;
  walls: Set<string>;
  targets: Set<string>;
  player: [number, number];
  boxes: Set<string>;
}

export const key = (r: number, c: number): string => `${r},${c}`;

const SYMBOLS = new Set(["#", " ", "$", ".", "@", "*", "+"]);

export function parseLevel(text: string): GameState {
  const lines = text.split("\n");
  if (lines.length > 0 && lines[lines.length - 1] === "") lines.pop();
  if (lines.length === 0) throw new Error("empty level text");
  const width = lines[0]!.length;
  const walls = new Set<string>();
  const targets = new Set<string>();
  const boxes = new Set<string>();
  let player: [number, number] | null = null;
  lines.forEach((line, r) => {
    if (line.length !== width) throw new Error(`ragged row ${r}`);
    for (let c = 0; c < line.length; c++) {
      const ch = line[c]!;
      if (!SYMBOLS.has(ch)) throw new Error(`unknown symbol ${ch} at ${r},${c}`);
      if (ch === "#") walls.add(key(r, c));
      if (ch === "." || ch === "*" || ch === "+") targets.add(key(r, c));
      if (ch === "$" || ch === "*") boxes.add(key(r, c));
      if (ch === "@" || ch === "+") player = [r, c];
    }
  });
  if (player === null) throw new Error("level has no player");
  return { width, height: lines.length, walls, targets, player, boxes };
}

export interface MoveOutcome {
  state: GameState;
  moved: boolean;
}

/** Apply one move; on an illegal move the original state is returned. */
export function applyMove(state: GameState, dir: Direction): MoveOutcome {
  const [dr, dc] = DIRECTIONS[dir];
  const [r, c] = state.player;
  const dest: [number, number] = [r + dr, c + dc];
  const destKey = key(dest[0], dest[1]);
  if (state.walls.has(destKey)) return { state, moved: false };
  if (state.boxes.has(destKey)) {
    const beyond = key(dest[0] + dr, dest[1] + dc);
    if (state.walls.has(beyond) || state.boxes.has(beyond)) {
      return { state, moved: false };
    }
    const boxes = new Set(state.boxes);
    boxes.delete(destKey);
    boxes.add(beyond);
    return { state: { ...state, player: dest, boxes }, moved: true };
  }
  return { state: { ...state, player: dest }, moved: true };
}

export function checkWin(state: GameState): boolean {
  for (const b of state.boxes) {
    if (!state.targets.has(b)) return false;
  }
  return true;
}

/**
 * Replay a full move string from the level's initial state, skipping
 * rejected moves — the same semantics as the server's play endpoint.
 */
export function replay(levelText: string, moves: string): {
  state: GameState;
  rejected: number[];
  won: boolean;
} {
  let state = parseLevel(levelText);
  const rejected: number[] = [];
  [...moves].forEach((ch, i) => {
    const out = applyMove(state, ch as Direction);
    if (out.moved) state = out.state;
    else rejected.push(i);
  });
  return { state, rejected, won: checkWin(state) };
}
