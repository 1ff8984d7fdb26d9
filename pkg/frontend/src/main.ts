/** Page wiring: config form, stepping controls, charts, and play mode. */

import * as api from "./api.js";
import { renderScatter, renderSizes, renderTrend } from "./charts.js";
import { applyMove, checkWin, parseLevel, replay, type Direction, type GameState, key } from "./game.js";
import type { GenerationRecord, HistoryPoint, SessionConfigForm } from "./types.js";
import {
  chromosomeShape,
  mergeHistory,
  recordToHistoryPoint,
  scatterPoints,
  validateConfig,
  type ArchiveSnapshot,
} from "./viewmodel.js";
import { ALGORITHM_STAGES, INTRO_TEXT, STAGE_TEXT, animateStages, type AlgorithmStage } from "./walkthrough.js";

const $ = <T extends HTMLElement>(id: string): T => {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
};

const DEMO_LEVEL = "#####\n#@$.#\n#####";

interface AppState {
  sessionId: string | null;
  snapshot: ArchiveSnapshot | null;
  history: HistoryPoint[];
  status: string;
  selected: number | null;
  selectedMoves: string;
  game: GameState | null;
  gameLevelText: string | null;
  stepping: boolean;
  events: EventSource | null;
}

const app: AppState = {
  sessionId: null,
  snapshot: null,
  history: [],
  status: "Idle",
  selected: null,
  selectedMoves: "",
  game: null,
  gameLevelText: null,
  stepping: false,
  events: null,
};

function readForm(): SessionConfigForm {
  const num = (id: string) => Number(($(id) as HTMLInputElement).value);
  return {
    width: num("cfg-width"),
    height: num("cfg-height"),
    max_boxes: num("cfg-max-boxes"),
    ca_capacity: num("cfg-ca"),
    da_capacity: num("cfg-da"),
    offspring_per_generation: num("cfg-offspring"),
    generations: num("cfg-generations"),
    crossover_probability: num("cfg-crossover"),
    seed: num("cfg-seed"),
  };
}

function showFormErrors(errors: Partial<Record<string, string>>): void {
  for (const field of [
    "width",
    "height",
    "max-boxes",
    "ca",
    "da",
    "offspring",
    "generations",
    "crossover",
    "seed",
  ]) {
    const keyName = field.replace(/-/g, "_");
    const lookup: Record<string, string> = {
      max_boxes: "max_boxes",
      ca: "ca_capacity",
      da: "da_capacity",
      offspring: "offspring_per_generation",
      crossover: "crossover_probability",
    };
    const formKey = lookup[keyName] ?? keyName;
    $(`err-${field}`).textContent = errors[formKey] ?? "";
  }
}

function renderChromosomePanel(): void {
  const form = readForm();
  const shape = chromosomeShape(form.width, form.height);
  const panel = $("chromosome-grid");
  panel.style.gridTemplateColumns = `repeat(${Math.max(shape.cols, 1)}, 14px)`;
  panel.replaceChildren();
  for (let i = 0; i < shape.genes; i++) {
    const cell = document.createElement("div");
    cell.className = "gene";
    panel.appendChild(cell);
  }
  $("chromosome-caption").textContent =
    `${shape.rows} x ${shape.cols} interior = ${shape.genes} genes inside the wall border`;
}

function setBanner(text: string, kind: "info" | "error" | "win" | "") {
  const banner = $("banner");
  banner.textContent = text;
  banner.className = kind ? `banner banner-${kind}` : "banner hidden";
}

function renderCharts(): void {
  if (!app.snapshot) return;
  const points = scatterPoints(app.snapshot);
  renderScatter(
    $("scatter") as unknown as SVGSVGElement,
    points,
    app.selected,
    (id) => void selectMember(id),
  );
  renderTrend($("trend") as unknown as SVGSVGElement, app.history);
  renderSizes($("sizes") as unknown as SVGSVGElement, app.history);
  $("scatter-caption").textContent =
    `generation ${app.snapshot.generation} — ${app.snapshot.ca.length} CA + ${app.snapshot.da.length} DA points`;
  renderMemberList();
}

function renderMemberList(): void {
  if (!app.snapshot) return;
  const list = $("member-list");
  list.replaceChildren();
  const rows = [
    ...app.snapshot.da.map((m) => ({ ...m, archive: "DA" })),
    ...app.snapshot.ca.map((m) => ({ ...m, archive: "CA" })),
  ];
  for (const m of rows) {
    const item = document.createElement("button");
    item.className = `member${m.id === app.selected ? " member-selected" : ""}`;
    item.textContent = `#${m.id} ${m.archive} (${m.objectives[0].toFixed(3)}, ${m.objectives[1].toFixed(3)})`;
    item.addEventListener("click", () => void selectMember(m.id));
    list.appendChild(item);
  }
}

function renderBoard(): void {
  const board = $("board");
  board.replaceChildren();
  if (!app.game) return;
  const g = app.game;
  board.style.gridTemplateColumns = `repeat(${g.width}, 26px)`;
  for (let r = 0; r < g.height; r++) {
    for (let c = 0; c < g.width; c++) {
      const cell = document.createElement("div");
      const k = key(r, c);
      let cls = "tile tile-floor";
      let glyph = "";
      if (g.walls.has(k)) cls = "tile tile-wall";
      else if (g.targets.has(k)) cls = "tile tile-target";
      if (g.boxes.has(k)) {
        cls += g.targets.has(k) ? " tile-box-on-target" : " tile-box";
        glyph = "▣";
      }
      if (g.player[0] === r && g.player[1] === c) glyph = "●";
      cell.className = cls;
      cell.textContent = glyph;
      board.appendChild(cell);
    }
  }
  $("move-log").textContent = app.selectedMoves || "(no moves yet)";
}

async function selectMember(id: number): Promise<void> {
  if (!app.sessionId) return;
  try {
    const payload = await api.getLevel(app.sessionId, id);
    app.selected = id;
    app.selectedMoves = "";
    app.gameLevelText = payload.level;
    app.game = parseLevel(payload.level);
    $("play-objectives").textContent =
      `emptiness ${payload.f_emp.toFixed(4)} · diversity ${payload.f_div.toFixed(4)}` +
      (payload.pushes !== null ? ` · solver solution: ${payload.pushes} push(es)` : "");
    setBanner("", "");
    renderCharts();
    renderBoard();
  } catch (err) {
    if (err instanceof api.ApiError && err.status === 404) {
      setBanner(`level #${id} is no longer archived`, "error");
    } else {
      setBanner(`failed to load level: ${err}`, "error");
    }
  }
}

function loadDemoLevel(): void {
  app.selected = null;
  app.selectedMoves = "";
  app.gameLevelText = DEMO_LEVEL;
  app.game = parseLevel(DEMO_LEVEL);
  $("play-objectives").textContent = "demo level — push the box onto the target";
  setBanner("", "");
  renderBoard();
}

async function handleMove(dir: Direction): Promise<void> {
  if (!app.game || !app.gameLevelText) return;
  const out = applyMove(app.game, dir);
  if (!out.moved) return; // illegal moves change nothing and are not logged
  app.game = out.state;
  app.selectedMoves += dir;
  renderBoard();
  if (checkWin(app.game)) {
    if (app.sessionId && app.selected !== null) {
      // Local win; confirm with the server on the identical move string.
      try {
        const verdict = await api.play(app.sessionId, app.selected, app.selectedMoves);
        setBanner(
          verdict.won ? "solved — server confirmed the win" : "server disagrees with local win",
          verdict.won ? "win" : "error",
        );
      } catch (err) {
        setBanner(`could not confirm win: ${err}`, "error");
      }
    } else {
      const local = replay(app.gameLevelText, app.selectedMoves);
      setBanner(local.won ? "solved!" : "something went wrong", local.won ? "win" : "error");
    }
  }
}

function resetPlay(): void {
  if (!app.gameLevelText) return;
  app.game = parseLevel(app.gameLevelText);
  app.selectedMoves = "";
  setBanner("", "");
  renderBoard();
}

function highlightStage(stage: AlgorithmStage | null): void {
  for (const s of ALGORITHM_STAGES) {
    const node = $(`stage-${s.replace(/ /g, "-")}`);
    node.className = `stage${s === stage ? " stage-active" : ""}`;
  }
  $("stage-text").textContent = stage ? STAGE_TEXT[stage] : INTRO_TEXT;
}

function setStepControls(): void {
  const disabled = !app.sessionId || app.stepping || app.status === "Done";
  for (const id of ["btn-step-1", "btn-step-10", "btn-run-end"]) {
    ($(id) as HTMLButtonElement).disabled = disabled;
  }
  $("session-status").textContent = app.sessionId
    ? `session ${app.sessionId.slice(0, 8)} — ${app.stepping ? "Stepping" : app.status}`
    : "no session";
}

function absorbRecords(records: GenerationRecord[]): void {
  if (records.length === 0) return;
  const last = records[records.length - 1]!;
  app.snapshot = { generation: last.generation, ca: last.ca, da: last.da };
  app.history = mergeHistory(app.history, records);
  renderCharts();
}

async function doStep(k: number): Promise<void> {
  if (!app.sessionId || app.stepping) return;
  app.stepping = true;
  setStepControls();
  try {
    const animation = animateStages(highlightStage);
    const resp = await api.stepSession(app.sessionId, k);
    await animation;
    app.status = resp.status;
    absorbRecords(resp.records);
  } catch (err) {
    if (err instanceof api.ApiError && err.status === 404) {
      setBanner("session is gone (server restarted?) — create a new one", "error");
    } else if (err instanceof api.ApiError && err.status === 409) {
      setBanner("a step is already in flight", "error");
    } else {
      setBanner(`step failed: ${err}`, "error");
    }
  } finally {
    app.stepping = false;
    setStepControls();
  }
}

async function runToEnd(): Promise<void> {
  while (app.sessionId && app.status !== "Done") {
    await doStep(10);
    if ($("banner").classList.contains("banner-error")) break;
  }
}

async function startSession(): Promise<void> {
  const form = readForm();
  const errors = validateConfig(form);
  showFormErrors(errors);
  if (Object.keys(errors).length > 0) return;
  if (app.events) {
    app.events.close();
    app.events = null;
  }
  if (app.sessionId) {
    void api.deleteSession(app.sessionId).catch(() => undefined);
  }
  try {
    const snap = await api.createSession(form);
    app.sessionId = snap.session_id;
    app.status = snap.status;
    app.snapshot = { generation: snap.generation, ca: snap.ca, da: snap.da };
    app.selected = null;
    app.game = null;
    app.gameLevelText = null;
    const state = await api.getState(snap.session_id);
    app.history = state.history;
    app.events = api.openEvents(snap.session_id, (data) => {
      // Reconciled by generation index; overlaps with step responses are dropped.
      absorbRecords([JSON.parse(data) as GenerationRecord]);
    });
    setBanner("", "");
    renderCharts();
    renderBoard();
  } catch (err) {
    if (err instanceof api.ApiError && err.status === 422 && Array.isArray(err.detail)) {
      const serverErrors: Record<string, string> = {};
      for (const item of err.detail as { loc?: unknown[]; msg?: string }[]) {
        const field = String(item.loc?.[item.loc.length - 1] ?? "");
        if (field) serverErrors[field] = item.msg ?? "invalid";
      }
      showFormErrors(serverErrors);
    } else {
      setBanner(`could not create session: ${err}`, "error");
    }
  }
  setStepControls();
}

function init(): void {
  renderChromosomePanel();
  highlightStage(null);
  loadDemoLevel();
  setStepControls();

  for (const id of ["cfg-width", "cfg-height"]) {
    $(id).addEventListener("input", renderChromosomePanel);
  }
  $("btn-start").addEventListener("click", () => void startSession());
  $("btn-step-1").addEventListener("click", () => void doStep(1));
  $("btn-step-10").addEventListener("click", () => void doStep(10));
  $("btn-run-end").addEventListener("click", () => void runToEnd());
  $("btn-demo").addEventListener("click", loadDemoLevel);
  $("btn-reset-play").addEventListener("click", resetPlay);
  for (const [id, dir] of [
    ["btn-up", "U"],
    ["btn-down", "D"],
    ["btn-left", "L"],
    ["btn-right", "R"],
  ] as const) {
    $(id).addEventListener("click", () => void handleMove(dir));
  }
  document.addEventListener("keydown", (event) => {
    const mapping: Record<string, Direction> = {
      ArrowUp: "U",
      ArrowDown: "D",
      ArrowLeft: "L",
      ArrowRight: "R",
    };
    const dir = mapping[event.key];
    if (dir && app.game) {
      event.preventDefault();
      void handleMove(dir);
    }
  });
}

document.addEventListener("DOMContentLoaded", init);
