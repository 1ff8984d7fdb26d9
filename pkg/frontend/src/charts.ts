/** Dependency-free SVG charts: objective-space scatter and trend lines. */

import type { HistoryPoint } from "./types.js";
import type { ScatterPoint } from "./viewmodel.js";

const SVG_NS = "http://www.w3.org/2000/svg";

function el(name: string, attrs: Record<string, string | number>): SVGElement {
  const node = document.createElementNS(SVG_NS, name);
  for (const [k, v] of Object.entries(attrs)) node.setAttribute(k, String(v));
  return node;
}

const MARGIN = { top: 12, right: 14, bottom: 34, left: 46 };

function frame(svg: SVGSVGElement, xLabel: string, yLabel: string) {
  const width = svg.clientWidth || Number(svg.getAttribute("width")) || 360;
  const height = svg.clientHeight || Number(svg.getAttribute("height")) || 300;
  svg.replaceChildren();
  const plotW = width - MARGIN.left - MARGIN.right;
  const plotH = height - MARGIN.top - MARGIN.bottom;
  svg.appendChild(
    el("rect", {
      x: MARGIN.left,
      y: MARGIN.top,
      width: plotW,
      height: plotH,
      class: "chart-bg",
    }),
  );
  const xText = el("text", {
    x: MARGIN.left + plotW / 2,
    y: height - 6,
    class: "axis-label",
    "text-anchor": "middle",
  });
  xText.textContent = xLabel;
  svg.appendChild(xText);
  const yText = el("text", {
    x: 12,
    y: MARGIN.top + plotH / 2,
    class: "axis-label",
    "text-anchor": "middle",
    transform: `rotate(-90 12 ${MARGIN.top + plotH / 2})`,
  });
  yText.textContent = yLabel;
  svg.appendChild(yText);
  return { plotW, plotH };
}

function ticks(svg: SVGSVGElement, plotW: number, plotH: number, xMax: number, yMax: number) {
  for (const frac of [0, 0.5, 1]) {
    const tx = el("text", {
      x: MARGIN.left + frac * plotW,
      y: MARGIN.top + plotH + 16,
      class: "tick",
      "text-anchor": "middle",
    });
    tx.textContent = (frac * xMax).toFixed(xMax >= 10 ? 0 : 2);
    svg.appendChild(tx);
    const ty = el("text", {
      x: MARGIN.left - 6,
      y: MARGIN.top + (1 - frac) * plotH + 4,
      class: "tick",
      "text-anchor": "end",
    });
    ty.textContent = (frac * yMax).toFixed(2);
    svg.appendChild(ty);
  }
}

/** One circle per archive member in (emptiness, diversity) space. */
export function renderScatter(
  svg: SVGSVGElement,
  points: ScatterPoint[],
  selected: number | null,
  onSelect: (id: number) => void,
): void {
  const { plotW, plotH } = frame(svg, "emptiness", "spatial diversity");
  ticks(svg, plotW, plotH, 1, 1);
  for (const p of points) {
    const cx = MARGIN.left + p.fEmp * plotW;
    const cy = MARGIN.top + (1 - p.fDiv) * plotH;
    const dot = el("circle", {
      cx,
      cy,
      r: p.id === selected ? 7 : 5,
      class: `dot dot-${p.archive}${p.id === selected ? " dot-selected" : ""}`,
      "data-id": p.id,
      "data-archive": p.archive,
    });
    const title = document.createElementNS(SVG_NS, "title");
    title.textContent = `#${p.id} ${p.archive.toUpperCase()} emptiness=${p.fEmp.toFixed(3)} diversity=${p.fDiv.toFixed(3)}`;
    dot.appendChild(title);
    dot.addEventListener("click", () => onSelect(p.id));
    svg.appendChild(dot);
  }
}

/** Hypervolume of the diversity archive and of the cumulative front. */
export function renderTrend(svg: SVGSVGElement, history: HistoryPoint[]): void {
  const { plotW, plotH } = frame(svg, "generation", "hypervolume");
  if (history.length === 0) return;
  const xMax = Math.max(1, history[history.length - 1]!.generation);
  const yMax = Math.max(
    0.05,
    ...history.map((h) => Math.max(h.da_hypervolume, h.cumulative_hypervolume)),
  );
  ticks(svg, plotW, plotH, xMax, yMax);
  const toPath = (get: (h: HistoryPoint) => number) =>
    history
      .map((h, i) => {
        const x = MARGIN.left + (h.generation / xMax) * plotW;
        const y = MARGIN.top + (1 - get(h) / yMax) * plotH;
        return `${i === 0 ? "M" : "L"}${x.toFixed(1)},${y.toFixed(1)}`;
      })
      .join(" ");
  svg.appendChild(
    el("path", { d: toPath((h) => h.cumulative_hypervolume), class: "line line-front" }),
  );
  svg.appendChild(el("path", { d: toPath((h) => h.da_hypervolume), class: "line line-da" }));
}

/** Archive size trend used alongside the hypervolume chart. */
export function renderSizes(svg: SVGSVGElement, history: HistoryPoint[]): void {
  const { plotW, plotH } = frame(svg, "generation", "archive size");
  if (history.length === 0) return;
  const xMax = Math.max(1, history[history.length - 1]!.generation);
  const yMax = Math.max(1, ...history.map((h) => Math.max(h.ca_size, h.da_size)));
  ticks(svg, plotW, plotH, xMax, yMax);
  const toPath = (get: (h: HistoryPoint) => number) =>
    history
      .map((h, i) => {
        const x = MARGIN.left + (h.generation / xMax) * plotW;
        const y = MARGIN.top + (1 - get(h) / yMax) * plotH;
        return `${i === 0 ? "M" : "L"}${x.toFixed(1)},${y.toFixed(1)}`;
      })
      .join(" ");
  svg.appendChild(el("path", { d: toPath((h) => h.ca_size), class: "line line-ca" }));
  svg.appendChild(el("path", { d: toPath((h) => h.da_size), class: "line line-da" }));
}
