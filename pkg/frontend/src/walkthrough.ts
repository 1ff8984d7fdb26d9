/**
 * Static walkthrough content keyed to the animated algorithm stage. The
 * text explains each phase of the two-archive evolutionary loop in plain
 * terms for readers new to multi-objective optimization.
 */

import { ALGORITHM_STAGES, type AlgorithmStage } from "./viewmodel.js";

export const STAGE_TEXT: Record<AlgorithmStage, string> = {
  "mating selection":
    "One parent is drawn uniformly from the convergence archive (CA) and one " +
    "from the diversity archive (DA). The CA pulls offspring toward the Pareto " +
    "front; the DA keeps the search spread out along it.",
  reproduction:
    "With high probability the two parent chromosomes are cut at a single " +
    "point and their tails swapped (crossover); each child's tiles are then " +
    "resampled at a low per-gene rate (mutation) and repaired so the level " +
    "stays well-formed: one player, matched boxes and targets.",
  evaluation:
    "Each child level is scored on emptiness (share of floor tiles) and " +
    "spatial diversity (how evenly floor spreads across rows), and a solver " +
    "proves whether the level can actually be finished. Unplayable levels " +
    "are logged but never enter an archive.",
  "survivor selection":
    "Feasible children are offered to both archives. The CA keeps the most " +
    "convergent nondominated set using an epsilon-indicator fitness; the DA " +
    "keeps a spread-out nondominated set by dropping its most crowded member, " +
    "protecting the extremes of the front.",
};

export const INTRO_TEXT =
  "Levels are encoded as chromosomes: the flattened sequence of interior " +
  "tiles inside a fixed wall border. Two objectives are maximized at once, " +
  "so there is no single best level — the result is a front of trade-offs. " +
  "Every dot in the scatter chart is a playable level; click one to inspect " +
  "and play it.";

export { ALGORITHM_STAGES };
export type { AlgorithmStage };

/** Cycle the stage chart through one generation's phases. */
export function animateStages(
  highlight: (stage: AlgorithmStage | null) => void,
  msPerStage = 150,
): Promise<void> {
  return new Promise((resolve) => {
    let i = 0;
    const tick = () => {
      if (i < ALGORITHM_STAGES.length) {
        highlight(ALGORITHM_STAGES[i]!);
        i += 1;
        setTimeout(tick, msPerStage);
      } else {
        highlight(null);
        resolve();
      }
    };
    tick();
  });
}
