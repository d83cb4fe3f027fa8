import { heuristicScorer } from "./heuristic.js";
import { Scorer } from "./scorer.js";
import { loadTransformerScorer } from "./transformers.js";

/**
 * Resolve a model identifier to a scorer.
 *
 * - "heuristic" (or "heuristic:bigram-entropy"): the built-in offline
 *   entropy scorer.
 * - anything else: treated as a model for the transformers runtime
 *   (Hugging Face id or local path), loaded lazily.
 */
export async function resolveScorer(model: string): Promise<Scorer> {
  if (model === "heuristic" || model === "heuristic:bigram-entropy") {
    return heuristicScorer;
  }
  return loadTransformerScorer(model);
}

export { Scorer } from "./scorer.js";
export { heuristicScorer } from "./heuristic.js";
