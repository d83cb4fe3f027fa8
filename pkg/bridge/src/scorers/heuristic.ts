import { Scorer } from "./scorer.js";

/**
 * Offline fallback detector: character bigram entropy squashed to [0, 1].
 *
 * Predictable (low-entropy) text reads as machine-generated, which is the
 * same decision axis real perplexity detectors use, so scrambled extraction
 * pushes scores toward "human" here too. Deterministic and dependency-free;
 * meant for contract tests and smoke runs, not for real detection quality.
 */

const PIVOT_BITS = 3.4;
const SCALE = 2.0;

export function bigramEntropyBits(text: string): number {
  if (text.length < 2) return 0;
  const contexts = new Map<string, Map<string, number>>();
  for (let i = 0; i + 1 < text.length; i++) {
    const a = text[i];
    const b = text[i + 1];
    let bucket = contexts.get(a);
    if (bucket === undefined) {
      bucket = new Map();
      contexts.set(a, bucket);
    }
    bucket.set(b, (bucket.get(b) ?? 0) + 1);
  }
  // conditional entropy H(next | current), weighted by context frequency
  const total = text.length - 1;
  let bits = 0;
  for (const bucket of contexts.values()) {
    let contextTotal = 0;
    for (const count of bucket.values()) contextTotal += count;
    for (const count of bucket.values()) {
      const p = count / contextTotal;
      bits -= (contextTotal / total) * p * Math.log2(p);
    }
  }
  return bits;
}

export function entropyScore(text: string): number {
  const gap = bigramEntropyBits(text) - PIVOT_BITS;
  return 1 / (1 + Math.exp(SCALE * gap));
}

export const heuristicScorer: Scorer = {
  name: "heuristic:bigram-entropy",
  async scoreAi(texts: string[]): Promise<number[]> {
    return texts.map(entropyScore);
  },
};
