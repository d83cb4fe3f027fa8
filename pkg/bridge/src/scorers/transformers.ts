import { ModelLoadError } from "../types.js";
import { Scorer } from "./scorer.js";

/**
 * Transformer-backed scorer via `@xenova/transformers` (install separately;
 * models resolve through that runtime's conventions, e.g. a Hugging Face id
 * or a local model directory). Sequence-classification output is mapped to
 * P(ai): labels matching /ai|machine|fake|generated|LABEL_1/i count as the
 * positive class.
 */

const AI_LABEL = /ai|machine|fake|generated|label_1/i;

// non-literal specifier so the optional runtime is resolved only when used
const TRANSFORMERS_MODULE = "@xenova/transformers";

interface ClassificationResult {
  label: string;
  score: number;
}

type Classifier = (
  texts: string[],
  opts: Record<string, unknown>,
) => Promise<ClassificationResult[][] | ClassificationResult[]>;

export async function loadTransformerScorer(model: string): Promise<Scorer> {
  let runtime: { pipeline: (task: string, model: string) => Promise<unknown> };
  try {
    runtime = await import(TRANSFORMERS_MODULE);
  } catch (err) {
    throw new ModelLoadError(
      `@xenova/transformers is not installed (needed for model "${model}"): ${String(err)}`,
    );
  }
  let classify: Classifier;
  try {
    classify = (await runtime.pipeline("text-classification", model)) as Classifier;
  } catch (err) {
    throw new ModelLoadError(`failed to load model "${model}": ${String(err)}`);
  }
  return {
    name: model,
    async scoreAi(texts: string[]): Promise<number[]> {
      if (texts.length === 0) return [];
      const raw = await classify(texts, { topk: 0 });
      const perText: ClassificationResult[][] = Array.isArray(raw[0])
        ? (raw as ClassificationResult[][])
        : (raw as ClassificationResult[]).map((r) => [r]);
      return perText.map((results) => {
        let ai = 0;
        let total = 0;
        for (const { label, score } of results) {
          total += score;
          if (AI_LABEL.test(label)) ai += score;
        }
        return total > 0 ? ai / total : 0.5;
      });
    },
  };
}
