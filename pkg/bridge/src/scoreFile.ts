import { readExtractedJsonl, writeScoresJsonl } from "./jsonl.js";
import { Scorer } from "./scorers/index.js";
import { ScoreRecord } from "./types.js";

export interface DirectionalCheck {
  normalMean: number | null;
  attackedMean: number | null;
  attackedBelowNormal: boolean | null;
}

export interface ScoreFileResult {
  records: ScoreRecord[];
  direction: DirectionalCheck;
}

const BATCH_SIZE = 16;

function mean(values: number[]): number | null {
  if (values.length === 0) return null;
  return values.reduce((a, b) => a + b, 0) / values.length;
}

/**
 * Score every record of an extracted.jsonl file, preserving order.
 *
 * The text is never modified; one output record is written per input line.
 * The directional summary (mean score of attacked vs normal variants) is
 * reported for inspection, never gated: it depends entirely on the
 * supplied model.
 */
export async function scoreFile(
  inPath: string,
  outPath: string,
  scorer: Scorer,
): Promise<ScoreFileResult> {
  const inputs = await readExtractedJsonl(inPath);
  const records: ScoreRecord[] = [];
  for (let start = 0; start < inputs.length; start += BATCH_SIZE) {
    const batch = inputs.slice(start, start + BATCH_SIZE);
    const scores = await scorer.scoreAi(batch.map((r) => r.text));
    if (scores.length !== batch.length) {
      throw new Error(
        `scorer returned ${scores.length} scores for ${batch.length} texts`,
      );
    }
    batch.forEach((rec, i) => {
      const score = scores[i];
      if (!Number.isFinite(score) || score < 0 || score > 1) {
        throw new Error(
          `scorer produced an out-of-range score for ${rec.id}: ${score}`,
        );
      }
      records.push({
        ...rec,
        score_ai: score,
        pred: score >= 0.5 ? "ai" : "human",
      });
    });
  }
  await writeScoresJsonl(outPath, records);
  const normalMean = mean(
    records.filter((r) => r.variant === "normal").map((r) => r.score_ai),
  );
  const attackedMean = mean(
    records.filter((r) => r.variant === "attacked").map((r) => r.score_ai),
  );
  return {
    records,
    direction: {
      normalMean,
      attackedMean,
      attackedBelowNormal:
        normalMean !== null && attackedMean !== null
          ? attackedMean < normalMean
          : null,
    },
  };
}
