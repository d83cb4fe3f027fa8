export { scoreFile } from "./scoreFile.js";
export type { DirectionalCheck, ScoreFileResult } from "./scoreFile.js";
export { resolveScorer, heuristicScorer } from "./scorers/index.js";
export type { Scorer } from "./scorers/index.js";
export { bigramEntropyBits, entropyScore } from "./scorers/heuristic.js";
export { readExtractedJsonl, writeScoresJsonl } from "./jsonl.js";
export {
  MalformedLineError,
  ModelLoadError,
  parseExtractedRecord,
} from "./types.js";
export type { ExtractedRecord, ScoreRecord, Variant } from "./types.js";
