/** Record shapes of the JSONL file contract with the primary toolkit. */

export type Variant = "normal" | "attacked";

/** One extracted document variant, as produced by the PDF pipeline. */
export interface ExtractedRecord {
  id: string;
  variant: Variant;
  text: string;
}

/** One scored record; `pred` is "ai" exactly when score_ai >= 0.5. */
export interface ScoreRecord extends ExtractedRecord {
  score_ai: number;
  pred: "ai" | "human";
}

export class MalformedLineError extends Error {
  constructor(
    public readonly lineNumber: number,
    detail: string,
  ) {
    super(`line ${lineNumber}: ${detail}`);
    this.name = "MalformedLineError";
  }
}

export class ModelLoadError extends Error {
  constructor(detail: string) {
    super(detail);
    this.name = "ModelLoadError";
  }
}

export function parseExtractedRecord(
  line: string,
  lineNumber: number,
): ExtractedRecord {
  let obj: unknown;
  try {
    obj = JSON.parse(line);
  } catch (err) {
    throw new MalformedLineError(lineNumber, `invalid JSON (${String(err)})`);
  }
  if (typeof obj !== "object" || obj === null || Array.isArray(obj)) {
    throw new MalformedLineError(lineNumber, "record must be a JSON object");
  }
  const rec = obj as Record<string, unknown>;
  if (typeof rec.id !== "string" || rec.id.length === 0) {
    throw new MalformedLineError(lineNumber, "missing string field 'id'");
  }
  if (rec.variant !== "normal" && rec.variant !== "attacked") {
    throw new MalformedLineError(
      lineNumber,
      "field 'variant' must be \"normal\" or \"attacked\"",
    );
  }
  if (typeof rec.text !== "string") {
    throw new MalformedLineError(lineNumber, "missing string field 'text'");
  }
  return { id: rec.id, variant: rec.variant, text: rec.text };
}
