import { readFile, writeFile } from "node:fs/promises";

import { ExtractedRecord, ScoreRecord, parseExtractedRecord } from "./types.js";

export async function readExtractedJsonl(
  path: string,
): Promise<ExtractedRecord[]> {
  const raw = await readFile(path, "utf8");
  const records: ExtractedRecord[] = [];
  const lines = raw.split("\n");
  for (let i = 0; i < lines.length; i++) {
    const line = lines[i].trim();
    if (line === "") continue;
    records.push(parseExtractedRecord(line, i + 1));
  }
  return records;
}

export async function writeScoresJsonl(
  path: string,
  records: ScoreRecord[],
): Promise<void> {
  const body = records
    .map((r) =>
      JSON.stringify({
        id: r.id,
        variant: r.variant,
        text: r.text,
        score_ai: r.score_ai,
        pred: r.pred,
      }),
    )
    .join("\n");
  await writeFile(path, records.length ? body + "\n" : "", "utf8");
}
