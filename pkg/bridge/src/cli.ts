#!/usr/bin/env node
import { parseArgs } from "node:util";

import { scoreFile } from "./scoreFile.js";
import { resolveScorer } from "./scorers/index.js";
import { MalformedLineError, ModelLoadError } from "./types.js";

const USAGE =
  "usage: pdfuzz-bridge --in extracted.jsonl --out scores.jsonl [--model ID]\n" +
  "\n" +
  "Scores stream-order extracted text with an AI-text detector.\n" +
  "Input lines: {\"id\": ..., \"variant\": \"normal\"|\"attacked\", \"text\": ...}\n" +
  "Output adds score_ai in [0,1] and pred (\"ai\" iff score_ai >= 0.5).\n" +
  '--model defaults to "heuristic" (built-in, offline); any other value is\n' +
  "resolved by the transformers runtime (Hugging Face id or local path).\n";

export async function main(argv: string[]): Promise<number> {
  let values: { in?: string; out?: string; model?: string; help?: boolean };
  try {
    ({ values } = parseArgs({
      args: argv,
      options: {
        in: { type: "string" },
        out: { type: "string" },
        model: { type: "string", default: "heuristic" },
        help: { type: "boolean", short: "h" },
      },
    }));
  } catch (err) {
    process.stderr.write(`pdfuzz-bridge: ${String(err)}\n${USAGE}`);
    return 2;
  }
  if (values.help) {
    process.stdout.write(USAGE);
    return 0;
  }
  if (!values.in || !values.out) {
    process.stderr.write(`pdfuzz-bridge: --in and --out are required\n${USAGE}`);
    return 2;
  }

  try {
    const scorer = await resolveScorer(values.model ?? "heuristic");
    const result = await scoreFile(values.in, values.out, scorer);
    const { normalMean, attackedMean, attackedBelowNormal } = result.direction;
    process.stdout.write(
      `scored ${result.records.length} records with ${scorer.name}\n`,
    );
    if (normalMean !== null && attackedMean !== null) {
      process.stdout.write(
        `directional check (not gated): mean score_ai normal=${normalMean.toFixed(4)} ` +
          `attacked=${attackedMean.toFixed(4)} ` +
          `attacked<normal=${attackedBelowNormal}\n`,
      );
    }
    return 0;
  } catch (err) {
    if (err instanceof MalformedLineError || err instanceof ModelLoadError) {
      process.stderr.write(`pdfuzz-bridge: ${err.message}\n`);
      return 2;
    }
    if (err instanceof Error && "code" in err && err.code === "ENOENT") {
      process.stderr.write(`pdfuzz-bridge: ${err.message}\n`);
      return 2;
    }
    throw err;
  }
}

const isDirectRun =
  process.argv[1] !== undefined &&
  import.meta.url === new URL(`file://${process.argv[1]}`).href;

if (isDirectRun) {
  main(process.argv.slice(2)).then((code) => {
    process.exitCode = code;
  });
}
