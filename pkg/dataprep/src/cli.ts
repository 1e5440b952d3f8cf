#!/usr/bin/env node
/** Command line front end: argument parsing, exit codes, progress text. */

import { parseArgs } from "node:util";

import { PrepareError, prepare } from "./prepare.js";
import { TASK_NAMES } from "./tasks.js";

const USAGE = `usage: dataprep --task <name> --input <smiles file> --output <dataset file>
                [--pool-size <n>] [--seed <n>]

Prepares a scored molecule pool for the optimization engine.

options:
  --task       benchmark task (${TASK_NAMES.join(", ")})
  --input      text file with one SMILES per line (extra tokens ignored)
  --output     dataset file to write; a .meta.json sidecar is written next to it
  --pool-size  maximum number of molecules to keep (default 10000)
  --seed       sampling seed (default 0)
  --help       show this message
`;

const MAX_SKIP_DETAILS = 20;

function fail(message: string, code: number): never {
  process.stderr.write(message + "\n");
  process.exit(code);
}

function parsePositiveInt(text: string, flag: string, minimum: number): number {
  const value = Number(text);
  if (!Number.isInteger(value) || value < minimum) {
    fail(`dataprep: ${flag} must be an integer >= ${minimum}`, 2);
  }
  return value;
}

function main(argv: string[]): void {
  let parsed;
  try {
    parsed = parseArgs({
      args: argv,
      strict: true,
      options: {
        task: { type: "string" },
        input: { type: "string" },
        output: { type: "string" },
        "pool-size": { type: "string", default: "10000" },
        seed: { type: "string", default: "0" },
        help: { type: "boolean", default: false },
      },
    });
  } catch (err) {
    fail(`dataprep: ${(err as Error).message}\n\n${USAGE}`, 2);
  }

  if (parsed.values.help) {
    process.stdout.write(USAGE);
    process.exit(0);
  }
  const { task, input, output } = parsed.values;
  if (!task || !input || !output) {
    fail(`dataprep: --task, --input, and --output are required\n\n${USAGE}`, 2);
  }

  const config = {
    task,
    inputPath: input,
    outputPath: output,
    poolSize: parsePositiveInt(parsed.values["pool-size"]!, "--pool-size", 1),
    seed: parsePositiveInt(parsed.values.seed!, "--seed", 0),
  };

  let report;
  try {
    report = prepare(config);
  } catch (err) {
    if (err instanceof PrepareError) fail(`dataprep: ${err.message}`, 1);
    throw err;
  }

  if (report.skipped > 0) {
    process.stderr.write(`dataprep: skipped ${report.skipped} unparsable entries\n`);
    for (const entry of report.skippedEntries.slice(0, MAX_SKIP_DETAILS)) {
      process.stderr.write(`  line ${entry.line}: "${entry.smiles}" (${entry.reason})\n`);
    }
    if (report.skippedEntries.length > MAX_SKIP_DETAILS) {
      process.stderr.write(`  ... and ${report.skippedEntries.length - MAX_SKIP_DETAILS} more\n`);
    }
  }
  process.stdout.write(
    `wrote ${report.written} records to ${report.outputPath} ` +
      `(${report.inputEntries} entries in, ${report.skipped} skipped, ` +
      `${report.duplicatesMerged} duplicates merged)\n`,
  );
}

main(process.argv.slice(2));
