/**
 * End-to-end pool preparation: raw SMILES list in, scored dataset out.
 *
 * Stages: parse each entry (keeping the largest fragment of multi-component
 * records), canonicalize and merge duplicates, sample down to the pool cap
 * with a seeded shuffle, then compute fingerprints and the task's three
 * objective components for the surviving molecules. The output is stable
 * byte for byte for a fixed input, task, cap, and seed.
 */

import { readFileSync } from "node:fs";

import { writeCanonicalSmiles } from "./canonical.js";
import {
  DatasetMeta,
  PoolRecord,
  sidecarPath,
  writeDataset,
  writeSidecar,
} from "./dataset.js";
import { morganCountFingerprint } from "./fingerprint.js";
import { Molecule } from "./mol.js";
import { sampleIndices } from "./rng.js";
import { SmilesError, parseSmilesDetailed } from "./smiles.js";
import { TASKS, TASK_NAMES, scoreMolecule } from "./tasks.js";

export class PrepareError extends Error {}

export interface PrepConfig {
  task: string;
  inputPath: string;
  outputPath: string;
  poolSize: number;
  seed: number;
}

export interface SkippedEntry {
  line: number;
  smiles: string;
  reason: string;
}

export interface PrepareReport {
  inputEntries: number;
  parsed: number;
  skipped: number;
  duplicatesMerged: number;
  written: number;
  skippedEntries: SkippedEntry[];
  outputPath: string;
  sidecarPath: string;
}

interface ParsedEntry {
  line: number;
  canonical: string;
  mol: Molecule;
}

export function prepare(config: PrepConfig): PrepareReport {
  const task = TASKS[config.task];
  if (!task) {
    throw new PrepareError(
      `unknown task "${config.task}" (expected one of: ${TASK_NAMES.join(", ")})`,
    );
  }
  if (!Number.isInteger(config.poolSize) || config.poolSize < 1) {
    throw new PrepareError("pool size must be a positive integer");
  }
  if (!Number.isInteger(config.seed) || config.seed < 0) {
    throw new PrepareError("seed must be a non-negative integer");
  }

  let raw: string;
  try {
    raw = readFileSync(config.inputPath, "utf-8");
  } catch (err) {
    throw new PrepareError(`cannot read input file: ${(err as Error).message}`);
  }

  const skippedEntries: SkippedEntry[] = [];
  const seen = new Map<string, ParsedEntry>();
  let inputEntries = 0;
  let duplicatesMerged = 0;

  const lines = raw.split("\n");
  for (let i = 0; i < lines.length; i++) {
    const trimmed = lines[i]!.trim();
    if (trimmed === "") continue;
    inputEntries++;
    // first whitespace-separated token is the structure; the rest is a name
    const smiles = trimmed.split(/\s+/)[0]!;
    let entry: ParsedEntry;
    try {
      const { mol } = parseSmilesDetailed(smiles);
      entry = { line: i + 1, canonical: writeCanonicalSmiles(mol), mol };
    } catch (err) {
      if (err instanceof SmilesError) {
        skippedEntries.push({ line: i + 1, smiles, reason: err.message });
        continue;
      }
      throw err;
    }
    if (seen.has(entry.canonical)) duplicatesMerged++;
    else seen.set(entry.canonical, entry);
  }

  if (inputEntries === 0) throw new PrepareError("input file is empty");
  const unique = [...seen.values()];
  if (unique.length === 0) {
    throw new PrepareError("no parseable molecules in the input file");
  }

  const chosen = sampleIndices(unique.length, config.poolSize, config.seed);
  const records: PoolRecord[] = chosen.map((idx) => {
    const entry = unique[idx]!;
    return {
      id: "m" + String(entry.line).padStart(6, "0"),
      smiles: entry.canonical,
      fingerprint: morganCountFingerprint(entry.mol, 3),
      objectives: scoreMolecule(task, entry.mol) as unknown as number[],
    };
  });

  writeDataset(config.outputPath, task.name, task.objectiveNames, records);
  const meta: DatasetMeta = {
    task: task.name,
    seed: config.seed,
    poolSize: config.poolSize,
    inputLines: inputEntries,
    parsed: unique.length + duplicatesMerged,
    skipped: skippedEntries.length,
    duplicatesMerged,
    written: records.length,
    skippedLines: skippedEntries.map((entry) => entry.line),
  };
  const metaPath = sidecarPath(config.outputPath);
  writeSidecar(metaPath, meta);

  return {
    inputEntries,
    parsed: unique.length + duplicatesMerged,
    skipped: skippedEntries.length,
    duplicatesMerged,
    written: records.length,
    skippedEntries,
    outputPath: config.outputPath,
    sidecarPath: metaPath,
  };
}
