/**
 * Writer for the line-delimited pool dataset format consumed by the
 * optimization engine ("mobo-dataset/1"): a header object on the first line,
 * one record object per line after. The header carries exactly the fields the
 * engine validates; run provenance (tool version, seed, counts) goes to a
 * sidecar file next to the dataset so reruns stay byte-identical.
 */

import { writeFileSync } from "node:fs";

import { CountFingerprint } from "./fingerprint.js";

export const TOOL_VERSION = "0.1.0";
export const DATASET_FORMAT = "mobo-dataset/1";

export interface PoolRecord {
  id: string;
  smiles: string;
  fingerprint: CountFingerprint;
  objectives: number[];
}

export interface DatasetMeta {
  task: string;
  seed: number;
  poolSize: number;
  inputLines: number;
  parsed: number;
  skipped: number;
  duplicatesMerged: number;
  written: number;
  skippedLines: number[];
}

function fingerprintJson(fp: CountFingerprint): Record<string, number> {
  const keys = [...fp.keys()].sort((a, b) => (a < b ? -1 : a > b ? 1 : 0));
  const out: Record<string, number> = {};
  for (const key of keys) out[key.toString()] = fp.get(key)!;
  return out;
}

export function writeDataset(
  path: string,
  task: string,
  objectiveNames: string[],
  records: PoolRecord[],
): void {
  const header = {
    format: DATASET_FORMAT,
    task,
    n_records: records.length,
    n_objectives: objectiveNames.length,
    objective_names: objectiveNames,
  };
  const lines = [JSON.stringify(header)];
  for (const record of records) {
    lines.push(
      JSON.stringify({
        id: record.id,
        smiles: record.smiles,
        fingerprint: fingerprintJson(record.fingerprint),
        objectives: record.objectives,
      }),
    );
  }
  writeFileSync(path, lines.join("\n") + "\n", "utf-8");
}

// capped so a pathological input cannot bloat the sidecar
const MAX_REPORTED_LINES = 50;

export function writeSidecar(path: string, meta: DatasetMeta): void {
  const sidecar = {
    tool: "dataprep",
    version: TOOL_VERSION,
    format: DATASET_FORMAT,
    task: meta.task,
    seed: meta.seed,
    pool_size: meta.poolSize,
    counts: {
      input_lines: meta.inputLines,
      parsed: meta.parsed,
      skipped: meta.skipped,
      duplicates_merged: meta.duplicatesMerged,
      written: meta.written,
    },
    fingerprint: { method: "morgan_counts", radius: 3, id_bits: 64 },
    skipped_lines: meta.skippedLines.slice(0, MAX_REPORTED_LINES),
  };
  writeFileSync(path, JSON.stringify(sidecar, null, 2) + "\n", "utf-8");
}

export function sidecarPath(datasetPath: string): string {
  return datasetPath + ".meta.json";
}
