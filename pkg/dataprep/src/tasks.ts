/**
 * Benchmark task definitions.
 *
 * Each task scores a candidate molecule on three components, all mapped into
 * [0, 1]: similarity to a reference drug, drug-likeness, and one
 * task-specific property pushed toward a preferred range. Similarity is the
 * Tanimoto coefficient over binary radius-2 circular fingerprints against the
 * reference structure.
 */

import { logP, molecularWeight, syntheticAccessibility } from "./descriptors.js";
import { morganBinaryFingerprint, tanimotoSimilarity } from "./fingerprint.js";
import { Molecule } from "./mol.js";
import { qed } from "./qed.js";
import { parseSmiles } from "./smiles.js";

export interface Task {
  name: string;
  targetSmiles: string;
  objectiveNames: [string, string, string];
  /** Third objective component, already normalized to [0, 1]. */
  thirdComponent(mol: Molecule): number;
}

/** 1 below the threshold, then a Gaussian falloff; maps onto [0, 1]. */
export function minGaussian(x: number, mu: number, sigma: number): number {
  if (x <= mu) return 1;
  const z = (x - mu) / sigma;
  return Math.exp(-0.5 * z * z);
}

export const TASKS: Record<string, Task> = {
  amlodipine_mpo: {
    name: "amlodipine_mpo",
    targetSmiles: "CCOC(=O)C1=C(COCCN)NC(C)=C(C(=O)OC)C1c1ccccc1Cl",
    objectiveNames: ["target_similarity", "qed", "synthetic_accessibility"],
    // complexity score runs 1 (easy) to 10 (hard); rescale so easy is 1
    thirdComponent: (mol) => (10 - syntheticAccessibility(mol)) / 9,
  },
  fexofenadine_mpo: {
    name: "fexofenadine_mpo",
    targetSmiles:
      "CC(C)(C(=O)O)c1ccc(cc1)C(O)CCCN2CCC(CC2)C(O)(c3ccccc3)c4ccccc4",
    objectiveNames: ["target_similarity", "qed", "lipophilicity"],
    // prefer logP at or below 4
    thirdComponent: (mol) => minGaussian(logP(mol), 4, 1),
  },
  perindopril_mpo: {
    name: "perindopril_mpo",
    targetSmiles: "O=C(OCC)C(NC(C(=O)N1C(C(=O)O)CC2CCCCC12)C)CCC",
    objectiveNames: ["target_similarity", "qed", "molecular_weight"],
    // prefer weights at or below 360 Da
    thirdComponent: (mol) => minGaussian(molecularWeight(mol), 360, 60),
  },
};

export const TASK_NAMES = Object.keys(TASKS).sort();

const targetFingerprints = new Map<string, Set<bigint>>();

function targetFingerprint(task: Task): Set<bigint> {
  let fp = targetFingerprints.get(task.name);
  if (!fp) {
    fp = morganBinaryFingerprint(parseSmiles(task.targetSmiles), 2);
    targetFingerprints.set(task.name, fp);
  }
  return fp;
}

function clamp01(value: number): number {
  return Math.min(1, Math.max(0, value));
}

/** The task's three objective components for one molecule, each in [0, 1]. */
export function scoreMolecule(task: Task, mol: Molecule): [number, number, number] {
  const similarity = tanimotoSimilarity(morganBinaryFingerprint(mol, 2), targetFingerprint(task));
  return [clamp01(similarity), clamp01(qed(mol)), clamp01(task.thirdComponent(mol))];
}
