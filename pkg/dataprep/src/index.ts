export { parseSmiles, parseSmilesDetailed, SmilesError } from "./smiles.js";
export { writeCanonicalSmiles } from "./canonical.js";
export {
  morganCountFingerprint,
  morganBinaryFingerprint,
  tanimotoSimilarity,
  minmaxSimilarity,
} from "./fingerprint.js";
export type { CountFingerprint } from "./fingerprint.js";
export {
  tpsa,
  logP,
  hBondDonors,
  hBondAcceptors,
  rotatableBonds,
  syntheticAccessibility,
  molecularWeight,
  aromaticRingCount,
  ringCount,
} from "./descriptors.js";
export { qed } from "./qed.js";
export { TASKS, TASK_NAMES, scoreMolecule, minGaussian } from "./tasks.js";
export type { Task } from "./tasks.js";
export { prepare, PrepareError } from "./prepare.js";
export type { PrepConfig, PrepareReport } from "./prepare.js";
export type { Molecule, Atom, Bond } from "./mol.js";
