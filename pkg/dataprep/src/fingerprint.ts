/**
 * Circular (Morgan) fingerprints over the molecular graph.
 *
 * Feature ids are 64-bit hashes of iterated atom environments, kept
 * untruncated: the id space is the full unsigned 64-bit range, no folding to
 * a fixed bit width. The count form records how many distinct environments
 * produced each id; environments covering an identical bond set are counted
 * once, so a benzene ring contributes its whole-ring environment a single
 * time rather than once per atom.
 *
 * Usage:
 *   const fp = morganCountFingerprint(mol);            // radius 3 counts
 *   const bits = morganBinaryFingerprint(mol, 2);      // id set, radius 2
 *   minmaxSimilarity(fp, fp) === 1.0
 */

import { ELEMENTS } from "./elements.js";
import { Bond, Molecule, otherEnd } from "./mol.js";

const MASK64 = (1n << 64n) - 1n;
const GAMMA = 0x9e3779b97f4a7c15n;

// boost-style hash combine widened to 64 bits
function mix(seed: bigint, value: bigint): bigint {
  return (seed ^ ((value & MASK64) + GAMMA + ((seed << 6n) & MASK64) + (seed >> 2n))) & MASK64;
}

function hash64(parts: bigint[]): bigint {
  let seed = 0n;
  for (const part of parts) seed = mix(seed, part);
  return seed;
}

// single 1, double 2, triple 3, aromatic 12
function bondInvariant(bond: Bond): bigint {
  return bond.aromatic ? 12n : BigInt(bond.order);
}

function initialInvariant(mol: Molecule, atom: number): bigint {
  const data = mol.atoms[atom]!;
  return hash64([
    BigInt(ELEMENTS[data.element]!.number),
    BigInt(mol.adjacency[atom]!.length),
    BigInt(data.hcount),
    BigInt(data.charge + 16),
    BigInt(data.isotope),
    data.inRing ? 1n : 0n,
  ]);
}

export type CountFingerprint = Map<bigint, number>;

/** Count fingerprint of hashed circular environments up to the given radius. */
export function morganCountFingerprint(mol: Molecule, radius = 3): CountFingerprint {
  const n = mol.atoms.length;
  const counts: CountFingerprint = new Map();
  const bump = (id: bigint) => counts.set(id, (counts.get(id) ?? 0) + 1);

  let invariants = mol.atoms.map((_, i) => initialInvariant(mol, i));
  // environment of an atom = set of bonds within the current radius, as a bitmask
  let envs = mol.atoms.map(() => 0n);
  for (const inv of invariants) bump(inv);

  const seenEnvs = new Set<string>();
  for (let layer = 1; layer <= radius; layer++) {
    const nextInvariants = new Array<bigint>(n);
    const nextEnvs = new Array<bigint>(n);
    for (let i = 0; i < n; i++) {
      const pairs: Array<[bigint, bigint]> = [];
      let env = envs[i]!;
      for (const bondIdx of mol.adjacency[i]!) {
        const bond = mol.bonds[bondIdx]!;
        const nbr = otherEnd(bond, i);
        pairs.push([bondInvariant(bond), invariants[nbr]!]);
        env |= 1n << BigInt(bondIdx);
        env |= envs[nbr]!;
      }
      // pair order fixed: bond invariant first, then neighbor invariant
      pairs.sort((p, q) => (p[0] < q[0] ? -1 : p[0] > q[0] ? 1 : p[1] < q[1] ? -1 : p[1] > q[1] ? 1 : 0));
      const parts: bigint[] = [BigInt(layer), invariants[i]!];
      for (const [bondInv, nbrInv] of pairs) {
        parts.push(bondInv, nbrInv);
      }
      nextInvariants[i] = hash64(parts);
      nextEnvs[i] = env;
    }
    // count each new environment once; identical bond sets are duplicates
    const order = Array.from({ length: n }, (_, i) => i).sort((a, b) => {
      const ia = nextInvariants[a]!;
      const ib = nextInvariants[b]!;
      return ia < ib ? -1 : ia > ib ? 1 : a - b;
    });
    for (const i of order) {
      const key = nextEnvs[i]!.toString(16);
      if (seenEnvs.has(key)) continue;
      seenEnvs.add(key);
      bump(nextInvariants[i]!);
    }
    invariants = nextInvariants;
    envs = nextEnvs;
  }
  return counts;
}

/** Feature id set at the given radius (binary fingerprint). */
export function morganBinaryFingerprint(mol: Molecule, radius = 2): Set<bigint> {
  return new Set(morganCountFingerprint(mol, radius).keys());
}

/** Tanimoto similarity of two id sets. */
export function tanimotoSimilarity(a: Set<bigint>, b: Set<bigint>): number {
  if (a.size === 0 && b.size === 0) return 1;
  let intersection = 0;
  for (const id of a) {
    if (b.has(id)) intersection++;
  }
  const union = a.size + b.size - intersection;
  return intersection / union;
}

/** MinMax similarity of two count fingerprints: sum(min) / sum(max). */
export function minmaxSimilarity(a: CountFingerprint, b: CountFingerprint): number {
  let minSum = 0;
  let maxSum = 0;
  for (const [id, countA] of a) {
    const countB = b.get(id) ?? 0;
    minSum += Math.min(countA, countB);
    maxSum += Math.max(countA, countB);
  }
  for (const [id, countB] of b) {
    if (!a.has(id)) maxSum += countB;
  }
  if (maxSum === 0) return 1;
  return minSum / maxSum;
}
