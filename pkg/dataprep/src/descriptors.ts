/**
 * Physicochemical descriptors computed directly from the molecular graph.
 *
 * These are self-contained implementations: topological polar surface area
 * follows the published N/O fragment contribution table; lipophilicity uses a
 * compact atomic-contribution model (about twenty atom classes, not the full
 * published table); the synthetic accessibility score
 * keeps the structural complexity terms of the usual formulation and omits
 * the fragment-frequency database term. Values are deterministic functions of
 * the graph and are documented where they approximate.
 */

import { Molecule, heavyDegree, otherEnd } from "./mol.js";

interface BondProfile {
  single: number;
  double: number;
  triple: number;
  aromatic: number;
}

function bondProfile(mol: Molecule, atom: number): BondProfile {
  const profile: BondProfile = { single: 0, double: 0, triple: 0, aromatic: 0 };
  for (const bondIdx of mol.adjacency[atom]!) {
    const bond = mol.bonds[bondIdx]!;
    if (bond.aromatic) profile.aromatic++;
    else if (bond.order === 1) profile.single++;
    else if (bond.order === 2) profile.double++;
    else profile.triple++;
  }
  return profile;
}

function inThreeRing(mol: Molecule, atom: number): boolean {
  return mol.rings.some((ring) => ring.length === 3 && ring.includes(atom));
}

function neighborElements(mol: Molecule, atom: number): string[] {
  return mol.adjacency[atom]!.map((bondIdx) => mol.atoms[otherEnd(mol.bonds[bondIdx]!, atom)]!.element);
}

// neighbor carbon carrying a double bond to O or S marks an amide-like N
function isAmideNitrogen(mol: Molecule, atom: number): boolean {
  for (const bondIdx of mol.adjacency[atom]!) {
    const bond = mol.bonds[bondIdx]!;
    if (bond.aromatic || bond.order !== 1) continue;
    const nbr = otherEnd(bond, atom);
    if (mol.atoms[nbr]!.element !== "C") continue;
    for (const nbrBondIdx of mol.adjacency[nbr]!) {
      const nbrBond = mol.bonds[nbrBondIdx]!;
      if (nbrBond.aromatic || nbrBond.order !== 2) continue;
      const terminal = mol.atoms[otherEnd(nbrBond, nbr)]!.element;
      if (terminal === "O" || terminal === "S") return true;
    }
  }
  return false;
}

function tpsaNitrogen(mol: Molecule, atom: number): number {
  const data = mol.atoms[atom]!;
  const { single: s, double: d, triple: t, aromatic: ar } = bondProfile(mol, atom);
  const h = data.hcount;
  if (data.aromatic) {
    if (data.charge === 0) {
      if (ar === 2 && s === 0 && d === 0 && h === 0) return 12.89;
      if (ar === 3 && h === 0) return 4.41;
      if (ar === 2 && s === 1 && h === 0) return 4.93;
      if (ar === 2 && d === 1 && h === 0) return 8.39;
      if (ar === 2 && h === 1) return 15.79;
    } else if (data.charge === 1) {
      if (ar === 3 && h === 0) return 4.1;
      if (ar === 2 && s === 1 && h === 0) return 3.88;
      if (ar === 2 && h === 1) return 14.14;
    }
  } else if (data.charge === 0) {
    if (t >= 1 && s === 0 && d === 0 && h === 0) return 23.79;
    if (d === 1 && t === 1 && h === 0) return 13.6;
    if (s === 1 && d === 2 && h === 0) return 11.68;
    if (s === 1 && d === 1 && h === 0) return 12.36;
    if (s === 3 && h === 0) return inThreeRing(mol, atom) ? 3.01 : 3.24;
    if (s === 2 && h === 1) return inThreeRing(mol, atom) ? 21.94 : 12.03;
    if (d === 1 && s === 0 && h === 1) return 23.85;
    if (s === 1 && h === 2) return 26.02;
  } else if (data.charge === 1) {
    if (s === 4 && h === 0) return 0.0;
    if (s === 2 && d === 1 && h === 0) return 3.01;
    if (s === 1 && t === 1 && h === 0) return 4.36;
    if (s === 3 && h === 1) return 4.44;
    if (s === 1 && d === 1 && h === 1) return 13.97;
    if (s === 2 && h === 2) return 16.61;
    if (d === 1 && s === 0 && h === 2) return 25.59;
    if (s === 1 && h === 3) return 27.64;
  }
  // fallback for environments outside the table
  const x = heavyDegree(mol, atom);
  return Math.max(0, 30.5 - x * 8.2 + h * 1.5);
}

function tpsaOxygen(mol: Molecule, atom: number): number {
  const data = mol.atoms[atom]!;
  const { single: s, double: d, aromatic: ar } = bondProfile(mol, atom);
  const h = data.hcount;
  if (data.aromatic && ar === 2) return 13.14;
  if (data.charge === 0) {
    if (s === 2 && h === 0) return inThreeRing(mol, atom) ? 12.53 : 9.23;
    if (d === 1) return 17.07;
    if (s === 1 && h === 1) return 20.23;
  }
  if (data.charge === -1 && s === 1) return 23.06;
  const x = heavyDegree(mol, atom);
  return Math.max(0, 28.5 - x * 8.6 + h * 1.5);
}

/** Topological polar surface area from N/O fragment contributions. */
export function tpsa(mol: Molecule): number {
  let area = 0;
  for (let i = 0; i < mol.atoms.length; i++) {
    const element = mol.atoms[i]!.element;
    if (element === "N") area += tpsaNitrogen(mol, i);
    else if (element === "O") area += tpsaOxygen(mol, i);
  }
  return area;
}

/** Hydrogen bond donors: N or O atoms carrying at least one hydrogen. */
export function hBondDonors(mol: Molecule): number {
  let count = 0;
  for (const atom of mol.atoms) {
    if ((atom.element === "N" || atom.element === "O") && atom.hcount >= 1) count++;
  }
  return count;
}

/**
 * Hydrogen bond acceptors: N and O atoms, excluding pyrrole-type aromatic
 * nitrogens (lone pair in the ring), amide nitrogens, and cationic nitrogens.
 */
export function hBondAcceptors(mol: Molecule): number {
  let count = 0;
  for (let i = 0; i < mol.atoms.length; i++) {
    const atom = mol.atoms[i]!;
    if (atom.element === "O") {
      count++;
    } else if (atom.element === "N") {
      if (atom.charge > 0) continue;
      if (atom.aromatic && (atom.hcount >= 1 || heavyDegree(mol, i) === 3)) continue;
      if (isAmideNitrogen(mol, i)) continue;
      count++;
    }
  }
  return count;
}

function hasTripleBond(mol: Molecule, atom: number): boolean {
  return mol.adjacency[atom]!.some((bondIdx) => mol.bonds[bondIdx]!.order === 3);
}

/** Rotatable bonds: acyclic single bonds between two non-terminal atoms. */
export function rotatableBonds(mol: Molecule): number {
  let count = 0;
  for (const bond of mol.bonds) {
    if (bond.inRing || bond.aromatic || bond.order !== 1) continue;
    if (heavyDegree(mol, bond.a) < 2 || heavyDegree(mol, bond.b) < 2) continue;
    if (hasTripleBond(mol, bond.a) || hasTripleBond(mol, bond.b)) continue;
    count++;
  }
  return count;
}

const HALOGENS = new Set(["F", "Cl", "Br", "I"]);
const HETEROATOMS = new Set(["N", "O", "S", "P", "F", "Cl", "Br", "I"]);

// compact atomic logP contributions; hydrogens added per attached heavy atom
const LOGP_HYDROGEN = { C: 0.123, O: -0.2677, N: 0.2142, other: 0.1125 };

function atomLogP(mol: Molecule, atom: number): number {
  const data = mol.atoms[atom]!;
  const element = data.element;
  if (element === "C") {
    if (data.aromatic) return 0.1581;
    const polarNeighbor = neighborElements(mol, atom).some((e) => HETEROATOMS.has(e));
    return polarNeighbor ? -0.2035 : 0.1441;
  }
  if (element === "N") {
    if (data.charge > 0) return -1.8;
    if (data.aromatic) return -0.3;
    if (isAmideNitrogen(mol, atom)) return -0.6;
    return -0.9;
  }
  if (element === "O") {
    if (data.aromatic) return 0.1552;
    if (data.charge < 0) return -1.1;
    const { double: d } = bondProfile(mol, atom);
    if (d >= 1) return -0.12;
    if (data.hcount >= 1) return -0.2893;
    return -0.2;
  }
  if (element === "S") return data.aromatic ? 0.6237 : 0.6482;
  if (element === "P") return 0.8612;
  if (element === "F") return 0.4202;
  if (element === "Cl") return 0.6895;
  if (element === "Br") return 0.8456;
  if (element === "I") return 0.8857;
  return HALOGENS.has(element) ? 0.5 : -0.08;
}

/**
 * Octanol-water partition estimate from atomic contributions. Tracks the
 * usual additive models closely on hydrocarbons and simple polar molecules;
 * intended for scoring, not for reporting measured logP.
 */
export function logP(mol: Molecule): number {
  let total = 0;
  for (let i = 0; i < mol.atoms.length; i++) {
    const atom = mol.atoms[i]!;
    total += atomLogP(mol, i);
    if (atom.hcount === 0) continue;
    const perH =
      atom.element === "C"
        ? LOGP_HYDROGEN.C
        : atom.element === "O"
          ? LOGP_HYDROGEN.O
          : atom.element === "N"
            ? LOGP_HYDROGEN.N
            : LOGP_HYDROGEN.other;
    total += atom.hcount * perH;
  }
  return total;
}

function ringFusionCounts(mol: Molecule): { spiro: number; bridge: number } {
  const spiroAtoms = new Set<number>();
  const bridgeAtoms = new Set<number>();
  const ringSets = mol.rings.map((ring) => new Set(ring));
  for (let i = 0; i < ringSets.length; i++) {
    for (let j = i + 1; j < ringSets.length; j++) {
      const shared = [...ringSets[i]!].filter((atom) => ringSets[j]!.has(atom));
      if (shared.length === 1) spiroAtoms.add(shared[0]!);
      else if (shared.length >= 2) shared.forEach((atom) => bridgeAtoms.add(atom));
    }
  }
  return { spiro: spiroAtoms.size, bridge: bridgeAtoms.size };
}

/**
 * Structural complexity score on the conventional 1 (easy) to 10 (hard)
 * synthetic accessibility scale. Uses size, ring fusion, and macrocycle
 * penalties; stereochemistry is not perceived and contributes nothing.
 */
export function syntheticAccessibility(mol: Molecule): number {
  const heavy = mol.atoms.length;
  const sizePenalty = Math.pow(heavy, 1.005) - heavy;
  const { spiro, bridge } = ringFusionCounts(mol);
  const fusionPenalty = Math.log10(bridge + 1) + Math.log10(spiro + 1);
  const macroPenalty = mol.rings.some((ring) => ring.length > 8) ? Math.log10(2) : 0;
  const ringPenalty = 0.5 * Math.log10(mol.rings.length + 1);
  const complexity = sizePenalty + fusionPenalty + macroPenalty + ringPenalty;
  const score = 1 + 9 * (1 - Math.exp(-complexity / 2.5));
  return Math.min(10, Math.max(1, score));
}

export { molecularWeight, aromaticRingCount, ringCount } from "./mol.js";
