/**
 * Molecular graph model plus the perception passes that normalize a freshly
 * parsed graph: ring membership, aromaticity, and implicit hydrogen counts.
 *
 * The model is deliberately small. Atoms carry no coordinates and no
 * stereochemistry; bonds are single, double, triple, or aromatic.
 */

import { ELEMENTS } from "./elements.js";

export interface Atom {
  element: string;
  aromatic: boolean;
  charge: number;
  isotope: number; // 0 means unspecified
  hcount: number; // total attached hydrogens, explicit plus implicit
  fromBracket: boolean; // bracket atoms have a fixed hydrogen count
  inRing: boolean;
}

export interface Bond {
  a: number;
  b: number;
  order: 1 | 2 | 3;
  aromatic: boolean;
  inRing: boolean;
}

export interface Molecule {
  atoms: Atom[];
  bonds: Bond[];
  // atom index -> indices of incident bonds
  adjacency: number[][];
  // perceived smallest rings, each a list of atom indices
  rings: number[][];
}

export class MoleculeError extends Error {}

export function otherEnd(bond: Bond, atom: number): number {
  return bond.a === atom ? bond.b : bond.a;
}

export function heavyDegree(mol: Molecule, atom: number): number {
  return mol.adjacency[atom]!.length;
}

function buildAdjacency(atoms: Atom[], bonds: Bond[]): number[][] {
  const adjacency: number[][] = atoms.map(() => []);
  bonds.forEach((bond, i) => {
    adjacency[bond.a]!.push(i);
    adjacency[bond.b]!.push(i);
  });
  return adjacency;
}

// Ring bonds are exactly the non-bridge edges of the graph. Classic DFS
// bridge finding; iterative to keep long chains off the call stack.
function markRingBonds(atoms: Atom[], bonds: Bond[], adjacency: number[][]): void {
  const disc = new Array<number>(atoms.length).fill(-1);
  const low = new Array<number>(atoms.length).fill(0);
  let time = 0;
  for (let root = 0; root < atoms.length; root++) {
    if (disc[root] !== -1) continue;
    const stack: Array<{ atom: number; parentBond: number; edgeIdx: number }> = [
      { atom: root, parentBond: -1, edgeIdx: 0 },
    ];
    disc[root] = low[root] = time++;
    while (stack.length > 0) {
      const frame = stack[stack.length - 1]!;
      const edges = adjacency[frame.atom]!;
      if (frame.edgeIdx < edges.length) {
        const bondIdx = edges[frame.edgeIdx]!;
        frame.edgeIdx++;
        if (bondIdx === frame.parentBond) continue;
        const next = otherEnd(bonds[bondIdx]!, frame.atom);
        if (disc[next] === -1) {
          disc[next] = low[next] = time++;
          stack.push({ atom: next, parentBond: bondIdx, edgeIdx: 0 });
        } else {
          // back edge: always part of a cycle
          bonds[bondIdx]!.inRing = true;
          low[frame.atom] = Math.min(low[frame.atom]!, disc[next]!);
        }
      } else {
        stack.pop();
        if (stack.length > 0) {
          const parent = stack[stack.length - 1]!;
          low[parent.atom] = Math.min(low[parent.atom]!, low[frame.atom]!);
          // bridge iff no back edge from the subtree reaches above `next`
          if (low[frame.atom]! > disc[parent.atom]!) {
            // frame.parentBond is a bridge: not a ring bond
          } else {
            bonds[frame.parentBond]!.inRing = true;
          }
        }
      }
    }
  }
  for (const bond of bonds) {
    if (bond.inRing) {
      atoms[bond.a]!.inRing = true;
      atoms[bond.b]!.inRing = true;
    }
  }
}

// Smallest cycle through each ring bond, found by BFS with the bond removed.
// Deduplicated by atom set. Not a strict SSSR, but it recovers the chemically
// relevant small rings (all we need for aromaticity and ring counting).
function perceiveRings(atoms: Atom[], bonds: Bond[], adjacency: number[][]): number[][] {
  const rings: number[][] = [];
  const seen = new Set<string>();
  for (let bondIdx = 0; bondIdx < bonds.length; bondIdx++) {
    const bond = bonds[bondIdx]!;
    if (!bond.inRing) continue;
    // BFS from bond.a to bond.b avoiding the bond itself
    const prevAtom = new Array<number>(atoms.length).fill(-1);
    const visited = new Array<boolean>(atoms.length).fill(false);
    visited[bond.a] = true;
    let queue = [bond.a];
    let found = false;
    while (queue.length > 0 && !found) {
      const nextQueue: number[] = [];
      for (const atom of queue) {
        for (const incident of adjacency[atom]!) {
          if (incident === bondIdx) continue;
          const nbr = otherEnd(bonds[incident]!, atom);
          if (visited[nbr]) continue;
          visited[nbr] = true;
          prevAtom[nbr] = atom;
          if (nbr === bond.b) {
            found = true;
            break;
          }
          nextQueue.push(nbr);
        }
        if (found) break;
      }
      queue = nextQueue;
    }
    if (!found) continue; // defensive; inRing bonds always close a cycle
    const path: number[] = [];
    for (let at = bond.b; at !== -1; at = prevAtom[at]!) path.push(at);
    const key = [...path].sort((x, y) => x - y).join(",");
    if (!seen.has(key)) {
      seen.add(key);
      rings.push(path);
    }
  }
  return rings;
}

function bondBetween(mol: Molecule, a: number, b: number): Bond {
  for (const bondIdx of mol.adjacency[a]!) {
    const bond = mol.bonds[bondIdx]!;
    if (otherEnd(bond, a) === b) return bond;
  }
  throw new MoleculeError(`no bond between atoms ${a} and ${b}`);
}

// Pi electron contribution of one ring atom, or null when the atom cannot sit
// in an aromatic ring (saturated carbon, triple bond, too many neighbors).
function piElectrons(mol: Molecule, atom: number, ring: Set<number>): number | null {
  const data = mol.atoms[atom]!;
  const incident = mol.adjacency[atom]!;
  // an sp2 ring atom carries at most three sigma partners, hydrogens included
  if (incident.length + data.hcount > 3) return null;
  let doubleInRing = 0;
  let doubleExo = 0;
  for (const bondIdx of incident) {
    const bond = mol.bonds[bondIdx]!;
    if (bond.order === 3) return null;
    if (bond.order === 2 || bond.aromatic) {
      const partner = otherEnd(bond, atom);
      // a double bond across a ring fusion shares its pi pair with the
      // neighboring ring; only a bond to an acyclic atom is truly exocyclic
      if (ring.has(partner) || mol.atoms[partner]!.inRing) doubleInRing++;
      else if (bond.order === 2) doubleExo++;
    }
  }
  if (doubleInRing >= 1) return 1; // part of an alternating system
  if (doubleExo >= 1) return 0; // exocyclic double bond (quinone-like carbon)
  // no double bond at all: heteroatoms donate a lone pair, carbanions too
  if (data.element === "N" || data.element === "O" || data.element === "S") return 2;
  if (data.element === "C" && data.charge === -1) return 2;
  if (data.element === "C" && data.charge === 1) return 0; // tropylium-style
  return null;
}

// Mark aromatic rings. Rings written entirely in aromatic notation are
// trusted; Kekule-written rings of size 5-7 are tested with the 4n+2 rule so
// C1=CC=CC=C1 and c1ccccc1 normalize to the same graph.
function perceiveAromaticity(mol: Molecule): void {
  for (const ring of mol.rings) {
    if (ring.length < 5 || ring.length > 7) {
      if (!ring.every((i) => mol.atoms[i]!.aromatic)) continue;
    }
    const ringSet = new Set(ring);
    let aromatic = ring.every((i) => mol.atoms[i]!.aromatic);
    if (!aromatic) {
      let pi = 0;
      let ok = true;
      for (const atom of ring) {
        const contribution = piElectrons(mol, atom, ringSet);
        if (contribution === null) {
          ok = false;
          break;
        }
        pi += contribution;
      }
      aromatic = ok && pi >= 6 && pi % 4 === 2;
    }
    if (!aromatic) continue;
    for (const atom of ring) mol.atoms[atom]!.aromatic = true;
    for (let i = 0; i < ring.length; i++) {
      const bond = bondBetween(mol, ring[i]!, ring[(i + 1) % ring.length]!);
      bond.aromatic = true;
    }
  }
}

/**
 * Implicit hydrogen count for a non-bracket atom given its written bonds.
 * Aromatic bonds count 1.5 and the total is rounded down, which reproduces
 * the standard lowercase-notation hydrogen counts (benzene carbons get one
 * hydrogen, pyridine nitrogen gets none).
 */
export function implicitHydrogens(element: string, bondOrderSum: number): number {
  const info = ELEMENTS[element];
  if (!info) return 0;
  const bonds = Math.floor(bondOrderSum);
  for (const valence of info.valences) {
    if (valence >= bonds) return valence - bonds;
  }
  return 0;
}

function writtenBondOrderSum(bonds: Bond[], adjacency: number[][], atom: number): number {
  let sum = 0;
  for (const bondIdx of adjacency[atom]!) {
    const bond = bonds[bondIdx]!;
    sum += bond.aromatic ? 1.5 : bond.order;
  }
  return sum;
}

/**
 * Turn a raw parsed graph into a finished molecule: builds adjacency, fixes
 * non-ring "aromatic" default bonds (the biphenyl link), validates lowercase
 * atoms, assigns implicit hydrogens, and perceives rings and aromaticity.
 */
export function finalizeMolecule(atoms: Atom[], bonds: Bond[]): Molecule {
  let adjacency = buildAdjacency(atoms, bonds);
  markRingBonds(atoms, bonds, adjacency);
  for (const bond of bonds) {
    // a default bond between two lowercase atoms is only aromatic in a ring
    if (bond.aromatic && !bond.inRing) bond.aromatic = false;
  }
  for (let i = 0; i < atoms.length; i++) {
    const atom = atoms[i]!;
    if (atom.aromatic && !atom.inRing) {
      throw new MoleculeError(`aromatic atom ${atom.element.toLowerCase()} is not in a ring`);
    }
    if (!atom.fromBracket) {
      atom.hcount = implicitHydrogens(atom.element, writtenBondOrderSum(bonds, adjacency, i));
    }
  }
  const rings = perceiveRings(atoms, bonds, adjacency);
  const mol: Molecule = { atoms, bonds, adjacency, rings };
  perceiveAromaticity(mol);
  return mol;
}

/** Molecular weight including implicit hydrogens. */
export function molecularWeight(mol: Molecule): number {
  let weight = 0;
  for (const atom of mol.atoms) {
    const info = ELEMENTS[atom.element];
    if (!info) throw new MoleculeError(`no weight for element ${atom.element}`);
    weight += info.weight + atom.hcount * ELEMENTS.H!.weight;
  }
  return weight;
}

/** Number of rings in the SSSR sense (cyclomatic number of one fragment). */
export function ringCount(mol: Molecule): number {
  return mol.bonds.length - mol.atoms.length + 1;
}

/** Perceived aromatic rings. */
export function aromaticRingCount(mol: Molecule): number {
  let count = 0;
  for (const ring of mol.rings) {
    if (!ring.every((atom) => mol.atoms[atom]!.aromatic)) continue;
    let allAromaticBonds = true;
    for (let i = 0; i < ring.length; i++) {
      const bond = ringBond(mol, ring[i]!, ring[(i + 1) % ring.length]!);
      if (!bond || !bond.aromatic) {
        allAromaticBonds = false;
        break;
      }
    }
    if (allAromaticBonds) count++;
  }
  return count;
}

function ringBond(mol: Molecule, a: number, b: number): Bond | null {
  for (const bondIdx of mol.adjacency[a]!) {
    const bond = mol.bonds[bondIdx]!;
    if (otherEnd(bond, a) === b) return bond;
  }
  return null;
}
