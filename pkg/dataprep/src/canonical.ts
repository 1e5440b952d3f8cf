/**
 * Canonical SMILES output.
 *
 * Atom ranks come from iterative invariant refinement (element, charge,
 * hydrogen count, aromaticity, isotope, ring membership, then neighbor rank
 * multisets) with tie-breaking by artificial rank splits until all ranks are
 * distinct. Different notations of the same constitution converge to one
 * string for ordinary molecules; exotic graphs where non-equivalent atoms
 * share every invariant may still admit two forms, which this tool accepts.
 */

import { ELEMENTS, ORGANIC_SUBSET } from "./elements.js";
import { Bond, Molecule, implicitHydrogens, otherEnd } from "./mol.js";

function bondCode(bond: Bond): number {
  return bond.aromatic ? 4 : bond.order;
}

function denseRanks(keys: string[]): { ranks: number[]; classes: number } {
  const sorted = [...new Set(keys)].sort();
  const rankOf = new Map<string, number>();
  sorted.forEach((key, i) => rankOf.set(key, i));
  return { ranks: keys.map((k) => rankOf.get(k)!), classes: sorted.length };
}

function refine(mol: Molecule, ranks: number[]): { ranks: number[]; classes: number } {
  let current = ranks;
  let classes = new Set(current).size;
  for (;;) {
    const keys = mol.atoms.map((_, i) => {
      const neighborKeys = mol.adjacency[i]!
        .map((bondIdx) => {
          const bond = mol.bonds[bondIdx]!;
          return bondCode(bond) * mol.atoms.length * 8 + current[otherEnd(bond, i)]!;
        })
        .sort((a, b) => a - b);
      return `${current[i]}|${neighborKeys.join(",")}`;
    });
    const next = denseRanks(keys);
    if (next.classes === classes) return { ranks: next.ranks, classes };
    current = next.ranks;
    classes = next.classes;
  }
}

export function canonicalRanks(mol: Molecule): number[] {
  const initialKeys = mol.atoms.map((atom, i) => {
    const parts = [
      mol.adjacency[i]!.length,
      ELEMENTS[atom.element]!.number,
      atom.charge + 16,
      atom.hcount,
      atom.aromatic ? 1 : 0,
      atom.isotope,
      atom.inRing ? 1 : 0,
    ];
    return parts.map((p) => String(p).padStart(4, "0")).join(".");
  });
  let { ranks, classes } = refine(mol, denseRanks(initialKeys).ranks);
  while (classes < mol.atoms.length) {
    // split the lowest tied class at its first member; equivalent atoms give
    // the same output whichever member wins
    const byRank = new Map<number, number[]>();
    ranks.forEach((rank, i) => {
      const list = byRank.get(rank);
      if (list) list.push(i);
      else byRank.set(rank, [i]);
    });
    const tiedRanks = [...byRank.entries()].filter(([, members]) => members.length > 1);
    tiedRanks.sort((a, b) => a[0] - b[0]);
    const chosen = tiedRanks[0]![1][0]!;
    const bumped = ranks.map((rank, i) => rank * 2 + (i === chosen ? 0 : 1));
    ({ ranks, classes } = refine(mol, denseRanks(bumped.map(String).map((s) => s.padStart(8, "0"))).ranks));
  }
  return ranks;
}

function finalBondOrderSum(mol: Molecule, atom: number): number {
  let sum = 0;
  for (const bondIdx of mol.adjacency[atom]!) {
    const bond = mol.bonds[bondIdx]!;
    sum += bond.aromatic ? 1.5 : bond.order;
  }
  return sum;
}

function chargeText(charge: number): string {
  if (charge === 0) return "";
  const sign = charge > 0 ? "+" : "-";
  const magnitude = Math.abs(charge);
  return magnitude === 1 ? sign : sign + String(magnitude);
}

function atomText(mol: Molecule, atom: number): string {
  const data = mol.atoms[atom]!;
  const symbol = data.aromatic ? data.element.toLowerCase() : data.element;
  const bareAllowed =
    ORGANIC_SUBSET.has(data.element) &&
    data.charge === 0 &&
    data.isotope === 0 &&
    implicitHydrogens(data.element, finalBondOrderSum(mol, atom)) === data.hcount;
  if (bareAllowed) return symbol;
  const hydrogen = data.hcount === 0 ? "" : data.hcount === 1 ? "H" : `H${data.hcount}`;
  const isotope = data.isotope === 0 ? "" : String(data.isotope);
  return `[${isotope}${symbol}${hydrogen}${chargeText(data.charge)}]`;
}

// bond text; single bonds between aromatic atoms need an explicit dash so
// they do not read back as aromatic
function bondText(mol: Molecule, bond: Bond): string {
  if (bond.aromatic) return "";
  if (bond.order === 2) return "=";
  if (bond.order === 3) return "#";
  if (mol.atoms[bond.a]!.aromatic && mol.atoms[bond.b]!.aromatic) return "-";
  return "";
}

interface Closure {
  bondIdx: number;
  opener: number;
  closer: number;
  digit: number;
}

function digitText(digit: number): string {
  if (digit < 10) return String(digit);
  if (digit < 100) return `%${digit}`;
  throw new Error("more than 99 simultaneously open rings");
}

/** Canonical SMILES for a finalized molecule. */
export function writeCanonicalSmiles(mol: Molecule): string {
  const n = mol.atoms.length;
  if (n === 1) return atomText(mol, 0);
  const ranks = canonicalRanks(mol);

  // classification DFS: tree children per atom plus ring-closure bonds
  const visitIndex = new Array<number>(n).fill(-1);
  const childBonds: number[][] = mol.atoms.map(() => []);
  const openerClosures: Closure[][] = mol.atoms.map(() => []);
  const closerClosures: Closure[][] = mol.atoms.map(() => []);
  const closureOfBond = new Map<number, Closure>();
  let order = 0;
  let start = 0;
  for (let i = 1; i < n; i++) {
    if (ranks[i]! < ranks[start]!) start = i;
  }
  const visit = (atom: number, parentBond: number): void => {
    visitIndex[atom] = order++;
    const incident = [...mol.adjacency[atom]!].sort((x, y) => {
      const rx = ranks[otherEnd(mol.bonds[x]!, atom)]!;
      const ry = ranks[otherEnd(mol.bonds[y]!, atom)]!;
      return rx - ry || x - y;
    });
    for (const bondIdx of incident) {
      if (bondIdx === parentBond) continue;
      const next = otherEnd(mol.bonds[bondIdx]!, atom);
      if (visitIndex[next] === -1) {
        childBonds[atom]!.push(bondIdx);
        visit(next, bondIdx);
      } else if (!closureOfBond.has(bondIdx)) {
        const closure: Closure = { bondIdx, opener: next, closer: atom, digit: 0 };
        closureOfBond.set(bondIdx, closure);
        openerClosures[next]!.push(closure);
        closerClosures[atom]!.push(closure);
      }
    }
  };
  visit(start, -1);

  // emission pass; ring digits allocated at the opener, freed at the closer
  const freeDigits: number[] = [];
  let nextDigit = 1;
  const allocDigit = (): number => {
    if (freeDigits.length > 0) {
      freeDigits.sort((a, b) => a - b);
      return freeDigits.shift()!;
    }
    return nextDigit++;
  };
  const emit = (atom: number): string => {
    let out = atomText(mol, atom);
    const opening = [...openerClosures[atom]!].sort((a, b) => visitIndex[a.closer]! - visitIndex[b.closer]!);
    for (const closure of opening) {
      closure.digit = allocDigit();
      out += bondText(mol, mol.bonds[closure.bondIdx]!) + digitText(closure.digit);
    }
    const closing = [...closerClosures[atom]!].sort((a, b) => visitIndex[a.opener]! - visitIndex[b.opener]!);
    for (const closure of closing) {
      out += digitText(closure.digit);
      freeDigits.push(closure.digit);
    }
    const children = childBonds[atom]!;
    children.forEach((bondIdx, i) => {
      const bond = mol.bonds[bondIdx]!;
      const text = bondText(mol, bond) + emit(otherEnd(bond, atom));
      out += i < children.length - 1 ? `(${text})` : text;
    });
    return out;
  };
  return emit(start);
}
