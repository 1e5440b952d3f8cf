/**
 * SMILES parser.
 *
 * Covers the subset needed for drug-like molecules: organic subset atoms,
 * bracket atoms with isotope/charge/hydrogen counts, aromatic lowercase
 * notation, ring closures (including %nn), branches, and dot-separated
 * fragments. Stereo markers (@, @@, /, \) are accepted and ignored; this
 * tool works on constitution only.
 *
 * Multi-fragment inputs (salts) keep their largest fragment. Explicit [H]
 * atoms are folded into the neighbor's hydrogen count.
 */

import { ELEMENTS, ORGANIC_SUBSET, AROMATIC_ELEMENTS } from "./elements.js";
import { Atom, Bond, Molecule, MoleculeError, finalizeMolecule } from "./mol.js";

export class SmilesError extends Error {}

interface PendingBond {
  order: 1 | 2 | 3;
  aromatic: boolean;
}

const BOND_CHARS: Record<string, PendingBond> = {
  "-": { order: 1, aromatic: false },
  "=": { order: 2, aromatic: false },
  "#": { order: 3, aromatic: false },
  ":": { order: 1, aromatic: true },
  "/": { order: 1, aromatic: false },
  "\\": { order: 1, aromatic: false },
};

function makeAtom(element: string, aromatic: boolean, fromBracket: boolean): Atom {
  return { element, aromatic, charge: 0, isotope: 0, hcount: 0, fromBracket, inRing: false };
}

class Parser {
  private readonly text: string;
  private pos = 0;
  private readonly atoms: Atom[] = [];
  private readonly bonds: Bond[] = [];
  private readonly bondPairs = new Set<string>();
  private prev: number | null = null;
  private readonly branchStack: number[] = [];
  private pending: PendingBond | null = null;
  // ring closure number -> first endpoint and the bond written before it
  private readonly openRings = new Map<number, { atom: number; bond: PendingBond | null }>();

  constructor(text: string) {
    this.text = text;
  }

  private fail(message: string): never {
    throw new SmilesError(`${message} (position ${this.pos})`);
  }

  private peek(): string {
    return this.text[this.pos] ?? "";
  }

  private take(): string {
    const ch = this.text[this.pos] ?? "";
    this.pos++;
    return ch;
  }

  private addAtom(atom: Atom): void {
    this.atoms.push(atom);
    const idx = this.atoms.length - 1;
    if (this.prev !== null) this.addBond(this.prev, idx, this.pending);
    else if (this.pending !== null) this.fail("bond symbol with no preceding atom");
    this.pending = null;
    this.prev = idx;
  }

  private addBond(a: number, b: number, spec: PendingBond | null): void {
    if (a === b) this.fail("atom bonded to itself");
    const key = a < b ? `${a}:${b}` : `${b}:${a}`;
    if (this.bondPairs.has(key)) this.fail("duplicate bond between the same atoms");
    this.bondPairs.add(key);
    // an unwritten bond between two aromatic atoms defaults to aromatic;
    // finalizeMolecule downgrades it to single if it turns out non-ring
    const aromatic =
      spec === null
        ? this.atoms[a]!.aromatic && this.atoms[b]!.aromatic
        : spec.aromatic;
    this.bonds.push({ a, b, order: spec?.order ?? 1, aromatic, inRing: false });
  }

  private ringClosure(num: number): void {
    if (this.prev === null) this.fail("ring closure before any atom");
    const open = this.openRings.get(num);
    if (open === undefined) {
      this.openRings.set(num, { atom: this.prev, bond: this.pending });
      this.pending = null;
      return;
    }
    this.openRings.delete(num);
    if (open.atom === this.prev) this.fail(`ring bond ${num} closes on its own atom`);
    let spec = this.pending ?? open.bond;
    if (this.pending !== null && open.bond !== null) {
      if (this.pending.order !== open.bond.order || this.pending.aromatic !== open.bond.aromatic) {
        this.fail(`conflicting bond orders for ring closure ${num}`);
      }
      spec = this.pending;
    }
    this.addBond(open.atom, this.prev, spec);
    this.pending = null;
  }

  private parseBracket(): void {
    // consumed '['; grammar: isotope? symbol chiral? H-count? charge? class? ']'
    let isotope = 0;
    while (/[0-9]/.test(this.peek())) isotope = isotope * 10 + Number(this.take());

    let element = "";
    let aromatic = false;
    const two = this.text.slice(this.pos, this.pos + 2);
    if (two === "se" || two === "as") {
      element = two[0]!.toUpperCase() + two[1]!;
      aromatic = true;
      this.pos += 2;
    } else if (/[A-Z]/.test(this.peek())) {
      const twoUp = this.text.slice(this.pos, this.pos + 2);
      if (twoUp.length === 2 && /[a-z]/.test(twoUp[1]!) && ELEMENTS[twoUp[0]! + twoUp[1]!]) {
        element = twoUp;
        this.pos += 2;
      } else {
        element = this.take();
      }
    } else if (/[bcnops]/.test(this.peek())) {
      element = this.take().toUpperCase();
      aromatic = true;
    } else if (this.peek() === "*") {
      this.fail("wildcard atoms are not supported");
    } else {
      this.fail("expected an element symbol in brackets");
    }
    if (!ELEMENTS[element]) this.fail(`unsupported element ${element}`);
    if (aromatic && !AROMATIC_ELEMENTS.has(element)) this.fail(`element ${element} cannot be aromatic`);

    const atom = makeAtom(element, aromatic, true);
    atom.isotope = isotope;

    while (this.peek() === "@") this.take(); // chirality ignored

    if (this.peek() === "H") {
      this.take();
      let count = 1;
      if (/[0-9]/.test(this.peek())) {
        count = 0;
        while (/[0-9]/.test(this.peek())) count = count * 10 + Number(this.take());
      }
      atom.hcount = count;
    }

    if (this.peek() === "+" || this.peek() === "-") {
      const sign = this.take() === "+" ? 1 : -1;
      let magnitude = 1;
      if (/[0-9]/.test(this.peek())) {
        magnitude = 0;
        while (/[0-9]/.test(this.peek())) magnitude = magnitude * 10 + Number(this.take());
      } else {
        while (this.peek() === (sign === 1 ? "+" : "-")) {
          this.take();
          magnitude++;
        }
      }
      atom.charge = sign * magnitude;
    }

    if (this.peek() === ":") {
      this.take();
      if (!/[0-9]/.test(this.peek())) this.fail("atom class expects digits");
      while (/[0-9]/.test(this.peek())) this.take();
    }

    if (this.take() !== "]") this.fail("unclosed bracket atom");
    this.addAtom(atom);
  }

  parse(): { atoms: Atom[]; bonds: Bond[] } {
    if (this.text.length === 0) throw new SmilesError("empty SMILES");
    while (this.pos < this.text.length) {
      const ch = this.peek();
      if (ch === "[") {
        this.take();
        this.parseBracket();
      } else if (BOND_CHARS[ch]) {
        if (this.pending !== null) this.fail("two bond symbols in a row");
        this.pending = BOND_CHARS[ch]!;
        this.take();
      } else if (ch === "(") {
        if (this.prev === null) this.fail("branch start before any atom");
        this.branchStack.push(this.prev);
        this.take();
      } else if (ch === ")") {
        if (this.branchStack.length === 0) this.fail("unmatched closing parenthesis");
        if (this.pending !== null) this.fail("dangling bond before closing parenthesis");
        this.prev = this.branchStack.pop()!;
        this.take();
      } else if (ch === ".") {
        if (this.pending !== null) this.fail("bond symbol before dot");
        this.prev = null;
        this.take();
      } else if (/[0-9]/.test(ch)) {
        this.ringClosure(Number(this.take()));
      } else if (ch === "%") {
        this.take();
        const digits = this.text.slice(this.pos, this.pos + 2);
        if (!/^[0-9]{2}$/.test(digits)) this.fail("%% ring closure expects two digits");
        this.pos += 2;
        this.ringClosure(Number(digits));
      } else if (/[A-Z]/.test(ch)) {
        const two = this.text.slice(this.pos, this.pos + 2);
        if ((two === "Cl" || two === "Br") && ORGANIC_SUBSET.has(two)) {
          this.pos += 2;
          this.addAtom(makeAtom(two, false, false));
        } else if (ORGANIC_SUBSET.has(ch)) {
          this.take();
          this.addAtom(makeAtom(ch, false, false));
        } else {
          this.fail(`element ${ch} must be written in brackets`);
        }
      } else if (/[bcnops]/.test(ch)) {
        this.take();
        this.addAtom(makeAtom(ch.toUpperCase(), true, false));
      } else if (/\s/.test(ch)) {
        this.fail("unexpected whitespace inside SMILES");
      } else {
        this.fail(`unexpected character ${JSON.stringify(ch)}`);
      }
    }
    if (this.branchStack.length > 0) throw new SmilesError("unclosed branch");
    if (this.openRings.size > 0) {
      const nums = [...this.openRings.keys()].sort((a, b) => a - b);
      throw new SmilesError(`unclosed ring bond ${nums.join(", ")}`);
    }
    if (this.pending !== null) throw new SmilesError("dangling bond at end of SMILES");
    if (this.atoms.length === 0) throw new SmilesError("no atoms in SMILES");
    return { atoms: this.atoms, bonds: this.bonds };
  }
}

// Connected components by atom index.
function components(atomCount: number, bonds: Bond[]): number[][] {
  const adjacency: number[][] = Array.from({ length: atomCount }, () => []);
  for (const bond of bonds) {
    adjacency[bond.a]!.push(bond.b);
    adjacency[bond.b]!.push(bond.a);
  }
  const seen = new Array<boolean>(atomCount).fill(false);
  const out: number[][] = [];
  for (let i = 0; i < atomCount; i++) {
    if (seen[i]) continue;
    const group: number[] = [];
    const queue = [i];
    seen[i] = true;
    while (queue.length > 0) {
      const atom = queue.pop()!;
      group.push(atom);
      for (const nbr of adjacency[atom]!) {
        if (!seen[nbr]) {
          seen[nbr] = true;
          queue.push(nbr);
        }
      }
    }
    out.push(group);
  }
  return out;
}

// Fold explicit [H] atoms into their neighbor's hydrogen count.
function mergeExplicitHydrogens(atoms: Atom[], bonds: Bond[]): { atoms: Atom[]; bonds: Bond[] } {
  const isH = (i: number) => atoms[i]!.element === "H";
  if (!atoms.some((_, i) => isH(i))) return { atoms, bonds };
  const hNeighbors: number[][] = atoms.map(() => []);
  for (const bond of bonds) {
    if (isH(bond.a) && isH(bond.b)) throw new SmilesError("hydrogen bonded to hydrogen is not supported");
    if (isH(bond.a)) hNeighbors[bond.b]!.push(bond.a);
    if (isH(bond.b)) hNeighbors[bond.a]!.push(bond.b);
  }
  for (let i = 0; i < atoms.length; i++) {
    if (!isH(i)) continue;
    if (atoms[i]!.charge !== 0) throw new SmilesError("charged explicit hydrogen is not supported");
    const bondCount = bonds.filter((b) => b.a === i || b.b === i).length;
    if (bondCount !== 1) throw new SmilesError("explicit hydrogen must have exactly one bond");
  }
  const keep: number[] = [];
  const remap = new Map<number, number>();
  for (let i = 0; i < atoms.length; i++) {
    if (isH(i)) continue;
    remap.set(i, keep.length);
    keep.push(i);
  }
  if (keep.length === 0) throw new SmilesError("molecule has no heavy atoms");
  const newAtoms = keep.map((i) => {
    const atom = { ...atoms[i]! };
    atom.hcount += hNeighbors[i]!.length;
    if (hNeighbors[i]!.length > 0) atom.fromBracket = true; // hydrogen count is now explicit
    return atom;
  });
  const newBonds = bonds
    .filter((bond) => !isH(bond.a) && !isH(bond.b))
    .map((bond) => ({ ...bond, a: remap.get(bond.a)!, b: remap.get(bond.b)! }));
  return { atoms: newAtoms, bonds: newBonds };
}

export interface ParseResult {
  mol: Molecule;
  /** fragments dropped when the input contained dots (salt counterions) */
  fragmentsDropped: number;
}

/** Parse one SMILES string, keeping the largest fragment. */
export function parseSmilesDetailed(text: string): ParseResult {
  const raw = new Parser(text).parse();
  const merged = mergeExplicitHydrogens(raw.atoms, raw.bonds);
  const groups = components(merged.atoms.length, merged.bonds);
  let best = groups[0]!;
  for (const group of groups) {
    if (group.length > best.length) best = group;
  }
  let atoms = merged.atoms;
  let bonds = merged.bonds;
  if (groups.length > 1) {
    const keepSet = new Set(best);
    const remap = new Map<number, number>();
    const keptAtoms: Atom[] = [];
    for (let i = 0; i < atoms.length; i++) {
      if (!keepSet.has(i)) continue;
      remap.set(i, keptAtoms.length);
      keptAtoms.push(atoms[i]!);
    }
    bonds = bonds
      .filter((bond) => keepSet.has(bond.a) && keepSet.has(bond.b))
      .map((bond) => ({ ...bond, a: remap.get(bond.a)!, b: remap.get(bond.b)! }));
    atoms = keptAtoms;
  }
  try {
    return { mol: finalizeMolecule(atoms, bonds), fragmentsDropped: groups.length - 1 };
  } catch (err) {
    if (err instanceof MoleculeError) throw new SmilesError(err.message);
    throw err;
  }
}

/** Parse one SMILES string into the largest-fragment molecule. */
export function parseSmiles(text: string): Molecule {
  return parseSmilesDetailed(text).mol;
}
