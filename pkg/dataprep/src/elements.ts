/**
 * Element data for the subset of the periodic table this tool accepts.
 *
 * Weights are IUPAC 2021 conventional atomic weights. Valence lists drive
 * implicit hydrogen assignment: the smallest listed valence that covers the
 * written bond order sum wins.
 */

export interface ElementInfo {
  number: number;
  weight: number;
  valences: number[];
}

export const ELEMENTS: Record<string, ElementInfo> = {
  H: { number: 1, weight: 1.008, valences: [1] },
  Li: { number: 3, weight: 6.94, valences: [1] },
  B: { number: 5, weight: 10.81, valences: [3] },
  C: { number: 6, weight: 12.011, valences: [4] },
  N: { number: 7, weight: 14.007, valences: [3, 5] },
  O: { number: 8, weight: 15.999, valences: [2] },
  F: { number: 9, weight: 18.998, valences: [1] },
  Na: { number: 11, weight: 22.99, valences: [1] },
  Mg: { number: 12, weight: 24.305, valences: [2] },
  Si: { number: 14, weight: 28.085, valences: [4] },
  P: { number: 15, weight: 30.974, valences: [3, 5] },
  S: { number: 16, weight: 32.06, valences: [2, 4, 6] },
  Cl: { number: 17, weight: 35.45, valences: [1] },
  K: { number: 19, weight: 39.098, valences: [1] },
  Ca: { number: 20, weight: 40.078, valences: [2] },
  Fe: { number: 26, weight: 55.845, valences: [2, 3] },
  Zn: { number: 30, weight: 65.38, valences: [2] },
  As: { number: 33, weight: 74.922, valences: [3, 5] },
  Se: { number: 34, weight: 78.971, valences: [2, 4, 6] },
  Br: { number: 35, weight: 79.904, valences: [1] },
  I: { number: 53, weight: 126.904, valences: [1] },
};

// Elements that may be written bare (no brackets) in SMILES.
export const ORGANIC_SUBSET = new Set(["B", "C", "N", "O", "P", "S", "F", "Cl", "Br", "I"]);

// Elements that may carry the aromatic (lowercase) flag.
export const AROMATIC_ELEMENTS = new Set(["B", "C", "N", "O", "P", "S", "Se", "As"]);
