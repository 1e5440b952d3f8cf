/**
 * Quantitative drug-likeness estimate.
 *
 * Weighted geometric mean of desirability functions over seven
 * physicochemical descriptors: molecular weight, logP, acceptor and donor
 * counts, polar surface area, rotatable bonds, and aromatic ring count. The
 * published formulation adds an eighth term for structural alerts; that term
 * requires a curated SMARTS library and is omitted here, so scores run
 * slightly higher than toolkit values for alert-bearing molecules. Output is
 * in (0, 1] by construction.
 */

import {
  aromaticRingCount,
  hBondAcceptors,
  hBondDonors,
  logP,
  molecularWeight,
  rotatableBonds,
  tpsa,
} from "./descriptors.js";
import { Molecule } from "./mol.js";

interface AdsParams {
  a: number;
  b: number;
  c: number;
  d: number;
  e: number;
  f: number;
  dmax: number;
}

// asymmetric double sigmoidal parameters fitted to approved-drug histograms
const ADS: Record<string, AdsParams> = {
  mw: { a: 2.817065973, b: 392.5754953, c: 290.7489764, d: 2.419764353, e: 49.22325677, f: 65.37051707, dmax: 104.98055614 },
  alogp: { a: 3.172690585, b: 137.8624751, c: 2.534937431, d: 4.581497897, e: 0.822739154, f: 0.576295591, dmax: 131.31866035 },
  hba: { a: 2.948620388, b: 160.4605972, c: 3.615294657, d: 4.435986202, e: 0.290141953, f: 1.300669958, dmax: 148.77630464 },
  hbd: { a: 1.618662227, b: 1010.051101, c: 0.985094388, d: 0.000000001, e: 0.713820843, f: 0.920922555, dmax: 258.16326158 },
  psa: { a: 1.876861559, b: 125.2232657, c: 62.90773554, d: 87.83366614, e: 12.01999824, f: 28.51324732, dmax: 104.56861672 },
  rotb: { a: 0.01, b: 272.4121427, c: 2.55837997, d: 1.565547684, e: 1.271567166, f: 2.758063707, dmax: 105.4420438 },
  arom: { a: 3.21778897, b: 957.7374108, c: 2.274627939, d: 0.000000001, e: 1.317690384, f: 0.375760881, dmax: 312.33726097 },
};

const WEIGHTS: Record<string, number> = {
  mw: 0.66,
  alogp: 0.46,
  hba: 0.05,
  hbd: 0.61,
  psa: 0.06,
  rotb: 0.65,
  arom: 0.48,
};

function ads(x: number, p: AdsParams): number {
  const rise = 1 + Math.exp(-(x - p.c + p.d / 2) / p.e);
  const fall = 1 + Math.exp(-(x - p.c - p.d / 2) / p.f);
  return p.a + (p.b / rise) * (1 - 1 / fall);
}

function desirability(x: number, p: AdsParams): number {
  const value = ads(x, p) / p.dmax;
  // clamp keeps the log defined for descriptor values far outside the fit
  return Math.min(1, Math.max(1e-6, value));
}

/** Drug-likeness in (0, 1]; higher is more drug-like. */
export function qed(mol: Molecule): number {
  const values: Record<string, number> = {
    mw: molecularWeight(mol),
    alogp: logP(mol),
    hba: hBondAcceptors(mol),
    hbd: hBondDonors(mol),
    psa: tpsa(mol),
    rotb: rotatableBonds(mol),
    arom: aromaticRingCount(mol),
  };
  let weightedLogSum = 0;
  let weightSum = 0;
  for (const key of Object.keys(ADS)) {
    const weight = WEIGHTS[key]!;
    weightedLogSum += weight * Math.log(desirability(values[key]!, ADS[key]!));
    weightSum += weight;
  }
  return Math.exp(weightedLogSum / weightSum);
}
