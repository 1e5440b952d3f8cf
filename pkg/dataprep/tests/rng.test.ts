import { describe, expect, it } from "vitest";

import { sampleIndices, splitmix32 } from "../src/rng.js";

describe("deterministic sampling", () => {
  it("reproduces the same stream for the same seed", () => {
    const a = splitmix32(42);
    const b = splitmix32(42);
    for (let i = 0; i < 100; i++) expect(a()).toBe(b());
  });

  it("separates streams by seed", () => {
    const a = splitmix32(1);
    const b = splitmix32(2);
    const same = Array.from({ length: 20 }, () => a() === b());
    expect(same.every(Boolean)).toBe(false);
  });

  it("stays in [0, 1)", () => {
    const next = splitmix32(7);
    for (let i = 0; i < 1000; i++) {
      const value = next();
      expect(value).toBeGreaterThanOrEqual(0);
      expect(value).toBeLessThan(1);
    }
  });

  it("samples distinct ascending indices", () => {
    const picked = sampleIndices(1000, 50, 3);
    expect(picked.length).toBe(50);
    for (let i = 1; i < picked.length; i++) {
      expect(picked[i]!).toBeGreaterThan(picked[i - 1]!);
    }
    expect(picked.every((idx) => idx >= 0 && idx < 1000)).toBe(true);
  });

  it("is reproducible and seed sensitive", () => {
    expect(sampleIndices(500, 20, 9)).toEqual(sampleIndices(500, 20, 9));
    expect(sampleIndices(500, 20, 9)).not.toEqual(sampleIndices(500, 20, 10));
  });

  it("returns everything when the cap covers the population", () => {
    expect(sampleIndices(5, 5, 0)).toEqual([0, 1, 2, 3, 4]);
    expect(sampleIndices(5, 99, 0)).toEqual([0, 1, 2, 3, 4]);
  });

  it("covers the whole range across seeds", () => {
    const seen = new Set<number>();
    for (let seed = 0; seed < 200; seed++) {
      for (const idx of sampleIndices(10, 3, seed)) seen.add(idx);
    }
    expect(seen.size).toBe(10);
  });
});
