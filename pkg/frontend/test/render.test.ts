import { existsSync, mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { describe, expect, it } from "vitest";

import { CsvParseError } from "../src/csv.js";
import { main, parseArgs } from "../src/cli.js";
import { EmptyInputError, groupKey, render } from "../src/render.js";

const FIXTURES = join(__dirname, "fixtures");

const fig1Inputs = [
  "fig1_unbalanced_trial000.csv",
  "fig1_unbalanced_trial001.csv",
  "fig1_balanced-colspan_trial000.csv",
  "fig1_balanced-colspan_trial001.csv",
  "fig1_plain-gaussian_trial000.csv",
  "fig1_plain-gaussian_trial001.csv",
].map((name) => join(FIXTURES, name));

const fig2Inputs = [
  "fig2_sr0.1_trial000.csv",
  "fig2_sr0.1_trial001.csv",
  "fig2_sr0.5_trial000.csv",
  "fig2_sr0.5_trial001.csv",
  "fig2_sr0.9_trial000.csv",
  "fig2_sr0.9_trial001.csv",
].map((name) => join(FIXTURES, name));

const outDir = (): string => mkdtempSync(join(tmpdir(), "altgd-fig-"));

describe("render", () => {
  it("renders fig1 with one color group per scheme and no dashed overlay", () => {
    const out = join(outDir(), "fig1.svg");
    render({ kind: "fig1", inputs: fig1Inputs, out });
    const svg = readFileSync(out, "utf-8");
    expect(svg).toContain("<svg");
    expect(svg).toContain("#ff7f0e"); // unbalanced: orange
    expect(svg).toContain("#1f77b4"); // balanced-colspan: blue
    expect(svg).toContain("#2ca02c"); // plain-gaussian: green
    expect(svg).not.toContain("stroke-dasharray");
    // six trajectories, no envelopes
    expect(svg.match(/<polyline/g)?.length).toBe(6);
  });

  it("renders fig2 with dashed envelope overlays", () => {
    const out = join(outDir(), "fig2.svg");
    render({ kind: "fig2", inputs: fig2Inputs, out });
    const svg = readFileSync(out, "utf-8");
    expect(svg).toContain("stroke-dasharray");
    // six trajectories + six envelopes
    expect(svg.match(/<polyline/g)?.length).toBe(12);
    expect((svg.match(/stroke-dasharray/g) ?? []).length).toBeGreaterThanOrEqual(6);
  });

  it("renders fig3-zoom restricted to the zoom horizon", () => {
    const out = join(outDir(), "fig3.svg");
    render({ kind: "fig3-zoom", inputs: fig2Inputs, out, zoom: 200 });
    const svg = readFileSync(out, "utf-8");
    expect(svg).toContain("stroke-dasharray");
    expect(svg).toContain("Early iterations");
  });

  it("is deterministic over identical inputs", () => {
    const dir = outDir();
    const outA = join(dir, "a.svg");
    const outB = join(dir, "b.svg");
    render({ kind: "fig2", inputs: fig2Inputs, out: outA });
    render({ kind: "fig2", inputs: fig2Inputs, out: outB });
    expect(readFileSync(outA, "utf-8")).toBe(readFileSync(outB, "utf-8"));
  });

  it("rejects empty input lists without writing a file", () => {
    const out = join(outDir(), "none.svg");
    expect(() => render({ kind: "fig1", inputs: [], out })).toThrowError(EmptyInputError);
    expect(existsSync(out)).toBe(false);
  });

  it("propagates parse errors with file and line", () => {
    const dir = outDir();
    const corrupt = join(dir, "fig1_unbalanced_trial000.csv");
    const original = readFileSync(fig1Inputs[0], "utf-8");
    writeFileSync(corrupt, original.replace("iter,f", "iteration,f"));
    const out = join(dir, "broken.svg");
    expect(() => render({ kind: "fig1", inputs: [corrupt], out })).toThrowError(
      CsvParseError,
    );
    expect(existsSync(out)).toBe(false);
  });

  it("derives group keys from producer file names", () => {
    expect(groupKey("fig1", "/x/fig1_balanced-colspan_trial004.csv")).toBe(
      "balanced-colspan",
    );
    expect(groupKey("fig2", "/x/fig2_sr0.9_trial000.csv")).toBe("0.9");
    expect(groupKey("fig2", "oddly_named.csv")).toBe("oddly_named");
  });
});

describe("cli", () => {
  it("expands globs, renders, and reports success", () => {
    const out = join(outDir(), "cli.svg");
    const code = main([
      "--kind", "fig2",
      "--inputs", join(FIXTURES, "fig2_sr*_trial*.csv"),
      "--out", out,
    ]);
    expect(code).toBe(0);
    expect(existsSync(out)).toBe(true);
  });

  it("maps error classes to distinct exit codes", () => {
    const dir = outDir();
    const corrupt = join(dir, "fig2_sr0.5_trial000.csv");
    writeFileSync(corrupt, "not,a,trajectory\n1,2,3\n");
    expect(main(["--kind", "fig2", "--inputs", corrupt, "--out", join(dir, "x.svg")]))
      .toBe(3);
    expect(main(["--kind", "fig1", "--inputs", join(dir, "missing_*ated.csv"),
                 "--out", join(dir, "y.svg")])).toBe(4);
    expect(main(["--kind", "bogus", "--out", "z.svg"])).toBe(2);
  });

  it("validates arguments", () => {
    expect(() => parseArgs(["--kind", "fig1"])).toThrowError(/--out/);
    expect(() => parseArgs(["--kind", "fig1", "--out", "o.svg", "--zoom", "-5"]))
      .toThrowError(/--zoom/);
    expect(() => parseArgs(["--frobnicate"])).toThrowError(/unknown argument/);
  });
});
