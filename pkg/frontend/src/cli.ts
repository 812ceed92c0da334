#!/usr/bin/env node
/**
 * CLI: altgd-render --kind {fig1,fig2,fig3-zoom} --inputs GLOB --out PATH [--zoom N]
 *
 * `--inputs` accepts one or more paths or single-directory globs (quoted so
 * the shell does not expand them); matches are sorted for determinism.
 */

import { readdirSync, realpathSync } from "node:fs";
import { basename, dirname, join } from "node:path";
import { exit } from "node:process";
import { fileURLToPath } from "node:url";

import { CsvParseError } from "./csv.js";
import { EmptyInputError, FigureKind, render } from "./render.js";

function expandGlob(pattern: string): string[] {
  if (!pattern.includes("*")) {
    return [pattern];
  }
  const dir = dirname(pattern);
  const name = basename(pattern);
  if (dir.includes("*")) {
    throw new Error(`wildcards are only supported in the file name: ${pattern}`);
  }
  const regex = new RegExp(
    "^" + name.split("*").map((part) => part.replace(/[.*+?^${}()|[\]\\]/g, "\\$&")).join(".*") + "$",
  );
  return readdirSync(dir)
    .filter((entry) => regex.test(entry))
    .sort()
    .map((entry) => join(dir, entry));
}

interface CliArgs {
  kind: FigureKind;
  inputs: string[];
  out: string;
  zoom?: number;
}

export function parseArgs(argv: string[]): CliArgs {
  let kind: string | undefined;
  let out: string | undefined;
  let zoom: number | undefined;
  const inputs: string[] = [];
  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i];
    const next = (): string => {
      i += 1;
      if (i >= argv.length) throw new Error(`missing value for ${arg}`);
      return argv[i];
    };
    switch (arg) {
      case "--kind":
        kind = next();
        break;
      case "--inputs":
        inputs.push(...expandGlob(next()));
        break;
      case "--out":
        out = next();
        break;
      case "--zoom":
        zoom = Number(next());
        break;
      default:
        throw new Error(`unknown argument: ${arg}`);
    }
  }
  if (kind !== "fig1" && kind !== "fig2" && kind !== "fig3-zoom") {
    throw new Error("--kind must be fig1, fig2 or fig3-zoom");
  }
  if (!out) {
    throw new Error("--out is required");
  }
  if (zoom !== undefined && (!Number.isFinite(zoom) || zoom <= 0)) {
    throw new Error("--zoom must be a positive number");
  }
  return { kind, inputs, out, zoom };
}

export function main(argv: string[]): number {
  try {
    const args = parseArgs(argv);
    const path = render(args);
    console.log(`wrote ${path}`);
    return 0;
  } catch (error) {
    if (error instanceof CsvParseError) {
      console.error(`parse error: ${error.message}`);
      return 3;
    }
    if (error instanceof EmptyInputError) {
      console.error(`input error: ${error.message}`);
      return 4;
    }
    console.error(`error: ${(error as Error).message}`);
    return 2;
  }
}

function invokedDirectly(): boolean {
  if (process.argv[1] === undefined) return false;
  try {
    // realpath resolves the npm bin symlink
    return realpathSync(process.argv[1]) === fileURLToPath(import.meta.url);
  } catch {
    return false;
  }
}

if (invokedDirectly()) {
  exit(main(process.argv.slice(2)));
}
