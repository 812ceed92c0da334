/**
 * Figure assembly from trajectory CSVs.
 *
 * Three figure kinds:
 *   fig1      — relative loss per initialization scheme (orange/blue/green)
 *   fig2      — relative loss per sigma_r with dashed theoretical envelopes
 *   fig3-zoom — fig2 restricted to the first `zoom` iterations
 *
 * Series are colored by group; groups come from the producer's file naming
 * (`fig1_<scheme>_trialNNN.csv`, `fig2_sr<value>_trialNNN.csv`).  The y axis
 * is always log scale.
 */

import { readFileSync, writeFileSync } from "node:fs";
import { basename } from "node:path";

import { parseTrajectoryCsv, Trajectory } from "./csv.js";
import { renderLogChart, Series } from "./svg.js";

export type FigureKind = "fig1" | "fig2" | "fig3-zoom";

export interface PlotSpec {
  kind: FigureKind;
  inputs: string[];
  out: string;
  zoom?: number;
}

export class EmptyInputError extends Error {
  constructor() {
    super("no input trajectories given");
    this.name = "EmptyInputError";
  }
}

const ORANGE = "#ff7f0e";
const BLUE = "#1f77b4";
const GREEN = "#2ca02c";
const FALLBACK = ["#9467bd", "#8c564b", "#e377c2", "#7f7f7f"];

const SCHEME_COLORS: Record<string, string> = {
  unbalanced: ORANGE,
  "balanced-colspan": BLUE,
  "plain-gaussian": GREEN,
};

const SIGMAR_COLORS: Record<string, string> = {
  "0.1": ORANGE,
  "0.5": BLUE,
  "0.9": GREEN,
};

export function groupKey(kind: FigureKind, file: string): string {
  const name = basename(file);
  if (kind === "fig1") {
    const match = name.match(/fig1_([a-z-]+)_trial/);
    if (match) return match[1];
  } else {
    const match = name.match(/_sr([0-9.]+?)_trial/);
    if (match) return match[1];
  }
  return name.replace(/\.csv$/, "");
}

function colorFor(kind: FigureKind, key: string, index: number): string {
  const table = kind === "fig1" ? SCHEME_COLORS : SIGMAR_COLORS;
  return table[key] ?? FALLBACK[index % FALLBACK.length];
}

function legendLabel(kind: FigureKind, key: string): string {
  return kind === "fig1" ? key : `sigma_r = ${key}`;
}

export function render(spec: PlotSpec): string {
  if (spec.inputs.length === 0) {
    throw new EmptyInputError();
  }
  const trajectories: Trajectory[] = spec.inputs.map((file) =>
    parseTrajectoryCsv(readFileSync(file, "utf-8"), file),
  );

  const zoom = spec.kind === "fig3-zoom" ? (spec.zoom ?? 200) : Infinity;
  const withEnvelope = spec.kind !== "fig1";

  const keys: string[] = [];
  const series: Series[] = [];
  for (const trajectory of trajectories) {
    const key = groupKey(spec.kind, trajectory.file);
    if (!keys.includes(key)) keys.push(key);
    const color = colorFor(spec.kind, key, keys.indexOf(key));
    const rows = trajectory.rows.filter((row) => row.iter <= zoom);
    if (rows.length === 0) {
      continue;
    }
    series.push({
      label: key,
      color,
      points: rows.map((row) => [row.iter, row.rel_loss]),
    });
    if (withEnvelope) {
      // The envelope column bounds the squared residual; rel_loss is the
      // squared residual over ||A||^2, recoverable from any row with f > 0.
      const anchor = rows.find((row) => row.f > 0 && row.rel_loss > 0);
      const envelopeRows = rows.filter((row) => row.envelope !== null);
      if (anchor && envelopeRows.length > 0) {
        const normA2 = (2.0 * anchor.f) / anchor.rel_loss;
        series.push({
          label: `${key} envelope`,
          color,
          dash: "6,4",
          width: 1.1,
          opacity: 0.8,
          points: envelopeRows.map((row) => [row.iter, (row.envelope as number) / normA2]),
        });
      }
    }
  }

  const titles: Record<FigureKind, string> = {
    fig1: "Effect of initialization (relative squared residual)",
    fig2: "Effect of sigma_r / sigma_1 with theoretical envelopes",
    "fig3-zoom": "Early iterations with theoretical envelopes",
  };
  const legend: Array<{ label: string; color: string; dash?: string }> = keys.map(
    (key, i) => ({
      label: legendLabel(spec.kind, key),
      color: colorFor(spec.kind, key, i),
    }),
  );
  if (withEnvelope) {
    legend.push({ label: "envelope (dashed)", color: "#555555", dash: "6,4" });
  }

  const svg = renderLogChart({
    title: titles[spec.kind],
    xLabel: "iteration",
    yLabel: "relative squared residual",
    series,
    legend,
  });
  writeFileSync(spec.out, svg, "utf-8");
  return spec.out;
}
