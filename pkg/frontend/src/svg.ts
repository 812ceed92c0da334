/**
 * Minimal deterministic SVG line charts with a log-scale y axis.
 * No DOM, no canvas: charts are assembled as strings, so identical input
 * series produce identical files.
 */

export interface Series {
  label: string;
  color: string;
  points: Array<[number, number]>; // (x, y); y must be positive for log scale
  dash?: string; // stroke-dasharray, e.g. "6,3"
  width?: number;
  opacity?: number;
}

export interface ChartOptions {
  title: string;
  xLabel: string;
  yLabel: string;
  series: Series[];
  legend: Array<{ label: string; color: string; dash?: string }>;
  width?: number;
  height?: number;
}

const MARGIN = { top: 42, right: 20, bottom: 46, left: 72 };

function niceLogTicks(min: number, max: number): number[] {
  const ticks: number[] = [];
  const lo = Math.ceil(Math.log10(min));
  const hi = Math.floor(Math.log10(max));
  const step = Math.max(1, Math.ceil((hi - lo) / 8));
  for (let e = lo; e <= hi; e += step) {
    ticks.push(Math.pow(10, e));
  }
  return ticks;
}

function linearTicks(min: number, max: number, count = 6): number[] {
  const span = max - min;
  if (span <= 0) return [min];
  const rawStep = span / count;
  const mag = Math.pow(10, Math.floor(Math.log10(rawStep)));
  const step = [1, 2, 5, 10].map((k) => k * mag).find((s) => span / s <= count) ?? mag * 10;
  const ticks: number[] = [];
  for (let v = Math.ceil(min / step) * step; v <= max + 1e-12 * span; v += step) {
    ticks.push(v);
  }
  return ticks;
}

function fmtTick(value: number): string {
  if (value !== 0 && (Math.abs(value) < 1e-3 || Math.abs(value) >= 1e4)) {
    const e = Math.floor(Math.log10(Math.abs(value)));
    const mantissa = value / Math.pow(10, e);
    return mantissa === 1 ? `1e${e}` : `${mantissa.toPrecision(2)}e${e}`;
  }
  return `${Number(value.toPrecision(4))}`;
}

const esc = (s: string): string =>
  s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");

export function renderLogChart(options: ChartOptions): string {
  const width = options.width ?? 760;
  const height = options.height ?? 480;
  const plotW = width - MARGIN.left - MARGIN.right;
  const plotH = height - MARGIN.top - MARGIN.bottom;

  const xs = options.series.flatMap((s) => s.points.map((p) => p[0]));
  const ys = options.series.flatMap((s) => s.points.map((p) => p[1]).filter((v) => v > 0));
  if (xs.length === 0 || ys.length === 0) {
    throw new Error("nothing to plot: no positive data points");
  }
  const xMin = Math.min(...xs);
  const xMax = Math.max(...xs);
  const yMin = Math.min(...ys);
  const yMax = Math.max(...ys);
  const xSpan = xMax - xMin || 1;
  const logMin = Math.log10(yMin);
  const logMax = Math.log10(yMax);
  const logSpan = logMax - logMin || 1;

  const sx = (x: number): number => MARGIN.left + ((x - xMin) / xSpan) * plotW;
  const sy = (y: number): number =>
    MARGIN.top + plotH - ((Math.log10(y) - logMin) / logSpan) * plotH;

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
      `viewBox="0 0 ${width} ${height}" font-family="Helvetica,Arial,sans-serif">`,
  );
  parts.push(`<rect width="${width}" height="${height}" fill="white"/>`);
  parts.push(
    `<text x="${width / 2}" y="22" text-anchor="middle" font-size="15">` +
      `${esc(options.title)}</text>`,
  );

  // gridlines + ticks
  for (const tick of niceLogTicks(yMin, yMax)) {
    const y = sy(tick).toFixed(2);
    parts.push(
      `<line x1="${MARGIN.left}" y1="${y}" x2="${width - MARGIN.right}" y2="${y}" ` +
        `stroke="#dddddd" stroke-width="0.6"/>`,
    );
    parts.push(
      `<text x="${MARGIN.left - 6}" y="${y}" text-anchor="end" dominant-baseline="middle" ` +
        `font-size="10">${fmtTick(tick)}</text>`,
    );
  }
  for (const tick of linearTicks(xMin, xMax)) {
    const x = sx(tick).toFixed(2);
    parts.push(
      `<line x1="${x}" y1="${MARGIN.top + plotH}" x2="${x}" y2="${MARGIN.top + plotH + 4}" ` +
        `stroke="#333333" stroke-width="0.8"/>`,
    );
    parts.push(
      `<text x="${x}" y="${MARGIN.top + plotH + 16}" text-anchor="middle" font-size="10">` +
        `${fmtTick(tick)}</text>`,
    );
  }
  parts.push(
    `<rect x="${MARGIN.left}" y="${MARGIN.top}" width="${plotW}" height="${plotH}" ` +
      `fill="none" stroke="#333333" stroke-width="1"/>`,
  );

  // data series
  for (const series of options.series) {
    const coords = series.points
      .filter((p) => p[1] > 0)
      .map((p) => `${sx(p[0]).toFixed(2)},${sy(p[1]).toFixed(2)}`)
      .join(" ");
    if (coords === "") continue;
    const dash = series.dash ? ` stroke-dasharray="${series.dash}"` : "";
    const opacity = series.opacity ?? 0.9;
    parts.push(
      `<polyline points="${coords}" fill="none" stroke="${series.color}" ` +
        `stroke-width="${series.width ?? 1.4}" opacity="${opacity}"${dash}/>`,
    );
  }

  // axis labels + legend
  parts.push(
    `<text x="${MARGIN.left + plotW / 2}" y="${height - 10}" text-anchor="middle" ` +
      `font-size="12">${esc(options.xLabel)}</text>`,
  );
  parts.push(
    `<text x="18" y="${MARGIN.top + plotH / 2}" text-anchor="middle" font-size="12" ` +
      `transform="rotate(-90 18 ${MARGIN.top + plotH / 2})">${esc(options.yLabel)}</text>`,
  );
  options.legend.forEach((entry, i) => {
    const y = MARGIN.top + 14 + 16 * i;
    const x = width - MARGIN.right - 150;
    const dash = entry.dash ? ` stroke-dasharray="${entry.dash}"` : "";
    parts.push(
      `<line x1="${x}" y1="${y - 4}" x2="${x + 24}" y2="${y - 4}" stroke="${entry.color}" ` +
        `stroke-width="2"${dash}/>`,
    );
    parts.push(`<text x="${x + 30}" y="${y}" font-size="11">${esc(entry.label)}</text>`);
  });

  parts.push("</svg>");
  return parts.join("\n") + "\n";
}
