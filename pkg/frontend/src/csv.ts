/**
 * Trajectory-CSV parsing.
 *
 * The producer writes UTF-8, a fixed 12-column header, '.' decimals and an
 * optionally empty `envelope` column.  Anything else is a schema violation
 * and is rejected with an error naming the file and line.
 */

export const TRAJECTORY_COLUMNS = [
  "iter",
  "f",
  "rel_loss",
  "sigma1_x",
  "sigmar_x",
  "sigma1_y",
  "sigmar_y",
  "grad_norm_x",
  "grad_norm_y",
  "balance",
  "colspan_leak",
  "envelope",
] as const;

export interface TrajectoryRow {
  iter: number;
  f: number;
  rel_loss: number;
  sigma1_x: number;
  sigmar_x: number;
  sigma1_y: number;
  sigmar_y: number;
  grad_norm_x: number;
  grad_norm_y: number;
  balance: number;
  colspan_leak: number;
  envelope: number | null;
}

export interface Trajectory {
  file: string;
  rows: TrajectoryRow[];
}

export class CsvParseError extends Error {
  constructor(
    public readonly file: string,
    public readonly line: number,
    detail: string,
  ) {
    super(`${file}:${line}: ${detail}`);
    this.name = "CsvParseError";
  }
}

function parseNumber(
  raw: string,
  file: string,
  line: number,
  column: string,
): number {
  const value = Number(raw);
  if (raw.trim() === "" || !Number.isFinite(value)) {
    throw new CsvParseError(file, line, `column '${column}': not a finite number: '${raw}'`);
  }
  return value;
}

export function parseTrajectoryCsv(text: string, file: string): Trajectory {
  const lines = text.split(/\r?\n/);
  while (lines.length > 0 && lines[lines.length - 1] === "") {
    lines.pop();
  }
  if (lines.length === 0) {
    throw new CsvParseError(file, 1, "empty file");
  }
  const header = lines[0].split(",");
  const expected = TRAJECTORY_COLUMNS as readonly string[];
  if (header.length !== expected.length || header.some((h, i) => h !== expected[i])) {
    throw new CsvParseError(
      file,
      1,
      `bad header: expected '${expected.join(",")}', got '${lines[0]}'`,
    );
  }
  const rows: TrajectoryRow[] = [];
  for (let i = 1; i < lines.length; i++) {
    const parts = lines[i].split(",");
    const lineNo = i + 1;
    if (parts.length !== expected.length) {
      throw new CsvParseError(
        file,
        lineNo,
        `expected ${expected.length} fields, got ${parts.length}`,
      );
    }
    rows.push({
      iter: parseNumber(parts[0], file, lineNo, "iter"),
      f: parseNumber(parts[1], file, lineNo, "f"),
      rel_loss: parseNumber(parts[2], file, lineNo, "rel_loss"),
      sigma1_x: parseNumber(parts[3], file, lineNo, "sigma1_x"),
      sigmar_x: parseNumber(parts[4], file, lineNo, "sigmar_x"),
      sigma1_y: parseNumber(parts[5], file, lineNo, "sigma1_y"),
      sigmar_y: parseNumber(parts[6], file, lineNo, "sigmar_y"),
      grad_norm_x: parseNumber(parts[7], file, lineNo, "grad_norm_x"),
      grad_norm_y: parseNumber(parts[8], file, lineNo, "grad_norm_y"),
      balance: parseNumber(parts[9], file, lineNo, "balance"),
      colspan_leak: parseNumber(parts[10], file, lineNo, "colspan_leak"),
      envelope:
        parts[11].trim() === "" ? null : parseNumber(parts[11], file, lineNo, "envelope"),
    });
  }
  if (rows.length === 0) {
    throw new CsvParseError(file, 2, "no data rows");
  }
  return { file, rows };
}
