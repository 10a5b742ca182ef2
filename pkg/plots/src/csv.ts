/**
 * Reader for the harness CSV artifacts.
 *
 * The upstream writer emits plain comma-separated cells with no quoting
 * (it refuses to write cells containing commas or newlines), so a split
 * on "," is the whole grammar. Cells stay strings here; figures convert
 * the columns they need and keep the raw text for verbatim labels.
 */

import { readFileSync } from "node:fs";

export class SchemaError extends Error {}
export class EmptyCsvError extends Error {}

export interface Table {
  path: string;
  columns: string[];
  /** Row-major raw cell text, one entry per data line. */
  rows: string[][];
}

export function parseTable(path: string): Table {
  const text = readFileSync(path, "utf-8");
  const lines = text.split("\n");
  while (lines.length > 0 && lines[lines.length - 1] === "") lines.pop();
  if (lines.length === 0) {
    throw new EmptyCsvError(`${path} is empty (no header line)`);
  }
  const columns = (lines[0] as string).split(",");
  const rows = lines.slice(1).map((line, i) => {
    const cells = line.split(",");
    if (cells.length !== columns.length) {
      throw new SchemaError(
        `${path} row ${i + 1} has ${cells.length} cells, header has ${columns.length}`,
      );
    }
    return cells;
  });
  return { path, columns, rows };
}

/**
 * Enforce the published column contract exactly. The message lists the
 * diff in both directions so a renamed or reordered producer is obvious
 * from the error alone.
 */
export function requireColumns(table: Table, expected: readonly string[]): void {
  const missing = expected.filter((c) => !table.columns.includes(c));
  const unexpected = table.columns.filter((c) => !expected.includes(c));
  if (missing.length > 0 || unexpected.length > 0) {
    throw new SchemaError(
      `schema mismatch in ${table.path}: ` +
        `missing columns [${missing.join(", ")}], ` +
        `unexpected columns [${unexpected.join(", ")}]; ` +
        `expected [${expected.join(", ")}], found [${table.columns.join(", ")}]`,
    );
  }
}

export function requireRows(table: Table): void {
  if (table.rows.length === 0) {
    throw new EmptyCsvError(
      `${table.path} has a header but no data rows; refusing to emit an empty figure`,
    );
  }
}

export function col(table: Table, name: string): string[] {
  const idx = table.columns.indexOf(name);
  if (idx < 0) {
    throw new SchemaError(`column ${name} not present in ${table.path}`);
  }
  return table.rows.map((r) => r[idx] as string);
}

export function numCol(table: Table, name: string): number[] {
  return col(table, name).map((cell) => {
    const v = Number(cell);
    if (!Number.isFinite(v)) {
      throw new SchemaError(
        `non-numeric value "${cell}" in column ${name} of ${table.path}`,
      );
    }
    return v;
  });
}
