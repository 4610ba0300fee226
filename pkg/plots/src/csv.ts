import { readFileSync } from "node:fs";
import Papa from "papaparse";

/** Parsed CSV with raw string cells; figures never retype what they plot. */
export interface Table {
  columns: string[];
  rows: Record<string, string>[];
}

export class SchemaError extends Error {}

export function readTable(path: string): Table {
  let text: string;
  try {
    text = readFileSync(path, "utf8");
  } catch {
    throw new SchemaError(`cannot read input CSV: ${path}`);
  }
  const parsed = Papa.parse<Record<string, string>>(text, {
    header: true,
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    const first = parsed.errors[0];
    throw new SchemaError(`malformed CSV ${path}: ${first.message}`);
  }
  const columns = parsed.meta.fields ?? [];
  if (columns.length === 0) {
    throw new SchemaError(`CSV has no header row: ${path}`);
  }
  return { columns, rows: parsed.data };
}

/** Assert every needed column exists, naming the first one missing. */
export function requireColumns(table: Table, needed: string[], kind: string): void {
  for (const col of needed) {
    if (!table.columns.includes(col)) {
      throw new SchemaError(`${kind} input is missing column "${col}"`);
    }
  }
}

/** Raw cell strings for the given columns, in row order. */
export function cells(table: Table, cols: string[]): string[][] {
  return table.rows.map((row) => cols.map((c) => row[c] ?? ""));
}

/** Numeric view of one cell; plotting needs coordinates, not new values. */
export function num(row: Record<string, string>, col: string): number {
  const v = Number(row[col]);
  if (!Number.isFinite(v)) {
    throw new SchemaError(`column "${col}" has non-numeric value "${row[col]}"`);
  }
  return v;
}
