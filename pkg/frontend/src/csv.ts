/** Minimal CSV handling for the experiment-results contract.
 *
 * The producing side writes plain comma-separated rows without quoting
 * (all fields are identifiers or numbers), so a simple split is exact.
 */

import * as fs from "node:fs";

export interface Table {
  columns: string[];
  rows: Record<string, string>[];
}

export function parseCsv(text: string): Table {
  const lines = text
    .split(/\r?\n/)
    .map((l) => l.trim())
    .filter((l) => l.length > 0);
  if (lines.length === 0) {
    return { columns: [], rows: [] };
  }
  const columns = lines[0].split(",").map((c) => c.trim());
  const rows = lines.slice(1).map((line) => {
    const cells = line.split(",");
    const row: Record<string, string> = {};
    columns.forEach((col, i) => {
      row[col] = (cells[i] ?? "").trim();
    });
    return row;
  });
  return { columns, rows };
}

export function readCsv(path: string): Table {
  return parseCsv(fs.readFileSync(path, "utf-8"));
}

/** Throws with the missing column names when the contract is violated. */
export function requireColumns(table: Table, needed: string[], context: string): void {
  if (table.columns.length === 0 && table.rows.length === 0) {
    return; // empty input renders as an annotated empty figure
  }
  const missing = needed.filter((c) => !table.columns.includes(c));
  if (missing.length > 0) {
    throw new Error(
      `${context}: input CSV is missing required column(s): ${missing.join(", ")}`
    );
  }
}

export function num(row: Record<string, string>, col: string): number {
  return Number(row[col]);
}
