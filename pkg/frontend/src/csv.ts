/** CSV loading and column validation for simulation outputs. */

import { readFileSync } from "node:fs";
import Papa from "papaparse";

export class CsvValidationError extends Error {
  constructor(
    public readonly file: string,
    public readonly expected: string[],
    public readonly found: string[],
    detail: string,
  ) {
    super(
      `${file}: ${detail} (expected columns [${expected.join(", ")}], ` +
        `found [${found.join(", ")}])`,
    );
    this.name = "CsvValidationError";
  }
}

export interface Table {
  /** Column name -> numeric values, row-aligned. */
  columns: Map<string, number[]>;
  rowCount: number;
}

/** Read a CSV and require the named columns; extra columns are kept. */
export function loadTable(path: string, required: string[]): Table {
  let text: string;
  try {
    text = readFileSync(path, "utf-8");
  } catch {
    throw new CsvValidationError(path, required, [], "file missing or unreadable");
  }
  const parsed = Papa.parse<string[]>(text.trim(), { skipEmptyLines: true });
  const rows = parsed.data;
  if (rows.length === 0) {
    throw new CsvValidationError(path, required, [], "empty CSV");
  }
  const header = rows[0].map((h) => h.trim());
  const missing = required.filter((c) => !header.includes(c));
  if (missing.length > 0) {
    throw new CsvValidationError(
      path,
      required,
      header,
      `missing columns [${missing.join(", ")}]`,
    );
  }
  if (rows.length === 1) {
    throw new CsvValidationError(path, required, header, "no data rows");
  }
  const columns = new Map<string, number[]>(header.map((h) => [h, []]));
  for (const row of rows.slice(1)) {
    header.forEach((h, i) => {
      const value = Number(row[i]);
      if (!Number.isFinite(value)) {
        throw new CsvValidationError(path, required, header, `non-numeric cell '${row[i]}' in column ${h}`);
      }
      columns.get(h)!.push(value);
    });
  }
  return { columns, rowCount: rows.length - 1 };
}

export function column(table: Table, name: string): number[] {
  const values = table.columns.get(name);
  if (values === undefined) {
    throw new Error(`internal: column ${name} not loaded`);
  }
  return values;
}
