/** Parsing and validation of the sweep CSV produced by `fogbank sweep`. */

import Papa from "papaparse";

export const COLUMNS = [
  "variant",
  "strategy",
  "workload_mips",
  "status",
  "total_w",
  "processing_w",
  "networking_w",
  "alloc_cc",
  "alloc_lf",
  "alloc_nf",
  "alloc_vf1",
  "alloc_vf2",
  "alloc_vf3",
  "alloc_vf4",
  "bb_nodes",
  "runtime_ms",
] as const;

const TEXT_COLUMNS = new Set(["variant", "strategy", "status"]);

export interface SweepRow {
  variant: string;
  strategy: string;
  workload_mips: number;
  status: string;
  total_w: number;
  processing_w: number;
  networking_w: number;
  alloc_cc: number;
  alloc_lf: number;
  alloc_nf: number;
  alloc_vf1: number;
  alloc_vf2: number;
  alloc_vf3: number;
  alloc_vf4: number;
  bb_nodes: number;
  runtime_ms: number;
}

/** Raised when a CSV does not match the sweep schema; the message names the
 * offending columns or cell. */
export class SchemaError extends Error {}

export function parseSweepCsv(text: string): SweepRow[] {
  const parsed = Papa.parse<string[]>(text.trim(), { skipEmptyLines: true });
  if (parsed.errors.length > 0) {
    throw new SchemaError(`malformed CSV: ${parsed.errors[0]!.message}`);
  }
  const [header, ...records] = parsed.data;
  if (header === undefined) {
    throw new SchemaError("empty CSV: expected a header row");
  }

  const expected = COLUMNS as readonly string[];
  const missing = expected.filter((c) => !header.includes(c));
  const unexpected = header.filter((c) => !expected.includes(c));
  if (missing.length > 0 || unexpected.length > 0) {
    const parts = [];
    if (missing.length > 0) parts.push(`missing columns: ${missing.join(", ")}`);
    if (unexpected.length > 0) parts.push(`unexpected columns: ${unexpected.join(", ")}`);
    throw new SchemaError(`sweep CSV header mismatch — ${parts.join("; ")}`);
  }
  if (header.join(",") !== expected.join(",")) {
    throw new SchemaError(
      `sweep CSV columns out of order — expected ${expected.join(",")}`,
    );
  }

  return records.map((record, i) => {
    if (record.length !== expected.length) {
      throw new SchemaError(
        `row ${i + 2}: expected ${expected.length} fields, got ${record.length}`,
      );
    }
    const row: Record<string, string | number> = {};
    for (const [j, column] of expected.entries()) {
      const cell = record[j]!;
      if (TEXT_COLUMNS.has(column)) {
        row[column] = cell;
      } else {
        const value = Number(cell);
        if (!Number.isFinite(value)) {
          throw new SchemaError(`row ${i + 2}, column ${column}: not a number: ${cell}`);
        }
        row[column] = value;
      }
    }
    return row as unknown as SweepRow;
  });
}
