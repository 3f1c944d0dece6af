import { readFileSync } from "node:fs";
import { join } from "node:path";

import { describe, expect, it } from "vitest";

import { COLUMNS, SchemaError, parseSweepCsv } from "../src/csv.js";

const DEFAULT_CSV = readFileSync(
  join(__dirname, "..", "..", "data", "default_sweep.csv"),
  "utf8",
);

describe("parseSweepCsv", () => {
  it("parses the default sweep into 80 typed rows", () => {
    const rows = parseSweepCsv(DEFAULT_CSV);
    expect(rows).toHaveLength(80);
    const first = rows[0]!;
    expect(first.variant).toBe("CCOnly");
    expect(first.strategy).toBe("Single");
    expect(first.workload_mips).toBe(500);
    expect(typeof first.total_w).toBe("number");
    for (const row of rows) {
      expect(row.status).toBe("Optimal");
      expect(row.total_w).toBeGreaterThan(0);
    }
  });

  it("names missing columns in the error", () => {
    const lines = DEFAULT_CSV.split("\n");
    const header = lines[0]!.split(",").filter((c) => c !== "total_w");
    const doctored = [header.join(","), ...lines.slice(1)].join("\n");
    expect(() => parseSweepCsv(doctored)).toThrowError(SchemaError);
    expect(() => parseSweepCsv(doctored)).toThrowError(/missing columns: total_w/);
  });

  it("names unexpected columns in the error", () => {
    const lines = DEFAULT_CSV.split("\n");
    const doctored = [lines[0] + ",surprise", ...lines.slice(1)].join("\n");
    expect(() => parseSweepCsv(doctored)).toThrowError(/unexpected columns: surprise/);
  });

  it("rejects out-of-order columns", () => {
    const header = [...COLUMNS].reverse().join(",");
    const row = [...COLUMNS].map((c, i) =>
      ["variant", "strategy", "status"].includes(c) ? "x" : String(i),
    );
    expect(() => parseSweepCsv(`${header}\n${row.reverse().join(",")}`)).toThrowError(
      /out of order/,
    );
  });

  it("rejects non-numeric cells with position info", () => {
    const lines = DEFAULT_CSV.split("\n");
    const cells = lines[1]!.split(",");
    cells[4] = "lots";
    const doctored = [lines[0], cells.join(","), ...lines.slice(2)].join("\n");
    expect(() => parseSweepCsv(doctored)).toThrowError(/row 2, column total_w/);
  });

  it("rejects an empty document", () => {
    expect(() => parseSweepCsv("")).toThrowError(SchemaError);
  });
});
