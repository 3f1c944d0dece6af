/** Command line driver: render all figures from a sweep CSV.
 *
 * Usage: node dist/cli.js --csv ../data/default_sweep.csv --outdir out
 */

import { mkdirSync, readFileSync, writeFileSync } from "node:fs";
import { join } from "node:path";
import { parseArgs } from "node:util";

import { SchemaError, parseSweepCsv } from "./csv.js";
import { renderAll } from "./figures.js";

export function main(argv: string[]): number {
  let args;
  try {
    args = parseArgs({
      args: argv,
      options: {
        csv: { type: "string" },
        outdir: { type: "string", default: "out" },
      },
    });
  } catch (err) {
    process.stderr.write(`usage error: ${(err as Error).message}\n`);
    return 2;
  }
  const { csv, outdir } = args.values;
  if (csv === undefined) {
    process.stderr.write("usage error: --csv <sweep.csv> is required\n");
    return 2;
  }

  let rows;
  try {
    rows = parseSweepCsv(readFileSync(csv, "utf8"));
  } catch (err) {
    if (err instanceof SchemaError) {
      process.stderr.write(`schema error: ${err.message}\n`);
      return 1;
    }
    process.stderr.write(`cannot read ${csv}: ${(err as Error).message}\n`);
    return 1;
  }

  mkdirSync(outdir!, { recursive: true });
  for (const [name, svg] of renderAll(rows)) {
    const path = join(outdir!, name);
    writeFileSync(path, svg);
    process.stdout.write(`wrote ${path}\n`);
  }
  return 0;
}

if (process.argv[1] && process.argv[1].endsWith("cli.js")) {
  process.exit(main(process.argv.slice(2)));
}
