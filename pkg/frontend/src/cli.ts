/**
 * Command line entry point. Three figure kinds, all reading simulator
 * artifacts and writing a single SVG:
 *
 *   spinres-figures raster   --report report.json --input states.csv --out raster.svg
 *   spinres-figures traces   --input trace.csv [--indices 7,12,15] --out traces.svg
 *   spinres-figures snapshot --layout layout.csv --input trace.csv [--row -1] --out snap.svg
 */

import { readFileSync, writeFileSync } from "node:fs";
import { pathToFileURL } from "node:url";
import { parseTraceCsv } from "./csv.js";
import { SchemaError } from "./errors.js";
import { renderRaster } from "./raster.js";
import { renderSnapshot } from "./snapshot.js";
import { renderTraces } from "./traces.js";

const USAGE = `usage: spinres-figures <raster|traces|snapshot> [flags]
  raster   --report FILE --input STATES_CSV --out SVG
  traces   --input TRACE_CSV [--indices I,J,..] --out SVG
  snapshot --layout FILE --input TRACE_CSV [--row K] --out SVG
`;

class UsageError extends Error {}

const FLAGS: Record<string, { required: string[]; optional: string[] }> = {
  raster: { required: ["report", "input", "out"], optional: [] },
  traces: { required: ["input", "out"], optional: ["indices"] },
  snapshot: { required: ["layout", "input", "out"], optional: ["row"] },
};

function parseArgs(kind: string, argv: string[]): Record<string, string> {
  const spec = FLAGS[kind];
  if (spec === undefined) throw new UsageError(`unknown figure kind ${JSON.stringify(kind)}`);
  const args: Record<string, string> = {};
  for (let i = 0; i < argv.length; i += 2) {
    const token = argv[i];
    if (!token.startsWith("--")) throw new UsageError(`unexpected argument ${JSON.stringify(token)}`);
    const key = token.slice(2);
    if (!spec.required.includes(key) && !spec.optional.includes(key)) {
      throw new UsageError(`unknown flag --${key} for ${kind}`);
    }
    if (i + 1 >= argv.length) throw new UsageError(`flag --${key} needs a value`);
    args[key] = argv[i + 1];
  }
  for (const key of spec.required) {
    if (!(key in args)) throw new UsageError(`${kind} requires --${key}`);
  }
  return args;
}

function parseIndices(raw: string): number[] {
  const parts = raw.split(",").map((p) => p.trim());
  const out = parts.map((p) => {
    if (!/^\d+$/.test(p)) throw new UsageError(`--indices must be comma-separated integers, got ${JSON.stringify(raw)}`);
    return Number(p);
  });
  return out;
}

/** Pick one trace row and reorder its columns into layout index order. */
function snapshotRow(
  trace: ReturnType<typeof parseTraceCsv>, rowArg: string | undefined,
): { row: number; mZ: number[] } {
  let row = rowArg === undefined ? -1 : Number(rowArg);
  if (!Number.isInteger(row)) {
    throw new UsageError(`--row must be an integer, got ${JSON.stringify(rowArg)}`);
  }
  if (row < 0) row += trace.mZ.length;
  if (row < 0 || row >= trace.mZ.length) {
    throw new SchemaError(`snapshot: row ${rowArg} out of range for ${trace.mZ.length} trace rows`);
  }
  const mZ: number[] = [];
  for (let k = 0; k < trace.indices.length; k++) {
    const col = trace.indices.indexOf(k);
    if (col < 0) throw new SchemaError(`snapshot: trace has no column for magnet ${k}`);
    mZ.push(trace.mZ[row][col]);
  }
  return { row, mZ };
}

export function run(argv: string[]): number {
  if (argv.length === 0) {
    process.stderr.write(USAGE);
    return 2;
  }
  try {
    const kind = argv[0];
    const args = parseArgs(kind, argv.slice(1));
    let svg: string;
    if (kind === "raster") {
      svg = renderRaster(readFileSync(args.report, "utf8"), readFileSync(args.input, "utf8"));
    } else if (kind === "traces") {
      const indices = "indices" in args ? parseIndices(args.indices) : undefined;
      svg = renderTraces(readFileSync(args.input, "utf8"), indices);
    } else {
      const trace = parseTraceCsv(readFileSync(args.input, "utf8"));
      const { row, mZ } = snapshotRow(trace, args.row);
      svg = renderSnapshot(readFileSync(args.layout, "utf8"), mZ,
        `t = ${trace.timesNs[row].toFixed(3)} ns`);
    }
    writeFileSync(args.out, svg, "utf8");
    process.stdout.write(`wrote ${args.out}\n`);
    return 0;
  } catch (e) {
    const err = e as Error;
    if (err instanceof UsageError) {
      process.stderr.write(`${USAGE}error: ${err.message}\n`);
      return 2;
    }
    const name = err.name === "Error" ? err.constructor.name : err.name;
    process.stderr.write(`error [${name}]: ${err.message}\n`);
    return 1;
  }
}

const invoked = process.argv[1] !== undefined &&
  import.meta.url === pathToFileURL(process.argv[1]).href;
if (invoked) {
  process.exit(run(process.argv.slice(2)));
}
