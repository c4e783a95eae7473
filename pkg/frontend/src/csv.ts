/**
 * Parsers for the simulator's artifact files. Each validates the documented
 * schema and throws SchemaError with a diagnostic on any violation; none of
 * them ever writes anything.
 */

import { SchemaError } from "./errors.js";

export interface StatesFile {
  runHash: string;
  labels: number[];
  /** states[sample][feature] */
  states: number[][];
}

export interface TraceFile {
  /** magnet number of each m_z column, from the header names */
  indices: number[];
  timesNs: number[];
  /** mZ[row][column] */
  mZ: number[][];
}

export interface LayoutFile {
  /** [x_m, y_m] per magnet, in file order (index order) */
  positions: Array<[number, number]>;
  inputs: number[];
  readouts: number[];
}

export interface ReportSample {
  t: number;
  value: number;
  bits: [number, number];
  wave: number;
  label: number;
  y_hat: number;
  prediction: number;
}

export interface ReportFile {
  runHash: string;
  threshold: number;
  samples: ReportSample[];
}

function toNumber(cell: string, where: string): number {
  const v = Number(cell);
  if (cell.trim() === "" || !Number.isFinite(v)) {
    throw new SchemaError(`${where}: not a finite number: ${JSON.stringify(cell)}`);
  }
  return v;
}

/** Parse a state-matrix CSV: `# run_hash=...`, header, one row per sample. */
export function parseStatesCsv(text: string): StatesFile {
  const lines = text.split(/\r?\n/).filter((l) => l.length > 0);
  if (lines.length === 0 || !lines[0].startsWith("# run_hash=")) {
    throw new SchemaError("states CSV: missing `# run_hash=` first line");
  }
  const runHash = lines[0].slice("# run_hash=".length).trim();
  if (!/^[0-9a-f]+$/.test(runHash)) {
    throw new SchemaError(`states CSV: malformed run hash ${JSON.stringify(runHash)}`);
  }
  if (lines.length < 2) throw new SchemaError("states CSV: missing header");
  const header = lines[1].split(",");
  const nFeatures = header.length - 3; // t_index, label, x_*.., bias
  if (
    header[0] !== "t_index" || header[1] !== "label" ||
    header[header.length - 1] !== "bias" || nFeatures < 1 ||
    !header.slice(2, -1).every((h, i) => h === `x_${String(i).padStart(2, "0")}`)
  ) {
    throw new SchemaError("states CSV: header must be t_index,label,x_00..,bias");
  }
  if (lines.length < 3) throw new SchemaError("states CSV: no sample rows");

  const labels: number[] = [];
  const states: number[][] = [];
  lines.slice(2).forEach((line, k) => {
    const cells = line.split(",");
    if (cells.length !== header.length) {
      throw new SchemaError(`states CSV row ${k}: ${cells.length} cells, expected ${header.length}`);
    }
    if (toNumber(cells[0], `states CSV row ${k} t_index`) !== k) {
      throw new SchemaError(`states CSV row ${k}: t_index out of order`);
    }
    const label = toNumber(cells[1], `states CSV row ${k} label`);
    if (label !== 0 && label !== 1) {
      throw new SchemaError(`states CSV row ${k}: label must be 0 or 1, got ${cells[1]}`);
    }
    labels.push(label);
    states.push(cells.slice(2, -1).map((c, i) => toNumber(c, `states CSV row ${k} x_${i}`)));
  });
  return { runHash, labels, states };
}

/** Parse a trace CSV: header `t_ns,m_z_NN,...`, strictly increasing time. */
export function parseTraceCsv(text: string): TraceFile {
  const lines = text.split(/\r?\n/).filter((l) => l.length > 0);
  if (lines.length === 0 || !lines[0].startsWith("t_ns,")) {
    throw new SchemaError("trace CSV: header must start with t_ns");
  }
  const header = lines[0].split(",");
  const indices = header.slice(1).map((h) => {
    const m = /^m_z_(\d{2,})$/.exec(h);
    if (!m) throw new SchemaError(`trace CSV: bad column name ${JSON.stringify(h)}`);
    return Number(m[1]);
  });
  if (indices.length === 0) throw new SchemaError("trace CSV: no m_z columns");
  if (lines.length < 3) throw new SchemaError("trace CSV: needs at least two rows");

  const timesNs: number[] = [];
  const mZ: number[][] = [];
  lines.slice(1).forEach((line, k) => {
    const cells = line.split(",");
    if (cells.length !== header.length) {
      throw new SchemaError(`trace CSV row ${k}: ${cells.length} cells, expected ${header.length}`);
    }
    const t = toNumber(cells[0], `trace CSV row ${k} t_ns`);
    if (timesNs.length > 0 && t <= timesNs[timesNs.length - 1]) {
      throw new SchemaError(`trace CSV row ${k}: non-monotone time ${t}`);
    }
    timesNs.push(t);
    mZ.push(cells.slice(1).map((c, i) => toNumber(c, `trace CSV row ${k} m_z_${indices[i]}`)));
  });
  return { indices, timesNs, mZ };
}

/** Parse a layout file: per-magnet records `index x_m y_m role ...`. */
export function parseLayoutCsv(text: string): LayoutFile {
  const lines = text.split(/\r?\n/).filter((l) => l.length > 0);
  const records = lines.filter((l) => !l.startsWith("#"));
  if (records.length === 0) throw new SchemaError("layout file: no magnet records");

  const positions: Array<[number, number]> = [];
  const inputs: number[] = [];
  const readouts: number[] = [];
  records.forEach((line, k) => {
    const cells = line.trim().split(/\s+/);
    if (cells.length < 4) {
      throw new SchemaError(`layout record ${k}: expected index x_m y_m role, got ${JSON.stringify(line)}`);
    }
    if (toNumber(cells[0], `layout record ${k} index`) !== k) {
      throw new SchemaError(`layout record ${k}: indices must be 0..N-1 in order`);
    }
    positions.push([
      toNumber(cells[1], `layout record ${k} x_m`),
      toNumber(cells[2], `layout record ${k} y_m`),
    ]);
    if (cells[3] === "input") inputs.push(k);
    else if (cells[3] === "readout") readouts.push(k);
    else throw new SchemaError(`layout record ${k}: unknown role ${JSON.stringify(cells[3])}`);
  });
  return { positions, inputs, readouts };
}

/** Parse and validate a run report JSON. */
export function parseReportJson(text: string): ReportFile {
  let raw: unknown;
  try {
    raw = JSON.parse(text);
  } catch (e) {
    throw new SchemaError(`report: not valid JSON: ${(e as Error).message}`);
  }
  const obj = raw as Record<string, unknown>;
  if (typeof obj !== "object" || obj === null || typeof obj["run_hash"] !== "string") {
    throw new SchemaError("report: missing run_hash");
  }
  if (typeof obj["threshold"] !== "number") {
    throw new SchemaError("report: missing numeric threshold");
  }
  const samples = obj["samples"];
  if (!Array.isArray(samples) || samples.length === 0) {
    throw new SchemaError("report: samples must be a non-empty array");
  }
  const parsed = samples.map((s, k) => {
    const e = s as Record<string, unknown>;
    for (const field of ["t", "value", "wave", "label", "y_hat", "prediction"]) {
      if (typeof e[field] !== "number") {
        throw new SchemaError(`report sample ${k}: missing numeric ${field}`);
      }
    }
    const bits = e["bits"];
    if (!Array.isArray(bits) || bits.length !== 2 ||
        !bits.every((b) => b === 0 || b === 1)) {
      throw new SchemaError(`report sample ${k}: bits must be two 0/1 entries`);
    }
    return {
      t: e["t"] as number,
      value: e["value"] as number,
      bits: [bits[0], bits[1]] as [number, number],
      wave: e["wave"] as number,
      label: e["label"] as number,
      y_hat: e["y_hat"] as number,
      prediction: e["prediction"] as number,
    };
  });
  return { runHash: obj["run_hash"], threshold: obj["threshold"], samples: parsed };
}
