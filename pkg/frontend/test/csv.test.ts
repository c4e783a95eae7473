import { describe, expect, it } from "vitest";
import {
  parseLayoutCsv, parseReportJson, parseStatesCsv, parseTraceCsv,
} from "../src/csv.js";
import { SchemaError } from "../src/errors.js";
import { readFixture } from "./helpers.js";

describe("parseStatesCsv", () => {
  const text = readFixture("states.csv");

  it("reads the fixture", () => {
    const f = parseStatesCsv(text);
    expect(f.runHash).toBe("2bc4c5a9612d09ae");
    expect(f.states).toHaveLength(150);
    expect(f.labels).toHaveLength(150);
    expect(f.states[0]).toHaveLength(20);
    expect(new Set(f.labels)).toEqual(new Set([0, 1]));
    for (const row of f.states) {
      for (const v of row) {
        expect(Math.abs(v)).toBeLessThanOrEqual(1);
      }
    }
  });

  it("rejects a file without the run hash line", () => {
    const body = text.split("\n").slice(1).join("\n");
    expect(() => parseStatesCsv(body)).toThrow(SchemaError);
    expect(() => parseStatesCsv(body)).toThrow(/run_hash/);
  });

  it("rejects a malformed hash", () => {
    expect(() => parseStatesCsv("# run_hash=XYZ\n" + text.split("\n").slice(1).join("\n")))
      .toThrow(/malformed run hash/);
  });

  it("rejects a wrong header", () => {
    const lines = text.split("\n");
    lines[1] = lines[1].replace("t_index", "step");
    expect(() => parseStatesCsv(lines.join("\n"))).toThrow(/header/);
  });

  it("rejects a ragged row", () => {
    const lines = text.split("\n");
    lines[5] = lines[5] + ",0.5";
    expect(() => parseStatesCsv(lines.join("\n"))).toThrow(/cells, expected/);
  });

  it("rejects a non-binary label", () => {
    const lines = text.split("\n");
    const cells = lines[2].split(",");
    cells[1] = "2";
    lines[2] = cells.join(",");
    expect(() => parseStatesCsv(lines.join("\n"))).toThrow(/label must be 0 or 1/);
  });

  it("rejects a file with no sample rows", () => {
    const lines = text.split("\n");
    expect(() => parseStatesCsv(lines.slice(0, 2).join("\n"))).toThrow(/no sample rows/);
  });

  it("rejects non-numeric cells", () => {
    const lines = text.split("\n");
    const cells = lines[2].split(",");
    cells[3] = "nope";
    lines[2] = cells.join(",");
    expect(() => parseStatesCsv(lines.join("\n"))).toThrow(/not a finite number/);
  });
});

describe("parseTraceCsv", () => {
  const text = readFixture("trace.csv");

  it("reads the fixture", () => {
    const f = parseTraceCsv(text);
    expect(f.indices).toEqual(Array.from({ length: 22 }, (_, k) => k));
    expect(f.timesNs).toHaveLength(421);
    expect(f.mZ[0]).toHaveLength(22);
    expect(f.timesNs[0]).toBe(0);
    // input magnets are clamped along z at t = 0
    expect(f.mZ[0][0]).toBe(1);
  });

  it("rejects a bad column name", () => {
    expect(() => parseTraceCsv("t_ns,mz7\n0.0,0.5\n1.0,0.4\n")).toThrow(/bad column name/);
  });

  it("rejects a missing time header", () => {
    expect(() => parseTraceCsv("time,m_z_00\n0.0,0.5\n1.0,0.4\n")).toThrow(/must start with t_ns/);
  });

  it("rejects non-monotone time", () => {
    expect(() => parseTraceCsv("t_ns,m_z_00\n0.0,0.5\n2.0,0.4\n1.0,0.3\n"))
      .toThrow(/non-monotone time/);
  });

  it("rejects a single-row trace", () => {
    expect(() => parseTraceCsv("t_ns,m_z_00\n0.0,0.5\n")).toThrow(/at least two rows/);
  });
});

describe("parseLayoutCsv", () => {
  const text = readFixture("layout.csv");

  it("reads the fixture", () => {
    const f = parseLayoutCsv(text);
    expect(f.positions).toHaveLength(22);
    expect(f.inputs).toEqual([0, 21]);
    expect(f.readouts).toHaveLength(20);
  });

  it("rejects an unknown role", () => {
    const records = text.split("\n").filter((l) => l && !l.startsWith("#"));
    const cells = records[3].trim().split(/\s+/);
    cells[3] = "spectator";
    records[3] = cells.join(" ");
    expect(() => parseLayoutCsv(records.join("\n"))).toThrow(/unknown role/);
  });

  it("rejects out-of-order indices", () => {
    const records = text.split("\n").filter((l) => l && !l.startsWith("#"));
    [records[0], records[1]] = [records[1], records[0]];
    expect(() => parseLayoutCsv(records.join("\n"))).toThrow(/in order/);
  });

  it("rejects an empty file", () => {
    expect(() => parseLayoutCsv("# nothing here\n")).toThrow(/no magnet records/);
  });
});

describe("parseReportJson", () => {
  const text = readFixture("report.json");

  it("reads the fixture", () => {
    const f = parseReportJson(text);
    expect(f.runHash).toBe("2bc4c5a9612d09ae");
    expect(f.threshold).toBe(0.5);
    expect(f.samples).toHaveLength(150);
    expect(f.samples[0].bits).toEqual([1, 1]);
  });

  it("rejects invalid JSON", () => {
    expect(() => parseReportJson("{nope")).toThrow(/not valid JSON/);
  });

  it("rejects a report without samples", () => {
    const obj = JSON.parse(text);
    obj.samples = [];
    expect(() => parseReportJson(JSON.stringify(obj))).toThrow(/non-empty/);
  });

  it("rejects a sample with bad bits", () => {
    const obj = JSON.parse(text);
    obj.samples[4].bits = [0, 2];
    expect(() => parseReportJson(JSON.stringify(obj))).toThrow(/bits/);
  });

  it("rejects a missing threshold", () => {
    const obj = JSON.parse(text);
    delete obj.threshold;
    expect(() => parseReportJson(JSON.stringify(obj))).toThrow(/threshold/);
  });
});
