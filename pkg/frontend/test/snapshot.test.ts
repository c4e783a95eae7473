import { describe, expect, it } from "vitest";
import { SchemaError } from "../src/errors.js";
import { renderSnapshot } from "../src/snapshot.js";
import { readFixture, readGolden } from "./helpers.js";

const layout = readFixture("layout.csv");
const N = 22;

describe("renderSnapshot", () => {
  it("matches the golden figure byte for byte", () => {
    // same row the CLI golden used: the last frame of the trace fixture
    const trace = readFixture("trace.csv");
    const rows = trace.trim().split("\n");
    const last = rows[rows.length - 1].split(",");
    const mZ = last.slice(1).map(Number);
    const svg = renderSnapshot(layout, mZ, `t = ${Number(last[0]).toFixed(3)} ns`);
    expect(svg).toBe(readGolden("snapshot.svg"));
  });

  it("draws one disc per magnet", () => {
    const svg = renderSnapshot(layout, new Array(N).fill(0));
    expect(svg.match(/class="disc/g)).toHaveLength(N);
    expect(svg.match(/class="disc input"/g)).toHaveLength(2);
  });

  it("renders a fully up array as the lightest shade", () => {
    const svg = renderSnapshot(layout, new Array(N).fill(1));
    const fills = [...svg.matchAll(/<circle [^>]*fill="(#\w{6})"/g)].map((m) => m[1]);
    expect(fills).toHaveLength(N);
    expect(new Set(fills)).toEqual(new Set(["#ffffff"]));
  });

  it("renders a fully down array as the darkest shade", () => {
    const svg = renderSnapshot(layout, new Array(N).fill(-1));
    const fills = [...svg.matchAll(/<circle [^>]*fill="(#\w{6})"/g)].map((m) => m[1]);
    expect(new Set(fills)).toEqual(new Set(["#000000"]));
  });

  it("rejects a value vector of the wrong length", () => {
    expect(() => renderSnapshot(layout, new Array(N - 1).fill(0))).toThrow(SchemaError);
    expect(() => renderSnapshot(layout, new Array(N - 1).fill(0)))
      .toThrow(/21 m_z values for 22 magnets/);
  });

  it("rejects out-of-range moments", () => {
    const mZ = new Array(N).fill(0);
    mZ[3] = 1.5;
    expect(() => renderSnapshot(layout, mZ)).toThrow(/outside \[-1, 1\]/);
  });

  it("includes the caption only when given", () => {
    const bare = renderSnapshot(layout, new Array(N).fill(0));
    const captioned = renderSnapshot(layout, new Array(N).fill(0), "t = 3 ns");
    expect(captioned).toContain("t = 3 ns");
    expect(bare).not.toContain("t = 3 ns");
    expect(bare).not.toBe(captioned);
  });
});
