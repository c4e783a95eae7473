import { mkdtempSync, readFileSync, rmSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { fileURLToPath } from "node:url";
import { afterAll, describe, expect, it } from "vitest";
import { run } from "../src/cli.js";
import { readGolden } from "./helpers.js";

const fixturesDir = fileURLToPath(new URL("../fixtures", import.meta.url));
const fixture = (name: string) => join(fixturesDir, name);
const work = mkdtempSync(join(tmpdir(), "spinres-figures-"));
afterAll(() => rmSync(work, { recursive: true, force: true }));

describe("cli run()", () => {
  it("renders the raster golden", () => {
    const out = join(work, "raster.svg");
    const code = run([
      "raster", "--report", fixture("report.json"),
      "--input", fixture("states.csv"), "--out", out,
    ]);
    expect(code).toBe(0);
    expect(readFileSync(out, "utf8")).toBe(readGolden("raster.svg"));
  });

  it("renders the traces golden", () => {
    const out = join(work, "traces.svg");
    const code = run([
      "traces", "--input", fixture("trace.csv"), "--indices", "7,12,15", "--out", out,
    ]);
    expect(code).toBe(0);
    expect(readFileSync(out, "utf8")).toBe(readGolden("traces.svg"));
  });

  it("renders the snapshot golden from the last trace row", () => {
    const out = join(work, "snapshot.svg");
    const code = run([
      "snapshot", "--layout", fixture("layout.csv"),
      "--input", fixture("trace.csv"), "--out", out,
    ]);
    expect(code).toBe(0);
    expect(readFileSync(out, "utf8")).toBe(readGolden("snapshot.svg"));
  });

  it("accepts an explicit snapshot row", () => {
    const out = join(work, "snapshot0.svg");
    const code = run([
      "snapshot", "--layout", fixture("layout.csv"),
      "--input", fixture("trace.csv"), "--row", "0", "--out", out,
    ]);
    expect(code).toBe(0);
    expect(readFileSync(out, "utf8")).toContain("t = 0.000 ns");
  });

  it("fails with usage code on a missing required flag", () => {
    expect(run(["raster", "--out", join(work, "x.svg")])).toBe(2);
    expect(run(["nonsense"])).toBe(2);
    expect(run([])).toBe(2);
  });

  it("fails with usage code on malformed indices", () => {
    expect(run([
      "traces", "--input", fixture("trace.csv"),
      "--indices", "7,twelve", "--out", join(work, "x.svg"),
    ])).toBe(2);
  });

  it("fails with code 1 on a run hash mismatch", () => {
    const tampered = join(work, "states-tampered.csv");
    const text = readFileSync(fixture("states.csv"), "utf8")
      .replace(/^# run_hash=.*$/m, "# run_hash=0123456789abcdef");
    writeFileSync(tampered, text, "utf8");
    expect(run([
      "raster", "--report", fixture("report.json"),
      "--input", tampered, "--out", join(work, "x.svg"),
    ])).toBe(1);
  });

  it("fails with code 1 on an out-of-range snapshot row", () => {
    expect(run([
      "snapshot", "--layout", fixture("layout.csv"),
      "--input", fixture("trace.csv"), "--row", "100000",
      "--out", join(work, "x.svg"),
    ])).toBe(1);
  });

  it("fails with code 1 on an unreadable input file", () => {
    expect(run([
      "traces", "--input", join(work, "missing.csv"), "--out", join(work, "x.svg"),
    ])).toBe(1);
  });
});
