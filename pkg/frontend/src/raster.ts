/**
 * Benchmark raster figure: class-shaded background, the two input bit rows,
 * a grayscale raster of the readout m_z states, and the decision row with
 * the classifier threshold.
 */

import { parseReportJson, parseStatesCsv } from "./csv.js";
import { RunHashMismatchError, SchemaError } from "./errors.js";
import { circle, fmt, grayscale, line, rect, svgDocument, text } from "./svg.js";

const CELL_W = 6;
const CELL_H = 6;
const BIT_ROW_H = 8;
const DOT_BAND_H = 60;
const GAP = 6;
const MARGIN_LEFT = 60;
const MARGIN_TOP = 20;
const MARGIN_RIGHT = 10;
const MARGIN_BOTTOM = 16;
const Y_HAT_MIN = -0.25;
const Y_HAT_MAX = 1.25;
const TRIANGLE_SHADE = "#d9d9d9";
const SQUARE_SHADE = "#ffffff";
const FONT = ` font-family="monospace" font-size="9" fill="#000000"`;

/**
 * Render the benchmark raster from a report JSON and a state-matrix CSV.
 * The two artifacts must carry the same run hash.
 */
export function renderRaster(reportText: string, statesText: string): string {
  const report = parseReportJson(reportText);
  const states = parseStatesCsv(statesText);
  if (report.runHash !== states.runHash) {
    throw new RunHashMismatchError(
      `report run hash ${report.runHash} != states run hash ${states.runHash}`,
    );
  }
  const n = report.samples.length;
  if (n !== states.states.length) {
    throw new SchemaError(
      `report has ${n} samples but states CSV has ${states.states.length} rows`,
    );
  }
  report.samples.forEach((s, k) => {
    if (s.label !== states.labels[k]) {
      throw new SchemaError(`sample ${k}: report label ${s.label} != states label ${states.labels[k]}`);
    }
  });
  const nFeatures = states.states[0].length;

  const bitsY = MARGIN_TOP;
  const rasterY = bitsY + 2 * BIT_ROW_H + GAP;
  const dotsY = rasterY + nFeatures * CELL_H + GAP;
  const plotBottom = dotsY + DOT_BAND_H;
  const width = MARGIN_LEFT + n * CELL_W + MARGIN_RIGHT;
  const height = plotBottom + MARGIN_BOTTOM;
  const colX = (k: number) => MARGIN_LEFT + k * CELL_W;

  const body: string[] = [];
  body.push(rect(0, 0, width, height, "#ffffff"));

  // one shaded band per contiguous run of equal labels
  let runStart = 0;
  for (let k = 1; k <= n; k++) {
    if (k === n || report.samples[k].label !== report.samples[runStart].label) {
      const shade = report.samples[runStart].label === 0 ? TRIANGLE_SHADE : SQUARE_SHADE;
      body.push(rect(colX(runStart), MARGIN_TOP, (k - runStart) * CELL_W,
        plotBottom - MARGIN_TOP, shade, ` class="class-band"`));
      runStart = k;
    }
  }

  report.samples.forEach((s, k) => {
    s.bits.forEach((bit, b) => {
      if (bit === 1) {
        body.push(rect(colX(k), bitsY + b * BIT_ROW_H, CELL_W, BIT_ROW_H - 1,
          "#333333", ` class="bit"`));
      }
    });
  });

  states.states.forEach((row, k) => {
    row.forEach((v, f) => {
      body.push(rect(colX(k), rasterY + f * CELL_H, CELL_W, CELL_H,
        grayscale(v), ` class="cell"`));
    });
  });

  const yHatToY = (v: number) => {
    const clamped = Math.max(Y_HAT_MIN, Math.min(Y_HAT_MAX, v));
    return dotsY + ((Y_HAT_MAX - clamped) / (Y_HAT_MAX - Y_HAT_MIN)) * DOT_BAND_H;
  };
  const thresholdY = yHatToY(report.threshold);
  body.push(line(MARGIN_LEFT, thresholdY, MARGIN_LEFT + n * CELL_W, thresholdY,
    "#000000", ` stroke-dasharray="4 3" class="threshold"`));
  report.samples.forEach((s, k) => {
    const fill = s.prediction === s.label ? "#000000" : "#d62728";
    body.push(circle(colX(k) + CELL_W / 2, yHatToY(s.y_hat), 2, fill, ` class="dot"`));
  });

  body.push(text(4, bitsY + BIT_ROW_H, "bits", FONT));
  body.push(text(4, rasterY + (nFeatures * CELL_H) / 2, "m_z", FONT));
  body.push(text(4, thresholdY + 3, `y=${fmt(report.threshold, 2)}`, FONT));
  body.push(text(MARGIN_LEFT, plotBottom + 12, `${n} samples, run ${states.runHash}`, FONT));

  return svgDocument(width, height, body);
}
