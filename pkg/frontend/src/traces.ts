/**
 * Time-trace figure: m_z(t) polylines for a chosen set of magnets on a
 * fixed [-1, 1] axis, so figures from different runs are comparable.
 */

import { parseTraceCsv } from "./csv.js";
import { SchemaError } from "./errors.js";
import { fmt, line, polyline, svgDocument, text } from "./svg.js";

const WIDTH = 640;
const PLOT_H = 280;
const MARGIN_LEFT = 46;
const MARGIN_RIGHT = 12;
const MARGIN_TOP = 14;
const MARGIN_BOTTOM = 34;
const FONT = ` font-family="monospace" font-size="9" fill="#000000"`;

/** fixed palette, cycled when more curves are requested */
export const TRACE_COLORS = [
  "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
  "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
];

/**
 * Render m_z(t) curves from a trace CSV. `indices` selects magnets by their
 * column names; omitted means every column in the file.
 */
export function renderTraces(traceText: string, indices?: number[]): string {
  const trace = parseTraceCsv(traceText);
  const wanted = indices === undefined ? trace.indices : indices;
  if (wanted.length === 0) throw new SchemaError("traces: no magnets selected");
  const columns = wanted.map((idx) => {
    const col = trace.indices.indexOf(idx);
    if (col < 0) {
      throw new SchemaError(`traces: magnet ${idx} not in file (has ${trace.indices.join(",")})`);
    }
    return col;
  });

  const t0 = trace.timesNs[0];
  const t1 = trace.timesNs[trace.timesNs.length - 1];
  const plotW = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
  const height = MARGIN_TOP + PLOT_H + MARGIN_BOTTOM;
  const xOf = (t: number) => MARGIN_LEFT + ((t - t0) / (t1 - t0)) * plotW;
  // y axis is always [-1, 1] regardless of the data
  const yOf = (mz: number) => MARGIN_TOP + ((1 - mz) / 2) * PLOT_H;

  const body: string[] = [];
  body.push(`<rect x="0" y="0" width="${fmt(WIDTH, 0)}" height="${fmt(height, 0)}" fill="#ffffff"/>`);
  body.push(line(MARGIN_LEFT, yOf(0), MARGIN_LEFT + plotW, yOf(0), "#bbbbbb",
    ` stroke-dasharray="3 3"`));
  body.push(line(MARGIN_LEFT, MARGIN_TOP, MARGIN_LEFT, MARGIN_TOP + PLOT_H, "#000000"));
  body.push(line(MARGIN_LEFT, MARGIN_TOP + PLOT_H, MARGIN_LEFT + plotW,
    MARGIN_TOP + PLOT_H, "#000000"));
  for (const tick of [-1, 0, 1]) {
    body.push(text(8, yOf(tick) + 3, fmt(tick, 1), FONT));
  }
  body.push(text(MARGIN_LEFT, height - 8, `t = ${fmt(t0, 2)} ns`, FONT));
  body.push(text(MARGIN_LEFT + plotW - 80, height - 8, `t = ${fmt(t1, 2)} ns`, FONT));
  body.push(text(8, MARGIN_TOP - 2, "m_z", FONT));

  columns.forEach((col, j) => {
    const color = TRACE_COLORS[j % TRACE_COLORS.length];
    const pts: Array<[number, number]> = trace.timesNs.map((t, row) => [
      xOf(t), yOf(Math.max(-1, Math.min(1, trace.mZ[row][col]))),
    ]);
    body.push(polyline(pts, color, ` stroke-width="1.2" class="trace"`));
    body.push(text(MARGIN_LEFT + plotW - 60, MARGIN_TOP + 10 + j * 11,
      `m_z_${String(wanted[j]).padStart(2, "0")}`,
      ` font-family="monospace" font-size="9" fill="${color}"`));
  });

  return svgDocument(WIDTH, height, body);
}
