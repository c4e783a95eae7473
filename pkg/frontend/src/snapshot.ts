/**
 * Array snapshot figure: one disc per magnet at its physical position,
 * grayscale-coded by m_z (lighter toward +z). Input magnets get a heavier
 * outline so the drive sites are visible at a glance.
 */

import { parseLayoutCsv } from "./csv.js";
import { SchemaError } from "./errors.js";
import { circle, fmt, grayscale, rect, svgDocument, text } from "./svg.js";

const CANVAS = 480;
const MARGIN = 40;
const DISC_RADIUS_M = 35e-9;
const FONT_SIZE = 9;

/**
 * Render one moment of the array from a layout file and a vector of m_z
 * values, one per magnet in layout order. `label` is an optional caption,
 * e.g. the sample time.
 */
export function renderSnapshot(layoutText: string, mZ: number[], label?: string): string {
  const layout = parseLayoutCsv(layoutText);
  const n = layout.positions.length;
  if (mZ.length !== n) {
    throw new SchemaError(`snapshot: ${mZ.length} m_z values for ${n} magnets`);
  }
  mZ.forEach((v, k) => {
    if (!Number.isFinite(v) || v < -1 || v > 1) {
      throw new SchemaError(`snapshot: m_z[${k}] = ${v} outside [-1, 1]`);
    }
  });

  const xs = layout.positions.map((p) => p[0]);
  const ys = layout.positions.map((p) => p[1]);
  const xMin = Math.min(...xs);
  const xMax = Math.max(...xs);
  const yMin = Math.min(...ys);
  const yMax = Math.max(...ys);
  const span = Math.max(xMax - xMin, yMax - yMin, 2 * DISC_RADIUS_M);
  const scale = (CANVAS - 2 * MARGIN) / span;
  const height = CANVAS + (label === undefined ? 0 : 18);
  // y grows upward in lab coordinates, downward in SVG
  const xOf = (x: number) => MARGIN + (x - xMin) * scale + (CANVAS - 2 * MARGIN - (xMax - xMin) * scale) / 2;
  const yOf = (y: number) => CANVAS - MARGIN - (y - yMin) * scale - (CANVAS - 2 * MARGIN - (yMax - yMin) * scale) / 2;
  const r = DISC_RADIUS_M * scale;

  const inputSet = new Set(layout.inputs);
  const body: string[] = [];
  body.push(rect(0, 0, CANVAS, height, "#ffffff"));
  layout.positions.forEach(([x, y], k) => {
    const stroke = inputSet.has(k)
      ? ` stroke="#000000" stroke-width="2.5" class="disc input"`
      : ` stroke="#555555" stroke-width="1" class="disc"`;
    body.push(circle(xOf(x), yOf(y), r, grayscale(mZ[k]), stroke));
    body.push(text(xOf(x), yOf(y) - r - 3, String(k),
      ` font-family="monospace" font-size="${FONT_SIZE}" fill="#000000" text-anchor="middle"`));
  });
  if (label !== undefined) {
    body.push(text(MARGIN, CANVAS + 12, label,
      ` font-family="monospace" font-size="${FONT_SIZE}" fill="#000000"`));
  }
  body.push(text(CANVAS - MARGIN, 14, `r = ${fmt(r, 1)} px per ${fmt(DISC_RADIUS_M * 1e9, 0)} nm`,
    ` font-family="monospace" font-size="${FONT_SIZE}" fill="#777777" text-anchor="end"`));

  return svgDocument(CANVAS, height, body);
}
