/**
 * Minimal deterministic SVG assembly. Every number is formatted through
 * fmt() so that re-rendering the same inputs yields byte-identical output.
 */

export function fmt(v: number, digits = 2): string {
  const s = v.toFixed(digits);
  // normalize -0.00 so equal geometry always prints the same bytes
  return s === (-0).toFixed(digits) && Math.sign(1 / v) < 0 ? (0).toFixed(digits) : s;
}

/** Map m_z in [-1, 1] to a grayscale hex fill, lighter toward +1. */
export function grayscale(mz: number): string {
  const clamped = Math.max(-1, Math.min(1, mz));
  const level = Math.round(((clamped + 1) / 2) * 255);
  const hex = level.toString(16).padStart(2, "0");
  return `#${hex}${hex}${hex}`;
}

export function escapeText(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export function svgDocument(width: number, height: number, body: string[]): string {
  const head =
    `<svg xmlns="http://www.w3.org/2000/svg" width="${fmt(width, 0)}" ` +
    `height="${fmt(height, 0)}" viewBox="0 0 ${fmt(width, 0)} ${fmt(height, 0)}">`;
  return [head, ...body, "</svg>", ""].join("\n");
}

export function rect(
  x: number, y: number, w: number, h: number, fill: string, extra = "",
): string {
  return `<rect x="${fmt(x)}" y="${fmt(y)}" width="${fmt(w)}" height="${fmt(h)}" fill="${fill}"${extra}/>`;
}

export function line(
  x1: number, y1: number, x2: number, y2: number, stroke: string, extra = "",
): string {
  return `<line x1="${fmt(x1)}" y1="${fmt(y1)}" x2="${fmt(x2)}" y2="${fmt(y2)}" stroke="${stroke}"${extra}/>`;
}

export function circle(
  cx: number, cy: number, r: number, fill: string, extra = "",
): string {
  return `<circle cx="${fmt(cx)}" cy="${fmt(cy)}" r="${fmt(r)}" fill="${fill}"${extra}/>`;
}

export function polyline(points: Array<[number, number]>, stroke: string, extra = ""): string {
  const pts = points.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(" ");
  return `<polyline points="${pts}" fill="none" stroke="${stroke}"${extra}/>`;
}

export function text(
  x: number, y: number, content: string, extra = "",
): string {
  return `<text x="${fmt(x)}" y="${fmt(y)}"${extra}>${escapeText(content)}</text>`;
}
