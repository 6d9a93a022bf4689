/** SVG scatter overlay: before/after positions with displacement arrows. */

import { ScatterData } from "./model.js";

const WIDTH = 460;
const HEIGHT = 360;
const PAD = 40;

function extent(values: number[]): [number, number] {
  let lo = Math.min(...values);
  let hi = Math.max(...values);
  if (!isFinite(lo) || !isFinite(hi)) return [-1, 1];
  if (hi - lo < 1e-12) {
    lo -= 1;
    hi += 1;
  }
  return [lo, hi];
}

export function renderScatterSvg(data: ScatterData): string {
  const xs = [...data.before, ...data.after].map((p) => p[0]);
  const ys = [...data.before, ...data.after].map((p) => p[1]);
  const [x0, x1] = extent(xs);
  const [y0, y1] = extent(ys);
  const sx = (x: number) => PAD + ((x - x0) / (x1 - x0)) * (WIDTH - 2 * PAD);
  const sy = (y: number) => HEIGHT - PAD - ((y - y0) / (y1 - y0)) * (HEIGHT - 2 * PAD);

  const parts: string[] = [];
  parts.push(
    `<svg viewBox="0 0 ${WIDTH} ${HEIGHT}" xmlns="http://www.w3.org/2000/svg">`,
    `<defs><marker id="arrow" viewBox="0 0 8 8" refX="7" refY="4" ` +
      `markerWidth="6" markerHeight="6" orient="auto-start-reverse">` +
      `<path d="M 0 0 L 8 4 L 0 8 z" fill="#2563eb"/></marker></defs>`,
  );
  data.words.forEach((word, i) => {
    const b = data.before[i];
    const a = data.after[i];
    if (!b || !a) return;
    const [bx, by] = [sx(b[0]), sy(b[1])];
    const [ax, ay] = [sx(a[0]), sy(a[1])];
    if (Math.hypot(ax - bx, ay - by) > 2) {
      parts.push(
        `<line x1="${bx.toFixed(1)}" y1="${by.toFixed(1)}" x2="${ax.toFixed(1)}" ` +
          `y2="${ay.toFixed(1)}" stroke="#2563eb" stroke-width="1.2" ` +
          `marker-end="url(#arrow)" opacity="0.7"/>`,
      );
    }
    parts.push(
      `<circle cx="${bx.toFixed(1)}" cy="${by.toFixed(1)}" r="4" fill="#9ca3af"/>`,
      `<circle cx="${ax.toFixed(1)}" cy="${ay.toFixed(1)}" r="4" fill="#2563eb"/>`,
      `<text x="${(bx + 6).toFixed(1)}" y="${(by - 6).toFixed(1)}" ` +
        `font-size="11" fill="#374151">${escapeXml(word)}</text>`,
    );
  });
  parts.push("</svg>");
  return parts.join("");
}

function escapeXml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;");
}
