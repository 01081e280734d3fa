/**
 * Minimal deterministic SVG chart primitives: linear/log scales, nice
 * ticks, framed panels with closures mapping data to pixels. No
 * timestamps or random ids anywhere, so identical inputs give
 * byte-identical documents.
 */

export const PALETTE = [
  "#4361ee",
  "#e63946",
  "#2d6a4f",
  "#f77f00",
  "#7209b7",
  "#0096c7",
  "#b5838d",
  "#555555",
];

export function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

/** Pixel coordinate: one decimal, stable across platforms. */
export function px(v: number): string {
  return v.toFixed(1);
}

/** Compact tick label: 3 significant digits, plain or e-notation. */
export function fmtTick(v: number): string {
  if (v === 0) return "0";
  if (!Number.isFinite(v)) return String(v);
  const a = Math.abs(v);
  if (a >= 1e4 || a < 1e-3) {
    const e = Math.floor(Math.log10(a));
    const m = v / Math.pow(10, e);
    const ms = Number(m.toPrecision(3));
    return ms === 1 ? `1e${e}` : `${ms}e${e}`;
  }
  return String(Number(v.toPrecision(3)));
}

/** Multiples of pi rendered as '0', '0.4pi', 'pi'. */
export function fmtAngle(theta: number): string {
  const f = theta / Math.PI;
  if (Math.abs(f) < 1e-9) return "0";
  const r = Number(f.toFixed(3));
  if (r === 1) return "pi";
  if (r === -1) return "-pi";
  return `${r}pi`;
}

export function niceTicks(lo: number, hi: number, count = 5): number[] {
  const range = hi - lo || Math.abs(hi) || 1;
  const rough = range / count;
  const mag = Math.pow(10, Math.floor(Math.log10(rough)));
  const step = [1, 2, 5, 10].map((m) => m * mag).find((s) => s >= rough) ?? rough;
  const out: number[] = [];
  for (let v = Math.ceil(lo / step) * step; v <= hi + step * 1e-9; v += step) {
    out.push(Math.abs(v) < step * 1e-6 ? 0 : v);
  }
  return out;
}

/** Decade ticks inside [lo, hi], thinned to at most eight. */
export function logTicks(lo: number, hi: number): number[] {
  const k0 = Math.ceil(Math.log10(lo) - 1e-9);
  const k1 = Math.floor(Math.log10(hi) + 1e-9);
  if (k1 < k0) return niceTicks(lo, hi, 4).filter((v) => v > 0);
  const step = Math.max(1, Math.ceil((k1 - k0 + 1) / 8));
  const out: number[] = [];
  for (let k = k0; k <= k1; k += step) out.push(Math.pow(10, k));
  return out;
}

export function extent(vals: number[]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of vals) {
    if (!Number.isFinite(v)) continue;
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  if (lo > hi) return [0, 1];
  return [lo, hi];
}

export function padLin([lo, hi]: [number, number], f = 0.06): [number, number] {
  const span = hi - lo || Math.abs(hi) || 1;
  return [lo - f * span, hi + f * span];
}

export function padLog([lo, hi]: [number, number], f = 1.5): [number, number] {
  return [lo / f, hi * f];
}

/** Positive values only, for log axes; non-positive entries are dropped. */
export function positives(vals: number[]): number[] {
  return vals.filter((v) => Number.isFinite(v) && v > 0);
}

/** Linear 0..1 position of t between two RGB hex stops. */
function lerpHex(a: string, b: string, t: number): string {
  const c = (h: string, i: number) => parseInt(h.slice(1 + 2 * i, 3 + 2 * i), 16);
  const mix = (i: number) => Math.round(c(a, i) + (c(b, i) - c(a, i)) * t);
  return `#${[0, 1, 2].map((i) => mix(i).toString(16).padStart(2, "0")).join("")}`;
}

/** Dark-to-bright ramp for magnitude fields, t in [0, 1]. */
export function heatColor(t: number): string {
  const u = Math.min(1, Math.max(0, t));
  return u < 0.5 ? lerpHex("#10002b", "#7209b7", u * 2) : lerpHex("#7209b7", "#ffbe0b", u * 2 - 1);
}

/** Blue (-1) through grey (0) to red (+1) for signed fields. */
export function signColor(t: number): string {
  const u = Math.min(1, Math.max(-1, t));
  return u < 0 ? lerpHex("#999999", "#4361ee", -u) : lerpHex("#999999", "#e63946", u);
}

export interface AxisSpec {
  lo: number;
  hi: number;
  log?: boolean;
  label?: string;
  /** Explicit tick positions; default nice/decade ticks. */
  ticks?: number[];
  tickFmt?: (v: number) => string;
}

export interface Box {
  x: number;
  y: number;
  w: number;
  h: number;
}

export interface Panel {
  box: Box;
  xOf: (v: number) => number;
  yOf: (v: number) => number;
  clip: string;
  /** clipPath definition; include once inside <defs>. */
  defs: string;
  frame(): string;
  polyline(xs: number[], ys: number[], opts?: StrokeOpts): string;
  circles(xs: number[], ys: number[], color: string, r?: number): string;
  vline(x: number, color: string, dash?: string): string;
  hline(y: number, color: string, dash?: string): string;
}

export interface StrokeOpts {
  color?: string;
  width?: number;
  opacity?: number;
  dash?: string;
}

function scaleOf(a: AxisSpec, outLo: number, outHi: number): (v: number) => number {
  if (a.log) {
    const l0 = Math.log10(a.lo);
    const l1 = Math.log10(a.hi);
    return (v) => outLo + ((Math.log10(Math.max(v, Number.MIN_VALUE)) - l0) / (l1 - l0 || 1)) * (outHi - outLo);
  }
  return (v) => outLo + ((v - a.lo) / (a.hi - a.lo || 1)) * (outHi - outLo);
}

function axisTicks(a: AxisSpec): number[] {
  if (a.ticks) return a.ticks;
  return a.log ? logTicks(a.lo, a.hi) : niceTicks(a.lo, a.hi, 5);
}

export function makePanel(box: Box, xa: AxisSpec, ya: AxisSpec, clipId: string): Panel {
  const xOf = scaleOf(xa, box.x, box.x + box.w);
  const yOf = scaleOf(ya, box.y + box.h, box.y);
  const clip = `clip-path="url(#${clipId})"`;
  const defs = `<clipPath id="${clipId}"><rect x="${px(box.x)}" y="${px(box.y)}" width="${px(box.w)}" height="${px(box.h)}"/></clipPath>`;
  const xFmt = xa.tickFmt ?? fmtTick;
  const yFmt = ya.tickFmt ?? fmtTick;

  function frame(): string {
    let s = "";
    const yTicks = axisTicks(ya).filter((v) => v >= ya.lo - 1e-12 && v <= ya.hi + 1e-12);
    const xTicks = axisTicks(xa).filter((v) => v >= xa.lo - 1e-12 && v <= xa.hi + 1e-12);
    for (const v of yTicks) {
      const y = yOf(v);
      s += `<line x1="${px(box.x)}" y1="${px(y)}" x2="${px(box.x + box.w)}" y2="${px(y)}" stroke="#eee" stroke-width="0.5"/>\n`;
    }
    s += `<rect x="${px(box.x)}" y="${px(box.y)}" width="${px(box.w)}" height="${px(box.h)}" fill="none" stroke="#333" stroke-width="0.7"/>\n`;
    for (const v of xTicks) {
      const x = xOf(v);
      s += `<line x1="${px(x)}" y1="${px(box.y + box.h)}" x2="${px(x)}" y2="${px(box.y + box.h + 3)}" stroke="#333" stroke-width="0.5"/>\n`;
      s += `<text x="${px(x)}" y="${px(box.y + box.h + 12)}" text-anchor="middle" font-size="7" fill="#555">${esc(xFmt(v))}</text>\n`;
    }
    for (const v of yTicks) {
      const y = yOf(v);
      s += `<line x1="${px(box.x - 3)}" y1="${px(y)}" x2="${px(box.x)}" y2="${px(y)}" stroke="#333" stroke-width="0.5"/>\n`;
      s += `<text x="${px(box.x - 5)}" y="${px(y + 2.5)}" text-anchor="end" font-size="7" fill="#555">${esc(yFmt(v))}</text>\n`;
    }
    if (xa.label) {
      s += `<text x="${px(box.x + box.w / 2)}" y="${px(box.y + box.h + 26)}" text-anchor="middle" font-size="8.5" fill="#333">${esc(xa.label)}</text>\n`;
    }
    if (ya.label) {
      const cx = box.x - 38;
      const cy = box.y + box.h / 2;
      s += `<text x="${px(cx)}" y="${px(cy)}" text-anchor="middle" font-size="8.5" fill="#333" transform="rotate(-90,${px(cx)},${px(cy)})">${esc(ya.label)}</text>\n`;
    }
    return s;
  }

  function polyline(xs: number[], ys: number[], opts: StrokeOpts = {}): string {
    const pts: string[] = [];
    for (let i = 0; i < xs.length; i++) {
      const x = xs[i]!;
      const y = ys[i]!;
      if (!Number.isFinite(x) || !Number.isFinite(y)) continue;
      pts.push(`${px(xOf(x))},${px(yOf(y))}`);
    }
    if (pts.length === 0) return "";
    const dash = opts.dash ? ` stroke-dasharray="${opts.dash}"` : "";
    const op = opts.opacity !== undefined ? ` opacity="${opts.opacity}"` : "";
    return `<polyline ${clip} fill="none" stroke="${opts.color ?? "#333"}" stroke-width="${opts.width ?? 1}"${op}${dash} points="${pts.join(" ")}"/>\n`;
  }

  function circles(xs: number[], ys: number[], color: string, r = 2): string {
    let s = "";
    for (let i = 0; i < xs.length; i++) {
      const x = xs[i]!;
      const y = ys[i]!;
      if (!Number.isFinite(x) || !Number.isFinite(y)) continue;
      s += `<circle ${clip} cx="${px(xOf(x))}" cy="${px(yOf(y))}" r="${r}" fill="${color}"/>\n`;
    }
    return s;
  }

  function vline(x: number, color: string, dash = "4,3"): string {
    const p = xOf(x);
    return `<line ${clip} x1="${px(p)}" y1="${px(box.y)}" x2="${px(p)}" y2="${px(box.y + box.h)}" stroke="${color}" stroke-width="0.8" stroke-dasharray="${dash}" opacity="0.8"/>\n`;
  }

  function hline(y: number, color: string, dash = "4,3"): string {
    const p = yOf(y);
    return `<line ${clip} x1="${px(box.x)}" y1="${px(p)}" x2="${px(box.x + box.w)}" y2="${px(p)}" stroke="${color}" stroke-width="0.8" stroke-dasharray="${dash}" opacity="0.8"/>\n`;
  }

  return { box, xOf, yOf, clip, defs, frame, polyline, circles, vline, hline };
}

export interface LegendEntry {
  label: string;
  color: string;
  dash?: string;
}

/** Box legend anchored at the top-right corner of `box`. */
export function legend(box: Box, entries: LegendEntry[]): string {
  if (entries.length === 0) return "";
  const w = Math.max(...entries.map((e) => e.label.length)) * 4.3 + 26;
  const h = entries.length * 11 + 5;
  const x0 = box.x + box.w - w - 4;
  const y0 = box.y + 4;
  let s = `<rect x="${px(x0)}" y="${px(y0)}" width="${px(w)}" height="${px(h)}" rx="2" fill="white" fill-opacity="0.85" stroke="#ddd" stroke-width="0.5"/>\n`;
  entries.forEach((e, i) => {
    const y = y0 + 9 + i * 11;
    const dash = e.dash ? ` stroke-dasharray="${e.dash}"` : "";
    s += `<line x1="${px(x0 + 4)}" y1="${px(y - 2.5)}" x2="${px(x0 + 17)}" y2="${px(y - 2.5)}" stroke="${e.color}" stroke-width="1.4"${dash}/>\n`;
    s += `<text x="${px(x0 + 21)}" y="${px(y)}" font-size="6.5" fill="#444">${esc(e.label)}</text>\n`;
  });
  return s;
}

export function svgDoc(w: number, h: number, defs: string, body: string): string {
  let s = `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${w} ${h}" font-family="Helvetica, Arial, sans-serif">\n`;
  s += `<rect width="${w}" height="${h}" fill="#fff"/>\n`;
  if (defs) s += `<defs>${defs}</defs>\n`;
  s += body;
  s += `</svg>\n`;
  return s;
}

export function title(x: number, y: number, main: string, sub: string): string {
  let s = `<text x="${px(x)}" y="${px(y)}" font-size="10" font-weight="600" fill="#222">${esc(main)}</text>\n`;
  if (sub) s += `<text x="${px(x)}" y="${px(y + 10)}" font-size="7" fill="#888">${esc(sub)}</text>\n`;
  return s;
}
