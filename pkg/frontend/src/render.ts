/**
 * One SVG renderer per result kind:
 *
 *   counts_vs_jp        count staircases vs coupling, one curve per angle, log-x
 *   maxim_heatmap       max Im E over the (angle, coupling) plane
 *   threshold_vs_L      onset coupling vs ladder length, log-y
 *   spectrum_vs_jp      Im-spectrum fan with envelope, derivative inset,
 *                       and edge-correlation overlay
 *   quench              stacked C(t) and P(t) panels on log-t
 *   im_dos              imaginary-energy histograms
 *   symmetry_residuals  per-term residuals vs angle, log-y
 *   commutator_check    commutation residuals vs angle, log-y
 *   perturbation_check  abs error per check, grouped by angle, log-y
 *
 * Every renderer accepts one or more parsed tables (curves are keyed by
 * the table label when several files are overlaid) and returns the full
 * SVG text; nothing is written until rendering succeeded.
 */

import { readFile, writeFile } from "fs/promises";

import {
  KINDS,
  ResultTable,
  SCHEMAS,
  SchemaError,
  col,
  metaNumber,
  parseResultCsv,
  strCol,
  tableLabel,
  validateTable,
} from "./csv.js";
import {
  AxisSpec,
  Box,
  LegendEntry,
  PALETTE,
  Panel,
  esc,
  extent,
  fmtAngle,
  fmtTick,
  heatColor,
  legend,
  logTicks,
  makePanel,
  padLin,
  padLog,
  positives,
  px,
  signColor,
  svgDoc,
  title,
} from "./svg.js";

export interface PlotSpec {
  kind: string;
  inputs: string[];
  out: string;
  width?: number;
  height?: number;
}

interface Size {
  width: number;
  height: number;
}

type Renderer = (tables: ResultTable[], size: Size) => string;

const MARGIN = { left: 64, right: 18, top: 36, bottom: 42 };

function plotBox(size: Size, right = MARGIN.right): Box {
  return {
    x: MARGIN.left,
    y: MARGIN.top,
    w: size.width - MARGIN.left - right,
    h: size.height - MARGIN.top - MARGIN.bottom,
  };
}

function mean(vals: number[]): number {
  let s = 0;
  for (const v of vals) s += v;
  return vals.length ? s / vals.length : 0;
}

function distinctSorted(vals: number[]): number[] {
  return [...new Set(vals)].sort((a, b) => a - b);
}

/** Row indices grouped by key, insertion-ordered. */
function groupBy(keys: string[]): Map<string, number[]> {
  const m = new Map<string, number[]>();
  keys.forEach((k, i) => {
    const g = m.get(k);
    if (g) g.push(i);
    else m.set(k, [i]);
  });
  return m;
}

/** Short parameter line from the canonical config echo of the first table. */
function subtitleOf(tables: ResultTable[]): string {
  const head = tables[0]!.header;
  const parts: string[] = [];
  const order = ["model.L", "model.N", "model.J", "model.alpha", "model.Jp", "model.U", "model.mu", "model.theta", "model.n_cap"];
  for (const key of order) {
    const v = head[key];
    if (v === undefined) continue;
    const short = key.slice("model.".length);
    parts.push(short === "theta" ? `theta=${fmtAngle(Number(v))}` : `${short}=${v}`);
  }
  if (tables.length > 1) parts.push(`${tables.length} files`);
  return parts.join("  ");
}

/** Log axis when every value is positive, linear otherwise. */
function couplingAxis(vals: number[], label: string): AxisSpec {
  const pos = positives(vals);
  if (pos.length === vals.length && pos.length > 0) {
    const [lo, hi] = padLog(extent(pos), 1.3);
    return { lo, hi, log: true, label };
  }
  const [lo, hi] = padLin(extent(vals));
  return { lo, hi, label };
}

/**
 * Floor for log axes that must show exact zeros: a decade below the
 * smallest positive value. Zero entries are drawn at the floor with an
 * open triangle so they are not mistaken for measurements.
 */
function logFloor(vals: number[]): { floor: number; axis: [number, number] } {
  const pos = positives(vals);
  const lo = pos.length ? Math.min(...pos) : 1e-18;
  const hi = pos.length ? Math.max(...pos) : 1e-12;
  const floor = lo / 10;
  return { floor, axis: padLog([floor, hi], 2) };
}

function triangle(p: Panel, x: number, y: number, color: string): string {
  const cx = p.xOf(x);
  const cy = p.yOf(y);
  return `<path ${p.clip} d="M ${px(cx - 2.6)} ${px(cy - 2.2)} L ${px(cx + 2.6)} ${px(cy - 2.2)} L ${px(cx)} ${px(cy + 2.6)} Z" fill="none" stroke="${color}" stroke-width="0.9"/>\n`;
}

/** Series of (x, residual) on a log-y panel with zero clipping. */
function residualSeries(p: Panel, xs: number[], ys: number[], floor: number, color: string): string {
  const order = xs.map((_, i) => i).sort((a, b) => xs[a]! - xs[b]!);
  const sx = order.map((i) => xs[i]!);
  const sy = order.map((i) => ys[i]!);
  let s = p.polyline(sx, sy.map((v) => Math.max(v, floor)), { color, width: 1 });
  for (let i = 0; i < sx.length; i++) {
    if (sy[i]! > floor) s += p.circles([sx[i]!], [sy[i]!], color, 2);
    else s += triangle(p, sx[i]!, floor, color);
  }
  return s;
}

function clipNote(size: Size, floor: number, clipped: boolean): string {
  if (!clipped) return "";
  return `<text x="${px(MARGIN.left)}" y="${px(size.height - 4)}" font-size="6" fill="#888">values at or below 0 drawn as open triangles at ${esc(fmtTick(floor))}</text>\n`;
}

/** Label for one grouped curve: angle, prefixed by the table label when several files are shown. */
function seriesLabel(tables: ResultTable[], t: ResultTable, theta: number): string {
  const a = `theta=${fmtAngle(theta)}`;
  return tables.length > 1 ? `${tableLabel(t)} ${a}` : a;
}

// ---------------------------------------------------------------------------
// counts_vs_jp
// ---------------------------------------------------------------------------

function renderCounts(tables: ResultTable[], size: Size): string {
  const allJp = tables.flatMap((t) => col(t, "Jp"));
  const allCounts = tables.flatMap((t) => col(t, "count"));
  const box = plotBox(size);
  const xa = couplingAxis(allJp, "Jp");
  const [, cHi] = extent(allCounts);
  const ya: AxisSpec = { lo: 0, hi: Math.max(cHi * 1.08, 1), label: "complex eigenvalues" };
  const p = makePanel(box, xa, ya, "clip0");

  let body = p.frame();
  const entries: LegendEntry[] = [];
  let si = 0;
  for (const t of tables) {
    const theta = col(t, "theta");
    const jp = col(t, "Jp");
    const count = col(t, "count");
    for (const [key, idx] of groupBy(theta.map(String))) {
      const order = [...idx].sort((a, b) => jp[a]! - jp[b]!);
      // step-after staircase: the count holds its value until the next coupling
      const xs: number[] = [];
      const ys: number[] = [];
      for (let i = 0; i < order.length; i++) {
        const r = order[i]!;
        if (i > 0) {
          xs.push(jp[r]!);
          ys.push(count[order[i - 1]!]!);
        }
        xs.push(jp[r]!);
        ys.push(count[r]!);
      }
      const color = PALETTE[si % PALETTE.length]!;
      body += p.polyline(xs, ys, { color, width: 1.3 });
      entries.push({ label: seriesLabel(tables, t, Number(key)), color });
      si++;
    }
  }
  body += legend(box, entries);
  body += title(box.x, 14, "complex-eigenvalue count vs inter-leg coupling", subtitleOf(tables));
  return svgDoc(size.width, size.height, p.defs, body);
}

// ---------------------------------------------------------------------------
// maxim_heatmap
// ---------------------------------------------------------------------------

function cellEdges(vals: number[], log: boolean): number[] {
  if (vals.length === 1) {
    const v = vals[0]!;
    return log ? [v / 1.5, v * 1.5] : [v - 0.5, v + 0.5];
  }
  const edges: number[] = [];
  const mid = (a: number, b: number) => (log ? Math.sqrt(a * b) : (a + b) / 2);
  const first = vals[0]!;
  const second = vals[1]!;
  edges.push(log ? first * (first / mid(first, second)) : first - (mid(first, second) - first));
  for (let i = 0; i + 1 < vals.length; i++) edges.push(mid(vals[i]!, vals[i + 1]!));
  const last = vals[vals.length - 1]!;
  const prev = edges[edges.length - 1]!;
  edges.push(log ? last * (last / prev) : last + (last - prev));
  return edges;
}

function renderHeatmap(tables: ResultTable[], size: Size): string {
  const theta: number[] = [];
  const jp: number[] = [];
  const maxim: number[] = [];
  for (const t of tables) {
    theta.push(...col(t, "theta"));
    jp.push(...col(t, "Jp"));
    maxim.push(...col(t, "max_im"));
  }
  const thetas = distinctSorted(theta);
  const jps = distinctSorted(jp);
  const logY = positives(jp).length === jp.length;

  const barW = 50;
  const box = plotBox(size, MARGIN.right + barW);
  const xEdges = cellEdges(thetas, false);
  const yEdges = cellEdges(jps, logY);
  const xa: AxisSpec = {
    lo: xEdges[0]!,
    hi: xEdges[xEdges.length - 1]!,
    label: "theta",
    ticks: thetas,
    tickFmt: fmtAngle,
  };
  const ya: AxisSpec = { lo: yEdges[0]!, hi: yEdges[yEdges.length - 1]!, log: logY, label: "Jp" };
  const p = makePanel(box, xa, ya, "clip0");

  const pos = positives(maxim);
  const vHi = pos.length ? Math.max(...pos) : 1e-15;
  const vLo = pos.length ? Math.min(...pos) : 1e-16;
  const span = Math.log10(vHi) - Math.log10(vLo) || 1;
  const colorOf = (v: number) => (v <= 0 ? heatColor(0) : heatColor((Math.log10(v) - Math.log10(vLo)) / span));

  const value = new Map<string, number>();
  theta.forEach((th, i) => value.set(`${th}|${jp[i]!}`, maxim[i]!));

  let body = "";
  for (let i = 0; i < thetas.length; i++) {
    for (let j = 0; j < jps.length; j++) {
      const v = value.get(`${thetas[i]!}|${jps[j]!}`);
      if (v === undefined) continue;
      const x0 = p.xOf(xEdges[i]!);
      const x1 = p.xOf(xEdges[i + 1]!);
      const y0 = p.yOf(yEdges[j + 1]!);
      const y1 = p.yOf(yEdges[j]!);
      body += `<rect ${p.clip} x="${px(x0)}" y="${px(y0)}" width="${px(Math.max(x1 - x0, 0.5))}" height="${px(Math.max(y1 - y0, 0.5))}" fill="${colorOf(v)}"/>\n`;
    }
  }
  body += p.frame();

  // colorbar: log10 ramp on the right
  const bx = box.x + box.w + 14;
  const steps = 48;
  for (let k = 0; k < steps; k++) {
    const y0 = box.y + box.h - ((k + 1) / steps) * box.h;
    body += `<rect x="${px(bx)}" y="${px(y0)}" width="10" height="${px(box.h / steps + 0.5)}" fill="${heatColor((k + 0.5) / steps)}"/>\n`;
  }
  body += `<rect x="${px(bx)}" y="${px(box.y)}" width="10" height="${px(box.h)}" fill="none" stroke="#333" stroke-width="0.5"/>\n`;
  for (const v of logTicks(vLo, vHi)) {
    const t = (Math.log10(v) - Math.log10(vLo)) / span;
    if (t < -1e-9 || t > 1 + 1e-9) continue;
    const y = box.y + box.h - t * box.h;
    body += `<line x1="${px(bx + 10)}" y1="${px(y)}" x2="${px(bx + 13)}" y2="${px(y)}" stroke="#333" stroke-width="0.5"/>\n`;
    body += `<text x="${px(bx + 15)}" y="${px(y + 2.5)}" font-size="6.5" fill="#555">${esc(fmtTick(v))}</text>\n`;
  }
  body += `<text x="${px(bx + 5)}" y="${px(box.y - 6)}" text-anchor="middle" font-size="7" fill="#333">max Im E</text>\n`;

  body += title(box.x, 14, "largest imaginary energy over the (angle, coupling) plane", subtitleOf(tables));
  return svgDoc(size.width, size.height, p.defs, body);
}

// ---------------------------------------------------------------------------
// threshold_vs_L
// ---------------------------------------------------------------------------

function renderThreshold(tables: ResultTable[], size: Size): string {
  const box = plotBox(size);
  const allL = tables.flatMap((t) => col(t, "L"));
  const allStar = tables.flatMap((t) => col(t, "Jp_star"));
  const Ls = distinctSorted(allL);
  const xa: AxisSpec = {
    lo: Ls[0]! - 0.5,
    hi: Ls[Ls.length - 1]! + 0.5,
    label: "rungs per leg",
    ticks: Ls,
    tickFmt: (v) => String(v),
  };
  const starPos = positives(allStar);
  if (starPos.length === 0) {
    throw new SchemaError(`${tables[0]!.source}: no finite positive Jp_star values to plot`);
  }
  const [yLo, yHi] = padLog(extent(starPos), 2);
  const ya: AxisSpec = { lo: yLo, hi: yHi, log: true, label: "onset coupling Jp*" };
  const p = makePanel(box, xa, ya, "clip0");

  let body = p.frame();
  const entries: LegendEntry[] = [];
  let si = 0;
  for (const t of tables) {
    const theta = col(t, "theta");
    const L = col(t, "L");
    const star = col(t, "Jp_star");
    for (const [key, idx] of groupBy(theta.map(String))) {
      const order = [...idx].sort((a, b) => L[a]! - L[b]!);
      const xs = order.map((i) => L[i]!);
      const ys = order.map((i) => star[i]!);
      const color = PALETTE[si % PALETTE.length]!;
      body += p.polyline(xs, ys, { color, width: 1.3 });
      body += p.circles(xs, ys, color, 2.4);
      entries.push({ label: seriesLabel(tables, t, Number(key)), color });
      si++;
    }
  }
  body += legend(box, entries);
  body += title(box.x, 14, "complex-onset coupling vs ladder length", subtitleOf(tables));
  return svgDoc(size.width, size.height, p.defs, body);
}

// ---------------------------------------------------------------------------
// spectrum_vs_jp
// ---------------------------------------------------------------------------

function renderSpectrum(tables: ResultTable[], size: Size): string {
  const rightW = 52;
  const box = plotBox(size, MARGIN.right + rightW);
  const allJp = tables.flatMap((t) => col(t, "Jp"));
  const allIm = tables.flatMap((t) => col(t, "im"));
  const [xLo, xHi] = padLin(extent(allJp));
  const xa: AxisSpec = { lo: xLo, hi: xHi, label: "Jp" };
  const [iLo, iHi] = padLin(extent(allIm));
  const ya: AxisSpec = { lo: iLo, hi: iHi, label: "Im E" };
  const p = makePanel(box, xa, ya, "clip0");

  let body = p.frame();
  if (iLo < 0 && iHi > 0) body += p.hline(0, "#bbb", "2,3");

  let envelopeX: number[] = [];
  let envelopeY: number[] = [];
  let edgeOfJp = new Map<number, number>();

  tables.forEach((t, ti) => {
    const jp = col(t, "Jp");
    const index = col(t, "index");
    const im = col(t, "im");
    const pol = col(t, "polarization");
    const edge = col(t, "edge_corr");

    // thin fan line per eigenstate index, colored by mean leg polarization
    for (const [, idx] of groupBy(index.map(String))) {
      const order = [...idx].sort((a, b) => jp[a]! - jp[b]!);
      const xs = order.map((i) => jp[i]!);
      const ys = order.map((i) => im[i]!);
      body += p.polyline(xs, ys, {
        color: signColor(mean(idx.map((i) => pol[i]!))),
        width: 0.6,
        opacity: 0.45,
      });
    }

    // envelope of the largest Im E, with the edge correlation of that state
    const perJp = new Map<number, { im: number; edge: number }>();
    for (let i = 0; i < jp.length; i++) {
      const cur = perJp.get(jp[i]!);
      if (!cur || im[i]! > cur.im) perJp.set(jp[i]!, { im: im[i]!, edge: edge[i]! });
    }
    const xs = [...perJp.keys()].sort((a, b) => a - b);
    const ys = xs.map((x) => perJp.get(x)!.im);
    body += p.polyline(xs, ys, { color: "#111", width: 1.6, dash: ti > 0 ? "5,3" : undefined });
    if (ti === 0) {
      envelopeX = xs;
      envelopeY = ys;
      edgeOfJp = new Map(xs.map((x) => [x, perJp.get(x)!.edge]));
    }
  });

  // right axis: edge correlation of the top-Im state (first table)
  if (tables.length === 1 && envelopeX.length > 0) {
    const edges = envelopeX.map((x) => edgeOfJp.get(x)!);
    const [eLo, eHi] = padLin(extent(edges));
    const rOf = (v: number) => box.y + box.h - ((v - eLo) / (eHi - eLo || 1)) * box.h;
    const color = "#2d6a4f";
    const pts = envelopeX
      .map((x, i) => `${px(p.xOf(x))},${px(rOf(edges[i]!))}`)
      .join(" ");
    body += `<polyline ${p.clip} fill="none" stroke="${color}" stroke-width="1.2" stroke-dasharray="6,3" points="${pts}"/>\n`;
    const rx = box.x + box.w;
    body += `<line x1="${px(rx)}" y1="${px(box.y)}" x2="${px(rx)}" y2="${px(box.y + box.h)}" stroke="${color}" stroke-width="0.7"/>\n`;
    for (const v of [eLo, (eLo + eHi) / 2, eHi]) {
      const y = rOf(v);
      body += `<line x1="${px(rx)}" y1="${px(y)}" x2="${px(rx + 3)}" y2="${px(y)}" stroke="${color}" stroke-width="0.5"/>\n`;
      body += `<text x="${px(rx + 5)}" y="${px(y + 2.5)}" font-size="6.5" fill="${color}">${esc(fmtTick(v))}</text>\n`;
    }
    const cy = box.y + box.h / 2;
    body += `<text x="${px(rx + 40)}" y="${px(cy)}" text-anchor="middle" font-size="8" fill="${color}" transform="rotate(90,${px(rx + 40)},${px(cy)})">edge correlation of top state</text>\n`;
  }

  // inset: finite-difference slope of the envelope
  if (tables.length === 1 && envelopeX.length >= 3) {
    const ib: Box = { x: box.x + 10, y: box.y + 8, w: box.w * 0.32, h: box.h * 0.3 };
    const mx: number[] = [];
    const my: number[] = [];
    for (let i = 0; i + 1 < envelopeX.length; i++) {
      const dx = envelopeX[i + 1]! - envelopeX[i]!;
      if (dx === 0) continue;
      mx.push((envelopeX[i]! + envelopeX[i + 1]!) / 2);
      my.push((envelopeY[i + 1]! - envelopeY[i]!) / dx);
    }
    const [dLo, dHi] = padLin(extent(my));
    const ip = makePanel(ib, { lo: xLo, hi: xHi, ticks: [] }, { lo: dLo, hi: dHi, ticks: [dLo, dHi] }, "clip1");
    body += `<rect x="${px(ib.x)}" y="${px(ib.y)}" width="${px(ib.w)}" height="${px(ib.h)}" fill="white" fill-opacity="0.9"/>\n`;
    body += ip.frame();
    body += ip.polyline(mx, my, { color: "#f77f00", width: 1.2 });
    body += `<text x="${px(ib.x + 3)}" y="${px(ib.y + ib.h + 8)}" font-size="5.5" fill="#666">slope of max Im E</text>\n`;
    body += title(box.x, 14, "imaginary spectrum fan vs inter-leg coupling", subtitleOf(tables));
    return svgDoc(size.width, size.height, p.defs + ip.defs, body);
  }

  body += title(box.x, 14, "imaginary spectrum fan vs inter-leg coupling", subtitleOf(tables));
  return svgDoc(size.width, size.height, p.defs, body);
}

// ---------------------------------------------------------------------------
// quench
// ---------------------------------------------------------------------------

function renderQuench(tables: ResultTable[], size: Size): string {
  const gap = 34;
  const h = (size.height - MARGIN.top - MARGIN.bottom - gap) / 2;
  const boxC: Box = { x: MARGIN.left, y: MARGIN.top, w: size.width - MARGIN.left - MARGIN.right, h };
  const boxP: Box = { ...boxC, y: MARGIN.top + h + gap };

  const ts = tables.map((t) => col(t, "t").filter((v) => v > 0));
  const allT = positives(ts.flat());
  if (allT.length === 0) {
    throw new SchemaError(`${tables[0]!.source}: no positive times to place on the log-t axis`);
  }
  const [tLo, tHi] = padLog(extent(allT), 1.3);
  const xaC: AxisSpec = { lo: tLo, hi: tHi, log: true };
  const xaP: AxisSpec = { lo: tLo, hi: tHi, log: true, label: "t" };

  const allC = tables.flatMap((t) => col(t, "C"));
  const allP = tables.flatMap((t) => col(t, "P"));
  const [cLo, cHi] = padLin(extent(allC));
  const [pLoRaw, pHiRaw] = extent(allP);
  const [pLo, pHi] = padLin([Math.min(pLoRaw, 0), Math.max(pHiRaw, 1)], 0.04);

  const pC = makePanel(boxC, xaC, { lo: cLo, hi: cHi, label: "boundary correlation" }, "clip0");
  const pP = makePanel(boxP, xaP, { lo: pLo, hi: pHi, label: "overlap with initial state" }, "clip1");

  let body = pC.frame() + pP.frame();
  const entries: LegendEntry[] = [];
  tables.forEach((t, i) => {
    const color = PALETTE[i % PALETTE.length]!;
    const tAll = col(t, "t");
    const C = col(t, "C");
    const P = col(t, "P");
    const keep = tAll.map((v, k) => (v > 0 ? k : -1)).filter((k) => k >= 0);
    const xs = keep.map((k) => tAll[k]!);
    body += pC.polyline(xs, keep.map((k) => C[k]!), { color, width: 1.1 });
    body += pP.polyline(xs, keep.map((k) => P[k]!), { color, width: 1.1 });
    const crossover = metaNumber(t, "quench.crossover");
    if (crossover !== undefined && Number.isFinite(crossover) && crossover > tLo && crossover < tHi) {
      body += pC.vline(crossover, color);
      body += pP.vline(crossover, color);
    }
    entries.push({ label: tableLabel(t), color });
  });
  body += legend(boxC, entries);
  body += title(boxC.x, 14, "normalized quench evolution", subtitleOf(tables));
  return svgDoc(size.width, size.height, pC.defs + pP.defs, body);
}

// ---------------------------------------------------------------------------
// im_dos
// ---------------------------------------------------------------------------

function renderDos(tables: ResultTable[], size: Size): string {
  const box = plotBox(size);
  const los = tables.flatMap((t) => col(t, "bin_lo"));
  const his = tables.flatMap((t) => col(t, "bin_hi"));
  const counts = tables.flatMap((t) => col(t, "count"));
  const [xLo, xHi] = padLin(extent([...los, ...his]), 0.03);
  const xa: AxisSpec = { lo: xLo, hi: xHi, label: "Im E" };
  const ya: AxisSpec = { lo: 0, hi: Math.max(1, extent(counts)[1] * 1.08), label: "states" };
  const p = makePanel(box, xa, ya, "clip0");

  let body = p.frame();
  if (xLo < 0 && xHi > 0) body += p.vline(0, "#bbb", "2,3");
  const entries: LegendEntry[] = [];
  tables.forEach((t, i) => {
    const color = PALETTE[i % PALETTE.length]!;
    const lo = col(t, "bin_lo");
    const hi = col(t, "bin_hi");
    const n = col(t, "count");
    for (let k = 0; k < lo.length; k++) {
      if (n[k]! <= 0) continue;
      const x0 = p.xOf(lo[k]!);
      const x1 = p.xOf(hi[k]!);
      const y1 = p.yOf(n[k]!);
      const y0 = p.yOf(0);
      body += `<rect ${p.clip} x="${px(x0)}" y="${px(y1)}" width="${px(Math.max(x1 - x0, 0.5))}" height="${px(y0 - y1)}" fill="${color}" fill-opacity="0.55" stroke="${color}" stroke-width="0.5"/>\n`;
    }
    entries.push({ label: tableLabel(t), color });
  });
  if (tables.length > 1) body += legend(box, entries);
  body += title(box.x, 14, "imaginary-energy histogram", subtitleOf(tables));
  return svgDoc(size.width, size.height, p.defs, body);
}

// ---------------------------------------------------------------------------
// symmetry_residuals / commutator_check / perturbation_check
// ---------------------------------------------------------------------------

function anglesAxis(vals: number[]): AxisSpec {
  const thetas = distinctSorted(vals);
  const [lo, hi] = padLin(extent(thetas), 0.08);
  return { lo, hi, label: "theta", ticks: thetas, tickFmt: fmtAngle };
}

function renderResiduals(tables: ResultTable[], size: Size): string {
  const term: string[] = [];
  const theta: number[] = [];
  const residual: number[] = [];
  for (const t of tables) {
    term.push(...strCol(t, "term"));
    theta.push(...col(t, "theta"));
    residual.push(...col(t, "residual"));
  }
  const box = plotBox(size);
  const { floor, axis } = logFloor(residual);
  const p = makePanel(box, anglesAxis(theta), { lo: axis[0], hi: axis[1], log: true, label: "residual" }, "clip0");

  let body = p.frame();
  const entries: LegendEntry[] = [];
  let si = 0;
  for (const [name, idx] of groupBy(term)) {
    const color = PALETTE[si % PALETTE.length]!;
    body += residualSeries(p, idx.map((i) => theta[i]!), idx.map((i) => residual[i]!), floor, color);
    entries.push({ label: name, color });
    si++;
  }
  body += legend(box, entries);
  body += clipNote(size, floor, residual.some((v) => v <= 0));
  body += title(box.x, 14, "antiunitary-conjugation residual per term", subtitleOf(tables));
  return svgDoc(size.width, size.height, p.defs, body);
}

function renderCommutator(tables: ResultTable[], size: Size): string {
  const box = plotBox(size);
  const all = tables.flatMap((t) => col(t, "residual"));
  const { floor, axis } = logFloor(all);
  const thetaAll = tables.flatMap((t) => col(t, "theta"));
  const p = makePanel(box, anglesAxis(thetaAll), { lo: axis[0], hi: axis[1], log: true, label: "residual" }, "clip0");

  let body = p.frame();
  const entries: LegendEntry[] = [];
  tables.forEach((t, i) => {
    const color = PALETTE[i % PALETTE.length]!;
    body += residualSeries(p, col(t, "theta"), col(t, "residual"), floor, color);
    entries.push({ label: tableLabel(t), color });
  });
  if (tables.length > 1) body += legend(box, entries);
  body += clipNote(size, floor, all.some((v) => v <= 0));
  body += title(box.x, 14, "deformed-exchange commutation residual vs angle", subtitleOf(tables));
  return svgDoc(size.width, size.height, p.defs, body);
}

function renderPerturbation(tables: ResultTable[], size: Size): string {
  const check: string[] = [];
  const theta: number[] = [];
  const err: number[] = [];
  for (const t of tables) {
    check.push(...strCol(t, "check"));
    theta.push(...col(t, "theta"));
    err.push(...col(t, "abs_err"));
  }
  const names = [...new Set(check)];
  const thetas = distinctSorted(theta);
  const slot = new Map(names.map((n, i) => [n, i]));
  const box = plotBox(size);
  const { floor, axis } = logFloor(err);
  const xa: AxisSpec = {
    lo: -0.5,
    hi: names.length - 0.5,
    ticks: names.map((_, i) => i),
    tickFmt: (v) => names[Math.round(v)] ?? "",
  };
  const p = makePanel(box, xa, { lo: axis[0], hi: axis[1], log: true, label: "abs error vs closed form" }, "clip0");

  let body = p.frame();
  const entries: LegendEntry[] = [];
  thetas.forEach((th, ti) => {
    const color = PALETTE[ti % PALETTE.length]!;
    const offset = (ti - (thetas.length - 1) / 2) * 0.16;
    for (let i = 0; i < check.length; i++) {
      if (theta[i] !== th) continue;
      const x = slot.get(check[i]!)! + offset;
      if (err[i]! > floor) body += p.circles([x], [err[i]!], color, 2.2);
      else body += triangle(p, x, floor, color);
    }
    entries.push({ label: `theta=${fmtAngle(th)}`, color });
  });
  body += legend(box, entries);
  body += clipNote(size, floor, err.some((v) => v <= 0));
  body += title(box.x, 14, "perturbative values vs closed forms", subtitleOf(tables));
  return svgDoc(size.width, size.height, p.defs, body);
}

// ---------------------------------------------------------------------------
// dispatch
// ---------------------------------------------------------------------------

const RENDERERS: Record<string, Renderer> = {
  counts_vs_jp: renderCounts,
  maxim_heatmap: renderHeatmap,
  threshold_vs_L: renderThreshold,
  spectrum_vs_jp: renderSpectrum,
  quench: renderQuench,
  im_dos: renderDos,
  symmetry_residuals: renderResiduals,
  commutator_check: renderCommutator,
  perturbation_check: renderPerturbation,
};

const DEFAULT_SIZE: Record<string, Size> = {
  quench: { width: 560, height: 460 },
};

/** Render parsed tables for a kind; validates every table first. */
export function renderToString(
  kind: string,
  tables: ResultTable[],
  opts: { width?: number; height?: number } = {},
): string {
  const renderer = RENDERERS[kind];
  if (!renderer) {
    throw new SchemaError(`unknown kind ${JSON.stringify(kind)}; known kinds: ${KINDS.join(", ")}`);
  }
  if (tables.length === 0) throw new SchemaError("no input tables");
  for (const t of tables) validateTable(kind, t);
  const base = DEFAULT_SIZE[kind] ?? { width: 560, height: 330 };
  return renderer(tables, { width: opts.width ?? base.width, height: opts.height ?? base.height });
}

/** Read, validate, render, then write; the output appears only on success. */
export async function render(spec: PlotSpec): Promise<string> {
  const tables: ResultTable[] = [];
  for (const path of spec.inputs) {
    const text = await readFile(path, "utf-8");
    tables.push(parseResultCsv(text, path));
  }
  const svg = renderToString(spec.kind, tables, { width: spec.width, height: spec.height });
  await writeFile(spec.out, svg);
  return spec.out;
}
