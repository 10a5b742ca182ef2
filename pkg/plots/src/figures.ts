/**
 * Figure builders over the published CSV artifacts.
 *
 * Four kinds:
 *   vp_convergence     three critical-value columns vs epsilon, with an
 *                      optional extrapolation overlay whose intercepts are
 *                      labeled verbatim from the baseline CSV
 *   cost_curve         cover cost vs s on a log scale, with the cost = 1
 *                      crossing bracketed
 *   distortion_heatmap variation modulus per order divided by n, over the
 *                      (n, epsilon) grid
 *   bk_traces          per-orbit local pressure fan with the averaging
 *                      window shaded
 *
 * Builders read the CSVs, never write them, and return the SVG as a string
 * plus a small metadata record used by the tests. render() is the only
 * place a file is written, and it writes only after the SVG is complete.
 */

import { writeFileSync } from "node:fs";
import { basename } from "node:path";

import {
  EmptyCsvError,
  SchemaError,
  Table,
  col,
  numCol,
  parseTable,
  requireColumns,
  requireRows,
} from "./csv.js";
import { Band, LegendEntry, RefLine, Series, Whisker, fnum, lineChart, heatmap } from "./svg.js";

export type FigureKind =
  | "vp_convergence"
  | "cost_curve"
  | "distortion_heatmap"
  | "bk_traces";

export const FIGURE_KINDS: readonly FigureKind[] = [
  "vp_convergence",
  "cost_curve",
  "distortion_heatmap",
  "bk_traces",
];

export interface FigureSpec {
  kind: FigureKind;
  input: string;
  baseline?: string;
  output: string;
}

export interface RenderResult {
  svg: string;
  meta: Record<string, unknown>;
}

export const VP_COLUMNS = [
  "epsilon", "cover_s", "katok_s", "katok_lower", "bk_mean", "bk_stderr",
  "bk_oscillation", "gap_cover_katok", "gap_cover_bk", "opt_measure",
] as const;
export const EXTRAP_COLUMNS = [
  "column", "intercept", "slope", "max_residual", "eps_used",
] as const;
export const COST_COLUMNS = ["s", "cost"] as const;
export const DISTORTION_COLUMNS = [
  "n", "epsilon", "upper", "lower", "upper_over_n",
] as const;
export const BK_TRACE_COLUMNS = ["sample", "order", "value", "in_window"] as const;

const COL_COVER = "#4361ee";
const COL_KATOK = "#e63946";
const COL_BK = "#2d6a4f";

function loadChecked(path: string, expected: readonly string[]): Table {
  const table = parseTable(path);
  requireColumns(table, expected);
  requireRows(table);
  return table;
}

function sortedIdx(keys: number[]): number[] {
  return keys.map((_, i) => i).sort((a, b) => (keys[a] as number) - (keys[b] as number));
}

function padded(lo: number, hi: number): [number, number] {
  const span = hi - lo || Math.abs(hi) || 1;
  return [lo - 0.06 * span, hi + 0.06 * span];
}

// ---------------------------------------------------------------------------
// vp_convergence
// ---------------------------------------------------------------------------

interface ExtrapLine {
  column: string;
  interceptRaw: string;
  intercept: number;
  slope: number;
}

function vpConvergence(input: string, baseline?: string): RenderResult {
  const table = loadChecked(input, VP_COLUMNS);
  const eps = numCol(table, "epsilon");
  const order = sortedIdx(eps);
  const pick = (vals: number[]) => order.map((i) => vals[i] as number);

  const epsS = pick(eps);
  const cover = pick(numCol(table, "cover_s"));
  const katok = pick(numCol(table, "katok_s"));
  const bk = pick(numCol(table, "bk_mean"));
  const stderr = pick(numCol(table, "bk_stderr"));

  let extrap: ExtrapLine[] = [];
  if (baseline !== undefined) {
    const bt = parseTable(baseline);
    requireColumns(bt, EXTRAP_COLUMNS);
    requireRows(bt);
    const cols = col(bt, "column");
    const icRaw = col(bt, "intercept");
    const ic = numCol(bt, "intercept");
    const sl = numCol(bt, "slope");
    extrap = cols.map((c, i) => ({
      column: c,
      interceptRaw: icRaw[i] as string,
      intercept: ic[i] as number,
      slope: sl[i] as number,
    }));
  }

  const seriesColor: Record<string, string> = {
    cover_s: COL_COVER,
    katok_s: COL_KATOK,
    bk_mean: COL_BK,
  };
  const drawn = extrap.filter((e) => e.column in seriesColor);

  const xMax = Math.max(...epsS) * 1.04;
  const allY = [
    ...cover, ...katok, ...bk,
    ...bk.map((v, i) => v + 3 * (stderr[i] as number)),
    ...bk.map((v, i) => v - 3 * (stderr[i] as number)),
    ...drawn.map((e) => e.intercept),
    ...drawn.map((e) => e.intercept + e.slope * xMax),
  ];
  const [yMin, yMax] = padded(Math.min(...allY), Math.max(...allY));

  const zip = (vals: number[]): Array<[number, number]> =>
    epsS.map((e, i) => [e, vals[i] as number]);

  const series: Series[] = [
    { pts: zip(cover), color: COL_COVER, label: "cover_s", width: 1.4, markers: true },
    { pts: zip(katok), color: COL_KATOK, label: "katok_s", width: 1.4, markers: true },
    { pts: zip(bk), color: COL_BK, label: "bk_mean", width: 1.4, markers: true },
  ];
  for (const e of drawn) {
    series.push({
      pts: [[0, e.intercept], [xMax, e.intercept + e.slope * xMax]],
      color: seriesColor[e.column] as string,
      width: 1,
      opacity: 0.75,
      dash: "5,3",
    });
  }

  const whiskers: Whisker[] = epsS.map((e, i) => ({
    x: e,
    y0: (bk[i] as number) - 3 * (stderr[i] as number),
    y1: (bk[i] as number) + 3 * (stderr[i] as number),
    color: COL_BK,
  }));

  // intercept block: one line per overlay, digits copied from the CSV cell
  const notes = drawn.map((e, i) => ({
    x: 0,
    y: yMax,
    dx: 6,
    dy: 12 + i * 10,
    text: `${e.column} at eps=0: ${e.interceptRaw}`,
    color: seriesColor[e.column] as string,
    size: 7.5,
  }));

  const marks = drawn.map((e) => ({
    x: 0,
    y: e.intercept,
    color: seriesColor[e.column] as string,
    ring: true,
  }));

  const legend: LegendEntry[] = [
    { label: "cover_s", color: COL_COVER },
    { label: "katok_s", color: COL_KATOK },
    { label: "bk_mean (mean plus or minus 3 se)", color: COL_BK },
  ];
  if (drawn.length > 0) {
    legend.push({ label: "extrapolation fit", color: "#777", dash: "5,3" });
  }

  const svg = lineChart({
    title: "Critical values vs neutralization scale",
    subtitle: `${basename(input)}: ${epsS.length} grid points` +
      (drawn.length > 0 ? `, overlay from ${basename(baseline as string)}` : ""),
    xLabel: "epsilon",
    yLabel: "critical value",
    xMin: 0,
    xMax,
    yMin,
    yMax,
    series,
    whiskers,
    marks,
    notes,
    legend,
  });

  const intercepts: Record<string, string> = {};
  for (const e of drawn) intercepts[e.column] = e.interceptRaw;
  return { svg, meta: { points: epsS.length, intercepts } };
}

// ---------------------------------------------------------------------------
// cost_curve
// ---------------------------------------------------------------------------

function costCurve(input: string): RenderResult {
  const table = loadChecked(input, COST_COLUMNS);
  const sAll = numCol(table, "s");
  const costAll = numCol(table, "cost");
  const order = sortedIdx(sAll);
  const s = order.map((i) => sAll[i] as number);
  const cost = order.map((i) => costAll[i] as number);
  for (let i = 0; i < cost.length; i++) {
    if ((cost[i] as number) <= 0) {
      throw new SchemaError(
        `cost must be positive for the log scale, got ${cost[i]} at s=${s[i]} in ${input}`,
      );
    }
  }

  const logc = cost.map((c) => Math.log10(c));
  let monotone = true;
  for (let i = 1; i < cost.length; i++) {
    if (!((cost[i] as number) < (cost[i - 1] as number))) monotone = false;
  }

  // bracket the cost = 1 crossing between adjacent probes
  let bracket: [number, number] | null = null;
  let root: number | null = null;
  for (let i = 0; i + 1 < cost.length; i++) {
    const a = logc[i] as number;
    const b = logc[i + 1] as number;
    if (a >= 0 && b < 0) {
      bracket = [s[i] as number, s[i + 1] as number];
      root = (s[i] as number) - a * ((s[i + 1] as number) - (s[i] as number)) / (b - a);
      break;
    }
  }

  const [xMin, xMax] = padded(Math.min(...s), Math.max(...s));
  const [yMin, yMax] = padded(Math.min(...logc), Math.max(...logc));

  const bands: Band[] = bracket
    ? [{ x0: bracket[0], x1: bracket[1], color: COL_BK, opacity: 0.14, label: "root bracket" }]
    : [];
  const vLines: RefLine[] = root !== null
    ? [{ value: root, color: COL_BK, label: `root ~ ${fnum(root, 8)}`, dash: "4,3" }]
    : [];

  const svg = lineChart({
    title: "Cover cost vs exponent",
    subtitle: `${basename(input)}: ${s.length} bisection probes` +
      (monotone ? ", monotone decreasing" : ""),
    xLabel: "s",
    yLabel: "cover cost (log scale)",
    xMin,
    xMax,
    yMin,
    yMax,
    yTickFormat: (v) => (Number.isInteger(v) ? `1e${v}` : `1e${fnum(v, 3)}`),
    series: [
      { pts: s.map((x, i) => [x, logc[i] as number]), color: COL_COVER, label: "cost(s)", width: 1.4, markers: true },
    ],
    hLines: [{ value: 0, color: "#888", label: "cost = 1", dash: "6,3" }],
    bands,
    vLines,
  });

  return { svg, meta: { probes: s.length, monotone, bracket, root } };
}

// ---------------------------------------------------------------------------
// distortion_heatmap
// ---------------------------------------------------------------------------

function distortionHeatmap(input: string): RenderResult {
  const table = loadChecked(input, DISTORTION_COLUMNS);
  const nRaw = col(table, "n");
  const epsRaw = col(table, "epsilon");
  const value = numCol(table, "upper_over_n");

  const uniqSorted = (raw: string[]) => {
    const seen = new Map<string, number>();
    raw.forEach((r) => {
      if (!seen.has(r)) seen.set(r, Number(r));
    });
    return [...seen.keys()].sort((a, b) => (seen.get(a) as number) - (seen.get(b) as number));
  };
  const nCats = uniqSorted(nRaw);
  const epsCats = uniqSorted(epsRaw);

  const byKey = new Map<string, number>();
  for (let i = 0; i < nRaw.length; i++) {
    const key = `${nRaw[i]}|${epsRaw[i]}`;
    if (byKey.has(key)) {
      throw new SchemaError(`duplicate grid cell n=${nRaw[i]}, epsilon=${epsRaw[i]} in ${input}`);
    }
    byKey.set(key, value[i] as number);
  }
  const cells: number[][] = epsCats.map((e) =>
    nCats.map((n) => {
      const v = byKey.get(`${n}|${e}`);
      if (v === undefined) {
        throw new SchemaError(`missing grid cell n=${n}, epsilon=${e} in ${input}`);
      }
      return v;
    }),
  );

  const vMax = Math.max(...value, 0);
  const svg = heatmap({
    title: "Variation modulus per order",
    subtitle: `${basename(input)}: ${value.length} cells`,
    xLabel: "order n",
    yLabel: "epsilon",
    xCats: nCats,
    yCats: epsCats,
    cells,
    vMin: 0,
    vMax: vMax > 0 ? vMax : 1,
    low: "#f7fbff",
    high: "#08306b",
    scaleLabel: "upper/n",
  });

  return { svg, meta: { ns: nCats, epss: epsCats, vMax } };
}

// ---------------------------------------------------------------------------
// bk_traces
// ---------------------------------------------------------------------------

function bkTraces(input: string): RenderResult {
  const table = loadChecked(input, BK_TRACE_COLUMNS);
  const sample = numCol(table, "sample");
  const orderCol = numCol(table, "order");
  const value = numCol(table, "value");
  const inWin = col(table, "in_window").map((cell, i) => {
    if (cell !== "true" && cell !== "false") {
      throw new SchemaError(
        `in_window must be true or false, got "${cell}" at row ${i + 1} of ${input}`,
      );
    }
    return cell === "true";
  });

  const bySample = new Map<number, Array<[number, number]>>();
  for (let i = 0; i < sample.length; i++) {
    const k = sample[i] as number;
    if (!bySample.has(k)) bySample.set(k, []);
    (bySample.get(k) as Array<[number, number]>).push([orderCol[i] as number, value[i] as number]);
  }
  const sampleIds = [...bySample.keys()].sort((a, b) => a - b);
  for (const k of sampleIds) {
    (bySample.get(k) as Array<[number, number]>).sort((a, b) => a[0] - b[0]);
  }

  const winOrders = orderCol.filter((_, i) => inWin[i]);
  const window: [number, number] | null = winOrders.length > 0
    ? [Math.min(...winOrders), Math.max(...winOrders)]
    : null;

  const sums = new Map<number, { total: number; count: number }>();
  for (let i = 0; i < orderCol.length; i++) {
    const o = orderCol[i] as number;
    const acc = sums.get(o) ?? { total: 0, count: 0 };
    acc.total += value[i] as number;
    acc.count += 1;
    sums.set(o, acc);
  }
  const meanPts: Array<[number, number]> = [...sums.keys()]
    .sort((a, b) => a - b)
    .map((o) => {
      const acc = sums.get(o) as { total: number; count: number };
      return [o, acc.total / acc.count];
    });

  const [xMin, xMax] = [Math.min(...orderCol), Math.max(...orderCol)];
  const [yMin, yMax] = padded(Math.min(...value), Math.max(...value));

  const series: Series[] = sampleIds.map((k) => ({
    pts: bySample.get(k) as Array<[number, number]>,
    color: COL_COVER,
    width: 0.8,
    opacity: 0.3,
  }));
  series.push({ pts: meanPts, color: COL_KATOK, width: 1.6, label: "sample mean" });

  const bands: Band[] = window
    ? [{ x0: window[0], x1: window[1], color: "#b8860b", opacity: 0.12, label: "window" }]
    : [];

  const svg = lineChart({
    title: "Per-orbit local pressure traces",
    subtitle: `${basename(input)}: ${sampleIds.length} samples, orders ${xMin}..${xMax}`,
    xLabel: "order n",
    yLabel: "running value",
    xMin,
    xMax,
    yMin,
    yMax,
    series,
    bands,
    legend: [
      { label: "per-sample trace", color: COL_COVER },
      { label: "sample mean", color: COL_KATOK },
      { label: "averaging window", color: "#b8860b" },
    ],
  });

  return { svg, meta: { samples: sampleIds.length, window } };
}

// ---------------------------------------------------------------------------
// dispatch
// ---------------------------------------------------------------------------

export function buildFigure(kind: FigureKind, input: string, baseline?: string): RenderResult {
  if (baseline !== undefined && kind !== "vp_convergence") {
    throw new Error(`--baseline is only used by vp_convergence, not ${kind}`);
  }
  switch (kind) {
    case "vp_convergence":
      return vpConvergence(input, baseline);
    case "cost_curve":
      return costCurve(input);
    case "distortion_heatmap":
      return distortionHeatmap(input);
    case "bk_traces":
      return bkTraces(input);
    default:
      throw new Error(`unknown figure kind: ${kind as string}`);
  }
}

export function render(spec: FigureSpec): RenderResult {
  if (!spec.output.endsWith(".svg")) {
    throw new Error(
      `output must end in .svg (got "${spec.output}"); raster formats are not supported`,
    );
  }
  const result = buildFigure(spec.kind, spec.input, spec.baseline);
  writeFileSync(spec.output, result.svg);
  return result;
}

export { EmptyCsvError, SchemaError };
