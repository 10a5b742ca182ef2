/**
 * Hand-rolled SVG chart builders.
 *
 * Everything is emitted in a fixed order with fixed number formatting, so
 * the same inputs always produce the same bytes. No timestamps, no
 * randomness, no locale-dependent formatting.
 */

export function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

/** Deterministic tick/annotation number format: trimmed significant digits. */
export function fnum(v: number, sig = 6): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1e6 || a < 1e-4) {
    return v.toExponential(Math.max(0, sig - 1)).replace(/\.?0+e/, "e");
  }
  let s = v.toPrecision(sig);
  if (s.includes(".")) s = s.replace(/\.?0+$/, "");
  return s;
}

export function niceTicks(min: number, max: number, count: number): number[] {
  const range = max - min || 1;
  const rough = range / count;
  const mag = Math.pow(10, Math.floor(Math.log10(rough)));
  const nice = [1, 2, 5, 10].map((m) => m * mag);
  const step = nice.find((n) => n >= rough) ?? rough;
  const start = Math.ceil(min / step) * step;
  const ticks: number[] = [];
  for (let v = start; v <= max + step * 0.01; v += step) ticks.push(v);
  return ticks;
}

export function lerpColor(lo: string, hi: string, t: number): string {
  const p = (h: string) => [
    parseInt(h.slice(1, 3), 16),
    parseInt(h.slice(3, 5), 16),
    parseInt(h.slice(5, 7), 16),
  ];
  const [r0, g0, b0] = p(lo) as [number, number, number];
  const [r1, g1, b1] = p(hi) as [number, number, number];
  const c = (a: number, b: number) =>
    Math.round(a + (b - a) * t).toString(16).padStart(2, "0");
  return `#${c(r0, r1)}${c(g0, g1)}${c(b0, b1)}`;
}

export interface Series {
  pts: Array<[number, number]>;
  color: string;
  label?: string;
  width?: number;
  opacity?: number;
  dash?: string;
  markers?: boolean;
}

export interface Band {
  x0: number;
  x1: number;
  color: string;
  opacity: number;
  label?: string;
}

export interface RefLine {
  value: number;
  color: string;
  label?: string;
  dash?: string;
}

export interface Mark {
  x: number;
  y: number;
  color: string;
  ring?: boolean;
}

export interface Note {
  x: number;
  y: number;
  dx?: number;
  dy?: number;
  text: string;
  color?: string;
  size?: number;
  anchor?: "start" | "middle" | "end";
}

export interface Whisker {
  x: number;
  y0: number;
  y1: number;
  color: string;
}

export interface LegendEntry {
  label: string;
  color: string;
  dash?: string;
}

export interface LineChartOpts {
  title: string;
  subtitle: string;
  xLabel: string;
  yLabel: string;
  xMin: number;
  xMax: number;
  yMin: number;
  yMax: number;
  xTickFormat?: (v: number) => string;
  yTickFormat?: (v: number) => string;
  series: Series[];
  bands?: Band[];
  hLines?: RefLine[];
  vLines?: RefLine[];
  whiskers?: Whisker[];
  marks?: Mark[];
  notes?: Note[];
  legend?: LegendEntry[];
}

const W = 720;
const H = 340;

export function lineChart(opts: LineChartOpts): string {
  const ml = 64, mr = 24, mt = 36, mb = 48;
  const pw = W - ml - mr;
  const ph = H - mt - mb;
  const { xMin, xMax, yMin, yMax } = opts;
  const xOf = (v: number) => ml + ((v - xMin) / (xMax - xMin || 1)) * pw;
  const yOf = (v: number) => mt + ph - ((v - yMin) / (yMax - yMin || 1)) * ph;
  const xFmt = opts.xTickFormat ?? ((v: number) => fnum(v, 4));
  const yFmt = opts.yTickFormat ?? ((v: number) => fnum(v, 4));

  let s = `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${W} ${H}" font-family="Helvetica, Arial, sans-serif">\n`;
  s += `<rect width="${W}" height="${H}" fill="#fff"/>\n`;
  s += `<text x="${ml}" y="${mt - 20}" font-size="11" font-weight="600" fill="#222">${esc(opts.title)}</text>\n`;
  s += `<text x="${ml}" y="${mt - 8}" font-size="7.5" fill="#888">${esc(opts.subtitle)}</text>\n`;
  s += `<defs><clipPath id="plot"><rect x="${ml}" y="${mt}" width="${pw}" height="${ph}"/></clipPath></defs>\n`;

  const yTicks = niceTicks(yMin, yMax, 6);
  for (const v of yTicks) {
    const y = yOf(v).toFixed(2);
    s += `<line x1="${ml}" y1="${y}" x2="${ml + pw}" y2="${y}" stroke="#eee" stroke-width="0.5"/>\n`;
  }

  for (const b of opts.bands ?? []) {
    const x0 = xOf(b.x0), x1 = xOf(b.x1);
    s += `<rect clip-path="url(#plot)" x="${x0.toFixed(2)}" y="${mt}" width="${(x1 - x0).toFixed(2)}" height="${ph}" fill="${b.color}" opacity="${b.opacity}"/>\n`;
    if (b.label) {
      s += `<text x="${((x0 + x1) / 2).toFixed(2)}" y="${mt + 10}" text-anchor="middle" font-size="6.5" fill="${b.color}">${esc(b.label)}</text>\n`;
    }
  }

  for (const hl of opts.hLines ?? []) {
    const y = yOf(hl.value).toFixed(2);
    s += `<line clip-path="url(#plot)" x1="${ml}" y1="${y}" x2="${ml + pw}" y2="${y}" stroke="${hl.color}" stroke-width="1" stroke-dasharray="${hl.dash ?? "6,3"}"/>\n`;
    if (hl.label) {
      s += `<text x="${ml + pw - 4}" y="${(yOf(hl.value) - 3).toFixed(2)}" text-anchor="end" font-size="6.5" fill="${hl.color}">${esc(hl.label)}</text>\n`;
    }
  }

  for (const vl of opts.vLines ?? []) {
    const x = xOf(vl.value).toFixed(2);
    s += `<line clip-path="url(#plot)" x1="${x}" y1="${mt}" x2="${x}" y2="${mt + ph}" stroke="${vl.color}" stroke-width="1" stroke-dasharray="${vl.dash ?? "4,3"}"/>\n`;
    if (vl.label) {
      s += `<text x="${(xOf(vl.value) + 3).toFixed(2)}" y="${mt + ph - 5}" font-size="6.5" fill="${vl.color}">${esc(vl.label)}</text>\n`;
    }
  }

  for (const sr of opts.series) {
    const pts = sr.pts
      .map(([x, y]) => `${xOf(x).toFixed(2)},${yOf(y).toFixed(2)}`)
      .join(" ");
    if (sr.pts.length > 1) {
      s += `<polyline clip-path="url(#plot)" fill="none" stroke="${sr.color}" stroke-width="${sr.width ?? 1.2}" opacity="${sr.opacity ?? 1}"${sr.dash ? ` stroke-dasharray="${sr.dash}"` : ""} points="${pts}"/>\n`;
    }
    if (sr.markers) {
      for (const [x, y] of sr.pts) {
        s += `<circle clip-path="url(#plot)" cx="${xOf(x).toFixed(2)}" cy="${yOf(y).toFixed(2)}" r="2.2" fill="${sr.color}" opacity="${sr.opacity ?? 1}"/>\n`;
      }
    }
  }

  for (const w of opts.whiskers ?? []) {
    const x = xOf(w.x).toFixed(2);
    const y0 = yOf(w.y0).toFixed(2);
    const y1 = yOf(w.y1).toFixed(2);
    s += `<line clip-path="url(#plot)" x1="${x}" y1="${y0}" x2="${x}" y2="${y1}" stroke="${w.color}" stroke-width="0.8" opacity="0.8"/>\n`;
  }

  for (const m of opts.marks ?? []) {
    const cx = xOf(m.x).toFixed(2);
    const cy = yOf(m.y).toFixed(2);
    if (m.ring) {
      s += `<circle cx="${cx}" cy="${cy}" r="3.2" fill="none" stroke="${m.color}" stroke-width="1.2"/>\n`;
    } else {
      s += `<circle cx="${cx}" cy="${cy}" r="2.6" fill="${m.color}"/>\n`;
    }
  }

  s += `<line x1="${ml}" y1="${mt}" x2="${ml}" y2="${mt + ph}" stroke="#333" stroke-width="0.7"/>\n`;
  s += `<line x1="${ml}" y1="${mt + ph}" x2="${ml + pw}" y2="${mt + ph}" stroke="#333" stroke-width="0.7"/>\n`;

  for (const v of niceTicks(xMin, xMax, 8)) {
    const x = xOf(v).toFixed(2);
    s += `<line x1="${x}" y1="${mt + ph}" x2="${x}" y2="${mt + ph + 3}" stroke="#333" stroke-width="0.5"/>\n`;
    s += `<text x="${x}" y="${mt + ph + 13}" text-anchor="middle" font-size="7" fill="#666">${esc(xFmt(v))}</text>\n`;
  }
  s += `<text x="${ml + pw / 2}" y="${H - 6}" text-anchor="middle" font-size="8.5" fill="#444">${esc(opts.xLabel)}</text>\n`;

  for (const v of yTicks) {
    const y = yOf(v);
    s += `<line x1="${ml - 3}" y1="${y.toFixed(2)}" x2="${ml}" y2="${y.toFixed(2)}" stroke="#333" stroke-width="0.5"/>\n`;
    s += `<text x="${ml - 5}" y="${(y + 2.5).toFixed(2)}" text-anchor="end" font-size="7" fill="#666">${esc(yFmt(v))}</text>\n`;
  }
  s += `<text x="14" y="${mt + ph / 2}" text-anchor="middle" font-size="8.5" fill="#444" transform="rotate(-90,14,${mt + ph / 2})">${esc(opts.yLabel)}</text>\n`;

  for (const n of opts.notes ?? []) {
    const x = (xOf(n.x) + (n.dx ?? 0)).toFixed(2);
    const y = (yOf(n.y) + (n.dy ?? 0)).toFixed(2);
    s += `<text x="${x}" y="${y}" text-anchor="${n.anchor ?? "start"}" font-size="${n.size ?? 7}" fill="${n.color ?? "#444"}">${esc(n.text)}</text>\n`;
  }

  const legend = opts.legend ?? opts.series
    .filter((sr) => sr.label)
    .map((sr) => ({ label: sr.label as string, color: sr.color, dash: sr.dash }));
  if (legend.length > 0) {
    const lw = Math.max(...legend.map((e) => e.label.length)) * 4.3 + 26;
    const lh = legend.length * 11 + 5;
    const lx = ml + pw - lw - 6;
    const ly = mt + 6;
    s += `<rect x="${lx}" y="${ly}" width="${lw}" height="${lh}" rx="2" fill="#fff" fill-opacity="0.85" stroke="#ddd" stroke-width="0.5"/>\n`;
    legend.forEach((e, i) => {
      const yy = ly + 9 + i * 11;
      s += `<line x1="${lx + 5}" y1="${yy - 2.5}" x2="${lx + 19}" y2="${yy - 2.5}" stroke="${e.color}" stroke-width="1.4"${e.dash ? ` stroke-dasharray="${e.dash}"` : ""}/>\n`;
      s += `<text x="${lx + 23}" y="${yy}" font-size="6.8" fill="#444">${esc(e.label)}</text>\n`;
    });
  }

  s += `</svg>\n`;
  return s;
}

export interface HeatmapOpts {
  title: string;
  subtitle: string;
  xLabel: string;
  yLabel: string;
  xCats: string[];
  yCats: string[];
  /** cells[yi][xi], indexed by category position. */
  cells: number[][];
  vMin: number;
  vMax: number;
  low: string;
  high: string;
  scaleLabel: string;
}

export function heatmap(opts: HeatmapOpts): string {
  const ml = 70, mr = 86, mt = 36, mb = 46;
  const pw = W - ml - mr;
  const ph = H - mt - mb;
  const nx = opts.xCats.length;
  const ny = opts.yCats.length;
  const cw = pw / nx;
  const ch = ph / ny;
  const span = opts.vMax - opts.vMin || 1;

  let s = `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${W} ${H}" font-family="Helvetica, Arial, sans-serif">\n`;
  s += `<rect width="${W}" height="${H}" fill="#fff"/>\n`;
  s += `<text x="${ml}" y="${mt - 20}" font-size="11" font-weight="600" fill="#222">${esc(opts.title)}</text>\n`;
  s += `<text x="${ml}" y="${mt - 8}" font-size="7.5" fill="#888">${esc(opts.subtitle)}</text>\n`;

  for (let yi = 0; yi < ny; yi++) {
    for (let xi = 0; xi < nx; xi++) {
      const v = (opts.cells[yi] as number[])[xi] as number;
      const t = Math.min(1, Math.max(0, (v - opts.vMin) / span));
      const fill = lerpColor(opts.low, opts.high, t);
      // row 0 is the lowest category, drawn at the bottom
      const x = ml + xi * cw;
      const y = mt + (ny - 1 - yi) * ch;
      s += `<rect x="${x.toFixed(2)}" y="${y.toFixed(2)}" width="${cw.toFixed(2)}" height="${ch.toFixed(2)}" fill="${fill}" stroke="#fff" stroke-width="1"/>\n`;
      const textFill = t > 0.55 ? "#fff" : "#222";
      s += `<text x="${(x + cw / 2).toFixed(2)}" y="${(y + ch / 2 + 2.5).toFixed(2)}" text-anchor="middle" font-size="7.5" fill="${textFill}">${esc(fnum(v, 3))}</text>\n`;
    }
  }

  for (let xi = 0; xi < nx; xi++) {
    const x = (ml + xi * cw + cw / 2).toFixed(2);
    s += `<text x="${x}" y="${mt + ph + 13}" text-anchor="middle" font-size="7.5" fill="#666">${esc(opts.xCats[xi] as string)}</text>\n`;
  }
  s += `<text x="${ml + pw / 2}" y="${H - 6}" text-anchor="middle" font-size="8.5" fill="#444">${esc(opts.xLabel)}</text>\n`;

  for (let yi = 0; yi < ny; yi++) {
    const y = (mt + (ny - 1 - yi) * ch + ch / 2 + 2.5).toFixed(2);
    s += `<text x="${ml - 6}" y="${y}" text-anchor="end" font-size="7.5" fill="#666">${esc(opts.yCats[yi] as string)}</text>\n`;
  }
  s += `<text x="14" y="${mt + ph / 2}" text-anchor="middle" font-size="8.5" fill="#444" transform="rotate(-90,14,${mt + ph / 2})">${esc(opts.yLabel)}</text>\n`;

  // color scale bar
  const bx = ml + pw + 26;
  s += `<defs><linearGradient id="ramp" x1="0" y1="1" x2="0" y2="0">` +
    `<stop offset="0" stop-color="${opts.low}"/>` +
    `<stop offset="1" stop-color="${opts.high}"/>` +
    `</linearGradient></defs>\n`;
  s += `<rect x="${bx}" y="${mt}" width="12" height="${ph}" fill="url(#ramp)" stroke="#999" stroke-width="0.5"/>\n`;
  s += `<text x="${bx + 16}" y="${mt + 6}" font-size="7" fill="#666">${esc(fnum(opts.vMax, 3))}</text>\n`;
  s += `<text x="${bx + 16}" y="${mt + ph}" font-size="7" fill="#666">${esc(fnum(opts.vMin, 3))}</text>\n`;
  s += `<text x="${bx + 6}" y="${mt - 8}" text-anchor="middle" font-size="7" fill="#444">${esc(opts.scaleLabel)}</text>\n`;

  s += `</svg>\n`;
  return s;
}
