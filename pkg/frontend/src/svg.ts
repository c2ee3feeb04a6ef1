/** Deterministic SVG plotting primitives (no DOM, byte-stable output). */

export interface Scale {
  (x: number): number;
  domain: [number, number];
  range: [number, number];
  log: boolean;
}

/** Fixed-precision formatter: stable across runs and platforms. */
export function fmt(x: number, digits = 2): string {
  const s = x.toFixed(digits);
  return s === `-${(0).toFixed(digits)}` ? (0).toFixed(digits) : s;
}

export function linearScale(domain: [number, number], range: [number, number]): Scale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0 || 1;
  const scale = ((x: number) => r0 + ((x - d0) / span) * (r1 - r0)) as Scale;
  scale.domain = domain;
  scale.range = range;
  scale.log = false;
  return scale;
}

export function logScale(domain: [number, number], range: [number, number]): Scale {
  const [d0, d1] = domain;
  if (d0 <= 0 || d1 <= 0) {
    throw new Error("log scale requires positive domain");
  }
  const inner = linearScale([Math.log10(d0), Math.log10(d1)], range);
  const scale = ((x: number) => inner(Math.log10(x))) as Scale;
  scale.domain = domain;
  scale.range = range;
  scale.log = true;
  return scale;
}

export function extent(values: number[], pad = 0.05): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  const span = hi - lo || Math.abs(hi) || 1;
  return [lo - pad * span, hi + pad * span];
}

export function ticks(domain: [number, number], count = 5): number[] {
  const [lo, hi] = domain;
  const rawStep = (hi - lo) / Math.max(1, count);
  const power = Math.floor(Math.log10(Math.abs(rawStep) || 1));
  const base = Math.pow(10, power);
  const step = [1, 2, 5, 10].map((m) => m * base).find((s) => (hi - lo) / s <= count) ?? base * 10;
  const first = Math.ceil(lo / step) * step;
  const out: number[] = [];
  for (let v = first; v <= hi + 1e-12 * step; v += step) {
    out.push(Math.abs(v) < 1e-12 * step ? 0 : v);
  }
  return out;
}

export function logTicks(domain: [number, number]): number[] {
  const lo = Math.ceil(Math.log10(domain[0]) - 1e-9);
  const hi = Math.floor(Math.log10(domain[1]) + 1e-9);
  const out: number[] = [];
  for (let p = lo; p <= hi; p += 1) out.push(Math.pow(10, p));
  return out.length >= 2 ? out : domain.slice() as [number, number] as number[];
}

export const PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

/** Small viridis-like ramp, piecewise-linear in RGB; t in [0, 1]. */
export function heatColor(t: number): string {
  const stops: [number, number, number][] = [
    [68, 1, 84],
    [59, 82, 139],
    [33, 145, 140],
    [94, 201, 98],
    [253, 231, 37],
  ];
  const clamped = Math.min(1, Math.max(0, t));
  const pos = clamped * (stops.length - 1);
  const i = Math.min(stops.length - 2, Math.floor(pos));
  const f = pos - i;
  const mix = stops[i].map((c, ch) => Math.round(c + f * (stops[i + 1][ch] - c)));
  return `rgb(${mix[0]},${mix[1]},${mix[2]})`;
}

export interface Margins {
  top: number;
  right: number;
  bottom: number;
  left: number;
}

export class Plot {
  private parts: string[] = [];
  readonly x: Scale;
  readonly y: Scale;

  constructor(
    readonly width: number,
    readonly height: number,
    readonly margins: Margins,
    xDomain: [number, number],
    yDomain: [number, number],
    opts: { logX?: boolean; logY?: boolean } = {},
  ) {
    const xr: [number, number] = [margins.left, width - margins.right];
    const yr: [number, number] = [height - margins.bottom, margins.top];
    this.x = opts.logX ? logScale(xDomain, xr) : linearScale(xDomain, xr);
    this.y = opts.logY ? logScale(yDomain, yr) : linearScale(yDomain, yr);
  }

  raw(fragment: string): void {
    this.parts.push(fragment);
  }

  axes(xLabel: string, yLabel: string, title = ""): void {
    const { width, height, margins } = this;
    const x0 = margins.left;
    const x1 = width - margins.right;
    const y0 = height - margins.bottom;
    const y1 = margins.top;
    this.parts.push(
      `<rect x="${fmt(x0)}" y="${fmt(y1)}" width="${fmt(x1 - x0)}" height="${fmt(
        y0 - y1,
      )}" fill="none" stroke="#333" stroke-width="1"/>`,
    );
    const xt = this.x.log ? logTicks(this.x.domain) : ticks(this.x.domain);
    for (const t of xt) {
      const px = this.x(t);
      this.parts.push(
        `<line x1="${fmt(px)}" y1="${fmt(y0)}" x2="${fmt(px)}" y2="${fmt(y0 + 4)}" stroke="#333" stroke-width="1"/>`,
        `<text x="${fmt(px)}" y="${fmt(y0 + 16)}" font-size="10" text-anchor="middle">${tickLabel(t, this.x.log)}</text>`,
      );
    }
    const yt = this.y.log ? logTicks(this.y.domain) : ticks(this.y.domain);
    for (const t of yt) {
      const py = this.y(t);
      this.parts.push(
        `<line x1="${fmt(x0 - 4)}" y1="${fmt(py)}" x2="${fmt(x0)}" y2="${fmt(py)}" stroke="#333" stroke-width="1"/>`,
        `<text x="${fmt(x0 - 6)}" y="${fmt(py + 3)}" font-size="10" text-anchor="end">${tickLabel(t, this.y.log)}</text>`,
      );
    }
    this.parts.push(
      `<text x="${fmt((x0 + x1) / 2)}" y="${fmt(height - 6)}" font-size="11" text-anchor="middle">${escapeXml(xLabel)}</text>`,
      `<text x="12" y="${fmt((y0 + y1) / 2)}" font-size="11" text-anchor="middle" transform="rotate(-90 12 ${fmt((y0 + y1) / 2)})">${escapeXml(yLabel)}</text>`,
    );
    if (title) {
      this.parts.push(
        `<text x="${fmt((x0 + x1) / 2)}" y="${fmt(y1 - 6)}" font-size="12" text-anchor="middle" font-weight="bold">${escapeXml(title)}</text>`,
      );
    }
  }

  line(xs: number[], ys: number[], color: string, opts: { width?: number; dash?: string } = {}): void {
    const points = xs.map((x, i) => `${fmt(this.x(x))},${fmt(this.y(ys[i]))}`).join(" ");
    const dash = opts.dash ? ` stroke-dasharray="${opts.dash}"` : "";
    this.parts.push(
      `<polyline points="${points}" fill="none" stroke="${color}" stroke-width="${opts.width ?? 1.5}"${dash}/>`,
    );
  }

  scatter(xs: number[], ys: number[], color: string, r = 2.5): void {
    for (let i = 0; i < xs.length; i += 1) {
      this.parts.push(
        `<circle cx="${fmt(this.x(xs[i]))}" cy="${fmt(this.y(ys[i]))}" r="${r}" fill="${color}"/>`,
      );
    }
  }

  errorBars(xs: number[], ys: number[], err: number[], color: string): void {
    for (let i = 0; i < xs.length; i += 1) {
      const px = this.x(xs[i]);
      const yLo = this.y(ys[i] - err[i]);
      const yHi = this.y(ys[i] + err[i]);
      this.parts.push(
        `<line x1="${fmt(px)}" y1="${fmt(yLo)}" x2="${fmt(px)}" y2="${fmt(yHi)}" stroke="${color}" stroke-width="1"/>`,
        `<line x1="${fmt(px - 3)}" y1="${fmt(yLo)}" x2="${fmt(px + 3)}" y2="${fmt(yLo)}" stroke="${color}" stroke-width="1"/>`,
        `<line x1="${fmt(px - 3)}" y1="${fmt(yHi)}" x2="${fmt(px + 3)}" y2="${fmt(yHi)}" stroke="${color}" stroke-width="1"/>`,
      );
    }
  }

  cell(x0: number, x1: number, y0: number, y1: number, color: string): void {
    const px = this.x(x0);
    const py = this.y(y1);
    const w = this.x(x1) - px;
    const h = this.y(y0) - py;
    this.parts.push(
      `<rect x="${fmt(px)}" y="${fmt(py)}" width="${fmt(w)}" height="${fmt(h)}" fill="${color}"/>`,
    );
  }

  legend(entries: { label: string; color: string; dash?: string }[]): void {
    const x = this.width - this.margins.right - 130;
    let y = this.margins.top + 12;
    for (const e of entries) {
      const dash = e.dash ? ` stroke-dasharray="${e.dash}"` : "";
      this.parts.push(
        `<line x1="${fmt(x)}" y1="${fmt(y - 3)}" x2="${fmt(x + 18)}" y2="${fmt(y - 3)}" stroke="${e.color}" stroke-width="2"${dash}/>`,
        `<text x="${fmt(x + 22)}" y="${fmt(y)}" font-size="10">${escapeXml(e.label)}</text>`,
      );
      y += 14;
    }
  }

  render(): string {
    return [
      `<svg xmlns="http://www.w3.org/2000/svg" width="${this.width}" height="${this.height}" viewBox="0 0 ${this.width} ${this.height}" font-family="Helvetica,Arial,sans-serif">`,
      `<rect width="${this.width}" height="${this.height}" fill="white"/>`,
      ...this.parts,
      "</svg>",
      "",
    ].join("\n");
  }
}

function tickLabel(t: number, log: boolean): string {
  if (log) {
    const p = Math.round(Math.log10(t));
    return `1e${p}`;
  }
  if (t !== 0 && (Math.abs(t) >= 1e4 || Math.abs(t) < 1e-2)) {
    return t.toExponential(1);
  }
  return Number.isInteger(t) ? String(t) : fmt(t, Math.abs(t) < 1 ? 2 : 1);
}

export function escapeXml(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}
