/**
 * Tiny deterministic SVG canvas: fixed size, fixed palette, fixed number
 * formatting, no timestamps or randomness, so identical inputs yield
 * byte-identical figures.
 */

export const WIDTH = 640;
export const HEIGHT = 420;
export const MARGIN = { top: 44, right: 24, bottom: 48, left: 64 };

export const PALETTE = [
  "#1f77b4", "#d62728", "#2ca02c", "#9467bd",
  "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
];

export function fmt(x: number): string {
  if (!Number.isFinite(x)) return String(x);
  if (x === 0) return "0";
  const printed = Math.abs(x) >= 1e4 || Math.abs(x) < 1e-3 ? x.toExponential(2) : x.toPrecision(4);
  return printed.replace(/(\.\d*?)0+(?=($|e))/, "$1").replace(/\.(?=($|e))/, "");
}

export interface Scale {
  (value: number): number;
  domain: [number, number];
}

export function linearScale(domain: [number, number], range: [number, number]): Scale {
  let [d0, d1] = domain;
  if (d0 === d1) {
    d0 -= 0.5;
    d1 += 0.5;
  }
  const scale = ((value: number) =>
    range[0] + ((value - d0) / (d1 - d0)) * (range[1] - range[0])) as Scale;
  scale.domain = [d0, d1];
  return scale;
}

export function ticks(domain: [number, number], count = 5): number[] {
  const [lo, hi] = domain;
  if (lo === hi) return [lo];
  const span = hi - lo;
  const step0 = Math.pow(10, Math.floor(Math.log10(span / count)));
  const err = (span / count) / step0;
  const step = step0 * (err >= 7.5 ? 10 : err >= 3.5 ? 5 : err >= 1.5 ? 2 : 1);
  const out: number[] = [];
  for (let v = Math.ceil(lo / step) * step; v <= hi + 1e-12 * span; v += step) {
    out.push(Math.abs(v) < step * 1e-9 ? 0 : v);
  }
  return out;
}

const escape = (s: string) =>
  s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;").replace(/"/g, "&quot;");

export class SvgCanvas {
  private parts: string[] = [];

  line(x1: number, y1: number, x2: number, y2: number, stroke: string, width = 1) {
    this.parts.push(
      `<line x1="${fmt(x1)}" y1="${fmt(y1)}" x2="${fmt(x2)}" y2="${fmt(y2)}" stroke="${stroke}" stroke-width="${width}"/>`,
    );
  }

  polyline(points: Array<[number, number]>, stroke: string) {
    const path = points.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(" ");
    this.parts.push(
      `<polyline points="${path}" fill="none" stroke="${stroke}" stroke-width="1.5"/>`,
    );
  }

  circle(x: number, y: number, r: number, fill: string) {
    this.parts.push(`<circle cx="${fmt(x)}" cy="${fmt(y)}" r="${r}" fill="${fill}"/>`);
  }

  text(x: number, y: number, content: string, opts: { anchor?: string; size?: number; fill?: string } = {}) {
    const anchor = opts.anchor ?? "start";
    const size = opts.size ?? 12;
    const fill = opts.fill ?? "#222";
    this.parts.push(
      `<text x="${fmt(x)}" y="${fmt(y)}" text-anchor="${anchor}" font-size="${size}" ` +
      `font-family="monospace" fill="${fill}">${escape(content)}</text>`,
    );
  }

  axes(xScale: Scale, yScale: Scale, xLabel: string, yLabel: string) {
    const x0 = MARGIN.left;
    const x1 = WIDTH - MARGIN.right;
    const y0 = HEIGHT - MARGIN.bottom;
    const y1 = MARGIN.top;
    this.line(x0, y0, x1, y0, "#222");
    this.line(x0, y0, x0, y1, "#222");
    for (const t of ticks(xScale.domain)) {
      const px = xScale(t);
      this.line(px, y0, px, y0 + 4, "#222");
      this.text(px, y0 + 18, fmt(t), { anchor: "middle", size: 10 });
    }
    for (const t of ticks(yScale.domain)) {
      const py = yScale(t);
      this.line(x0 - 4, py, x0, py, "#222");
      this.text(x0 - 8, py + 3, fmt(t), { anchor: "end", size: 10 });
      this.line(x0, py, x1, py, "#eee");
    }
    this.text((x0 + x1) / 2, HEIGHT - 12, xLabel, { anchor: "middle" });
    this.parts.push(
      `<text x="16" y="${fmt((y0 + y1) / 2)}" text-anchor="middle" font-size="12" ` +
      `font-family="monospace" fill="#222" transform="rotate(-90 16 ${fmt((y0 + y1) / 2)})">${escape(yLabel)}</text>`,
    );
  }

  legend(entries: Array<[string, string]>) {
    entries.forEach(([label, color], i) => {
      const y = MARGIN.top + 14 * i;
      const x = WIDTH - MARGIN.right - 150;
      this.line(x, y, x + 18, y, color, 2);
      this.text(x + 24, y + 4, label, { size: 10 });
    });
  }

  title(content: string) {
    this.text(WIDTH / 2, 24, content, { anchor: "middle", size: 14 });
  }

  annotation(content: string) {
    this.text(WIDTH / 2, HEIGHT / 2, content, { anchor: "middle", size: 16, fill: "#888" });
  }

  render(): string {
    return (
      `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" ` +
      `viewBox="0 0 ${WIDTH} ${HEIGHT}">\n<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>\n` +
      this.parts.join("\n") +
      "\n</svg>\n"
    );
  }
}

export function plotArea(): { x: [number, number]; y: [number, number] } {
  return {
    x: [MARGIN.left, WIDTH - MARGIN.right],
    y: [HEIGHT - MARGIN.bottom, MARGIN.top],
  };
}
