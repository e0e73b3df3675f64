/**
 * The three figure kinds rendered from sweep reports:
 *
 *   ratio_vs_p    normalized-estimate curves against p, one curve per N
 *   lp_constants  the same quantity against N, one curve per p
 *   hms_chain     scatter of the windowed Sobolev norm against the
 *                 derivative-sum norm, row by row
 *
 * Rendering is pure: report in, SVG text out.
 */

import { Report, ReportRow } from "./report";
import { PALETTE, SvgCanvas, linearScale, plotArea } from "./svg";

export const PLOT_KINDS = ["ratio_vs_p", "lp_constants", "hms_chain"] as const;
export type PlotKind = (typeof PLOT_KINDS)[number];

export interface PlotSpec {
  kind: PlotKind;
  title?: string;
}

export class MissingColumnsError extends Error {
  constructor(kind: string, readonly columns: string[]) {
    super(`report has no usable rows for ${kind}; required columns: ${columns.join(", ")}`);
    this.name = "MissingColumnsError";
  }
}

const REQUIRED: Record<PlotKind, string[]> = {
  ratio_vs_p: ["p", "N", "ratio"],
  lp_constants: ["N", "p", "ratio"],
  hms_chain: ["hms_total", "hms_sobolev"],
};

function usable(kind: PlotKind, row: ReportRow): boolean {
  if (kind === "hms_chain") {
    return row.norms.hms !== null && row.norms.hms_sobolev !== null;
  }
  return row.ratio !== null;
}

function groupBy<K>(rows: ReportRow[], key: (row: ReportRow) => K): Map<K, ReportRow[]> {
  const out = new Map<K, ReportRow[]>();
  for (const row of rows) {
    const k = key(row);
    const bucket = out.get(k);
    if (bucket) bucket.push(row);
    else out.set(k, [row]);
  }
  return out;
}

function extent(values: number[]): [number, number] {
  return [Math.min(...values), Math.max(...values)];
}

function curveFigure(
  rows: ReportRow[],
  xOf: (row: ReportRow) => number,
  seriesOf: (row: ReportRow) => number,
  seriesLabel: (key: number) => string,
  xLabel: string,
  title: string,
): string {
  const canvas = new SvgCanvas();
  const area = plotArea();
  const xs = rows.map(xOf);
  const ys = rows.map((r) => r.ratio as number);
  const xScale = linearScale(extent(xs), area.x);
  const yScale = linearScale([Math.min(0, ...ys), Math.max(...ys)], area.y);
  canvas.axes(xScale, yScale, xLabel, "estimate / (p^2/(p-1) * norm)");
  const groups = [...groupBy(rows, seriesOf).entries()].sort((a, b) => a[0] - b[0]);
  const legend: Array<[string, string]> = [];
  groups.forEach(([key, bucket], i) => {
    const color = PALETTE[i % PALETTE.length];
    const pts = bucket
      .map((r): [number, number] => [xOf(r), r.ratio as number])
      .sort((a, b) => a[0] - b[0]);
    canvas.polyline(pts.map(([x, y]) => [xScale(x), yScale(y)]), color);
    for (const [x, y] of pts) canvas.circle(xScale(x), yScale(y), 2.5, color);
    legend.push([seriesLabel(key), color]);
  });
  canvas.legend(legend);
  canvas.title(title);
  return canvas.render();
}

function chainFigure(rows: ReportRow[], title: string): string {
  const canvas = new SvgCanvas();
  const area = plotArea();
  const xs = rows.map((r) => r.norms.hms as number);
  const ys = rows.map((r) => r.norms.hms_sobolev as number);
  const hi = Math.max(...xs, ...ys);
  const xScale = linearScale([0, hi], area.x);
  const yScale = linearScale([0, hi], area.y);
  canvas.axes(xScale, yScale, "derivative-sum norm", "windowed Sobolev norm");
  canvas.line(xScale(0), yScale(0), xScale(hi), yScale(hi), "#bbb");
  rows.forEach((row, i) => {
    canvas.circle(xScale(xs[i]), yScale(ys[i]), 3, PALETTE[0]);
  });
  canvas.title(title);
  return canvas.render();
}

/** Render one figure; empty reports yield a "no data" annotation. */
export function renderPlot(report: Report, spec: PlotSpec): string {
  const kind = spec.kind;
  if (!PLOT_KINDS.includes(kind)) {
    throw new Error(`unknown plot kind ${kind}; choose from ${PLOT_KINDS.join(", ")}`);
  }
  if (report.rows.length === 0) {
    const canvas = new SvgCanvas();
    canvas.title(spec.title ?? kind);
    canvas.annotation("no data");
    return canvas.render();
  }
  const rows = report.rows.filter((row) => usable(kind, row));
  if (rows.length === 0) {
    throw new MissingColumnsError(kind, REQUIRED[kind]);
  }
  if (kind === "ratio_vs_p") {
    return curveFigure(rows, (r) => r.p, (r) => r.N, (n) => `N=${n}`, "p",
      spec.title ?? `ratio vs p (${rows[0].family})`);
  }
  if (kind === "lp_constants") {
    return curveFigure(rows, (r) => r.N, (r) => r.p, (p) => `p=${p}`, "N",
      spec.title ?? `constants vs N (${rows[0].family})`);
  }
  return chainFigure(rows, spec.title ?? `comparison chain (${rows[0].family})`);
}
