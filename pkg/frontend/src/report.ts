/**
 * Report schema and parsers.
 *
 * Mirrors the documented report layout of the sweep harness: a JSON
 * document {version, config_hash, rows} or a CSV file with the fixed
 * column order below.  The parsers only read; they never mutate inputs.
 */

import Papa from "papaparse";

export interface NormEstimate {
  value: number;
  kind: string;
  p: number | "inf";
  amplification_level: number;
  trials: number;
  seed: number;
}

export interface ReportRow {
  family: string;
  params: Record<string, unknown>;
  p: number;
  N: number;
  h: number;
  norm_estimate: NormEstimate | null;
  norms: {
    hms: number | null;
    hms_delta: number | null;
    hms_sobolev: number | null;
  };
  ratio: number | null;
  ratio_norm: string;
  error: string;
}

export interface Report {
  version: string;
  config_hash: string;
  rows: ReportRow[];
}

/** Fixed CSV column order shared with the sweep harness. */
export const CSV_COLUMNS = [
  "family", "params", "p", "N", "h",
  "estimate_value", "estimate_kind", "amplification_level", "trials", "seed",
  "hms_total", "hms_delta_total", "hms_sobolev",
  "ratio", "ratio_norm", "error", "config_hash", "version",
] as const;

export class ReportParseError extends Error {
  constructor(message: string, readonly location?: string) {
    super(location ? `${message} (${location})` : message);
    this.name = "ReportParseError";
  }
}

function asNumber(value: unknown, field: string): number {
  if (typeof value !== "number" || Number.isNaN(value)) {
    throw new ReportParseError(`field ${field} is not a number: ${JSON.stringify(value)}`);
  }
  return value;
}

function optionalNumber(value: unknown): number | null {
  return typeof value === "number" && !Number.isNaN(value) ? value : null;
}

export function parseReportJson(text: string): Report {
  let doc: unknown;
  try {
    doc = JSON.parse(text);
  } catch (err) {
    throw new ReportParseError(`input is not valid JSON: ${(err as Error).message}`);
  }
  const obj = doc as Record<string, unknown>;
  if (!obj || !Array.isArray(obj.rows)) {
    throw new ReportParseError("JSON document has no rows array; expected a sweep report");
  }
  const rows: ReportRow[] = obj.rows.map((raw, index) => {
    const r = raw as Record<string, unknown>;
    const norms = (r.norms ?? {}) as Record<string, unknown>;
    try {
      return {
        family: String(r.family ?? ""),
        params: (r.params ?? {}) as Record<string, unknown>,
        p: asNumber(r.p, "p"),
        N: asNumber(r.N, "N"),
        h: asNumber(r.h, "h"),
        norm_estimate: (r.norm_estimate as NormEstimate | null) ?? null,
        norms: {
          hms: optionalNumber(norms.hms),
          hms_delta: optionalNumber(norms.hms_delta),
          hms_sobolev: optionalNumber(norms.hms_sobolev),
        },
        ratio: optionalNumber(r.ratio),
        ratio_norm: String(r.ratio_norm ?? ""),
        error: String(r.error ?? ""),
      };
    } catch (err) {
      if (err instanceof ReportParseError) {
        throw new ReportParseError(err.message, `row ${index}`);
      }
      throw err;
    }
  });
  return {
    version: String(obj.version ?? ""),
    config_hash: String(obj.config_hash ?? ""),
    rows,
  };
}

function cell(record: Record<string, string>, name: string): string {
  return record[name] ?? "";
}

function cellNumber(record: Record<string, string>, name: string, line: number): number {
  const raw = cell(record, name);
  const value = raw === "inf" ? Infinity : Number(raw);
  if (raw === "" || Number.isNaN(value)) {
    throw new ReportParseError(`cell ${name} is not numeric: ${JSON.stringify(raw)}`, `line ${line}`);
  }
  return value;
}

function cellOptional(record: Record<string, string>, name: string): number | null {
  const raw = cell(record, name);
  if (raw === "") return null;
  const value = Number(raw);
  return Number.isNaN(value) ? null : value;
}

export function parseReportCsv(text: string): Report {
  const parsed = Papa.parse<string[]>(text.trim(), { skipEmptyLines: true });
  if (parsed.errors.length > 0) {
    const first = parsed.errors[0];
    throw new ReportParseError(
      `CSV parse failure: ${first.message}`,
      `row ${first.row ?? "?"}`,
    );
  }
  const data = parsed.data;
  if (data.length === 0) {
    throw new ReportParseError("CSV file is empty; expected the report header");
  }
  const header = data[0];
  if (header.join(",") !== CSV_COLUMNS.join(",")) {
    throw new ReportParseError(
      `CSV header does not match the documented column order; expected ${CSV_COLUMNS.join(",")}`,
      "line 1",
    );
  }
  let configHash = "";
  let version = "";
  const rows: ReportRow[] = data.slice(1).map((cells, i) => {
    const line = i + 2;
    if (cells.length !== CSV_COLUMNS.length) {
      throw new ReportParseError(
        `expected ${CSV_COLUMNS.length} cells, found ${cells.length}`, `line ${line}`);
    }
    const record: Record<string, string> = {};
    CSV_COLUMNS.forEach((name, k) => (record[name] = cells[k]));
    let params: Record<string, unknown> = {};
    try {
      params = JSON.parse(cell(record, "params") || "{}");
    } catch (err) {
      throw new ReportParseError(
        `params cell is not valid JSON: ${(err as Error).message}`, `line ${line}`);
    }
    const estimateValue = cellOptional(record, "estimate_value");
    const estimate: NormEstimate | null = estimateValue === null ? null : {
      value: estimateValue,
      kind: cell(record, "estimate_kind"),
      p: cell(record, "p") === "inf" ? "inf" : cellNumber(record, "p", line),
      amplification_level: cellNumber(record, "amplification_level", line),
      trials: cellNumber(record, "trials", line),
      seed: cellNumber(record, "seed", line),
    };
    configHash = cell(record, "config_hash");
    version = cell(record, "version");
    return {
      family: cell(record, "family"),
      params,
      p: cellNumber(record, "p", line),
      N: cellNumber(record, "N", line),
      h: cellNumber(record, "h", line),
      norm_estimate: estimate,
      norms: {
        hms: cellOptional(record, "hms_total"),
        hms_delta: cellOptional(record, "hms_delta_total"),
        hms_sobolev: cellOptional(record, "hms_sobolev"),
      },
      ratio: cellOptional(record, "ratio"),
      ratio_norm: cell(record, "ratio_norm"),
      error: cell(record, "error"),
    };
  });
  return { version, config_hash: configHash, rows };
}

/** Parse a report from text, dispatching on the file suffix. */
export function parseReport(text: string, path: string): Report {
  return path.toLowerCase().endsWith(".csv") ? parseReportCsv(text) : parseReportJson(text);
}
