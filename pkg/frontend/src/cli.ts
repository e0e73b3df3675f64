#!/usr/bin/env node
/**
 * plots --in report.json --kind ratio_vs_p --out fig.svg [--title text]
 *
 * Reads a sweep report (JSON or CSV, inferred from the suffix), renders
 * one figure per invocation, and writes the SVG to --out.  Idempotent and
 * deterministic: identical inputs produce identical bytes.  Exit codes:
 * 0 success (including the empty-report "no data" figure), 2 usage or
 * input errors (missing columns, malformed files).
 */

import { readFileSync, writeFileSync } from "fs";

import { MissingColumnsError, PLOT_KINDS, PlotKind, renderPlot } from "./plots";
import { ReportParseError, parseReport } from "./report";

interface CliArgs {
  input: string;
  kind: PlotKind;
  out: string;
  title?: string;
}

export function parseArgs(argv: string[]): CliArgs {
  const values: Record<string, string> = {};
  for (let i = 0; i < argv.length; i += 2) {
    const flag = argv[i];
    const value = argv[i + 1];
    if (!flag.startsWith("--") || value === undefined) {
      throw new Error(`malformed arguments near ${flag}; expected --flag value pairs`);
    }
    values[flag.slice(2)] = value;
  }
  const input = values["in"];
  const kind = values["kind"] as PlotKind;
  const out = values["out"];
  if (!input || !kind || !out) {
    throw new Error("usage: plots --in report.json --kind ratio_vs_p --out fig.svg [--title text]");
  }
  if (!PLOT_KINDS.includes(kind)) {
    throw new Error(`unknown plot kind ${kind}; choose from ${PLOT_KINDS.join(", ")}`);
  }
  return { input, kind, out, title: values["title"] };
}

export function runCli(argv: string[]): number {
  let args: CliArgs;
  try {
    args = parseArgs(argv);
  } catch (err) {
    process.stderr.write(`${(err as Error).message}\n`);
    return 2;
  }
  let text: string;
  try {
    text = readFileSync(args.input, "utf8");
  } catch (err) {
    process.stderr.write(`cannot read ${args.input}: ${(err as Error).message}\n`);
    return 2;
  }
  try {
    const report = parseReport(text, args.input);
    const svg = renderPlot(report, { kind: args.kind, title: args.title });
    writeFileSync(args.out, svg);
    return 0;
  } catch (err) {
    if (err instanceof ReportParseError || err instanceof MissingColumnsError) {
      process.stderr.write(`${err.message}\n`);
      return 2;
    }
    throw err;
  }
}

if (require.main === module) {
  process.exit(runCli(process.argv.slice(2)));
}
