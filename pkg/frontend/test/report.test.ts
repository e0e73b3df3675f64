import { readFileSync } from "fs";
import { join } from "path";

import { describe, expect, it } from "vitest";

import { ReportParseError, parseReportCsv, parseReportJson } from "../src/report";

const fixture = (name: string) => readFileSync(join(__dirname, "fixtures", name), "utf8");

describe("parseReportJson", () => {
  it("reads a sweep report", () => {
    const report = parseReportJson(fixture("arazy_sweep.json"));
    expect(report.rows).toHaveLength(8);
    expect(report.rows[0].family).toBe("divided_difference");
    expect(report.rows[0].ratio).toBeTypeOf("number");
    expect(report.config_hash).toMatch(/^[0-9a-f]{64}$/);
  });

  it("keeps null norms as nulls", () => {
    const report = parseReportJson(fixture("arazy_sweep.json"));
    expect(report.rows[0].norms.hms).toBeNull();
    expect(report.rows[0].norms.hms_delta).toBeTypeOf("number");
  });

  it("rejects documents without rows", () => {
    expect(() => parseReportJson("{}" )).toThrow(ReportParseError);
    expect(() => parseReportJson("not json")).toThrow(/not valid JSON/);
  });
});

describe("parseReportCsv", () => {
  it("reads the fixed column order", () => {
    const report = parseReportCsv(fixture("toeplitz_sweep.csv"));
    expect(report.rows).toHaveLength(6);
    expect(report.rows[0].params).toEqual({ m: "sign" });
    expect(report.rows[0].norm_estimate?.kind).toBe("lower_bound");
  });

  it("rejects a wrong header with a location", () => {
    try {
      parseReportCsv("a,b,c\n1,2,3\n");
      expect.unreachable();
    } catch (err) {
      expect(err).toBeInstanceOf(ReportParseError);
      expect((err as Error).message).toContain("line 1");
    }
  });

  it("rejects malformed quoting with a location", () => {
    expect(() => parseReportCsv(fixture("malformed.csv"))).toThrow(ReportParseError);
  });

  it("agrees with the JSON reader on shared fields", () => {
    const csv = parseReportCsv(fixture("toeplitz_sweep.csv"));
    for (const row of csv.rows) {
      expect(row.error).toBe("");
      expect(row.ratio).toBeTypeOf("number");
      expect(row.norm_estimate?.value).toBeGreaterThan(0);
    }
  });
});
