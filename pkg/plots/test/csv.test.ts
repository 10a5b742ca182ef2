import { mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { describe, expect, it } from "vitest";

import { EmptyCsvError, SchemaError, col, numCol, parseTable, requireColumns, requireRows } from "../dist/csv.js";

const dir = mkdtempSync(join(tmpdir(), "plots-csv-"));

function tmpCsv(name: string, text: string): string {
  const path = join(dir, name);
  writeFileSync(path, text);
  return path;
}

describe("parseTable", () => {
  it("splits header and data rows", () => {
    const t = parseTable(tmpCsv("ok.csv", "a,b\n1,x\n2,y\n"));
    expect(t.columns).toEqual(["a", "b"]);
    expect(t.rows).toEqual([["1", "x"], ["2", "y"]]);
  });

  it("keeps cell text verbatim", () => {
    const t = parseTable(tmpCsv("raw.csv", "v\n1.0986122886034915\n"));
    expect(col(t, "v")[0]).toBe("1.0986122886034915");
  });

  it("rejects ragged rows with the row number", () => {
    expect(() => parseTable(tmpCsv("ragged.csv", "a,b\n1\n")))
      .toThrow(/row 1 has 1 cells, header has 2/);
  });

  it("rejects a file with no header", () => {
    expect(() => parseTable(tmpCsv("void.csv", "")))
      .toThrow(EmptyCsvError);
  });
});

describe("column contract", () => {
  it("names both sides of a schema diff", () => {
    const t = parseTable(tmpCsv("diff.csv", "eps,cost\n0.1,2.0\n"));
    let message = "";
    try {
      requireColumns(t, ["s", "cost"]);
    } catch (err) {
      expect(err).toBeInstanceOf(SchemaError);
      message = (err as Error).message;
    }
    expect(message).toContain("missing columns [s]");
    expect(message).toContain("unexpected columns [eps]");
    expect(message).toContain("expected [s, cost]");
  });

  it("accepts the exact column set", () => {
    const t = parseTable(tmpCsv("exact.csv", "s,cost\n0.1,2.0\n"));
    expect(() => requireColumns(t, ["s", "cost"])).not.toThrow();
  });

  it("flags a header-only file", () => {
    const t = parseTable(tmpCsv("headeronly.csv", "s,cost\n"));
    expect(() => requireRows(t)).toThrow(/no data rows/);
  });

  it("flags non-numeric cells with the column name", () => {
    const t = parseTable(tmpCsv("alpha.csv", "s,cost\n0.1,abc\n"));
    expect(() => numCol(t, "cost")).toThrow(/non-numeric value "abc" in column cost/);
  });
});
