import { readFileSync, rmSync, writeFileSync } from "node:fs";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, test } from "vitest";
import {
  MalformedCsvError,
  MissingPanelError,
  readCapacityCsv,
  readEigsCsv,
  readPowerCsv,
} from "../src/csv.js";
import { scratchDir, writeScenario } from "./helpers.js";

let dir: string;

beforeAll(() => {
  dir = scratchDir("csv-test-");
  writeScenario(dir);
});

afterAll(() => {
  rmSync(dir, { recursive: true, force: true });
});

function writeTemp(name: string, content: string): string {
  const file = join(dir, name);
  writeFileSync(file, content);
  return file;
}

describe("readPowerCsv", () => {
  test("parses designs in file order with per-design columns", () => {
    const table = readPowerCsv(join(dir, "power.csv"));
    expect(table.designs).toEqual(
      ["RAND", "OPT-DIAG", "OPT-DIAG-PH", "OPT-GEN", "OPT-GEN-PH"]);
    expect(table.realizations).toBe(8);
    expect(table.byDesign.get("RAND")).toEqual(
      [100, 101, 102, 103, 104, 105, 106, 107]);
  });

  test("rejects a wrong header", () => {
    const file = writeTemp("h.csv", "realization,design,power\n0,RAND,1.0\n");
    expect(() => readPowerCsv(file)).toThrow(MalformedCsvError);
    expect(() => readPowerCsv(file)).toThrow(/expected header/);
  });

  test("rejects an empty file", () => {
    const file = writeTemp("empty.csv", "");
    expect(() => readPowerCsv(file)).toThrow(MalformedCsvError);
  });

  test("rejects a header with no rows", () => {
    const file = writeTemp("rows.csv", "realization,design,sigma2_f\n");
    expect(() => readPowerCsv(file)).toThrow(/no data rows/);
  });

  test("rejects non-numeric values with a line number", () => {
    const file = writeTemp("nan.csv",
      "realization,design,sigma2_f\n0,RAND,1.5\n1,RAND,oops\n");
    expect(() => readPowerCsv(file)).toThrow(/line 3: sigma2_f "oops"/);
  });

  test("rejects a gap in the realization sequence", () => {
    const file = writeTemp("gap.csv",
      "realization,design,sigma2_f\n0,RAND,1.0\n2,RAND,2.0\n");
    expect(() => readPowerCsv(file)).toThrow(/realization 2 where 1 expected/);
  });

  test("rejects designs with unequal realization counts", () => {
    const file = writeTemp("uneq.csv",
      "realization,design,sigma2_f\n0,RAND,1.0\n1,RAND,2.0\n0,GH,3.0\n");
    expect(() => readPowerCsv(file)).toThrow(/1 realizations, other designs have 2/);
  });

  test("rejects a byte-level truncation mid-row", () => {
    const original = readFileSync(join(dir, "power.csv"), "utf8");
    const file = writeTemp("cut.csv",
      original.slice(0, Math.floor(original.length * 0.6)));
    expect(() => readPowerCsv(file)).toThrow(MalformedCsvError);
  });

  test("throws MissingPanelError for an absent file", () => {
    expect(() => readPowerCsv(join(dir, "nope.csv"))).toThrow(MissingPanelError);
  });
});

describe("readCapacityCsv", () => {
  test("parses a shared SNR grid", () => {
    const table = readCapacityCsv(join(dir, "capacity.csv"));
    expect(table.snrGridDb).toEqual([-20, -10, 0, 10, 20, 30]);
    expect(table.byDesign.get("RAND")).toEqual([1, 11, 21, 31, 41, 51]);
    expect(table.byDesign.size).toBe(5);
  });

  test("rejects designs whose grid differs", () => {
    const file = writeTemp("grid.csv",
      "design,snr_db,capacity_bits\nRAND,0.0,1.0\nRAND,10.0,2.0\nGH,0.0,1.0\nGH,15.0,2.0\n");
    expect(() => readCapacityCsv(file)).toThrow(/SNR grid differs/);
  });

  test("rejects a clean-line truncation that drops grid points", () => {
    const original = readFileSync(join(dir, "capacity.csv"), "utf8");
    const lines = original.trimEnd().split("\n");
    const file = writeTemp("tail.csv", lines.slice(0, -2).join("\n") + "\n");
    expect(() => readCapacityCsv(file)).toThrow(MalformedCsvError);
  });
});

describe("readEigsCsv", () => {
  test("parses 1-based contiguous spectra", () => {
    const table = readEigsCsv(join(dir, "eigs.csv"));
    expect(table.count).toBe(12);
    expect(table.byDesign.get("RAND")![0]).toBeCloseTo(10.0, 10);
  });

  test("rejects an index gap", () => {
    const file = writeTemp("idxgap.csv",
      "design,index,mean_eigenvalue\nRAND,1,2.0\nRAND,3,1.0\n");
    expect(() => readEigsCsv(file)).toThrow(/index 3 where 2 expected/);
  });

  test("rejects a zero-based index", () => {
    const file = writeTemp("idx0.csv",
      "design,index,mean_eigenvalue\nRAND,0,2.0\n");
    expect(() => readEigsCsv(file)).toThrow(/index 0 where 1 expected/);
  });

  test("rejects non-integer indexes", () => {
    const file = writeTemp("idxf.csv",
      "design,index,mean_eigenvalue\nRAND,1.5,2.0\n");
    expect(() => readEigsCsv(file)).toThrow(/not an integer/);
  });
});
