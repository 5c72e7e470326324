/**
 * Strict readers for the scenario CSVs.
 *
 * The simulator writes complete, regular tables: every design carries the
 * same realization range, the same SNR grid, and the same eigenvalue count.
 * The readers verify that regularity instead of trusting it, so a file that
 * was truncated — mid-row or at a clean line boundary — fails loudly rather
 * than producing a figure with silently missing data.
 */

import { readFileSync } from "node:fs";
import { basename } from "node:path";
import Papa from "papaparse";
import type { CapacityTable, EigTable, PowerTable } from "./model.js";

/** A CSV needed by a requested panel is absent from the scenario directory. */
export class MissingPanelError extends Error {}

/** A CSV exists but does not parse as a complete, regular table. */
export class MalformedCsvError extends Error {}

const POWER_HEADER = ["realization", "design", "sigma2_f"];
const CAPACITY_HEADER = ["design", "snr_db", "capacity_bits"];
const EIGS_HEADER = ["design", "index", "mean_eigenvalue"];

function fail(file: string, detail: string): never {
  throw new MalformedCsvError(`${basename(file)}: ${detail}`);
}

/** Parse with exact-header checking; returns raw string rows. */
function parseRows(file: string, header: readonly string[]): Record<string, string>[] {
  let text: string;
  try {
    text = readFileSync(file, "utf8");
  } catch {
    throw new MissingPanelError(`cannot read ${basename(file)}`);
  }
  const parsed = Papa.parse<Record<string, string>>(text, {
    header: true,
    delimiter: ",",
    skipEmptyLines: true,
  });
  const fields = parsed.meta.fields ?? [];
  if (fields.join(",") !== header.join(",")) {
    fail(file, `expected header '${header.join(",")}', got '${fields.join(",")}'`);
  }
  for (const err of parsed.errors) {
    // FieldMismatch is what a byte-level truncation mid-row produces.
    const line = err.row === undefined ? "?" : String(err.row + 2);
    fail(file, `line ${line}: ${err.message}`);
  }
  if (parsed.data.length === 0) fail(file, "no data rows");
  return parsed.data;
}

function toNumber(file: string, row: number, field: string, raw: string | undefined): number {
  if (raw === undefined || raw.trim() === "") {
    fail(file, `line ${row + 2}: empty ${field}`);
  }
  const value = Number(raw);
  if (!Number.isFinite(value)) {
    fail(file, `line ${row + 2}: ${field} ${JSON.stringify(raw)} is not a finite number`);
  }
  return value;
}

function toInt(file: string, row: number, field: string, raw: string | undefined): number {
  const value = toNumber(file, row, field, raw);
  if (!Number.isInteger(value)) {
    fail(file, `line ${row + 2}: ${field} ${JSON.stringify(raw)} is not an integer`);
  }
  return value;
}

function toLabel(file: string, row: number, raw: string | undefined): string {
  if (raw === undefined || raw.trim() === "") {
    fail(file, `line ${row + 2}: empty design label`);
  }
  return raw;
}

/** Group values per design, preserving first-appearance order. */
function groupByDesign<T>(rows: { design: string; value: T }[]): Map<string, T[]> {
  const groups = new Map<string, T[]>();
  for (const { design, value } of rows) {
    const bucket = groups.get(design);
    if (bucket === undefined) {
      groups.set(design, [value]);
    } else {
      bucket.push(value);
    }
  }
  return groups;
}

/** realization,design,sigma2_f — one row per design per channel draw. */
export function readPowerCsv(file: string): PowerTable {
  const rows = parseRows(file, POWER_HEADER).map((r, i) => ({
    design: toLabel(file, i, r["design"]),
    value: {
      realization: toInt(file, i, "realization", r["realization"]),
      sigma2: toNumber(file, i, "sigma2_f", r["sigma2_f"]),
    },
  }));
  const groups = groupByDesign(rows);

  let realizations = -1;
  const byDesign = new Map<string, number[]>();
  for (const [design, values] of groups) {
    values.forEach((v, i) => {
      if (v.realization !== i) {
        fail(file, `design ${design}: realization ${v.realization} where ${i} expected ` +
          "(rows missing or out of order)");
      }
    });
    if (realizations === -1) realizations = values.length;
    if (values.length !== realizations) {
      fail(file, `design ${design}: ${values.length} realizations, ` +
        `other designs have ${realizations}`);
    }
    byDesign.set(design, values.map((v) => v.sigma2));
  }
  return { designs: [...groups.keys()], realizations, byDesign };
}

/** design,snr_db,capacity_bits — mean capacity over a shared SNR grid. */
export function readCapacityCsv(file: string): CapacityTable {
  const rows = parseRows(file, CAPACITY_HEADER).map((r, i) => ({
    design: toLabel(file, i, r["design"]),
    value: {
      snr: toNumber(file, i, "snr_db", r["snr_db"]),
      bits: toNumber(file, i, "capacity_bits", r["capacity_bits"]),
    },
  }));
  const groups = groupByDesign(rows);

  let snrGridDb: number[] | null = null;
  const byDesign = new Map<string, number[]>();
  for (const [design, values] of groups) {
    const grid = values.map((v) => v.snr);
    if (snrGridDb === null) {
      snrGridDb = grid;
    } else if (grid.length !== snrGridDb.length ||
               grid.some((s, i) => s !== snrGridDb![i])) {
      fail(file, `design ${design}: SNR grid differs from the first design's grid`);
    }
    byDesign.set(design, values.map((v) => v.bits));
  }
  return { designs: [...groups.keys()], snrGridDb: snrGridDb!, byDesign };
}

/** design,index,mean_eigenvalue — sorted spectrum, 1-based index. */
export function readEigsCsv(file: string): EigTable {
  const rows = parseRows(file, EIGS_HEADER).map((r, i) => ({
    design: toLabel(file, i, r["design"]),
    value: {
      index: toInt(file, i, "index", r["index"]),
      eig: toNumber(file, i, "mean_eigenvalue", r["mean_eigenvalue"]),
    },
  }));
  const groups = groupByDesign(rows);

  let count = -1;
  const byDesign = new Map<string, number[]>();
  for (const [design, values] of groups) {
    values.forEach((v, i) => {
      if (v.index !== i + 1) {
        fail(file, `design ${design}: eigenvalue index ${v.index} where ${i + 1} expected`);
      }
    });
    if (count === -1) count = values.length;
    if (values.length !== count) {
      fail(file, `design ${design}: ${values.length} eigenvalues, ` +
        `other designs have ${count}`);
    }
    byDesign.set(design, values.map((v) => v.eig));
  }
  return { designs: [...groups.keys()], count, byDesign };
}
