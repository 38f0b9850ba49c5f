/**
 * Sweep CSV schemas and strict parsing.
 *
 * The simulator writes long-format CSVs with a fixed header per sweep kind.
 * The plotting layer consumes them verbatim, so anything that does not match
 * the documented schema is rejected up front with the offending column named.
 */

import * as fs from "fs";
import Papa from "papaparse";

export type FigureKind = "outage_sweep" | "payoff_sweep" | "transfer_sweep";

export const FIGURE_KINDS: readonly FigureKind[] = [
  "outage_sweep",
  "payoff_sweep",
  "transfer_sweep",
];

type ColumnType = "int" | "float" | "method";

const SCHEMAS: Record<FigureKind, Record<string, ColumnType>> = {
  outage_sweep: {
    uav_count: "int",
    mno_count: "int",
    trial: "int",
    method: "method",
    mean_outage: "float",
  },
  payoff_sweep: {
    mno_count: "int",
    trial: "int",
    method: "method",
    sum_payoff: "float",
  },
  transfer_sweep: {
    uav_count: "int",
    mno_count: "int",
    trial: "int",
    transfer_count: "int",
  },
};

/** The two assignment strategies every sweep compares. */
export const METHODS = ["game", "random"] as const;

/** CSV content that does not line up with the documented sweep schema. */
export class SchemaError extends Error {
  readonly column: string;

  constructor(column: string, message: string) {
    super(message);
    this.name = "SchemaError";
    this.column = column;
  }
}

/** A CSV with no data rows; nothing can be plotted from it. */
export class EmptyCsvError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "EmptyCsvError";
  }
}

export interface SweepRow {
  [column: string]: number | string;
}

export function expectedColumns(kind: FigureKind): string[] {
  return Object.keys(SCHEMAS[kind]);
}

function parseCell(
  column: string,
  type: ColumnType,
  raw: string,
  rowIndex: number,
): number | string {
  const where = `row ${rowIndex + 1}`;
  if (type === "method") {
    if (!(METHODS as readonly string[]).includes(raw)) {
      throw new SchemaError(
        column,
        `column "${column}" must be one of ${METHODS.join("/")}, got "${raw}" (${where})`,
      );
    }
    return raw;
  }
  const value = Number(raw);
  if (raw.trim() === "" || !Number.isFinite(value)) {
    throw new SchemaError(
      column,
      `column "${column}" has a non-numeric value "${raw}" (${where})`,
    );
  }
  if (type === "int" && !Number.isInteger(value)) {
    throw new SchemaError(
      column,
      `column "${column}" must be an integer, got "${raw}" (${where})`,
    );
  }
  return value;
}

/**
 * Parse one sweep CSV against the schema of `kind`.
 *
 * Header validation is order-insensitive but exact: a missing or unexpected
 * column raises SchemaError naming it. A header-only or zero-byte file raises
 * EmptyCsvError.
 */
export function parseSweepCsv(path: string, kind: FigureKind): SweepRow[] {
  const content = fs.readFileSync(path, "utf8");
  return parseSweepText(content, kind);
}

/** Same contract as parseSweepCsv but on in-memory text. */
export function parseSweepText(content: string, kind: FigureKind): SweepRow[] {
  const schema = SCHEMAS[kind];
  if (content.trim() === "") {
    throw new EmptyCsvError("CSV is empty");
  }

  const parsed = Papa.parse<Record<string, string>>(content, {
    header: true,
    skipEmptyLines: "greedy",
  });
  const fields = parsed.meta.fields ?? [];

  for (const column of Object.keys(schema)) {
    if (!fields.includes(column)) {
      throw new SchemaError(column, `missing column "${column}"`);
    }
  }
  for (const column of fields) {
    if (!(column in schema)) {
      throw new SchemaError(column, `unexpected column "${column}"`);
    }
  }

  if (parsed.data.length === 0) {
    throw new EmptyCsvError("CSV has a header but no data rows");
  }

  return parsed.data.map((record, index) => {
    const row: SweepRow = {};
    for (const [column, type] of Object.entries(schema)) {
      const raw = record[column];
      if (raw === undefined) {
        throw new SchemaError(
          column,
          `column "${column}" is missing a value (row ${index + 1})`,
        );
      }
      row[column] = parseCell(column, type, raw, index);
    }
    return row;
  });
}
