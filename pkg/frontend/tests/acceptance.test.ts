/**
 * Gate for the figure pipeline: rendering the committed sample CSVs must
 * plot exactly the per-cell trial means present in the data. The means are
 * recomputed here from the raw text, independent of the library's own
 * parsing and aggregation, and compared to the values carried by the marks
 * in the rendered SVG. The tolerance is 1e-9.
 */

import * as fs from "fs";
import * as os from "os";
import * as path from "path";

import Papa from "papaparse";
import { describe, expect, it } from "vitest";

import { runCli } from "../src/cli";
import { renderFigureSvg } from "../src/render";
import { FigureKind } from "../src/schema";
import { extractMarks } from "./helpers";

const TOL = 1e-9;
const SAMPLE_DIR = path.join(__dirname, "..", "samples");

interface CellStats {
  mean: number;
  std: number;
  n: number;
}

/** Group raw CSV records by figure cell and reduce by hand. */
function recomputeCells(
  kind: FigureKind,
  records: Record<string, string>[],
): Map<string, CellStats> {
  const groups = new Map<string, number[]>();
  for (const record of records) {
    let key: string;
    let value: number;
    if (kind === "outage_sweep") {
      key = `${record.mno_count}|${record.method}|${record.uav_count}`;
      value = Number(record.mean_outage);
    } else if (kind === "payoff_sweep") {
      key = `|${record.method}|${record.mno_count}`;
      value = Number(record.sum_payoff);
    } else {
      key = `|${record.mno_count}|${record.uav_count}`;
      value = Number(record.transfer_count);
    }
    const bucket = groups.get(key);
    if (bucket) {
      bucket.push(value);
    } else {
      groups.set(key, [value]);
    }
  }
  const cells = new Map<string, CellStats>();
  for (const [key, values] of groups) {
    let total = 0;
    for (const v of values) {
      total += v;
    }
    const m = total / values.length;
    let ss = 0;
    for (const v of values) {
      ss += (v - m) * (v - m);
    }
    const std = values.length > 1 ? Math.sqrt(ss / (values.length - 1)) : 0;
    cells.set(key, { mean: m, std, n: values.length });
  }
  return cells;
}

function close(a: number, b: number): boolean {
  return Math.abs(a - b) <= TOL * Math.max(1, Math.abs(a), Math.abs(b));
}

interface KindReport {
  kind: FigureKind;
  cells: number;
  maxDelta: number;
}

function checkKind(kind: FigureKind): KindReport {
  const csvPath = path.join(SAMPLE_DIR, `${kind}.csv`);
  const text = fs.readFileSync(csvPath, "utf8");
  const parsed = Papa.parse<Record<string, string>>(text, {
    header: true,
    skipEmptyLines: "greedy",
  });
  const cells = recomputeCells(kind, parsed.data);

  const svg = renderFigureSvg({ inputCsv: csvPath, figureKind: kind });
  const marks = extractMarks(svg);

  expect(marks.length).toBe(cells.size);
  // The outage panel key is the MNO count; single-panel kinds use "".
  let maxDelta = 0;
  for (const mark of marks) {
    const key = `${mark.panel}|${mark.series}|${mark.x}`;
    const cell = cells.get(key);
    expect(cell, `no recomputed cell for mark ${key}`).toBeDefined();
    expect(close(mark.mean, cell!.mean)).toBe(true);
    expect(close(mark.std, cell!.std)).toBe(true);
    expect(mark.n).toBe(cell!.n);
    maxDelta = Math.max(
      maxDelta,
      Math.abs(mark.mean - cell!.mean),
      Math.abs(mark.std - cell!.std),
    );
  }
  return { kind, cells: cells.size, maxDelta };
}

describe("figure acceptance", () => {
  it("plots exactly the per-cell means of the committed sample CSVs", () => {
    const reports: KindReport[] = [];
    let ok = true;
    let detail = "";
    try {
      for (const kind of [
        "outage_sweep",
        "payoff_sweep",
        "transfer_sweep",
      ] as FigureKind[]) {
        reports.push(checkKind(kind));
      }
      const worst = Math.max(...reports.map((r) => r.maxDelta));
      const cells = reports.reduce((acc, r) => acc + r.cells, 0);
      detail = `${cells} cells over 3 figure kinds, max |plotted - recomputed| = ${worst.toExponential(2)}`;
    } catch (error) {
      ok = false;
      detail = error instanceof Error ? error.message.split("\n")[0] : String(error);
      process.stdout.write(`\n[criterion 9] plot fidelity: FAIL (${detail})\n`);
      throw error;
    }
    process.stdout.write(`\n[criterion 9] plot fidelity: PASS (${detail})\n`);
    expect(ok).toBe(true);
  });

  it("renders every committed sample end to end through the CLI", () => {
    const workDir = fs.mkdtempSync(path.join(os.tmpdir(), "uavsteer-figures-"));
    try {
      for (const kind of [
        "outage_sweep",
        "payoff_sweep",
        "transfer_sweep",
      ] as FigureKind[]) {
        const out = path.join(workDir, `${kind}.png`);
        const code = runCli([
          "--in",
          path.join(SAMPLE_DIR, `${kind}.csv`),
          "--kind",
          kind,
          "--out",
          out,
        ]);
        expect(code).toBe(0);
        const bytes = fs.readFileSync(out);
        expect([...bytes.subarray(0, 4)]).toEqual([0x89, 0x50, 0x4e, 0x47]);
        expect(bytes.length).toBeGreaterThan(1000);
      }
    } finally {
      fs.rmSync(workDir, { recursive: true, force: true });
    }
  });

  it("plots identical values across repeated renders", () => {
    const csvPath = path.join(SAMPLE_DIR, "outage_sweep.csv");
    const first = renderFigureSvg({ inputCsv: csvPath, figureKind: "outage_sweep" });
    const second = renderFigureSvg({ inputCsv: csvPath, figureKind: "outage_sweep" });
    expect(second).toBe(first);
  });
});
