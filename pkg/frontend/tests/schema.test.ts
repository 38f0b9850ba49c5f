import { describe, expect, it } from "vitest";

import {
  EmptyCsvError,
  SchemaError,
  expectedColumns,
  parseSweepText,
} from "../src/schema";

const OUTAGE_HEADER = "uav_count,mno_count,trial,method,mean_outage";

describe("expectedColumns", () => {
  it("documents each sweep schema", () => {
    expect(expectedColumns("outage_sweep")).toEqual([
      "uav_count",
      "mno_count",
      "trial",
      "method",
      "mean_outage",
    ]);
    expect(expectedColumns("payoff_sweep")).toEqual([
      "mno_count",
      "trial",
      "method",
      "sum_payoff",
    ]);
    expect(expectedColumns("transfer_sweep")).toEqual([
      "uav_count",
      "mno_count",
      "trial",
      "transfer_count",
    ]);
  });
});

describe("parseSweepText", () => {
  it("parses outage rows with numeric typing", () => {
    const text = [
      OUTAGE_HEADER,
      "20,2,0,game,0.0125",
      "20,2,0,random,3.2e-02",
    ].join("\n");
    const rows = parseSweepText(text, "outage_sweep");
    expect(rows).toHaveLength(2);
    expect(rows[0]).toEqual({
      uav_count: 20,
      mno_count: 2,
      trial: 0,
      method: "game",
      mean_outage: 0.0125,
    });
    expect(rows[1].mean_outage).toBe(0.032);
  });

  it("is insensitive to column order", () => {
    const reordered = [
      "mean_outage,method,trial,mno_count,uav_count",
      "0.5,game,0,2,20",
    ].join("\n");
    const rows = parseSweepText(reordered, "outage_sweep");
    expect(rows[0].uav_count).toBe(20);
    expect(rows[0].mean_outage).toBe(0.5);
  });

  it("parses payoff and transfer rows", () => {
    const payoff = parseSweepText(
      "mno_count,trial,method,sum_payoff\n3,0,random,117.25",
      "payoff_sweep",
    );
    expect(payoff[0].sum_payoff).toBe(117.25);
    const transfers = parseSweepText(
      "uav_count,mno_count,trial,transfer_count\n40,3,1,12",
      "transfer_sweep",
    );
    expect(transfers[0].transfer_count).toBe(12);
  });

  it("names a missing column", () => {
    const text = "uav_count,mno_count,trial,method\n20,2,0,game";
    let caught: unknown;
    try {
      parseSweepText(text, "outage_sweep");
    } catch (error) {
      caught = error;
    }
    expect(caught).toBeInstanceOf(SchemaError);
    expect((caught as SchemaError).column).toBe("mean_outage");
    expect((caught as SchemaError).message).toContain('"mean_outage"');
  });

  it("names an unexpected column", () => {
    const text = `${OUTAGE_HEADER},notes\n20,2,0,game,0.1,hello`;
    let caught: unknown;
    try {
      parseSweepText(text, "outage_sweep");
    } catch (error) {
      caught = error;
    }
    expect(caught).toBeInstanceOf(SchemaError);
    expect((caught as SchemaError).column).toBe("notes");
  });

  it("names the column holding a non-numeric value", () => {
    const text = `${OUTAGE_HEADER}\n20,2,0,game,oops`;
    let caught: unknown;
    try {
      parseSweepText(text, "outage_sweep");
    } catch (error) {
      caught = error;
    }
    expect(caught).toBeInstanceOf(SchemaError);
    expect((caught as SchemaError).column).toBe("mean_outage");
    expect((caught as SchemaError).message).toMatch(/row 1/);
  });

  it("rejects fractional values in count columns", () => {
    const text = `${OUTAGE_HEADER}\n20.5,2,0,game,0.1`;
    expect(() => parseSweepText(text, "outage_sweep")).toThrowError(
      /uav_count.*integer/,
    );
  });

  it("rejects unknown method values", () => {
    const text = `${OUTAGE_HEADER}\n20,2,0,greedy,0.1`;
    let caught: unknown;
    try {
      parseSweepText(text, "outage_sweep");
    } catch (error) {
      caught = error;
    }
    expect(caught).toBeInstanceOf(SchemaError);
    expect((caught as SchemaError).column).toBe("method");
  });

  it("rejects a short row", () => {
    const text = `${OUTAGE_HEADER}\n20,2,0,game`;
    expect(() => parseSweepText(text, "outage_sweep")).toThrowError(SchemaError);
  });

  it("rejects a header-only file as empty", () => {
    expect(() => parseSweepText(`${OUTAGE_HEADER}\n`, "outage_sweep")).toThrowError(
      EmptyCsvError,
    );
  });

  it("rejects a blank file as empty", () => {
    expect(() => parseSweepText("", "outage_sweep")).toThrowError(EmptyCsvError);
    expect(() => parseSweepText("  \n\n", "outage_sweep")).toThrowError(
      EmptyCsvError,
    );
  });
});
