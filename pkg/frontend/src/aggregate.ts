/**
 * Collapse trial rows into the values a figure actually plots.
 *
 * Every figure shows per-cell trial means with ±1 standard deviation bars,
 * so the aggregation step is shared: group rows by (panel, series, x) and
 * reduce the repeated trials. No metric is recomputed here; the CSV is the
 * single source of numbers.
 */

import { FigureKind, SweepRow } from "./schema";

/** One plotted point: trial mean plus its spread across trials. */
export interface AggregatePoint {
  x: number;
  mean: number;
  std: number;
  n: number;
}

export interface Series {
  /** Stable machine key ("game", "random", or an MNO count). */
  key: string;
  /** Human label shown in the legend. */
  label: string;
  points: AggregatePoint[];
}

export interface PanelData {
  /** Panel key; the MNO count for outage panels, "" for single-panel figures. */
  key: string;
  title: string;
  series: Series[];
}

export interface FigureData {
  kind: FigureKind;
  xLabel: string;
  yLabel: string;
  panels: PanelData[];
}

export function mean(values: number[]): number {
  let total = 0;
  for (const v of values) {
    total += v;
  }
  return total / values.length;
}

/** Sample standard deviation (n − 1 denominator); 0 for a single trial. */
export function sampleStd(values: number[]): number {
  if (values.length < 2) {
    return 0;
  }
  const m = mean(values);
  let ss = 0;
  for (const v of values) {
    ss += (v - m) * (v - m);
  }
  return Math.sqrt(ss / (values.length - 1));
}

const METHOD_LABELS: Record<string, string> = {
  game: "coalition game",
  random: "random baseline",
};

function collect(
  rows: SweepRow[],
  panelOf: (row: SweepRow) => string,
  seriesOf: (row: SweepRow) => string,
  xOf: (row: SweepRow) => number,
  yOf: (row: SweepRow) => number,
): Map<string, Map<string, Map<number, number[]>>> {
  const groups = new Map<string, Map<string, Map<number, number[]>>>();
  for (const row of rows) {
    const panel = panelOf(row);
    const series = seriesOf(row);
    const x = xOf(row);
    let panelMap = groups.get(panel);
    if (!panelMap) {
      panelMap = new Map();
      groups.set(panel, panelMap);
    }
    let seriesMap = panelMap.get(series);
    if (!seriesMap) {
      seriesMap = new Map();
      panelMap.set(series, seriesMap);
    }
    let values = seriesMap.get(x);
    if (!values) {
      values = [];
      seriesMap.set(x, values);
    }
    values.push(yOf(row));
  }
  return groups;
}

function reducePoints(seriesMap: Map<number, number[]>): AggregatePoint[] {
  const xs = [...seriesMap.keys()].sort((a, b) => a - b);
  return xs.map((x) => {
    const values = seriesMap.get(x)!;
    return { x, mean: mean(values), std: sampleStd(values), n: values.length };
  });
}

function numericAscending(a: string, b: string): number {
  return Number(a) - Number(b);
}

/**
 * Build the plotted aggregates for one figure kind.
 *
 * outage_sweep: one panel per mno_count, series game/random over uav_count.
 * payoff_sweep: one panel, series game/random over mno_count.
 * transfer_sweep: one panel, one series per mno_count over uav_count.
 */
export function aggregateFigure(kind: FigureKind, rows: SweepRow[]): FigureData {
  if (kind === "outage_sweep") {
    const groups = collect(
      rows,
      (r) => String(r.mno_count),
      (r) => String(r.method),
      (r) => r.uav_count as number,
      (r) => r.mean_outage as number,
    );
    const panels = [...groups.keys()].sort(numericAscending).map((panelKey) => {
      const panelMap = groups.get(panelKey)!;
      const series = ["game", "random"]
        .filter((method) => panelMap.has(method))
        .map((method) => ({
          key: method,
          label: METHOD_LABELS[method],
          points: reducePoints(panelMap.get(method)!),
        }));
      return { key: panelKey, title: `${panelKey} MNOs`, series };
    });
    return {
      kind,
      xLabel: "number of UAVs",
      yLabel: "mean outage probability",
      panels,
    };
  }

  if (kind === "payoff_sweep") {
    const groups = collect(
      rows,
      () => "",
      (r) => String(r.method),
      (r) => r.mno_count as number,
      (r) => r.sum_payoff as number,
    );
    const panelMap = groups.get("") ?? new Map<string, Map<number, number[]>>();
    const series = ["game", "random"]
      .filter((method) => panelMap.has(method))
      .map((method) => ({
        key: method,
        label: METHOD_LABELS[method],
        points: reducePoints(panelMap.get(method)!),
      }));
    return {
      kind,
      xLabel: "number of MNOs",
      yLabel: "sum payoff",
      panels: [{ key: "", title: "final sum payoff", series }],
    };
  }

  const groups = collect(
    rows,
    () => "",
    (r) => String(r.mno_count),
    (r) => r.uav_count as number,
    (r) => r.transfer_count as number,
  );
  const panelMap = groups.get("") ?? new Map<string, Map<number, number[]>>();
  const series = [...panelMap.keys()].sort(numericAscending).map((mno) => ({
    key: mno,
    label: `${mno} MNOs`,
    points: reducePoints(panelMap.get(mno)!),
  }));
  return {
    kind,
    xLabel: "number of UAVs",
    yLabel: "transfers to convergence",
    panels: [{ key: "", title: "transfers to convergence", series }],
  };
}
