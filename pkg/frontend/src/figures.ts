/**
 * Assemble a figure SVG from aggregated sweep data.
 *
 * Layout is fixed: one row of panels sharing both axes, a legend strip on
 * top, error bars of ±1 standard deviation around every trial mean. Each
 * mark (circle or bar) carries the plotted numbers as data- attributes, so
 * the drawn values can be read back from the image verbatim.
 */

import { AggregatePoint, FigureData, PanelData, Series } from "./aggregate";
import { LinearScale, el, niceCeil, niceTicks, px, text, tickLabel } from "./svg";

const PLOT_W = 300;
const PLOT_H = 230;
const MARGIN = { left: 64, right: 18, top: 30, bottom: 50 };
const LEGEND_H = 24;
const PANEL_GAP = 22;

const METHOD_COLORS: Record<string, string> = {
  game: "#1f77b4",
  random: "#d62728",
};
const CYCLE_COLORS = ["#1f77b4", "#ff7f0e", "#2ca02c", "#9467bd", "#8c564b"];

function seriesColor(series: Series, index: number): string {
  return METHOD_COLORS[series.key] ?? CYCLE_COLORS[index % CYCLE_COLORS.length];
}

function allPoints(data: FigureData): AggregatePoint[] {
  const points: AggregatePoint[] = [];
  for (const panel of data.panels) {
    for (const series of panel.series) {
      points.push(...series.points);
    }
  }
  return points;
}

/** Shared y range over every panel: zero up to a nice cap above mean + std. */
function yDomainMax(points: AggregatePoint[]): number {
  let top = 0;
  for (const p of points) {
    top = Math.max(top, p.mean + p.std);
  }
  return niceCeil(top > 0 ? 1.05 * top : 1);
}

interface MarkAttrs {
  [name: string]: string | number;
}

function markData(panel: PanelData, series: Series, p: AggregatePoint): MarkAttrs {
  return {
    "data-panel": panel.key,
    "data-series": series.key,
    "data-x": String(p.x),
    "data-mean": String(p.mean),
    "data-std": String(p.std),
    "data-n": String(p.n),
  };
}

function errorBar(
  cx: number,
  yScale: LinearScale,
  p: AggregatePoint,
  color: string,
): string[] {
  if (p.std === 0) {
    return [];
  }
  // Clip the whisker to the axis range; the data- attributes keep the truth.
  const lo = yScale.map(Math.max(yScale.domainMin, p.mean - p.std));
  const hi = yScale.map(Math.min(yScale.domainMax, p.mean + p.std));
  const cap = 4;
  const seg = (x1: number, y1: number, x2: number, y2: number) =>
    el("line", {
      x1: px(x1),
      y1: px(y1),
      x2: px(x2),
      y2: px(y2),
      stroke: color,
      "stroke-width": 1,
    });
  return [
    seg(cx, lo, cx, hi),
    seg(cx - cap, lo, cx + cap, lo),
    seg(cx - cap, hi, cx + cap, hi),
  ];
}

function xAxis(
  originX: number,
  originY: number,
  xScale: LinearScale,
  ticks: number[],
): string[] {
  const parts = [
    el("line", {
      x1: px(originX),
      y1: px(originY),
      x2: px(originX + PLOT_W),
      y2: px(originY),
      stroke: "#333",
      "stroke-width": 1,
    }),
  ];
  for (const t of ticks) {
    const x = originX + xScale.map(t);
    parts.push(
      el("line", {
        x1: px(x),
        y1: px(originY),
        x2: px(x),
        y2: px(originY + 5),
        stroke: "#333",
        "stroke-width": 1,
      }),
      text(tickLabel(t), {
        x: px(x),
        y: px(originY + 18),
        "text-anchor": "middle",
        "font-size": 11,
        fill: "#333",
      }),
    );
  }
  return parts;
}

function yAxis(
  originX: number,
  topY: number,
  yScale: LinearScale,
  ticks: number[],
  withLabels: boolean,
): string[] {
  const parts = [
    el("line", {
      x1: px(originX),
      y1: px(topY),
      x2: px(originX),
      y2: px(topY + PLOT_H),
      stroke: "#333",
      "stroke-width": 1,
    }),
  ];
  for (const t of ticks) {
    const y = topY + yScale.map(t);
    parts.push(
      el("line", {
        x1: px(originX - 5),
        y1: px(y),
        x2: px(originX),
        y2: px(y),
        stroke: "#333",
        "stroke-width": 1,
      }),
    );
    if (withLabels) {
      parts.push(
        text(tickLabel(t), {
          x: px(originX - 8),
          y: px(y + 4),
          "text-anchor": "end",
          "font-size": 11,
          fill: "#333",
        }),
      );
    }
  }
  return parts;
}

function legend(entries: Series[], canvasWidth: number): string[] {
  const parts: string[] = [];
  const entryWidth = 150;
  let x = canvasWidth - MARGIN.right - entries.length * entryWidth;
  entries.forEach((series, index) => {
    const color = seriesColor(series, index);
    parts.push(
      el("line", {
        x1: px(x),
        y1: px(14),
        x2: px(x + 18),
        y2: px(14),
        stroke: color,
        "stroke-width": 2,
      }),
      el("circle", {
        cx: px(x + 9),
        cy: px(14),
        r: 3,
        fill: color,
      }),
      text(series.label, {
        x: px(x + 24),
        y: px(18),
        "font-size": 11,
        fill: "#333",
      }),
    );
    x += entryWidth;
  });
  return parts;
}

function linePanel(
  panel: PanelData,
  originX: number,
  topY: number,
  xScale: LinearScale,
  yScale: LinearScale,
): string[] {
  const parts: string[] = [];
  for (const [index, series] of panel.series.entries()) {
    const color = seriesColor(series, index);
    const coords = series.points.map((p) => ({
      x: originX + xScale.map(p.x),
      y: topY + yScale.map(p.mean),
      point: p,
    }));
    if (coords.length > 1) {
      parts.push(
        el("polyline", {
          points: coords.map((c) => `${px(c.x)},${px(c.y)}`).join(" "),
          fill: "none",
          stroke: color,
          "stroke-width": 1.5,
        }),
      );
    }
    for (const c of coords) {
      parts.push(...errorBar(c.x, yScale, c.point, color));
      parts.push(
        el("circle", {
          class: "mark",
          cx: px(c.x),
          cy: px(c.y),
          r: 3,
          fill: color,
          ...markData(panel, series, c.point),
        }),
      );
    }
  }
  return parts;
}

function barPanel(
  panel: PanelData,
  originX: number,
  topY: number,
  xs: number[],
  yScale: LinearScale,
): string[] {
  const parts: string[] = [];
  const slotW = PLOT_W / xs.length;
  const barW = slotW * 0.28;
  const baseline = topY + yScale.map(0);
  for (const [index, series] of panel.series.entries()) {
    const color = seriesColor(series, index);
    const offset = (index - (panel.series.length - 1) / 2) * (barW + 4);
    for (const p of series.points) {
      const slot = xs.indexOf(p.x);
      const cx = originX + (slot + 0.5) * slotW + offset;
      const topPix = topY + yScale.map(p.mean);
      parts.push(
        el("rect", {
          class: "mark",
          x: px(cx - barW / 2),
          y: px(Math.min(topPix, baseline)),
          width: px(barW),
          height: px(Math.abs(baseline - topPix)),
          fill: color,
          "fill-opacity": 0.85,
          ...markData(panel, series, p),
        }),
      );
      parts.push(...errorBar(cx, yScale, p, "#333"));
    }
  }
  return parts;
}

/** Tick positions for the x axis: the data values when few, nice steps else. */
function xTicks(xs: number[], lo: number, hi: number): number[] {
  if (xs.length <= 8) {
    return xs;
  }
  return niceTicks(lo, hi, 6);
}

export function figureToSvg(data: FigureData): string {
  const panels = data.panels;
  const nPanels = Math.max(panels.length, 1);
  const width =
    MARGIN.left + nPanels * PLOT_W + (nPanels - 1) * PANEL_GAP + MARGIN.right;
  const height = LEGEND_H + MARGIN.top + PLOT_H + MARGIN.bottom;
  const topY = LEGEND_H + MARGIN.top;

  const points = allPoints(data);
  const yMax = yDomainMax(points);
  const yScale = new LinearScale(0, yMax, PLOT_H, 0);
  const yTickValues = niceTicks(0, yMax, 5);

  const xs = [...new Set(points.map((p) => p.x))].sort((a, b) => a - b);
  const bars = data.kind === "payoff_sweep";
  let xScale: LinearScale;
  let xTickValues: number[];
  if (bars) {
    // Band positions; the scale is only used for tick placement.
    xScale = new LinearScale(0, 1, 0, PLOT_W);
    xTickValues = [];
  } else {
    const lo = xs.length > 0 ? xs[0] : 0;
    const hi = xs.length > 0 ? xs[xs.length - 1] : 1;
    const pad = hi > lo ? 0.06 * (hi - lo) : 1;
    xScale = new LinearScale(lo - pad, hi + pad, 0, PLOT_W);
    xTickValues = xTicks(xs, lo, hi);
  }

  const body: string[] = [
    el("rect", { x: 0, y: 0, width, height, fill: "#ffffff" }),
  ];

  panels.forEach((panel, panelIndex) => {
    const originX = MARGIN.left + panelIndex * (PLOT_W + PANEL_GAP);
    const axisY = topY + PLOT_H;
    body.push(...yAxis(originX, topY, yScale, yTickValues, panelIndex === 0));
    if (bars) {
      body.push(...xAxis(originX, axisY, xScale, []));
      const slotW = PLOT_W / Math.max(xs.length, 1);
      xs.forEach((x, slot) => {
        body.push(
          text(tickLabel(x), {
            x: px(originX + (slot + 0.5) * slotW),
            y: px(axisY + 18),
            "text-anchor": "middle",
            "font-size": 11,
            fill: "#333",
          }),
        );
      });
      body.push(...barPanel(panel, originX, topY, xs, yScale));
    } else {
      body.push(...xAxis(originX, axisY, xScale, xTickValues));
      body.push(...linePanel(panel, originX, topY, xScale, yScale));
    }
    if (panel.title !== "") {
      body.push(
        text(panel.title, {
          x: px(originX + PLOT_W / 2),
          y: px(topY - 10),
          "text-anchor": "middle",
          "font-size": 13,
          fill: "#111",
        }),
      );
    }
    body.push(
      text(data.xLabel, {
        x: px(originX + PLOT_W / 2),
        y: px(axisY + 38),
        "text-anchor": "middle",
        "font-size": 12,
        fill: "#111",
      }),
    );
  });

  body.push(
    text(data.yLabel, {
      x: px(16),
      y: px(topY + PLOT_H / 2),
      transform: `rotate(-90 16 ${px(topY + PLOT_H / 2)})`,
      "text-anchor": "middle",
      "font-size": 12,
      fill: "#111",
    }),
  );

  const legendEntries = panels.length > 0 ? panels[0].series : [];
  body.push(...legend(legendEntries, width));

  return el(
    "svg",
    {
      xmlns: "http://www.w3.org/2000/svg",
      width,
      height,
      viewBox: `0 0 ${width} ${height}`,
      "font-family": "Helvetica, Arial, sans-serif",
    },
    body,
  );
}
