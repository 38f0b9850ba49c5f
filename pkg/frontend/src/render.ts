/**
 * Top-level rendering entry: CSV in, image file out.
 *
 * The pipeline is parse -> aggregate -> draw, and each stage is pure, so a
 * given CSV always yields the same plotted values (and, in practice, the
 * same bytes). Nothing is written until the figure is fully assembled; a
 * rejected CSV therefore never leaves a partial image behind.
 */

import * as fs from "fs";
import * as path from "path";

import { aggregateFigure } from "./aggregate";
import { figureToSvg } from "./figures";
import { FigureKind, parseSweepCsv } from "./schema";

export interface FigureSpec {
  inputCsv: string;
  figureKind: FigureKind;
  outputImage: string;
}

/** A spec problem that is the caller's to fix (bad path, bad extension). */
export class UsageError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "UsageError";
  }
}

/** Render the figure for `spec` and return it as an SVG string. */
export function renderFigureSvg(spec: Pick<FigureSpec, "inputCsv" | "figureKind">): string {
  const rows = parseSweepCsv(spec.inputCsv, spec.figureKind);
  return figureToSvg(aggregateFigure(spec.figureKind, rows));
}

function rasterize(svg: string): Buffer {
  // Loaded lazily so SVG output works even where the native module is absent.
  const { Resvg } = require("@resvg/resvg-js");
  const renderer = new Resvg(svg, { background: "#ffffff" });
  return renderer.render().asPng();
}

/**
 * Render `spec` to its output path. The extension picks the format:
 * .svg writes the markup directly, .png rasterizes it.
 */
export function renderFigure(spec: FigureSpec): void {
  const ext = path.extname(spec.outputImage).toLowerCase();
  if (ext !== ".svg" && ext !== ".png") {
    throw new UsageError(
      `output image must end in .svg or .png, got "${spec.outputImage}"`,
    );
  }
  const svg = renderFigureSvg(spec);
  if (ext === ".svg") {
    fs.writeFileSync(spec.outputImage, svg, "utf8");
  } else {
    fs.writeFileSync(spec.outputImage, rasterize(svg));
  }
}
