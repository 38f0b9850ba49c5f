#!/usr/bin/env node
/**
 * Standalone figure renderer.
 *
 *   render --in sweep.csv --kind outage_sweep --out figure.png
 *
 * Exit codes: 0 on success, 1 for usage problems (flags, paths, extensions),
 * 2 when the CSV itself is unusable (schema mismatch, no data rows).
 */

import yargs from "yargs";

import { renderFigure, UsageError } from "./render";
import { EmptyCsvError, FIGURE_KINDS, FigureKind, SchemaError } from "./schema";

export function runCli(argv: string[]): number {
  let parseFailure: string | null = null;
  const parser = yargs(argv)
    .scriptName("render")
    .usage("$0 --in <csv> --kind <figure kind> --out <image>")
    .option("in", {
      type: "string",
      demandOption: true,
      describe: "input sweep CSV",
    })
    .option("kind", {
      choices: FIGURE_KINDS as unknown as FigureKind[],
      demandOption: true,
      describe: "which sweep the CSV holds",
    })
    .option("out", {
      type: "string",
      demandOption: true,
      describe: "output image path (.svg or .png)",
    })
    .strict()
    .exitProcess(false)
    .fail((msg: string | null, err: Error | undefined) => {
      parseFailure = msg ?? (err ? err.message : "invalid arguments");
    });

  const args = parser.parseSync();
  if (parseFailure !== null) {
    console.error(`render: ${parseFailure}`);
    return 1;
  }
  if (args.help || args.version) {
    return 0;
  }

  try {
    renderFigure({
      inputCsv: args.in,
      figureKind: args.kind,
      outputImage: args.out,
    });
  } catch (error) {
    if (error instanceof SchemaError) {
      console.error(`render: schema mismatch: ${error.message}`);
      return 2;
    }
    if (error instanceof EmptyCsvError) {
      console.error(`render: ${error.message}; no image written`);
      return 2;
    }
    if (error instanceof UsageError) {
      console.error(`render: ${error.message}`);
      return 1;
    }
    if (error instanceof Error && "code" in error && error.code === "ENOENT") {
      console.error(`render: cannot read "${args.in}": no such file`);
      return 1;
    }
    throw error;
  }
  return 0;
}

if (require.main === module) {
  process.exit(runCli(process.argv.slice(2)));
}
