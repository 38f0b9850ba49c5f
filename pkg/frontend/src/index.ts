export {
  EmptyCsvError,
  FIGURE_KINDS,
  FigureKind,
  METHODS,
  SchemaError,
  SweepRow,
  expectedColumns,
  parseSweepCsv,
  parseSweepText,
} from "./schema";
export {
  AggregatePoint,
  FigureData,
  PanelData,
  Series,
  aggregateFigure,
  mean,
  sampleStd,
} from "./aggregate";
export { figureToSvg } from "./figures";
export { FigureSpec, UsageError, renderFigure, renderFigureSvg } from "./render";
export { runCli } from "./cli";
