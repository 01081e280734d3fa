export {
  CsvFormatError,
  KINDS,
  SCHEMAS,
  SchemaError,
  col,
  metaNumber,
  parseResultCsv,
  strCol,
  tableLabel,
  validateTable,
} from "./csv.js";
export type { ResultTable } from "./csv.js";
export { render, renderToString } from "./render.js";
export type { PlotSpec } from "./render.js";
export { main } from "./cli.js";
