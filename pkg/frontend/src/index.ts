export { SchemaError, RunHashMismatchError } from "./errors.js";
export {
  parseStatesCsv, parseTraceCsv, parseLayoutCsv, parseReportJson,
} from "./csv.js";
export type { StatesFile, TraceFile, LayoutFile, ReportFile, ReportSample } from "./csv.js";
export { renderRaster } from "./raster.js";
export { renderTraces, TRACE_COLORS } from "./traces.js";
export { renderSnapshot } from "./snapshot.js";
export { run } from "./cli.js";
