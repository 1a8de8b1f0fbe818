export { readCsv, column, type Table } from "./csv.js";
export { readReport, totalCrossings, type Report } from "./report.js";
export { renderFigure, countMarkers, type Style } from "./render.js";
export { parseArgs, runCli } from "./cli.js";
