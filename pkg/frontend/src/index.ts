export { MalformedCsvError, MissingPanelError, readCapacityCsv, readEigsCsv, readPowerCsv } from "./csv.js";
export { PANEL_NAMES, normalizePanels, render, renderFigure } from "./figure.js";
export type { FigureSpec, PanelName } from "./figure.js";
export { KNOWN_DESIGNS, legendOrder, styleMap } from "./model.js";
export type { CapacityTable, DesignStyle, EigTable, PowerTable } from "./model.js";
export { runCli } from "./cli.js";
