/**
 * Figure assembly: load the CSVs a panel selection needs, lay the panels
 * out on a grid under a shared legend, and serialize one SVG document.
 *
 * Rendering is read-only with respect to the scenario directory and uses
 * no clocks or randomness, so identical CSVs give byte-identical output.
 */

import { existsSync, writeFileSync } from "node:fs";
import { join } from "node:path";
import {
  MissingPanelError,
  readCapacityCsv,
  readEigsCsv,
  readPowerCsv,
} from "./csv.js";
import { legendOrder, styleMap } from "./model.js";
import type { CapacityTable, DesignStyle, EigTable, PowerTable } from "./model.js";
import { renderCapacityPanel, renderEigsPanel, renderPowerPanel } from "./panels.js";
import type { PanelBox } from "./panels.js";
import { el, text } from "./svg.js";

export const PANEL_NAMES = ["power", "capacity", "eigs", "phase_compare"] as const;
export type PanelName = (typeof PANEL_NAMES)[number];

export interface FigureSpec {
  scenarioDir: string;
  panels: readonly PanelName[];
  /** output SVG path */
  output: string;
}

/** CSV each panel reads; phase_compare reuses the capacity curves. */
const PANEL_SOURCES: Record<PanelName, string> = {
  power: "power.csv",
  capacity: "capacity.csv",
  eigs: "eigs.csv",
  phase_compare: "capacity.csv",
};

const PANEL_TITLES: Record<PanelName, string> = {
  power: "Channel power per realization",
  capacity: "Mean capacity vs SNR",
  eigs: "Sorted mean eigenvalues",
  phase_compare: "Optimal designs: full vs phase-only",
};

/** Labels the overlay panel draws, in pair order. */
const PHASE_COMPARE_DESIGNS = [
  "OPT-DIAG", "OPT-DIAG-PH", "OPT-GEN", "OPT-GEN-PH",
] as const;

const PANEL_WIDTH = 500;
const PANEL_HEIGHT = 350;
const GAP = 26;
const LEGEND_ENTRY_WIDTH = 132;
const LEGEND_ROW_HEIGHT = 20;

interface LoadedTables {
  power?: PowerTable;
  capacity?: CapacityTable;
  eigs?: EigTable;
}

/** Normalize a panel request to canonical order with duplicates dropped. */
export function normalizePanels(requested: readonly PanelName[]): PanelName[] {
  const wanted = new Set(requested);
  return PANEL_NAMES.filter((name) => wanted.has(name));
}

function loadTables(scenarioDir: string, panels: readonly PanelName[]): LoadedTables {
  for (const panel of panels) {
    const file = PANEL_SOURCES[panel];
    if (!existsSync(join(scenarioDir, file))) {
      throw new MissingPanelError(
        `panel '${panel}' needs ${file}, not found in ${scenarioDir}`,
      );
    }
  }
  const tables: LoadedTables = {};
  if (panels.includes("power")) {
    tables.power = readPowerCsv(join(scenarioDir, "power.csv"));
  }
  if (panels.includes("capacity") || panels.includes("phase_compare")) {
    tables.capacity = readCapacityCsv(join(scenarioDir, "capacity.csv"));
  }
  if (panels.includes("eigs")) {
    tables.eigs = readEigsCsv(join(scenarioDir, "eigs.csv"));
  }
  return tables;
}

function phaseCompareDesigns(capacity: CapacityTable): string[] {
  const present = PHASE_COMPARE_DESIGNS.filter((d) => capacity.byDesign.has(d));
  const hasPair =
    (present.includes("OPT-DIAG") && present.includes("OPT-DIAG-PH")) ||
    (present.includes("OPT-GEN") && present.includes("OPT-GEN-PH"));
  if (!hasPair) {
    throw new MissingPanelError(
      "panel 'phase_compare' needs a full/phase-only design pair " +
      "(OPT-DIAG with OPT-DIAG-PH, or OPT-GEN with OPT-GEN-PH) in capacity.csv",
    );
  }
  return [...present];
}

/** Designs appearing in any requested panel, for styling and the legend. */
function collectDesigns(tables: LoadedTables, panels: readonly PanelName[]): string[] {
  const labels: string[] = [];
  const push = (more: readonly string[]) => {
    for (const label of more) if (!labels.includes(label)) labels.push(label);
  };
  for (const panel of panels) {
    if (panel === "power") push(tables.power!.designs);
    else if (panel === "eigs") push(tables.eigs!.designs);
    else if (panel === "capacity") push(tables.capacity!.designs);
    else push(phaseCompareDesigns(tables.capacity!));
  }
  return labels;
}

function legendGroup(
  designs: readonly string[],
  styles: Map<string, DesignStyle>,
  figureWidth: number,
): { markup: string; height: number } {
  const perRow = Math.max(1, Math.floor((figureWidth - 2 * GAP) / LEGEND_ENTRY_WIDTH));
  const ordered = legendOrder(designs);
  const entries = ordered.map((label, i) => {
    const style = styles.get(label)!;
    const ex = GAP + (i % perRow) * LEGEND_ENTRY_WIDTH;
    const ey = Math.floor(i / perRow) * LEGEND_ROW_HEIGHT + 14;
    const lineAttrs: Record<string, string | number> = {
      x1: ex, y1: ey - 4, x2: ex + 26, y2: ey - 4,
      stroke: style.color, "stroke-width": "2",
    };
    if (style.dash !== "") lineAttrs["stroke-dasharray"] = style.dash;
    return el("line", lineAttrs) +
      text(label, { x: ex + 32, y: ey, "font-size": "11" });
  });
  const rows = Math.ceil(ordered.length / perRow);
  return {
    markup: el("g", { class: "legend" }, entries),
    height: rows * LEGEND_ROW_HEIGHT + 8,
  };
}

/** Render the requested panels to an SVG document string. */
export function renderFigure(
  scenarioDir: string,
  requestedPanels: readonly PanelName[] = PANEL_NAMES,
): string {
  const panels = normalizePanels(requestedPanels);
  if (panels.length === 0) {
    throw new MissingPanelError("no panels requested");
  }
  const tables = loadTables(scenarioDir, panels);
  const designs = collectDesigns(tables, panels);
  const styles = styleMap(designs);

  const columns = panels.length > 1 ? 2 : 1;
  const rows = Math.ceil(panels.length / columns);
  const width = columns * PANEL_WIDTH + (columns + 1) * GAP;
  const legend = legendGroup(designs, styles, width);
  const height = legend.height + rows * (PANEL_HEIGHT + GAP) + GAP;

  const letters = ["a", "b", "c", "d"];
  const body = panels.map((panel, i) => {
    const box: PanelBox = {
      x: GAP + (i % columns) * (PANEL_WIDTH + GAP),
      y: legend.height + GAP + Math.floor(i / columns) * (PANEL_HEIGHT + GAP),
      width: PANEL_WIDTH,
      height: PANEL_HEIGHT,
    };
    const title = `(${letters[i]}) ${PANEL_TITLES[panel]}`;
    switch (panel) {
      case "power":
        return renderPowerPanel(tables.power!, styles, box, title);
      case "capacity":
        return renderCapacityPanel(tables.capacity!, styles, box, title);
      case "eigs":
        return renderEigsPanel(tables.eigs!, styles, box, title);
      case "phase_compare":
        return renderCapacityPanel(
          tables.capacity!, styles, box, title,
          phaseCompareDesigns(tables.capacity!),
        );
    }
  });

  return el("svg", {
    xmlns: "http://www.w3.org/2000/svg",
    width,
    height,
    "font-family": "Helvetica, Arial, sans-serif",
  }, [
    el("rect", { x: 0, y: 0, width, height, fill: "#ffffff" }),
    legend.markup,
    ...body,
  ]) + "\n";
}

/** Render `spec.panels` from `spec.scenarioDir` and write `spec.output`. */
export function render(spec: FigureSpec): string {
  const svg = renderFigure(spec.scenarioDir, spec.panels);
  writeFileSync(spec.output, svg, "utf8");
  return svg;
}
