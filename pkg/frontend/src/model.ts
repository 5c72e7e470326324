/**
 * Shared table shapes and the fixed per-design drawing style.
 *
 * The simulator writes one row group per design, so every table keeps the
 * design list in file order next to a per-design column map.  Styles are
 * keyed by the design labels that appear verbatim in the CSVs; the legend
 * reuses those labels unchanged so no mapping table is needed.
 */

/** sigma^2_F per realization, grouped by design. */
export interface PowerTable {
  designs: string[];
  /** realizations per design (identical for all designs) */
  realizations: number;
  byDesign: Map<string, number[]>;
}

/** Mean capacity curve per design over a common SNR grid. */
export interface CapacityTable {
  designs: string[];
  snrGridDb: number[];
  byDesign: Map<string, number[]>;
}

/** Sorted mean eigenvalues per design (index 1..count in the file). */
export interface EigTable {
  designs: string[];
  count: number;
  byDesign: Map<string, number[]>;
}

/** Canonical legend order for the labels the simulator emits. */
export const KNOWN_DESIGNS = [
  "RAND",
  "RAND-PH",
  "LC-PH",
  "OPT-DIAG",
  "OPT-DIAG-PH",
  "OPT-GEN",
  "OPT-GEN-PH",
  "GH",
] as const;

const DESIGN_COLORS: Record<string, string> = {
  "RAND": "#1f77b4",
  "RAND-PH": "#17becf",
  "LC-PH": "#2ca02c",
  "OPT-DIAG": "#d62728",
  "OPT-DIAG-PH": "#ff7f0e",
  "OPT-GEN": "#9467bd",
  "OPT-GEN-PH": "#e377c2",
  "GH": "#7f7f7f",
};

/** Deterministic fallbacks for labels outside the stock set. */
const EXTRA_COLORS = ["#8c564b", "#bcbd22", "#393b79", "#637939", "#7b4173"];

/** Phase-only variants draw dashed so overlaid pairs stay readable. */
const DASHED_SUFFIX = "-PH";

export interface DesignStyle {
  color: string;
  /** SVG stroke-dasharray, or "" for a solid line */
  dash: string;
}

/**
 * Assign a stable style to every design label in the figure.
 *
 * Known labels use the fixed palette; unknown ones take fallback colors in
 * first-appearance order, which is deterministic for identical CSVs.
 */
export function styleMap(designs: readonly string[]): Map<string, DesignStyle> {
  const styles = new Map<string, DesignStyle>();
  let extra = 0;
  for (const label of designs) {
    if (styles.has(label)) continue;
    const color =
      DESIGN_COLORS[label] ?? EXTRA_COLORS[extra++ % EXTRA_COLORS.length]!;
    const dash = label.endsWith(DASHED_SUFFIX) ? "5 3" : "";
    styles.set(label, { color, dash });
  }
  return styles;
}

/** Legend order: canonical labels first, then any extras in file order. */
export function legendOrder(designs: readonly string[]): string[] {
  const present = new Set(designs);
  const ordered: string[] = [];
  for (const label of KNOWN_DESIGNS) {
    if (present.has(label)) ordered.push(label);
  }
  for (const label of designs) {
    if (!ordered.includes(label)) ordered.push(label);
  }
  return ordered;
}
