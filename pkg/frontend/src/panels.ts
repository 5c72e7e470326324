/**
 * Individual panel renderers.  Each one turns a parsed table into an SVG
 * group with axes, series lines, and a title; the figure module arranges
 * the groups and draws the shared legend.
 */

import { scaleLinear, scaleLog } from "d3-scale";
import { max, min } from "d3-array";
import type { CapacityTable, DesignStyle, EigTable, PowerTable } from "./model.js";
import { el, linePath, text, tickLabel } from "./svg.js";

export interface PanelBox {
  x: number;
  y: number;
  width: number;
  height: number;
}

const MARGIN = { top: 30, right: 14, bottom: 44, left: 70 } as const;

interface Series {
  label: string;
  points: [number, number][];
}

type Scale = (value: number) => number;

interface Frame {
  title: string;
  xLabel: string;
  yLabel: string;
  xScale: Scale;
  yScale: Scale;
  xTicks: number[];
  yTicks: number[];
  innerWidth: number;
  innerHeight: number;
}

function axes(frame: Frame): string[] {
  const { xScale, yScale, xTicks, yTicks, innerWidth, innerHeight } = frame;
  const parts: string[] = [
    el("rect", {
      x: 0, y: 0, width: innerWidth, height: innerHeight,
      fill: "none", stroke: "#bbbbbb", "stroke-width": "1",
    }),
  ];
  for (const tick of xTicks) {
    const px = xScale(tick);
    parts.push(el("line", {
      x1: px, y1: innerHeight, x2: px, y2: innerHeight + 4,
      stroke: "#444444", "stroke-width": "1",
    }));
    parts.push(text(tickLabel(tick), {
      x: px, y: innerHeight + 16, "text-anchor": "middle", "font-size": "10",
    }));
  }
  for (const tick of yTicks) {
    const py = yScale(tick);
    parts.push(el("line", {
      x1: -4, y1: py, x2: 0, y2: py,
      stroke: "#444444", "stroke-width": "1",
    }));
    parts.push(text(tickLabel(tick), {
      x: -7, y: py + 3.5, "text-anchor": "end", "font-size": "10",
    }));
  }
  parts.push(text(frame.xLabel, {
    x: innerWidth / 2, y: innerHeight + 34,
    "text-anchor": "middle", "font-size": "11",
  }));
  parts.push(text(frame.yLabel, {
    x: -innerHeight / 2, y: -MARGIN.left + 14,
    transform: "rotate(-90)", "text-anchor": "middle", "font-size": "11",
  }));
  return parts;
}

function panelGroup(
  box: PanelBox,
  frame: Frame,
  series: Series[],
  styles: Map<string, DesignStyle>,
): string {
  const children: string[] = [
    text(frame.title, {
      x: 0, y: -12, "text-anchor": "start",
      "font-size": "12", "font-weight": "bold",
    }),
    ...axes(frame),
  ];
  for (const { label, points } of series) {
    if (points.length === 0) continue;
    const style = styles.get(label);
    if (style === undefined) continue;
    const mapped = points.map(
      ([x, y]) => [frame.xScale(x), frame.yScale(y)] as [number, number],
    );
    const attrs: Record<string, string> = {
      d: linePath(mapped),
      fill: "none",
      stroke: style.color,
      "stroke-width": "1.6",
    };
    if (style.dash !== "") attrs["stroke-dasharray"] = style.dash;
    children.push(el("path", attrs));
  }
  return el("g", {
    class: "panel",
    transform: `translate(${box.x + MARGIN.left},${box.y + MARGIN.top})`,
  }, children);
}

function innerSize(box: PanelBox): { innerWidth: number; innerHeight: number } {
  return {
    innerWidth: box.width - MARGIN.left - MARGIN.right,
    innerHeight: box.height - MARGIN.top - MARGIN.bottom,
  };
}

function linearX(lo: number, hi: number, width: number) {
  if (lo === hi) [lo, hi] = [lo - 1, hi + 1];
  return scaleLinear().domain([lo, hi]).nice().range([0, width]);
}

function linearY(lo: number, hi: number, height: number) {
  if (lo === hi) [lo, hi] = [lo - 1, hi + 1];
  return scaleLinear().domain([lo, hi]).nice().range([height, 0]);
}

/** sigma^2_F against realization index, one line per design. */
export function renderPowerPanel(
  table: PowerTable,
  styles: Map<string, DesignStyle>,
  box: PanelBox,
  title: string,
): string {
  const { innerWidth, innerHeight } = innerSize(box);
  const allValues = [...table.byDesign.values()].flat();
  const x = linearX(0, table.realizations - 1, innerWidth);
  const y = linearY(0, max(allValues) ?? 1, innerHeight);
  const series = table.designs.map((label) => ({
    label,
    points: table.byDesign.get(label)!.map(
      (v, r) => [r, v] as [number, number],
    ),
  }));
  const frame: Frame = {
    title, xLabel: "realization", yLabel: "σ²_F",
    xScale: x, yScale: y, xTicks: x.ticks(6), yTicks: y.ticks(6),
    innerWidth, innerHeight,
  };
  return panelGroup(box, frame, series, styles);
}

/** Mean capacity against nominal SNR; `only` restricts the designs drawn. */
export function renderCapacityPanel(
  table: CapacityTable,
  styles: Map<string, DesignStyle>,
  box: PanelBox,
  title: string,
  only?: readonly string[],
): string {
  const { innerWidth, innerHeight } = innerSize(box);
  const designs = only === undefined
    ? table.designs
    : table.designs.filter((d) => only.includes(d));
  const allValues = designs.flatMap((d) => table.byDesign.get(d)!);
  const x = linearX(
    min(table.snrGridDb) ?? 0, max(table.snrGridDb) ?? 1, innerWidth,
  );
  const y = linearY(0, max(allValues) ?? 1, innerHeight);
  const series = designs.map((label) => ({
    label,
    points: table.byDesign.get(label)!.map(
      (bits, i) => [table.snrGridDb[i]!, bits] as [number, number],
    ),
  }));
  const frame: Frame = {
    title, xLabel: "SNR (dB)", yLabel: "capacity (bits/s/Hz)",
    xScale: x, yScale: y, xTicks: x.ticks(6), yTicks: y.ticks(6),
    innerWidth, innerHeight,
  };
  return panelGroup(box, frame, series, styles);
}

/**
 * Sorted mean eigenvalues on a logarithmic y-axis.
 *
 * Values more than twelve decades below the global maximum are numerical
 *zeros of rank-deficient spectra; they are dropped so the axis stays
 * readable, which truncates those lines at the bottom of the panel.
 */
export function renderEigsPanel(
  table: EigTable,
  styles: Map<string, DesignStyle>,
  box: PanelBox,
  title: string,
): string {
  const { innerWidth, innerHeight } = innerSize(box);
  const positive = [...table.byDesign.values()].flat().filter((v) => v > 0);
  const top = max(positive) ?? 1;
  const floor = top * 1e-12;
  const kept = positive.filter((v) => v >= floor);
  const x = linearX(1, table.count, innerWidth);
  const y = scaleLog()
    .domain([min(kept) ?? floor, top])
    .nice()
    .range([innerHeight, 0]);
  const series = table.designs.map((label) => ({
    label,
    points: table.byDesign.get(label)!
      .map((v, i) => [i + 1, v] as [number, number])
      .filter(([, v]) => v >= floor),
  }));
  const frame: Frame = {
    title, xLabel: "eigenvalue index", yLabel: "mean eigenvalue",
    xScale: x, yScale: y, xTicks: x.ticks(6), yTicks: y.ticks(6),
    innerWidth, innerHeight,
  };
  return panelGroup(box, frame, series, styles);
}
