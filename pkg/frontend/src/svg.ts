/**
 * Minimal deterministic SVG assembly.
 *
 * Attribute order follows object insertion order and all coordinates go
 * through one fixed-precision formatter, so identical inputs serialize to
 * byte-identical markup.
 */

/** Fixed two-decimal coordinate format with trailing zeros stripped. */
export function fmt(x: number): string {
  const s = x.toFixed(2).replace(/0+$/, "").replace(/\.$/, "");
  return s === "-0" ? "0" : s;
}

export function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export type Attrs = Record<string, string | number>;

function serializeAttrs(attrs: Attrs): string {
  const parts: string[] = [];
  for (const [key, value] of Object.entries(attrs)) {
    const text = typeof value === "number" ? fmt(value) : value;
    parts.push(` ${key}="${esc(text)}"`);
  }
  return parts.join("");
}

/** `<name attrs…>children</name>`, or self-closing without children. */
export function el(name: string, attrs: Attrs, children?: string[]): string {
  const head = `<${name}${serializeAttrs(attrs)}`;
  if (children === undefined || children.length === 0) return `${head}/>`;
  return `${head}>${children.join("")}</${name}>`;
}

export function text(content: string, attrs: Attrs): string {
  return el("text", attrs, [esc(content)]);
}

/** Polyline path through (x, y) points: "M x0,y0 L x1,y1 …". */
export function linePath(points: readonly [number, number][]): string {
  return points
    .map(([x, y], i) => `${i === 0 ? "M" : "L"}${fmt(x)},${fmt(y)}`)
    .join(" ");
}

/** Axis tick label: plain decimals in a readable range, 1e±k outside it. */
export function tickLabel(value: number): string {
  if (value === 0) return "0";
  const magnitude = Math.abs(value);
  if (magnitude >= 1e4 || magnitude < 1e-2) {
    return value.toExponential().replace("e+", "e");
  }
  // d3 ticks are already round numbers; String() keeps them short.
  return String(Number(value.toPrecision(8)));
}
