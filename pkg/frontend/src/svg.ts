/** Minimal deterministic SVG building blocks for the figure renderers. */

export interface Margin {
  top: number;
  right: number;
  bottom: number;
  left: number;
}

export const DEFAULT_MARGIN: Margin = { top: 36, right: 24, bottom: 44, left: 64 };

export interface Scale {
  (value: number): number;
  domain: [number, number];
  range: [number, number];
}

export function linearScale(domain: [number, number], range: [number, number]): Scale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0 || 1;
  const scale = ((value: number) => r0 + ((value - d0) / span) * (r1 - r0)) as Scale;
  scale.domain = domain;
  scale.range = range;
  return scale;
}

/** Round tick positions covering [lo, hi] with roughly `count` steps. */
export function ticks(lo: number, hi: number, count = 5): number[] {
  const span = hi - lo || 1;
  const rawStep = span / count;
  const magnitude = 10 ** Math.floor(Math.log10(rawStep));
  const step = [1, 2, 5, 10].map((m) => m * magnitude).find((s) => s >= rawStep)!;
  const start = Math.ceil(lo / step) * step;
  const values: number[] = [];
  for (let v = start; v <= hi + step * 1e-9; v += step) {
    values.push(Number(v.toPrecision(12)));
  }
  return values;
}

export function fmt(value: number): string {
  return Number(value.toPrecision(6)).toString();
}

const esc = (text: string) =>
  text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");

export function el(
  tag: string,
  attrs: Record<string, string | number>,
  children: string[] = [],
  text?: string,
): string {
  const attrText = Object.entries(attrs)
    .map(([k, v]) => ` ${k}="${typeof v === "number" ? fmt(v) : esc(v)}"`)
    .join("");
  const body = text !== undefined ? esc(text) : children.join("");
  return body === "" && text === undefined
    ? `<${tag}${attrText}/>`
    : `<${tag}${attrText}>${body}</${tag}>`;
}

export function svgDocument(width: number, height: number, children: string[]): string {
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
    `viewBox="0 0 ${width} ${height}" font-family="Helvetica, Arial, sans-serif" ` +
    `font-size="12">` +
    children.join("") +
    `</svg>\n`
  );
}

/** Left and bottom axes with tick labels and light horizontal gridlines. */
export function axes(
  x: Scale,
  y: Scale,
  width: number,
  height: number,
  margin: Margin,
  xLabel: string,
  yLabel: string,
): string {
  const parts: string[] = [];
  const [x0, x1] = x.range;
  const [yBottom, yTop] = y.range;
  for (const t of ticks(y.domain[0], y.domain[1])) {
    const py = y(t);
    parts.push(el("line", {
      x1: x0, y1: py, x2: x1, y2: py, stroke: "#ddd", "stroke-width": 1,
    }));
    parts.push(el("text", {
      x: x0 - 8, y: py + 4, "text-anchor": "end", fill: "#444",
    }, [], fmt(t)));
  }
  for (const t of ticks(x.domain[0], x.domain[1], 8)) {
    const px = x(t);
    parts.push(el("line", {
      x1: px, y1: yBottom, x2: px, y2: yBottom + 5, stroke: "#444", "stroke-width": 1,
    }));
    parts.push(el("text", {
      x: px, y: yBottom + 18, "text-anchor": "middle", fill: "#444",
    }, [], fmt(t)));
  }
  parts.push(el("line", {
    x1: x0, y1: yBottom, x2: x1, y2: yBottom, stroke: "#000", "stroke-width": 1,
  }));
  parts.push(el("line", {
    x1: x0, y1: yBottom, x2: x0, y2: yTop, stroke: "#000", "stroke-width": 1,
  }));
  parts.push(el("text", {
    x: (x0 + x1) / 2, y: height - 8, "text-anchor": "middle", fill: "#000",
  }, [], xLabel));
  parts.push(el("text", {
    x: 14, y: (yBottom + yTop) / 2, "text-anchor": "middle", fill: "#000",
    transform: `rotate(-90 14 ${fmt((yBottom + yTop) / 2)})`,
  }, [], yLabel));
  void margin;
  void width;
  return parts.join("");
}

export function title(text: string, width: number): string {
  return el("text", {
    x: width / 2, y: 20, "text-anchor": "middle", "font-size": 14,
    "font-weight": "bold", fill: "#000",
  }, [], text);
}
