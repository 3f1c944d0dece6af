/** The four evaluation figures, rendered as standalone SVG strings. */

import { SweepRow } from "./csv.js";
import {
  DEFAULT_MARGIN,
  axes,
  el,
  fmt,
  linearScale,
  svgDocument,
  title,
} from "./svg.js";

export const VARIANTS = ["CCOnly", "CloudFog", "LowDensity", "HighDensity"] as const;
export type Variant = (typeof VARIANTS)[number];
export type Strategy = "Single" | "Distributed";

const VARIANT_COLORS: Record<Variant, string> = {
  CCOnly: "#d62728",
  CloudFog: "#ff7f0e",
  LowDensity: "#2ca02c",
  HighDensity: "#1f77b4",
};

const NODE_TYPES = ["CC", "LF", "NF", "VF"] as const;
const NODE_COLORS: Record<string, string> = {
  CC: "#d62728",
  LF: "#ff7f0e",
  NF: "#9467bd",
  VF: "#2ca02c",
};
const VF_IDS = ["alloc_vf1", "alloc_vf2", "alloc_vf3", "alloc_vf4"] as const;
const VF_COLORS = ["#1f77b4", "#2ca02c", "#9467bd", "#8c564b"];

export interface Point {
  x: number;
  y: number;
}

/** Optimal total-power points per variant for one strategy, sorted by workload. */
export function strategyCurves(
  rows: SweepRow[],
  strategy: Strategy,
): Map<Variant, Point[]> {
  const curves = new Map<Variant, Point[]>();
  for (const variant of VARIANTS) {
    const points = rows
      .filter(
        (r) =>
          r.variant === variant && r.strategy === strategy && r.status === "Optimal",
      )
      .map((r) => ({ x: r.workload_mips, y: r.total_w }))
      .sort((a, b) => a.x - b.x);
    curves.set(variant, points);
  }
  return curves;
}

function legend(entries: [string, string][], x: number, y: number): string {
  return entries
    .map(([label, color], i) =>
      el("g", {}, [
        el("rect", { x, y: y + i * 18, width: 12, height: 12, fill: color }),
        el("text", { x: x + 18, y: y + i * 18 + 10, fill: "#000" }, [], label),
      ]),
    )
    .join("");
}

/** Figures 3a/3b: total power vs per-task workload, one curve per variant. */
export function figurePowerVsWorkload(rows: SweepRow[], strategy: Strategy): string {
  const width = 560;
  const height = 380;
  const m = DEFAULT_MARGIN;
  const curves = strategyCurves(rows, strategy);
  const points = [...curves.values()].flat();
  if (points.length === 0) {
    throw new Error(`no Optimal rows for strategy ${strategy}`);
  }
  const xMax = Math.max(...points.map((p) => p.x));
  const yMax = Math.max(...points.map((p) => p.y));
  const x = linearScale([0, xMax], [m.left, width - m.right]);
  const y = linearScale([0, yMax * 1.05], [height - m.bottom, m.top]);

  const body: string[] = [
    title(`Total power vs task workload — ${strategy} allocation`, width),
    axes(x, y, width, height, m, "Task workload (MIPS)", "Total power (W)"),
  ];
  for (const variant of VARIANTS) {
    const pts = curves.get(variant)!;
    if (pts.length === 0) continue;
    body.push(el("polyline", {
      points: pts.map((p) => `${fmt(x(p.x))},${fmt(y(p.y))}`).join(" "),
      fill: "none",
      stroke: VARIANT_COLORS[variant],
      "stroke-width": 2,
    }));
    for (const p of pts) {
      body.push(el("circle", {
        cx: x(p.x), cy: y(p.y), r: 3, fill: VARIANT_COLORS[variant],
      }));
    }
  }
  body.push(legend(
    VARIANTS.map((v) => [v, VARIANT_COLORS[v]] as [string, string]),
    m.left + 12,
    m.top + 6,
  ));
  return svgDocument(width, height, body);
}

function nodeMix(row: SweepRow): Record<(typeof NODE_TYPES)[number], number> {
  return {
    CC: row.alloc_cc,
    LF: row.alloc_lf,
    NF: row.alloc_nf,
    VF: row.alloc_vf1 + row.alloc_vf2 + row.alloc_vf3 + row.alloc_vf4,
  };
}

/** Figure 4: allocated MIPS by node type vs workload, stacked bars,
 * Single and Distributed side by side for one variant. */
export function figureNodeMix(rows: SweepRow[], variant: Variant): string {
  const width = 640;
  const height = 400;
  const m = DEFAULT_MARGIN;
  const selected = rows
    .filter((r) => r.variant === variant && r.status === "Optimal")
    .sort((a, b) => a.workload_mips - b.workload_mips);
  if (selected.length === 0) throw new Error(`no Optimal rows for variant ${variant}`);
  const workloads = [...new Set(selected.map((r) => r.workload_mips))];
  const totalMax = Math.max(
    ...selected.map((r) => Object.values(nodeMix(r)).reduce((a, b) => a + b, 0)),
  );
  const x = linearScale(
    [-0.5, workloads.length - 0.5],
    [m.left, width - m.right],
  );
  const y = linearScale([0, totalMax * 1.05], [height - m.bottom, m.top]);
  const slot = (x(1) - x(0)) || 40;
  const barWidth = slot * 0.32;

  const body: string[] = [
    title(`Allocated MIPS by node type — ${variant}`, width),
  ];
  const yBottom = height - m.bottom;
  for (const [gi, workload] of workloads.entries()) {
    body.push(el("text", {
      x: x(gi), y: yBottom + 18, "text-anchor": "middle", fill: "#444",
    }, [], fmt(workload)));
    for (const [si, strategy] of (["Single", "Distributed"] as const).entries()) {
      const row = selected.find(
        (r) => r.workload_mips === workload && r.strategy === strategy,
      );
      if (row === undefined) continue;
      const mix = nodeMix(row);
      const bx = x(gi) + (si === 0 ? -barWidth - 2 : 2);
      let top = yBottom;
      for (const node of NODE_TYPES) {
        const h = yBottom - y(mix[node]);
        if (h <= 0) continue;
        top -= h;
        body.push(el("rect", {
          x: bx, y: top, width: barWidth, height: h,
          fill: NODE_COLORS[node]!, stroke: "#fff", "stroke-width": 0.5,
        }));
      }
    }
  }
  body.push(el("line", {
    x1: m.left, y1: yBottom, x2: width - m.right, y2: yBottom,
    stroke: "#000", "stroke-width": 1,
  }));
  body.push(el("text", {
    x: (m.left + width - m.right) / 2, y: height - 8,
    "text-anchor": "middle", fill: "#000",
  }, [], "Task workload (MIPS) — left bar Single, right bar Distributed"));
  body.push(legend(
    NODE_TYPES.map((n) => [n, NODE_COLORS[n]!] as [string, string]),
    m.left + 12,
    m.top + 6,
  ));
  return svgDocument(width, height, body);
}

/** Figure 5: per-vehicular-fog allocated MIPS at one workload across the four
 * strategy/density cases. */
export function figureVehicleFogs(rows: SweepRow[], workload: number): string {
  const width = 640;
  const height = 380;
  const m = DEFAULT_MARGIN;
  const cases: [Strategy, Variant][] = [
    ["Single", "LowDensity"],
    ["Single", "HighDensity"],
    ["Distributed", "LowDensity"],
    ["Distributed", "HighDensity"],
  ];
  const selected = cases.map(([strategy, variant]) =>
    rows.find(
      (r) =>
        r.variant === variant &&
        r.strategy === strategy &&
        r.workload_mips === workload &&
        r.status === "Optimal",
    ),
  );
  if (selected.every((r) => r === undefined)) {
    throw new Error(`no Optimal rows at workload ${workload}`);
  }
  const peak = Math.max(
    1,
    ...selected.flatMap((r) => (r ? VF_IDS.map((k) => r[k]) : [])),
  );
  const x = linearScale([-0.5, cases.length - 0.5], [m.left, width - m.right]);
  const y = linearScale([0, peak * 1.1], [height - m.bottom, m.top]);
  const slot = x(1) - x(0);
  const barWidth = (slot * 0.8) / VF_IDS.length;
  const yBottom = height - m.bottom;

  const body: string[] = [
    title(`Per-VF allocated MIPS at ${fmt(workload)} MIPS/task`, width),
  ];
  for (const [ci, [strategy, variant]] of cases.entries()) {
    body.push(el("text", {
      x: x(ci), y: yBottom + 18, "text-anchor": "middle", fill: "#444",
    }, [], `${strategy[0]}A-${variant === "LowDensity" ? "low" : "high"}`));
    const row = selected[ci];
    if (row === undefined) continue;
    for (const [vi, key] of VF_IDS.entries()) {
      const value = row[key];
      const h = yBottom - y(value);
      body.push(el("rect", {
        x: x(ci) - (slot * 0.8) / 2 + vi * barWidth,
        y: yBottom - h,
        width: barWidth - 2,
        height: Math.max(h, 0),
        fill: VF_COLORS[vi]!,
      }));
    }
  }
  body.push(el("line", {
    x1: m.left, y1: yBottom, x2: width - m.right, y2: yBottom,
    stroke: "#000", "stroke-width": 1,
  }));
  body.push(el("text", {
    x: (m.left + width - m.right) / 2, y: height - 8,
    "text-anchor": "middle", fill: "#000",
  }, [], "Case (SA = Single, DA = Distributed)"));
  body.push(legend(
    VF_IDS.map((k, i) => [k.replace("alloc_", "").toUpperCase(), VF_COLORS[i]!] as [string, string]),
    m.left + 12,
    m.top + 6,
  ));
  return svgDocument(width, height, body);
}

/** All four figures keyed by output file name. */
export function renderAll(rows: SweepRow[]): Map<string, string> {
  return new Map([
    ["fig3a_power_single.svg", figurePowerVsWorkload(rows, "Single")],
    ["fig3b_power_distributed.svg", figurePowerVsWorkload(rows, "Distributed")],
    ["fig4_node_mix_high_density.svg", figureNodeMix(rows, "HighDensity")],
    ["fig5_vehicle_fogs_3500.svg", figureVehicleFogs(rows, 3500)],
  ]);
}
