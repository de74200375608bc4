/** Figure rendering from experiment CSVs to SVG files.
 *
 * Three kinds:
 *  - threshold-curves: log-log p_L vs p, one series per code, error bars
 *    straight from the ci column, break-even guide lines p_L = k p.
 *  - comparison: the same series overlaid with k-copy aggregated
 *    surface-code reference points at p = 1e-3.
 *  - sweep-heatmap: best distance per (delta, d_A:d_B) cell.
 *
 * Rendering is deterministic: repeated renders of the same inputs
 * produce byte-identical SVG.
 */

import * as fs from "node:fs";
import * as path from "node:path";
import * as echarts from "echarts";

import { readCsv, requireColumns, num, Table } from "./csv";
import { INSTANCE_LOGICAL_QUBITS, SURFACE_CODE_REFERENCE, kCopyRate } from "./reference";

export type PlotKind = "threshold-curves" | "comparison" | "sweep-heatmap";

export interface PlotSpec {
  kind: PlotKind;
  input: string;
  output: string;
  /** Optional filter on the model column (capacity/phenomenological/circuit). */
  model?: string;
  /** Optional axis ranges; log-scale plots use [min, max] in data units. */
  xRange?: [number, number];
  yRange?: [number, number];
  width?: number;
  height?: number;
}

export const RESULT_COLUMNS = [
  "code",
  "model",
  "p",
  "rounds",
  "shots_x",
  "shots_z",
  "fails_x",
  "fails_z",
  "L_X",
  "L_Z",
  "p_L",
  "ci",
  "seed",
];

const PALETTE = [
  "#4477aa",
  "#ee6677",
  "#228833",
  "#ccbb44",
  "#66ccee",
  "#aa3377",
  "#bbbbbb",
];

/** Renumber the per-instance zrender tokens (class names, clip-path ids)
 * so repeated renders of the same figure are byte-identical.  Identical
 * tokens map to identical replacements, preserving every cross-reference
 * between style blocks, class attributes, and url(#...) ids. */
function normalizeSvg(svg: string): string {
  const mapping = new Map<string, string>();
  return svg.replace(/zr\d+-[A-Za-z0-9_-]+/g, (token) => {
    if (!mapping.has(token)) {
      mapping.set(token, `zr-t${mapping.size}`);
    }
    return mapping.get(token)!;
  });
}

function renderOption(option: object, width: number, height: number): string {
  const chart = echarts.init(null as unknown as HTMLElement, undefined, {
    renderer: "svg",
    ssr: true,
    width,
    height,
  });
  chart.setOption({ animation: false, ...option });
  const svg = chart.renderToSVGString();
  chart.dispose();
  return normalizeSvg(svg);
}

function emptyFigure(title: string, width: number, height: number): string {
  return renderOption(
    {
      title: { text: title, left: "center" },
      xAxis: { type: "log", name: "physical error rate p" },
      yAxis: { type: "log", name: "logical error rate" },
      series: [],
      graphic: [
        {
          type: "text",
          left: "center",
          top: "middle",
          style: {
            text: "warning: input CSV contains no data rows",
            fontSize: 16,
            fill: "#aa3377",
          },
        },
      ],
    },
    width,
    height
  );
}

interface SeriesPoint {
  p: number;
  pl: number;
  ci: number;
}

function groupSeries(table: Table, model?: string): Map<string, SeriesPoint[]> {
  const groups = new Map<string, SeriesPoint[]>();
  for (const row of table.rows) {
    if (model && row["model"] !== model) continue;
    const pl = num(row, "p_L");
    const p = num(row, "p");
    if (!(p > 0) || !(pl > 0)) continue; // log axes cannot show zero rates
    const key = row["code"];
    if (!groups.has(key)) groups.set(key, []);
    groups.get(key)!.push({ p, pl, ci: num(row, "ci") });
  }
  for (const pts of groups.values()) {
    pts.sort((a, b) => a.p - b.p);
  }
  return new Map([...groups.entries()].sort(([a], [b]) => (a < b ? -1 : 1)));
}

function errorBarSeries(name: string, color: string, pts: SeriesPoint[]): object[] {
  const bars: object[] = [];
  pts.forEach((pt, i) => {
    const lo = Math.max(pt.pl - pt.ci, pt.pl * 1e-3);
    const hi = pt.pl + pt.ci;
    bars.push({
      name: `${name} ci ${i}`,
      type: "line",
      data: [
        [pt.p, lo],
        [pt.p, hi],
      ],
      lineStyle: { color, width: 1 },
      symbol: "none",
      silent: true,
      showSymbol: false,
      tooltip: { show: false },
    });
  });
  return bars;
}

function thresholdOption(table: Table, spec: PlotSpec): object {
  const groups = groupSeries(table, spec.model);
  const series: object[] = [];
  const legend: string[] = [];
  let idx = 0;
  let pMin = Infinity;
  let pMax = 0;
  for (const [name, pts] of groups) {
    const color = PALETTE[idx % PALETTE.length];
    idx += 1;
    legend.push(name);
    series.push({
      name,
      type: "line",
      data: pts.map((pt) => [pt.p, pt.pl]),
      itemStyle: { color },
      lineStyle: { color },
      symbolSize: 6,
    });
    series.push(...errorBarSeries(name, color, pts));
    for (const pt of pts) {
      pMin = Math.min(pMin, pt.p);
      pMax = Math.max(pMax, pt.p);
    }
  }
  // Break-even guide lines p_L = k p for catalogued instances.
  idx = 0;
  for (const [name] of groups) {
    const k = INSTANCE_LOGICAL_QUBITS[name];
    const color = PALETTE[idx % PALETTE.length];
    idx += 1;
    if (!k || !(pMin < pMax)) continue;
    series.push({
      name: `${name} break-even`,
      type: "line",
      data: [
        [pMin, k * pMin],
        [pMax, k * pMax],
      ],
      lineStyle: { color, width: 1, type: "dashed" },
      symbol: "none",
      silent: true,
      tooltip: { show: false },
    });
  }
  return {
    title: { text: spec.model ? `logical error rate (${spec.model})` : "logical error rate", left: "center" },
    legend: { data: legend, bottom: 0 },
    xAxis: {
      type: "log",
      name: "physical error rate p",
      min: spec.xRange?.[0],
      max: spec.xRange?.[1],
    },
    yAxis: {
      type: "log",
      name: "p_L",
      min: spec.yRange?.[0],
      max: spec.yRange?.[1],
    },
    series,
  };
}

function comparisonOption(table: Table, spec: PlotSpec): object {
  const base = thresholdOption(table, spec) as { series: object[]; legend: { data: string[] } };
  const circuit = spec.model === "circuit";
  const copies = 10;
  const points = SURFACE_CODE_REFERENCE.map((ref) => ({
    name: `surface d=${ref.distance} (${copies} copies)`,
    value: [1e-3, kCopyRate(circuit ? ref.plCircuit : ref.plPhenom, copies)],
  }));
  base.series.push({
    name: `surface code x${copies}`,
    type: "scatter",
    data: points.map((pt) => pt.value),
    symbol: "diamond",
    symbolSize: 9,
    itemStyle: { color: "#000000" },
  });
  base.legend.data.push(`surface code x${copies}`);
  return base;
}

function sweepOption(table: Table, spec: PlotSpec): object {
  requireColumns(
    { columns: table.columns, rows: table.rows },
    ["delta", "d_a", "d_b", "best_d"],
    "sweep-heatmap"
  );
  const deltas = [...new Set(table.rows.map((r) => r["delta"]))].sort(
    (a, b) => Number(a) - Number(b)
  );
  const pairs = [...new Set(table.rows.map((r) => `${r["d_a"]}:${r["d_b"]}`))].sort();
  const data: [number, number, number | string][] = [];
  let best = 1;
  for (const row of table.rows) {
    const x = deltas.indexOf(row["delta"]);
    const y = pairs.indexOf(`${row["d_a"]}:${row["d_b"]}`);
    const v = row["best_d"] === "" || row["best_d"] === "None" ? "-" : Number(row["best_d"]);
    if (typeof v === "number") best = Math.max(best, v);
    data.push([x, y, v]);
  }
  return {
    title: { text: "max distance per (delta, d_A:d_B)", left: "center" },
    xAxis: { type: "category", data: deltas, name: "delta" },
    yAxis: { type: "category", data: pairs, name: "d_A:d_B" },
    visualMap: {
      min: 0,
      max: best,
      calculable: false,
      orient: "vertical",
      right: 0,
      top: "middle",
    },
    series: [
      {
        type: "heatmap",
        data,
        label: { show: true },
      },
    ],
  };
}

export function renderSpec(spec: PlotSpec): string {
  const width = spec.width ?? 760;
  const height = spec.height ?? 520;
  const table = readCsv(spec.input);
  if (spec.kind !== "sweep-heatmap") {
    requireColumns(table, RESULT_COLUMNS, spec.kind);
  }
  let svg: string;
  if (table.rows.length === 0) {
    svg = emptyFigure(`${spec.kind}: ${path.basename(spec.input)}`, width, height);
  } else if (spec.kind === "threshold-curves") {
    svg = renderOption(thresholdOption(table, spec), width, height);
  } else if (spec.kind === "comparison") {
    svg = renderOption(comparisonOption(table, spec), width, height);
  } else if (spec.kind === "sweep-heatmap") {
    svg = renderOption(sweepOption(table, spec), width, height);
  } else {
    throw new Error(`unknown plot kind: ${(spec as PlotSpec).kind}`);
  }
  return svg;
}

export function renderToFile(spec: PlotSpec): string {
  if (!spec.output.endsWith(".svg")) {
    throw new Error(
      `output must be an .svg path (got ${spec.output}); rasterization is not available`
    );
  }
  const svg = renderSpec(spec);
  fs.mkdirSync(path.dirname(path.resolve(spec.output)), { recursive: true });
  fs.writeFileSync(spec.output, svg);
  return spec.output;
}
