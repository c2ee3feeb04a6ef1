/** Figure recipes: which CSV, which columns, and how to draw them. */

import { join } from "node:path";
import { Table, column, loadTable } from "./csv.js";
import { PALETTE, Plot, extent, fmt, heatColor } from "./svg.js";

export type FigureId =
  | "fig2a"
  | "fig2c"
  | "fig2e"
  | "fig3a"
  | "fig3b"
  | "fig3c"
  | "fig3d"
  | "fig4b"
  | "fig4c"
  | "fig4d";

export interface FigureRecipe {
  id: FigureId;
  /** CSV file name produced by the simulation CLI, relative to --data. */
  dataFile: string;
  requiredColumns: string[];
  render: (table: Table) => string;
}

const MARGINS = { top: 28, right: 20, bottom: 40, left: 56 };
const W = 480;
const H = 340;

function spectrumScatter(table: Table, yColumn: string, yLabel: string, title: string): string {
  const index = column(table, "index");
  const ys = column(table, yColumn);
  const isEdge = column(table, "is_edge");
  const plot = new Plot(W, H, MARGINS, extent(index), extent(ys), {});
  plot.axes("eigenstate index", yLabel, title);
  const bulkX = index.filter((_, i) => isEdge[i] === 0);
  const bulkY = ys.filter((_, i) => isEdge[i] === 0);
  const edgeX = index.filter((_, i) => isEdge[i] === 1);
  const edgeY = ys.filter((_, i) => isEdge[i] === 1);
  plot.scatter(bulkX, bulkY, PALETTE[0]);
  plot.scatter(edgeX, edgeY, PALETTE[1], 3.5);
  plot.legend([
    { label: "bulk", color: PALETTE[0] },
    { label: "edge doublet", color: PALETTE[1] },
  ]);
  return plot.render();
}

function populationTraces(
  table: Table,
  series: { column: string; label: string; dash?: string }[],
  title: string,
  opts: { logY?: boolean } = {},
): string {
  const time = column(table, "time");
  const all = series.flatMap((s) => column(table, s.column));
  const yDomain: [number, number] = opts.logY
    ? [Math.max(1e-6, Math.min(...all.filter((v) => v > 0))), 1.05]
    : [0, Math.max(1.0, ...all) * 1.05];
  const plot = new Plot(W, H, MARGINS, extent(time, 0), yDomain, { logY: opts.logY });
  plot.axes("time (1/J2)", opts.logY ? "population (log)" : "population", title);
  series.forEach((s, i) => {
    let ys = column(table, s.column);
    if (opts.logY) ys = ys.map((v) => Math.max(v, yDomain[0]));
    plot.line(time, ys, PALETTE[i % PALETTE.length], { dash: s.dash });
  });
  plot.legend(series.map((s, i) => ({ label: s.label, color: PALETTE[i % PALETTE.length], dash: s.dash })));
  return plot.render();
}

function heatmap(table: Table): string {
  const km = column(table, "k_minus");
  const kp = column(table, "k_plus");
  const fid = column(table, "fidelity");
  const kmValues = [...new Set(km)].sort((a, b) => a - b);
  const kpValues = [...new Set(kp)].sort((a, b) => a - b);
  const dKm = kmValues.length > 1 ? kmValues[1] - kmValues[0] : 1;
  const dKp = kpValues.length > 1 ? kpValues[1] - kpValues[0] : 1;
  const plot = new Plot(
    W,
    H,
    { ...MARGINS, right: 90 },
    [kmValues[0] - dKm / 2, kmValues[kmValues.length - 1] + dKm / 2],
    [kpValues[0] - dKp / 2, kpValues[kpValues.length - 1] + dKp / 2],
  );
  for (let i = 0; i < km.length; i += 1) {
    plot.cell(km[i] - dKm / 2, km[i] + dKm / 2, kp[i] - dKp / 2, kp[i] + dKp / 2, heatColor(fid[i]));
  }
  plot.axes("K- (J2)", "K+ (J2)", "SWAP fidelity map");
  // Color bar.
  const barX = W - 70;
  for (let i = 0; i < 40; i += 1) {
    const t = i / 39;
    const y = H - MARGINS.bottom - t * (H - MARGINS.top - MARGINS.bottom);
    plot.raw(
      `<rect x="${barX}" y="${fmt(y - 6)}" width="12" height="6.5" fill="${heatColor(t)}"/>`,
    );
  }
  plot.raw(
    `<text x="${barX + 16}" y="${H - MARGINS.bottom + 3}" font-size="9">0</text>`,
    );
  plot.raw(`<text x="${barX + 16}" y="${MARGINS.top + 8}" font-size="9">1</text>`);
  return plot.render();
}

function gateSweep(table: Table): string {
  const kp = column(table, "k_plus");
  const tSwap = column(table, "t_swap");
  const plot = new Plot(W, H, MARGINS, [Math.min(...kp) / 1.2, Math.max(...kp) * 1.2],
    [Math.min(...tSwap) / 1.5, Math.max(...tSwap) * 1.5], { logX: true, logY: true });
  plot.axes("K+ (J2)", "T_SWAP (1/J2)", "Gate time along the sweet line");
  plot.line(kp, tSwap, PALETTE[0]);
  plot.scatter(kp, tSwap, PALETTE[0], 3);
  return plot.render();
}

function disorderPlateau(table: Table): string {
  const delta = column(table, "delta");
  const mean = column(table, "mean");
  const std = column(table, "std");
  const recal = column(table, "recalibrated");
  const plot = new Plot(W, H, MARGINS, extent(delta, 0.1), [Math.min(0.5, ...mean) - 0.05, 1.02]);
  plot.axes("disorder strength delta (J2)", "mean gate fidelity", "Disorder robustness");
  const arms: { flag: number; label: string; color: string }[] = [
    { flag: 1, label: "recalibrated", color: PALETTE[0] },
    { flag: 0, label: "uncalibrated", color: PALETTE[1] },
  ];
  for (const arm of arms) {
    const xs = delta.filter((_, i) => recal[i] === arm.flag);
    const ys = mean.filter((_, i) => recal[i] === arm.flag);
    const es = std.filter((_, i) => recal[i] === arm.flag);
    plot.line(xs, ys, arm.color);
    plot.scatter(xs, ys, arm.color, 3);
    plot.errorBars(xs, ys, es, arm.color);
  }
  plot.legend(arms.map((a) => ({ label: a.label, color: a.color })));
  return plot.render();
}

export const RECIPES: Record<FigureId, FigureRecipe> = {
  fig2a: {
    id: "fig2a",
    dataFile: "spectrum.csv",
    requiredColumns: ["index", "energy", "parity", "ipr", "is_edge"],
    render: (t) => spectrumScatter(t, "energy", "energy (J2)", "Chain spectrum"),
  },
  fig2c: {
    id: "fig2c",
    dataFile: "spectrum.csv",
    requiredColumns: ["index", "ipr", "is_edge"],
    render: (t) => spectrumScatter(t, "ipr", "inverse participation ratio", "State localization"),
  },
  fig2e: {
    id: "fig2e",
    dataFile: "transfer.csv",
    requiredColumns: ["time", "pop_1S", "pop_2S"],
    render: (t) =>
      populationTraces(
        t,
        [
          { column: "pop_1S", label: "psi_1S" },
          { column: "pop_2S", label: "psi_2S" },
        ],
        "Edge-state transfer",
      ),
  },
  fig3a: {
    id: "fig3a",
    dataFile: "swap.csv",
    requiredColumns: ["time", "pop_1S", "pop_1A", "pop_2A", "pop_2S", "fidelity"],
    render: (t) =>
      populationTraces(
        t,
        [
          { column: "fidelity", label: "gate fidelity" },
          { column: "pop_2S", label: "pop psi_2S", dash: "4 3" },
          { column: "pop_2A", label: "pop psi_2A", dash: "4 3" },
          { column: "pop_1A", label: "pop psi_1A", dash: "2 2" },
        ],
        "SWAP dynamics at the sweet point",
      ),
  },
  fig3b: {
    id: "fig3b",
    dataFile: "swap-map.csv",
    requiredColumns: ["k_minus", "k_plus", "fidelity"],
    render: heatmap,
  },
  fig3c: {
    id: "fig3c",
    dataFile: "gate-sweep.csv",
    requiredColumns: ["j2", "k_plus", "j1_opt", "t_swap", "fidelity"],
    render: gateSweep,
  },
  fig3d: {
    id: "fig3d",
    dataFile: "disorder.csv",
    requiredColumns: ["delta", "mean", "std", "recalibrated"],
    render: disorderPlateau,
  },
  fig4b: {
    id: "fig4b",
    dataFile: "dissipative.csv",
    requiredColumns: ["time", "pop_S", "pop_A"],
    render: (t) =>
      populationTraces(
        t,
        [
          { column: "pop_S", label: "psi_S (bright)" },
          { column: "pop_A", label: "psi_A (dark)" },
        ],
        "Super- and subradiant decay",
        { logY: true },
      ),
  },
  fig4c: {
    id: "fig4c",
    dataFile: "entangle.csv",
    requiredColumns: ["time", "bell_plus", "bell_minus", "p_ground"],
    render: (t) =>
      populationTraces(
        t,
        [
          { column: "bell_plus", label: "Psi+" },
          { column: "bell_minus", label: "Psi-" },
          { column: "p_ground", label: "ground", dash: "4 3" },
        ],
        "Bell-state populations",
      ),
  },
  fig4d: {
    id: "fig4d",
    dataFile: "entangle.csv",
    requiredColumns: ["time", "concurrence"],
    render: (t) =>
      populationTraces(
        t,
        [{ column: "concurrence", label: "concurrence" }],
        "Remote edge-atom entanglement",
      ),
  },
};

/** Load the recipe's data (validating columns) and render it to SVG. */
export function renderFigure(id: FigureId, dataDir: string): string {
  const recipe = RECIPES[id];
  const table = loadTable(join(dataDir, recipe.dataFile), recipe.requiredColumns);
  return recipe.render(table);
}
