import { mkdtempSync, writeFileSync, readFileSync, existsSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { describe, expect, it } from "vitest";
import { CsvValidationError, loadTable } from "../src/csv.js";
import { RECIPES, renderFigure } from "../src/recipes.js";
import { run } from "../src/cli.js";

function fixtureDir(): string {
  const dir = mkdtempSync(join(tmpdir(), "xssh-fig-"));
  const write = (name: string, header: string[], rows: number[][]) => {
    const text = [header.join(","), ...rows.map((r) => r.join(","))].join("\n") + "\n";
    writeFileSync(join(dir, name), text, "utf-8");
  };
  const times = Array.from({ length: 20 }, (_, i) => i * 0.5);
  write(
    "spectrum.csv",
    ["index", "energy", "parity", "ipr", "is_edge"],
    Array.from({ length: 10 }, (_, i) => [i, (i - 4.5) / 5, i % 2 ? 1 : -1, 0.2, i === 4 || i === 5 ? 1 : 0]),
  );
  write(
    "transfer.csv",
    ["time", "pop_1S", "pop_1A", "pop_2A", "pop_2S", "fidelity"],
    times.map((t) => [t, Math.cos(t / 3) ** 2, 0, 0, Math.sin(t / 3) ** 2, Math.sin(t / 3) ** 2]),
  );
  write(
    "swap.csv",
    ["time", "pop_1S", "pop_1A", "pop_2A", "pop_2S", "fidelity"],
    times.map((t) => [t, 0.5, 0.1, 0.2, 0.2, Math.min(1, t / 10)]),
  );
  const grid: number[][] = [];
  for (let i = 0; i < 5; i += 1) {
    for (let j = 0; j < 5; j += 1) {
      grid.push([i * 0.025, j * 0.025, (i + j) / 8]);
    }
  }
  write("swap-map.csv", ["k_minus", "k_plus", "fidelity"], grid);
  write(
    "gate-sweep.csv",
    ["j2", "k_plus", "j1_opt", "t_swap", "fidelity", "calibration_failed"],
    [0.05, 0.1, 0.2, 0.3].map((k) => [1, k, 0.4, 10 / k ** 2, 0.999, 0]),
  );
  write(
    "disorder.csv",
    ["delta", "mean", "std", "recalibrated"],
    [
      [0.02, 0.998, 0.001, 1],
      [0.02, 0.95, 0.04, 0],
      [0.04, 0.997, 0.002, 1],
      [0.04, 0.85, 0.1, 0],
    ],
  );
  write(
    "dissipative.csv",
    ["time", "pop_S", "pop_A", "p_ground", "bell_plus", "bell_minus", "concurrence"],
    times.map((t) => [t, Math.exp(-0.3 * t), Math.exp(-0.01 * t), 0.1, 0.2, 0.3, 0.1]),
  );
  write(
    "entangle.csv",
    ["time", "pop_S", "pop_A", "p_ground", "bell_plus", "bell_minus", "concurrence"],
    times.map((t) => [t, 0.3, 0.3, 0.2, 0.25, 0.35, 0.4 * (1 - Math.exp(-t))]),
  );
  return dir;
}

describe("csv validation", () => {
  it("rejects a missing column with a named error listing headers", () => {
    const dir = fixtureDir();
    writeFileSync(join(dir, "broken.csv"), "time,pop_1S\n0,1\n", "utf-8");
    try {
      loadTable(join(dir, "broken.csv"), ["time", "pop_2S"]);
      expect.unreachable();
    } catch (error) {
      expect(error).toBeInstanceOf(CsvValidationError);
      const e = error as CsvValidationError;
      expect(e.name).toBe("CsvValidationError");
      expect(e.message).toContain("pop_2S");
      expect(e.message).toContain("expected columns");
      expect(e.found).toEqual(["time", "pop_1S"]);
    }
  });

  it("rejects an empty CSV", () => {
    const dir = fixtureDir();
    writeFileSync(join(dir, "empty.csv"), "", "utf-8");
    expect(() => loadTable(join(dir, "empty.csv"), ["time"])).toThrow(CsvValidationError);
  });

  it("rejects a header-only CSV", () => {
    const dir = fixtureDir();
    writeFileSync(join(dir, "only.csv"), "time,pop_1S\n", "utf-8");
    expect(() => loadTable(join(dir, "only.csv"), ["time"])).toThrow(/no data rows/);
  });

  it("rejects non-numeric cells", () => {
    const dir = fixtureDir();
    writeFileSync(join(dir, "nan.csv"), "time,x\n0,oops\n", "utf-8");
    expect(() => loadTable(join(dir, "nan.csv"), ["time", "x"])).toThrow(/non-numeric/);
  });
});

describe("recipes", () => {
  const dir = fixtureDir();

  it.each(Object.keys(RECIPES) as (keyof typeof RECIPES)[])("renders %s", (id) => {
    const svg = renderFigure(id, dir);
    expect(svg.startsWith("<svg")).toBe(true);
    expect(svg).toContain("</svg>");
  });

  it("is byte-stable across repeated renders", () => {
    for (const id of Object.keys(RECIPES) as (keyof typeof RECIPES)[]) {
      expect(renderFigure(id, dir)).toBe(renderFigure(id, dir));
    }
  });
});

describe("cli", () => {
  it("writes the figure and returns 0", () => {
    const data = fixtureDir();
    const out = mkdtempSync(join(tmpdir(), "xssh-out-"));
    const code = run(["render", "--figure", "fig2e", "--data", data, "--out", out]);
    expect(code).toBe(0);
    const svg = readFileSync(join(out, "fig2e.svg"), "utf-8");
    expect(svg).toContain("psi_2S");
  });

  it("returns 2 and writes no partial file on validation failure", () => {
    const data = mkdtempSync(join(tmpdir(), "xssh-bad-"));
    writeFileSync(join(data, "transfer.csv"), "", "utf-8");
    const out = mkdtempSync(join(tmpdir(), "xssh-out-"));
    const code = run(["render", "--figure", "fig2e", "--data", data, "--out", out]);
    expect(code).toBe(2);
    expect(existsSync(join(out, "fig2e.svg"))).toBe(false);
  });
});
