#!/usr/bin/env node
/** `render --figure <id> --data <dir> --out <dir>`: CSV -> SVG. */

import { mkdirSync, writeFileSync } from "node:fs";
import { join } from "node:path";
import yargs from "yargs";
import { hideBin } from "yargs/helpers";
import { CsvValidationError } from "./csv.js";
import { FigureId, RECIPES, renderFigure } from "./recipes.js";

export function run(argv: string[]): number {
  const args = yargs(argv)
    .command("render", "render one figure from simulation CSV output")
    .option("figure", {
      type: "string",
      demandOption: true,
      choices: Object.keys(RECIPES),
      describe: "figure id",
    })
    .option("data", { type: "string", demandOption: true, describe: "directory with CSV outputs" })
    .option("out", { type: "string", demandOption: true, describe: "output directory" })
    .strict()
    .exitProcess(false)
    .parseSync();

  const figure = args.figure as FigureId;
  let svg: string;
  try {
    // Render fully in memory first: a validation error must not leave a
    // partial output file behind.
    svg = renderFigure(figure, args.data);
  } catch (error) {
    if (error instanceof CsvValidationError) {
      console.error(JSON.stringify({ error: error.name, message: error.message }));
      return 2;
    }
    throw error;
  }
  mkdirSync(args.out, { recursive: true });
  const path = join(args.out, `${figure}.svg`);
  writeFileSync(path, svg, "utf-8");
  console.log(`wrote ${path}`);
  return 0;
}

import { pathToFileURL } from "node:url";

if (process.argv[1] && import.meta.url === pathToFileURL(process.argv[1]).href) {
  process.exit(run(hideBin(process.argv)));
}
