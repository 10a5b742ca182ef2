#!/usr/bin/env node
/**
 * One figure per invocation:
 *
 *   render --kind <kind> --in <csv> [--baseline <csv>] --out <svg>
 */

import yargs from "yargs";
import { hideBin } from "yargs/helpers";

import { FIGURE_KINDS, FigureKind, render } from "./figures.js";

yargs(hideBin(process.argv))
  .command(
    "render",
    "render one figure from a CSV artifact",
    (y) =>
      y
        .option("kind", {
          choices: FIGURE_KINDS,
          demandOption: true,
          describe: "figure kind",
        })
        .option("in", {
          type: "string",
          demandOption: true,
          describe: "input CSV path",
        })
        .option("baseline", {
          type: "string",
          describe: "extrapolation CSV overlaid by vp_convergence",
        })
        .option("out", {
          type: "string",
          demandOption: true,
          describe: "output .svg path",
        }),
    (argv) => {
      try {
        render({
          kind: argv.kind as FigureKind,
          input: argv.in as string,
          baseline: argv.baseline,
          output: argv.out as string,
        });
      } catch (err) {
        console.error(`error: ${(err as Error).message}`);
        process.exit(1);
      }
      console.log(`wrote ${argv.out}`);
    },
  )
  .demandCommand(1, "specify a command (render)")
  .strict()
  .fail((msg, err) => {
    console.error(err ? `error: ${err.message}` : msg);
    process.exit(1);
  })
  .parseSync();
