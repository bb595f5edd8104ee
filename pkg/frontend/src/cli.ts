#!/usr/bin/env node
/** plot --in <dir> --kind <kind> --out <path> */

import { writeFileSync } from "node:fs";
import yargs from "yargs";
import { hideBin } from "yargs/helpers";
import { CsvError } from "./csv.js";
import { KINDS, Kind, renderKind } from "./figures.js";

export function main(argv: string[]): number {
  const args = yargs(argv)
    .scriptName("plot")
    .option("in", { type: "string", demandOption: true, describe: "directory with harness CSVs" })
    .option("kind", {
      type: "string",
      demandOption: true,
      choices: KINDS as unknown as string[],
      describe: "figure kind",
    })
    .option("out", { type: "string", demandOption: true, describe: "output .svg path" })
    .strict()
    .exitProcess(false)
    .parseSync();

  try {
    const figures = renderKind(args.kind as Kind, args.in);
    for (const fig of figures) {
      const path = fig.suffix
        ? args.out.replace(/(\.svg)?$/, `${fig.suffix}$1`)
        : args.out;
      writeFileSync(path, fig.svg);
      console.log(path);
    }
    return 0;
  } catch (err) {
    if (err instanceof CsvError || err instanceof Error) {
      console.error(`plot: ${err.message}`);
      return err instanceof CsvError ? 2 : 1;
    }
    throw err;
  }
}

process.exitCode = main(hideBin(process.argv));
