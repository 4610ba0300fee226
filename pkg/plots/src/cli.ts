#!/usr/bin/env node
import { writeFileSync, realpathSync } from "node:fs";
import { pathToFileURL } from "node:url";
import yargs from "yargs";
import { hideBin } from "yargs/helpers";
import { readTable, SchemaError } from "./csv.js";
import { render, KINDS, Kind } from "./index.js";

export function main(argv: string[]): number {
  const args = yargs(argv)
    .scriptName("plots")
    .usage("$0 <kind> --in <csv> --out <svg>")
    .command("$0 <kind>", "render one figure from an analysis CSV", (y) =>
      y.positional("kind", { choices: KINDS as readonly string[], demandOption: true }),
    )
    .option("in", { type: "string", demandOption: true, describe: "input CSV path" })
    .option("out", { type: "string", demandOption: true, describe: "output SVG path" })
    .option("title", { type: "string", describe: "figure title override" })
    .strict()
    .exitProcess(false)
    .fail((msg, err) => {
      throw err ?? new SchemaError(msg);
    })
    .parseSync();

  const table = readTable(args.in);
  const svg = render(args.kind as Kind, table, args.title);
  writeFileSync(args.out, svg + "\n");
  return 0;
}

// Run only when executed as a script (also via the bin symlink), not when
// imported by tests.
const invokedDirectly = (() => {
  if (process.argv[1] === undefined) return false;
  try {
    return import.meta.url === pathToFileURL(realpathSync(process.argv[1])).href;
  } catch {
    return false;
  }
})();
if (invokedDirectly) {
  try {
    process.exit(main(hideBin(process.argv)));
  } catch (err) {
    process.stderr.write(`plots: ${err instanceof Error ? err.message : String(err)}\n`);
    process.exit(1);
  }
}
