#!/usr/bin/env node
/**
 * render_figures <scenario_dir> [--panels ...] [--out file]
 *
 * Exit codes: 0 on success, 1 when the scenario data is missing or
 * malformed, 2 for usage errors.
 */

import { realpathSync } from "node:fs";
import { pathToFileURL } from "node:url";
import yargs from "yargs";
import { MalformedCsvError, MissingPanelError } from "./csv.js";
import { PANEL_NAMES, render } from "./figure.js";
import type { PanelName } from "./figure.js";

class UsageError extends Error {}

function parseArgs(argv: readonly string[]) {
  return yargs([...argv])
    .scriptName("render_figures")
    .usage("$0 <scenario_dir> [--panels ...] [--out file]")
    .command("$0 <scenario_dir>", "render figure panels from scenario CSVs",
      (y) => y.positional("scenario_dir", {
        describe: "directory holding the scenario CSV files",
        type: "string",
        demandOption: true,
      }))
    .option("panels", {
      describe: "panels to draw",
      type: "string",
      array: true,
      choices: PANEL_NAMES,
      default: [...PANEL_NAMES],
    })
    .option("out", {
      describe: "output SVG file",
      type: "string",
      default: "figure.svg",
    })
    .strict()
    .exitProcess(false)
    .fail((msg, err) => {
      throw err ?? new UsageError(msg);
    })
    .parseSync();
}

export function runCli(argv: readonly string[]): number {
  try {
    const args = parseArgs(argv);
    const svg = render({
      scenarioDir: args["scenario_dir"] as string,
      panels: args.panels as PanelName[],
      output: args.out,
    });
    const panels = (args.panels as string[]).length;
    console.log(`wrote ${args.out} (${panels} panel${panels === 1 ? "" : "s"}, ` +
      `${svg.length} bytes)`);
    return 0;
  } catch (error) {
    if (error instanceof UsageError) {
      console.error(`render_figures: ${error.message}`);
      return 2;
    }
    if (error instanceof MissingPanelError || error instanceof MalformedCsvError) {
      console.error(`render_figures: ${error.message}`);
      return 1;
    }
    const message = error instanceof Error ? error.message : String(error);
    console.error(`render_figures: unexpected error: ${message}`);
    return 1;
  }
}

const invokedAs = process.argv[1] === undefined
  ? ""
  : pathToFileURL(realpathSync(process.argv[1])).href;
if (import.meta.url === invokedAs) {
  process.exit(runCli(process.argv.slice(2)));
}
