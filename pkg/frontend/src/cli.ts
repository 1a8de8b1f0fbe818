#!/usr/bin/env node
/**
 * Render simulator outputs to SVG.
 *
 *   qmpemba-plot --style fig1 --in out/fig1a --out fig1a.svg
 *   qmpemba-plot --style fig2 --in out/fig2  --out fig2.svg
 *
 * Reads only the documented CSV/JSON files; any schema mismatch exits
 * nonzero with the reason on stderr.
 */

import { mkdirSync, writeFileSync } from "node:fs";
import { dirname } from "node:path";

import { renderFigure, type Style } from "./render.js";

interface Args {
  style: Style;
  input: string;
  output: string;
}

export function parseArgs(argv: string[]): Args {
  let style: string | undefined;
  let input: string | undefined;
  let output: string | undefined;
  for (let i = 0; i < argv.length; i += 1) {
    const arg = argv[i];
    const next = () => {
      i += 1;
      const v = argv[i];
      if (v === undefined) throw new Error(`${arg} needs a value`);
      return v;
    };
    switch (arg) {
      case "--style":
        style = next();
        break;
      case "--in":
        input = next();
        break;
      case "--out":
        output = next();
        break;
      default:
        throw new Error(`unknown argument ${arg}`);
    }
  }
  if (style !== "fig1" && style !== "fig2") {
    throw new Error('--style must be "fig1" or "fig2"');
  }
  if (!input) throw new Error("--in DIR is required");
  if (!output) throw new Error("--out FILE is required");
  return { style, input, output };
}

export function runCli(argv: string[]): number {
  try {
    const args = parseArgs(argv);
    const svg = renderFigure(args.style, args.input);
    mkdirSync(dirname(args.output) || ".", { recursive: true });
    writeFileSync(args.output, svg);
    return 0;
  } catch (err) {
    process.stderr.write(`error: ${(err as Error).message}\n`);
    return 1;
  }
}

const invokedDirectly =
  process.argv[1] !== undefined &&
  import.meta.url === new URL(`file://${process.argv[1]}`).href;
if (invokedDirectly) {
  process.exit(runCli(process.argv.slice(2)));
}
