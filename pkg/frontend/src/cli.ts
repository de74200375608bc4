#!/usr/bin/env node
/** plot --kind threshold-curves|comparison|sweep-heatmap --in results.csv
 *       --out fig.svg [--model phenomenological] [--x lo:hi] [--y lo:hi]
 */

import { PlotKind, PlotSpec, renderToFile } from "./render";

function parseRange(text: string | undefined): [number, number] | undefined {
  if (!text) return undefined;
  const parts = text.split(":").map(Number);
  if (parts.length !== 2 || parts.some((v) => !Number.isFinite(v))) {
    throw new Error(`bad range ${text}; expected lo:hi`);
  }
  return [parts[0], parts[1]];
}

export function parseArgs(argv: string[]): PlotSpec {
  const flags = new Map<string, string>();
  for (let i = 0; i < argv.length; i += 1) {
    const arg = argv[i];
    if (!arg.startsWith("--")) {
      throw new Error(`unexpected argument ${arg}`);
    }
    const value = argv[i + 1];
    if (value === undefined) {
      throw new Error(`flag ${arg} needs a value`);
    }
    flags.set(arg.slice(2), value);
    i += 1;
  }
  const kind = flags.get("kind") as PlotKind | undefined;
  const input = flags.get("in");
  const output = flags.get("out");
  if (!kind || !input || !output) {
    throw new Error("required flags: --kind, --in, --out");
  }
  if (!["threshold-curves", "comparison", "sweep-heatmap"].includes(kind)) {
    throw new Error(`unknown kind ${kind}`);
  }
  return {
    kind,
    input,
    output,
    model: flags.get("model"),
    xRange: parseRange(flags.get("x")),
    yRange: parseRange(flags.get("y")),
    width: flags.has("width") ? Number(flags.get("width")) : undefined,
    height: flags.has("height") ? Number(flags.get("height")) : undefined,
  };
}

export function main(argv: string[]): number {
  try {
    const spec = parseArgs(argv);
    const out = renderToFile(spec);
    process.stdout.write(`wrote ${out}\n`);
    return 0;
  } catch (err) {
    process.stderr.write(`${(err as Error).message}\n`);
    return 1;
  }
}

if (require.main === module) {
  process.exit(main(process.argv.slice(2)));
}
