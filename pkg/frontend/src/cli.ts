#!/usr/bin/env node
/**
 * plot <kind> <csv...> -o <image> [--width N] [--height N]
 * plot kinds
 *
 * Renders anyonladder result CSVs to SVG. Exit 0 on success, 1 on any
 * usage, file, format, or schema error (message on stderr); no output
 * file is written on failure.
 */

import { realpathSync } from "fs";
import { pathToFileURL } from "url";

import { CsvFormatError, KINDS, SchemaError } from "./csv.js";
import { render } from "./render.js";

const USAGE = "usage: plot <kind> <csv...> -o <image> [--width N] [--height N]";

function fail(msg: string): number {
  console.error(`error: ${msg}`);
  return 1;
}

export async function main(argv: string[]): Promise<number> {
  if (argv.length === 0 || argv[0] === "-h" || argv[0] === "--help") {
    console.log(USAGE);
    console.log(`kinds: ${KINDS.join(", ")}`);
    return argv.length === 0 ? 1 : 0;
  }
  const kind = argv[0]!;
  if (kind === "kinds") {
    for (const k of KINDS) console.log(k);
    return 0;
  }
  if (!KINDS.includes(kind)) {
    return fail(`unknown kind ${JSON.stringify(kind)}; known kinds: ${KINDS.join(", ")}`);
  }

  const inputs: string[] = [];
  let out: string | undefined;
  let width: number | undefined;
  let height: number | undefined;
  for (let i = 1; i < argv.length; i++) {
    const arg = argv[i]!;
    if (arg === "-o" || arg === "--out") {
      out = argv[++i];
      if (out === undefined) return fail(`${arg} needs a path`);
    } else if (arg === "--width" || arg === "--height") {
      const raw = argv[++i];
      const v = Number(raw);
      if (raw === undefined || !Number.isFinite(v) || v <= 0) {
        return fail(`${arg} needs a positive number, got ${JSON.stringify(raw)}`);
      }
      if (arg === "--width") width = v;
      else height = v;
    } else if (arg.startsWith("-")) {
      return fail(`unknown option ${JSON.stringify(arg)}\n${USAGE}`);
    } else {
      inputs.push(arg);
    }
  }
  if (inputs.length === 0) return fail(`no input CSVs\n${USAGE}`);
  if (!out) return fail(`missing -o <image>\n${USAGE}`);
  if (!out.endsWith(".svg")) return fail(`only .svg output is supported, got ${JSON.stringify(out)}`);

  try {
    console.log(await render({ kind, inputs, out, width, height }));
    return 0;
  } catch (err) {
    if (err instanceof SchemaError || err instanceof CsvFormatError) return fail(err.message);
    if (err instanceof Error && "code" in err && err.code === "ENOENT") {
      return fail(`cannot read input: ${err.message}`);
    }
    throw err;
  }
}

function invokedDirectly(): boolean {
  const entry = process.argv[1];
  if (!entry) return false;
  try {
    return import.meta.url === pathToFileURL(realpathSync(entry)).href;
  } catch {
    return false;
  }
}

if (invokedDirectly()) {
  main(process.argv.slice(2)).then(
    (code) => process.exit(code),
    (err) => {
      console.error(`error: ${err instanceof Error ? err.message : String(err)}`);
      process.exit(1);
    },
  );
}
