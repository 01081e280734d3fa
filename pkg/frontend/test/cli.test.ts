import { execFileSync } from "child_process";
import { existsSync, mkdtempSync, readFileSync, rmSync, writeFileSync } from "fs";
import { tmpdir } from "os";
import path from "path";
import { fileURLToPath } from "url";
import { afterAll, beforeAll, describe, expect, it, vi } from "vitest";

import { KINDS } from "../src/csv.js";
import { main } from "../src/cli.js";

/**
 * End-to-end coverage against the solver package: every CSV kind is
 * produced by `python3 -m anyonladder run` on a desk-scale config, then
 * rendered through the real CLI entry point.
 */

const CONFIGS: Record<string, string> = {
  counts_vs_jp: `kind = counts_vs_jp
model.L = 2
model.N = 2
grid.theta = 0,0.4pi
grid.jp = 0.01,0.05,0.1
`,
  maxim_heatmap: `kind = maxim_heatmap
model.L = 2
model.N = 2
grid.theta = 0,0.4pi
grid.jp = 0.01,0.1
`,
  threshold_vs_L: `kind = threshold_vs_L
model.L = 2
model.N = 2
grid.theta = 0.4pi
grid.L = 2,3
grid.jp = log:1e-3:0.3:5
`,
  spectrum_vs_jp: `kind = spectrum_vs_jp
model.L = 2
model.N = 2
model.theta = 0.4pi
grid.jp = 0.01,0.05,0.1
`,
  quench: `kind = quench
model.L = 2
model.N = 2
model.theta = 0.4pi
quench.j_ini = 0.01
quench.j_final = 0.05
time.grid = 1,2,5,10
`,
  im_dos: `kind = im_dos
model.L = 2
model.N = 2
model.theta = 0.4pi
model.Jp = 0.1
dos.bins = 7
`,
  symmetry_residuals: `kind = symmetry_residuals
model.L = 2
model.N = 2
model.Jp = 0.1
grid.theta = 0,0.4pi
`,
  commutator_check: `kind = commutator_check
model.L = 2
model.N = 2
grid.theta = 0,0.3,pi
`,
  perturbation_check: `kind = perturbation_check
model.L = 2
model.N = 2
model.Jp = 0.02
grid.theta = 0.3,0.4pi
`,
};

let work: string;
let data: string;
const csvOf = (kind: string) => path.join(data, `${kind}.csv`);

beforeAll(() => {
  work = mkdtempSync(path.join(tmpdir(), "ladder-plots-"));
  data = path.join(work, "data");
  for (const [kind, text] of Object.entries(CONFIGS)) {
    const cfg = path.join(work, `${kind}.cfg`);
    writeFileSync(cfg, text);
    execFileSync("python3", ["-m", "anyonladder", "run", cfg, "--out", data], {
      stdio: "pipe",
    });
  }
});

afterAll(() => {
  rmSync(work, { recursive: true, force: true });
});

describe("plot CLI against live solver output", () => {
  it("covers every kind with a generated CSV", () => {
    expect(Object.keys(CONFIGS).sort()).toEqual([...KINDS].sort());
    for (const kind of KINDS) expect(existsSync(csvOf(kind))).toBe(true);
  });

  for (const kind of KINDS) {
    it(`renders ${kind} and is byte-stable across reruns`, async () => {
      const out = path.join(work, `${kind}.svg`);
      expect(await main([kind, csvOf(kind), "-o", out])).toBe(0);
      const first = readFileSync(out);
      expect(first.subarray(0, 4).toString()).toBe("<svg");
      expect(await main([kind, csvOf(kind), "-o", out])).toBe(0);
      expect(readFileSync(out).equals(first)).toBe(true);
    });
  }

  it("never mutates its input files", async () => {
    const before = readFileSync(csvOf("quench"));
    const out = path.join(work, "mutcheck.svg");
    expect(await main(["quench", csvOf("quench"), "-o", out])).toBe(0);
    expect(readFileSync(csvOf("quench")).equals(before)).toBe(true);
  });

  it("overlays multiple input files", async () => {
    const out = path.join(work, "overlay.svg");
    const code = await main(["quench", csvOf("quench"), csvOf("quench"), "-o", out]);
    expect(code).toBe(0);
    expect(existsSync(out)).toBe(true);
  });

  it("fails on a schema mismatch, naming both column sets, writing nothing", async () => {
    const err = vi.spyOn(console, "error").mockImplementation(() => {});
    try {
      const out = path.join(work, "mismatch.svg");
      expect(await main(["quench", csvOf("counts_vs_jp"), "-o", out])).toBe(1);
      expect(existsSync(out)).toBe(false);
      const msg = err.mock.calls.map((c) => c.join(" ")).join("\n");
      expect(msg).toContain("schema mismatch");
      expect(msg).toContain("expected columns t,C,P,ipr,dominant_n,c_dominant_sq");
      expect(msg).toContain("found theta,Jp,count,max_im");
    } finally {
      err.mockRestore();
    }
  });

  it("fails on an empty CSV without writing an image", async () => {
    const err = vi.spyOn(console, "error").mockImplementation(() => {});
    try {
      const text = readFileSync(csvOf("counts_vs_jp"), "utf-8");
      const lines = text.split("\n");
      const headerEnd = lines.findIndex((l) => !l.startsWith("#"));
      const empty = path.join(work, "empty.csv");
      writeFileSync(empty, lines.slice(0, headerEnd + 1).join("\n") + "\n");
      const out = path.join(work, "empty.svg");
      expect(await main(["counts_vs_jp", empty, "-o", out])).toBe(1);
      expect(existsSync(out)).toBe(false);
      expect(err.mock.calls.join("\n")).toContain("no data rows");
    } finally {
      err.mockRestore();
    }
  });

  it("fails on files that are not result CSVs", async () => {
    const err = vi.spyOn(console, "error").mockImplementation(() => {});
    try {
      const junk = path.join(work, "junk.csv");
      writeFileSync(junk, "hello\nworld\n");
      expect(await main(["quench", junk, "-o", path.join(work, "junk.svg")])).toBe(1);
      expect(err.mock.calls.join("\n")).toContain("anyonladder <version>");
    } finally {
      err.mockRestore();
    }
  });

  it("reports usage errors with exit 1", async () => {
    const err = vi.spyOn(console, "error").mockImplementation(() => {});
    const log = vi.spyOn(console, "log").mockImplementation(() => {});
    try {
      expect(await main([])).toBe(1);
      expect(await main(["bogus_kind", "x.csv", "-o", "x.svg"])).toBe(1);
      expect(await main(["quench", csvOf("quench")])).toBe(1);
      expect(await main(["quench", csvOf("quench"), "-o", "out.png"])).toBe(1);
      expect(await main(["quench", path.join(work, "absent.csv"), "-o", path.join(work, "a.svg")])).toBe(1);
      expect(await main(["quench", csvOf("quench"), "-o", path.join(work, "w.svg"), "--width", "-3"])).toBe(1);
      const msg = err.mock.calls.map((c) => c.join(" ")).join("\n");
      expect(msg).toContain("unknown kind");
      expect(msg).toContain("missing -o");
      expect(msg).toContain("only .svg output is supported");
      expect(msg).toContain("cannot read input");
    } finally {
      err.mockRestore();
      log.mockRestore();
    }
  });

  it("lists kinds", async () => {
    const log = vi.spyOn(console, "log").mockImplementation(() => {});
    try {
      expect(await main(["kinds"])).toBe(0);
      const lines = log.mock.calls.map((c) => c.join(" "));
      expect(lines).toEqual(KINDS);
    } finally {
      log.mockRestore();
    }
  });
});

describe("built executable", () => {
  const dist = fileURLToPath(new URL("../dist/cli.js", import.meta.url));
  it.skipIf(!existsSync(dist))("runs the compiled CLI end to end", () => {
    const out = path.join(work, "dist.svg");
    const stdout = execFileSync("node", [dist, "counts_vs_jp", csvOf("counts_vs_jp"), "-o", out], {
      encoding: "utf-8",
    });
    expect(stdout.trim()).toBe(out);
    expect(readFileSync(out, "utf-8").startsWith("<svg")).toBe(true);
  });
});
