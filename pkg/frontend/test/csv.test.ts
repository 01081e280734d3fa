import { describe, expect, it } from "vitest";

import {
  CsvFormatError,
  SchemaError,
  col,
  metaNumber,
  parseResultCsv,
  strCol,
  tableLabel,
  validateTable,
} from "../src/csv.js";

const COUNTS = `# anyonladder 0.1.0
# grid.jp = 0.01,0.05,0.1
# grid.theta = 0.0,1.2566370614359172
# kind = counts_vs_jp
# model.L = 2
# model.N = 2
theta,Jp,count,max_im
0.0,0.01,0,0.0
0.0,0.05,0,1.5e-16
0.0,0.1,0,0.0
1.2566370614359172,0.01,0,8.968534376477754e-06
1.2566370614359172,0.05,2,0.0002
1.2566370614359172,0.1,2,0.0008977827322534369
`;

describe("parseResultCsv", () => {
  it("reads version, header map, columns, and rows", () => {
    const t = parseResultCsv(COUNTS, "counts.csv");
    expect(t.version).toBe("0.1.0");
    expect(t.header["kind"]).toBe("counts_vs_jp");
    expect(t.header["model.L"]).toBe("2");
    expect(t.columns).toEqual(["theta", "Jp", "count", "max_im"]);
    expect(t.rows).toHaveLength(6);
    expect(t.source).toBe("counts.csv");
  });

  it("keeps meta lines after the config echo", () => {
    const text = `# anyonladder 0.1.0
# kind = quench
# quench.crossover = nan
# quench.near_degenerate = false
t,C,P,ipr,dominant_n,c_dominant_sq
0.0,0.4,1.0,0.3,4,0.99
`;
    const t = parseResultCsv(text);
    expect(t.header["quench.near_degenerate"]).toBe("false");
    expect(metaNumber(t, "quench.crossover")).toBeNaN();
    expect(metaNumber(t, "quench.absent")).toBeUndefined();
  });

  it("rejects a missing version line", () => {
    expect(() => parseResultCsv("theta,Jp\n0,0\n")).toThrow(CsvFormatError);
    expect(() => parseResultCsv("theta,Jp\n0,0\n")).toThrow(/anyonladder <version>/);
  });

  it("rejects malformed header lines", () => {
    const bad = "# anyonladder 0.1.0\n# no equals sign here\ntheta\n0\n";
    expect(() => parseResultCsv(bad)).toThrow(/key = value/);
  });

  it("rejects ragged rows with the line number", () => {
    const bad = "# anyonladder 0.1.0\na,b\n1,2\n3\n";
    expect(() => parseResultCsv(bad, "x.csv")).toThrow(/x\.csv: line 4: 1 cells, expected 2/);
  });

  it("rejects empty input and header-only input", () => {
    expect(() => parseResultCsv("")).toThrow(/empty file/);
    expect(() => parseResultCsv("# anyonladder 0.1.0\n")).toThrow(/missing column header/);
  });
});

describe("columns", () => {
  it("parses numbers including nan and inf spellings", () => {
    const t = parseResultCsv(
      "# anyonladder 0.1.0\nv\nnan\ninf\n-inf\n2.5\n",
      "v.csv",
    );
    const vals = col(t, "v");
    expect(vals[0]).toBeNaN();
    expect(vals[1]).toBe(Infinity);
    expect(vals[2]).toBe(-Infinity);
    expect(vals[3]).toBe(2.5);
  });

  it("rejects non-numeric cells naming the row and column", () => {
    const t = parseResultCsv("# anyonladder 0.1.0\nv\nbogus\n", "v.csv");
    expect(() => col(t, "v")).toThrow(/v\.csv: row 1, v: cannot parse number/);
  });

  it("reads string columns verbatim", () => {
    const t = parseResultCsv(
      "# anyonladder 0.1.0\nterm,residual\nintra_A,0.0\nspectrum_conjugation,1e-12\n",
    );
    expect(strCol(t, "term")).toEqual(["intra_A", "spectrum_conjugation"]);
  });

  it("errors on unknown column names", () => {
    const t = parseResultCsv(COUNTS);
    expect(() => col(t, "missing")).toThrow(SchemaError);
  });
});

describe("validateTable", () => {
  it("accepts a matching kind", () => {
    expect(() => validateTable("counts_vs_jp", parseResultCsv(COUNTS))).not.toThrow();
  });

  it("rejects a mismatched kind listing expected vs found columns", () => {
    const t = parseResultCsv(COUNTS, "counts.csv");
    expect(() => validateTable("quench", t)).toThrow(SchemaError);
    expect(() => validateTable("quench", t)).toThrow(
      /expected columns t,C,P,ipr,dominant_n,c_dominant_sq; found theta,Jp,count,max_im/,
    );
  });

  it("rejects unknown kinds listing the known ones", () => {
    expect(() => validateTable("nope", parseResultCsv(COUNTS))).toThrow(/known kinds: .*quench/);
  });

  it("rejects tables without data rows", () => {
    const headerOnly = COUNTS.split("\n").slice(0, 7).join("\n") + "\n";
    const t = parseResultCsv(headerOnly, "empty.csv");
    expect(() => validateTable("counts_vs_jp", t)).toThrow(/empty\.csv: no data rows/);
  });
});

describe("tableLabel", () => {
  it("prefers the config label and falls back to the file stem", () => {
    const withLabel = parseResultCsv(
      "# anyonladder 0.1.0\n# label = probe\ntheta\n0\n",
      "/tmp/x/whatever.csv",
    );
    expect(tableLabel(withLabel)).toBe("probe");
    const bare = parseResultCsv("# anyonladder 0.1.0\ntheta\n0\n", "/tmp/x/run7.csv");
    expect(tableLabel(bare)).toBe("run7");
  });
});
