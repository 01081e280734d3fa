/**
 * Reader for anyonladder result CSVs.
 *
 * Layout produced by the solver CLI:
 *
 *   # anyonladder <version>
 *   # <key> = <value>        (canonical config echo, then meta lines)
 *   col1,col2,...
 *   v1,v2,...
 *
 * Cells are plain decimal/`repr` spellings; `nan`, `inf`, `-inf` and
 * `true`/`false` appear literally.
 */

export interface ResultTable {
  /** Tool version from the first header line. */
  version: string;
  /** Config echo and meta lines, merged into one map. */
  header: Record<string, string>;
  columns: string[];
  /** Raw cells, one string per column per row. */
  rows: string[][];
  /** Where the text came from, for error messages. */
  source: string;
}

/** Malformed CSV text (bad header, ragged rows, unparseable cells). */
export class CsvFormatError extends Error {}

/** Well-formed CSV that does not fit the requested plot kind. */
export class SchemaError extends Error {}

/** Expected column line per plot kind, in order. */
export const SCHEMAS: Record<string, readonly string[]> = {
  counts_vs_jp: ["theta", "Jp", "count", "max_im"],
  maxim_heatmap: ["theta", "Jp", "max_im"],
  threshold_vs_L: ["theta", "L", "Jp_star"],
  spectrum_vs_jp: ["Jp", "index", "re", "im", "polarization", "edge_corr"],
  quench: ["t", "C", "P", "ipr", "dominant_n", "c_dominant_sq"],
  im_dos: ["bin_lo", "bin_hi", "count"],
  symmetry_residuals: ["term", "theta", "residual"],
  commutator_check: ["theta", "residual"],
  perturbation_check: [
    "check",
    "theta",
    "value_re",
    "value_im",
    "reference_re",
    "reference_im",
    "abs_err",
  ],
};

export const KINDS = Object.keys(SCHEMAS);

export function parseResultCsv(text: string, source = "<csv>"): ResultTable {
  const lines = text.split("\n");
  while (lines.length > 0 && lines[lines.length - 1] === "") lines.pop();
  if (lines.length === 0) {
    throw new CsvFormatError(`${source}: empty file`);
  }

  const first = lines[0]!;
  const verMatch = /^# anyonladder (\S+)$/.exec(first);
  if (!verMatch) {
    throw new CsvFormatError(
      `${source}: expected '# anyonladder <version>' on line 1, got ${JSON.stringify(first)}`,
    );
  }
  const version = verMatch[1]!;

  const header: Record<string, string> = {};
  let i = 1;
  for (; i < lines.length; i++) {
    const line = lines[i]!;
    if (!line.startsWith("#")) break;
    const body = line.replace(/^#\s?/, "");
    const eq = body.indexOf(" = ");
    if (eq < 0) {
      throw new CsvFormatError(
        `${source}: line ${i + 1}: expected '# key = value', got ${JSON.stringify(line)}`,
      );
    }
    header[body.slice(0, eq).trim()] = body.slice(eq + 3).trim();
  }

  if (i >= lines.length) {
    throw new CsvFormatError(`${source}: missing column header line`);
  }
  const columns = lines[i]!.split(",").map((c) => c.trim());
  if (columns.some((c) => c === "")) {
    throw new CsvFormatError(`${source}: blank column name in ${JSON.stringify(lines[i])}`);
  }

  const rows: string[][] = [];
  for (let j = i + 1; j < lines.length; j++) {
    const cells = lines[j]!.split(",");
    if (cells.length !== columns.length) {
      throw new CsvFormatError(
        `${source}: line ${j + 1}: ${cells.length} cells, expected ${columns.length}`,
      );
    }
    rows.push(cells);
  }

  return { version, header, columns, rows, source };
}

/**
 * Check a parsed table against a plot kind. Throws SchemaError when the
 * kind is unknown, the column line differs, or there are no data rows.
 */
export function validateTable(kind: string, table: ResultTable): void {
  const expected = SCHEMAS[kind];
  if (!expected) {
    throw new SchemaError(`unknown kind ${JSON.stringify(kind)}; known kinds: ${KINDS.join(", ")}`);
  }
  if (expected.length !== table.columns.length || expected.some((c, i) => c !== table.columns[i])) {
    throw new SchemaError(
      `${table.source}: schema mismatch for kind '${kind}': ` +
        `expected columns ${expected.join(",")}; found ${table.columns.join(",")}`,
    );
  }
  if (table.rows.length === 0) {
    throw new SchemaError(`${table.source}: no data rows`);
  }
}

function parseCell(cell: string, where: string): number {
  const t = cell.trim();
  if (t === "nan") return NaN;
  if (t === "inf") return Infinity;
  if (t === "-inf") return -Infinity;
  if (t === "") throw new CsvFormatError(`${where}: empty numeric cell`);
  const v = Number(t);
  if (Number.isNaN(v)) {
    throw new CsvFormatError(`${where}: cannot parse number ${JSON.stringify(cell)}`);
  }
  return v;
}

/** Numeric column by name. */
export function col(table: ResultTable, name: string): number[] {
  const k = table.columns.indexOf(name);
  if (k < 0) throw new SchemaError(`${table.source}: no column ${JSON.stringify(name)}`);
  return table.rows.map((r, i) => parseCell(r[k]!, `${table.source}: row ${i + 1}, ${name}`));
}

/** String column by name (term/check labels). */
export function strCol(table: ResultTable, name: string): string[] {
  const k = table.columns.indexOf(name);
  if (k < 0) throw new SchemaError(`${table.source}: no column ${JSON.stringify(name)}`);
  return table.rows.map((r) => r[k]!.trim());
}

/** Header meta value parsed as a number, or undefined when absent. */
export function metaNumber(table: ResultTable, key: string): number | undefined {
  const raw = table.header[key];
  if (raw === undefined) return undefined;
  return parseCell(raw, `${table.source}: header ${key}`);
}

/** Display label for a table: explicit config label, else file stem. */
export function tableLabel(table: ResultTable): string {
  const lbl = table.header["label"];
  if (lbl) return lbl;
  const base = table.source.split("/").pop() ?? table.source;
  return base.replace(/\.csv$/, "");
}
