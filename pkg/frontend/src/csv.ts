import { readFileSync } from "node:fs";

export interface Table {
  header: string[];
  /** column-major numeric data, one array per header entry */
  columns: number[][];
}

/**
 * Parse one of the simulator's CSV files: a header row followed by numeric
 * rows, optionally preceded by `#` comment lines. Throws on empty input,
 * non-numeric cells, or ragged rows, so schema drift fails loudly.
 */
export function readCsv(path: string): Table {
  let text: string;
  try {
    text = readFileSync(path, "utf-8");
  } catch (err) {
    throw new Error(`cannot read ${path}: ${(err as Error).message}`);
  }
  const lines = text
    .split("\n")
    .map((l) => l.trim())
    .filter((l) => l.length > 0 && !l.startsWith("#"));
  if (lines.length < 2) {
    throw new Error(`${path}: expected a header row and at least one data row`);
  }
  const header = lines[0]!.split(",").map((h) => h.trim());
  if (header.length < 2) {
    throw new Error(`${path}: header must name a time column and data columns`);
  }
  const columns: number[][] = header.map(() => []);
  for (const [i, line] of lines.slice(1).entries()) {
    const cells = line.split(",");
    if (cells.length !== header.length) {
      throw new Error(
        `${path}: row ${i + 1} has ${cells.length} cells, header has ${header.length}`,
      );
    }
    cells.forEach((cell, j) => {
      const value = Number(cell);
      if (!Number.isFinite(value)) {
        throw new Error(`${path}: row ${i + 1}, column ${header[j]}: not a number`);
      }
      columns[j]!.push(value);
    });
  }
  return { header, columns };
}

export function column(table: Table, name: string): number[] {
  const idx = table.header.indexOf(name);
  if (idx < 0) {
    throw new Error(`missing column ${name}; have ${table.header.join(", ")}`);
  }
  return table.columns[idx]!;
}
