import { readFileSync } from "node:fs";

export interface Report {
  /** crossing times keyed by family (e.g. free / rtn) */
  crossings: Record<string, number[]>;
  pair?: string[];
  case?: string;
}

export function readReport(path: string): Report {
  let raw: unknown;
  try {
    raw = JSON.parse(readFileSync(path, "utf-8"));
  } catch (err) {
    throw new Error(`cannot parse ${path}: ${(err as Error).message}`);
  }
  if (typeof raw !== "object" || raw === null) {
    throw new Error(`${path}: report must be a JSON object`);
  }
  const obj = raw as Record<string, unknown>;
  const crossings: Record<string, number[]> = {};
  if (obj.crossings !== undefined) {
    if (typeof obj.crossings !== "object" || obj.crossings === null) {
      throw new Error(`${path}: "crossings" must map families to time lists`);
    }
    for (const [key, value] of Object.entries(obj.crossings)) {
      if (!Array.isArray(value) || value.some((v) => typeof v !== "number")) {
        throw new Error(`${path}: crossings.${key} must be a list of numbers`);
      }
      crossings[key] = value as number[];
    }
  }
  return {
    crossings,
    pair: Array.isArray(obj.pair) ? (obj.pair as string[]) : undefined,
    case: typeof obj.case === "string" ? obj.case : undefined,
  };
}

export function totalCrossings(report: Report): number {
  return Object.values(report.crossings).reduce((n, list) => n + list.length, 0);
}
