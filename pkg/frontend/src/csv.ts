/** Typed readers for the experiment harness CSVs. */

import { readFileSync, readdirSync, statSync } from "node:fs";
import { join } from "node:path";
import Papa from "papaparse";

export const SUMMARY_COLUMNS = [
  "mode",
  "policy",
  "m",
  "replications",
  "horizon",
  "experts",
  "realized_regret_mean",
  "realized_regret_std",
  "pseudo_regret_mean",
  "pseudo_regret_std",
  "baseline",
] as const;

export const LEMMA_COLUMNS = [
  "policy",
  "committee_size",
  "p_committee",
  "horizon",
  "phi",
  "bound",
  "empirical_pseudo_regret",
] as const;

export interface SummaryRow {
  mode: string;
  policy: string;
  m: number;
  replications: number;
  horizon: number;
  experts: number;
  realizedRegretMean: number;
  realizedRegretStd: number;
  pseudoRegretMean: number;
  pseudoRegretStd: number;
  baseline: number;
}

export interface LemmaRow {
  policy: string;
  committeeSize: number;
  pCommittee: number;
  horizon: number;
  phi: number;
  bound: number;
  empiricalPseudoRegret: number;
}

export class CsvError extends Error {}

function parseTable(
  path: string,
  required: readonly string[],
): Record<string, string>[] {
  const text = readFileSync(path, "utf8");
  const parsed = Papa.parse<Record<string, string>>(text.trim(), {
    header: true,
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    throw new CsvError(`${path}: ${parsed.errors[0].message}`);
  }
  const fields = parsed.meta.fields ?? [];
  for (const col of required) {
    if (!fields.includes(col)) {
      throw new CsvError(`${path}: missing column '${col}'`);
    }
  }
  if (parsed.data.length === 0) {
    throw new CsvError(`${path}: no data rows`);
  }
  return parsed.data;
}

function num(raw: Record<string, string>, key: string, path: string): number {
  const v = Number(raw[key]);
  if (!Number.isFinite(v)) {
    throw new CsvError(`${path}: column '${key}' has non-numeric value '${raw[key]}'`);
  }
  return v;
}

export function readSummary(path: string): SummaryRow[] {
  return parseTable(path, SUMMARY_COLUMNS).map((r) => ({
    mode: r.mode,
    policy: r.policy,
    m: num(r, "m", path),
    replications: num(r, "replications", path),
    horizon: num(r, "horizon", path),
    experts: num(r, "experts", path),
    realizedRegretMean: num(r, "realized_regret_mean", path),
    realizedRegretStd: num(r, "realized_regret_std", path),
    pseudoRegretMean: num(r, "pseudo_regret_mean", path),
    pseudoRegretStd: num(r, "pseudo_regret_std", path),
    baseline: num(r, "baseline", path),
  }));
}

export function readLemma(path: string): LemmaRow[] {
  return parseTable(path, LEMMA_COLUMNS).map((r) => ({
    policy: r.policy,
    committeeSize: num(r, "committee_size", path),
    pCommittee: num(r, "p_committee", path),
    horizon: num(r, "horizon", path),
    phi: num(r, "phi", path),
    bound: num(r, "bound", path),
    empiricalPseudoRegret: num(r, "empirical_pseudo_regret", path),
  }));
}

/** summary.csv in the directory itself plus one level of subdirectories,
 * so supervised/blind run pairs can live side by side. */
export function findSummaries(dir: string): string[] {
  const found: string[] = [];
  const direct = join(dir, "summary.csv");
  if (exists(direct)) found.push(direct);
  for (const entry of readdirSync(dir).sort()) {
    const nested = join(dir, entry, "summary.csv");
    if (exists(nested)) found.push(nested);
  }
  if (found.length === 0) {
    throw new CsvError(`no summary.csv found under ${dir}`);
  }
  return found;
}

function exists(path: string): boolean {
  try {
    return statSync(path).isFile();
  } catch {
    return false;
  }
}
