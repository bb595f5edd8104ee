/** Figure assembly: harness CSV rows -> chart series -> SVG string. */

import {
  CsvError,
  LemmaRow,
  SummaryRow,
  findSummaries,
  readLemma,
  readSummary,
} from "./csv.js";
import { Series, renderChart } from "./svg.js";
import { join } from "node:path";

export const KINDS = ["overview-bee", "overview-swarm", "per-policy", "lemma"] as const;
export type Kind = (typeof KINDS)[number];

function loadAllSummaries(dir: string): SummaryRow[] {
  return findSummaries(dir).flatMap(readSummary);
}

function byPolicy(rows: SummaryRow[]): Map<string, SummaryRow[]> {
  const groups = new Map<string, SummaryRow[]>();
  for (const row of rows) {
    const list = groups.get(row.policy) ?? [];
    list.push(row);
    groups.set(row.policy, list);
  }
  for (const list of groups.values()) list.sort((a, b) => a.m - b.m);
  return groups;
}

function overview(
  rows: SummaryRow[],
  mode: string,
  metric: "realized" | "pseudo",
  title: string,
): string {
  const filtered = rows.filter((r) => r.mode === mode);
  if (filtered.length === 0) {
    throw new CsvError(`no rows with mode '${mode}' after filtering`);
  }
  const series: Series[] = [...byPolicy(filtered).entries()].map(
    ([policy, group]) => ({
      label: policy,
      points: group.map((r) => ({
        x: r.m,
        y: metric === "realized" ? r.realizedRegretMean : r.pseudoRegretMean,
        err:
          r.replications > 1
            ? metric === "realized"
              ? r.realizedRegretStd
              : r.pseudoRegretStd
            : undefined,
      })),
    }),
  );
  return renderChart(series, {
    title,
    xLabel: "committee size m",
    yLabel:
      metric === "realized"
        ? "normalized realized regret"
        : "normalized pseudo regret",
    percent: true,
  });
}

/** One panel per policy: blind (agreement-reward) vs supervised
 * (oracle-reward) curves, matched on mode base name (`bee` vs `bee-oracle`). */
function perPolicy(rows: SummaryRow[]): string[] {
  const bases = new Set(rows.map((r) => r.mode.replace(/-oracle$/, "")));
  if (bases.size !== 1) {
    throw new CsvError(
      `per-policy figure needs a single base mode, found: ${[...bases].sort().join(", ") || "none"}`,
    );
  }
  const base = [...bases][0];
  const metric: "realized" | "pseudo" = base === "swarm" ? "pseudo" : "realized";
  const pick = (r: SummaryRow) =>
    metric === "realized" ? r.realizedRegretMean : r.pseudoRegretMean;
  const pickStd = (r: SummaryRow) =>
    metric === "realized" ? r.realizedRegretStd : r.pseudoRegretStd;

  const policies = [...new Set(rows.map((r) => r.policy))].sort();
  return policies.map((policy) => {
    const mine = rows.filter((r) => r.policy === policy);
    const blind = mine.filter((r) => r.mode === base).sort((a, b) => a.m - b.m);
    const supervised = mine
      .filter((r) => r.mode === `${base}-oracle`)
      .sort((a, b) => a.m - b.m);
    if (blind.length === 0 || supervised.length === 0) {
      throw new CsvError(
        `policy '${policy}': need both '${base}' and '${base}-oracle' rows`,
      );
    }
    const toSeries = (group: SummaryRow[], label: string, dashed: boolean): Series => ({
      label,
      dashed,
      points: group.map((r) => ({
        x: r.m,
        y: pick(r),
        err: r.replications > 1 ? pickStd(r) : undefined,
      })),
    });
    return renderChart(
      [toSeries(blind, "blind", false), toSeries(supervised, "supervised", true)],
      {
        title: `${policy}: blind vs supervised rewards`,
        xLabel: "committee size m",
        yLabel: `normalized ${metric} regret`,
        percent: true,
      },
    );
  });
}

function lemmaFigure(rows: LemmaRow[]): string {
  const series: Series[] = [
    {
      label: "bound",
      dashed: true,
      points: rows.map((r, i) => ({ x: i, y: r.bound })),
    },
    {
      label: "empirical",
      points: rows.map((r, i) => ({ x: i, y: r.empiricalPseudoRegret })),
    },
  ];
  const labels = rows.map((r) => r.policy).join(", ");
  return renderChart(series, {
    title: `Fixed-committee pseudo regret vs bound (${labels})`,
    xLabel: "policy index",
    yLabel: "pseudo regret",
    percent: true,
  });
}

export interface RenderedFigure {
  /** suffix appended before the extension when a kind emits several files */
  suffix: string;
  svg: string;
}

export function renderKind(kind: Kind, inDir: string): RenderedFigure[] {
  switch (kind) {
    case "overview-bee":
      return [
        {
          suffix: "",
          svg: overview(
            loadAllSummaries(inDir),
            "bee",
            "realized",
            "Leader-commit (BEE): realized regret vs committee size",
          ),
        },
      ];
    case "overview-swarm":
      return [
        {
          suffix: "",
          svg: overview(
            loadAllSummaries(inDir),
            "swarm",
            "pseudo",
            "Aggregate-commit (SWARM): pseudo regret vs committee size",
          ),
        },
      ];
    case "per-policy": {
      const rows = loadAllSummaries(inDir);
      const figures = perPolicy(rows);
      const policies = [...new Set(rows.map((r) => r.policy))].sort();
      return figures.map((svg, i) => ({
        suffix: policies.length > 1 ? `-${policies[i]}` : "",
        svg,
      }));
    }
    case "lemma":
      return [{ suffix: "", svg: lemmaFigure(readLemma(join(inDir, "lemma.csv"))) }];
    default: {
      const never: never = kind;
      throw new CsvError(`unknown figure kind '${never}'`);
    }
  }
}
