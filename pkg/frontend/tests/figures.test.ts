import { mkdtempSync, mkdirSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { beforeEach, describe, expect, it } from "vitest";

import { CsvError, readLemma, readSummary } from "../src/csv.js";
import { renderKind } from "../src/figures.js";
import { renderChart } from "../src/svg.js";

const SUMMARY_HEADER =
  "mode,policy,m,replications,horizon,experts,realized_regret_mean," +
  "realized_regret_std,pseudo_regret_mean,pseudo_regret_std,baseline";
const LEMMA_HEADER =
  "policy,committee_size,p_committee,horizon,phi,bound,empirical_pseudo_regret";

function summaryCsv(rows: string[]): string {
  return [SUMMARY_HEADER, ...rows].join("\n") + "\n";
}

function summaryRow(
  mode: string,
  policy: string,
  m: number,
  reps = 5,
  mean = 0.01,
  std = 0.002,
): string {
  return [
    mode,
    policy,
    m,
    reps,
    100000,
    100,
    mean,
    std,
    mean * 1.5,
    std * 1.5,
    0.75,
  ].join(",");
}

let dir: string;
beforeEach(() => {
  dir = mkdtempSync(join(tmpdir(), "plots-"));
});

describe("csv readers", () => {
  it("parses the summary schema", () => {
    const path = join(dir, "summary.csv");
    writeFileSync(path, summaryCsv([summaryRow("bee", "ucb1", 8)]));
    const rows = readSummary(path);
    expect(rows).toHaveLength(1);
    expect(rows[0]).toMatchObject({
      mode: "bee",
      policy: "ucb1",
      m: 8,
      replications: 5,
      realizedRegretMean: 0.01,
    });
  });

  it("rejects a missing column", () => {
    const path = join(dir, "summary.csv");
    writeFileSync(path, "mode,policy\nbee,ucb1\n");
    expect(() => readSummary(path)).toThrow(CsvError);
    expect(() => readSummary(path)).toThrow(/missing column/);
  });

  it("rejects zero-row input", () => {
    const path = join(dir, "summary.csv");
    writeFileSync(path, SUMMARY_HEADER + "\n");
    expect(() => readSummary(path)).toThrow(/no data rows/);
  });

  it("rejects non-numeric cells", () => {
    const path = join(dir, "summary.csv");
    writeFileSync(
      path,
      summaryCsv(["bee,ucb1,eight,5,100000,100,0.1,0.1,0.1,0.1,0.75"]),
    );
    expect(() => readSummary(path)).toThrow(/non-numeric/);
  });

  it("parses the lemma schema", () => {
    const path = join(dir, "lemma.csv");
    writeFileSync(
      path,
      [LEMMA_HEADER, "ucb1,5,0.836,10000,0.003,0.044,0.012"].join("\n") + "\n",
    );
    const rows = readLemma(path);
    expect(rows[0].bound).toBeCloseTo(0.044);
    expect(rows[0].empiricalPseudoRegret).toBeCloseTo(0.012);
  });
});

describe("overview figures", () => {
  it("draws one curve per policy", () => {
    const rows = ["ucb1", "klucb", "imed", "moss", "thompson"].flatMap((p) =>
      [2, 4, 8, 12].map((m) => summaryRow("bee", p, m)),
    );
    writeFileSync(join(dir, "summary.csv"), summaryCsv(rows));
    const [fig] = renderKind("overview-bee", dir);
    expect((fig.svg.match(/<polyline /g) ?? []).length).toBe(5);
    expect(fig.svg).toContain("committee size m");
    expect(fig.svg).toContain("%");
  });

  it("draws error bars when replications > 1 and none otherwise", () => {
    writeFileSync(
      join(dir, "summary.csv"),
      summaryCsv([summaryRow("swarm", "imed", 4, 10), summaryRow("swarm", "imed", 8, 10)]),
    );
    const [withBars] = renderKind("overview-swarm", dir);
    expect(withBars.svg).toContain('class="errorbar"');

    writeFileSync(
      join(dir, "summary.csv"),
      summaryCsv([summaryRow("swarm", "imed", 4, 1), summaryRow("swarm", "imed", 8, 1)]),
    );
    const [noBars] = renderKind("overview-swarm", dir);
    expect(noBars.svg).not.toContain('class="errorbar"');
  });

  it("rejects an input with no matching mode", () => {
    writeFileSync(join(dir, "summary.csv"), summaryCsv([summaryRow("swarm", "ucb1", 4)]));
    expect(() => renderKind("overview-bee", dir)).toThrow(/mode 'bee'/);
  });

  it("is byte-deterministic", () => {
    writeFileSync(
      join(dir, "summary.csv"),
      summaryCsv([summaryRow("bee", "ucb1", 4), summaryRow("bee", "ucb1", 8)]),
    );
    const a = renderKind("overview-bee", dir)[0].svg;
    const b = renderKind("overview-bee", dir)[0].svg;
    expect(a).toBe(b);
  });
});

describe("per-policy figures", () => {
  it("pairs blind and supervised curves per policy", () => {
    mkdirSync(join(dir, "blind"));
    mkdirSync(join(dir, "supervised"));
    const ms = [4, 8, 12];
    writeFileSync(
      join(dir, "blind", "summary.csv"),
      summaryCsv(
        ["ucb1", "imed"].flatMap((p) => ms.map((m) => summaryRow("bee", p, m, 5, 0.02))),
      ),
    );
    writeFileSync(
      join(dir, "supervised", "summary.csv"),
      summaryCsv(
        ["ucb1", "imed"].flatMap((p) =>
          ms.map((m) => summaryRow("bee-oracle", p, m, 5, 0.01)),
        ),
      ),
    );
    const figures = renderKind("per-policy", dir);
    expect(figures.map((f) => f.suffix)).toEqual(["-imed", "-ucb1"]);
    for (const fig of figures) {
      expect(fig.svg).toContain("blind");
      expect(fig.svg).toContain("supervised");
      expect((fig.svg.match(/<polyline /g) ?? []).length).toBe(2);
    }
  });

  it("requires both reward variants", () => {
    writeFileSync(join(dir, "summary.csv"), summaryCsv([summaryRow("bee", "ucb1", 4)]));
    expect(() => renderKind("per-policy", dir)).toThrow(/bee-oracle/);
  });
});

describe("lemma figure", () => {
  it("draws bound and empirical curves", () => {
    writeFileSync(
      join(dir, "lemma.csv"),
      [
        LEMMA_HEADER,
        "ucb1,5,0.836,10000,0.003,0.0446,0.012",
        "klucb,5,0.836,10000,0.003,0.0022,0.0011",
        "imed,5,0.836,10000,0.003,0.0022,0.0009",
      ].join("\n") + "\n",
    );
    const [fig] = renderKind("lemma", dir);
    expect((fig.svg.match(/<polyline /g) ?? []).length).toBe(2);
    expect(fig.svg).toContain("bound");
    expect(fig.svg).toContain("empirical");
  });
});

describe("chart primitives", () => {
  it("rejects empty input", () => {
    expect(() =>
      renderChart([], { title: "t", xLabel: "x", yLabel: "y" }),
    ).toThrow(/nothing to plot/);
  });

  it("handles a single point without degenerate scales", () => {
    const svg = renderChart(
      [{ label: "s", points: [{ x: 8, y: 0.01, err: 0.002 }] }],
      { title: "t", xLabel: "x", yLabel: "y", percent: true },
    );
    expect(svg).toContain("<svg");
    expect(svg).not.toContain("NaN");
    expect(svg).toContain('class="errorbar"');
  });
});
