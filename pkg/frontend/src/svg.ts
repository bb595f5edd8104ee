/** Minimal deterministic SVG line charts: axes, ticks, legend, error bars.
 * Pure string assembly — identical inputs yield identical bytes. */

export interface Point {
  x: number;
  y: number;
  /** half-height of the error bar in data units; omit to draw none */
  err?: number;
}

export interface Series {
  label: string;
  points: Point[];
  dashed?: boolean;
}

export interface ChartOptions {
  title: string;
  xLabel: string;
  yLabel: string;
  width?: number;
  height?: number;
  /** render y values multiplied by 100 with a % suffix on ticks */
  percent?: boolean;
}

const PALETTE = [
  "#1f77b4",
  "#d62728",
  "#2ca02c",
  "#9467bd",
  "#ff7f0e",
  "#8c564b",
  "#17becf",
];

const MARGIN = { top: 42, right: 24, bottom: 48, left: 64 };

function fmt(v: number): string {
  const s = v.toPrecision(6);
  return String(Number(s));
}

function ticks(lo: number, hi: number, count: number): number[] {
  if (!(hi > lo)) return [lo];
  const span = hi - lo;
  const step = Math.pow(10, Math.floor(Math.log10(span / count)));
  const candidates = [step, 2 * step, 5 * step, 10 * step];
  const chosen = candidates.find((c) => span / c <= count) ?? 10 * step;
  const out: number[] = [];
  for (let v = Math.ceil(lo / chosen) * chosen; v <= hi + 1e-12 * span; v += chosen) {
    out.push(Math.abs(v) < 1e-12 * span ? 0 : v);
  }
  return out;
}

export function renderChart(series: Series[], opts: ChartOptions): string {
  if (series.length === 0 || series.every((s) => s.points.length === 0)) {
    throw new Error("nothing to plot: no series or all series empty");
  }
  const width = opts.width ?? 720;
  const height = opts.height ?? 460;
  const plotW = width - MARGIN.left - MARGIN.right;
  const plotH = height - MARGIN.top - MARGIN.bottom;
  const scaleY = opts.percent ? 100 : 1;

  const xs = series.flatMap((s) => s.points.map((p) => p.x));
  const ys = series.flatMap((s) =>
    s.points.flatMap((p) => {
      const e = (p.err ?? 0) * scaleY;
      const y = p.y * scaleY;
      return [y - e, y + e];
    }),
  );
  let xLo = Math.min(...xs);
  let xHi = Math.max(...xs);
  let yLo = Math.min(0, ...ys);
  let yHi = Math.max(...ys);
  if (xHi === xLo) {
    xLo -= 1;
    xHi += 1;
  }
  if (yHi === yLo) yHi = yLo + 1;
  const yPad = 0.06 * (yHi - yLo);
  yHi += yPad;

  const px = (x: number) => MARGIN.left + ((x - xLo) / (xHi - xLo)) * plotW;
  const py = (y: number) => MARGIN.top + (1 - (y - yLo) / (yHi - yLo)) * plotH;

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
      `viewBox="0 0 ${width} ${height}" font-family="Helvetica, Arial, sans-serif">`,
  );
  parts.push(`<rect width="${width}" height="${height}" fill="white"/>`);
  parts.push(
    `<text x="${width / 2}" y="22" text-anchor="middle" font-size="15">` +
      `${escapeXml(opts.title)}</text>`,
  );

  // axes
  const x0 = MARGIN.left;
  const y0 = MARGIN.top + plotH;
  parts.push(
    `<line x1="${x0}" y1="${y0}" x2="${x0 + plotW}" y2="${y0}" stroke="#333"/>`,
    `<line x1="${x0}" y1="${MARGIN.top}" x2="${x0}" y2="${y0}" stroke="#333"/>`,
  );
  for (const t of ticks(xLo, xHi, 8)) {
    const x = px(t);
    parts.push(
      `<line x1="${fmt(x)}" y1="${y0}" x2="${fmt(x)}" y2="${y0 + 5}" stroke="#333"/>`,
      `<text x="${fmt(x)}" y="${y0 + 18}" text-anchor="middle" font-size="11">${fmt(t)}</text>`,
    );
  }
  for (const t of ticks(yLo, yHi, 6)) {
    const y = py(t);
    parts.push(
      `<line x1="${x0 - 5}" y1="${fmt(y)}" x2="${x0}" y2="${fmt(y)}" stroke="#333"/>`,
      `<line x1="${x0}" y1="${fmt(y)}" x2="${x0 + plotW}" y2="${fmt(y)}" stroke="#eee"/>`,
      `<text x="${x0 - 8}" y="${fmt(y + 4)}" text-anchor="end" font-size="11">` +
        `${fmt(t)}${opts.percent ? "%" : ""}</text>`,
    );
  }
  parts.push(
    `<text x="${MARGIN.left + plotW / 2}" y="${height - 10}" text-anchor="middle" ` +
      `font-size="12">${escapeXml(opts.xLabel)}</text>`,
    `<text x="16" y="${MARGIN.top + plotH / 2}" text-anchor="middle" font-size="12" ` +
      `transform="rotate(-90 16 ${MARGIN.top + plotH / 2})">${escapeXml(opts.yLabel)}</text>`,
  );

  series.forEach((s, i) => {
    const color = PALETTE[i % PALETTE.length];
    const dash = s.dashed ? ` stroke-dasharray="6 4"` : "";
    const coords = s.points
      .map((p) => `${fmt(px(p.x))},${fmt(py(p.y * scaleY))}`)
      .join(" ");
    for (const p of s.points) {
      if (p.err !== undefined && p.err > 0) {
        const x = px(p.x);
        const top = py((p.y + p.err) * scaleY);
        const bot = py((p.y - p.err) * scaleY);
        parts.push(
          `<line class="errorbar" x1="${fmt(x)}" y1="${fmt(top)}" x2="${fmt(x)}" ` +
            `y2="${fmt(bot)}" stroke="${color}" stroke-width="1"/>`,
          `<line x1="${fmt(x - 3)}" y1="${fmt(top)}" x2="${fmt(x + 3)}" y2="${fmt(top)}" stroke="${color}"/>`,
          `<line x1="${fmt(x - 3)}" y1="${fmt(bot)}" x2="${fmt(x + 3)}" y2="${fmt(bot)}" stroke="${color}"/>`,
        );
      }
    }
    parts.push(
      `<polyline points="${coords}" fill="none" stroke="${color}" stroke-width="1.8"${dash}/>`,
    );
    for (const p of s.points) {
      parts.push(
        `<circle cx="${fmt(px(p.x))}" cy="${fmt(py(p.y * scaleY))}" r="3" fill="${color}"/>`,
      );
    }
  });

  // legend
  series.forEach((s, i) => {
    const color = PALETTE[i % PALETTE.length];
    const lx = MARGIN.left + plotW - 150;
    const ly = MARGIN.top + 14 + i * 18;
    const dash = s.dashed ? ` stroke-dasharray="6 4"` : "";
    parts.push(
      `<line x1="${lx}" y1="${ly - 4}" x2="${lx + 24}" y2="${ly - 4}" ` +
        `stroke="${color}" stroke-width="1.8"${dash}/>`,
      `<text x="${lx + 30}" y="${ly}" font-size="12">${escapeXml(s.label)}</text>`,
    );
  });

  parts.push("</svg>");
  return parts.join("\n") + "\n";
}

function escapeXml(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}
