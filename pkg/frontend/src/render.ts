import { join } from "node:path";

import { column, readCsv, type Table } from "./csv.js";
import { readReport, type Report } from "./report.js";
import { linearScale, ticks, PALETTE, SvgCanvas, type Scale } from "./svg.js";

export type Style = "fig1" | "fig2";

const WIDTH = 840;
const HEIGHT = 520;
const MARGIN = { left: 70, right: 24, top: 28, bottom: 52 };

interface Curve {
  label: string;
  times: number[];
  values: number[];
  dashed: boolean;
  color: string;
}

function interpolate(times: number[], values: number[], t: number): number {
  let i = 1;
  while (i < times.length - 1 && times[i]! < t) i += 1;
  const t0 = times[i - 1]!;
  const t1 = times[i]!;
  const v0 = values[i - 1]!;
  const v1 = values[i]!;
  if (t1 === t0) return v0;
  return v0 + ((t - t0) / (t1 - t0)) * (v1 - v0);
}

/** Group race columns (<state>_nonoise solid, <state>_noise dashed). */
function raceCurves(table: Table): Curve[] {
  const t = table.columns[0]!;
  const states: string[] = [];
  for (const name of table.header.slice(1)) {
    const base = name.replace(/_(nonoise|noise)$/, "");
    if (!states.includes(base)) states.push(base);
  }
  return table.header.slice(1).map((name) => {
    const base = name.replace(/_(nonoise|noise)$/, "");
    return {
      label: name,
      times: t,
      values: column(table, name),
      dashed: name.endsWith("_noise"),
      color: PALETTE[states.indexOf(base) % PALETTE.length]!,
    };
  });
}

function axes(
  canvas: SvgCanvas,
  x: Scale,
  y: Scale,
  xLabel: string,
  yLabel: string,
): void {
  const x0 = MARGIN.left;
  const x1 = WIDTH - MARGIN.right;
  const y0 = HEIGHT - MARGIN.bottom;
  const y1 = MARGIN.top;
  canvas.line(x0, y0, x1, y0);
  canvas.line(x0, y0, x0, y1);
  for (const tv of ticks(x.domain)) {
    const px = x(tv);
    canvas.line(px, y0, px, y0 + 5);
    canvas.text(px, y0 + 20, String(tv));
  }
  for (const tv of ticks(y.domain)) {
    const py = y(tv);
    canvas.line(x0 - 5, py, x0, py);
    canvas.text(x0 - 9, py + 4, String(tv), "end", 11);
  }
  canvas.text((x0 + x1) / 2, HEIGHT - 12, xLabel);
  canvas.text(16, (y0 + y1) / 2, yLabel, "middle", 12);
}

function drawCurves(
  canvas: SvgCanvas,
  curves: Curve[],
  x: Scale,
  y: Scale,
  transform: (v: number) => number | null,
): void {
  for (const curve of curves) {
    const pts: Array<[number, number]> = [];
    curve.times.forEach((t, i) => {
      const v = transform(curve.values[i]!);
      if (v !== null) pts.push([x(t), y(v)]);
    });
    canvas.path(pts, curve.color, curve.dashed);
  }
  // legend
  let ly = MARGIN.top + 8;
  for (const curve of curves) {
    const lx = WIDTH - MARGIN.right - 160;
    canvas.path(
      [
        [lx, ly],
        [lx + 26, ly],
      ],
      curve.color,
      curve.dashed,
      "legend",
    );
    canvas.text(lx + 32, ly + 4, curve.label, "start", 11);
    ly += 16;
  }
}

/**
 * Mark every crossing reported for the run.  Markers sit on the first
 * curve of the matching family (noisy families on dashed curves), so the
 * marker count always equals the report's crossing count.
 */
function markCrossings(
  canvas: SvgCanvas,
  report: Report,
  curves: Curve[],
  x: Scale,
  y: Scale,
  transform: (v: number) => number | null,
): void {
  for (const [family, times] of Object.entries(report.crossings)) {
    const wantDashed = family !== "free";
    const host =
      curves.find((c) => c.dashed === wantDashed) ?? curves[0];
    if (!host) continue;
    for (const t of times) {
      const v = transform(interpolate(host.times, host.values, t));
      if (v === null) continue;
      canvas.circle(x(t), y(v), 5, "crossing-marker", "#ffd24d");
    }
  }
}

function finiteExtent(values: number[]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (Number.isFinite(v)) {
      lo = Math.min(lo, v);
      hi = Math.max(hi, v);
    }
  }
  if (!Number.isFinite(lo)) throw new Error("no finite values to plot");
  return [lo, hi];
}

export function renderFigure(style: Style, inputDir: string): string {
  const report = readReport(join(inputDir, "report.json"));
  const canvas = new SvgCanvas(WIDTH, HEIGHT);

  if (style === "fig1") {
    const table = readCsv(join(inputDir, "distances.csv"));
    const curves = raceCurves(table);
    const t = table.columns[0]!;
    const x = linearScale([t[0]!, t[t.length - 1]!], [MARGIN.left, WIDTH - MARGIN.right]);
    const allValues = curves.flatMap((c) => c.values);
    const [, hi] = finiteExtent(allValues);
    const y = linearScale([0, hi * 1.05], [HEIGHT - MARGIN.bottom, MARGIN.top]);
    const identity = (v: number) => v;
    axes(canvas, x, y, "time", "distance to steady state");
    drawCurves(canvas, curves, x, y, identity);
    markCrossings(canvas, report, curves, x, y, identity);
    return canvas.render();
  }

  // fig2: log of the coherence relative entropy; nonpositive samples are
  // below the numeric floor and are skipped
  const table = readCsv(join(inputDir, "coherence.csv"));
  const t = table.columns[0]!;
  const curves: Curve[] = table.header.slice(1).map((name, i) => ({
    label: name,
    times: t,
    values: column(table, name),
    dashed: name !== "nonoise",
    color: PALETTE[i % PALETTE.length]!,
  }));
  const logOrNull = (v: number) => (v > 0 ? Math.log(v) : null);
  const logged = curves.flatMap((c) =>
    c.values.filter((v) => v > 0).map((v) => Math.log(v)),
  );
  const [lo, hi] = finiteExtent(logged);
  const x = linearScale([t[0]!, t[t.length - 1]!], [MARGIN.left, WIDTH - MARGIN.right]);
  const y = linearScale([lo, hi + 0.5], [HEIGHT - MARGIN.bottom, MARGIN.top]);
  axes(canvas, x, y, "time", "ln C(rho(t))");
  drawCurves(canvas, curves, x, y, logOrNull);
  markCrossings(canvas, report, curves, x, y, logOrNull);
  return canvas.render();
}

export function countMarkers(svg: string): number {
  return (svg.match(/class="crossing-marker"/g) ?? []).length;
}
