import { Table, requireColumns, cells, num } from "../csv.js";
import { checksumTable } from "../checksum.js";
import {
  WIDTH,
  HEIGHT,
  MARGIN,
  el,
  text,
  fmt,
  linearScale,
  leftAxis,
  bottomAxis,
  document,
} from "../svg.js";

const COLUMNS = ["source", "band_count", "seats", "count"];

const SOURCE_COLORS: Record<string, string> = {
  neutral: "#6b7280",
  opt1: "#d95f02",
  opt2: "#1b9e77",
};
const FALLBACK_COLORS = ["#7570b3", "#e7298a", "#66a61e"];

/** Band count vs seats scatter, one series per ensemble source. Series are
 * displaced horizontally by 0.15 band-count units per source so overlapping
 * points stay visible; dot area tracks the plan count. */
export function renderScatter(table: Table, title = "band count vs seats"): string {
  requireColumns(table, COLUMNS, "scatter");
  const checksum = checksumTable("scatter", cells(table, COLUMNS));

  const left = MARGIN.left;
  const right = WIDTH - MARGIN.right;
  const top = MARGIN.top;
  const bottom = HEIGHT - MARGIN.bottom;

  const sources: string[] = [];
  for (const row of table.rows) if (!sources.includes(row["source"])) sources.push(row["source"]);

  const bandCounts = table.rows.map((r) => num(r, "band_count"));
  const seats = table.rows.map((r) => num(r, "seats"));
  const countMax = Math.max(1, ...table.rows.map((r) => num(r, "count")));
  const pad = 0.5 + 0.15 * Math.max(1, sources.length);
  const xScale = linearScale(
    [Math.min(0, ...bandCounts) - pad, Math.max(1, ...bandCounts) + pad],
    [left, right],
  );
  const yScale = linearScale(
    [Math.min(0, ...seats) - 0.5, Math.max(1, ...seats) + 0.5],
    [bottom, top],
  );

  const xTicks: number[] = [];
  for (let v = Math.ceil(xScale.domain[0]); v <= xScale.domain[1]; v++) xTicks.push(v);
  const yTicks: number[] = [];
  for (let v = Math.ceil(yScale.domain[0]); v <= yScale.domain[1]; v++) yTicks.push(v);

  const body: string[] = [];
  body.push(...leftAxis(yScale, left, yTicks));
  body.push(...bottomAxis(xScale, bottom, xTicks));

  sources.forEach((source, si) => {
    const color =
      SOURCE_COLORS[source] ?? FALLBACK_COLORS[si % FALLBACK_COLORS.length];
    const dx = (si - (sources.length - 1) / 2) * 0.15;
    for (const row of table.rows) {
      if (row["source"] !== source) continue;
      const count = num(row, "count");
      const r = 2 + 10 * Math.sqrt(count / countMax);
      body.push(
        el("circle", {
          cx: xScale(num(row, "band_count") + dx),
          cy: yScale(num(row, "seats")),
          r,
          fill: color,
          "fill-opacity": 0.7,
          stroke: color,
        }),
      );
    }
    const ly = top + 10 + si * 18;
    body.push(el("circle", { cx: right - 140, cy: ly - 3, r: 5, fill: color }));
    body.push(text(right - 130, ly, source));
  });

  body.push(
    text((left + right) / 2, HEIGHT - 14, "districts in band", { "text-anchor": "middle" }),
  );
  body.push(
    text(16, (top + bottom) / 2, "Democratic seats", {
      "text-anchor": "middle",
      transform: `rotate(-90 16 ${fmt((top + bottom) / 2)})`,
    }),
  );
  return document(checksum, title, body);
}
