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
  bottomAxis,
  ticks,
  document,
} from "../svg.js";

const COLUMNS = ["x", "bin_left", "bin_right", "count"];

/** Winnowed mean-median histograms: one small-multiple panel per winnowing
 * threshold x, stacked vertically on shared MM and count scales. Subsets with
 * no surviving plans are drawn as an explicit "empty subset" panel instead of
 * a silent blank. */
export function renderWinnowMm(table: Table, title = "winnowed mean-median"): string {
  requireColumns(table, COLUMNS, "winnow_mm");
  const checksum = checksumTable("winnow_mm", cells(table, COLUMNS));

  const left = MARGIN.left;
  const right = WIDTH - MARGIN.right;
  const top = MARGIN.top;
  const bottom = HEIGHT - MARGIN.bottom;

  const body: string[] = [];
  if (table.rows.length === 0) {
    body.push(
      el("rect", {
        x: left,
        y: top,
        width: right - left,
        height: bottom - top,
        fill: "none",
        stroke: "#999",
        "stroke-dasharray": "4 3",
      }),
    );
    body.push(
      text((left + right) / 2, (top + bottom) / 2, "empty subset", {
        "text-anchor": "middle",
        "font-size": 16,
        fill: "#888",
      }),
    );
    return document(checksum, title, body);
  }

  const groups: { x: string; rows: number[] }[] = [];
  const byX = new Map<string, number>();
  table.rows.forEach((row, i) => {
    const key = row["x"];
    if (!byX.has(key)) {
      byX.set(key, groups.length);
      groups.push({ x: key, rows: [] });
    }
    groups[byX.get(key)!].rows.push(i);
  });

  const lefts = table.rows.map((r) => num(r, "bin_left"));
  const rights = table.rows.map((r) => num(r, "bin_right"));
  const maxCount = Math.max(1, ...table.rows.map((r) => num(r, "count")));
  const xScale = linearScale([Math.min(...lefts), Math.max(...rights)], [left, right]);

  const gap = 14;
  const panelH = (bottom - top - gap * (groups.length - 1)) / groups.length;

  groups.forEach((g, gi) => {
    const py = top + gi * (panelH + gap);
    const base = py + panelH;
    const yScale = linearScale([0, maxCount], [base, py]);
    const total = g.rows.reduce((acc, ri) => acc + num(table.rows[ri], "count"), 0);

    body.push(el("line", { x1: left, x2: right, y1: base, y2: base, stroke: "#444" }));
    body.push(el("line", { x1: left - 5, x2: left, y1: py, y2: py, stroke: "#444" }));
    body.push(text(left - 8, py + 4, fmt(maxCount), { "text-anchor": "end" }));
    body.push(text(left - 8, base + 4, "0", { "text-anchor": "end" }));
    body.push(text(left + 6, py + 12, `x = ${g.x}`, { fill: "#333" }));

    if (total === 0) {
      body.push(
        text((left + right) / 2, py + panelH / 2 + 4, "empty subset", {
          "text-anchor": "middle",
          fill: "#888",
        }),
      );
      return;
    }
    for (const ri of g.rows) {
      const row = table.rows[ri];
      const count = num(row, "count");
      if (count === 0) continue;
      const x0 = xScale(num(row, "bin_left"));
      const x1 = xScale(num(row, "bin_right"));
      body.push(
        el("rect", {
          x: x0,
          y: yScale(count),
          width: Math.max(0.5, x1 - x0),
          height: base - yScale(count),
          fill: "#3182bd",
          stroke: "#1a5276",
          "stroke-width": 0.4,
        }),
      );
    }
    if (xScale.domain[0] <= 0 && 0 <= xScale.domain[1]) {
      body.push(
        el("line", {
          x1: xScale(0),
          x2: xScale(0),
          y1: py,
          y2: base,
          stroke: "#999",
          "stroke-dasharray": "3 3",
        }),
      );
    }
  });

  body.push(...bottomAxis(xScale, bottom, ticks(xScale.domain[0], xScale.domain[1], 6)));
  body.push(
    text((left + right) / 2, HEIGHT - 14, "mean-median score", { "text-anchor": "middle" }),
  );
  body.push(
    text(16, (top + bottom) / 2, "plans", {
      "text-anchor": "middle",
      transform: `rotate(-90 16 ${fmt((top + bottom) / 2)})`,
    }),
  );
  return document(checksum, title, body);
}
