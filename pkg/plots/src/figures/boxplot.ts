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
  ticks,
  document,
} from "../svg.js";

const COLUMNS = ["district", "p1", "p25", "p50", "p75", "p99"];

/** Per-district share percentile boxes: whiskers p1..p99, box p25..p75,
 * median bar at p50, districts ascending left to right. */
export function renderBoxplot(table: Table, title = "district share percentiles"): string {
  requireColumns(table, COLUMNS, "boxplot");
  const checksum = checksumTable("boxplot", cells(table, COLUMNS));

  const left = MARGIN.left;
  const right = WIDTH - MARGIN.right;
  const top = MARGIN.top;
  const bottom = HEIGHT - MARGIN.bottom;

  const order = table.rows
    .map((row, i) => ({ i, district: num(row, "district") }))
    .sort((a, b) => a.district - b.district);
  const yScale = linearScale([0, 1], [bottom, top]);
  const bandW = (right - left) / Math.max(1, order.length);

  const body: string[] = [];
  body.push(...leftAxis(yScale, left, ticks(0, 1, 5)));
  body.push(
    el("line", {
      x1: left,
      x2: right,
      y1: yScale(0.5),
      y2: yScale(0.5),
      stroke: "#999",
      "stroke-dasharray": "4 3",
    }),
  );
  body.push(el("line", { x1: left, x2: right, y1: bottom, y2: bottom, stroke: "#444" }));

  for (let slot = 0; slot < order.length; slot++) {
    const row = table.rows[order[slot].i];
    const cx = left + (slot + 0.5) * bandW;
    const boxW = Math.min(40, bandW * 0.5);
    const [p1, p25, p50, p75, p99] = ["p1", "p25", "p50", "p75", "p99"].map((c) => num(row, c));
    body.push(el("line", { x1: cx, x2: cx, y1: yScale(p1), y2: yScale(p99), stroke: "#333" }));
    for (const cap of [p1, p99]) {
      body.push(
        el("line", {
          x1: cx - boxW / 4,
          x2: cx + boxW / 4,
          y1: yScale(cap),
          y2: yScale(cap),
          stroke: "#333",
        }),
      );
    }
    body.push(
      el("rect", {
        x: cx - boxW / 2,
        y: yScale(p75),
        width: boxW,
        height: yScale(p25) - yScale(p75),
        fill: "#9ecae1",
        stroke: "#333",
      }),
    );
    body.push(
      el("line", {
        x1: cx - boxW / 2,
        x2: cx + boxW / 2,
        y1: yScale(p50),
        y2: yScale(p50),
        stroke: "#08519c",
        "stroke-width": 2,
      }),
    );
    body.push(
      text(cx, bottom + 18, fmt(order[slot].district), { "text-anchor": "middle" }),
    );
  }

  body.push(
    text((left + right) / 2, HEIGHT - 14, "district (sorted by share)", {
      "text-anchor": "middle",
    }),
  );
  body.push(
    text(16, (top + bottom) / 2, "Democratic share", {
      "text-anchor": "middle",
      transform: `rotate(-90 16 ${fmt((top + bottom) / 2)})`,
    }),
  );
  return document(checksum, title, body);
}
