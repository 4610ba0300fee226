import { Table, requireColumns, cells, num } from "../csv.js";
import { checksumTable } from "../checksum.js";
import {
  WIDTH,
  HEIGHT,
  MARGIN,
  GREEN,
  PURPLE,
  el,
  text,
  fmt,
  linearScale,
  leftAxis,
  ticks,
  document,
} from "../svg.js";

const COLUMNS = ["y", "z", "band_count", "occurrences"];

/** z = 50 means the competitive band (green); anything else is the
 * state-typical band (purple). */
function bandColor(z: number): string {
  return z === 50 ? GREEN : PURPLE;
}

/** Band-count histogram: bars of plans per in-band district count, one bar
 * series per (y, z) band, side by side when several bands share a file. */
export function renderBandsHist(table: Table, title = "band-count histogram"): string {
  requireColumns(table, COLUMNS, "bands_hist");
  const checksum = checksumTable("bands_hist", cells(table, COLUMNS));

  const left = MARGIN.left;
  const right = WIDTH - MARGIN.right;
  const top = MARGIN.top;
  const bottom = HEIGHT - MARGIN.bottom;

  const groups: { key: string; y: number; z: number; rows: number[] }[] = [];
  const byKey = new Map<string, number>();
  table.rows.forEach((row, i) => {
    const key = `${row["y"]},${row["z"]}`;
    if (!byKey.has(key)) {
      byKey.set(key, groups.length);
      groups.push({ key, y: num(row, "y"), z: num(row, "z"), rows: [] });
    }
    groups[byKey.get(key)!].rows.push(i);
  });

  const counts = table.rows.map((r) => num(r, "band_count"));
  const occ = table.rows.map((r) => num(r, "occurrences"));
  const maxCount = counts.length ? Math.max(...counts) : 1;
  const maxOcc = Math.max(1, ...occ);

  const slots = maxCount + 1;
  const slotW = (right - left) / slots;
  const yScale = linearScale([0, maxOcc], [bottom, top]);
  const nb = Math.max(1, groups.length);
  const barW = (slotW * 0.8) / nb;

  const body: string[] = [];
  body.push(...leftAxis(yScale, left, ticks(0, maxOcc, 5)));
  body.push(el("line", { x1: left, x2: right, y1: bottom, y2: bottom, stroke: "#444" }));

  groups.forEach((g, gi) => {
    for (const ri of g.rows) {
      const bc = num(table.rows[ri], "band_count");
      const count = num(table.rows[ri], "occurrences");
      const x0 = left + bc * slotW + slotW * 0.1 + gi * barW;
      body.push(
        el("rect", {
          x: x0,
          y: yScale(count),
          width: barW,
          height: bottom - yScale(count),
          fill: bandColor(g.z),
          stroke: "#333",
          "stroke-width": 0.5,
        }),
      );
    }
  });

  for (let c = 0; c <= maxCount; c++) {
    body.push(
      text(left + (c + 0.5) * slotW, bottom + 18, fmt(c), { "text-anchor": "middle" }),
    );
  }

  groups.forEach((g, gi) => {
    const lx = right - 150;
    const ly = top + 10 + gi * 18;
    body.push(el("rect", { x: lx, y: ly - 9, width: 12, height: 12, fill: bandColor(g.z) }));
    body.push(text(lx + 18, ly + 2, `(${fmt(g.y)}, ${fmt(g.z)}) band`));
  });

  body.push(
    text((left + right) / 2, HEIGHT - 14, "districts in band", { "text-anchor": "middle" }),
  );
  body.push(
    text(16, (top + bottom) / 2, "plans", {
      "text-anchor": "middle",
      transform: `rotate(-90 16 ${fmt((top + bottom) / 2)})`,
    }),
  );
  return document(checksum, title, body);
}
