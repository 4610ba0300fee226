import { Table, requireColumns, cells, num } from "../csv.js";
import { checksumTable } from "../checksum.js";
import { WIDTH, HEIGHT, MARGIN, el, text, fmt, document } from "../svg.js";

const COLUMNS = ["x", "y", "z", "fraction"];

/** White-to-dark-blue ramp for the feasible fraction. */
function cellFill(fraction: number): string {
  const t = Math.max(0, Math.min(1, fraction));
  const lo = [247, 251, 255];
  const hi = [8, 48, 107];
  const rgb = lo.map((c, i) => Math.round(c + (hi[i] - c) * t));
  return `rgb(${rgb[0]},${rgb[1]},${rgb[2]})`;
}

/** Compression-feasibility heatmap: one cell per (x, y) with the fraction of
 * plans having at least ceil(x*k) districts in the (y, z) band. Multiple z
 * values get side-by-side panels. */
export function renderFeasibility(table: Table, title = "compression feasibility"): string {
  requireColumns(table, COLUMNS, "feasibility");
  const checksum = checksumTable("feasibility", cells(table, COLUMNS));

  const left = MARGIN.left;
  const right = WIDTH - MARGIN.right;
  const top = MARGIN.top;
  const bottom = HEIGHT - MARGIN.bottom;

  const zs: string[] = [];
  for (const row of table.rows) if (!zs.includes(row["z"])) zs.push(row["z"]);
  if (zs.length === 0) zs.push("");
  const panelGap = 24;
  const panelW = (right - left - panelGap * (zs.length - 1)) / zs.length;

  const body: string[] = [];
  zs.forEach((z, zi) => {
    const px = left + zi * (panelW + panelGap);
    const rows = table.rows.filter((r) => r["z"] === z);
    const xs: string[] = [];
    const ys: string[] = [];
    for (const r of rows) {
      if (!xs.includes(r["x"])) xs.push(r["x"]);
      if (!ys.includes(r["y"])) ys.push(r["y"]);
    }
    const cw = panelW / Math.max(1, xs.length);
    const ch = (bottom - top) / Math.max(1, ys.length);

    for (const r of rows) {
      const xi = xs.indexOf(r["x"]);
      // y increases upward: first (smallest) y sits in the bottom row.
      const yi = ys.length - 1 - ys.indexOf(r["y"]);
      const f = num(r, "fraction");
      const cx = px + xi * cw;
      const cy = top + yi * ch;
      body.push(
        el("rect", {
          x: cx,
          y: cy,
          width: cw,
          height: ch,
          fill: cellFill(f),
          stroke: "#ffffff",
        }),
      );
      body.push(
        text(cx + cw / 2, cy + ch / 2 + 4, fmt(f), {
          "text-anchor": "middle",
          fill: f > 0.55 ? "#ffffff" : "#111111",
        }),
      );
    }

    xs.forEach((xv, xi) => {
      body.push(
        text(px + (xi + 0.5) * cw, bottom + 18, xv, { "text-anchor": "middle" }),
      );
    });
    if (zi === 0) {
      ys.forEach((yv, i) => {
        const yi = ys.length - 1 - i;
        body.push(
          text(left - 8, top + (yi + 0.5) * ch + 4, yv, { "text-anchor": "end" }),
        );
      });
    }
    if (zs.length > 1 || z !== "") {
      body.push(
        text(px + panelW / 2, top - 8, `z = ${z}`, { "text-anchor": "middle" }),
      );
    }
  });

  body.push(
    text((left + right) / 2, HEIGHT - 14, "x (required fraction of districts in band)", {
      "text-anchor": "middle",
    }),
  );
  body.push(
    text(16, (top + bottom) / 2, "y (band half-width, points)", {
      "text-anchor": "middle",
      transform: `rotate(-90 16 ${fmt((top + bottom) / 2)})`,
    }),
  );
  return document(checksum, title, body);
}
