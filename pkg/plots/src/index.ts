export { readTable, requireColumns, cells, num, SchemaError } from "./csv.js";
export type { Table } from "./csv.js";
export { checksumTable } from "./checksum.js";
export { renderBoxplot } from "./figures/boxplot.js";
export { renderBandsHist } from "./figures/bandsHist.js";
export { renderFeasibility } from "./figures/feasibility.js";
export { renderWinnowMm } from "./figures/winnowMm.js";
export { renderScatter } from "./figures/scatter.js";

import { Table } from "./csv.js";
import { renderBoxplot } from "./figures/boxplot.js";
import { renderBandsHist } from "./figures/bandsHist.js";
import { renderFeasibility } from "./figures/feasibility.js";
import { renderWinnowMm } from "./figures/winnowMm.js";
import { renderScatter } from "./figures/scatter.js";

export const KINDS = [
  "boxplot",
  "bands_hist",
  "feasibility",
  "winnow_mm",
  "scatter",
] as const;
export type Kind = (typeof KINDS)[number];

const RENDERERS: Record<Kind, (table: Table, title?: string) => string> = {
  boxplot: renderBoxplot,
  bands_hist: renderBandsHist,
  feasibility: renderFeasibility,
  winnow_mm: renderWinnowMm,
  scatter: renderScatter,
};

export function render(kind: Kind, table: Table, title?: string): string {
  return RENDERERS[kind](table, title);
}
