import { createHash } from "node:crypto";

/**
 * Checksum of the exact values a figure draws: the raw CSV cell strings of
 * the plotted columns, row order preserved. The same digest computed
 * independently from the CSV must match the one stamped on the SVG, which
 * pins the no-reaggregation invariant.
 */
export function checksumTable(kind: string, rows: string[][]): string {
  const payload = kind + "\n" + rows.map((r) => r.join(",")).join("\n");
  return createHash("sha256").update(payload, "utf8").digest("hex");
}
