/** Minimal deterministic SVG assembly: no dates, no randomness, fixed
 * number formatting, so identical inputs give byte-identical files. */

export const WIDTH = 720;
export const HEIGHT = 480;
export const MARGIN = { top: 44, right: 24, bottom: 52, left: 64 };

/** Band color convention: green for competitive (z = 50) bands, purple for
 * state-typical (z = D0) bands. */
export const GREEN = "#2ca25f";
export const PURPLE = "#756bb1";

export type Attrs = Record<string, string | number>;

export function fmt(v: number): string {
  if (Number.isInteger(v)) return String(v);
  const s = v.toFixed(4);
  return s.replace(/0+$/, "").replace(/\.$/, "");
}

export function escapeText(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function el(tag: string, attrs: Attrs, children: string[] = []): string {
  const attrText = Object.entries(attrs)
    .map(([k, v]) => `${k}="${typeof v === "number" ? fmt(v) : escapeText(v)}"`)
    .join(" ");
  if (children.length === 0) return `<${tag} ${attrText}/>`;
  return `<${tag} ${attrText}>${children.join("")}</${tag}>`;
}

export function text(x: number, y: number, content: string, attrs: Attrs = {}): string {
  return el("text", { x, y, "font-family": "monospace", "font-size": 12, ...attrs }, [
    escapeText(content),
  ]);
}

export interface Scale {
  (v: number): number;
  domain: [number, number];
}

export function linearScale(domain: [number, number], range: [number, number]): Scale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0 || 1;
  const scale = ((v: number) => r0 + ((v - d0) / span) * (r1 - r0)) as Scale;
  scale.domain = domain;
  return scale;
}

/** Round ticks at powers of 1, 2, 5. */
export function ticks(lo: number, hi: number, count: number): number[] {
  if (!(hi > lo)) return [lo];
  const rawStep = (hi - lo) / Math.max(1, count);
  const pow = Math.pow(10, Math.floor(Math.log10(rawStep)));
  let step = pow;
  for (const m of [1, 2, 5, 10]) {
    if (pow * m >= rawStep) {
      step = pow * m;
      break;
    }
  }
  const out: number[] = [];
  const start = Math.ceil(lo / step) * step;
  for (let v = start; v <= hi + step * 1e-9; v += step) {
    out.push(Math.abs(v) < step * 1e-9 ? 0 : v);
  }
  return out;
}

export function leftAxis(scale: Scale, x: number, tickValues: number[]): string[] {
  const parts: string[] = [];
  for (const t of tickValues) {
    const y = scale(t);
    parts.push(el("line", { x1: x - 5, x2: x, y1: y, y2: y, stroke: "#444" }));
    parts.push(text(x - 8, y + 4, fmt(t), { "text-anchor": "end" }));
  }
  parts.push(
    el("line", {
      x1: x,
      x2: x,
      y1: scale(scale.domain[1]),
      y2: scale(scale.domain[0]),
      stroke: "#444",
    }),
  );
  return parts;
}

export function bottomAxis(scale: Scale, y: number, tickValues: number[]): string[] {
  const parts: string[] = [];
  for (const t of tickValues) {
    const x = scale(t);
    parts.push(el("line", { x1: x, x2: x, y1: y, y2: y + 5, stroke: "#444" }));
    parts.push(text(x, y + 18, fmt(t), { "text-anchor": "middle" }));
  }
  parts.push(
    el("line", {
      x1: scale(scale.domain[0]),
      x2: scale(scale.domain[1]),
      y1: y,
      y2: y,
      stroke: "#444",
    }),
  );
  return parts;
}

/** Wrap figure content in a standalone SVG stamped with the data checksum. */
export function document(checksum: string, title: string, body: string[]): string {
  return el(
    "svg",
    {
      xmlns: "http://www.w3.org/2000/svg",
      width: WIDTH,
      height: HEIGHT,
      viewBox: `0 0 ${WIDTH} ${HEIGHT}`,
      "data-checksum": checksum,
    },
    [
      el("rect", { x: 0, y: 0, width: WIDTH, height: HEIGHT, fill: "#ffffff" }),
      text(WIDTH / 2, 24, title, { "text-anchor": "middle", "font-size": 15 }),
      ...body,
    ],
  );
}
