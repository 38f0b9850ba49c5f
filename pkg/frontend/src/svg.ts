/**
 * Small SVG helpers: element builders, a linear scale, and tick selection.
 * Everything returns plain strings so renders stay deterministic and
 * byte-identical for identical inputs.
 */

export interface Attrs {
  [name: string]: string | number;
}

function escapeXml(value: string): string {
  return value
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/** Format a pixel coordinate with stable 2-decimal precision. */
export function px(value: number): string {
  const rounded = Math.round(value * 100) / 100;
  // Avoid "-0" so identical geometry always serializes identically.
  return String(rounded === 0 ? 0 : rounded);
}

/** Build one SVG element as a string; children are pre-rendered strings. */
export function el(tag: string, attrs: Attrs, children: string[] = []): string {
  const parts = Object.entries(attrs).map(
    ([name, value]) => `${name}="${escapeXml(String(value))}"`,
  );
  const open = parts.length > 0 ? `<${tag} ${parts.join(" ")}` : `<${tag}`;
  if (children.length === 0) {
    return `${open}/>`;
  }
  return `${open}>${children.join("")}</${tag}>`;
}

export function text(content: string, attrs: Attrs): string {
  const parts = Object.entries(attrs).map(
    ([name, value]) => `${name}="${escapeXml(String(value))}"`,
  );
  return `<text ${parts.join(" ")}>${escapeXml(content)}</text>`;
}

/** Affine map from a data interval onto a pixel interval. */
export class LinearScale {
  constructor(
    readonly domainMin: number,
    readonly domainMax: number,
    readonly rangeMin: number,
    readonly rangeMax: number,
  ) {
    if (!(domainMax > domainMin)) {
      throw new Error("scale domain must have positive extent");
    }
  }

  map(value: number): number {
    const t = (value - this.domainMin) / (this.domainMax - this.domainMin);
    return this.rangeMin + t * (this.rangeMax - this.rangeMin);
  }
}

/**
 * Pick roughly `count` ticks at a 1/2/5 step covering [min, max].
 * The returned ticks are clipped to the interval.
 */
export function niceTicks(min: number, max: number, count = 5): number[] {
  if (!(max > min)) {
    return [min];
  }
  const rawStep = (max - min) / Math.max(count, 1);
  const power = Math.floor(Math.log10(rawStep));
  const base = Math.pow(10, power);
  let step = 10 * base;
  for (const mult of [1, 2, 5]) {
    if (mult * base >= rawStep) {
      step = mult * base;
      break;
    }
  }
  const ticks: number[] = [];
  const first = Math.ceil(min / step - 1e-9) * step;
  for (let v = first; v <= max + 1e-9 * step; v += step) {
    // Snap to the step grid so floating accumulation never shows in labels.
    ticks.push(Math.round(v / step) * step);
  }
  return ticks;
}

/** Compact label for a tick value; exponent form outside a sane range. */
export function tickLabel(value: number): string {
  if (value === 0) {
    return "0";
  }
  const magnitude = Math.abs(value);
  if (magnitude >= 1e-4 && magnitude < 1e6) {
    // Trim binary noise without losing the displayed precision.
    return String(Number(value.toPrecision(10)));
  }
  return value.toExponential(1);
}

/** Nice upper bound for an axis: smallest 1/2/5-step multiple above `value`. */
export function niceCeil(value: number): number {
  if (value <= 0) {
    return 1;
  }
  const power = Math.floor(Math.log10(value));
  const base = Math.pow(10, power);
  for (const mult of [1, 2, 5, 10]) {
    const candidate = mult * base;
    if (candidate >= value - 1e-12 * base) {
      return candidate;
    }
  }
  return 10 * base;
}
