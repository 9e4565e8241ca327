/** Probability color scale: monotone from violation-red through amber to
 * compliant-green. Position in the ramp equals the probability itself, so the
 * mapping is trivially monotone in p.
 */

export interface Rgb {
  r: number;
  g: number;
  b: number;
}

const STOPS: { at: number; color: Rgb }[] = [
  { at: 0.0, color: { r: 0x5c, g: 0x10, b: 0x1c } },
  { at: 0.5, color: { r: 0xd9, g: 0xa1, b: 0x3b } },
  { at: 1.0, color: { r: 0x1f, g: 0x77, b: 0x33 } },
];

function lerp(a: number, b: number, t: number): number {
  return a + (b - a) * t;
}

export function probabilityColor(p: number): Rgb {
  const clamped = Math.min(1, Math.max(0, p));
  for (let i = 1; i < STOPS.length; i++) {
    const lo = STOPS[i - 1];
    const hi = STOPS[i];
    if (clamped <= hi.at) {
      const t = (clamped - lo.at) / (hi.at - lo.at);
      return {
        r: Math.round(lerp(lo.color.r, hi.color.r, t)),
        g: Math.round(lerp(lo.color.g, hi.color.g, t)),
        b: Math.round(lerp(lo.color.b, hi.color.b, t)),
      };
    }
  }
  return STOPS[STOPS.length - 1].color;
}

export function probabilityCss(p: number): string {
  const { r, g, b } = probabilityColor(p);
  return `rgb(${r}, ${g}, ${b})`;
}

/** Scalar ramp position backing the scale; monotone by construction. */
export function rampPosition(p: number): number {
  return Math.min(1, Math.max(0, p));
}
