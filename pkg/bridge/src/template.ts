/**
 * Brightness-template detector: normalized cross-correlation of a disk
 * template slid over the patch, peaks above a fixed threshold reported as
 * detections with the correlation as score.
 */

import { GrayImage } from "./png";
import { DetectionBox } from "./protocol";

export const PEAK_THRESHOLD = 0.7;

export interface DiskTemplate {
  side: number;
  /** Mean-subtracted template values, row-major. */
  values: Float64Array;
  /** Sum of squared mean-subtracted values. */
  energy: number;
  radius: number;
}

/**
 * Build a disk template of the given radius: per-pixel coverage fractions
 * estimated on a 4x4 subpixel grid, centered in an odd-sided square.
 */
export function makeDiskTemplate(radius: number): DiskTemplate {
  if (!(radius >= 1.5)) throw new Error(`template radius must be >= 1.5, got ${radius}`);
  const side = 2 * Math.ceil(radius) + 3;
  const c = (side - 1) / 2;
  const raw = new Float64Array(side * side);
  const sub = 4;
  for (let y = 0; y < side; y++) {
    for (let x = 0; x < side; x++) {
      let inside = 0;
      for (let sy = 0; sy < sub; sy++) {
        for (let sx = 0; sx < sub; sx++) {
          const px = x + (sx + 0.5) / sub - 0.5 - c;
          const py = y + (sy + 0.5) / sub - 0.5 - c;
          if (px * px + py * py <= radius * radius) inside++;
        }
      }
      raw[y * side + x] = inside / (sub * sub);
    }
  }
  let mean = 0;
  for (const v of raw) mean += v;
  mean /= raw.length;
  const values = new Float64Array(raw.length);
  let energy = 0;
  for (let i = 0; i < raw.length; i++) {
    values[i] = raw[i] - mean;
    energy += values[i] * values[i];
  }
  return { side, values, energy, radius };
}

/** Mean-subtracted NCC of the template against one placement; 0 when flat. */
function correlation(img: GrayImage, tpl: DiskTemplate, x0: number, y0: number): number {
  const { side, values, energy } = tpl;
  let mean = 0;
  for (let ty = 0; ty < side; ty++) {
    const row = (y0 + ty) * img.width + x0;
    for (let tx = 0; tx < side; tx++) mean += img.data[row + tx];
  }
  mean /= side * side;

  let num = 0;
  let den = 0;
  for (let ty = 0; ty < side; ty++) {
    const row = (y0 + ty) * img.width + x0;
    for (let tx = 0; tx < side; tx++) {
      const d = img.data[row + tx] - mean;
      num += d * values[ty * side + tx];
      den += d * d;
    }
  }
  const norm = Math.sqrt(den * energy);
  return norm === 0 ? 0 : num / norm;
}

/**
 * Slide the template over the image and return one detection per correlation
 * peak above PEAK_THRESHOLD. Peaks closer than two radii to a stronger peak
 * are suppressed; results are sorted by descending score.
 */
export function templateDetect(img: GrayImage, tpl: DiskTemplate): DetectionBox[] {
  const { side, radius } = tpl;
  if (img.width < side || img.height < side) return [];

  interface Peak {
    cx: number;
    cy: number;
    score: number;
  }
  const half = (side - 1) / 2;
  const candidates: Peak[] = [];
  for (let y0 = 0; y0 + side <= img.height; y0++) {
    for (let x0 = 0; x0 + side <= img.width; x0++) {
      const score = correlation(img, tpl, x0, y0);
      if (score > PEAK_THRESHOLD) {
        candidates.push({ cx: x0 + half, cy: y0 + half, score });
      }
    }
  }
  candidates.sort((a, b) => b.score - a.score);

  const minDist2 = 4 * radius * radius;
  const kept: Peak[] = [];
  for (const cand of candidates) {
    const near = kept.some((p) => {
      const dx = p.cx - cand.cx;
      const dy = p.cy - cand.cy;
      return dx * dx + dy * dy < minDist2;
    });
    if (!near) kept.push(cand);
  }

  return kept.map((p) => ({
    x: p.cx - radius,
    y: p.cy - radius,
    w: 2 * radius,
    h: 2 * radius,
    score: Math.min(1, p.score),
  }));
}
