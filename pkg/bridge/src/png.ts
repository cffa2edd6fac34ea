/**
 * PNG decoding for detect requests: base64 payload to a grayscale image.
 */

import { PNG } from "pngjs";

export interface GrayImage {
  width: number;
  height: number;
  /** Row-major luminance values, one byte per pixel. */
  data: Uint8Array;
}

/**
 * Decode a base64 PNG into luminance. RGB input is collapsed with the
 * 0.299/0.587/0.114 weights (matching the tracking package); the alpha
 * channel pngjs synthesizes is ignored.
 */
export function decodeGray(base64: string): GrayImage {
  let png: PNG;
  try {
    png = PNG.sync.read(Buffer.from(base64, "base64"));
  } catch (err) {
    throw new Error(`undecodable PNG image: ${err instanceof Error ? err.message : String(err)}`);
  }
  const { width, height } = png;
  const out = new Uint8Array(width * height);
  for (let i = 0; i < width * height; i++) {
    const r = png.data[4 * i];
    const g = png.data[4 * i + 1];
    const b = png.data[4 * i + 2];
    const lum = r === g && g === b ? r : Math.round(0.299 * r + 0.587 * g + 0.114 * b);
    out[i] = lum > 255 ? 255 : lum;
  }
  return { width, height, data: out };
}
