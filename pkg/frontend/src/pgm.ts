/** Binary PGM (P5) encode/decode plus base64 helpers.
 *
 * The service exchanges rasters as base64 P5 streams; seed/label maps
 * use the pixel alphabet 0 = unlabelled, 128 = background, 255 =
 * foreground. Everything here is pure and runs in both browser and
 * node (no Buffer, no atob).
 */

export interface Pgm {
  rows: number;
  cols: number;
  maxval: number;
  /** row-major samples, length rows*cols */
  pixels: Uint16Array;
}

const B64_ALPHABET = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

export function bytesToBase64(bytes: Uint8Array): string {
  let out = "";
  for (let i = 0; i < bytes.length; i += 3) {
    const b0 = bytes[i];
    const b1 = i + 1 < bytes.length ? bytes[i + 1] : 0;
    const b2 = i + 2 < bytes.length ? bytes[i + 2] : 0;
    out += B64_ALPHABET[b0 >> 2];
    out += B64_ALPHABET[((b0 & 3) << 4) | (b1 >> 4)];
    out += i + 1 < bytes.length ? B64_ALPHABET[((b1 & 15) << 2) | (b2 >> 6)] : "=";
    out += i + 2 < bytes.length ? B64_ALPHABET[b2 & 63] : "=";
  }
  return out;
}

const B64_LOOKUP = (() => {
  const table = new Int16Array(128).fill(-1);
  for (let i = 0; i < B64_ALPHABET.length; i++) table[B64_ALPHABET.charCodeAt(i)] = i;
  return table;
})();

export function base64ToBytes(text: string): Uint8Array {
  const clean = text.replace(/[\r\n]/g, "");
  let padding = 0;
  for (let i = clean.length - 1; i >= 0 && clean[i] === "="; i--) padding++;
  const chars = clean.length - padding;
  const out = new Uint8Array(Math.floor((chars * 6) / 8));
  let acc = 0;
  let bits = 0;
  let k = 0;
  for (let i = 0; i < chars; i++) {
    const v = B64_LOOKUP[clean.charCodeAt(i)];
    if (v < 0) throw new Error(`invalid base64 character at ${i}`);
    acc = (acc << 6) | v;
    bits += 6;
    if (bits >= 8) {
      bits -= 8;
      out[k++] = (acc >> bits) & 0xff;
    }
  }
  return out;
}

export function decodePgm(bytes: Uint8Array): Pgm {
  if (bytes[0] !== 0x50 || bytes[1] !== 0x35) {
    throw new Error("not a binary PGM: missing P5 magic");
  }
  let pos = 2;
  const isSpace = (c: number) => c === 0x20 || c === 0x09 || c === 0x0a || c === 0x0d || c === 0x0c || c === 0x0b;
  const tokens: number[] = [];
  while (tokens.length < 3) {
    while (pos < bytes.length) {
      if (isSpace(bytes[pos])) {
        pos++;
      } else if (bytes[pos] === 0x23) {
        while (pos < bytes.length && bytes[pos] !== 0x0a) pos++;
      } else {
        break;
      }
    }
    const start = pos;
    while (pos < bytes.length && !isSpace(bytes[pos])) pos++;
    const token = new TextDecoder().decode(bytes.subarray(start, pos));
    if (!/^\d+$/.test(token)) throw new Error(`malformed header token at byte ${start}`);
    tokens.push(parseInt(token, 10));
  }
  pos++; // the single whitespace byte after maxval
  const [cols, rows, maxval] = tokens;
  if (maxval < 1 || maxval > 65535) throw new Error(`maxval ${maxval} out of range`);
  const twoByte = maxval > 255;
  const need = rows * cols * (twoByte ? 2 : 1);
  if (bytes.length - pos < need) {
    throw new Error(`unexpected end of pixel data at byte ${bytes.length}`);
  }
  const pixels = new Uint16Array(rows * cols);
  if (twoByte) {
    for (let i = 0; i < rows * cols; i++) {
      pixels[i] = (bytes[pos + 2 * i] << 8) | bytes[pos + 2 * i + 1];
    }
  } else {
    for (let i = 0; i < rows * cols; i++) pixels[i] = bytes[pos + i];
  }
  return { rows, cols, maxval, pixels };
}

export function encodePgm(img: Pgm): Uint8Array {
  const header = `P5\n${img.cols} ${img.rows}\n${img.maxval}\n`;
  const headerBytes = new TextEncoder().encode(header);
  const twoByte = img.maxval > 255;
  const body = new Uint8Array(img.rows * img.cols * (twoByte ? 2 : 1));
  if (twoByte) {
    for (let i = 0; i < img.pixels.length; i++) {
      body[2 * i] = img.pixels[i] >> 8;
      body[2 * i + 1] = img.pixels[i] & 0xff;
    }
  } else {
    for (let i = 0; i < img.pixels.length; i++) body[i] = img.pixels[i] & 0xff;
  }
  const out = new Uint8Array(headerBytes.length + body.length);
  out.set(headerBytes);
  out.set(body, headerBytes.length);
  return out;
}

export const SEED_UNSET = 0;
export const SEED_BACKGROUND = 128;
export const SEED_FOREGROUND = 255;

/** -1/0/+1 labels from a {0,128,255} encoded image. */
export function decodeLabels(img: Pgm): Int8Array {
  const out = new Int8Array(img.pixels.length);
  for (let i = 0; i < img.pixels.length; i++) {
    const v = img.pixels[i];
    if (v === SEED_FOREGROUND) out[i] = 1;
    else if (v === SEED_BACKGROUND) out[i] = -1;
    else if (v !== SEED_UNSET) throw new Error(`invalid seed encoding value ${v} at index ${i}`);
  }
  return out;
}

export function encodeLabels(labels: Int8Array, rows: number, cols: number): Pgm {
  const pixels = new Uint16Array(rows * cols);
  for (let i = 0; i < labels.length; i++) {
    pixels[i] = labels[i] === 1 ? SEED_FOREGROUND : labels[i] === -1 ? SEED_BACKGROUND : SEED_UNSET;
  }
  return { rows, cols, maxval: 255, pixels };
}

/** 0/255 mask image to booleans. */
export function decodeMask(img: Pgm): Uint8Array {
  const out = new Uint8Array(img.pixels.length);
  for (let i = 0; i < img.pixels.length; i++) out[i] = img.pixels[i] > 0 ? 1 : 0;
  return out;
}
