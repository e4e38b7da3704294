/** Decoder for binary (P6) portable pixmaps, the byte-exact render format
 * the facade serves.  Used by the export pipeline and the snapshot tests. */

export interface Pixmap {
  width: number;
  height: number;
  /** Row-major RGB triples, 3 bytes per pixel. */
  data: Uint8Array;
}

export function decodePpm(bytes: Uint8Array): Pixmap {
  let pos = 0;
  const token = (): string => {
    while (pos < bytes.length && isSpace(bytes[pos]!)) pos++;
    const start = pos;
    while (pos < bytes.length && !isSpace(bytes[pos]!)) pos++;
    if (start === pos) throw new Error("truncated pixmap header");
    return String.fromCharCode(...bytes.subarray(start, pos));
  };
  if (token() !== "P6") throw new Error("not a binary pixmap");
  const width = Number(token());
  const height = Number(token());
  const maxval = Number(token());
  if (!Number.isInteger(width) || !Number.isInteger(height) || maxval !== 255) {
    throw new Error("unsupported pixmap header");
  }
  pos++; // single whitespace byte after maxval
  const data = bytes.subarray(pos, pos + width * height * 3);
  if (data.length !== width * height * 3) throw new Error("truncated pixels");
  return { width, height, data };
}

function isSpace(b: number): boolean {
  return b === 0x20 || b === 0x09 || b === 0x0a || b === 0x0d;
}

export function pixelAt(
  img: Pixmap,
  x: number,
  y: number,
): [number, number, number] {
  const i = (y * img.width + x) * 3;
  return [img.data[i]!, img.data[i + 1]!, img.data[i + 2]!];
}

/** Fraction of pixels differing from `background` ("#rrggbb"). */
export function coverage(img: Pixmap, background: string): number {
  const [br, bg, bb] = parseHexColor(background);
  let n = 0;
  for (let i = 0; i < img.data.length; i += 3) {
    if (
      img.data[i] !== br ||
      img.data[i + 1] !== bg ||
      img.data[i + 2] !== bb
    ) {
      n++;
    }
  }
  return n / (img.width * img.height);
}

export function distinctColors(img: Pixmap): Set<string> {
  const seen = new Set<string>();
  for (let i = 0; i < img.data.length; i += 3) {
    seen.add(`${img.data[i]},${img.data[i + 1]},${img.data[i + 2]}`);
  }
  return seen;
}

export function parseHexColor(hex: string): [number, number, number] {
  const m = /^#([0-9a-fA-F]{6})$/.exec(hex);
  if (!m) throw new Error(`bad color ${hex}`);
  const v = parseInt(m[1]!, 16);
  return [(v >> 16) & 0xff, (v >> 8) & 0xff, v & 0xff];
}
