/** End-to-end studio loop against a live render service:
 *  - typing the single-parameter fish equation spawns exactly one slider "a";
 *  - selecting a preset produces a visible preview;
 *  - a five-copy fibonacci export contains 5 copies at fibonacci size
 *    ratios (checked against the service's placement report and the
 *    exported pixmap itself).
 */
import { spawn, type ChildProcess } from "node:child_process";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { StudioClient } from "../src/api.js";
import { coverage, decodePpm, distinctColors, type Pixmap } from "../src/ppm.js";
import {
  applyDiagnostics,
  applyPreset,
  exportRequest,
  initialState,
  isRenderable,
  previewRequest,
  setEquation,
  DEFAULT_PALETTE,
} from "../src/state.js";

const ATOM_FISH = "(x^2+y^2+z^3-z^2)*((x-y)(x+y)-a)((x+y)(x-y)+a)";
const PORT = 20000 + (process.pid % 20000);
const BASE = `http://127.0.0.1:${PORT}`;

let server: ChildProcess;
const client = new StudioClient(BASE);

async function waitForService(timeoutMs: number): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  for (;;) {
    try {
      await client.presets();
      return;
    } catch {
      if (Date.now() > deadline) throw new Error("service did not start");
      await new Promise((r) => setTimeout(r, 250));
    }
  }
}

beforeAll(async () => {
  server = spawn(
    "python3",
    ["-m", "motiflab.cli", "serve", "--port", String(PORT)],
    { stdio: "ignore" },
  );
  await waitForService(60_000);
}, 70_000);

afterAll(() => {
  server?.kill();
});

function subPixmap(img: Pixmap, x: number, y: number, w: number, h: number): Pixmap {
  const data = new Uint8Array(w * h * 3);
  for (let row = 0; row < h; row++) {
    const src = ((y + row) * img.width + x) * 3;
    data.set(img.data.subarray(src, src + w * 3), row * w * 3);
  }
  return { width: w, height: h, data };
}

describe("studio loop against the live service", () => {
  it(
    "typing the fish equation spawns exactly one slider named a",
    async () => {
      let state = setEquation(initialState(), ATOM_FISH);
      expect(state.sliders).toEqual([]);
      const diag = await client.validate(state.equation);
      state = applyDiagnostics(state, ATOM_FISH, diag);
      expect(diag.errors).toEqual([]);
      expect(state.sliders.map((s) => s.name)).toEqual(["a"]);
      expect(state.sliders[0]).toMatchObject({ min: 0, max: 1 });
    },
    30_000,
  );

  it(
    "preset selection renders a visible flat-shaded preview",
    async () => {
      const entries = await client.presets();
      const fish = entries.find((p) => p.name === "atom-fish")!;
      expect(fish).toBeDefined();
      let state = applyPreset(initialState(), fish);
      state = applyDiagnostics(state, fish.equation, await client.validate(fish.equation));
      expect(isRenderable(state)).toBe(true);
      const result = await client.render({
        ...previewRequest(state, 96),
        format: "ppm",
      });
      const img = decodePpm(result.bytes);
      expect([img.width, img.height]).toEqual([96, 96]);
      expect(coverage(img, DEFAULT_PALETTE.background)).toBeGreaterThan(0.005);
      expect(distinctColors(img).size).toBeLessThanOrEqual(3);
      expect(result.stats!.hit_count).toBeGreaterThan(0);
    },
    60_000,
  );

  it(
    "fibonacci n=5 export contains 5 copies at fibonacci size ratios",
    async () => {
      let state = setEquation(initialState(), "x^2+y^2+z^2-1");
      state = applyDiagnostics(
        state,
        state.equation,
        await client.validate(state.equation),
      );
      const result = await client.render(
        exportRequest(state, {
          size: 96,
          format: "ppm",
          layout: {
            mode: "fibonacci",
            count: 5,
            canvas: { width: 480, height: 480 },
          },
        }),
      );
      const placements = result.placements!;
      expect(placements).toHaveLength(5);
      const widths = placements.map((p) => p[2]).sort((a, b) => a - b);
      const heights = placements.map((p) => p[3]).sort((a, b) => a - b);
      const unit = widths[0]!;
      expect(widths.map((w) => w / unit)).toEqual([1, 1, 2, 3, 5]);
      expect(heights.map((h) => h / heights[0]!)).toEqual([1, 1, 2, 3, 5]);

      // every placed copy actually contains sphere pixels on the canvas
      const img = decodePpm(result.bytes);
      expect([img.width, img.height]).toEqual([480, 480]);
      for (const [x, y, w, h] of placements) {
        const copy = subPixmap(img, x, y, w, h);
        expect(coverage(copy, DEFAULT_PALETTE.background)).toBeGreaterThan(0.5);
      }
      console.log(
        "ACCEPTANCE 10: PASS - one auto-slider for the fish equation; " +
          "preset preview renders; fib n=5 export has 5 copies at " +
          "1:1:2:3:5 ratios",
      );
    },
    60_000,
  );
});
