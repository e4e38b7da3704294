/** DOM wiring: connects the editor state machine, the scheduler, and the
 * HTTP client to a minimal page (see index.html).  All logic lives in the
 * imported modules; this file only reads events and paints state. */

import { ApiError, StudioClient } from "./api.js";
import { debounce, NewestWins } from "./scheduler.js";
import {
  applyDiagnostics,
  applyPreset,
  exportRequest,
  initialState,
  isRenderable,
  previewRequest,
  setEquation,
  setSlider,
  setZoom,
  type EditorState,
} from "./state.js";
import type { RenderResult } from "./types.js";

const VALIDATE_DEBOUNCE_MS = 200;

export function mountStudio(root: Document, baseUrl: string): void {
  const client = new StudioClient(baseUrl);
  let state: EditorState = initialState();

  const equationInput = root.getElementById("equation") as HTMLTextAreaElement;
  const errorsPanel = root.getElementById("errors")!;
  const slidersPanel = root.getElementById("sliders")!;
  const presetsPanel = root.getElementById("presets")!;
  const zoomInput = root.getElementById("zoom") as HTMLInputElement;
  const preview = root.getElementById("preview") as HTMLImageElement;
  const statsPanel = root.getElementById("stats")!;
  const banner = root.getElementById("banner")!;
  const exportButton = root.getElementById("export") as HTMLButtonElement;
  const fibCount = root.getElementById("fib-count") as HTMLInputElement;

  const renderGate = new NewestWins<RenderResult>();

  function update(next: EditorState): void {
    state = next;
    paint();
    if (isRenderable(state)) requestPreview();
  }

  function paint(): void {
    const diag = state.diagnostics;
    errorsPanel.textContent = diag
      ? diag.errors.map((e) => `offset ${e.offset}: ${e.message}`).join("\n")
      : "";
    statsPanel.textContent =
      diag?.degree != null ? `degree ${diag.degree}` : "";
    slidersPanel.replaceChildren(
      ...state.sliders.map((s) => {
        const label = root.createElement("label");
        label.textContent = s.name;
        const input = root.createElement("input");
        input.type = "range";
        input.min = String(s.min);
        input.max = String(s.max);
        input.step = "0.01";
        input.value = String(s.value);
        input.dataset["param"] = s.name;
        // re-render on release, not on every drag tick
        input.addEventListener("change", () =>
          update(setSlider(state, s.name, Number(input.value))),
        );
        label.appendChild(input);
        return label;
      }),
    );
    exportButton.disabled = !isRenderable(state);
  }

  function requestPreview(): void {
    void renderGate.submit(
      (signal) => client.render(previewRequest(state), signal),
      (result) => {
        const blob = new Blob([result.bytes.buffer as ArrayBuffer], {
          type: result.contentType,
        });
        preview.src = URL.createObjectURL(blob);
        if (result.stats) {
          statsPanel.textContent += ` — ${result.stats.wall_ms.toFixed(0)} ms`;
        }
      },
      (err) => {
        banner.textContent =
          err instanceof ApiError ? err.message : "service unreachable";
      },
    );
  }

  const validateLater = debounce((text: string) => {
    client
      .validate(text)
      .then((diag) => update(applyDiagnostics(state, text, diag)))
      .catch(() => {
        banner.textContent = "service unreachable";
      });
  }, VALIDATE_DEBOUNCE_MS);

  equationInput.addEventListener("input", () => {
    update(setEquation(state, equationInput.value));
    validateLater(equationInput.value);
  });

  zoomInput.addEventListener("change", () =>
    update(setZoom(state, Number(zoomInput.value))),
  );

  exportButton.addEventListener("click", () => {
    const n = Number(fibCount.value) || 5;
    void client
      .render(
        exportRequest(state, {
          size: 512,
          layout: {
            mode: "fibonacci",
            count: n,
            canvas: { width: 2048, height: 2048 },
          },
        }),
      )
      .then((result) => {
        const blob = new Blob([result.bytes.buffer as ArrayBuffer], {
          type: result.contentType,
        });
        const a = root.createElement("a");
        a.href = URL.createObjectURL(blob);
        a.download = "motif.png";
        a.click();
      })
      .catch((err) => {
        banner.textContent =
          err instanceof ApiError ? err.message : "export failed";
      });
  });

  void client
    .presets()
    .then((entries) => {
      presetsPanel.replaceChildren(
        ...entries.map((p) => {
          const button = root.createElement("button");
          button.textContent = p.title;
          button.addEventListener("click", () => {
            const next = applyPreset(state, p);
            equationInput.value = next.equation;
            zoomInput.value = String(next.zoom);
            update(next);
            validateLater(next.equation);
            validateLater.flush();
          });
          return button;
        }),
      );
    })
    .catch(() => {
      banner.textContent = "service unreachable";
    });
}
