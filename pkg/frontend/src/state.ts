/** Editor state machine.  Pure functions: the DOM layer dispatches events
 * and paints whatever state comes back.
 *
 * Invariants maintained here:
 *  - the slider list always mirrors the latest diagnostics' free-parameter
 *    list (existing slider values survive re-validation);
 *  - a render request is only derivable from a state whose equation the
 *    validator accepted.
 */

import type {
  Diagnostics,
  Palette,
  PresetEntry,
  RenderRequest,
  SliderBinding,
} from "./types.js";

export const DEFAULT_PALETTE: Palette = {
  front: "#d8a526",
  back: "#7c4a12",
  background: "#1d2a52",
};

export const PREVIEW_SIZE = 384;

export interface EditorState {
  equation: string;
  sliders: SliderBinding[];
  zoom: number;
  palette: Palette;
  selectedPreset: string | null;
  diagnostics: Diagnostics | null;
}

export function initialState(): EditorState {
  return {
    equation: "",
    sliders: [],
    zoom: 1.0,
    palette: { ...DEFAULT_PALETTE },
    selectedPreset: null,
    diagnostics: null,
  };
}

/** User edited the equation text; diagnostics become stale until the next
 * validation response lands. */
export function setEquation(state: EditorState, text: string): EditorState {
  if (text === state.equation) return state;
  return { ...state, equation: text, selectedPreset: null, diagnostics: null };
}

/** A validation response for `equation` arrived.  Sliders are rebuilt to
 * mirror the free-parameter list exactly; values of surviving parameters
 * are kept, new ones start at the midpoint of their range. */
export function applyDiagnostics(
  state: EditorState,
  equation: string,
  diag: Diagnostics,
): EditorState {
  if (equation !== state.equation) return state; // stale response
  const prev = new Map(state.sliders.map((s) => [s.name, s]));
  const sliders = diag.free_params.map((name): SliderBinding => {
    const kept = prev.get(name);
    if (kept) return kept;
    const [min, max] = diag.param_ranges[name] ?? [0, 1];
    return { name, min, max, value: (min + max) / 2 };
  });
  return { ...state, sliders, diagnostics: diag };
}

export function setSlider(
  state: EditorState,
  name: string,
  value: number,
): EditorState {
  const sliders = state.sliders.map((s) =>
    s.name === name
      ? { ...s, value: Math.min(s.max, Math.max(s.min, value)) }
      : s,
  );
  return { ...state, sliders };
}

export function setSliderRange(
  state: EditorState,
  name: string,
  min: number,
  max: number,
): EditorState {
  const sliders = state.sliders.map((s) =>
    s.name === name
      ? { ...s, min, max, value: Math.min(max, Math.max(min, s.value)) }
      : s,
  );
  return { ...state, sliders };
}

export function setZoom(state: EditorState, zoom: number): EditorState {
  if (!(zoom > 0)) return state;
  return { ...state, zoom };
}

export function setPalette(state: EditorState, palette: Palette): EditorState {
  return { ...state, palette };
}

/** Loading a preset replaces equation, parameter values, and zoom in one
 * step; the slider list still comes from the next validation round so it
 * always reflects the server's parse. */
export function applyPreset(
  state: EditorState,
  preset: PresetEntry,
): EditorState {
  const sliders = Object.entries(preset.params).map(
    ([name, value]): SliderBinding => ({
      name,
      min: Math.min(0, value),
      max: Math.max(1, value),
      value,
    }),
  );
  return {
    ...state,
    equation: preset.equation,
    sliders,
    zoom: preset.zoom,
    selectedPreset: preset.name,
    diagnostics: null,
  };
}

export function isRenderable(state: EditorState): boolean {
  return (
    state.equation.length > 0 &&
    state.diagnostics !== null &&
    state.diagnostics.errors.length === 0
  );
}

export function paramValues(state: EditorState): Record<string, number> {
  return Object.fromEntries(state.sliders.map((s) => [s.name, s.value]));
}

/** Preview request for the image panel.  Throws if the current equation has
 * not been accepted by the validator — the UI never sends a rejected one. */
export function previewRequest(
  state: EditorState,
  size: number = PREVIEW_SIZE,
): RenderRequest {
  if (!isRenderable(state)) {
    throw new Error("equation not validated");
  }
  return {
    equation: state.equation,
    params: paramValues(state),
    zoom: state.zoom,
    width: size,
    height: size,
    colors: state.palette,
    format: "png",
  };
}

export function exportRequest(
  state: EditorState,
  opts: {
    size: number;
    layout?: RenderRequest["layout"];
    format?: "png" | "ppm";
  },
): RenderRequest {
  return {
    ...previewRequest(state, opts.size),
    layout: opts.layout,
    format: opts.format ?? "png",
  };
}
