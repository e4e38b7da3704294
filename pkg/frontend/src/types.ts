/** Shared wire and editor types for the studio. */

export interface EquationIssue {
  message: string;
  offset: number;
}

export interface Diagnostics {
  errors: EquationIssue[];
  free_params: string[];
  degree: number | null;
  param_ranges: Record<string, [number, number]>;
  render_stats?: RenderStats | null;
}

export interface RenderStats {
  hit_count: number;
  eval_error_count: number;
  wall_ms: number;
}

export interface PresetEntry {
  name: string;
  title: string;
  equation: string;
  params: Record<string, number>;
  zoom: number;
}

export interface Palette {
  front: string;
  back: string;
  background: string;
}

export interface LayoutSpec {
  mode: "fibonacci" | "grid";
  count?: number;
  rows?: number;
  cols?: number;
  mirror?: boolean;
  canvas?: { width: number; height: number };
}

/** Placement rectangle [x, y, width, height] on the export canvas. */
export type Placement = [number, number, number, number];

export interface SliderBinding {
  name: string;
  min: number;
  max: number;
  value: number;
}

export interface RenderRequest {
  equation: string;
  params: Record<string, number>;
  zoom: number;
  width: number;
  height: number;
  colors?: Palette;
  lit?: boolean;
  format?: "png" | "ppm";
  layout?: LayoutSpec;
}

export interface RenderResult {
  bytes: Uint8Array;
  contentType: string;
  stats: RenderStats | null;
  placements: Placement[] | null;
}
