/** Wire types mirroring the camforge service JSON. */

export type ParamKind = "length" | "count" | "angle" | "enum" | "flag";
export type ParamValue = number | string | boolean;

export interface ParamSpec {
  name: string;
  kind: ParamKind;
  default: ParamValue;
  min: number | null;
  max: number | null;
  description: string;
  choices: string[];
}

export interface DimensionProfile {
  product: Record<string, number>;
  structure: Record<string, boolean>;
  machine: string[];
}

export interface WorkflowDescriptor {
  id: string;
  name: string;
  category: string;
  machines: string[];
  dimensions: DimensionProfile;
  param_schema: ParamSpec[];
  doc_links: string[];
}

export interface MeshStats {
  bbox_min: number[];
  bbox_max: number[];
  volume_mm3: number;
  watertight: boolean;
  degenerate_triangles: number;
}

export interface UploadResponse {
  model_id: string;
  stats: MeshStats;
}

export interface PreviewPart {
  id: string;
  color_role: string;
  vertices: number[][];
  triangles: number[][];
}

export interface PreviewDocument {
  schema: string;
  parts: PreviewPart[];
}

export interface WorkflowWarning {
  code: string;
  severity: "info" | "caution" | "blocker";
  message: string;
}

export interface ComparisonMetrics {
  part_count: number;
  material_area_mm2: number | null;
  material_volume_mm3: number | null;
  total_cut_length_mm: number;
  estimated_fidelity: number;
  machine_set: string[];
}

export interface PreviewResponse {
  model_id: string;
  workflow_id: string;
  preview: PreviewDocument;
  warnings: WorkflowWarning[];
  metrics: ComparisonMetrics;
}

export interface ApiErrorBody {
  error: string;
  detail?: string;
  param?: string;
}

export interface WorkflowFilters {
  keyword?: string;
  machines?: string[];
  product?: Record<string, number>;
  structure?: Record<string, boolean>;
}
