/** Application state: loaded model, catalog, and the 4-slot comparison grid.
 *
 * All slot rules live here, DOM-free, so they are directly testable:
 * at most four occupied slots, every occupied slot tied to the current
 * model, one preview request per parameter commit, and stale responses
 * discarded by sequence number.
 */

import { ApiClient, ApiError } from "./api.js";
import type {
  ComparisonMetrics,
  MeshStats,
  ParamSpec,
  ParamValue,
  PreviewDocument,
  WorkflowDescriptor,
  WorkflowFilters,
  WorkflowWarning,
} from "./types.js";

export const MAX_SLOTS = 4;

export type SlotStatus = "loading" | "ready" | "error";

export interface SlotState {
  slotIndex: number;
  modelId: string;
  workflowId: string;
  params: Record<string, ParamValue>;
  status: SlotStatus;
  preview: PreviewDocument | null;
  warnings: WorkflowWarning[];
  metrics: ComparisonMetrics | null;
  errorMessage: string | null;
  seq: number;
  renderedSeq: number;
}

export interface LoadedModel {
  id: string;
  filename: string;
  stats: MeshStats;
}

export type DropResult =
  | { accepted: true; slotIndex: number }
  | { accepted: false; reason: string };

export type CommitResult =
  | { ok: true }
  | { ok: false; message: string };

export class AppStore {
  model: LoadedModel | null = null;
  catalog: WorkflowDescriptor[] = [];
  filters: WorkflowFilters = {};
  slots: (SlotState | null)[] = [null, null, null, null];
  /** preview requests issued, observable by tests */
  previewRequestCount = 0;

  private listeners = new Set<() => void>();

  constructor(private api: ApiClient) {}

  subscribe(listener: () => void): () => void {
    this.listeners.add(listener);
    return () => this.listeners.delete(listener);
  }

  private emit(): void {
    for (const listener of this.listeners) listener();
  }

  occupiedCount(): number {
    return this.slots.filter((slot) => slot !== null).length;
  }

  descriptor(workflowId: string): WorkflowDescriptor | undefined {
    return this.catalog.find((descriptor) => descriptor.id === workflowId);
  }

  async refreshCatalog(filters: WorkflowFilters = this.filters): Promise<void> {
    this.filters = filters;
    this.catalog = await this.api.listWorkflows(filters);
    this.emit();
  }

  /** Uploading a model replaces the previous one and clears every slot. */
  async loadModel(data: Uint8Array, filename: string): Promise<LoadedModel> {
    const response = await this.api.uploadModel(data);
    this.model = { id: response.model_id, filename, stats: response.stats };
    this.slots = [null, null, null, null];
    this.emit();
    return this.model;
  }

  defaultParams(workflowId: string): Record<string, ParamValue> {
    const descriptor = this.descriptor(workflowId);
    const params: Record<string, ParamValue> = {};
    for (const spec of descriptor?.param_schema ?? []) {
      params[spec.name] = spec.default;
    }
    return params;
  }

  /** Drop a workflow card onto the grid; rejected when full or no model. */
  dragToSlot(workflowId: string, requestedIndex?: number): DropResult {
    if (!this.model) {
      return { accepted: false, reason: "load a model before comparing workflows" };
    }
    if (!this.descriptor(workflowId)) {
      return { accepted: false, reason: `unknown workflow ${workflowId}` };
    }
    let slotIndex = -1;
    if (
      requestedIndex !== undefined &&
      requestedIndex >= 0 &&
      requestedIndex < MAX_SLOTS &&
      this.slots[requestedIndex] === null
    ) {
      slotIndex = requestedIndex;
    } else {
      slotIndex = this.slots.findIndex((slot) => slot === null);
    }
    if (slotIndex < 0) {
      return { accepted: false, reason: "all four comparison slots are in use" };
    }
    const slot: SlotState = {
      slotIndex,
      modelId: this.model.id,
      workflowId,
      params: this.defaultParams(workflowId),
      status: "loading",
      preview: null,
      warnings: [],
      metrics: null,
      errorMessage: null,
      seq: 0,
      renderedSeq: 0,
    };
    this.slots[slotIndex] = slot;
    this.emit();
    void this.requestPreview(slot);
    return { accepted: true, slotIndex };
  }

  closeSlot(slotIndex: number): void {
    this.slots[slotIndex] = null;
    this.emit();
  }

  /** Client-side schema validation; returns an error message or null. */
  validateParam(workflowId: string, name: string, value: ParamValue): string | null {
    const descriptor = this.descriptor(workflowId);
    const spec = descriptor?.param_schema.find((entry) => entry.name === name);
    if (!spec) return `unknown parameter ${name}`;
    return validateAgainstSpec(spec, value);
  }

  /**
   * Commit one parameter edit: exactly one preview request when valid,
   * none when validation fails.
   */
  async commitParam(
    slotIndex: number,
    name: string,
    value: ParamValue,
  ): Promise<CommitResult> {
    const slot = this.slots[slotIndex];
    if (!slot) return { ok: false, message: "slot is empty" };
    const message = this.validateParam(slot.workflowId, name, value);
    if (message) return { ok: false, message };
    slot.params = { ...slot.params, [name]: value };
    this.emit();
    await this.requestPreview(slot);
    return { ok: true };
  }

  private async requestPreview(slot: SlotState): Promise<void> {
    const seq = ++slot.seq;
    slot.status = "loading";
    this.previewRequestCount += 1;
    this.emit();
    try {
      const response = await this.api.createPreview(
        slot.modelId,
        slot.workflowId,
        slot.params,
      );
      if (this.slots[slot.slotIndex] !== slot || seq !== slot.seq) {
        return; // superseded or closed: never render stale responses
      }
      slot.status = "ready";
      slot.preview = response.preview;
      slot.warnings = response.warnings;
      slot.metrics = response.metrics;
      slot.errorMessage = null;
      slot.renderedSeq = seq;
    } catch (error) {
      if (this.slots[slot.slotIndex] !== slot || seq !== slot.seq) return;
      slot.status = "error";
      slot.errorMessage =
        error instanceof ApiError ? error.message : String(error);
      slot.renderedSeq = seq;
    }
    this.emit();
  }

  async exportSlot(
    slotIndex: number,
  ): Promise<{ bytes: Uint8Array; filename: string }> {
    const slot = this.slots[slotIndex];
    if (!slot) throw new Error("slot is empty");
    return this.api.createExport(slot.modelId, slot.workflowId, slot.params);
  }

  /** Structural invariants; throws when violated (used by tests). */
  assertInvariants(): void {
    if (this.slots.length !== MAX_SLOTS) {
      throw new Error(`slot array must stay length ${MAX_SLOTS}`);
    }
    for (const slot of this.slots) {
      if (slot && (!this.model || slot.modelId !== this.model.id)) {
        throw new Error("occupied slot references a stale model");
      }
    }
  }
}

export function validateAgainstSpec(spec: ParamSpec, value: ParamValue): string | null {
  switch (spec.kind) {
    case "length":
    case "angle":
    case "count": {
      if (typeof value !== "number" || !Number.isFinite(value)) {
        return `${spec.name} expects a number`;
      }
      if (spec.kind === "count" && !Number.isInteger(value)) {
        return `${spec.name} expects an integer`;
      }
      if (spec.min !== null && value < spec.min) {
        return `${spec.name} must be between ${spec.min} and ${spec.max}`;
      }
      if (spec.max !== null && value > spec.max) {
        return `${spec.name} must be between ${spec.min} and ${spec.max}`;
      }
      return null;
    }
    case "enum":
      return spec.choices.includes(String(value))
        ? null
        : `${spec.name} must be one of ${spec.choices.join(", ")}`;
    case "flag":
      return typeof value === "boolean" ? null : `${spec.name} expects true/false`;
    default:
      return `unknown parameter kind ${spec.kind as string}`;
  }
}
