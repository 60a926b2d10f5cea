import { beforeEach, describe, expect, it } from "vitest";

import { ApiClient, buildWorkflowQuery } from "../src/api.js";
import { AppStore, MAX_SLOTS } from "../src/state.js";
import type { PreviewResponse, WorkflowDescriptor } from "../src/types.js";

/** Controllable fake of the camforge service behind the fetch interface. */
class FakeService {
  uploadCount = 0;
  failNextUpload = false;
  previewCalls: { model_id: string; workflow_id: string; params: Record<string, unknown> }[] = [];
  /** when set, preview responses wait to be released manually */
  deferPreviews = false;
  private pending: { resolve: (r: Response) => void; body: PreviewResponse }[] = [];

  catalog: WorkflowDescriptor[] = [
    descriptor("stacked-slices", "Laser-Cut Layer Stacking", ["laser_cutter"]),
    descriptor("interlocking", "Interlocking Slotted Slats", ["laser_cutter"]),
    descriptor("wire-mesh", "Wire Mesh Bending", ["wire_bender"]),
    descriptor("stacked-mold", "Stacked Mold Casting", ["laser_cutter"]),
    descriptor("hotwire-foam", "Hot-Wire Foam Cutting", ["hot_wire_cutter"]),
  ];

  fetch = async (url: string, init?: RequestInit): Promise<Response> => {
    const path = url.replace(/^https?:\/\/[^/]+/, "").split("?")[0];
    if (path === "/models" && init?.method === "POST") {
      if (this.failNextUpload) {
        this.failNextUpload = false;
        return json({ error: "TruncatedFile", detail: "binary STL truncated" }, 400);
      }
      this.uploadCount += 1;
      return json({
        model_id: `m${this.uploadCount}`,
        stats: {
          bbox_min: [0, 0, 0],
          bbox_max: [40, 40, 40],
          volume_mm3: 64000,
          watertight: true,
          degenerate_triangles: 0,
        },
      });
    }
    if (path === "/workflows") {
      return json({ workflows: this.catalog });
    }
    if (path === "/previews" && init?.method === "POST") {
      const request = JSON.parse(String(init.body)) as {
        model_id: string;
        workflow_id: string;
        params: Record<string, unknown>;
      };
      this.previewCalls.push(request);
      const body = previewResponse(request.model_id, request.workflow_id, request.params);
      if (this.deferPreviews) {
        return new Promise<Response>((resolve) => {
          this.pending.push({ resolve, body });
        });
      }
      return json(body);
    }
    if (path === "/exports" && init?.method === "POST") {
      return new Response(new Uint8Array([0x50, 0x4b]).buffer, {
        status: 200,
        headers: { "content-disposition": 'attachment; filename="m1-x.zip"' },
      });
    }
    return json({ error: "UnknownPath", detail: path }, 404);
  };

  /** resolve the i-th pending preview (in issue order) */
  release(index: number): void {
    const entry = this.pending[index];
    if (!entry) throw new Error(`no pending preview ${index}`);
    entry.resolve(json(entry.body));
  }

  pendingCount(): number {
    return this.pending.length;
  }
}

function json(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });
}

function descriptor(id: string, name: string, machines: string[]): WorkflowDescriptor {
  return {
    id,
    name,
    category: "Other",
    machines,
    dimensions: { product: {}, structure: {}, machine: machines },
    param_schema: [
      {
        name: "layer_height",
        kind: "length",
        default: 3.0,
        min: 0.2,
        max: 100.0,
        description: "sheet thickness",
        choices: [],
      },
      {
        name: "dowel_count",
        kind: "count",
        default: 2,
        min: 0,
        max: 8,
        description: "dowels",
        choices: [],
      },
    ],
    doc_links: [],
  };
}

function previewResponse(
  modelId: string,
  workflowId: string,
  params: Record<string, unknown>,
): PreviewResponse {
  const layerHeight = Number(params.layer_height ?? 3);
  const partCount = Math.ceil(40 / layerHeight);
  return {
    model_id: modelId,
    workflow_id: workflowId,
    preview: {
      schema: "camforge-preview/1",
      parts: Array.from({ length: partCount }, (_, i) => ({
        id: `L${i + 1}`,
        color_role: "layer",
        vertices: [
          [0, 0, 0],
          [1, 0, 0],
          [0, 1, 0],
        ],
        triangles: [[0, 1, 2]],
      })),
    },
    warnings: [],
    metrics: {
      part_count: partCount,
      material_area_mm2: null,
      material_volume_mm3: null,
      total_cut_length_mm: 100,
      estimated_fidelity: 1,
      machine_set: ["laser_cutter"],
    },
  };
}

const CUBE = new Uint8Array([1, 2, 3]);

async function readyStore(service: FakeService): Promise<AppStore> {
  const store = new AppStore(new ApiClient("", service.fetch));
  await store.refreshCatalog({});
  await store.loadModel(CUBE, "cube.stl");
  return store;
}

function flush(): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, 0));
}

describe("slot grid rules", () => {
  let service: FakeService;

  beforeEach(() => {
    service = new FakeService();
  });

  it("accepts up to four workflows and rejects the fifth drag", async () => {
    const store = await readyStore(service);
    const ids = ["stacked-slices", "interlocking", "wire-mesh", "stacked-mold"];
    for (const id of ids) {
      expect(store.dragToSlot(id).accepted).toBe(true);
    }
    expect(store.occupiedCount()).toBe(MAX_SLOTS);
    const fifth = store.dragToSlot("hotwire-foam");
    expect(fifth.accepted).toBe(false);
    expect(store.occupiedCount()).toBe(MAX_SLOTS);
    expect(store.slots.map((slot) => slot?.workflowId)).toEqual(ids);
    store.assertInvariants();
  });

  it("rejects a drop before any model is loaded", async () => {
    const store = new AppStore(new ApiClient("", service.fetch));
    await store.refreshCatalog({});
    const result = store.dragToSlot("stacked-slices");
    expect(result.accepted).toBe(false);
  });

  it("a failed upload changes neither the model nor the slots", async () => {
    const store = await readyStore(service);
    store.dragToSlot("stacked-slices");
    await flush();
    const previousModel = store.model;
    service.failNextUpload = true;
    await expect(store.loadModel(new Uint8Array([0]), "bad.stl")).rejects.toMatchObject({
      status: 400,
      body: { error: "TruncatedFile" },
    });
    expect(store.model).toBe(previousModel);
    expect(store.slots[0]?.workflowId).toBe("stacked-slices");
    store.assertInvariants();
  });

  it("closing a slot frees it and leaves the others untouched", async () => {
    const store = await readyStore(service);
    store.dragToSlot("stacked-slices");
    store.dragToSlot("interlocking");
    store.dragToSlot("wire-mesh");
    await flush();
    store.closeSlot(1);
    expect(store.slots[1]).toBeNull();
    expect(store.slots[0]?.workflowId).toBe("stacked-slices");
    expect(store.slots[2]?.workflowId).toBe("wire-mesh");
    // freed slot is reusable
    const again = store.dragToSlot("stacked-mold");
    expect(again).toEqual({ accepted: true, slotIndex: 1 });
    store.assertInvariants();
  });

  it("a second upload replaces the model and clears all slots", async () => {
    const store = await readyStore(service);
    store.dragToSlot("stacked-slices");
    store.dragToSlot("wire-mesh");
    await flush();
    const second = await store.loadModel(CUBE, "cube2.stl");
    expect(second.id).toBe("m2");
    expect(store.occupiedCount()).toBe(0);
    store.assertInvariants();
  });

  it("every occupied slot references the current model", async () => {
    const store = await readyStore(service);
    store.dragToSlot("stacked-slices");
    store.dragToSlot("interlocking");
    await flush();
    for (const slot of store.slots) {
      if (slot) expect(slot.modelId).toBe(store.model?.id);
    }
    store.assertInvariants();
  });
});

describe("parameter commits", () => {
  let service: FakeService;

  beforeEach(() => {
    service = new FakeService();
  });

  it("one commit issues exactly one preview request", async () => {
    const store = await readyStore(service);
    store.dragToSlot("stacked-slices");
    await flush();
    const before = service.previewCalls.length;
    expect(before).toBe(1); // the drop itself
    const result = await store.commitParam(0, "layer_height", 3);
    expect(result.ok).toBe(true);
    expect(service.previewCalls.length).toBe(before + 1);
    expect(store.previewRequestCount).toBe(before + 1);
  });

  it("layer height change updates the rendered part count", async () => {
    const store = await readyStore(service);
    store.dragToSlot("stacked-slices");
    await flush();
    expect(store.slots[0]?.preview?.parts.length).toBe(Math.ceil(40 / 3));
    await store.commitParam(0, "layer_height", 2);
    expect(store.slots[0]?.preview?.parts.length).toBe(20);
    await store.commitParam(0, "layer_height", 3);
    expect(store.slots[0]?.preview?.parts.length).toBe(14);
  });

  it("out-of-range edits are rejected client-side with no request", async () => {
    const store = await readyStore(service);
    store.dragToSlot("stacked-slices");
    await flush();
    const before = service.previewCalls.length;
    const result = await store.commitParam(0, "layer_height", -1);
    expect(result.ok).toBe(false);
    if (!result.ok) expect(result.message).toContain("between 0.2 and 100");
    expect(service.previewCalls.length).toBe(before);
    // non-integer count rejected too
    const countResult = await store.commitParam(0, "dowel_count", 1.5);
    expect(countResult.ok).toBe(false);
    expect(service.previewCalls.length).toBe(before);
  });

  it("rapid edits render the final value; stale responses never render", async () => {
    const store = await readyStore(service);
    store.dragToSlot("stacked-slices");
    await flush();

    service.deferPreviews = true;
    const commits = [
      store.commitParam(0, "layer_height", 2),
      store.commitParam(0, "layer_height", 3),
      store.commitParam(0, "layer_height", 4),
    ];
    await flush();
    expect(service.pendingCount()).toBe(3);
    // resolve out of order: final request first, then the stale ones
    service.release(2);
    await flush();
    expect(store.slots[0]?.preview?.parts.length).toBe(10); // ceil(40/4)
    service.release(0);
    service.release(1);
    await Promise.all(commits);
    expect(store.slots[0]?.preview?.parts.length).toBe(10);
    expect(store.slots[0]?.status).toBe("ready");
    expect(store.slots[0]?.params.layer_height).toBe(4);
  });

  it("a response for a closed slot is dropped", async () => {
    const store = await readyStore(service);
    service.deferPreviews = true;
    store.dragToSlot("stacked-slices");
    await flush();
    store.closeSlot(0);
    service.release(0);
    await flush();
    expect(store.slots[0]).toBeNull();
    store.assertInvariants();
  });
});

describe("filter query construction", () => {
  it("is a pure mapping of the filter state", () => {
    expect(buildWorkflowQuery({})).toBe("");
    expect(buildWorkflowQuery({ keyword: "mold" })).toBe("?keyword=mold");
    expect(
      buildWorkflowQuery({ machines: ["laser_cutter", "wire_bender"] }),
    ).toContain("machines=laser_cutter%2Cwire_bender");
    const query = buildWorkflowQuery({
      product: { load_bearing: 2 },
      structure: { reusable: true },
    });
    expect(query).toContain("load_bearing=2");
    expect(query).toContain("reusable=true");
  });
});
