/** Browser bootstrap: wires the store to the workflow browser, slot grid,
 * parameter panels, guide stepper, and bundle download. */

import { ApiClient } from "../api.js";
import { parseGuideManifest, type GuideManifest } from "../manifest.js";
import { AppStore, MAX_SLOTS, type SlotState } from "../state.js";
import type { ParamSpec, ParamValue, WorkflowFilters } from "../types.js";
import { unzip } from "../zip.js";
import { SlotViewer } from "./viewer.js";

const PRODUCT_DIMENSIONS = [
  "load_bearing",
  "high_temperature_tolerance",
  "lightweight",
  "detail_fidelity",
];
const STRUCTURE_DIMENSIONS = [
  "removable_support",
  "integrated_support",
  "flexible",
  "modular",
  "reusable",
];
const MACHINE_TAGS = ["laser_cutter", "printer_3d", "wire_bender", "hot_wire_cutter"];
const MACHINE_ICONS: Record<string, string> = {
  laser_cutter: "[laser]",
  printer_3d: "[3dp]",
  wire_bender: "[wire]",
  hot_wire_cutter: "[hotwire]",
  none: "[hand]",
};

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function toast(message: string): void {
  const node = el("div", "toast", message);
  document.body.appendChild(node);
  setTimeout(() => node.remove(), 3200);
}

export class App {
  private store: AppStore;
  private viewers = new Map<number, SlotViewer>();
  private guides = new Map<number, { manifest: GuideManifest; stepIndex: number }>();
  private bundles = new Map<number, { bytes: Uint8Array; filename: string }>();

  constructor(private root: HTMLElement, baseUrl: string) {
    this.store = new AppStore(new ApiClient(baseUrl));
    this.store.subscribe(() => this.renderSlots());
  }

  async start(): Promise<void> {
    this.root.innerHTML = "";
    const header = el("header");
    header.appendChild(el("h1", "", "camforge"));
    header.appendChild(this.buildUploadControl());
    this.root.appendChild(header);

    const main = el("main");
    const sidebar = el("aside", "browser");
    sidebar.appendChild(this.buildFilterPanel());
    const cards = el("div", "cards");
    cards.id = "cards";
    sidebar.appendChild(cards);
    main.appendChild(sidebar);

    const grid = el("section", "slot-grid");
    grid.id = "slot-grid";
    grid.addEventListener("dragover", (event) => event.preventDefault());
    grid.addEventListener("drop", (event) => {
      event.preventDefault();
      const workflowId = event.dataTransfer?.getData("text/workflow-id");
      if (workflowId) this.drop(workflowId);
    });
    main.appendChild(grid);
    this.root.appendChild(main);

    await this.store.refreshCatalog({});
    this.renderCards();
    this.renderSlots();
  }

  private buildUploadControl(): HTMLElement {
    const wrap = el("div", "upload");
    const input = el("input") as HTMLInputElement;
    input.type = "file";
    input.accept = ".stl";
    const status = el("span", "model-status", "no model loaded");
    input.addEventListener("change", async () => {
      const file = input.files?.[0];
      if (!file) return;
      try {
        const data = new Uint8Array(await file.arrayBuffer());
        const model = await this.store.loadModel(data, file.name);
        const stats = model.stats;
        status.textContent =
          `${model.filename}: ${stats.volume_mm3.toFixed(0)} mm3, ` +
          (stats.watertight ? "watertight" : "not watertight");
        status.classList.toggle("warn", !stats.watertight);
      } catch (error) {
        status.textContent = `upload failed: ${String(
          (error as Error).message ?? error,
        )}`;
        status.classList.add("warn");
      }
    });
    wrap.appendChild(input);
    wrap.appendChild(status);
    return wrap;
  }

  private buildFilterPanel(): HTMLElement {
    const panel = el("div", "filters");
    const keyword = el("input") as HTMLInputElement;
    keyword.placeholder = "keyword filter";
    panel.appendChild(keyword);

    const machineBoxes = new Map<string, HTMLInputElement>();
    const machines = el("div", "filter-group");
    machines.appendChild(el("strong", "", "machines"));
    for (const tag of MACHINE_TAGS) {
      const label = el("label");
      const box = el("input") as HTMLInputElement;
      box.type = "checkbox";
      machineBoxes.set(tag, box);
      label.appendChild(box);
      label.appendChild(document.createTextNode(` ${MACHINE_ICONS[tag]} ${tag}`));
      machines.appendChild(label);
    }
    panel.appendChild(machines);

    const productSelects = new Map<string, HTMLSelectElement>();
    const product = el("div", "filter-group");
    product.appendChild(el("strong", "", "product needs"));
    for (const dim of PRODUCT_DIMENSIONS) {
      const label = el("label", "", `${dim} >= `);
      const select = el("select") as HTMLSelectElement;
      for (const rating of ["any", "1", "2", "3"]) {
        const option = el("option", "", rating) as HTMLOptionElement;
        option.value = rating;
        select.appendChild(option);
      }
      productSelects.set(dim, select);
      label.appendChild(select);
      product.appendChild(label);
    }
    panel.appendChild(product);

    const structureBoxes = new Map<string, HTMLInputElement>();
    const structure = el("div", "filter-group");
    structure.appendChild(el("strong", "", "structure"));
    for (const dim of STRUCTURE_DIMENSIONS) {
      const label = el("label");
      const box = el("input") as HTMLInputElement;
      box.type = "checkbox";
      structureBoxes.set(dim, box);
      label.appendChild(box);
      label.appendChild(document.createTextNode(` ${dim}`));
      structure.appendChild(label);
    }
    panel.appendChild(structure);

    const apply = async () => {
      const filters: WorkflowFilters = { keyword: keyword.value || undefined };
      const selectedMachines = [...machineBoxes.entries()]
        .filter(([, box]) => box.checked)
        .map(([tag]) => tag);
      if (selectedMachines.length) filters.machines = selectedMachines;
      const product: Record<string, number> = {};
      for (const [dim, select] of productSelects) {
        if (select.value !== "any") product[dim] = Number(select.value);
      }
      if (Object.keys(product).length) filters.product = product;
      const structureFilter: Record<string, boolean> = {};
      for (const [dim, box] of structureBoxes) {
        if (box.checked) structureFilter[dim] = true;
      }
      if (Object.keys(structureFilter).length) filters.structure = structureFilter;
      await this.store.refreshCatalog(filters);
      this.renderCards();
    };
    keyword.addEventListener("change", apply);
    panel.addEventListener("change", (event) => {
      if (event.target !== keyword) void apply();
    });
    return panel;
  }

  private renderCards(): void {
    const cards = document.getElementById("cards");
    if (!cards) return;
    cards.innerHTML = "";
    for (const descriptor of this.store.catalog) {
      const card = el("div", "card");
      card.draggable = true;
      card.addEventListener("dragstart", (event) => {
        event.dataTransfer?.setData("text/workflow-id", descriptor.id);
      });
      card.addEventListener("dblclick", () => this.drop(descriptor.id));
      card.appendChild(el("h3", "", descriptor.name));
      card.appendChild(el("p", "card-category", descriptor.category));
      card.appendChild(
        el(
          "p",
          "card-machines",
          descriptor.machines.map((tag) => MACHINE_ICONS[tag] ?? tag).join(" "),
        ),
      );
      const links = el("p", "card-links");
      for (const url of descriptor.doc_links) {
        const anchor = el("a", "", "docs") as HTMLAnchorElement;
        anchor.href = url;
        anchor.target = "_blank";
        anchor.rel = "noreferrer";
        links.appendChild(anchor);
      }
      card.appendChild(links);
      cards.appendChild(card);
    }
  }

  private drop(workflowId: string): void {
    const result = this.store.dragToSlot(workflowId);
    if (!result.accepted) toast(result.reason);
  }

  private renderSlots(): void {
    const grid = document.getElementById("slot-grid");
    if (!grid) return;
    const occupied = this.store.occupiedCount();
    grid.className = `slot-grid occupied-${occupied <= 1 ? 1 : occupied <= 2 ? 2 : 4}`;
    for (const [index, viewer] of [...this.viewers]) {
      if (!this.store.slots[index]) {
        viewer.dispose();
        this.viewers.delete(index);
        this.guides.delete(index);
        this.bundles.delete(index);
      }
    }
    grid.innerHTML = "";
    for (let index = 0; index < MAX_SLOTS; index += 1) {
      const slot = this.store.slots[index];
      if (!slot) continue;
      grid.appendChild(this.renderSlot(slot));
    }
    if (occupied === 0) {
      grid.appendChild(
        el("p", "empty-hint", "drag up to four workflows here to compare them"),
      );
    }
  }

  private renderSlot(slot: SlotState): HTMLElement {
    const panel = el("div", "slot");
    const bar = el("div", "slot-bar");
    const descriptor = this.store.descriptor(slot.workflowId);
    bar.appendChild(el("span", "slot-title", descriptor?.name ?? slot.workflowId));
    const badge = this.warningsBadge(slot);
    if (badge) bar.appendChild(badge);
    const close = el("button", "close", "x");
    close.addEventListener("click", () => this.store.closeSlot(slot.slotIndex));
    bar.appendChild(close);
    panel.appendChild(bar);

    const viewport = el("div", "viewport");
    panel.appendChild(viewport);
    if (slot.status === "loading") {
      viewport.appendChild(el("p", "status", "generating preview..."));
    } else if (slot.status === "error") {
      viewport.appendChild(el("p", "status error", slot.errorMessage ?? "failed"));
    } else if (slot.preview) {
      const preview = slot.preview;
      requestAnimationFrame(() => {
        let viewer = this.viewers.get(slot.slotIndex);
        if (!viewer) {
          viewer = new SlotViewer(viewport);
          this.viewers.set(slot.slotIndex, viewer);
        } else {
          viewer.attach(viewport);
        }
        viewer.setPreview(preview);
      });
    }

    if (slot.metrics) {
      const metrics = el("p", "metrics");
      metrics.textContent =
        `${slot.metrics.part_count} parts - cut ${slot.metrics.total_cut_length_mm.toFixed(0)} mm - ` +
        `fidelity ${slot.metrics.estimated_fidelity.toFixed(2)}`;
      panel.appendChild(metrics);
    }
    panel.appendChild(this.renderParamPanel(slot, descriptor?.param_schema ?? []));
    panel.appendChild(this.renderGuidePanel(slot));
    return panel;
  }

  private warningsBadge(slot: SlotState): HTMLElement | null {
    if (!slot.warnings.length) return null;
    const counts = new Map<string, number>();
    for (const warning of slot.warnings) {
      counts.set(warning.severity, (counts.get(warning.severity) ?? 0) + 1);
    }
    const badge = el(
      "span",
      "badge",
      [...counts.entries()].map(([severity, n]) => `${n} ${severity}`).join(", "),
    );
    badge.title = slot.warnings.map((w) => `[${w.code}] ${w.message}`).join("\n");
    return badge;
  }

  private renderParamPanel(slot: SlotState, schema: ParamSpec[]): HTMLElement {
    const panel = el("details", "params");
    panel.appendChild(el("summary", "", "parameters"));
    for (const spec of schema) {
      const row = el("label", "param-row", `${spec.name} `);
      const note = el("span", "param-error");
      let input: HTMLInputElement | HTMLSelectElement;
      if (spec.kind === "enum") {
        input = el("select") as HTMLSelectElement;
        for (const choice of spec.choices) {
          const option = el("option", "", choice) as HTMLOptionElement;
          option.value = choice;
          input.appendChild(option);
        }
        input.value = String(slot.params[spec.name]);
      } else if (spec.kind === "flag") {
        input = el("input") as HTMLInputElement;
        input.type = "checkbox";
        input.checked = Boolean(slot.params[spec.name]);
      } else {
        input = el("input") as HTMLInputElement;
        input.type = "number";
        input.step = spec.kind === "count" ? "1" : "0.1";
        input.value = String(slot.params[spec.name]);
        input.title = `${spec.description} (${spec.min}..${spec.max})`;
      }
      input.addEventListener("change", async () => {
        let value: ParamValue;
        if (spec.kind === "flag") value = (input as HTMLInputElement).checked;
        else if (spec.kind === "enum") value = input.value;
        else value = Number(input.value);
        const result = await this.store.commitParam(slot.slotIndex, spec.name, value);
        note.textContent = result.ok ? "" : result.message;
      });
      row.appendChild(input);
      row.appendChild(note);
      panel.appendChild(row);
    }
    return panel;
  }

  private renderGuidePanel(slot: SlotState): HTMLElement {
    const panel = el("div", "guide");
    const entry = this.guides.get(slot.slotIndex);
    const buttons = el("div", "guide-buttons");
    const open = el("button", "", entry ? "refresh guide" : "view guide");
    open.addEventListener("click", async () => {
      try {
        const bundle = await this.store.exportSlot(slot.slotIndex);
        this.bundles.set(slot.slotIndex, bundle);
        const entries = await unzip(bundle.bytes);
        const guideBytes = entries.get("GUIDE.txt");
        if (!guideBytes) throw new Error("bundle has no GUIDE.txt");
        const manifest = parseGuideManifest(new TextDecoder().decode(guideBytes));
        this.guides.set(slot.slotIndex, { manifest, stepIndex: 0 });
        this.renderSlots();
      } catch (error) {
        toast(`guide failed: ${String((error as Error).message ?? error)}`);
      }
    });
    buttons.appendChild(open);
    const download = el("button", "", "download bundle");
    download.addEventListener("click", async () => {
      try {
        const bundle =
          this.bundles.get(slot.slotIndex) ??
          (await this.store.exportSlot(slot.slotIndex));
        const blob = new Blob([bundle.bytes as BlobPart], { type: "application/zip" });
        const anchor = el("a") as HTMLAnchorElement;
        anchor.href = URL.createObjectURL(blob);
        anchor.download = bundle.filename;
        anchor.click();
        URL.revokeObjectURL(anchor.href);
      } catch (error) {
        toast(`export failed: ${String((error as Error).message ?? error)}`);
      }
    });
    buttons.appendChild(download);
    panel.appendChild(buttons);

    if (entry) {
      const step = entry.manifest.steps[entry.stepIndex];
      const stepper = el("div", "stepper");
      stepper.appendChild(
        el("h4", "", `step ${step.index}/${entry.manifest.steps.length}: ${step.title}`),
      );
      stepper.appendChild(el("p", "", step.body));
      if (step.tools.length) {
        stepper.appendChild(el("p", "step-tools", `tools: ${step.tools.join(", ")}`));
      }
      if (step.artifactRefs.length) {
        stepper.appendChild(
          el("p", "step-artifacts", `files: ${step.artifactRefs.join(", ")}`),
        );
      }
      for (const url of step.externalLinks) {
        const anchor = el("a", "step-link", url) as HTMLAnchorElement;
        anchor.href = url;
        anchor.target = "_blank";
        anchor.rel = "noreferrer";
        stepper.appendChild(anchor);
      }
      const nav = el("div", "step-nav");
      const back = el("button", "", "back") as HTMLButtonElement;
      back.disabled = entry.stepIndex === 0;
      back.addEventListener("click", () => {
        entry.stepIndex -= 1;
        this.renderSlots();
      });
      const next = el("button", "", "next") as HTMLButtonElement;
      next.disabled = entry.stepIndex === entry.manifest.steps.length - 1;
      next.addEventListener("click", () => {
        entry.stepIndex += 1;
        this.renderSlots();
      });
      nav.appendChild(back);
      nav.appendChild(next);
      stepper.appendChild(nav);
      panel.appendChild(stepper);
    }
    return panel;
  }
}

export function boot(): void {
  const root = document.getElementById("app");
  if (!root) throw new Error("missing #app element");
  const baseUrl = (window as { CAMFORGE_URL?: string }).CAMFORGE_URL ?? "";
  void new App(root, baseUrl).start();
}
