import { describe, expect, it } from "vitest";

import { parseGuideManifest } from "../src/manifest.js";
import { unzip } from "../src/zip.js";

const GUIDE = `camforge-guide 1
workflow: stacked-slices
name: Laser-Cut Layer Stacking
param: kerf=0.1
param: layer_height=3.0

step: 1
title: Cut the layers
tools: laser cutter; safety glasses
artifacts: sheet_1.svg
links: https://en.wikipedia.org/wiki/Laser_cutting
body: Cut every outline.

step: 2
title: Stack in order
tools: dowel pins
artifacts:${" "}
links:${" "}
body: Stack the layers bottom-up.
`;

describe("guide manifest parser", () => {
  it("parses header, params, and ordered steps", () => {
    const manifest = parseGuideManifest(GUIDE);
    expect(manifest.workflow).toBe("stacked-slices");
    expect(manifest.name).toBe("Laser-Cut Layer Stacking");
    expect(manifest.params).toEqual({ kerf: "0.1", layer_height: "3.0" });
    expect(manifest.steps).toHaveLength(2);
    expect(manifest.steps[0].tools).toEqual(["laser cutter", "safety glasses"]);
    expect(manifest.steps[0].artifactRefs).toEqual(["sheet_1.svg"]);
    expect(manifest.steps[0].externalLinks).toEqual([
      "https://en.wikipedia.org/wiki/Laser_cutting",
    ]);
    expect(manifest.steps[1].artifactRefs).toEqual([]);
    expect(manifest.steps[1].body).toBe("Stack the layers bottom-up.");
  });

  it("rejects unknown schema lines", () => {
    expect(() => parseGuideManifest("guide 2\n")).toThrow(/schema/);
  });

  it("rejects non-contiguous step indices", () => {
    const broken = GUIDE.replace("step: 2", "step: 3");
    expect(() => parseGuideManifest(broken)).toThrow(/contiguous/);
  });
});

function storedZip(entries: Record<string, string>): Uint8Array {
  // hand-built zip with stored (uncompressed) entries, local headers only
  const encoder = new TextEncoder();
  const chunks: Uint8Array[] = [];
  for (const [name, text] of Object.entries(entries)) {
    const nameBytes = encoder.encode(name);
    const data = encoder.encode(text);
    const header = new Uint8Array(30 + nameBytes.length);
    const view = new DataView(header.buffer);
    view.setUint32(0, 0x04034b50, true);
    view.setUint16(4, 20, true); // version needed
    view.setUint16(8, 0, true); // stored
    view.setUint32(18, data.length, true); // compressed size
    view.setUint32(22, data.length, true); // uncompressed size
    view.setUint16(26, nameBytes.length, true);
    header.set(nameBytes, 30);
    chunks.push(header, data);
  }
  const total = chunks.reduce((n, c) => n + c.length, 0);
  const out = new Uint8Array(total);
  let offset = 0;
  for (const chunk of chunks) {
    out.set(chunk, offset);
    offset += chunk.length;
  }
  return out;
}

describe("zip reader", () => {
  it("reads stored entries by name", async () => {
    const bytes = storedZip({ "GUIDE.txt": "hello", "params.txt": "a=1\n" });
    const entries = await unzip(bytes);
    expect([...entries.keys()].sort()).toEqual(["GUIDE.txt", "params.txt"]);
    expect(new TextDecoder().decode(entries.get("GUIDE.txt"))).toBe("hello");
  });

  it("rejects non-zip bytes", async () => {
    await expect(unzip(new Uint8Array([1, 2, 3, 4]))).rejects.toThrow(/zip/);
  });
});
