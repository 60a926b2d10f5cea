/** Parser for the bundle's GUIDE.txt (camforge-guide schema version 1). */

export interface GuideStep {
  index: number;
  title: string;
  body: string;
  artifactRefs: string[];
  externalLinks: string[];
  tools: string[];
}

export interface GuideManifest {
  workflow: string;
  name: string;
  params: Record<string, string>;
  steps: GuideStep[];
}

const SCHEMA_LINE = "camforge-guide 1";

function splitList(value: string): string[] {
  return value.split("; ").filter((item) => item.length > 0);
}

export function parseGuideManifest(text: string): GuideManifest {
  const lines = text.replace(/\n+$/, "").split("\n");
  if (lines[0] !== SCHEMA_LINE) {
    throw new Error(`unexpected guide schema line: ${lines[0]}`);
  }
  const manifest: GuideManifest = { workflow: "", name: "", params: {}, steps: [] };
  let current: GuideStep | null = null;
  for (const line of lines.slice(1)) {
    if (!line.trim()) continue;
    const sep = line.indexOf(": ");
    if (sep < 0) continue;
    const key = line.slice(0, sep);
    const value = line.slice(sep + 2);
    switch (key) {
      case "workflow":
        manifest.workflow = value;
        break;
      case "name":
        manifest.name = value;
        break;
      case "param": {
        const eq = value.indexOf("=");
        if (eq >= 0) manifest.params[value.slice(0, eq)] = value.slice(eq + 1);
        break;
      }
      case "step":
        current = {
          index: Number(value),
          title: "",
          body: "",
          artifactRefs: [],
          externalLinks: [],
          tools: [],
        };
        manifest.steps.push(current);
        break;
      case "title":
        if (current) current.title = value;
        break;
      case "tools":
        if (current) current.tools = splitList(value);
        break;
      case "artifacts":
        if (current) current.artifactRefs = splitList(value);
        break;
      case "links":
        if (current) current.externalLinks = splitList(value);
        break;
      case "body":
        if (current) current.body = value;
        break;
    }
  }
  if (manifest.steps.length === 0) throw new Error("guide has no steps");
  manifest.steps.forEach((step, i) => {
    if (step.index !== i + 1) throw new Error("step indices not contiguous");
  });
  return manifest;
}
