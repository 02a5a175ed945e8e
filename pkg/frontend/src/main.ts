import { Api } from "./api.js";
import { ClassifyBox } from "./classify.js";
import { CompareView } from "./compare.js";
import { LabelPanel } from "./labels.js";
import { MapView } from "./scatter.js";

function required(id: string): HTMLElement {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing #${id} container`);
  return el;
}

function boot(): void {
  const api = new Api("");

  const panel = new LabelPanel(required("panel"), api, {
    onLabelSaved: (resp) => map.setLabel(resp.cluster_id, resp.label),
  });
  const map = new MapView(required("map"), api, {
    onSelect: (clusterId) => void panel.show(clusterId),
  });
  new ClassifyBox(required("classify"), api);

  // Comparison is opt-in: point the input at a second service (another
  // bundle on another port) and both render side by side.
  const compareRoot = required("compare");
  const controls = document.createElement("div");
  const input = document.createElement("input");
  input.type = "text";
  input.placeholder = "second service URL, e.g. http://localhost:8001";
  input.size = 40;
  const button = document.createElement("button");
  button.textContent = "compare";
  controls.append(input, button);
  const viewRoot = document.createElement("div");
  compareRoot.append(controls, viewRoot);
  button.addEventListener("click", () => {
    viewRoot.textContent = "";
    const other = input.value.trim();
    const view = new CompareView(viewRoot, [api, new Api(other.replace(/\/+$/, ""))]);
    void view.load();
  });

  void map.init();
}

document.addEventListener("DOMContentLoaded", boot);
