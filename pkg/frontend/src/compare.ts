import { Api } from "./api.js";
import { colorFor } from "./palette.js";
import { clusterName } from "./scatter.js";
import { BundleManifest, ClustersPayload } from "./types.js";

/** Two bundles side by side: per-bundle legend and dispersion table.
 *
 * Every table cell is a pass-through of the service payload; dispersion in
 * particular is shown exactly as parsed, with no rounding or formatting.
 */
export class CompareView {
  readonly warning: HTMLDivElement;
  readonly banner: HTMLDivElement;
  readonly panels: [HTMLDivElement, HTMLDivElement];

  constructor(root: HTMLElement, private readonly apis: [Api, Api]) {
    this.banner = document.createElement("div");
    this.banner.className = "banner error";
    this.banner.hidden = true;
    this.warning = document.createElement("div");
    this.warning.className = "banner warning";
    this.warning.hidden = true;
    const row = document.createElement("div");
    row.className = "compare-row";
    this.panels = [document.createElement("div"), document.createElement("div")];
    for (const panel of this.panels) {
      panel.className = "compare-panel";
      row.append(panel);
    }
    root.append(this.banner, this.warning, row);
  }

  async load(): Promise<void> {
    this.banner.hidden = true;
    this.warning.hidden = true;
    let sides: Array<[BundleManifest, ClustersPayload]>;
    try {
      sides = await Promise.all(
        this.apis.map(async (api): Promise<[BundleManifest, ClustersPayload]> => {
          const [manifest, clusters] = await Promise.all([api.manifest(), api.clusters()]);
          return [manifest, clusters];
        }),
      );
    } catch (err) {
      this.banner.textContent = `failed to load bundles: ${String(err)}`;
      this.banner.hidden = false;
      return;
    }
    if (sides[0][0].corpus.sha256 !== sides[1][0].corpus.sha256) {
      this.warning.textContent =
        "bundles were built from different corpora; clusters are not directly comparable";
      this.warning.hidden = false;
    }
    for (let i = 0; i < 2; i++) {
      this.renderPanel(this.panels[i], sides[i][0], sides[i][1]);
    }
  }

  private renderPanel(
    panel: HTMLDivElement,
    manifest: BundleManifest,
    clusters: ClustersPayload,
  ): void {
    panel.textContent = "";
    const heading = document.createElement("h3");
    heading.textContent = `k=${clusters.k}, seed ${manifest.seed}`;
    const legend = document.createElement("ul");
    legend.className = "legend";
    for (const c of clusters.clusters) {
      const li = document.createElement("li");
      li.dataset.clusterId = String(c.id);
      const swatch = document.createElement("span");
      swatch.className = "swatch";
      swatch.style.backgroundColor = colorFor(c.id);
      const name = document.createElement("span");
      name.textContent = clusterName(c);
      li.append(swatch, name);
      legend.append(li);
    }
    const table = document.createElement("table");
    table.className = "dispersion-table";
    const head = table.createTHead().insertRow();
    for (const title of ["cluster", "label", "size", "dispersion"]) {
      const th = document.createElement("th");
      th.textContent = title;
      head.append(th);
    }
    const body = table.createTBody();
    for (const c of clusters.clusters) {
      const row = body.insertRow();
      row.insertCell().textContent = String(c.id);
      row.insertCell().textContent = c.label ?? "";
      row.insertCell().textContent = String(c.size);
      const cell = row.insertCell();
      cell.className = "dispersion";
      cell.textContent = String(c.dispersion);
    }
    panel.append(heading, legend, table);
  }
}
