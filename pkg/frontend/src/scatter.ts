import { Api } from "./api.js";
import { colorFor } from "./palette.js";
import { ClustersPayload, ClusterSummary, PointRecord } from "./types.js";

const PAD = 24;
const POINT_R = 3;
const HIT_R = 8;

export interface MapOptions {
  width?: number;
  height?: number;
  onSelect?: (clusterId: number) => void;
}

export function clusterName(c: ClusterSummary): string {
  return c.label ?? `cluster ${c.id}`;
}

/** Scatter map of the projected corpus.
 *
 * Points go on a canvas (corpora can be large); the legend, tooltip, radius
 * control and error banner are plain DOM. Every number shown comes straight
 * from a service payload.
 */
export class MapView {
  readonly canvas: HTMLCanvasElement;
  readonly legend: HTMLUListElement;
  readonly banner: HTMLDivElement;
  readonly tooltip: HTMLDivElement;
  readonly slider: HTMLInputElement;
  readonly sliderValue: HTMLSpanElement;
  readonly filterToggle: HTMLInputElement;

  private readonly ctx: CanvasRenderingContext2D | null;
  private readonly onSelect?: (clusterId: number) => void;
  private points: PointRecord[] = [];
  private clusters: ClustersPayload | null = null;
  private screen: Array<[number, number]> = [];
  private selectedId: number | null = null;

  constructor(root: HTMLElement, private readonly api: Api, opts: MapOptions = {}) {
    this.onSelect = opts.onSelect;

    this.banner = document.createElement("div");
    this.banner.className = "banner error";
    this.banner.hidden = true;

    const controls = document.createElement("div");
    controls.className = "map-controls";
    this.filterToggle = document.createElement("input");
    this.filterToggle.type = "checkbox";
    this.filterToggle.checked = true;
    this.slider = document.createElement("input");
    this.slider.type = "range";
    this.slider.min = "0";
    this.slider.max = "1";
    this.slider.step = "0.01";
    this.sliderValue = document.createElement("span");
    this.sliderValue.className = "slider-value";
    const toggleLabel = document.createElement("label");
    toggleLabel.append(this.filterToggle, " radius <= ");
    controls.append(toggleLabel, this.slider, this.sliderValue);

    this.canvas = document.createElement("canvas");
    this.canvas.width = opts.width ?? 640;
    this.canvas.height = opts.height ?? 480;
    this.ctx = this.canvas.getContext("2d");

    this.tooltip = document.createElement("div");
    this.tooltip.className = "tooltip";
    this.tooltip.hidden = true;

    this.legend = document.createElement("ul");
    this.legend.className = "legend";

    root.append(this.banner, controls, this.canvas, this.tooltip, this.legend);

    this.slider.addEventListener("input", () => {
      this.sliderValue.textContent = this.slider.value;
    });
    this.slider.addEventListener("change", () => {
      this.filterToggle.checked = true;
      void this.load(Number(this.slider.value));
    });
    this.filterToggle.addEventListener("change", () => {
      void this.load(this.filterToggle.checked ? Number(this.slider.value) : undefined);
    });
    this.canvas.addEventListener("mousemove", (ev) => this.hover(ev));
    this.canvas.addEventListener("click", (ev) => {
      const hit = this.hitTest(ev);
      if (hit !== null) this.select(this.points[hit].cluster_id);
    });
  }

  /** First load: read plot_radius from the service and filter by it. */
  async init(): Promise<void> {
    this.banner.hidden = true;
    let clusters: ClustersPayload;
    try {
      clusters = await this.api.clusters();
    } catch (err) {
      this.fail(err);
      return;
    }
    this.clusters = clusters;
    const r = clusters.plot_radius;
    this.slider.max = String(Math.max(1, r * 4));
    this.slider.value = String(r);
    this.sliderValue.textContent = this.slider.value;
    await this.load(r);
  }

  /** Refetch points (optionally filtered) and cluster labels, then redraw. */
  async load(radius?: number): Promise<void> {
    this.banner.hidden = true;
    try {
      const [points, clusters] = await Promise.all([
        this.api.points(radius),
        this.api.clusters(),
      ]);
      this.points = points;
      this.clusters = clusters;
    } catch (err) {
      this.fail(err);
      return;
    }
    this.render();
  }

  /** Update one cluster's name locally (after a successful label PUT). */
  setLabel(clusterId: number, label: string): void {
    const c = this.clusters?.clusters.find((x) => x.id === clusterId);
    if (c) {
      c.label = label;
      this.renderLegend();
    }
  }

  select(clusterId: number): void {
    this.selectedId = clusterId;
    this.renderLegend();
    this.onSelect?.(clusterId);
  }

  private fail(err: unknown): void {
    this.banner.textContent = `failed to load map: ${String(err)}`;
    this.banner.hidden = false;
  }

  private render(): void {
    this.project();
    if (this.ctx) {
      const { width, height } = this.canvas;
      this.ctx.clearRect(0, 0, width, height);
      for (let i = 0; i < this.points.length; i++) {
        const [sx, sy] = this.screen[i];
        this.ctx.fillStyle = colorFor(this.points[i].cluster_id);
        this.ctx.beginPath();
        this.ctx.arc(sx, sy, POINT_R, 0, 2 * Math.PI);
        this.ctx.fill();
      }
    }
    this.renderLegend();
  }

  private renderLegend(): void {
    this.legend.textContent = "";
    if (!this.clusters) return;
    for (const c of this.clusters.clusters) {
      const li = document.createElement("li");
      li.dataset.clusterId = String(c.id);
      if (c.id === this.selectedId) li.classList.add("selected");
      const swatch = document.createElement("span");
      swatch.className = "swatch";
      swatch.style.backgroundColor = colorFor(c.id);
      const name = document.createElement("span");
      name.className = "cluster-name";
      name.textContent = clusterName(c);
      const size = document.createElement("span");
      size.className = "cluster-size";
      size.textContent = `(${c.size})`;
      li.append(swatch, name, size);
      li.addEventListener("click", () => this.select(c.id));
      this.legend.append(li);
    }
  }

  // Data bounds -> canvas, y flipped; a degenerate axis centers instead.
  private project(): void {
    const { width, height } = this.canvas;
    const xs = this.points.map((p) => p.x);
    const ys = this.points.map((p) => p.y);
    const minX = Math.min(...xs), maxX = Math.max(...xs);
    const minY = Math.min(...ys), maxY = Math.max(...ys);
    const sx = maxX > minX ? (width - 2 * PAD) / (maxX - minX) : 0;
    const sy = maxY > minY ? (height - 2 * PAD) / (maxY - minY) : 0;
    this.screen = this.points.map((p) => [
      sx > 0 ? PAD + (p.x - minX) * sx : width / 2,
      sy > 0 ? height - PAD - (p.y - minY) * sy : height / 2,
    ]);
  }

  private hitTest(ev: MouseEvent): number | null {
    const rect = this.canvas.getBoundingClientRect();
    const mx = ev.clientX - rect.left;
    const my = ev.clientY - rect.top;
    let best: number | null = null;
    let bestD = HIT_R * HIT_R;
    for (let i = 0; i < this.screen.length; i++) {
      const dx = this.screen[i][0] - mx;
      const dy = this.screen[i][1] - my;
      const d = dx * dx + dy * dy;
      if (d <= bestD) {
        bestD = d;
        best = i;
      }
    }
    return best;
  }

  private hover(ev: MouseEvent): void {
    const hit = this.hitTest(ev);
    if (hit === null) {
      this.tooltip.hidden = true;
      return;
    }
    const p = this.points[hit];
    this.tooltip.textContent = p.text_excerpt;
    this.tooltip.style.left = `${ev.clientX + 12}px`;
    this.tooltip.style.top = `${ev.clientY + 12}px`;
    this.tooltip.hidden = false;
  }
}
