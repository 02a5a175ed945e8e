import { Api } from "./api.js";
import { LabelResponse } from "./types.js";

export interface PendingEdit {
  clusterId: number;
  label: string;
}

interface QueueHooks {
  onSaved: (resp: LabelResponse) => void;
  onUnsaved: (edit: PendingEdit, err: unknown) => void;
}

/** Label edits ship one at a time in submission order.
 *
 * A failed PUT keeps its edit at the head of the queue (flagged unsaved via
 * the hook) and schedules a retry; a newer edit for the same cluster replaces
 * the queued one, so the last local edit is what eventually persists.
 */
export class LabelQueue {
  private queue: PendingEdit[] = [];
  private pumping = false;
  private timer: ReturnType<typeof setTimeout> | null = null;

  constructor(
    private readonly api: Api,
    private readonly hooks: QueueHooks,
    private readonly retryDelayMs = 3000,
  ) {}

  get pending(): number {
    return this.queue.length;
  }

  push(clusterId: number, label: string): void {
    const existing = this.queue.find((e) => e.clusterId === clusterId);
    if (existing) {
      existing.label = label;
    } else {
      this.queue.push({ clusterId, label });
    }
    void this.pump();
  }

  retryNow(): void {
    if (this.timer !== null) {
      clearTimeout(this.timer);
      this.timer = null;
    }
    void this.pump();
  }

  private async pump(): Promise<void> {
    if (this.pumping) return;
    this.pumping = true;
    try {
      while (this.queue.length > 0) {
        const head = this.queue[0];
        try {
          const resp = await this.api.putLabel(head.clusterId, head.label);
          this.queue.shift();
          this.hooks.onSaved(resp);
        } catch (err) {
          this.hooks.onUnsaved(head, err);
          this.timer = setTimeout(() => {
            this.timer = null;
            void this.pump();
          }, this.retryDelayMs);
          return;
        }
      }
    } finally {
      this.pumping = false;
    }
  }
}

export interface LabelPanelOptions {
  onLabelSaved?: (resp: LabelResponse) => void;
  retryDelayMs?: number;
}

/** Representatives of the selected cluster plus its label editor. */
export class LabelPanel {
  readonly heading: HTMLHeadingElement;
  readonly list: HTMLOListElement;
  readonly input: HTMLInputElement;
  readonly button: HTMLButtonElement;
  readonly status: HTMLSpanElement;
  readonly banner: HTMLDivElement;
  readonly queue: LabelQueue;

  private clusterId: number | null = null;

  constructor(root: HTMLElement, private readonly api: Api, opts: LabelPanelOptions = {}) {
    this.heading = document.createElement("h2");
    this.heading.textContent = "no cluster selected";
    this.banner = document.createElement("div");
    this.banner.className = "banner error";
    this.banner.hidden = true;
    this.list = document.createElement("ol");
    this.list.className = "representatives";

    const form = document.createElement("div");
    form.className = "label-form";
    this.input = document.createElement("input");
    this.input.type = "text";
    this.input.placeholder = "cluster label";
    this.button = document.createElement("button");
    this.button.textContent = "save label";
    this.button.disabled = true;
    this.status = document.createElement("span");
    this.status.className = "label-status";
    form.append(this.input, this.button, this.status);

    root.append(this.heading, this.banner, this.list, form);

    this.queue = new LabelQueue(
      api,
      {
        onSaved: (resp) => {
          this.status.textContent = `saved (version ${resp.version})`;
          this.status.classList.remove("unsaved");
          opts.onLabelSaved?.(resp);
        },
        onUnsaved: () => {
          this.status.textContent = "unsaved, will retry";
          this.status.classList.add("unsaved");
        },
      },
      opts.retryDelayMs,
    );

    this.input.addEventListener("input", () => {
      this.button.disabled = this.input.value.trim() === "";
    });
    this.button.addEventListener("click", () => this.submit());
  }

  /** Load and show the representatives of one cluster. */
  async show(clusterId: number): Promise<void> {
    this.banner.hidden = true;
    let payload;
    try {
      payload = await this.api.representatives(clusterId);
    } catch (err) {
      this.banner.textContent = `failed to load representatives: ${String(err)}`;
      this.banner.hidden = false;
      return;
    }
    this.clusterId = clusterId;
    this.heading.textContent =
      payload.label === null ? `cluster ${clusterId}` : `cluster ${clusterId}: ${payload.label}`;
    this.input.value = payload.label ?? "";
    this.button.disabled = this.input.value.trim() === "";
    this.status.textContent = "";
    this.list.textContent = "";
    for (const rep of payload.representatives) {
      const li = document.createElement("li");
      const dist = document.createElement("span");
      dist.className = "rep-distance";
      dist.textContent = String(rep.distance);
      const text = document.createElement("span");
      text.className = "rep-text";
      text.textContent = rep.text;
      li.append(dist, text);
      this.list.append(li);
    }
  }

  submit(): void {
    const label = this.input.value.trim();
    if (this.clusterId === null || label === "") return;
    this.status.textContent = "saving...";
    this.queue.push(this.clusterId, label);
  }
}
