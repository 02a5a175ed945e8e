import { Api } from "./api.js";

/** Paste-a-text box: POSTs lines to /api/classify and lists the assignments. */
export class ClassifyBox {
  readonly textarea: HTMLTextAreaElement;
  readonly button: HTMLButtonElement;
  readonly results: HTMLOListElement;
  readonly banner: HTMLDivElement;

  constructor(root: HTMLElement, private readonly api: Api) {
    this.banner = document.createElement("div");
    this.banner.className = "banner error";
    this.banner.hidden = true;
    this.textarea = document.createElement("textarea");
    this.textarea.placeholder = "one text per line";
    this.textarea.rows = 4;
    this.button = document.createElement("button");
    this.button.textContent = "classify";
    this.results = document.createElement("ol");
    this.results.className = "classify-results";
    root.append(this.banner, this.textarea, this.button, this.results);

    this.button.addEventListener("click", () => void this.submit());
  }

  async submit(): Promise<void> {
    this.banner.hidden = true;
    const texts = this.textarea.value
      .split("\n")
      .map((line) => line.trim())
      .filter((line) => line.length > 0);
    if (texts.length === 0) return;
    let payload;
    try {
      payload = await this.api.classify(texts);
    } catch (err) {
      this.banner.textContent = `classification failed: ${String(err)}`;
      this.banner.hidden = false;
      return;
    }
    this.results.textContent = "";
    for (let i = 0; i < payload.results.length; i++) {
      const res = payload.results[i];
      const li = document.createElement("li");
      if (res.cluster_id === null) {
        li.textContent = `"${texts[i]}" - ${res.flag ?? "not classified"}`;
        li.classList.add("flagged");
      } else {
        const name = res.label ?? `cluster ${res.cluster_id}`;
        li.textContent = `"${texts[i]}" -> ${name} (distance ${String(res.distance)})`;
      }
      this.results.append(li);
    }
  }
}
