import {
  BundleManifest,
  ClassifyResponse,
  ClustersPayload,
  LabelResponse,
  PointRecord,
  RepresentativesPayload,
} from "./types.js";

export class ServiceError extends Error {
  constructor(readonly status: number, message: string) {
    super(message);
    this.name = "ServiceError";
  }
}

/** Thin fetch wrapper around one report service; baseUrl "" means same origin. */
export class Api {
  constructor(readonly baseUrl: string = "") {}

  manifest(): Promise<BundleManifest> {
    return this.request<BundleManifest>("/api/manifest");
  }

  points(radius?: number): Promise<PointRecord[]> {
    const query = radius === undefined ? "" : `?radius=${encodeURIComponent(radius)}`;
    return this.request<PointRecord[]>(`/api/points${query}`);
  }

  clusters(): Promise<ClustersPayload> {
    return this.request<ClustersPayload>("/api/clusters");
  }

  representatives(clusterId: number, n?: number): Promise<RepresentativesPayload> {
    const query = n === undefined ? "" : `?n=${encodeURIComponent(n)}`;
    return this.request<RepresentativesPayload>(
      `/api/clusters/${clusterId}/representatives${query}`,
    );
  }

  putLabel(clusterId: number, label: string): Promise<LabelResponse> {
    return this.request<LabelResponse>(`/api/clusters/${clusterId}/label`, {
      method: "PUT",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ label }),
    });
  }

  classify(texts: string[]): Promise<ClassifyResponse> {
    return this.request<ClassifyResponse>("/api/classify", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ texts }),
    });
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const method = init?.method ?? "GET";
    let resp: Response;
    try {
      resp = await fetch(this.baseUrl + path, init);
    } catch (err) {
      throw new ServiceError(0, `${method} ${path}: ${String(err)}`);
    }
    if (!resp.ok) {
      let detail = resp.statusText;
      try {
        detail = JSON.stringify((await resp.json()).detail);
      } catch {
        // non-JSON error body; statusText is all we have
      }
      throw new ServiceError(resp.status, `${method} ${path}: ${resp.status} ${detail}`);
    }
    return (await resp.json()) as T;
  }
}
