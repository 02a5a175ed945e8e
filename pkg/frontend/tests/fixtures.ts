import { BundleManifest, ClustersPayload, PointRecord } from "../src/types.js";

export function clustersPayload(
  n: number,
  opts: { labels?: Record<number, string>; dispersions?: number[]; version?: number } = {},
): ClustersPayload {
  return {
    version: opts.version ?? 0,
    k: n,
    plot_radius: 0.2,
    clusters: Array.from({ length: n }, (_, id) => ({
      id,
      size: 10 + id,
      dispersion: opts.dispersions?.[id] ?? 0.1 + id * 0.01,
      label: opts.labels?.[id] ?? null,
    })),
  };
}

export function point(partial: Partial<PointRecord> = {}): PointRecord {
  return {
    doc_id: "doc0000",
    x: 0,
    y: 0,
    cluster_id: 0,
    distance_to_centroid: 0,
    text_excerpt: "robo de celular en el centro",
    ...partial,
  };
}

export function manifest(sha: string): BundleManifest {
  return {
    seed: 42,
    selected_k: 2,
    corpus: { path: "corpus.jsonl", sha256: sha, documents: 600 },
  };
}
