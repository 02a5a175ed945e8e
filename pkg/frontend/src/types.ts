// Shapes mirror the service responses exactly; the client never reshapes or
// recomputes numbers, it only displays what the payload carried.

export interface PointRecord {
  doc_id: string;
  x: number;
  y: number;
  cluster_id: number;
  distance_to_centroid: number;
  text_excerpt: string;
}

export interface ClusterSummary {
  id: number;
  size: number;
  dispersion: number;
  label: string | null;
}

export interface ClustersPayload {
  version: number;
  k: number;
  plot_radius: number;
  clusters: ClusterSummary[];
}

export interface Representative {
  doc_id: string;
  text: string;
  distance: number;
}

export interface RepresentativesPayload {
  cluster_id: number;
  label: string | null;
  representatives: Representative[];
}

export interface LabelResponse {
  cluster_id: number;
  label: string;
  version: number;
}

export interface ClassifyResult {
  cluster_id: number | null;
  label: string | null;
  distance: number | null;
  flag: string | null;
}

export interface ClassifyResponse {
  results: ClassifyResult[];
}

export interface BundleManifest {
  seed: number;
  selected_k: number;
  corpus: {
    path: string;
    sha256: string;
    documents: number;
    [key: string]: unknown;
  };
  [key: string]: unknown;
}
