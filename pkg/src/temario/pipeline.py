"""End-to-end orchestration: corpus -> coherence sweep -> embeddings ->
clustering -> 2D projection -> report bundle on disk.

The bundle directory is the unit of exchange: the HTTP service reads it, the
classifier loads models back out of it, and reruns with the same config and
seed reproduce it byte for byte (manifest timestamp aside). Every artifact is
written atomically (temp file + rename); a stage failure sweeps whatever was
already written into `failed/` so partial output is never mistaken for a
complete bundle.
"""

from __future__ import annotations

import hashlib
import json
import os
import platform
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Sequence

import numba
import numpy as np

from . import __version__
from .cluster import assign, dispersion, kmeans, load_cluster_model, representatives, save_cluster_model
from .coherence import DEFAULT_WINDOW, _fit_seed, coherence_sweep, select_k_elbow
from .corpus import PreprocessRules, build_vocabulary, load_corpus, preprocess
from .embed import EmbedConfig, load_model, save_model, train_embeddings
from .lda import LdaConfig, fit_lda, save_topic_model
from .project import project_documents

EXCERPT_CHARS = 140
NULL_FLAG = "empty after preprocessing"

_STAGES = ("sweep", "embed", "cluster", "project")


class ConfigError(ValueError):
    """Configuration file missing, malformed, or semantically invalid."""


class PipelineStageError(RuntimeError):
    def __init__(self, stage: str, cause: BaseException):
        super().__init__(f"stage '{stage}' failed: {cause}")
        self.stage = stage
        self.cause = cause


@dataclass
class SweepSettings:
    k_min: int = 2
    k_max: int = 59
    runs: int = 64
    window: int = DEFAULT_WINDOW
    iterations: int = 500
    alpha: float | None = None
    beta: float = 0.01
    top_n: int = 10
    workers: int | None = None


@dataclass
class ClusterSettings:
    k: int | None = None  # None: use the elbow-selected k
    n_representatives: int = 15
    plot_radius: float = 0.2
    max_iter: int = 300
    tol: float = 1e-6


@dataclass
class ProjectSettings:
    n_neighbors: int = 15
    epochs: int = 200
    a: float = 1.577
    b: float = 0.895
    neg_rate: int = 5


@dataclass
class PipelineConfig:
    corpus_path: Path
    output_dir: Path
    corpus_format: str = "jsonl"
    lemma_path: Path | None = None
    stoplist_path: Path | None = None
    rules_flags: dict = field(default_factory=dict)
    min_count: int = 1
    sweep: SweepSettings = field(default_factory=SweepSettings)
    embed: dict = field(default_factory=dict)  # EmbedConfig kwargs minus seed
    cluster: ClusterSettings = field(default_factory=ClusterSettings)
    project: ProjectSettings = field(default_factory=ProjectSettings)
    seed: int = 0
    port: int = 8000

    def to_dict(self) -> dict:
        return {
            "corpus": {"path": str(self.corpus_path), "format": self.corpus_format},
            "rules": {
                "lemmas": None if self.lemma_path is None else str(self.lemma_path),
                "stopwords": None if self.stoplist_path is None else str(self.stoplist_path),
                "min_count": self.min_count,
                **self.rules_flags,
            },
            "sweep": {
                "k_range": [self.sweep.k_min, self.sweep.k_max],
                "runs": self.sweep.runs,
                "window": self.sweep.window,
                "iterations": self.sweep.iterations,
                "alpha": self.sweep.alpha,
                "beta": self.sweep.beta,
                "top_n": self.sweep.top_n,
                "workers": self.sweep.workers,
            },
            "embed": dict(self.embed),
            "cluster": {
                "k": self.cluster.k,
                "n_representatives": self.cluster.n_representatives,
                "plot_radius": self.cluster.plot_radius,
                "max_iter": self.cluster.max_iter,
                "tol": self.cluster.tol,
            },
            "project": {
                "n_neighbors": self.project.n_neighbors,
                "epochs": self.project.epochs,
                "a": self.project.a,
                "b": self.project.b,
                "neg_rate": self.project.neg_rate,
            },
            "seed": self.seed,
            "output_dir": str(self.output_dir),
            "port": self.port,
        }


_RULE_FLAG_KEYS = {
    "lowercase",
    "strip_urls",
    "strip_mentions",
    "strip_hashtags",
    "strip_punctuation",
    "min_token_length",
}
_SECTION_KEYS = {
    "corpus": {"path", "format"},
    "rules": {"lemmas", "stopwords", "min_count"} | _RULE_FLAG_KEYS,
    "sweep": {"k_range", "runs", "window", "iterations", "alpha", "beta", "top_n", "workers"},
    "embed": {
        "dim", "ngram_min", "ngram_max", "bucket_count", "window",
        "negatives", "epochs", "learning_rate", "min_count", "normalize",
    },
    "cluster": {"k", "n_representatives", "plot_radius", "max_iter", "tol"},
    "project": {"n_neighbors", "epochs", "a", "b", "neg_rate"},
}
_TOP_KEYS = {"corpus", "rules", "sweep", "embed", "cluster", "project", "seed", "output_dir", "port"}


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise ConfigError(message)


def _check_keys(section: str, data: dict) -> None:
    unknown = set(data) - _SECTION_KEYS[section]
    _require(not unknown, f"unknown key(s) in '{section}': {', '.join(sorted(unknown))}")


def parse_config(raw: dict, base_dir: Path | None = None) -> PipelineConfig:
    """Validate a raw config dict; env vars TEMARIO_SEED / TEMARIO_OUT win."""
    _require(isinstance(raw, dict), "config root must be a JSON object")
    unknown = set(raw) - _TOP_KEYS
    _require(not unknown, f"unknown top-level key(s): {', '.join(sorted(unknown))}")
    base = Path(".") if base_dir is None else base_dir

    corpus = raw.get("corpus")
    _require(isinstance(corpus, dict), "'corpus' section is required")
    _check_keys("corpus", corpus)
    _require(isinstance(corpus.get("path"), str) and corpus["path"], "'corpus.path' is required")
    corpus_path = (base / corpus["path"]).resolve() if not Path(corpus["path"]).is_absolute() else Path(corpus["path"])
    corpus_format = corpus.get("format", "jsonl")
    _require(corpus_format in ("jsonl", "csv"), f"unsupported corpus format '{corpus_format}'")
    _require(corpus_path.is_file(), f"corpus file not found: {corpus_path}")

    rules = dict(raw.get("rules", {}))
    _check_keys("rules", rules)

    def _rule_path(key: str) -> Path | None:
        val = rules.get(key)
        if val is None:
            return None
        _require(isinstance(val, str) and val, f"'rules.{key}' must be a path or null")
        p = (base / val).resolve() if not Path(val).is_absolute() else Path(val)
        _require(p.is_file(), f"rules file not found: {p}")
        return p

    lemma_path = _rule_path("lemmas")
    stoplist_path = _rule_path("stopwords")
    min_count = rules.get("min_count", 1)
    _require(isinstance(min_count, int) and min_count >= 1, "'rules.min_count' must be an integer >= 1")
    flags = {k: rules[k] for k in _RULE_FLAG_KEYS if k in rules}

    sweep_raw = dict(raw.get("sweep", {}))
    _check_keys("sweep", sweep_raw)
    k_range = sweep_raw.get("k_range", [2, 59])
    _require(
        isinstance(k_range, (list, tuple)) and len(k_range) == 2
        and all(isinstance(v, int) for v in k_range),
        "'sweep.k_range' must be [min, max]",
    )
    _require(1 <= k_range[0] <= k_range[1], "'sweep.k_range' must satisfy 1 <= min <= max")
    sweep = SweepSettings(
        k_min=k_range[0],
        k_max=k_range[1],
        runs=sweep_raw.get("runs", 64),
        window=sweep_raw.get("window", DEFAULT_WINDOW),
        iterations=sweep_raw.get("iterations", 500),
        alpha=sweep_raw.get("alpha"),
        beta=sweep_raw.get("beta", 0.01),
        top_n=sweep_raw.get("top_n", 10),
        workers=sweep_raw.get("workers"),
    )
    _require(isinstance(sweep.runs, int) and sweep.runs >= 1, "'sweep.runs' must be >= 1")
    _require(isinstance(sweep.iterations, int) and sweep.iterations >= 1, "'sweep.iterations' must be >= 1")
    _require(isinstance(sweep.window, int) and sweep.window >= 1, "'sweep.window' must be >= 1")
    _require(sweep.alpha is None or (isinstance(sweep.alpha, (int, float)) and sweep.alpha > 0), "'sweep.alpha' must be > 0 or null")
    _require(isinstance(sweep.beta, (int, float)) and sweep.beta > 0, "'sweep.beta' must be > 0")
    _require(isinstance(sweep.top_n, int) and sweep.top_n >= 2, "'sweep.top_n' must be >= 2")
    _require(sweep.workers is None or (isinstance(sweep.workers, int) and sweep.workers >= 1), "'sweep.workers' must be >= 1 or null")

    embed = dict(raw.get("embed", {}))
    _check_keys("embed", embed)
    try:
        EmbedConfig(**embed, seed=0)  # surface value errors at validation time
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid 'embed' section: {exc}") from exc

    cluster_raw = dict(raw.get("cluster", {}))
    _check_keys("cluster", cluster_raw)
    cluster = ClusterSettings(
        k=cluster_raw.get("k"),
        n_representatives=cluster_raw.get("n_representatives", 15),
        plot_radius=cluster_raw.get("plot_radius", 0.2),
        max_iter=cluster_raw.get("max_iter", 300),
        tol=cluster_raw.get("tol", 1e-6),
    )
    _require(cluster.k is None or (isinstance(cluster.k, int) and cluster.k >= 1), "'cluster.k' must be >= 1 or null")
    _require(isinstance(cluster.n_representatives, int) and cluster.n_representatives >= 1, "'cluster.n_representatives' must be >= 1")
    _require(isinstance(cluster.plot_radius, (int, float)) and cluster.plot_radius >= 0, "'cluster.plot_radius' must be >= 0")
    _require(isinstance(cluster.max_iter, int) and cluster.max_iter >= 1, "'cluster.max_iter' must be >= 1")

    project_raw = dict(raw.get("project", {}))
    _check_keys("project", project_raw)
    project = ProjectSettings(
        n_neighbors=project_raw.get("n_neighbors", 15),
        epochs=project_raw.get("epochs", 200),
        a=project_raw.get("a", 1.577),
        b=project_raw.get("b", 0.895),
        neg_rate=project_raw.get("neg_rate", 5),
    )
    _require(isinstance(project.n_neighbors, int) and project.n_neighbors >= 1, "'project.n_neighbors' must be >= 1")
    _require(isinstance(project.epochs, int) and project.epochs >= 0, "'project.epochs' must be >= 0")
    _require(isinstance(project.neg_rate, int) and project.neg_rate >= 0, "'project.neg_rate' must be >= 0")

    seed = raw.get("seed", 0)
    if "TEMARIO_SEED" in os.environ:
        try:
            seed = int(os.environ["TEMARIO_SEED"])
        except ValueError as exc:
            raise ConfigError(f"TEMARIO_SEED must be an integer, got {os.environ['TEMARIO_SEED']!r}") from exc
    _require(isinstance(seed, int) and seed >= 0, "'seed' must be a non-negative integer")

    out_raw = os.environ.get("TEMARIO_OUT") or raw.get("output_dir", "out")
    _require(isinstance(out_raw, str) and out_raw, "'output_dir' must be a non-empty string")
    output_dir = (base / out_raw).resolve() if not Path(out_raw).is_absolute() else Path(out_raw)

    port = raw.get("port", 8000)
    _require(isinstance(port, int) and 1 <= port <= 65535, "'port' must be in 1..65535")

    return PipelineConfig(
        corpus_path=corpus_path,
        output_dir=output_dir,
        corpus_format=corpus_format,
        lemma_path=lemma_path,
        stoplist_path=stoplist_path,
        rules_flags=flags,
        min_count=min_count,
        sweep=sweep,
        embed=embed,
        cluster=cluster,
        project=project,
        seed=seed,
        port=port,
    )


def load_config(path: str | Path) -> PipelineConfig:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON: {exc}") from exc
    # relative paths in the config resolve against the config file's directory
    return parse_config(raw, base_dir=path.parent)


def stage_seeds(master: int) -> dict[str, int]:
    """One independent child seed per stage so streams never collide."""
    children = np.random.SeedSequence(master).spawn(len(_STAGES))
    return {name: int(c.generate_state(1)[0]) for name, c in zip(_STAGES, children)}


def describe_plan(config: PipelineConfig) -> str:
    """Human-readable execution plan for dry runs; performs no work."""
    s, c, p = config.sweep, config.cluster, config.project
    embed_cfg = EmbedConfig(**config.embed, seed=0)
    k_line = f"k={c.k} (override)" if c.k is not None else "k=elbow of sweep"
    lines = [
        "plan:",
        f"  corpus   load {config.corpus_path} ({config.corpus_format})",
        f"  rules    lemmas={config.lemma_path or '-'} stopwords={config.stoplist_path or '-'} min_count={config.min_count}",
        f"  sweep    k={s.k_min}..{s.k_max} runs={s.runs} iterations={s.iterations} window={s.window}",
        f"  embed    dim={embed_cfg.dim} window={embed_cfg.window} negatives={embed_cfg.negatives} epochs={embed_cfg.epochs}",
        f"  cluster  {k_line} representatives={c.n_representatives} plot_radius={c.plot_radius}",
        f"  project  n_neighbors={p.n_neighbors} epochs={p.epochs} a={p.a} b={p.b} neg_rate={p.neg_rate}",
        f"  report   write bundle to {config.output_dir}",
        f"  seed     {config.seed}",
    ]
    return "\n".join(lines)


def _write_bytes_atomic(path: Path, data: bytes) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_bytes(data)
    os.replace(tmp, path)


def _write_json_atomic(path: Path, obj) -> None:
    _write_bytes_atomic(path, (json.dumps(obj, ensure_ascii=False, sort_keys=True, indent=1) + "\n").encode("utf-8"))


def _sha256(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            h.update(block)
    return h.hexdigest()


@dataclass
class ReportBundle:
    output_dir: Path
    manifest: dict
    selected_k: int

    def path(self, name: str) -> Path:
        return self.output_dir / name


def _prepare_documents(config: PipelineConfig):
    raw_docs = load_corpus(config.corpus_path, config.corpus_format)
    rules = PreprocessRules.load(config.lemma_path, config.stoplist_path, **config.rules_flags)
    surface = [(d.id, preprocess(d.text, rules)) for d in raw_docs]
    vocab, tokenized = build_vocabulary(surface, config.min_count)
    nonempty = [td for td in tokenized if td.tokens]
    null_ids = [td.id for td in tokenized if not td.tokens]
    return raw_docs, rules, vocab, nonempty, null_ids


def run_sweep(config: PipelineConfig) -> dict:
    """Corpus and sweep stages only; writes sweep.csv and sweep.json."""
    out = config.output_dir
    out.mkdir(parents=True, exist_ok=True)
    seeds = stage_seeds(config.seed)
    _, _, vocab, nonempty, _ = _prepare_documents(config)
    docs = [td.tokens for td in nonempty]
    s = config.sweep
    sweep = coherence_sweep(
        docs, len(vocab), range(s.k_min, s.k_max + 1), s.runs,
        iterations=s.iterations, alpha=s.alpha, beta=s.beta, window=s.window,
        seed=seeds["sweep"], top_n=s.top_n, workers=s.workers,
    )
    elbow = select_k_elbow(sweep)
    selected_k = config.cluster.k if config.cluster.k is not None else elbow.k
    payload = {
        "k_values": sweep.k_values,
        "mean_cv": sweep.mean_cv,
        "std_cv": sweep.std_cv,
        "runs": sweep.runs,
        "scores": sweep.scores,
        "elbow": {"k": elbow.k, "warning": elbow.warning},
        "selected_k": selected_k,
    }
    tmp = out / "sweep.csv.tmp"
    sweep.write_csv(tmp)
    os.replace(tmp, out / "sweep.csv")
    _write_json_atomic(out / "sweep.json", payload)
    return payload


def run_pipeline(config: PipelineConfig) -> ReportBundle:
    """Execute every stage in order and write the report bundle.

    Determinism contract: a rerun with the same config and seed reproduces
    every artifact byte for byte except the manifest timestamp.
    """
    out = config.output_dir
    out.mkdir(parents=True, exist_ok=True)
    seeds = stage_seeds(config.seed)
    written: list[Path] = []
    stage = "corpus"

    def emit_json(name: str, obj) -> None:
        _write_json_atomic(out / name, obj)
        written.append(out / name)

    try:
        raw_docs, rules, vocab, nonempty, null_ids = _prepare_documents(config)
        texts = {d.id: d.text for d in raw_docs}
        doc_ids = [td.id for td in nonempty]
        docs = [td.tokens for td in nonempty]
        corpus_hash = _sha256(config.corpus_path)
        emit_json("rules.json", {"min_count": config.min_count, "rules": rules.to_dict()})

        stage = "sweep"
        s = config.sweep
        sweep = coherence_sweep(
            docs, len(vocab), range(s.k_min, s.k_max + 1), s.runs,
            iterations=s.iterations, alpha=s.alpha, beta=s.beta, window=s.window,
            seed=seeds["sweep"], top_n=s.top_n, workers=s.workers,
        )
        elbow = select_k_elbow(sweep)
        selected_k = config.cluster.k if config.cluster.k is not None else elbow.k
        tmp = out / "sweep.csv.tmp"
        sweep.write_csv(tmp)
        os.replace(tmp, out / "sweep.csv")
        written.append(out / "sweep.csv")
        emit_json("sweep.json", {
            "k_values": sweep.k_values,
            "mean_cv": sweep.mean_cv,
            "std_cv": sweep.std_cv,
            "runs": sweep.runs,
            "scores": sweep.scores,
            "elbow": {"k": elbow.k, "warning": elbow.warning},
            "selected_k": selected_k,
        })

        stage = "topics"
        # the reporting fit reuses the sweep's run-0 stream at the selected k
        lda_config = LdaConfig(
            k=selected_k, alpha=s.alpha, beta=s.beta, iterations=s.iterations,
            seed=_fit_seed(seeds["sweep"], selected_k, 0),
        )
        topic_model = fit_lda(docs, len(vocab), lda_config)
        tmp = out / "topics.json.tmp"
        save_topic_model(topic_model, vocab, tmp, top_n=s.top_n)
        os.replace(tmp, out / "topics.json")
        written.append(out / "topics.json")

        stage = "embed"
        embed_config = EmbedConfig(**config.embed, seed=seeds["embed"])
        embedding = train_embeddings(docs, vocab, embed_config)
        vectors = embedding.doc_vectors_by_id(docs)
        tmp = out / "embedding.bin.tmp"
        save_model(embedding, tmp, corpus_hash=corpus_hash)
        os.replace(tmp, out / "embedding.bin")
        os.replace(Path(str(tmp) + ".json"), out / "embedding.bin.json")
        written += [out / "embedding.bin", out / "embedding.bin.json"]

        stage = "cluster"
        c = config.cluster
        if selected_k > len(docs):
            raise ValueError(f"selected k={selected_k} exceeds document count {len(docs)}")
        cm = kmeans(vectors, selected_k, seed=seeds["cluster"], max_iter=c.max_iter, tol=c.tol, ids=doc_ids)
        save_cluster_model(cm, out / "cluster_model.json.tmp", out / "assignments.csv.tmp")
        os.replace(out / "cluster_model.json.tmp", out / "cluster_model.json")
        os.replace(out / "assignments.csv.tmp", out / "assignments.csv")
        written += [out / "cluster_model.json", out / "assignments.csv"]
        emit_json("clusters.json", {
            "k": selected_k,
            "plot_radius": c.plot_radius,
            "clusters": [
                {
                    "id": cid,
                    "size": cm.sizes[cid],
                    "dispersion": dispersion(cm, cid),
                    "label": None,
                    "representatives": [
                        {"doc_id": rid, "text": texts[rid], "distance": cm.distances[rid]}
                        for rid in representatives(cm, cid, c.n_representatives)
                    ],
                }
                for cid in range(selected_k)
            ],
        })
        emit_json("labels.json", {"version": 0, "labels": {}})

        stage = "project"
        p = config.project
        if len(docs) < 2:
            raise ValueError("projection needs at least 2 documents")
        n_neighbors = min(p.n_neighbors, len(docs) - 1)
        projection = project_documents(
            vectors, ids=doc_ids, n_neighbors=n_neighbors, epochs=p.epochs,
            a=p.a, b=p.b, neg_rate=p.neg_rate, seed=seeds["project"],
        )
        emit_json("points.json", [
            {
                "doc_id": doc_id,
                "x": float(projection.coords[i, 0]),
                "y": float(projection.coords[i, 1]),
                "cluster_id": cm.assignments[doc_id],
                "distance_to_centroid": cm.distances[doc_id],
                "text_excerpt": texts[doc_id][:EXCERPT_CHARS],
            }
            for i, doc_id in enumerate(doc_ids)
        ])

        stage = "report"
        manifest = {
            "created_at": datetime.now(timezone.utc).isoformat(timespec="seconds"),
            "seed": config.seed,
            "stage_seeds": seeds,
            "config": config.to_dict(),
            "corpus": {
                "path": str(config.corpus_path),
                "format": config.corpus_format,
                "sha256": corpus_hash,
                "documents": len(raw_docs),
                "kept_documents": len(docs),
                "null_documents": null_ids,
                "vocabulary_size": len(vocab),
                "tokens": int(sum(len(d) for d in docs)),
            },
            "selected_k": selected_k,
            "elbow": {"k": elbow.k, "warning": elbow.warning},
            "k_overridden": config.cluster.k is not None,
            "project": {"n_neighbors_used": n_neighbors},
            "versions": {
                "temario": __version__,
                "python": platform.python_version(),
                "numpy": np.__version__,
                "numba": numba.__version__,
            },
            "artifacts": {path.name: _sha256(path) for path in sorted(written)},
        }
        emit_json("manifest.json", manifest)
        return ReportBundle(output_dir=out, manifest=manifest, selected_k=selected_k)
    except Exception as exc:
        failed = out / "failed"
        failed.mkdir(exist_ok=True)
        for path in written:
            if path.exists():
                os.replace(path, failed / path.name)
        raise PipelineStageError(stage, exc) from exc


def load_bundle(bundle_dir: str | Path) -> ReportBundle:
    out = Path(bundle_dir)
    manifest_path = out / "manifest.json"
    if not manifest_path.is_file():
        raise FileNotFoundError(f"not a report bundle (no manifest.json): {out}")
    manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    return ReportBundle(output_dir=out, manifest=manifest, selected_k=manifest["selected_k"])


class _BundleClassifier:
    """Loads the embedding and cluster models out of a bundle once."""

    def __init__(self, bundle_dir: str | Path):
        out = Path(bundle_dir)
        try:
            rules_payload = json.loads((out / "rules.json").read_text(encoding="utf-8"))
            self.rules = PreprocessRules.from_dict(rules_payload["rules"])
            self.embedding = load_model(out / "embedding.bin")
            self.clusters = load_cluster_model(out / "cluster_model.json")
        except (OSError, ValueError, KeyError) as exc:
            raise RuntimeError(f"cannot load models from bundle {out}: {exc}") from exc
        self.labels_path = out / "labels.json"

    def _labels(self) -> dict[str, str]:
        # read live so service label writes are reflected without reload
        try:
            payload = json.loads(self.labels_path.read_text(encoding="utf-8"))
            return dict(payload.get("labels", {}))
        except OSError:
            return {}

    def classify(self, texts: Sequence[str]) -> list[dict]:
        labels = self._labels()
        results = []
        for text in texts:
            tokens = preprocess(text, self.rules)
            if not tokens:
                results.append({"cluster_id": None, "label": None, "distance": None, "flag": NULL_FLAG})
                continue
            vec = self.embedding.doc_vector(tokens)
            cid, dist = assign(self.clusters, vec)
            results.append({
                "cluster_id": cid,
                "label": labels.get(str(cid)),
                "distance": dist,
                "flag": None,
            })
        return results


def classify_new(bundle_dir: str | Path, texts: Sequence[str]) -> list[dict]:
    """Preprocess, embed (subwords cover out-of-vocabulary words), and assign
    each text to its nearest centroid; order of results matches the input."""
    return _BundleClassifier(bundle_dir).classify(texts)
