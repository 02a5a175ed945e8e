import json

import numpy as np
import pytest


def planted_token_docs(master_seed, n_docs=2000, n_topics=6, vocab_per=100, noise=0.05):
    """Token-id documents over disjoint per-topic vocabularies with uniform noise."""
    gen = np.random.default_rng(master_seed)
    V = n_topics * vocab_per
    docs, labels = [], []
    for _ in range(n_docs):
        t = int(gen.integers(n_topics))
        labels.append(t)
        length = int(gen.integers(15, 31))
        ids = np.where(
            gen.random(length) < noise,
            gen.integers(0, V, size=length),
            t * vocab_per + gen.integers(0, vocab_per, size=length),
        )
        docs.append(ids.astype(np.int32).tolist())
    return docs, labels, V


def write_planted_corpus(path, n_docs=600, n_topics=6, vocab_per=100, noise=0.05, seed=123):
    """JSONL corpus with the same planted structure but surface words."""
    gen = np.random.default_rng(seed)
    topics = [[f"t{t}w{i:03d}" for i in range(vocab_per)] for t in range(n_topics)]
    all_words = [w for tv in topics for w in tv]
    labels = []
    with open(path, "w", encoding="utf-8") as fh:
        for d in range(n_docs):
            t = int(gen.integers(n_topics))
            labels.append(t)
            length = int(gen.integers(15, 31))
            toks = [
                all_words[int(gen.integers(len(all_words)))] if gen.random() < noise
                else topics[t][int(gen.integers(vocab_per))]
                for _ in range(length)
            ]
            fh.write(json.dumps({"id": f"doc{d:04d}", "text": " ".join(toks)}) + "\n")
    return labels


def two_blob_vectors(n_per=150, dim=30, spread=0.5, gap=6.0, seed=17):
    gen = np.random.default_rng(seed)
    a = gen.normal(0.0, spread, size=(n_per, dim))
    a[:, 0] += gap
    b = gen.normal(0.0, spread, size=(n_per, dim))
    b[:, 0] -= gap
    return np.vstack([a, b]), np.array([0] * n_per + [1] * n_per)


def pair_cooccurrence_docs(n_docs=300, seed=0):
    """Corpus where ids (0,1) always co-occur and (2,3) always co-occur,
    never across; filler ids 4.. pad each document."""
    gen = np.random.default_rng(seed)
    docs = []
    for _ in range(n_docs):
        pair = [0, 1] if gen.random() < 0.5 else [2, 3]
        filler = gen.integers(4, 20, size=6).tolist()
        doc = pair * 3 + filler
        gen.shuffle(doc)
        docs.append([int(x) for x in doc])
    return docs, 20


BUNDLE_CONFIG = {
    "corpus": {"path": "corpus.jsonl", "format": "jsonl"},
    "sweep": {"k_range": [2, 9], "runs": 4, "iterations": 150},
    "embed": {"dim": 30, "epochs": 20},
    "cluster": {"n_representatives": 15, "plot_radius": 0.2},
    "project": {"n_neighbors": 15, "epochs": 100},
    "seed": 42,
    "output_dir": "out",
}


@pytest.fixture(scope="session")
def planted_bundle(tmp_path_factory):
    """One full pipeline run over the planted corpus, shared across tests."""
    from temario.pipeline import load_config, run_pipeline

    base = tmp_path_factory.mktemp("bundle")
    labels = write_planted_corpus(base / "corpus.jsonl")
    config_path = base / "config.json"
    config_path.write_text(json.dumps(BUNDLE_CONFIG), encoding="utf-8")
    bundle = run_pipeline(load_config(config_path))
    return {
        "dir": bundle.output_dir,
        "base": base,
        "labels": labels,
        "config_path": config_path,
        "selected_k": bundle.selected_k,
        "manifest": bundle.manifest,
    }
