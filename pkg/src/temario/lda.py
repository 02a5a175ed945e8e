"""Collapsed Gibbs sampling LDA.

Used to rank topic counts by coherence, not for inference-quality claims, so
phi/theta are estimated from the final sampler state only.  The Gibbs kernel
is numba-compiled and releases the GIL, which lets independent fits (different
k or run index) run concurrently from a thread pool.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np
from numba import njit

from .corpus import Vocabulary
from .rng import pcg32_next, pcg32_uniform, spawn_key


@dataclass(frozen=True)
class LdaConfig:
    k: int
    alpha: float | None = None  # None -> 50/k
    beta: float = 0.01
    iterations: int = 500
    seed: int = 0

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.alpha is not None and self.alpha <= 0:
            raise ValueError("alpha must be > 0")
        if self.beta <= 0:
            raise ValueError("beta must be > 0")
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")

    @property
    def effective_alpha(self) -> float:
        return 50.0 / self.k if self.alpha is None else self.alpha


@dataclass
class TopicModel:
    config: LdaConfig
    vocab_size: int
    topic_word_counts: np.ndarray  # (k, V) int32
    doc_topic_counts: np.ndarray  # (D, k) int32
    token_assignments: list[np.ndarray]  # per document, int32 topic ids
    phi: np.ndarray  # (k, V) float64, rows sum to 1
    theta: np.ndarray  # (D, k) float64, rows sum to 1


def _flatten(docs: Sequence[Sequence[int]]) -> tuple[np.ndarray, np.ndarray]:
    offsets = np.zeros(len(docs) + 1, dtype=np.int64)
    for i, d in enumerate(docs):
        offsets[i + 1] = offsets[i] + len(d)
    tokens = np.empty(offsets[-1], dtype=np.int32)
    for i, d in enumerate(docs):
        tokens[offsets[i]:offsets[i + 1]] = np.asarray(d, dtype=np.int32)
    return tokens, offsets


@njit(cache=True, nogil=True)
def _gibbs(tokens, offsets, V, K, alpha, beta, iterations, rng):
    n_tokens = tokens.shape[0]
    D = offsets.shape[0] - 1
    z = np.empty(n_tokens, dtype=np.int32)
    n_dt = np.zeros((D, K), dtype=np.int32)
    n_tw = np.zeros((K, V), dtype=np.int32)
    n_t = np.zeros(K, dtype=np.int64)

    for d in range(D):
        for i in range(offsets[d], offsets[d + 1]):
            t = int(pcg32_next(rng) % np.uint64(K))
            z[i] = t
            n_dt[d, t] += 1
            n_tw[t, tokens[i]] += 1
            n_t[t] += 1

    vbeta = V * beta
    # Reciprocal of the topic-total denominator, maintained incrementally so
    # the inner loop is division-free.
    inv_nt = np.empty(K, dtype=np.float64)
    for t in range(K):
        inv_nt[t] = 1.0 / (n_t[t] + vbeta)

    probs = np.empty(K, dtype=np.float64)
    for _ in range(iterations):
        for d in range(D):
            for i in range(offsets[d], offsets[d + 1]):
                w = tokens[i]
                t = z[i]
                n_dt[d, t] -= 1
                n_tw[t, w] -= 1
                n_t[t] -= 1
                inv_nt[t] = 1.0 / (n_t[t] + vbeta)

                total = 0.0
                for kk in range(K):
                    total += (n_dt[d, kk] + alpha) * (n_tw[kk, w] + beta) * inv_nt[kk]
                    probs[kk] = total
                u = pcg32_uniform(rng) * total
                t = 0
                while t < K - 1 and probs[t] <= u:
                    t += 1

                z[i] = t
                n_dt[d, t] += 1
                n_tw[t, w] += 1
                n_t[t] += 1
                inv_nt[t] = 1.0 / (n_t[t] + vbeta)
    return z, n_dt, n_tw


def gibbs_conditional(
    n_dt_row: np.ndarray, n_tw_col: np.ndarray, n_t: np.ndarray, alpha: float, beta: float, V: int
) -> np.ndarray:
    """Normalized collapsed conditional p(z=t | rest) for one held-out token.

    Count arrays must already exclude the token being sampled.
    """
    weights = (n_dt_row + alpha) * (n_tw_col + beta) / (n_t + V * beta)
    return weights / weights.sum()


def fit_lda(docs: Sequence[Sequence[int]], vocab_size: int, config: LdaConfig) -> TopicModel:
    """Fit LDA by collapsed Gibbs sampling; deterministic given config.seed.

    Documents are token-index lists; empty documents are allowed and simply
    contribute nothing.
    """
    if not docs or all(len(d) == 0 for d in docs):
        raise ValueError("empty corpus")
    tokens, offsets = _flatten(docs)
    if tokens.size and int(tokens.max()) >= vocab_size:
        raise ValueError("token index out of vocabulary range")
    rng = spawn_key(config.seed)
    alpha = config.effective_alpha
    z, n_dt, n_tw = _gibbs(
        tokens, offsets, vocab_size, config.k, alpha, config.beta, config.iterations, rng
    )
    n_t = n_tw.sum(axis=1, dtype=np.int64)
    n_d = n_dt.sum(axis=1, dtype=np.int64)
    phi = (n_tw + config.beta) / (n_t[:, None] + vocab_size * config.beta)
    theta = (n_dt + alpha) / (n_d[:, None] + config.k * alpha)
    assignments = [z[offsets[i]:offsets[i + 1]].copy() for i in range(len(docs))]
    return TopicModel(
        config=config,
        vocab_size=vocab_size,
        topic_word_counts=n_tw,
        doc_topic_counts=n_dt,
        token_assignments=assignments,
        phi=phi,
        theta=theta,
    )


def top_words(model: TopicModel, topic: int, n: int) -> list[int]:
    """Indices of the n highest-phi words of a topic; ties favor the lower index."""
    if topic < 0 or topic >= model.config.k:
        raise ValueError(f"topic {topic} out of range for k={model.config.k}")
    if n <= 0:
        return []
    row = model.phi[topic]
    n = min(n, row.shape[0])
    # stable sort on -phi keeps ascending vocabulary index within ties
    order = np.argsort(-row, kind="stable")
    return [int(i) for i in order[:n]]


def save_topic_model(model: TopicModel, vocab: Vocabulary, path: str | Path, top_n: int = 10) -> None:
    """Serialize config, phi and per-topic top words to JSON (count tables omitted)."""
    payload = {
        "config": {
            "k": model.config.k,
            "alpha": model.config.effective_alpha,
            "beta": model.config.beta,
            "iterations": model.config.iterations,
            "seed": model.config.seed,
        },
        "vocab_size": model.vocab_size,
        "phi": [[float(x) for x in row] for row in model.phi],
        "topics": [
            {
                "topic": t,
                "top_words": [vocab.word(i) for i in top_words(model, t, top_n)],
            }
            for t in range(model.config.k)
        ],
    }
    Path(path).write_text(json.dumps(payload, ensure_ascii=False, sort_keys=True, indent=1), encoding="utf-8")
