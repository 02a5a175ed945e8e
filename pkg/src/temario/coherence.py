"""C_V topic coherence and the repeated sweep that selects the topic count.

The C_V pipeline here: boolean sliding-window statistics over the training
corpus, NPMI context vectors with one-set segmentation, indirect cosine
confirmation, arithmetic mean over topics.  The sweep refits LDA `runs` times
per k with order-independent derived seeds and reports mean/std coherence.
"""

from __future__ import annotations

import csv
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .lda import LdaConfig, TopicModel, fit_lda, top_words

DEFAULT_WINDOW = 110
DEFAULT_EPS = 1e-12
DEFAULT_TOP_N = 10


class WindowStats:
    """Boolean sliding-window counts for a set of query words.

    A window of length `window` slides with stride 1 over each document; a
    document shorter than the window contributes exactly one window, an empty
    document contributes none.  A word or pair counts at most once per window.
    Postings are kept as packed bitsets over the global window index, so pair
    counts are popcounts of ANDed bitsets, computed lazily and memoized.
    """

    def __init__(self, window: int, total_windows: int, postings: dict[int, np.ndarray]):
        self.window = window
        self.total_windows = total_windows
        self._postings = postings
        self._counts = {w: int(np.bitwise_count(bits).sum()) for w, bits in postings.items()}
        self._pair_cache: dict[tuple[int, int], int] = {}

    @property
    def words(self) -> set[int]:
        return set(self._postings)

    def count(self, word: int) -> int:
        return self._counts.get(word, 0)

    def pair_count(self, w1: int, w2: int) -> int:
        if w1 == w2:
            return self.count(w1)
        key = (w1, w2) if w1 < w2 else (w2, w1)
        cached = self._pair_cache.get(key)
        if cached is not None:
            return cached
        a = self._postings.get(w1)
        b = self._postings.get(w2)
        n = 0 if a is None or b is None else int(np.bitwise_count(a & b).sum())
        self._pair_cache[key] = n
        return n

    def p(self, word: int) -> float:
        return self.count(word) / self.total_windows if self.total_windows else 0.0

    def p_pair(self, w1: int, w2: int) -> float:
        return self.pair_count(w1, w2) / self.total_windows if self.total_windows else 0.0


def window_stats(docs: Sequence[Sequence[int]], words: Iterable[int], window: int) -> WindowStats:
    """Single streaming pass over the corpus; windows are never materialized.

    For a word occurrence at position p in a document with W windows, the
    covering window start indices are the run max(0, p-window+1) .. min(p, W-1);
    occurrence runs are ORed into the word's bitset.
    """
    if window < 1:
        raise ValueError("window must be >= 1")
    word_ids = sorted(set(int(w) for w in words))
    offsets = []
    total = 0
    for doc in docs:
        offsets.append(total)
        if len(doc) > 0:
            total += max(len(doc) - window + 1, 1)

    if not word_ids:
        return WindowStats(window, total, {})

    word_arr = np.asarray(word_ids, dtype=np.int64)
    # diff buffer per word over total+1 slots; rasterized to bits at the end
    marks = {w: np.zeros(total + 1, dtype=np.int32) for w in word_ids}
    for doc, off in zip(docs, offsets):
        L = len(doc)
        if L == 0:
            continue
        n_win = max(L - window + 1, 1)
        tokens = np.asarray(doc, dtype=np.int64)
        hit = np.isin(tokens, word_arr)
        for p in np.nonzero(hit)[0]:
            w = int(tokens[p])
            lo = max(0, int(p) - window + 1)
            hi = min(int(p), n_win - 1)
            diff = marks[w]
            diff[off + lo] += 1
            diff[off + hi + 1] -= 1
    postings = {}
    for w, diff in marks.items():
        member = np.cumsum(diff[:-1]) > 0
        postings[w] = np.packbits(member)
    return WindowStats(window, total, postings)


def npmi(w1: int, w2: int, stats: WindowStats, eps: float = DEFAULT_EPS) -> float:
    """Normalized PMI from window probabilities, clamped to [-1, 1].

    Zero marginal probability for either word is defined as 0.
    """
    p1 = stats.p(w1)
    p2 = stats.p(w2)
    if p1 == 0.0 or p2 == 0.0:
        return 0.0
    p12 = stats.p_pair(w1, w2)
    val = math.log((p12 + eps) / (p1 * p2)) / -math.log(p12 + eps)
    return min(1.0, max(-1.0, val))


def cv_topic(
    topic_words: Sequence[int],
    stats: WindowStats,
    eps: float = DEFAULT_EPS,
    gamma: float = 1.0,
) -> float:
    """C_V score of one top-word set via one-set segmentation.

    Context vector of word i holds NPMI(w_i, w_j)^gamma over all j; the score
    is the mean cosine between each context vector and their elementwise sum.
    A zero vector contributes cosine 0.
    """
    n = len(topic_words)
    if n < 2:
        raise ValueError("cv_topic needs at least 2 top words")
    mat = np.empty((n, n), dtype=np.float64)
    for i, wi in enumerate(topic_words):
        for j, wj in enumerate(topic_words):
            if j < i:
                mat[i, j] = mat[j, i]
            else:
                mat[i, j] = npmi(wi, wj, stats, eps)
    if gamma != 1.0:
        mat = np.sign(mat) * np.abs(mat) ** gamma
    v_sum = mat.sum(axis=0)
    sum_norm = np.linalg.norm(v_sum)
    cosines = np.zeros(n)
    for i in range(n):
        norm_i = np.linalg.norm(mat[i])
        if norm_i > 0 and sum_norm > 0:
            cosines[i] = float(mat[i] @ v_sum) / (norm_i * sum_norm)
    return float(cosines.mean())


def cv_model(
    top_word_lists: Sequence[Sequence[int]],
    docs: Sequence[Sequence[int]],
    window: int = DEFAULT_WINDOW,
    eps: float = DEFAULT_EPS,
) -> float:
    """Mean C_V over a model's per-topic top-word lists."""
    union: set[int] = set()
    for lst in top_word_lists:
        union.update(int(w) for w in lst)
    stats = window_stats(docs, union, window)
    return float(np.mean([cv_topic(lst, stats, eps) for lst in top_word_lists]))


@dataclass
class SweepResult:
    k_values: list[int]
    mean_cv: list[float]
    std_cv: list[float]
    runs: int
    scores: list[list[float]] = field(default_factory=list)  # per k, per run

    def to_rows(self) -> list[dict]:
        return [
            {"k": k, "mean_cv": m, "std_cv": s, "runs": self.runs}
            for k, m, s in zip(self.k_values, self.mean_cv, self.std_cv)
        ]

    def write_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.DictWriter(fh, fieldnames=["k", "mean_cv", "std_cv", "runs"])
            writer.writeheader()
            writer.writerows(self.to_rows())


def _fit_seed(seed: int, k: int, run: int) -> int:
    """Integer seed for one sweep fit, a pure function of (seed, k, run)."""
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(k, run))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def coherence_sweep(
    docs: Sequence[Sequence[int]],
    vocab_size: int,
    k_range: Sequence[int],
    runs: int,
    iterations: int = 500,
    alpha: float | None = None,
    beta: float = 0.01,
    window: int = DEFAULT_WINDOW,
    seed: int = 0,
    top_n: int = DEFAULT_TOP_N,
    workers: int | None = None,
) -> SweepResult:
    """Fit `runs` LDA models per k, score each with cv_model, aggregate.

    Fits run concurrently (the Gibbs kernel releases the GIL); every fit's
    seed is derived from (seed, k, run_index), so the result is identical for
    any execution order or parallelism degree.
    """
    ks = sorted(set(int(k) for k in k_range))
    if not ks:
        raise ValueError("k_range is empty")
    if runs < 1:
        raise ValueError("runs must be >= 1")

    def one_fit(k: int, run: int) -> float:
        config = LdaConfig(
            k=k, alpha=alpha, beta=beta, iterations=iterations, seed=_fit_seed(seed, k, run)
        )
        model = fit_lda(docs, vocab_size, config)
        lists = [top_words(model, t, top_n) for t in range(k)]
        return cv_model(lists, docs, window=window)

    jobs = [(k, r) for k in ks for r in range(runs)]
    scores: dict[tuple[int, int], float] = {}
    max_workers = workers if workers is not None else min(32, os.cpu_count() or 1)
    if max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            for job, score in zip(jobs, pool.map(lambda j: one_fit(*j), jobs)):
                scores[job] = score
    else:
        for job in jobs:
            scores[job] = one_fit(*job)

    per_k = [[scores[(k, r)] for r in range(runs)] for k in ks]
    return SweepResult(
        k_values=ks,
        mean_cv=[float(np.mean(s)) for s in per_k],
        std_cv=[float(np.std(s)) for s in per_k],
        runs=runs,
        scores=per_k,
    )


@dataclass(frozen=True)
class ElbowResult:
    k: int
    warning: bool = False


def select_k_elbow(sweep: SweepResult) -> ElbowResult:
    """Pick the k whose (k, mean) point bows farthest above the first-last chord.

    Distance is signed: points below the chord (dips) never win, so the rule
    finds the knee of a rising-then-saturating curve.  Ties go to the smaller
    k.  A monotone-decreasing curve, a collinear curve, or one that never
    rises above its chord has no elbow; the first k is returned with the
    warning flag set so a human can override from the emitted curve.
    """
    ks = np.asarray(sweep.k_values, dtype=np.float64)
    ys = np.asarray(sweep.mean_cv, dtype=np.float64)
    if ks.size < 3:
        raise ValueError("elbow selection needs at least 3 k values")
    if np.all(np.diff(ys) <= 0):
        return ElbowResult(k=sweep.k_values[0], warning=True)
    p1 = np.array([ks[0], ys[0]])
    p2 = np.array([ks[-1], ys[-1]])
    chord = p2 - p1
    chord_len = float(np.hypot(*chord))
    rel = np.stack([ks - p1[0], ys - p1[1]], axis=1)
    # cross product; positive = above the chord (k values ascend)
    dists = (chord[0] * rel[:, 1] - chord[1] * rel[:, 0]) / chord_len
    if float(dists.max()) <= 1e-12:
        return ElbowResult(k=sweep.k_values[0], warning=True)
    return ElbowResult(k=sweep.k_values[int(np.argmax(dists))], warning=False)
