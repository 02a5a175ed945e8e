"""Subword-enriched skip-gram embeddings with negative sampling.

Words are represented by an id vector plus hashed character n-gram vectors;
the document vector is the plain sum of its word vectors.  Training is
single-threaded and deterministic given the seed; the SGD pair step is a
standalone jitted function so its analytic gradients can be checked against
finite differences on float64 inputs.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np
from numba import njit

from .corpus import Vocabulary
from .lda import _flatten
from .rng import pcg32_randint, spawn_generator, spawn_key

_FNV_OFFSET = 2166136261
_FNV_PRIME = 16777619

MODEL_MAGIC = b"TEMB"
MODEL_VERSION = 1

NEG_TABLE_SIZE = 1_000_000
NEG_POWER = 0.75


@dataclass(frozen=True)
class EmbedConfig:
    dim: int = 30
    ngram_min: int = 3
    ngram_max: int = 6
    bucket_count: int = 1 << 20
    window: int = 5
    negatives: int = 5
    epochs: int = 10
    learning_rate: float = 0.05
    min_count: int = 1  # applied at vocabulary build time, recorded here
    normalize: bool = False
    seed: int = 0

    def __post_init__(self) -> None:
        if self.dim < 1:
            raise ValueError("dim must be >= 1")
        if self.ngram_min < 1 or self.ngram_min > self.ngram_max:
            raise ValueError("need 1 <= ngram_min <= ngram_max")
        if self.bucket_count < 1:
            raise ValueError("bucket_count must be >= 1")
        if self.negatives < 1:
            raise ValueError("negatives must be >= 1")

    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "ngram_min": self.ngram_min,
            "ngram_max": self.ngram_max,
            "bucket_count": self.bucket_count,
            "window": self.window,
            "negatives": self.negatives,
            "epochs": self.epochs,
            "learning_rate": self.learning_rate,
            "min_count": self.min_count,
            "normalize": self.normalize,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "EmbedConfig":
        return cls(**d)


def subword_ngrams(word: str, nmin: int, nmax: int) -> list[str]:
    """Character n-grams of '<word>' ordered by length then position.

    The boundary-wrapped word itself is excluded when it shows up as a full
    n-gram (e.g. '<a>' for nmin <= 3 <= nmax).
    """
    if nmin < 1:
        raise ValueError("nmin must be >= 1")
    wrapped = f"<{word}>"
    grams: list[str] = []
    for n in range(nmin, nmax + 1):
        for i in range(len(wrapped) - n + 1):
            gram = wrapped[i:i + n]
            if gram == wrapped:
                continue
            grams.append(gram)
    return grams


def fnv1a32(data: bytes) -> int:
    """32-bit FNV-1a hash; fixed constants keep stored models portable."""
    h = _FNV_OFFSET
    for b in data:
        h = ((h ^ b) * _FNV_PRIME) & 0xFFFFFFFF
    return h


def bucket(ngram: str, bucket_count: int) -> int:
    """Hash an n-gram into [0, bucket_count) via FNV-1a over its UTF-8 bytes."""
    if bucket_count < 1:
        raise ValueError("bucket_count must be >= 1")
    return fnv1a32(ngram.encode("utf-8")) % bucket_count


@njit(cache=True, nogil=True)
def _sigmoid(x: float) -> float:
    if x >= 0.0:
        return 1.0 / (1.0 + np.exp(-x))
    e = np.exp(x)
    return e / (1.0 + e)


@njit(cache=True, nogil=True)
def _softplus(x: float) -> float:
    # log(1 + exp(x)) without overflow
    if x > 0.0:
        return x + np.log1p(np.exp(-x))
    return np.log1p(np.exp(x))


@njit(cache=True, nogil=True)
def _sgns_pair_loss(inp, out, rows, ctx, negs):
    """Loss of one (center rows, context, negatives) step, no updates."""
    dim = inp.shape[1]
    h = np.zeros(dim, dtype=np.float64)
    for i in range(rows.shape[0]):
        for d in range(dim):
            h[d] += inp[rows[i], d]
    pos_score = 0.0
    for d in range(dim):
        pos_score += out[ctx, d] * h[d]
    loss = _softplus(-pos_score)
    for j in range(negs.shape[0]):
        s = 0.0
        for d in range(dim):
            s += out[negs[j], d] * h[d]
        loss += _softplus(s)
    return loss


@njit(cache=True, nogil=True)
def _sgns_pair_apply(inp, out, rows, ctx, negs, lr):
    """One SGD step on a positive pair plus its negatives; returns the pre-update loss.

    The gradient w.r.t. the summed hidden vector is applied unchanged to every
    constituent input row (word id and each n-gram bucket).
    """
    dim = inp.shape[1]
    h = np.zeros(dim, dtype=np.float64)
    for i in range(rows.shape[0]):
        for d in range(dim):
            h[d] += inp[rows[i], d]
    grad_h = np.zeros(dim, dtype=np.float64)

    pos_score = 0.0
    for d in range(dim):
        pos_score += out[ctx, d] * h[d]
    loss = _softplus(-pos_score)
    g = _sigmoid(pos_score) - 1.0
    for d in range(dim):
        grad_h[d] += g * out[ctx, d]
        out[ctx, d] -= lr * g * h[d]

    for j in range(negs.shape[0]):
        n = negs[j]
        s = 0.0
        for d in range(dim):
            s += out[n, d] * h[d]
        loss += _softplus(s)
        g = _sigmoid(s)
        for d in range(dim):
            grad_h[d] += g * out[n, d]
            out[n, d] -= lr * g * h[d]

    for i in range(rows.shape[0]):
        for d in range(dim):
            inp[rows[i], d] -= lr * grad_h[d]
    return loss


@njit(cache=True, nogil=True)
def _train_kernel(
    tokens, offsets, rows_flat, rows_off, neg_table,
    epochs, window, negatives, lr0, rng, inp, out,
    epoch_loss, epoch_pairs,
):
    total_tokens = tokens.shape[0]
    total_steps = epochs * total_tokens
    n_docs = offsets.shape[0] - 1
    table_size = neg_table.shape[0]
    negs_buf = np.empty(negatives, dtype=np.int32)
    step = 0
    for ep in range(epochs):
        for d in range(n_docs):
            start = offsets[d]
            end = offsets[d + 1]
            for pos in range(start, end):
                lr = lr0 * (1.0 - step / total_steps)
                step += 1
                w = tokens[pos]
                radius = 1 + pcg32_randint(rng, window)
                lo = max(start, pos - radius)
                hi = min(end - 1, pos + radius)
                rows = rows_flat[rows_off[w]:rows_off[w + 1]]
                for c in range(lo, hi + 1):
                    if c == pos:
                        continue
                    ctx = tokens[c]
                    m = 0
                    for _ in range(negatives):
                        cand = neg_table[pcg32_randint(rng, table_size)]
                        if cand == ctx:
                            continue  # drawn sample collides with the positive; skipped
                        negs_buf[m] = cand
                        m += 1
                    loss = _sgns_pair_apply(inp, out, rows, ctx, negs_buf[:m], lr)
                    epoch_loss[ep] += loss
                    epoch_pairs[ep] += 1


def build_negative_table(frequencies: Sequence[int], size: int = NEG_TABLE_SIZE) -> np.ndarray:
    """Word-id table with multiplicity proportional to freq^0.75, deterministic."""
    freq = np.asarray(frequencies, dtype=np.float64)
    weights = freq ** NEG_POWER
    cum = np.cumsum(weights)
    cum /= cum[-1]
    positions = (np.arange(size, dtype=np.float64) + 0.5) / size
    return np.searchsorted(cum, positions, side="left").astype(np.int32)


def _word_rows(vocab: Vocabulary, config: EmbedConfig) -> tuple[np.ndarray, np.ndarray]:
    """Input-matrix row ids (word id, then V + bucket per n-gram) per vocab word."""
    V = len(vocab)
    rows: list[int] = []
    offsets = np.zeros(V + 1, dtype=np.int64)
    for wid in range(V):
        word = vocab.word(wid)
        rows.append(wid)
        for gram in subword_ngrams(word, config.ngram_min, config.ngram_max):
            rows.append(V + bucket(gram, config.bucket_count))
        offsets[wid + 1] = len(rows)
    return np.asarray(rows, dtype=np.int64), offsets


@dataclass
class EmbeddingModel:
    config: EmbedConfig
    vocab: Vocabulary
    input_vectors: np.ndarray  # (V + bucket_count, dim) float32
    output_vectors: np.ndarray  # (V, dim) float32
    epoch_losses: np.ndarray | None = None  # mean loss per epoch, training diagnostics

    def _sum_rows(self, word_id: int | None, grams: list[str]) -> np.ndarray:
        V = len(self.vocab)
        vec = np.zeros(self.config.dim, dtype=np.float32)
        if word_id is not None:
            vec += self.input_vectors[word_id]
        for gram in grams:
            vec += self.input_vectors[V + bucket(gram, self.config.bucket_count)]
        return vec

    def word_vector(self, word: str) -> np.ndarray:
        """Vector for any word; out-of-vocabulary words use n-gram buckets only."""
        grams = subword_ngrams(word, self.config.ngram_min, self.config.ngram_max)
        wid = self.vocab.word_to_index.get(word)
        return self._sum_rows(wid, grams)

    def doc_vector(self, words: Sequence[str]) -> np.ndarray:
        """Unnormalized sum of word vectors; empty input gives the zero vector."""
        vec = np.zeros(self.config.dim, dtype=np.float32)
        for w in words:
            vec += self.word_vector(w)
        if self.config.normalize:
            norm = float(np.linalg.norm(vec))
            if norm > 0:
                vec /= np.float32(norm)
        return vec

    def doc_vectors_by_id(self, docs: Sequence[Sequence[int]]) -> np.ndarray:
        """Document vectors for token-id documents, matching doc_vector bit for bit."""
        table = np.zeros((len(self.vocab), self.config.dim), dtype=np.float32)
        for wid in range(len(self.vocab)):
            table[wid] = self.word_vector(self.vocab.word(wid))
        vecs = np.zeros((len(docs), self.config.dim), dtype=np.float32)
        for i, doc in enumerate(docs):
            vec = np.zeros(self.config.dim, dtype=np.float32)
            for t in doc:
                vec += table[t]
            if self.config.normalize:
                norm = float(np.linalg.norm(vec))
                if norm > 0:
                    vec /= np.float32(norm)
            vecs[i] = vec
        return vecs


def word_vector(model: EmbeddingModel, word: str) -> np.ndarray:
    return model.word_vector(word)


def doc_vector(model: EmbeddingModel, words: Sequence[str]) -> np.ndarray:
    return model.doc_vector(words)


def train_embeddings(
    docs: Sequence[Sequence[int]], vocab: Vocabulary, config: EmbedConfig
) -> EmbeddingModel:
    """Skip-gram negative sampling over token-id documents.

    Per token occurrence the context radius is drawn uniformly from
    1..window; negatives come from the unigram^0.75 table, skipping draws
    that collide with the positive context.  Single-threaded and bitwise
    reproducible for a fixed seed.
    """
    docs = [d for d in docs]
    if not docs or all(len(d) == 0 for d in docs):
        raise ValueError("empty corpus")
    V = len(vocab)
    gen = spawn_generator(config.seed, 0)
    bound = 1.0 / config.dim
    inp = ((gen.random((V + config.bucket_count, config.dim), dtype=np.float32) * 2 - 1) * bound).astype(np.float32)
    out = np.zeros((V, config.dim), dtype=np.float32)

    tokens, offsets = _flatten([d for d in docs if len(d) > 0])
    rows_flat, rows_off = _word_rows(vocab, config)
    neg_table = build_negative_table(vocab.frequencies)
    epoch_loss = np.zeros(config.epochs, dtype=np.float64)
    epoch_pairs = np.zeros(config.epochs, dtype=np.int64)
    if config.epochs > 0:
        rng = spawn_key(config.seed, 1)
        _train_kernel(
            tokens, offsets, rows_flat, rows_off, neg_table,
            config.epochs, config.window, config.negatives, config.learning_rate,
            rng, inp, out, epoch_loss, epoch_pairs,
        )
    mean_losses = np.divide(
        epoch_loss, epoch_pairs, out=np.zeros_like(epoch_loss), where=epoch_pairs > 0
    )
    return EmbeddingModel(
        config=config, vocab=vocab, input_vectors=inp, output_vectors=out,
        epoch_losses=mean_losses,
    )


def save_model(model: EmbeddingModel, path: str | Path, corpus_hash: str | None = None) -> None:
    """Write the binary model file plus a JSON sidecar with config and corpus hash.

    Layout: magic, version, dim, V, bucket_count, ngram range as little-endian
    u32; input then output matrices as row-major little-endian float32; then
    the vocabulary table (word count, then per word a u32 UTF-8 byte length,
    the bytes, and a u64 frequency).
    """
    cfg = model.config
    V = len(model.vocab)
    path = Path(path)
    with open(path, "wb") as fh:
        fh.write(MODEL_MAGIC)
        fh.write(struct.pack("<6I", MODEL_VERSION, cfg.dim, V, cfg.bucket_count, cfg.ngram_min, cfg.ngram_max))
        fh.write(np.ascontiguousarray(model.input_vectors, dtype="<f4").tobytes())
        fh.write(np.ascontiguousarray(model.output_vectors, dtype="<f4").tobytes())
        fh.write(struct.pack("<I", V))
        for wid in range(V):
            raw = model.vocab.word(wid).encode("utf-8")
            fh.write(struct.pack("<I", len(raw)))
            fh.write(raw)
            fh.write(struct.pack("<Q", model.vocab.frequencies[wid]))
    sidecar = {"config": cfg.to_dict(), "corpus_hash": corpus_hash}
    Path(str(path) + ".json").write_text(
        json.dumps(sidecar, sort_keys=True, indent=1), encoding="utf-8"
    )


def load_model(path: str | Path) -> EmbeddingModel:
    path = Path(path)
    sidecar = json.loads(Path(str(path) + ".json").read_text(encoding="utf-8"))
    config = EmbedConfig.from_dict(sidecar["config"])
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != MODEL_MAGIC:
            raise ValueError(f"{path}: not an embedding model file")
        version, dim, V, bucket_count, nmin, nmax = struct.unpack("<6I", fh.read(24))
        if version != MODEL_VERSION:
            raise ValueError(f"{path}: unsupported model version {version}")
        if (dim, bucket_count, nmin, nmax) != (config.dim, config.bucket_count, config.ngram_min, config.ngram_max):
            raise ValueError(f"{path}: header disagrees with sidecar config")
        inp = np.frombuffer(fh.read((V + bucket_count) * dim * 4), dtype="<f4").reshape(V + bucket_count, dim).copy()
        out = np.frombuffer(fh.read(V * dim * 4), dtype="<f4").reshape(V, dim).copy()
        (count,) = struct.unpack("<I", fh.read(4))
        words: list[str] = []
        freqs: list[int] = []
        for _ in range(count):
            (nbytes,) = struct.unpack("<I", fh.read(4))
            words.append(fh.read(nbytes).decode("utf-8"))
            (freq,) = struct.unpack("<Q", fh.read(8))
            freqs.append(freq)
    vocab = Vocabulary(index_to_word=words, frequencies=freqs)
    return EmbeddingModel(config=config, vocab=vocab, input_vectors=inp, output_vectors=out)
