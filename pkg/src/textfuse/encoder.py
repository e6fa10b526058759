"""Document encoder: token ids -> context vector, with exact analytic gradients.

The encoder maps a document to a context vector ``c = relu(mean_t(E[x_t]) @ W)``
where ``E`` is a trainable word-embedding matrix and ``W`` a trainable
projection. This is the reference per-token encoder; anything with the same
contract (token ids in, context vector and gradients out) can substitute for
it, so recurrent encoders remain pluggable without touching the rest of the
system.

Forward and backward passes are pure functions of ``(tokens, params)`` and are
safe to call concurrently; parameter updates happen between batches under a
single writer.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .corpus import LabeledCorpus

PAD_TOKEN = "<pad>"
UNK_TOKEN = "<unk>"

_TOKEN_RE = re.compile(r"[a-z0-9]+")


@dataclass
class Vocabulary:
    """Bijective token<->id map with reserved PAD (id 0) and UNK (id 1)."""

    id_to_token: list[str]
    token_to_id: dict[str, int]

    def __len__(self) -> int:
        return len(self.id_to_token)

    @property
    def pad_id(self) -> int:
        return self.token_to_id[PAD_TOKEN]

    @property
    def unk_id(self) -> int:
        return self.token_to_id[UNK_TOKEN]

    @classmethod
    def from_tokens(cls, tokens: list[str]) -> "Vocabulary":
        id_to_token = [PAD_TOKEN, UNK_TOKEN] + list(tokens)
        token_to_id = {t: i for i, t in enumerate(id_to_token)}
        if len(token_to_id) != len(id_to_token):
            raise ValueError("duplicate tokens in vocabulary")
        return cls(id_to_token=id_to_token, token_to_id=token_to_id)


@dataclass
class EncoderParams:
    """Trainable encoder state: embeddings (|V|, n) and projection (n, m)."""

    embeddings: np.ndarray
    projection: np.ndarray

    @property
    def word_dim(self) -> int:
        return self.embeddings.shape[1]

    @property
    def latent_dim(self) -> int:
        return self.projection.shape[1]

    def copy(self) -> "EncoderParams":
        return EncoderParams(self.embeddings.copy(), self.projection.copy())


@dataclass
class EncoderGrads:
    """Gradients from one backward pass.

    Embedding gradients are sparse: ``embedding_ids`` lists the distinct token
    ids the document touched, ``embedding_grads`` the matching gradient rows.
    """

    projection: np.ndarray
    embedding_ids: np.ndarray
    embedding_grads: np.ndarray


def split_tokens(text: str) -> list[str]:
    """Lowercase and split on runs of non-alphanumeric characters."""
    return _TOKEN_RE.findall(text.lower())


def build_vocab(corpus: LabeledCorpus, min_count: int = 2) -> Vocabulary:
    """Vocabulary of all tokens with frequency >= min_count, plus PAD and UNK.

    Token order is deterministic: frequency descending, ties lexicographic.
    """
    if len(corpus) == 0:
        raise ValueError("cannot build a vocabulary from an empty corpus")
    counts: Counter[str] = Counter()
    for text in corpus.texts:
        counts.update(split_tokens(text))
    kept = [t for t, c in counts.items() if c >= min_count]
    kept.sort(key=lambda t: (-counts[t], t))
    return Vocabulary.from_tokens(kept)


def tokenize(text: str, vocab: Vocabulary) -> np.ndarray:
    """Token ids for a document; OOV maps to UNK, empty text to a single PAD."""
    words = split_tokens(text)
    if not words:
        return np.array([vocab.pad_id], dtype=np.int64)
    unk = vocab.unk_id
    return np.array([vocab.token_to_id.get(w, unk) for w in words], dtype=np.int64)


def init_params(vocab_size: int, word_dim: int, latent_dim: int, seed: int) -> EncoderParams:
    """Uniform random parameters in [-0.05, 0.05], deterministic given seed."""
    if vocab_size <= 0 or word_dim <= 0 or latent_dim <= 0:
        raise ValueError("dimensions must be positive")
    rng = np.random.default_rng(seed)
    return EncoderParams(
        embeddings=rng.uniform(-0.05, 0.05, size=(vocab_size, word_dim)),
        projection=rng.uniform(-0.05, 0.05, size=(word_dim, latent_dim)),
    )


def _forward(tokens: np.ndarray, params: EncoderParams):
    """Shared forward pass: (pooled embedding, pre-activation, context vector)."""
    if tokens.size == 0:
        raise ValueError("token sequence is empty (an empty document must be a single PAD)")
    if tokens.max() >= params.embeddings.shape[0] or tokens.min() < 0:
        raise ValueError("token id out of range of the embedding matrix")
    pooled = params.embeddings[tokens].mean(axis=0)
    pre = pooled @ params.projection
    return pooled, pre, np.maximum(pre, 0.0)


def encode(tokens: np.ndarray, params: EncoderParams) -> np.ndarray:
    """Context vector c = relu(mean_t(E[x_t]) @ W); component-wise >= 0."""
    return _forward(np.asarray(tokens), params)[2]


def encode_backward(tokens: np.ndarray, params: EncoderParams, grad_c: np.ndarray) -> EncoderGrads:
    """Gradients of a loss w.r.t. W and the touched rows of E.

    ``grad_c`` is the upstream gradient at the context vector. The relu mask
    zeroes gradient where the pre-activation is <= 0 (a tie at exactly zero is
    treated as inactive).
    """
    tokens = np.asarray(tokens)
    grad_c = np.asarray(grad_c, dtype=np.float64)
    if grad_c.shape != (params.latent_dim,):
        raise ValueError(
            f"grad_c has shape {grad_c.shape}, expected ({params.latent_dim},)"
        )
    pooled, pre, _ = _forward(tokens, params)
    grad_pre = np.where(pre > 0.0, grad_c, 0.0)
    grad_projection = np.outer(pooled, grad_pre)
    grad_pooled = params.projection @ grad_pre
    ids, counts = np.unique(tokens, return_counts=True)
    grad_rows = np.outer(counts / tokens.size, grad_pooled)
    return EncoderGrads(
        projection=grad_projection,
        embedding_ids=ids,
        embedding_grads=grad_rows,
    )
