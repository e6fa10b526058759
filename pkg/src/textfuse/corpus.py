"""Labeled text corpora stored as one directory per class, one file per document."""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np


class CorpusError(ValueError):
    """Raised when a corpus directory or corpus contents are unusable."""


@dataclass
class LabeledCorpus:
    """A classification dataset: parallel lists of ids/texts plus integer labels.

    ``labels[i]`` indexes into ``class_names``. Document ids are unique and
    order is deterministic (documents are kept in load/creation order).
    """

    ids: list[str]
    texts: list[str]
    labels: np.ndarray
    class_names: list[str]
    name: str = "corpus"

    def __post_init__(self):
        self.labels = np.asarray(self.labels, dtype=np.int64)
        if len(self.ids) != len(self.texts) or len(self.ids) != len(self.labels):
            raise CorpusError("ids, texts and labels must have equal length")
        if len(self.ids) == 0:
            raise CorpusError("corpus is empty")
        if len(set(self.ids)) != len(self.ids):
            raise CorpusError("document ids are not unique")
        if self.labels.min() < 0 or self.labels.max() >= len(self.class_names):
            raise CorpusError("label out of range of class_names")

    def __len__(self) -> int:
        return len(self.ids)

    @property
    def num_classes(self) -> int:
        return len(self.class_names)

    def subset(self, indices, name: str | None = None) -> "LabeledCorpus":
        """New corpus containing the given documents, in the given order."""
        indices = np.asarray(indices, dtype=np.int64)
        return LabeledCorpus(
            ids=[self.ids[i] for i in indices],
            texts=[self.texts[i] for i in indices],
            labels=self.labels[indices],
            class_names=list(self.class_names),
            name=name if name is not None else self.name,
        )


def load_corpus(root: str | Path, name: str | None = None) -> LabeledCorpus:
    """Load a class-per-directory corpus.

    Every subdirectory of ``root`` is a class; every regular file inside it is
    one document, decoded as UTF-8 with undecodable bytes replaced. Document
    order is deterministic: class name ascending, then filename ascending.
    Ids are ``"<class>/<filename>"``. Unreadable files are skipped with a
    warning; fewer than two classes is an error.
    """
    root = Path(root)
    if not root.is_dir():
        raise CorpusError(f"not a directory: {root}")
    class_dirs = sorted(d for d in root.iterdir() if d.is_dir())
    if len(class_dirs) < 2:
        raise CorpusError(f"need >= 2 class directories under {root}, found {len(class_dirs)}")
    class_names = [d.name for d in class_dirs]
    ids: list[str] = []
    texts: list[str] = []
    labels: list[int] = []
    for label, d in enumerate(class_dirs):
        for f in sorted(p for p in d.iterdir() if not p.is_dir()):
            try:
                text = f.read_bytes().decode("utf-8", errors="replace")
            except OSError as exc:
                warnings.warn(f"skipping unreadable file {f}: {exc}")
                continue
            ids.append(f"{d.name}/{f.name}")
            texts.append(text)
            labels.append(label)
    if not ids:
        raise CorpusError(f"no readable documents under {root}")
    return LabeledCorpus(
        ids=ids,
        texts=texts,
        labels=np.array(labels, dtype=np.int64),
        class_names=class_names,
        name=name if name is not None else root.name,
    )
