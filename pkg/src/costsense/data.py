"""LIBSVM-format data loading, per-sample normalization, and seeded shuffling.

Feature indices are 1-based on disk (LIBSVM convention) and kept 1-based on
the ``Example`` record; learners address weight vectors through the 0-based
``positions`` array derived once at construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class LibsvmFormatError(ValueError):
    """Malformed LIBSVM text: bad label, bad token, or bad index order."""


@dataclass(eq=False)
class Example:
    """One labeled sparse sample.

    ``indices`` are the 1-based on-disk feature indices, strictly increasing;
    ``values`` are the matching feature values.
    """

    label: int
    indices: np.ndarray
    values: np.ndarray
    positions: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        self.indices = np.asarray(self.indices, dtype=np.int64)
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.label not in (-1, 1):
            raise LibsvmFormatError(f"label must be +1 or -1, got {self.label}")
        if self.indices.size:
            if self.indices[0] < 1:
                raise LibsvmFormatError("feature indices must be >= 1")
            if np.any(np.diff(self.indices) <= 0):
                raise LibsvmFormatError("feature indices must be strictly increasing")
        self.positions = self.indices - 1

    @property
    def nnz(self) -> int:
        return int(self.indices.size)

    def norm(self) -> float:
        return float(np.linalg.norm(self.values))


@dataclass
class Dataset:
    """An ordered sequence of examples plus the counts the learners need."""

    examples: list[Example]
    d: int
    t_pos: int
    t_neg: int

    def __len__(self) -> int:
        return len(self.examples)

    def __getitem__(self, i: int) -> Example:
        return self.examples[i]


def parse_libsvm_line(line: str, lineno: int | None = None) -> Example:
    """Parse one ``<label> <index>:<value> ...`` line into an Example.

    Labels +1/1 map to +1 and -1 maps to -1; anything else is rejected
    (binary classification only).  A ``#`` starts a comment running to the
    end of the line.
    """
    where = f"line {lineno}: " if lineno is not None else ""
    hash_at = line.find("#")
    if hash_at >= 0:
        line = line[:hash_at]
    tokens = line.split()
    if not tokens:
        raise LibsvmFormatError(where + "empty line")
    try:
        raw_label = float(tokens[0])
    except ValueError:
        raise LibsvmFormatError(where + f"unparseable label {tokens[0]!r}") from None
    if raw_label == 1:
        label = 1
    elif raw_label == -1:
        label = -1
    else:
        raise LibsvmFormatError(where + f"non-binary label {tokens[0]!r}")

    indices = []
    values = []
    prev = 0
    for tok in tokens[1:]:
        idx_s, sep, val_s = tok.partition(":")
        if not sep:
            raise LibsvmFormatError(where + f"malformed token {tok!r}")
        try:
            idx = int(idx_s)
            val = float(val_s)
        except ValueError:
            raise LibsvmFormatError(where + f"malformed token {tok!r}") from None
        if idx < 1:
            raise LibsvmFormatError(where + f"feature index {idx} < 1")
        if idx <= prev:
            raise LibsvmFormatError(
                where + f"feature index {idx} not increasing (previous {prev})"
            )
        prev = idx
        indices.append(idx)
        values.append(val)
    return Example(label, np.array(indices, dtype=np.int64), np.array(values))


def to_libsvm_line(e: Example) -> str:
    """Serialize an Example back to LIBSVM text (round-trips with the parser)."""
    head = "+1" if e.label == 1 else "-1"
    pairs = " ".join(f"{i}:{float(v)!r}" for i, v in zip(e.indices, e.values))
    return head + (" " + pairs if pairs else "")


def normalize(e: Example) -> Example:
    """Scale features to unit Euclidean norm; the label is untouched."""
    n = e.norm()
    if n == 0.0:
        raise ValueError("cannot normalize an all-zero feature vector")
    return Example(e.label, e.indices.copy(), e.values / n)


def load_dataset(path, d_override: int | None = None) -> Dataset:
    """Load and per-sample normalize a LIBSVM file.

    ``d_override`` widens the dimensionality when a companion split uses
    higher feature indices than this file; it may not shrink it.
    """
    examples = []
    d = 0
    t_pos = 0
    t_neg = 0
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            if not raw.strip() or raw.lstrip().startswith("#"):
                continue
            e = parse_libsvm_line(raw, lineno=lineno)
            if e.nnz == 0 or e.norm() == 0.0:
                raise LibsvmFormatError(
                    f"line {lineno}: all-zero feature vector cannot be normalized"
                )
            e = normalize(e)
            examples.append(e)
            d = max(d, int(e.indices[-1]))
            if e.label == 1:
                t_pos += 1
            else:
                t_neg += 1
    if not examples:
        raise LibsvmFormatError(f"{path}: no examples found")
    if d_override is not None:
        if d_override < d:
            raise ValueError(f"d_override {d_override} below observed max index {d}")
        d = d_override
    return Dataset(examples, d, t_pos, t_neg)


def permutation(n: int, seed: int) -> np.ndarray:
    """Seeded ordering of 0..n-1, identical on every platform and version.

    The algorithm is pinned end to end: 64-bit words come straight off the
    Philox counter-based stream keyed by ``seed`` (a cross-platform,
    cross-version guarantee), each bounded draw uses masked rejection
    (``word & mask`` with the smallest all-ones mask covering the bound,
    rejected until in range), and the shuffle is backward Fisher-Yates
    (swap index i with a uniform draw from 0..i, for i = n-1 down to 1).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    order = np.arange(n, dtype=np.int64)
    if n == 1:
        return order
    bits = np.random.Philox(key=seed)
    buf = bits.random_raw(2 * n)
    k = 0
    for i in range(n - 1, 0, -1):
        mask = (1 << i.bit_length()) - 1
        while True:
            if k == buf.size:
                buf = bits.random_raw(n)
                k = 0
            j = int(buf[k]) & mask
            k += 1
            if j <= i:
                break
        order[i], order[j] = order[j], order[i]
    return order


def split_folds(ds_or_n, k: int, seed: int) -> list[np.ndarray]:
    """Partition indices 0..n-1 into k seeded folds of near-equal size.

    The first ``n mod k`` folds carry one extra element.
    """
    n = ds_or_n if isinstance(ds_or_n, int) else len(ds_or_n)
    if k < 2 or k > n:
        raise ValueError(f"fold count {k} out of range for {n} examples")
    order = permutation(n, seed)
    base, extra = divmod(n, k)
    folds = []
    start = 0
    for i in range(k):
        size = base + (1 if i < extra else 0)
        folds.append(order[start : start + size].copy())
        start += size
    return folds
