from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class FeatureError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class FeatureMatrix:
    """Named columns in a fixed order; categorical columns hold strings."""

    columns: tuple
    data: dict = field(repr=False)
    categorical: frozenset = frozenset()

    def __post_init__(self):
        if set(self.columns) != set(self.data):
            raise FeatureError("column names and data keys differ")
        lengths = {len(self.data[c]) for c in self.columns}
        if len(lengths) > 1:
            raise FeatureError("columns have different lengths")
        for c in self.columns:
            if c in self.categorical:
                continue
            col = np.asarray(self.data[c], dtype=np.float64)
            if not np.all(np.isfinite(col)):
                raise FeatureError(f"column {c} has missing or non-finite values")

    @property
    def rows(self) -> int:
        return len(self.data[self.columns[0]]) if self.columns else 0

    @property
    def numeric_columns(self) -> tuple:
        return tuple(c for c in self.columns if c not in self.categorical)

    def take(self, idx) -> "FeatureMatrix":
        idx = np.asarray(idx)
        return FeatureMatrix(
            self.columns, {c: np.asarray(self.data[c])[idx] for c in self.columns}, self.categorical
        )

    @classmethod
    def from_records(cls, records, columns, categorical=()) -> "FeatureMatrix":
        """Build from dicts or objects with matching attributes."""
        records = list(records)
        get = (lambda r, c: r[c]) if records and isinstance(records[0], dict) else getattr
        data = {}
        for c in columns:
            vals = [get(r, c) for r in records]
            if c in categorical:
                data[c] = np.array([str(v) for v in vals], dtype=object)
            else:
                if any(v is None for v in vals):
                    raise FeatureError(f"column {c} has missing values")
                data[c] = np.array(vals, dtype=np.float64)
        return cls(tuple(columns), data, frozenset(categorical))


@dataclass(frozen=True, eq=False)
class Preprocessor:
    """z-score for numeric columns and one-hot for categorical ones.

    Encoded layout: numeric columns in recorded order, then one indicator per
    category (vocabulary sorted) for each categorical column in recorded order.
    """

    columns: tuple
    categorical: tuple
    mean: np.ndarray
    std: np.ndarray
    vocab: dict

    @classmethod
    def fit(cls, X: FeatureMatrix) -> "Preprocessor":
        num = X.numeric_columns
        M = np.column_stack([X.data[c] for c in num]).astype(np.float64) if num else np.zeros((X.rows, 0))
        mean = M.mean(axis=0) if X.rows else np.zeros(len(num))
        std = M.std(axis=0) if X.rows else np.ones(len(num))
        std = np.where(std > 0, std, 1.0)
        cats = tuple(c for c in X.columns if c in X.categorical)
        vocab = {c: tuple(sorted(set(X.data[c].tolist()))) for c in cats}
        return cls(tuple(X.columns), cats, mean, std, vocab)

    @property
    def numeric(self) -> tuple:
        return tuple(c for c in self.columns if c not in self.categorical)

    @property
    def encoded_names(self) -> list[str]:
        names = list(self.numeric)
        for c in self.categorical:
            names += [f"{c}={v}" for v in self.vocab[c]]
        return names

    def source_of(self) -> list[str]:
        """Original column for every encoded column."""
        src = list(self.numeric)
        for c in self.categorical:
            src += [c] * len(self.vocab[c])
        return src

    def check(self, X: FeatureMatrix) -> None:
        if tuple(X.columns) != self.columns:
            raise FeatureError(f"column mismatch: expected {list(self.columns)}, got {list(X.columns)}")
        if tuple(c for c in X.columns if c in X.categorical) != self.categorical:
            raise FeatureError("categorical flags differ from the fitted schema")

    def transform(self, X: FeatureMatrix, standardize: bool) -> np.ndarray:
        self.check(X)
        parts = []
        if self.numeric:
            M = np.column_stack([np.asarray(X.data[c], np.float64) for c in self.numeric])
            parts.append((M - self.mean) / self.std if standardize else M)
        for c in self.categorical:
            vals = np.asarray(X.data[c])
            vocab = self.vocab[c]
            idx = {v: i for i, v in enumerate(vocab)}
            unseen = sorted(set(vals.tolist()) - set(vocab))
            if unseen:
                raise FeatureError(f"unseen {c} value(s): {', '.join(unseen)}")
            oh = np.zeros((X.rows, len(vocab)))
            oh[np.arange(X.rows), [idx[v] for v in vals]] = 1.0
            parts.append(oh)
        return np.hstack(parts) if parts else np.zeros((X.rows, 0))

    def unstandardize(self, Z: np.ndarray) -> np.ndarray:
        return Z * self.std + self.mean

    def to_dict(self) -> dict:
        return {
            "columns": list(self.columns),
            "categorical": list(self.categorical),
            "mean": self.mean.tolist(),
            "std": self.std.tolist(),
            "vocab": {c: list(v) for c, v in self.vocab.items()},
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Preprocessor":
        return cls(
            tuple(d["columns"]),
            tuple(d["categorical"]),
            np.array(d["mean"], np.float64),
            np.array(d["std"], np.float64),
            {c: tuple(v) for c, v in d["vocab"].items()},
        )
