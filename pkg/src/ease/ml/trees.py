"""Regression trees as flat node arrays, with our own traversal and importance.

Split search is delegated to scikit-learn's CART; the fitted structure is copied
out so prediction, persistence and importance do not depend on its internals.
Like scikit-learn, inputs are rounded to float32 before threshold comparison.
"""

from __future__ import annotations

import base64
from dataclasses import dataclass

import numba
import numpy as np

LEAF = -1


def encode_array(a: np.ndarray) -> dict:
    a = np.ascontiguousarray(a)
    le = a.astype(a.dtype.newbyteorder("<"), copy=False)
    return {"dtype": le.dtype.str, "shape": list(a.shape), "b64": base64.b64encode(le.tobytes()).decode("ascii")}


def decode_array(d: dict) -> np.ndarray:
    raw = base64.b64decode(d["b64"])
    return np.frombuffer(raw, dtype=np.dtype(d["dtype"])).reshape(d["shape"]).astype(
        np.dtype(d["dtype"]).newbyteorder("="), copy=True
    )


@dataclass(frozen=True, eq=False)
class TreeArrays:
    left: np.ndarray
    right: np.ndarray
    feature: np.ndarray
    threshold: np.ndarray
    value: np.ndarray
    impurity: np.ndarray
    weight: np.ndarray

    FIELDS = ("left", "right", "feature", "threshold", "value", "impurity", "weight")

    @classmethod
    def from_sklearn(cls, est) -> "TreeArrays":
        t = est.tree_
        return cls(
            np.asarray(t.children_left, np.int64),
            np.asarray(t.children_right, np.int64),
            np.asarray(t.feature, np.int64),
            np.asarray(t.threshold, np.float64),
            np.asarray(t.value[:, 0, 0], np.float64),
            np.asarray(t.impurity, np.float64),
            np.asarray(t.weighted_n_node_samples, np.float64),
        )

    @property
    def node_count(self) -> int:
        return self.left.size

    def to_dict(self) -> dict:
        return {f: encode_array(getattr(self, f)) for f in self.FIELDS}

    @classmethod
    def from_dict(cls, d: dict) -> "TreeArrays":
        return cls(*(decode_array(d[f]) for f in cls.FIELDS))


@dataclass(frozen=True, eq=False)
class PackedForest:
    offsets: np.ndarray
    left: np.ndarray
    right: np.ndarray
    feature: np.ndarray
    threshold: np.ndarray
    value: np.ndarray

    @classmethod
    def pack(cls, trees: list[TreeArrays]) -> "PackedForest":
        sizes = np.array([t.node_count for t in trees], np.int64)
        offsets = np.zeros(len(trees) + 1, np.int64)
        np.cumsum(sizes, out=offsets[1:])

        def cat(name, dtype):
            if not trees:
                return np.zeros(0, dtype)
            return np.concatenate([getattr(t, name) for t in trees]).astype(dtype)

        return cls(
            offsets, cat("left", np.int64), cat("right", np.int64), cat("feature", np.int64),
            cat("threshold", np.float64), cat("value", np.float64),
        )

    def sum_predict(self, X: np.ndarray, scale: float = 1.0) -> np.ndarray:
        x = np.ascontiguousarray(np.asarray(X, np.float64).astype(np.float32).astype(np.float64))
        return _forest_sum(
            x, self.offsets, self.left, self.right, self.feature, self.threshold, self.value, scale
        )


@numba.njit(cache=True)
def _forest_sum(X, offsets, left, right, feature, threshold, value, scale):
    n = X.shape[0]
    out = np.zeros(n)
    for t in range(offsets.size - 1):
        base = offsets[t]
        for i in range(n):
            node = 0
            while left[base + node] != LEAF:
                j = base + node
                if X[i, feature[j]] <= threshold[j]:
                    node = left[j]
                else:
                    node = right[j]
            out[i] += scale * value[base + node]
    return out


def impurity_decrease(tree: TreeArrays, n_features: int) -> np.ndarray:
    """Per-feature MSE decrease summed over splits, weighted by node sample fraction."""
    imp = np.zeros(n_features)
    total = tree.weight[0] if tree.node_count else 1.0
    for j in range(tree.node_count):
        lj, rj = tree.left[j], tree.right[j]
        if lj == LEAF:
            continue
        dec = (
            tree.weight[j] * tree.impurity[j]
            - tree.weight[lj] * tree.impurity[lj]
            - tree.weight[rj] * tree.impurity[rj]
        )
        imp[tree.feature[j]] += dec / total
    return imp
