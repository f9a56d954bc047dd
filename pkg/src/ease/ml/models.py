from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement

import numpy as np
from sklearn.tree import DecisionTreeRegressor

from ..hashing import derive_seed
from .trees import PackedForest, TreeArrays, decode_array, encode_array

FAMILIES = ("knn", "polyridge", "random_forest", "gbt")


class ModelError(ValueError):
    pass


@dataclass(frozen=True)
class ModelSpec:
    family: str
    params: tuple = ()

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ModelError(f"unknown model family {self.family!r}; known: {', '.join(FAMILIES)}")

    @classmethod
    def make(cls, family: str, **params) -> "ModelSpec":
        return cls(family, tuple(sorted(params.items())))

    def get(self, name, default=None):
        return dict(self.params).get(name, default)

    @property
    def label(self) -> str:
        inner = ",".join(f"{k}={'none' if v is None else v}" for k, v in self.params)
        return f"{self.family}({inner})"

    def to_dict(self) -> dict:
        return {"family": self.family, "params": dict(self.params)}

    @classmethod
    def from_dict(cls, d: dict) -> "ModelSpec":
        return cls.make(d["family"], **d["params"])


def _tree_seed(seed: int, index: int) -> int:
    return derive_seed("tree", seed, index) & 0x7FFFFFFF


class KNN:
    standardize = True

    def __init__(self, k_nn: int = 5):
        if k_nn < 1:
            raise ModelError("k_nn must be >= 1")
        self.k_nn = int(k_nn)
        self.Z = self.y = None

    def fit(self, Z, y, seed=0):
        self.Z = np.asarray(Z, np.float64).copy()
        self.y = np.asarray(y, np.float64).copy()
        return self

    def predict(self, Z, chunk: int = 64):
        Z = np.asarray(Z, np.float64)
        k = min(self.k_nn, self.y.size)
        out = np.empty(Z.shape[0])
        for lo in range(0, Z.shape[0], chunk):
            q = Z[lo:lo + chunk]
            d = ((q[:, None, :] - self.Z[None, :, :]) ** 2).sum(axis=2)
            # stable sort: equal distances resolve to the lower training index
            nn = np.argsort(d, axis=1, kind="stable")[:, :k]
            out[lo:lo + chunk] = self.y[nn].mean(axis=1)
        return out

    def to_dict(self):
        return {"k_nn": self.k_nn, "Z": encode_array(self.Z), "y": encode_array(self.y)}

    @classmethod
    def from_dict(cls, d):
        m = cls(d["k_nn"])
        m.Z, m.y = decode_array(d["Z"]), decode_array(d["y"])
        return m


def poly_terms(n_features: int, degree: int) -> list[tuple]:
    """Monomials of degree 1..d as feature-index tuples; the intercept is implicit."""
    terms = []
    for d in range(1, degree + 1):
        terms += list(combinations_with_replacement(range(n_features), d))
    return terms


def poly_expand(Z: np.ndarray, terms: list[tuple]) -> np.ndarray:
    A = np.ones((Z.shape[0], len(terms) + 1))
    for j, t in enumerate(terms, start=1):
        col = A[:, j]
        for f in t:
            col *= Z[:, f]
    return A


class PolyRidge:
    standardize = True

    def __init__(self, degree: int = 2, lam: float = 1e-3):
        if degree < 1:
            raise ModelError("degree must be >= 1")
        if lam < 0:
            raise ModelError("lam must be >= 0")
        self.degree, self.lam = int(degree), float(lam)
        self.terms = self.coef = None

    def fit(self, Z, y, seed=0):
        Z = np.asarray(Z, np.float64)
        self.terms = poly_terms(Z.shape[1], self.degree)
        A = poly_expand(Z, self.terms)
        G = A.T @ A
        penalty = np.full(A.shape[1], self.lam)
        penalty[0] = 0.0  # intercept is not shrunk
        G[np.diag_indices_from(G)] += penalty
        if self.lam == 0 and np.linalg.matrix_rank(A) < A.shape[1]:
            raise ModelError("singular ridge system: features are collinear; use lam > 0")
        try:
            self.coef = np.linalg.solve(G, A.T @ np.asarray(y, np.float64))
        except np.linalg.LinAlgError:
            raise ModelError("singular ridge system; use lam > 0") from None
        return self

    def predict(self, Z):
        return poly_expand(np.asarray(Z, np.float64), self.terms) @ self.coef

    def to_dict(self):
        return {
            "degree": self.degree,
            "lam": self.lam,
            "terms": [list(t) for t in self.terms],
            "coef": self.coef.tolist(),
        }

    @classmethod
    def from_dict(cls, d):
        m = cls(d["degree"], d["lam"])
        m.terms = [tuple(t) for t in d["terms"]]
        m.coef = np.array(d["coef"], np.float64)
        return m


class _TreeEnsemble:
    standardize = False
    trees: list

    def _pack(self):
        self._packed = PackedForest.pack(self.trees)

    def trees_to_dict(self):
        return [t.to_dict() for t in self.trees]


class RandomForest(_TreeEnsemble):
    def __init__(self, n_trees: int = 100, max_depth=None, min_samples_leaf: int = 1):
        if n_trees < 1:
            raise ModelError("n_trees must be >= 1")
        self.n_trees = int(n_trees)
        self.max_depth = None if max_depth is None else int(max_depth)
        self.min_samples_leaf = int(min_samples_leaf)
        self.trees = []
        self.n_features = 0

    def fit(self, Z, y, seed=0):
        Z = np.asarray(Z, np.float64)
        y = np.asarray(y, np.float64)
        n = y.size
        self.n_features = Z.shape[1]
        self.trees = []
        for t in range(self.n_trees):
            # the bootstrap depends on (seed, tree index) only, never on row order
            idx = np.random.default_rng([seed & 0xFFFFFFFF, t]).integers(0, n, n)
            est = DecisionTreeRegressor(
                max_depth=self.max_depth,
                min_samples_leaf=self.min_samples_leaf,
                random_state=_tree_seed(seed, t),
            ).fit(Z[idx], y[idx])
            self.trees.append(TreeArrays.from_sklearn(est))
        self._pack()
        return self

    def predict(self, Z):
        return self._packed.sum_predict(Z) / self.n_trees

    def to_dict(self):
        return {
            "n_trees": self.n_trees,
            "max_depth": self.max_depth,
            "min_samples_leaf": self.min_samples_leaf,
            "n_features": self.n_features,
            "trees": self.trees_to_dict(),
        }

    @classmethod
    def from_dict(cls, d):
        m = cls(d["n_trees"], d["max_depth"], d["min_samples_leaf"])
        m.n_features = d["n_features"]
        m.trees = [TreeArrays.from_dict(t) for t in d["trees"]]
        m._pack()
        return m


class GradientBoosting(_TreeEnsemble):
    """Least-squares boosting: each tree fits the current residuals."""

    def __init__(self, n_trees: int = 200, rate: float = 0.1, depth: int = 3):
        if n_trees < 1 or not (0 < rate <= 1) or depth < 1:
            raise ModelError("need n_trees >= 1, 0 < rate <= 1, depth >= 1")
        self.n_trees, self.rate, self.depth = int(n_trees), float(rate), int(depth)
        self.init = 0.0
        self.trees = []

    def fit(self, Z, y, seed=0):
        Z = np.asarray(Z, np.float64)
        y = np.asarray(y, np.float64)
        self.init = float(y.mean())
        F = np.full(y.size, self.init)
        self.trees = []
        for t in range(self.n_trees):
            est = DecisionTreeRegressor(max_depth=self.depth, random_state=_tree_seed(seed, t))
            est.fit(Z, y - F)
            F += self.rate * est.predict(Z)
            self.trees.append(TreeArrays.from_sklearn(est))
        self._pack()
        return self

    def predict(self, Z):
        return self.init + self._packed.sum_predict(Z, self.rate)

    def to_dict(self):
        return {
            "n_trees": self.n_trees,
            "rate": self.rate,
            "depth": self.depth,
            "init": self.init,
            "trees": self.trees_to_dict(),
        }

    @classmethod
    def from_dict(cls, d):
        m = cls(d["n_trees"], d["rate"], d["depth"])
        m.init = d["init"]
        m.trees = [TreeArrays.from_dict(t) for t in d["trees"]]
        m._pack()
        return m


REGRESSORS = {"knn": KNN, "polyridge": PolyRidge, "random_forest": RandomForest, "gbt": GradientBoosting}


def make_regressor(spec: ModelSpec):
    return REGRESSORS[spec.family](**dict(spec.params))
