from __future__ import annotations

import numpy as np

EPS = 1e-10


def _pair(y, y_hat):
    y = np.asarray(y, dtype=np.float64).ravel()
    y_hat = np.asarray(y_hat, dtype=np.float64).ravel()
    if y.size != y_hat.size or y.size == 0:
        raise ValueError("y and y_hat need equal, nonzero lengths")
    return y, y_hat


def rmse(y, y_hat) -> float:
    y, y_hat = _pair(y, y_hat)
    return float(np.sqrt(np.mean((y - y_hat) ** 2)))


def mape(y, y_hat) -> float:
    y, y_hat = _pair(y, y_hat)
    return float(np.mean(np.abs(y - y_hat) / np.maximum(EPS, np.abs(y))))
