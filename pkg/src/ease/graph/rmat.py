"""R-MAT generation and the training-suite presets."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from ..hashing import derive_seed
from .core import Graph

# (a, b, c, d) for C1..C9; d is fixed at 0.05, c is 0.34 (C1-C4) or 0.19 (C5-C9)
RMAT_COMBOS: dict[str, tuple[float, float, float, float]] = {
    "C1": (0.35, 0.26, 0.34, 0.05),
    "C2": (0.45, 0.16, 0.34, 0.05),
    "C3": (0.55, 0.06, 0.34, 0.05),
    "C4": (0.60, 0.01, 0.34, 0.05),
    "C5": (0.40, 0.36, 0.19, 0.05),
    "C6": (0.50, 0.26, 0.19, 0.05),
    "C7": (0.60, 0.16, 0.19, 0.05),
    "C8": (0.65, 0.11, 0.19, 0.05),
    "C9": (0.70, 0.06, 0.19, 0.05),
}

_M = 1_000_000

# |E| -> list of |V|
SMALL_SIZES: dict[int, list[int]] = {
    1 * _M: [2**i for i in range(15, 20)],
    40 * _M: [2**i for i in range(21, 26)],
    80 * _M: [2**i for i in range(21, 27)],
    120 * _M: [2**i for i in range(22, 27)],
    160 * _M: [2**i for i in range(22, 28)],
    200 * _M: [2**i for i in range(22, 28)],
}

LARGE_SIZES: dict[int, list[int]] = {
    100 * _M: [1_800_000, 2_500_000, 4_000_000, 10_000_000],
    200 * _M: [3_600_000, 5_000_000, 8_000_000, 20_000_000],
    300 * _M: [5_400_000, 7_500_000, 12_000_000, 30_000_000],
    400 * _M: [7_300_000, 10_000_000, 16_000_000, 40_000_000],
    500 * _M: [9_100_000, 12_500_000, 20_000_000, 50_000_000],
}


@dataclass(frozen=True)
class RmatConfig:
    a: float
    b: float
    c: float
    d: float
    num_vertices: int
    num_edges: int
    seed: int
    config_id: str = ""
    combo: str = ""
    # large-preset vertex counts are not powers of two; those draw on the next
    # power-of-two grid and reject out-of-range endpoints
    require_pow2: bool = True

    def __post_init__(self):
        probs = (self.a, self.b, self.c, self.d)
        if min(probs) < 0 or abs(sum(probs) - 1.0) > 1e-9:
            raise ValueError(f"R-MAT probabilities must be >= 0 and sum to 1, got {probs}")
        if self.num_vertices < 2 or self.num_edges < 1:
            raise ValueError("R-MAT needs at least 2 vertices and 1 edge")

    def to_dict(self) -> dict:
        return asdict(self)


def _is_pow2(n: int) -> bool:
    return n > 0 and n & (n - 1) == 0


def generate_rmat(config: RmatConfig) -> Graph:
    """Draw ``num_edges`` edges by recursive quadrant descent.

    Each level picks quadrant a/b/c/d (top-left, top-right, bottom-left,
    bottom-right) with the raw probabilities; no per-level noise. Duplicates and
    self-loops are kept so the edge count is exact.
    """
    n = config.num_vertices
    if config.require_pow2 and not _is_pow2(n):
        raise ValueError(f"num_vertices={n} is not a power of two")
    levels = max(1, math.ceil(math.log2(n)))
    t_a = config.a
    t_ab = config.a + config.b
    t_abc = config.a + config.b + config.c
    rng = np.random.default_rng(config.seed)

    out_src = np.empty(config.num_edges, np.int64)
    out_dst = np.empty(config.num_edges, np.int64)
    filled = 0
    while filled < config.num_edges:
        want = config.num_edges - filled
        src = np.zeros(want, np.int64)
        dst = np.zeros(want, np.int64)
        for _ in range(levels):
            r = rng.random(want)
            down = r >= t_ab  # bottom half: c or d
            right = ((r >= t_a) & (r < t_ab)) | (r >= t_abc)  # b or d
            src = (src << 1) | down
            dst = (dst << 1) | right
        ok = (src < n) & (dst < n)
        got = int(ok.sum())
        out_src[filled : filled + got] = src[ok]
        out_dst[filled : filled + got] = dst[ok]
        filled += got
    return Graph(n, out_src, out_dst)


def rmat_training_suite(preset: str, seed_base: int = 0, scale: float = 1) -> list[RmatConfig]:
    """All (|E|, |V|) size combos of a preset crossed with the nine parameter combos.

    ``scale`` divides every |V| and |E|; small-preset vertex counts are rounded to
    the nearest power of two so the grid stays exact.
    """
    if preset == "small":
        sizes, pow2 = SMALL_SIZES, True
    elif preset == "large":
        sizes, pow2 = LARGE_SIZES, False
    else:
        raise ValueError(f"unknown preset {preset!r}; expected 'small' or 'large'")
    if scale <= 0:
        raise ValueError("scale must be positive")

    configs = []
    for num_edges, vertex_list in sizes.items():
        e = max(1, int(round(num_edges / scale)))
        for num_vertices in vertex_list:
            v = num_vertices / scale
            v = 2 ** max(1, round(math.log2(v))) if pow2 else max(2, int(round(v)))
            for combo, (a, b, c, d) in RMAT_COMBOS.items():
                cid = f"{preset}_E{num_edges // _M}M_V{num_vertices}_{combo}"
                configs.append(
                    RmatConfig(
                        a, b, c, d, v, e,
                        seed=derive_seed("rmat", cid, seed_base),
                        config_id=cid, combo=combo, require_pow2=pow2,
                    )
                )
    return configs
