"""Plain-text edge lists: one ``src dst`` pair per line, ``#`` comments."""

from __future__ import annotations

import os
from pathlib import Path

import numba
import numpy as np

from .core import Graph


class EdgeListError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@numba.njit(cache=True)
def _parse(buf, comment):
    # returns (src, dst, count, bad_line); bad_line = 0 when everything parsed
    n = buf.size
    cap = 1024
    for i in range(n):
        if buf[i] == 10:
            cap += 1
    src = np.empty(cap, np.int64)
    dst = np.empty(cap, np.int64)
    m = 0
    line = 0
    i = 0
    ncomment = comment.size
    while i < n:
        line += 1
        j = i
        while j < n and buf[j] != 10:
            j += 1
        end = j
        if end > i and buf[end - 1] == 13:
            end -= 1
        p = i
        while p < end and (buf[p] == 32 or buf[p] == 9):
            p += 1
        is_comment = False
        if ncomment > 0 and p + ncomment <= end:
            is_comment = True
            for c in range(ncomment):
                if buf[p + c] != comment[c]:
                    is_comment = False
                    break
        if p < end and not is_comment:
            vals = np.zeros(2, np.int64)
            tok = 0
            while p < end:
                if tok == 2:
                    return src, dst, m, line
                if buf[p] < 48 or buf[p] > 57:
                    return src, dst, m, line
                v = 0
                while p < end and 48 <= buf[p] <= 57:
                    v = v * 10 + (buf[p] - 48)
                    p += 1
                if p < end and buf[p] != 32 and buf[p] != 9:
                    return src, dst, m, line
                vals[tok] = v
                tok += 1
                while p < end and (buf[p] == 32 or buf[p] == 9):
                    p += 1
            if tok != 2:
                return src, dst, m, line
            src[m] = vals[0]
            dst[m] = vals[1]
            m += 1
        i = j + 1
    return src, dst, m, 0


@numba.njit(cache=True)
def _format(src, dst):
    m = src.size
    total = 0
    for i in range(m):
        for v in (src[i], dst[i]):
            d = 1
            x = v
            while x >= 10:
                x //= 10
                d += 1
            total += d
        total += 2
    out = np.empty(total, np.uint8)
    pos = 0
    for i in range(m):
        for side in range(2):
            v = src[i] if side == 0 else dst[i]
            d = 1
            x = v
            while x >= 10:
                x //= 10
                d += 1
            for q in range(d - 1, -1, -1):
                out[pos + q] = 48 + v % 10
                v //= 10
            pos += d
            out[pos] = 32 if side == 0 else 10
            pos += 1
    return out


def load_edge_list(
    path: str | os.PathLike,
    *,
    comment_prefix: str = "#",
    index_base: int = 0,
    dedupe: bool = False,
    remap: bool = True,
    num_vertices: int | None = None,
) -> Graph:
    """Read an edge list.

    With ``remap`` (default) ids are compacted to ``[0, |V|)`` in ascending order of
    the file ids and the file ids are kept in ``Graph.original_ids``. Without it, ids
    are used as-is after subtracting ``index_base``; ``num_vertices`` then fixes |V|
    so isolated vertices survive a write/read round trip.
    """
    if index_base not in (0, 1):
        raise ValueError("index_base must be 0 or 1")
    raw = np.fromfile(Path(path), dtype=np.uint8)
    comment = np.frombuffer(comment_prefix.encode("utf-8"), dtype=np.uint8).copy()
    src, dst, m, bad = _parse(raw, comment)
    if bad:
        raise EdgeListError("expected two non-negative integer tokens", line=int(bad))
    if m == 0:
        raise EdgeListError(f"{path}: no edges")
    src, dst = src[:m] - index_base, dst[:m] - index_base
    if index_base and min(src.min(), dst.min()) < 0:
        raise EdgeListError("vertex id 0 in a one-indexed file")
    if dedupe:
        key = src * (int(max(src.max(), dst.max())) + 1) + dst
        _, first = np.unique(key, return_index=True)
        keep = np.sort(first)
        src, dst = src[keep], dst[keep]
        m = src.size
    if remap:
        ids, inv = np.unique(np.concatenate([src, dst]), return_inverse=True)
        return Graph(int(ids.size), inv[:m], inv[m:], original_ids=ids + index_base)
    n = int(max(src.max(), dst.max())) + 1
    if num_vertices is not None:
        if num_vertices < n:
            raise EdgeListError(f"vertex id {n - 1} exceeds declared vertex count {num_vertices}")
        n = num_vertices
    return Graph(n, src, dst)


def write_edge_list(g: Graph, path: str | os.PathLike, header: str | None = None) -> None:
    with open(path, "wb") as fh:
        if header:
            for line in header.splitlines():
                fh.write(f"# {line}\n".encode())
        fh.write(_format(g.src, g.dst).tobytes())
