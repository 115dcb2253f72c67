"""Graded multi-index enumeration and multi-index arithmetic."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb

import numpy as np
from scipy.special import gammaln

from hermitegf.errors import CapacityExceeded

MAX_INDICES = 10**7


def basis_count(d: int, j_max: int) -> int:
    """Number of multi-indices of total degree at most ``j_max`` in ``d`` dimensions."""
    if j_max < 0:
        return 0
    return comb(j_max + d, d)


def _compositions(n: int, d: int):
    # lexicographically descending in l_1, then l_2, ...
    if d == 1:
        yield (n,)
        return
    for first in range(n, -1, -1):
        for rest in _compositions(n - first, d - 1):
            yield (first,) + rest


@lru_cache(maxsize=64)
def _degree_block(n: int, d: int) -> np.ndarray:
    block = np.array(list(_compositions(n, d)), dtype=np.int64).reshape(-1, d)
    block.setflags(write=False)
    return block


@dataclass(frozen=True, eq=False)
class GradedIndexList:
    """All multi-indices with ``|l| <= j_max``, graded then lex-descending.

    Attributes
    ----------
    dim : int
    j_max : int
    indices : ndarray of int, shape (M, dim)
    """

    dim: int
    j_max: int
    indices: np.ndarray

    def __len__(self) -> int:
        return self.indices.shape[0]

    def __getitem__(self, i):
        return self.indices[i]

    @property
    def degrees(self) -> np.ndarray:
        return self.indices.sum(axis=1)

    def degree_start(self, n: int) -> int:
        """Position of the first index of total degree ``n``."""
        return basis_count(self.dim, n - 1)

    def log_factorials(self) -> np.ndarray:
        return gammaln(self.indices + 1.0).sum(axis=1)


def enumerate_graded(d: int, j_max: int) -> GradedIndexList:
    """Enumerate the graded multi-index list of dimension ``d`` up to degree ``j_max``.

    The list is prefix stable: the entries with ``|l| <= j - 1`` of the list for
    ``j`` are exactly the list for ``j - 1``.
    """
    if d < 1:
        raise ValueError("dimension must be >= 1")
    if j_max < 0:
        raise ValueError("j_max must be >= 0")
    count = basis_count(d, j_max)
    if count > MAX_INDICES:
        raise CapacityExceeded(f"{count} multi-indices for d={d}, j_max={j_max} exceeds {MAX_INDICES}")
    blocks = [_degree_block(n, d) for n in range(j_max + 1)]
    indices = np.concatenate(blocks, axis=0)
    indices.setflags(write=False)
    return GradedIndexList(dim=d, j_max=j_max, indices=indices)


def log_factorial_multi(l) -> float:
    """``sum_i ln(l_i!)``."""
    l = np.asarray(l, dtype=float)
    return float(gammaln(l + 1.0).sum())


def pow_multi(v, l) -> float:
    """``prod_i v_i ** l_i`` with ``0 ** 0 == 1``."""
    v = np.asarray(v, dtype=float)
    l = np.asarray(l)
    if v.shape != l.shape:
        raise ValueError("v and l must have the same length")
    with np.errstate(over="ignore"):
        return float(np.prod(np.power(v, l)))


def pow_multi_table(points, indices) -> np.ndarray:
    """Matrix ``W[k, j] = points[k] ** indices[j]`` (multi-index power), shape (N, M).

    Built column-wise from per-dimension power tables, so every entry is the
    same floating-point product as :func:`pow_multi`.
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    indices = np.asarray(indices)
    top = int(indices.max()) if indices.size else 0
    # powers[k, i, m] = points[k, i] ** m
    powers = np.power(points[:, :, None], np.arange(top + 1)[None, None, :])
    out = np.ones((points.shape[0], indices.shape[0]))
    with np.errstate(over="ignore"):
        for i in range(points.shape[1]):
            out *= powers[:, i, indices[:, i]]
    return out
