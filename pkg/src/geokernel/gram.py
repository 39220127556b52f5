"""Gaussian kernel evaluation and Gram matrix assembly.

The kernel is exp(-lambda d^2) for a metric distance d.  Gram matrices
carry their generating metadata (space, bandwidth, points) so that
algebraic operations can verify they are combining like with like.
"""

from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import spaces as sp

FOUR_PI_SQ = 4.0 * math.pi * math.pi


class GramError(ValueError):
    pass


@dataclass(frozen=True)
class KernelParam:
    """Bandwidth lambda with its rescaled form mu = 4 pi^2 lambda.

    mu is the natural parameter once circle distances are written as
    fractions of the circumference: exp(-lam d^2) = exp(-mu (d/2pi)^2).
    """

    lam: float
    mu: float = field(init=False)

    def __post_init__(self):
        if not (isinstance(self.lam, (int, float)) and math.isfinite(self.lam) and self.lam > 0):
            raise GramError("bandwidth lambda must be a positive real")
        object.__setattr__(self, "mu", FOUR_PI_SQ * float(self.lam))


def gaussian_kernel(param: KernelParam, d: float) -> float:
    """exp(-lambda d^2); rejects negative distances."""
    if d < 0:
        raise GramError(f"negative distance {d!r}")
    return math.exp(-param.lam * d * d)


def _point_id(space: sp.Space, point) -> str:
    return json.dumps(sp.point_to_json(space, point), sort_keys=True)


@dataclass(frozen=True)
class GramMatrix:
    """Symmetric kernel matrix plus how it was made.

    Diagonal entries are exactly 1 by construction and off-diagonal
    entries are computed once per unordered pair, then mirrored.
    """

    entries: np.ndarray
    space: sp.Space | None = None
    lam: float | None = None
    point_ids: tuple[str, ...] | None = None

    def __post_init__(self):
        e = np.asarray(self.entries, dtype=float)
        if e.ndim != 2 or e.shape[0] != e.shape[1]:
            raise GramError("entries must be a square matrix")
        object.__setattr__(self, "entries", e)

    @property
    def order(self) -> int:
        return self.entries.shape[0]

    def __getitem__(self, key):
        return self.entries[key]


def gram(space: sp.Space, points, param: KernelParam) -> GramMatrix:
    """Gram matrix entries[i][j] = exp(-lambda d(p_i, p_j)^2)."""
    points = list(points)
    n = len(points)
    if n < 1:
        raise GramError("need at least one point")
    for p in points:
        sp.require_valid(space, p)
    k = np.ones((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            value = gaussian_kernel(param, sp.distance(space, points[i], points[j]))
            k[i, j] = value
            k[j, i] = value
    ids = tuple(_point_id(space, p) for p in points)
    return GramMatrix(entries=k, space=space, lam=float(param.lam), point_ids=ids)


def _entries_of(k) -> np.ndarray:
    return k.entries if isinstance(k, GramMatrix) else np.asarray(k, dtype=float)


def hadamard(k1, k2) -> np.ndarray:
    """Entrywise product.  For two Gaussian Grams on the same points this
    is the Gram at the summed bandwidth."""
    a = _entries_of(k1)
    b = _entries_of(k2)
    if a.shape != b.shape:
        raise GramError(f"order mismatch: {a.shape} vs {b.shape}")
    if isinstance(k1, GramMatrix) and isinstance(k2, GramMatrix):
        if k1.point_ids is not None and k2.point_ids is not None:
            if k1.point_ids != k2.point_ids:
                raise GramError("Gram matrices were built on different point sets")
    return a * b


def principal_submatrix(k: GramMatrix, indices) -> GramMatrix:
    """Restriction of the kernel matrix to a subset of its points."""
    idx = list(indices)
    n = k.order
    if len(set(idx)) != len(idx):
        raise GramError("indices must be distinct")
    for i in idx:
        if not (0 <= i < n):
            raise GramError(f"index {i} out of range for order {n}")
    sub = k.entries[np.ix_(idx, idx)].copy()
    ids = tuple(k.point_ids[i] for i in idx) if k.point_ids is not None else None
    return GramMatrix(entries=sub, space=k.space, lam=k.lam, point_ids=ids)


# ---------------------------------------------------------------------------
# serialization

def gram_to_json(k: GramMatrix) -> dict:
    """{order, lambda, space, entries} with the lower triangle row-major."""
    n = k.order
    tri = [float(k.entries[i, j]) for i in range(n) for j in range(i + 1)]
    return {
        "order": n,
        "lambda": k.lam,
        "space": sp.space_to_json(k.space) if k.space is not None else None,
        "entries": tri,
    }


def gram_from_json(obj: dict) -> GramMatrix:
    n = int(obj["order"])
    tri = obj["entries"]
    if len(tri) != n * (n + 1) // 2:
        raise GramError(
            f"lower triangle of order {n} needs {n * (n + 1) // 2} entries, got {len(tri)}"
        )
    k = np.zeros((n, n))
    pos = 0
    for i in range(n):
        for j in range(i + 1):
            k[i, j] = k[j, i] = float(tri[pos])
            pos += 1
    space = sp.space_from_json(obj["space"]) if obj.get("space") else None
    lam = float(obj["lambda"]) if obj.get("lambda") is not None else None
    return GramMatrix(entries=k, space=space, lam=lam)


def gram_to_csv(k) -> str:
    """Dense headerless CSV, one matrix row per line."""
    e = _entries_of(k)
    buf = io.StringIO()
    for row in e:
        buf.write(",".join(repr(float(x)) for x in row))
        buf.write("\n")
    return buf.getvalue()


def gram_from_csv(text: str) -> np.ndarray:
    rows = [
        [float(cell) for cell in line.split(",")]
        for line in text.strip().splitlines()
        if line.strip()
    ]
    m = np.array(rows, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise GramError("CSV does not hold a square matrix")
    return m
