"""Catalog of metric spaces: descriptors, point validation, exact distances.

Each space is a small frozen descriptor; points are plain payloads (an
angle, a unit vector, an orthonormal matrix, an SPD matrix).  Distances
follow the closed-form geodesic or matrix-metric formulas, with inner
products clamped to [-1, 1] and an error raised only when the excess
betrays genuinely non-unit input.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .precision import DOUBLE_DIGITS, number_from_json, number_to_json
from .spectral import jacobi_eigensystem

TWO_PI = 2.0 * math.pi

# arccos inputs may exceed 1 by rounding; beyond this the input was bad
CLAMP_EXCESS = 1e-8
# cos^2 eigenvalues this close to 1 read as a zero principal angle
ANGLE_SNAP = 4e-15

UNIT_NORM_TOL = 1e-12
ORTHONORMAL_TOL = 1e-10
SYMMETRY_TOL = 1e-12

SPD_SAMPLE_RIDGE = 1e-6


class InvalidSpaceError(ValueError):
    """Descriptor parameters outside their allowed ranges."""


class InvalidPointError(ValueError):
    """Point payload fails the invariants of its space."""


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise InvalidSpaceError(message)


@dataclass(frozen=True)
class Circle:
    """Circle of circumference 2*pi*scale; points are angles in [0, 2*pi)."""

    scale: float = 1.0
    variant = "circle"

    def __post_init__(self):
        _require(
            isinstance(self.scale, (int, float))
            and math.isfinite(self.scale)
            and self.scale > 0,
            "circle scale must be a positive real",
        )


@dataclass(frozen=True)
class Sphere:
    """Unit n-sphere in R^(n+1) with the great-circle (arc) distance."""

    n: int
    variant = "sphere"

    def __post_init__(self):
        _require(isinstance(self.n, int) and self.n >= 1, "sphere needs n >= 1")


@dataclass(frozen=True)
class ProjectiveSpace:
    """Real projective n-space: antipodal unit vectors identified."""

    n: int
    variant = "projective"

    def __post_init__(self):
        _require(isinstance(self.n, int) and self.n >= 1, "projective needs n >= 1")


@dataclass(frozen=True)
class Grassmannian:
    """k-planes in R^n; metric is principal_angle (geodesic) or projection."""

    k: int
    n: int
    metric: str = "principal_angle"
    variant = "grassmannian"

    def __post_init__(self):
        _require(
            isinstance(self.k, int) and isinstance(self.n, int) and 1 <= self.k < self.n,
            "grassmannian needs 1 <= k < n",
        )
        _require(
            self.metric in ("principal_angle", "projection"),
            f"unknown grassmannian metric {self.metric!r}",
        )


@dataclass(frozen=True)
class SpdMatrices:
    """Symmetric positive definite n x n matrices under a chosen metric."""

    n: int
    metric: str = "frobenius"
    variant = "spd"

    def __post_init__(self):
        _require(isinstance(self.n, int) and self.n >= 1, "spd needs n >= 1")
        _require(
            self.metric in ("frobenius", "log_euclidean", "stein"),
            f"unknown spd metric {self.metric!r}",
        )


@dataclass(frozen=True)
class Euclidean:
    n: int
    variant = "euclidean"

    def __post_init__(self):
        _require(isinstance(self.n, int) and self.n >= 1, "euclidean needs n >= 1")


@dataclass(frozen=True)
class FlatTorus:
    """Product of two unit circles; points are angle pairs, distances add
    in quadrature.  Serves as the flat target that still contains an
    isometric circle."""

    variant = "torus"


Space = Circle | Sphere | ProjectiveSpace | Grassmannian | SpdMatrices | Euclidean | FlatTorus


# ---------------------------------------------------------------------------
# validation

def _angle_violation(value) -> str | None:
    try:
        theta = float(value)
    except (TypeError, ValueError):
        return "angle payload is not a real number"
    if not math.isfinite(theta):
        return "angle is not finite"
    if not (0.0 <= theta < TWO_PI):
        return "angle outside [0, 2*pi)"
    return None


def validate_point(space: Space, point) -> str | None:
    """None if the payload satisfies its space's invariants, else the
    violated invariant spelled out."""
    if isinstance(space, Circle):
        return _angle_violation(point)

    if isinstance(space, FlatTorus):
        try:
            a, b = point
        except (TypeError, ValueError):
            return "torus point must be a pair of angles"
        return _angle_violation(a) or _angle_violation(b)

    if isinstance(space, (Sphere, ProjectiveSpace)):
        v = np.asarray(point, dtype=float)
        if v.shape != (space.n + 1,):
            return f"expected vector of length {space.n + 1}, got shape {v.shape}"
        if not np.all(np.isfinite(v)):
            return "vector has non-finite entries"
        if abs(float(np.linalg.norm(v)) - 1.0) > UNIT_NORM_TOL:
            return "norm != 1"
        return None

    if isinstance(space, Grassmannian):
        a = np.asarray(point, dtype=float)
        if a.shape != (space.n, space.k):
            return f"expected {space.n}x{space.k} representative, got shape {a.shape}"
        if not np.all(np.isfinite(a)):
            return "representative has non-finite entries"
        gram = a.T @ a
        if float(np.max(np.abs(gram - np.eye(space.k)))) > ORTHONORMAL_TOL:
            return "columns not orthonormal"
        return None

    if isinstance(space, SpdMatrices):
        m = np.asarray(point, dtype=float)
        if m.shape != (space.n, space.n):
            return f"expected {space.n}x{space.n} matrix, got shape {m.shape}"
        if not np.all(np.isfinite(m)):
            return "matrix has non-finite entries"
        scale = max(1.0, float(np.max(np.abs(m))))
        if float(np.max(np.abs(m - m.T))) > SYMMETRY_TOL * scale:
            return "not symmetric"
        try:
            np.linalg.cholesky(m)
        except np.linalg.LinAlgError:
            return "not positive definite"
        return None

    if isinstance(space, Euclidean):
        v = np.asarray(point, dtype=float)
        if v.shape != (space.n,):
            return f"expected vector of length {space.n}, got shape {v.shape}"
        if not np.all(np.isfinite(v)):
            return "vector has non-finite entries"
        return None

    raise InvalidSpaceError(f"unknown space {space!r}")


def require_valid(space: Space, point) -> None:
    violation = validate_point(space, point)
    if violation is not None:
        raise InvalidPointError(f"{space.variant}: {violation}")


# ---------------------------------------------------------------------------
# distances

def _unit_angle(p: np.ndarray, q: np.ndarray) -> float:
    """Angle between unit vectors: arccos of the inner product, evaluated
    as 2*atan2(|p-q|, |p+q|).

    The direct arccos turns rounding in a near-collinear inner product
    into ~1e-8 of angle; the half-angle form keeps equal inputs at
    exactly 0 and opposite inputs at exactly pi.
    """
    dot = float(np.dot(p, q))
    if abs(dot) > 1.0 + CLAMP_EXCESS:
        raise InvalidPointError(
            f"inner product {dot!r} exceeds 1 beyond rounding; non-unit input"
        )
    return 2.0 * math.atan2(
        float(np.linalg.norm(p - q)), float(np.linalg.norm(p + q))
    )


def circle_arc(theta_p: float, theta_q: float, scale: float = 1.0) -> float:
    """Shorter arc between two angles, scaled."""
    delta = abs(theta_p - theta_q)
    return scale * min(delta, TWO_PI - delta)


def matrix_log(m: np.ndarray) -> np.ndarray:
    """Log of an SPD matrix through its eigensystem."""
    values, vectors = jacobi_eigensystem(m)
    if values[0] <= 0.0:
        raise InvalidPointError("matrix log needs strictly positive eigenvalues")
    return (vectors * np.log(values)) @ vectors.T


def principal_angles(a, b) -> np.ndarray:
    """Principal angles between the column spans of two orthonormal
    representatives, ascending in angle.

    cos(theta_i) are the singular values of A^T B, obtained as square
    roots of the eigenvalues of (A^T B)^T (A^T B) clamped to [0, 1].
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    m = a.T @ b
    values, _ = jacobi_eigensystem(m.T @ m)
    angles = []
    for lam in values:
        if lam > 1.0 + CLAMP_EXCESS:
            raise InvalidPointError(
                f"cos^2 eigenvalue {lam!r} exceeds 1 beyond rounding"
            )
        if lam >= 1.0 - ANGLE_SNAP:
            # below the eigensolver's backward error the cosine route
            # cannot resolve the angle from zero; identical spans must
            # land at exactly zero
            angles.append(0.0)
            continue
        sigma = math.sqrt(min(1.0, max(0.0, float(lam))))
        angles.append(math.acos(sigma))
    # eigenvalues ascend, so cosines ascend and angles descend; flip
    return np.array(sorted(angles))


def distance(space: Space, p, q) -> float:
    """Metric distance between two valid points of the space."""
    require_valid(space, p)
    require_valid(space, q)

    if isinstance(space, Circle):
        return circle_arc(float(p), float(q), space.scale)

    if isinstance(space, FlatTorus):
        d1 = circle_arc(float(p[0]), float(q[0]))
        d2 = circle_arc(float(p[1]), float(q[1]))
        return math.hypot(d1, d2)

    if isinstance(space, Sphere):
        pa = np.asarray(p, dtype=float)
        qa = np.asarray(q, dtype=float)
        return _unit_angle(pa, qa)

    if isinstance(space, ProjectiveSpace):
        pa = np.asarray(p, dtype=float)
        qa = np.asarray(q, dtype=float)
        # lines: pick the representative on the same side first
        if float(np.dot(pa, qa)) < 0.0:
            qa = -qa
        return _unit_angle(pa, qa)

    if isinstance(space, Grassmannian):
        a = np.asarray(p, dtype=float)
        b = np.asarray(q, dtype=float)
        if space.metric == "projection":
            diff = a @ a.T - b @ b.T
            return float(np.linalg.norm(diff))
        theta = principal_angles(a, b)
        return math.sqrt(float(np.dot(theta, theta)))

    if isinstance(space, SpdMatrices):
        a = np.asarray(p, dtype=float)
        b = np.asarray(q, dtype=float)
        if space.metric == "frobenius":
            return float(np.linalg.norm(a - b))
        if space.metric == "log_euclidean":
            return float(np.linalg.norm(matrix_log(a) - matrix_log(b)))
        from .stein import stein_divergence  # deferred: stein builds on this module

        return math.sqrt(max(0.0, stein_divergence(a, b)))

    if isinstance(space, Euclidean):
        diff = np.asarray(p, dtype=float) - np.asarray(q, dtype=float)
        return float(np.linalg.norm(diff))

    raise InvalidSpaceError(f"unknown space {space!r}")


# ---------------------------------------------------------------------------
# point construction

def circle_equispaced(count: int) -> list[float]:
    """Angles 2*pi*k/count for k = 0..count-1."""
    if not isinstance(count, int) or count < 2:
        raise InvalidSpaceError("equispaced circle needs an integer count >= 2")
    return [TWO_PI * k / count for k in range(count)]


def equispaced_order(angles) -> int | None:
    """count if the angles are exactly the equispaced family 2*pi*k/count
    in construction order (within 1e-12 each), else None."""
    n = len(angles)
    if n < 2:
        return None
    for k, theta in enumerate(angles):
        if abs(float(theta) - TWO_PI * k / n) > 1e-12:
            return None
    return n


def sample_points(space: Space, seed: int, count: int) -> list:
    """Deterministic random points, all valid for the space."""
    if count < 1:
        raise InvalidSpaceError("count must be >= 1")
    rng = np.random.default_rng(seed)

    if isinstance(space, Circle):
        return [float(t) for t in rng.uniform(0.0, TWO_PI, count)]

    if isinstance(space, FlatTorus):
        pairs = rng.uniform(0.0, TWO_PI, (count, 2))
        return [(float(a), float(b)) for a, b in pairs]

    if isinstance(space, (Sphere, ProjectiveSpace)):
        points = []
        while len(points) < count:
            v = rng.standard_normal(space.n + 1)
            norm = float(np.linalg.norm(v))
            if norm < 1e-8:
                continue
            points.append(v / norm)
        return points

    if isinstance(space, Grassmannian):
        points = []
        for _ in range(count):
            g = rng.standard_normal((space.n, space.k))
            q, r = np.linalg.qr(g)
            # canonical representative: positive diagonal in R
            signs = np.sign(np.diag(r))
            signs[signs == 0.0] = 1.0
            points.append(q * signs)
        return points

    if isinstance(space, SpdMatrices):
        points = []
        for _ in range(count):
            g = rng.standard_normal((space.n, space.n))
            m = g @ g.T + SPD_SAMPLE_RIDGE * np.eye(space.n)
            points.append((m + m.T) / 2.0)
        return points

    if isinstance(space, Euclidean):
        return [rng.standard_normal(space.n) for _ in range(count)]

    raise InvalidSpaceError(f"unknown space {space!r}")


# ---------------------------------------------------------------------------
# text and JSON forms

def parse_space(text: str) -> Space:
    """Parse the CLI space syntax.

    circle[:scale] | sphere:n | projective:n | grassmann:k,n[:metric]
    | spd:n[:metric] | euclidean:n | torus
    """
    parts = text.strip().split(":")
    head = parts[0].lower()
    try:
        if head == "circle":
            if len(parts) == 1:
                return Circle()
            return Circle(scale=float(parts[1]))
        if head == "sphere":
            return Sphere(n=int(parts[1]))
        if head == "projective":
            return ProjectiveSpace(n=int(parts[1]))
        if head in ("grassmann", "grassmannian"):
            k_str, n_str = parts[1].split(",")
            metric = parts[2] if len(parts) > 2 else "principal_angle"
            return Grassmannian(k=int(k_str), n=int(n_str), metric=metric)
        if head == "spd":
            metric = parts[2] if len(parts) > 2 else "frobenius"
            return SpdMatrices(n=int(parts[1]), metric=metric)
        if head == "euclidean":
            return Euclidean(n=int(parts[1]))
        if head == "torus":
            return FlatTorus()
    except (IndexError, ValueError) as exc:
        raise InvalidSpaceError(f"cannot parse space {text!r}: {exc}") from None
    raise InvalidSpaceError(f"unknown space {text!r}")


def space_to_json(space: Space) -> dict:
    if isinstance(space, Circle):
        return {"variant": "circle", "scale": space.scale}
    if isinstance(space, Sphere):
        return {"variant": "sphere", "n": space.n}
    if isinstance(space, ProjectiveSpace):
        return {"variant": "projective", "n": space.n}
    if isinstance(space, Grassmannian):
        return {"variant": "grassmannian", "k": space.k, "n": space.n, "metric": space.metric}
    if isinstance(space, SpdMatrices):
        return {"variant": "spd", "n": space.n, "metric": space.metric}
    if isinstance(space, Euclidean):
        return {"variant": "euclidean", "n": space.n}
    if isinstance(space, FlatTorus):
        return {"variant": "torus"}
    raise InvalidSpaceError(f"unknown space {space!r}")


def space_from_json(obj: dict) -> Space:
    variant = obj.get("variant")
    if variant == "circle":
        return Circle(scale=float(obj.get("scale", 1.0)))
    if variant == "sphere":
        return Sphere(n=int(obj["n"]))
    if variant == "projective":
        return ProjectiveSpace(n=int(obj["n"]))
    if variant == "grassmannian":
        return Grassmannian(
            k=int(obj["k"]), n=int(obj["n"]),
            metric=obj.get("metric", "principal_angle"),
        )
    if variant == "spd":
        return SpdMatrices(n=int(obj["n"]), metric=obj.get("metric", "frobenius"))
    if variant == "euclidean":
        return Euclidean(n=int(obj["n"]))
    if variant == "torus":
        return FlatTorus()
    raise InvalidSpaceError(f"unknown space variant {variant!r}")


def point_to_json(space: Space, point, digits: int = DOUBLE_DIGITS):
    """Variant-matched nested lists; numbers become decimal strings when
    digits exceed double precision."""
    enc = lambda x: number_to_json(x, digits)
    if isinstance(space, Circle):
        return enc(point)
    if isinstance(space, FlatTorus):
        return [enc(point[0]), enc(point[1])]
    if isinstance(space, (Sphere, ProjectiveSpace, Euclidean)):
        return [enc(x) for x in np.asarray(point).tolist()]
    if isinstance(space, (Grassmannian, SpdMatrices)):
        return [[enc(x) for x in row] for row in np.asarray(point).tolist()]
    raise InvalidSpaceError(f"unknown space {space!r}")


def point_from_json(space: Space, obj, digits: int = DOUBLE_DIGITS):
    dec = lambda x: number_from_json(x, digits)
    if isinstance(space, Circle):
        return dec(obj)
    if isinstance(space, FlatTorus):
        return (dec(obj[0]), dec(obj[1]))
    if isinstance(space, (Sphere, ProjectiveSpace, Euclidean)):
        return np.array([float(dec(x)) for x in obj], dtype=float)
    if isinstance(space, (Grassmannian, SpdMatrices)):
        return np.array([[float(dec(x)) for x in row] for row in obj], dtype=float)
    raise InvalidSpaceError(f"unknown space {space!r}")


def pointset_to_json(space: Space, points, digits: int = DOUBLE_DIGITS) -> dict:
    return {
        "space": space_to_json(space),
        "points": [point_to_json(space, p, digits) for p in points],
    }


def pointset_from_json(obj: dict, digits: int = DOUBLE_DIGITS) -> tuple[Space, list]:
    space = space_from_json(obj["space"])
    points = [point_from_json(space, p, digits) for p in obj["points"]]
    return space, points
