"""Isometric circle embeddings and witness transfer.

Spheres contain great circles; projective spaces and Grassmannians
contain a circle of half scale (rotating a line by t moves the point by
t/2, so the angle payload is halved inside the map).  Since an isometry
preserves every pairwise distance, a Gram matrix built on the image
equals the source Gram entrywise, and a non-PSD witness transfers with
the very same coefficients.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import spaces as sp
from .certificates import CertificateError, WitnessCertificate, quadratic_form
from .circle import circle_witness
from .precision import DOUBLE_DIGITS
from .spectral import psd_tolerance

DIRECTION_TOL = 1e-12


class EmbeddingError(ValueError):
    pass


@dataclass(frozen=True)
class EmbeddingMap:
    """A named isometry from a (possibly rescaled) circle into a target."""

    name: str
    source: sp.Circle
    target: sp.Space
    _apply: Callable = field(repr=False)

    @property
    def scale(self) -> float:
        return self.source.scale

    def apply(self, theta):
        return self._apply(theta)


def great_circle(n: int) -> EmbeddingMap:
    """theta -> (cos theta, sin theta, 0, ..., 0) on the n-sphere."""
    if n < 1:
        raise EmbeddingError("sphere dimension must be >= 1")

    def apply(theta):
        t = float(theta)
        v = np.zeros(n + 1)
        v[0] = math.cos(t)
        v[1] = math.sin(t)
        return v

    return EmbeddingMap("great_circle", sp.Circle(), sp.Sphere(n), apply)


def projective_line(n: int) -> EmbeddingMap:
    """Half-scale circle into projective n-space.

    The line spanned by (cos(t/2), sin(t/2), 0, ...) moves through an
    angle of |dt|/2 as t varies, matching the source metric of
    Circle{1/2} exactly; antipodal t land on the same line.
    """
    if n < 1:
        raise EmbeddingError("projective dimension must be >= 1")

    def apply(theta):
        t = float(theta) / 2.0
        v = np.zeros(n + 1)
        v[0] = math.cos(t)
        v[1] = math.sin(t)
        return v

    return EmbeddingMap("projective_line", sp.Circle(scale=0.5), sp.ProjectiveSpace(n), apply)


def grassmann_circle(k: int, n: int, base=None, direction=None) -> EmbeddingMap:
    """Half-scale circle into the Grassmannian of k-planes in R^n.

    iota(t) = span{cos(t/2) u_1 + sin(t/2) v, u_2, ..., u_k} with u_i the
    base columns and v a unit direction orthogonal to all of them; only
    the first principal angle moves, by |dt|/2.
    """
    target = sp.Grassmannian(k=k, n=n, metric="principal_angle")
    if base is None:
        base = np.eye(n)[:, :k]
    else:
        base = np.array(base, dtype=float)
    violation = sp.validate_point(target, base)
    if violation is not None:
        raise EmbeddingError(f"base representative invalid: {violation}")
    if direction is None:
        # steepest standard direction out of the base span, reprojected
        resid = np.eye(n) - base @ base.T
        cand = resid[:, int(np.argmax(np.linalg.norm(resid, axis=0)))]
        cand = cand - base @ (base.T @ cand)
        direction = cand / float(np.linalg.norm(cand))
    else:
        direction = np.array(direction, dtype=float)
    if direction.shape != (n,):
        raise EmbeddingError(f"direction must be a vector of length {n}")
    if abs(float(np.linalg.norm(direction)) - 1.0) > DIRECTION_TOL:
        raise EmbeddingError("direction must be a unit vector")
    overlap = float(np.max(np.abs(base.T @ direction)))
    if overlap > DIRECTION_TOL:
        raise EmbeddingError(
            f"direction not orthogonal to the base columns (overlap {overlap:.2e})"
        )

    def apply(theta):
        t = float(theta) / 2.0
        first = math.cos(t) * base[:, 0] + math.sin(t) * direction
        return np.column_stack([first, base[:, 1:]])

    return EmbeddingMap("grassmann_circle", sp.Circle(scale=0.5), target, apply)


def flat_torus() -> EmbeddingMap:
    """Unit circle into the flat product of two circles, second
    coordinate pinned."""

    def apply(theta):
        return (theta, 0.0)

    return EmbeddingMap("flat_torus", sp.Circle(), sp.FlatTorus(), apply)


def embedding_for(target: sp.Space) -> EmbeddingMap:
    """The canonical circle embedding for a supported target space."""
    if isinstance(target, sp.Sphere):
        return great_circle(target.n)
    if isinstance(target, sp.ProjectiveSpace):
        return projective_line(target.n)
    if isinstance(target, sp.Grassmannian):
        if target.metric != "principal_angle":
            raise EmbeddingError(
                "the projection metric rescales arcs nonlinearly; only the "
                "principal-angle Grassmannian admits the circle isometry"
            )
        return grassmann_circle(target.k, target.n)
    if isinstance(target, sp.FlatTorus):
        return flat_torus()
    raise EmbeddingError(f"no circle embedding constructor for {target!r}")


def verify_isometry(emb: EmbeddingMap, pair_count: int = 1000, seed: int = 0) -> float:
    """Max |d_target(iota a, iota b) - d_source(a, b)| over seeded pairs."""
    rng = np.random.default_rng(seed)
    pairs = rng.uniform(0.0, 2.0 * math.pi, (pair_count, 2))
    worst = 0.0
    for a, b in pairs:
        d_src = sp.distance(emb.source, float(a), float(b))
        d_tgt = sp.distance(emb.target, emb.apply(a), emb.apply(b))
        worst = max(worst, abs(d_tgt - d_src))
    return worst


def transfer_witness(cert: WitnessCertificate, emb: EmbeddingMap) -> WitnessCertificate:
    """Carry a circle witness to the embedding target.

    The images keep the source distances, so the same lambda and the
    same coefficients give the same quadratic form; it is recomputed in
    the target from scratch and must agree within 1e-12 relative.

    Targets with non-angle payloads store points in double precision, so
    a wide source certificate is re-anchored at 17 digits; the transfer
    refuses if the violation would drown in double-precision noise.
    """
    if not isinstance(cert.space, sp.Circle):
        raise CertificateError("only circle certificates transfer through embeddings")
    if abs(cert.space.scale - emb.source.scale) > 1e-15:
        raise CertificateError(
            f"scale mismatch: certificate on Circle{{{cert.space.scale}}}, "
            f"map source Circle{{{emb.source.scale}}}"
        )
    wide_target = isinstance(emb.target, (sp.Circle, sp.FlatTorus))
    digits = cert.precision_digits if wide_target else min(cert.precision_digits, DOUBLE_DIGITS)
    coerced = digits < cert.precision_digits

    images = tuple(emb.apply(theta) for theta in cert.points)
    coeffs = tuple(float(c) for c in cert.coefficients) if coerced else cert.coefficients
    lam = float(cert.lam) if coerced else cert.lam

    quad = quadratic_form(emb.target, lam, images, coeffs, digits)
    tol = psd_tolerance(len(images), digits)
    if not quad < -10.0 * tol:
        raise CertificateError(
            f"transferred violation {float(quad):.3e} does not clear the "
            f"certification threshold {-10.0 * tol:.3e} at {digits} digits"
        )
    stored = cert.quad_form
    if abs(quad - stored) > 1e-12 * abs(stored):
        raise CertificateError(
            f"target Gram re-verification failed: {float(quad)!r} vs "
            f"stored {float(stored)!r}"
        )
    scale = emb.source.scale
    unit_lambda = lam * (scale * scale)
    return WitnessCertificate(
        space=emb.target,
        lam=lam,
        points=images,
        coefficients=coeffs,
        quad_form=quad,
        min_eigenvalue=float(cert.min_eigenvalue) if coerced else cert.min_eigenvalue,
        method=cert.method,
        precision_digits=digits,
        unit_circle_lambda=unit_lambda,
    )


def witness_for_target(
    target: sp.Space,
    lam,
    n_max: int = 512,
    precision_digits: int | None = None,
) -> WitnessCertificate | None:
    """Find a circle witness at the right scale and push it to the target."""
    emb = embedding_for(target)
    source_cert = circle_witness(
        lam, n_max=n_max, precision_digits=precision_digits, scale=emb.source.scale
    )
    if source_cert is None:
        return None
    return transfer_witness(source_cert, emb)
