"""Witness certificates: self-contained proofs that a Gram matrix fails PSD.

A certificate stores the space, bandwidth, points, and a coefficient
vector c with c^T K c < 0.  Everything needed to re-derive the violation
travels with it, so an independent verifier can recompute all distances,
kernel values, and the quadratic form from raw data alone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import mpmath as mp

from . import spaces as sp
from .gram import KernelParam, gaussian_kernel, gram
from .precision import (
    DOUBLE_DIGITS,
    PrecisionError,
    check_digits,
    number_from_json,
    number_to_json,
    resolve_digits,
    to_mpf,
    working_dps,
)
from .spectral import (
    circulant_eigenvalues,
    jacobi_eigenvalues,
    min_eigenvector,
    pd_verdict,
    psd_tolerance,
)

SCHEMA_VERSION = "1"

# certified violations must clear ten times the PSD tolerance band
CERT_MARGIN = 10.0

VERIFY_REL_TOL = 1e-12


class CertificateError(ValueError):
    pass


@dataclass(frozen=True)
class WitnessCertificate:
    space: sp.Space
    lam: object
    points: tuple
    coefficients: tuple
    quad_form: object
    min_eigenvalue: object
    method: str
    precision_digits: int
    unit_circle_lambda: object | None = None
    schema_version: str = SCHEMA_VERSION

    @property
    def order(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class VerificationResult:
    ok: bool
    recomputed: object
    stored: object
    detail: str | None = None


def circulant_row(lam, n: int, precision_digits: int = DOUBLE_DIGITS, scale=1.0) -> list:
    """First row of the equispaced-circle Gram: exp(-mu m^2/N^2) with
    m = min(k, N-k) and mu = 4 pi^2 lambda scale^2."""
    if n < 2:
        raise CertificateError("need at least two points")
    if precision_digits <= DOUBLE_DIGITS:
        mu = 4.0 * math.pi * math.pi * float(lam) * float(scale) ** 2
        return [
            math.exp(-mu * min(k, n - k) ** 2 / (n * n)) for k in range(n)
        ]
    with working_dps(precision_digits):
        mu = 4 * mp.pi ** 2 * to_mpf(lam, precision_digits) * to_mpf(scale, precision_digits) ** 2
        nn = mp.mpf(n) * n
        return [mp.exp(-mu * min(k, n - k) ** 2 / nn) for k in range(n)]


def quadratic_form(space: sp.Space, lam, points, coefficients, precision_digits: int):
    """c^T K c recomputed from scratch: distances, kernel values, then a
    compensated double sum.  Wide precision is supported for circle and
    torus points, whose payloads are exact angles."""
    points = list(points)
    n = len(points)
    if len(coefficients) != n:
        raise CertificateError(
            f"{len(coefficients)} coefficients for {n} points"
        )
    if precision_digits <= DOUBLE_DIGITS:
        param = KernelParam(float(lam))
        c = [float(x) for x in coefficients]
        terms = [ci * ci for ci in c]  # diagonal: kernel value is 1
        for i in range(n):
            for j in range(i + 1, n):
                k_ij = gaussian_kernel(param, sp.distance(space, points[i], points[j]))
                terms.append(2.0 * c[i] * c[j] * k_ij)
        return math.fsum(terms)
    return _quadratic_form_mp(space, lam, points, coefficients, precision_digits)


def _quadratic_form_mp(space, lam, points, coefficients, digits: int):
    if not isinstance(space, (sp.Circle, sp.FlatTorus)):
        raise PrecisionError(
            "wide-precision re-evaluation needs angle payloads (circle or "
            "torus); rebuild the certificate at <= 17 digits"
        )
    with working_dps(digits):
        lam_mp = to_mpf(lam, digits)
        two_pi = 2 * mp.pi

        def arc(a, b):
            d = abs(a - b)
            return min(d, two_pi - d)

        if isinstance(space, sp.Circle):
            scale = to_mpf(space.scale, digits)
            angles = [to_mpf(p, digits) for p in points]
            dist = lambda i, j: scale * arc(angles[i], angles[j])
        else:
            pairs = [(to_mpf(p[0], digits), to_mpf(p[1], digits)) for p in points]
            dist = lambda i, j: mp.sqrt(
                arc(pairs[i][0], pairs[j][0]) ** 2 + arc(pairs[i][1], pairs[j][1]) ** 2
            )

        c = [to_mpf(x, digits) for x in coefficients]
        n = len(points)
        terms = [ci * ci for ci in c]
        for i in range(n):
            for j in range(i + 1, n):
                d = dist(i, j)
                terms.append(2 * c[i] * c[j] * mp.exp(-lam_mp * d * d))
        return mp.fsum(terms)


def build_certificate(space: sp.Space, lam, points, precision_digits: int | None = None) -> WitnessCertificate:
    """Certify that the Gram of (space, lambda, points) is not PSD.

    Equispaced circle configurations go through the exact circulant
    spectrum (any precision); everything else through dense Jacobi at
    double precision.  Refuses when the minimum eigenvalue does not
    clear ten times the PSD tolerance.
    """
    points = list(points)
    n = len(points)
    if n < 2:
        raise CertificateError("need at least two points")
    if isinstance(space, sp.Circle) and sp.equispaced_order(points) == n:
        digits = resolve_digits(precision_digits)
        return _build_circulant(space, lam, points, digits)
    if precision_digits is None:
        digits = DOUBLE_DIGITS
    else:
        check_digits(precision_digits)
        digits = precision_digits
    if digits > DOUBLE_DIGITS:
        raise PrecisionError(
            "dense route is double precision only; wide precision needs "
            "equispaced circle points"
        )
    return _build_jacobi(space, lam, points)


def _certify_threshold(value, n: int, digits: int, what: str) -> None:
    tol = psd_tolerance(n, digits)
    if not value < -CERT_MARGIN * tol:
        raise CertificateError(
            f"{what} {float(value):.6e} is not below the certification "
            f"threshold {-CERT_MARGIN * tol:.6e}; refusing to certify"
        )


def _build_circulant(space: sp.Circle, lam, points, digits: int) -> WitnessCertificate:
    n = len(points)
    row = circulant_row(lam, n, digits, scale=space.scale)
    report = circulant_eigenvalues(row, digits)
    w_min = report.min_eigenvalue
    _certify_threshold(w_min, n, digits, "minimum eigenvalue")
    j_star = report.fourier_indices[0]
    if digits <= DOUBLE_DIGITS:
        comps = [math.cos(2.0 * math.pi * j_star * k / n) for k in range(n)]
        norm = math.sqrt(math.fsum(x * x for x in comps))
        coeffs = tuple(x / norm for x in comps)
    else:
        with working_dps(digits):
            comps = [mp.cos(2 * mp.pi * j_star * k / n) for k in range(n)]
            norm = mp.sqrt(mp.fsum(x * x for x in comps))
            coeffs = tuple(x / norm for x in comps)
    quad = quadratic_form(space, lam, points, coeffs, digits)
    _certify_threshold(quad, n, digits, "quadratic form")
    if abs(quad - w_min) > 1e-8 * n * max(1.0, abs(float(w_min))):
        raise CertificateError(
            "quadratic form disagrees with the spectral value; "
            "certificate construction is inconsistent"
        )
    return WitnessCertificate(
        space=space,
        lam=lam if digits > DOUBLE_DIGITS else float(lam),
        points=tuple(points),
        coefficients=coeffs,
        quad_form=quad,
        min_eigenvalue=w_min,
        method="circulant",
        precision_digits=digits,
    )


def _build_jacobi(space: sp.Space, lam, points) -> WitnessCertificate:
    n = len(points)
    k = gram(space, points, KernelParam(float(lam)))
    report = jacobi_eigenvalues(k.entries)
    w_min = report.min_eigenvalue
    _certify_threshold(w_min, n, DOUBLE_DIGITS, "minimum eigenvalue")
    c = min_eigenvector(k.entries, w_min)
    quad = quadratic_form(space, lam, points, [float(x) for x in c], DOUBLE_DIGITS)
    _certify_threshold(quad, n, DOUBLE_DIGITS, "quadratic form")
    if abs(quad - w_min) > 1e-6 * n * max(1.0, abs(w_min)):
        raise CertificateError(
            "quadratic form disagrees with the spectral value; "
            "certificate construction is inconsistent"
        )
    return WitnessCertificate(
        space=space,
        lam=float(lam),
        points=tuple(points),
        coefficients=tuple(float(x) for x in c),
        quad_form=quad,
        min_eigenvalue=w_min,
        method="jacobi",
        precision_digits=DOUBLE_DIGITS,
    )


def verify_certificate(cert: WitnessCertificate) -> VerificationResult:
    """Re-derive the quadratic form from raw data and compare.

    ok iff the recomputed value matches the stored one within 1e-12
    relative and is negative.  Shares no state with the builder.
    """
    if cert.schema_version != SCHEMA_VERSION:
        raise CertificateError(f"unknown schema version {cert.schema_version!r}")
    for p in cert.points:
        sp.require_valid(cert.space, p)
    recomputed = quadratic_form(
        cert.space, cert.lam, cert.points, cert.coefficients, cert.precision_digits
    )
    stored = cert.quad_form
    if not recomputed < 0:
        detail = "recomputed value nonnegative"
        if stored < 0:
            detail += ", stored negative"
        return VerificationResult(False, recomputed, stored, detail)
    if not stored < 0:
        return VerificationResult(
            False, recomputed, stored, "recomputed value negative, stored positive"
        )
    if abs(recomputed - stored) > VERIFY_REL_TOL * abs(stored):
        return VerificationResult(
            False,
            recomputed,
            stored,
            f"recomputed {float(recomputed)!r} differs from stored "
            f"{float(stored)!r} beyond {VERIFY_REL_TOL} relative",
        )
    return VerificationResult(True, recomputed, stored, None)


def with_unit_circle_lambda(cert: WitnessCertificate, value) -> WitnessCertificate:
    return replace(cert, unit_circle_lambda=value)


# ---------------------------------------------------------------------------
# PSD decision shared by the CLI and the probes

def psd_decision(space: sp.Space, points, lam, precision_digits: int | None = None) -> tuple:
    """(verdict, spectrum, method) for the Gram of (space, lambda, points).

    Equispaced circle points ride the exact circulant path at the
    requested precision; anything else gets dense Jacobi at double.
    """
    points = list(points)
    n = len(points)
    if n < 1:
        raise CertificateError("need at least one point")
    if isinstance(space, sp.Circle) and sp.equispaced_order(points) == n:
        digits = resolve_digits(precision_digits)
        row = circulant_row(lam, n, digits, scale=space.scale)
        report = circulant_eigenvalues(row, digits)
        return pd_verdict(report, 1.0), report, "circulant"
    if precision_digits is not None and precision_digits > DOUBLE_DIGITS:
        raise PrecisionError(
            "dense route is double precision only; wide precision needs "
            "equispaced circle points"
        )
    k = gram(space, points, KernelParam(float(lam)))
    report = jacobi_eigenvalues(k.entries)
    return pd_verdict(report, 1.0), report, "jacobi"


# ---------------------------------------------------------------------------
# serialization

def cert_to_json(cert: WitnessCertificate) -> dict:
    digits = cert.precision_digits
    num = lambda x: number_to_json(x, digits)
    obj = {
        "schema_version": cert.schema_version,
        "space": sp.space_to_json(cert.space),
        "lambda": num(cert.lam),
        "points": [sp.point_to_json(cert.space, p, digits) for p in cert.points],
        "coefficients": [num(c) for c in cert.coefficients],
        "quad_form": num(cert.quad_form),
        "min_eigenvalue": num(cert.min_eigenvalue),
        "method": cert.method,
        "precision_digits": digits,
    }
    if cert.unit_circle_lambda is not None:
        obj["unit_circle_lambda"] = num(cert.unit_circle_lambda)
    return obj


def cert_from_json(obj: dict) -> WitnessCertificate:
    version = obj.get("schema_version")
    if version != SCHEMA_VERSION:
        raise CertificateError(f"unknown schema version {version!r}")
    try:
        digits = int(obj["precision_digits"])
        space = sp.space_from_json(obj["space"])
        num = lambda x: number_from_json(x, digits)
        points = tuple(sp.point_from_json(space, p, digits) for p in obj["points"])
        cert = WitnessCertificate(
            space=space,
            lam=num(obj["lambda"]),
            points=points,
            coefficients=tuple(num(c) for c in obj["coefficients"]),
            quad_form=num(obj["quad_form"]),
            min_eigenvalue=num(obj["min_eigenvalue"]),
            method=str(obj["method"]),
            precision_digits=digits,
            unit_circle_lambda=(
                num(obj["unit_circle_lambda"]) if "unit_circle_lambda" in obj else None
            ),
        )
    except (KeyError, TypeError, IndexError) as exc:
        raise CertificateError(f"malformed certificate: {exc!r}") from None
    check_digits(cert.precision_digits)
    if cert.method not in ("circulant", "jacobi"):
        raise CertificateError(f"unknown method {cert.method!r}")
    return cert
