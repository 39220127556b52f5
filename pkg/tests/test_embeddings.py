"""Circle embeddings: isometry checks and witness transfer."""

import dataclasses
import math

import numpy as np
import pytest
from mpmath import mp, mpf

import geokernel as gk
from geokernel.certificates import CertificateError
from geokernel.embeddings import EmbeddingError, EmbeddingMap

TARGETS = [
    gk.Sphere(2),
    gk.Sphere(5),
    gk.ProjectiveSpace(2),
    gk.Grassmannian(2, 4),
    gk.FlatTorus(),
]


def test_isometry_across_catalog():
    for target in TARGETS:
        emb = gk.embedding_for(target)
        assert emb.target == target
        assert gk.verify_isometry(emb, pair_count=400, seed=1) <= 1e-10


def test_source_scales():
    assert gk.embedding_for(gk.Sphere(3)).source == gk.Circle()
    assert gk.embedding_for(gk.FlatTorus()).source == gk.Circle()
    # subspace-angle targets halve every arc, so the source is the
    # half-radius circle
    assert gk.embedding_for(gk.ProjectiveSpace(4)).source == gk.Circle(scale=0.5)
    assert gk.embedding_for(gk.Grassmannian(2, 5)).source == gk.Circle(scale=0.5)


def test_half_angle_parametrization():
    emb = gk.projective_line(2)
    for a, b in [(0.0, 0.3), (1.0, 4.0), (0.2, 6.0)]:
        d_src = gk.distance(emb.source, a, b)
        d_tgt = gk.distance(emb.target, emb.apply(a), emb.apply(b))
        assert d_tgt == pytest.approx(d_src, abs=1e-13)
        assert d_tgt == pytest.approx(0.5 * gk.distance(gk.Circle(), a, b), abs=1e-13)


def test_great_circle_images_are_unit_vectors():
    emb = gk.great_circle(4)
    for theta in (0.0, 1.0, 3.5):
        img = emb.apply(theta)
        assert len(img) == 5
        assert gk.validate_point(gk.Sphere(4), img) is None


def test_wrongly_scaled_map_fails_isometry_check():
    # negative control: claim the full-radius source for a half-angle map
    honest = gk.projective_line(2)
    liar = EmbeddingMap(
        name="mislabeled", source=gk.Circle(), target=honest.target,
        _apply=honest._apply,
    )
    assert gk.verify_isometry(liar, pair_count=50, seed=0) > 1e-2


def test_grassmann_circle_frame_validation():
    base = np.linalg.qr(np.random.default_rng(2).standard_normal((4, 2)))[0]
    direction = np.array([0.0, 0.0, 1.0, 0.0])
    emb = gk.grassmann_circle(2, 4, base=base, direction=None)
    assert gk.verify_isometry(emb, pair_count=100, seed=3) <= 1e-10

    with pytest.raises((EmbeddingError, gk.InvalidPointError)):
        gk.grassmann_circle(2, 4, base=base * 1.01)
    with pytest.raises(EmbeddingError):
        gk.grassmann_circle(2, 4, direction=direction * 2.0)
    with pytest.raises(EmbeddingError):
        # not orthogonal to the base span
        gk.grassmann_circle(2, 4, base=np.eye(4)[:, :2], direction=np.eye(4)[:, 0])


def test_embedding_for_rejects_projection_metric():
    with pytest.raises(EmbeddingError):
        gk.embedding_for(gk.Grassmannian(2, 4, metric="projection"))
    with pytest.raises(EmbeddingError):
        gk.embedding_for(gk.Euclidean(3))


def test_transfer_preserves_quadratic_form():
    for lam in (0.05, 0.1, 0.3):
        cert = gk.circle_witness(lam, n_max=64, precision_digits=17)
        moved = gk.transfer_witness(cert, gk.great_circle(3))
        assert moved.lam == cert.lam
        assert moved.coefficients == cert.coefficients
        assert abs(moved.quad_form - cert.quad_form) <= 1e-12 * abs(cert.quad_form)
        assert moved.space == gk.Sphere(3)
        assert moved.unit_circle_lambda == pytest.approx(lam, rel=1e-15)
        assert gk.verify_certificate(moved).ok


def test_transfer_rejects_non_circle_certificates():
    moved = gk.witness_for_target(gk.Sphere(2), 0.1)
    with pytest.raises(CertificateError):
        gk.transfer_witness(moved, gk.great_circle(2))


def test_transfer_rejects_scale_mismatch():
    cert = gk.circle_witness(0.1, n_max=16)  # unit-circle certificate
    with pytest.raises(CertificateError):
        gk.transfer_witness(cert, gk.projective_line(2))


def test_transfer_coerces_wide_to_double_for_vector_targets():
    cert = gk.circle_witness(mpf("0.1"), n_max=16, precision_digits=30)
    moved = gk.transfer_witness(cert, gk.great_circle(2))
    assert moved.precision_digits == 17
    assert isinstance(moved.quad_form, float)
    assert gk.verify_certificate(moved).ok


def test_flat_torus_transfer_keeps_wide_precision():
    cert = gk.circle_witness(mpf("0.1"), n_max=16, precision_digits=30)
    moved = gk.transfer_witness(cert, gk.flat_torus())
    assert moved.precision_digits == 30
    assert all(p[1] == 0 for p in moved.points)
    with mp.workdps(40):
        assert abs(moved.quad_form - cert.quad_form) < mpf("1e-25")
    assert gk.verify_certificate(moved).ok


def test_witness_for_target_end_to_end():
    cert = gk.witness_for_target(gk.Grassmannian(2, 4), 0.4)
    assert cert is not None
    assert cert.space == gk.Grassmannian(2, 4)
    assert cert.order == 4
    assert float(cert.unit_circle_lambda) == pytest.approx(0.1, rel=1e-15)
    assert float(cert.quad_form) == pytest.approx(-0.18997962224145, abs=1e-12)
    assert gk.verify_certificate(cert).ok


def test_witness_for_target_exhausted():
    assert gk.witness_for_target(gk.Sphere(2), 1.0, n_max=12) is None
