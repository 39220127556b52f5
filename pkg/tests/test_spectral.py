"""Dense Jacobi eigensolver and the exact circulant spectrum path."""

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from mpmath import mp, mpf

import geokernel as gk
from geokernel.certificates import circulant_row
from geokernel.spectral import (
    AsymmetricInputError,
    ConvergenceError,
    SpectrumReport,
)


def _random_symmetric(rng, n, scale=1.0):
    m = rng.standard_normal((n, n)) * scale
    return (m + m.T) / 2.0


def test_jacobi_matches_reference_eigensolver():
    rng = np.random.default_rng(0)
    for n in range(2, 13):
        m = _random_symmetric(rng, n)
        mine = gk.jacobi_eigenvalues(m).eigenvalues
        ref = np.linalg.eigvalsh(m)
        assert list(mine) == sorted(mine)
        assert np.max(np.abs(np.asarray(mine) - ref)) <= 1e-12 * max(1.0, np.max(np.abs(m)))


def test_jacobi_eigensystem_reconstructs_input():
    rng = np.random.default_rng(3)
    m = _random_symmetric(rng, 8)
    values, vectors = gk.jacobi_eigensystem(m)
    v = np.asarray(vectors)
    assert np.max(np.abs(v.T @ v - np.eye(8))) <= 1e-12
    recon = (v * values) @ v.T
    assert np.max(np.abs(recon - m)) <= 1e-12


def test_trace_conservation():
    rng = np.random.default_rng(11)
    for scale in (1.0, 1e6):
        m = _random_symmetric(rng, 9, scale)
        report = gk.jacobi_eigenvalues(m)
        drift = abs(float(np.trace(m)) - math.fsum(report.eigenvalues))
        assert drift <= 1e-10 * 9 * max(1.0, float(np.max(np.abs(m))))


def test_orthogonal_similarity_invariance():
    rng = np.random.default_rng(4)
    m = _random_symmetric(rng, 7)
    q = np.linalg.qr(rng.standard_normal((7, 7)))[0]
    a = gk.jacobi_eigenvalues(m).eigenvalues
    b = gk.jacobi_eigenvalues(q.T @ m @ q).eigenvalues
    assert np.max(np.abs(np.asarray(a) - np.asarray(b))) <= 1e-9


def test_offdiag_residual_reported_and_small():
    rng = np.random.default_rng(8)
    m = _random_symmetric(rng, 10)
    report = gk.jacobi_eigenvalues(m)
    assert report.offdiag_residual is not None
    assert report.offdiag_residual <= 1e-14 * float(np.linalg.norm(m))
    assert report.method == "jacobi"
    assert report.order == 10


def test_diagonal_input_is_exact():
    d = [3.0, -1.0, 0.5, 7.25]
    report = gk.jacobi_eigenvalues(np.diag(d))
    assert list(report.eigenvalues) == sorted(d)


def test_jacobi_rejects_asymmetric():
    with pytest.raises(AsymmetricInputError):
        gk.jacobi_eigenvalues(np.array([[1.0, 2.0], [0.5, 1.0]]))


def test_convergence_error_carries_residual():
    err = ConvergenceError("did not settle", residual=1e-3)
    assert err.residual == 1e-3


def test_circulant_matches_jacobi_on_kernel_rows():
    # the dense solver and the exact cosine-sum spectrum must agree on
    # the same circulant matrix
    for n in (4, 8, 16, 64):
        for lam in (0.01, 0.1, 1.0):
            row = circulant_row(lam, n)
            dense = [[row[(i - j) % n] for j in range(n)] for i in range(n)]
            a = np.asarray(gk.jacobi_eigenvalues(dense).eigenvalues)
            b = np.asarray([float(x) for x in gk.circulant_eigenvalues(row).eigenvalues])
            assert np.max(np.abs(a - b)) <= 1e-9


def test_circulant_eigenvalue_formula():
    n = 8
    row = circulant_row(0.3, n)
    report = gk.circulant_eigenvalues(row)
    assert sorted(report.fourier_indices) == list(range(n))
    assert report.method == "circulant"
    for pos, j in enumerate(report.fourier_indices):
        direct = math.fsum(
            row[k] * math.cos(2.0 * math.pi * j * k / n) for k in range(n)
        )
        assert abs(report.eigenvalues[pos] - direct) <= 1e-12
    assert list(report.eigenvalues) == sorted(report.eigenvalues)


def test_circulant_rejects_asymmetric_row():
    with pytest.raises(AsymmetricInputError):
        gk.circulant_eigenvalues([1.0, 0.5, 0.3, 0.4])


def test_circulant_wide_agrees_with_double():
    n = 12
    lam = 0.2
    fine = gk.circulant_eigenvalues(circulant_row(lam, n, 30), 30)
    coarse = gk.circulant_eigenvalues(circulant_row(lam, n))
    assert fine.precision_digits == 30
    assert isinstance(fine.eigenvalues[0], mpf)
    for a, b in zip(fine.eigenvalues, coarse.eigenvalues):
        assert abs(float(a) - b) <= 1e-14


def test_min_eigenvector_inverse_iteration():
    rng = np.random.default_rng(1)
    m = _random_symmetric(rng, 6)
    report = gk.jacobi_eigenvalues(m)
    v = gk.min_eigenvector(m, report.min_eigenvalue)
    m = np.asarray(m)
    assert abs(np.linalg.norm(v) - 1.0) <= 1e-12
    residual = np.linalg.norm(m @ v - report.min_eigenvalue * v)
    assert residual <= 1e-8 * np.linalg.norm(m)
    rayleigh = float(v @ m @ v)
    assert abs(rayleigh - report.min_eigenvalue) <= 1e-8 * np.linalg.norm(m)
    lead = v[np.argmax(np.abs(v) > 1e-12)]
    assert lead > 0.0  # canonical sign


def test_psd_tolerance_formula():
    assert gk.psd_tolerance(10) == 1e-10 * 10
    assert gk.psd_tolerance(10, 17) == 1e-10 * 10
    assert gk.psd_tolerance(10, 30) == pytest.approx(10 ** -(30 - 7) * 10, rel=1e-12)
    assert gk.psd_tolerance(4, 17, 2.0) == 2.0 * 1e-10 * 4


def test_pd_verdict_bands():
    tol = gk.psd_tolerance(2)
    mk = lambda lo: SpectrumReport(
        eigenvalues=(lo, 1.0), min_eigenvalue=lo, method="jacobi",
        precision_digits=17,
    )
    assert gk.pd_verdict(mk(-10 * tol), 1.0).verdict == "not_psd"
    assert gk.pd_verdict(mk(0.0), 1.0).verdict == "positive_semidefinite"
    assert gk.pd_verdict(mk(10 * tol), 1.0).verdict == "positive_definite"


@given(st.integers(min_value=2, max_value=10))
def test_jacobi_idempotent_on_eigenbasis(n):
    rng = np.random.default_rng(n)
    m = _random_symmetric(rng, n)
    values, vectors = gk.jacobi_eigensystem(m)
    v = np.asarray(vectors)
    diag = v.T @ np.asarray(m) @ v
    off = diag - np.diag(np.diag(diag))
    assert np.max(np.abs(off)) <= 1e-12 * max(1.0, float(np.max(np.abs(m))))
