"""Positive-definiteness analysis of Gaussian kernels on curved metric
spaces: exact circulant spectra for equispaced circle configurations,
high-precision partial-theta bounds, non-PSD witness certificates,
isometric witness transfer, and a Stein-divergence bandwidth probe.
"""

__version__ = "0.1.0"

from .spaces import (
    Circle,
    Euclidean,
    FlatTorus,
    Grassmannian,
    InvalidPointError,
    InvalidSpaceError,
    ProjectiveSpace,
    SpdMatrices,
    Sphere,
    circle_equispaced,
    distance,
    parse_space,
    principal_angles,
    sample_points,
    validate_point,
)
from .gram import (
    GramMatrix,
    KernelParam,
    gaussian_kernel,
    gram,
    hadamard,
    principal_submatrix,
)
from .spectral import (
    PdVerdict,
    SpectrumReport,
    circulant_eigenvalues,
    jacobi_eigenvalues,
    jacobi_eigensystem,
    min_eigenvector,
    pd_verdict,
    psd_tolerance,
)
from .partial_theta import (
    PartialThetaQuery,
    PartialThetaResult,
    bound_rhs,
    bringmann_coefficient,
    lambda_of_mu,
    leading_term,
    mu_of_lambda,
    partial_theta,
    s0,
    tail_decomposition_check,
)
from .circle import (
    circle_witness,
    find_witness_size,
    lambda_crit,
    lambda_profile,
    w_half,
)
from .certificates import (
    CertificateError,
    VerificationResult,
    WitnessCertificate,
    build_certificate,
    cert_from_json,
    cert_to_json,
    psd_decision,
    quadratic_form,
    verify_certificate,
)
from .embeddings import (
    EmbeddingMap,
    embedding_for,
    flat_torus,
    grassmann_circle,
    great_circle,
    projective_line,
    transfer_witness,
    verify_isometry,
    witness_for_target,
)
from .stein import (
    LambdaPlusSet,
    SteinProbeReport,
    lambda_plus_set,
    probe,
    stein_divergence,
)

__all__ = [
    "__version__",
    "Circle", "Euclidean", "FlatTorus", "Grassmannian", "ProjectiveSpace",
    "SpdMatrices", "Sphere", "InvalidPointError", "InvalidSpaceError",
    "circle_equispaced", "distance", "parse_space", "principal_angles",
    "sample_points", "validate_point",
    "GramMatrix", "KernelParam", "gaussian_kernel", "gram", "hadamard",
    "principal_submatrix",
    "PdVerdict", "SpectrumReport", "circulant_eigenvalues",
    "jacobi_eigenvalues", "jacobi_eigensystem", "min_eigenvector",
    "pd_verdict", "psd_tolerance",
    "PartialThetaQuery", "PartialThetaResult", "bound_rhs",
    "bringmann_coefficient", "lambda_of_mu", "leading_term", "mu_of_lambda",
    "partial_theta", "s0", "tail_decomposition_check",
    "circle_witness", "find_witness_size", "lambda_crit", "lambda_profile",
    "w_half",
    "CertificateError", "VerificationResult", "WitnessCertificate",
    "build_certificate", "cert_from_json", "cert_to_json", "psd_decision",
    "quadratic_form", "verify_certificate",
    "EmbeddingMap", "embedding_for", "flat_torus", "grassmann_circle",
    "great_circle", "projective_line", "transfer_witness", "verify_isometry",
    "witness_for_target",
    "LambdaPlusSet", "SteinProbeReport", "lambda_plus_set", "probe",
    "stein_divergence",
]
