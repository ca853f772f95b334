"""Dense complex linear algebra used by every other module.

Matrices and vectors are plain ``numpy`` arrays of dtype ``complex128``.
The hermitian eigensolver is a cyclic Jacobi method (see ``_kernels``);
``numpy.linalg`` is deliberately not used for diagonalization so results
do not depend on the LAPACK build.
"""
from dataclasses import dataclass

import numpy as np

from . import _kernels

HERMITIAN_TOL = 1e-12
JACOBI_REL_TOL = 1e-13
JACOBI_MAX_SWEEPS = 100
PHASE_TIE_TOL = 1e-12


class DimensionError(ValueError):
    pass


class NonHermitianError(ValueError):
    pass


class ConvergenceError(ArithmeticError):
    """Jacobi sweeps hit the iteration cap before the off-diagonal norm was small."""

    def __init__(self, off_norm, sweeps, context=""):
        self.off_norm = off_norm
        self.sweeps = sweeps
        self.context = context
        where = f" {context}" if context else ""
        super().__init__(
            f"Jacobi eigensolver did not converge{where} after {sweeps} sweeps "
            f"(off-diagonal norm {off_norm:.3e})"
        )


def as_matrix(m, name="matrix"):
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] == 0 or a.shape[1] == 0:
        raise DimensionError(f"{name} must be a nonempty 2-d array, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} has non-finite entries")
    return a


def as_vector(v, name="vector"):
    a = np.asarray(v, dtype=np.complex128)
    if a.ndim != 1 or a.shape[0] == 0:
        raise DimensionError(f"{name} must be a nonempty 1-d array, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} has non-finite entries")
    return a


def _square(m, name):
    a = as_matrix(m, name)
    if a.shape[0] != a.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {a.shape}")
    return a


def hermiticity_defect(m):
    a = as_matrix(m)
    if a.shape[0] != a.shape[1]:
        return np.inf
    return float(np.max(np.abs(a - a.conj().T)))


def is_hermitian(m, tol=HERMITIAN_TOL):
    return hermiticity_defect(m) <= tol


def kron(a, b):
    return np.kron(as_matrix(a, "a"), as_matrix(b, "b"))


def commutator(a, b):
    a = _square(a, "a")
    b = _square(b, "b")
    if a.shape != b.shape:
        raise DimensionError(f"commutator of {a.shape} and {b.shape} matrices")
    return a @ b - b @ a


def hs_inner(a, b):
    """Hilbert-Schmidt product tr(a b^*)."""
    a = as_matrix(a, "a")
    b = as_matrix(b, "b")
    if a.shape != b.shape:
        raise DimensionError(f"hs_inner of {a.shape} and {b.shape} matrices")
    return complex(np.sum(a * b.conj()))


def swap_permutation(n):
    """Permutation P on C^n (x) C^n with P (u (x) v) = v (x) u."""
    if int(n) != n or n < 1:
        raise ValueError(f"swap_permutation needs a positive integer, got {n!r}")
    n = int(n)
    p = np.zeros((n * n, n * n), dtype=np.complex128)
    for i in range(n):
        for j in range(n):
            p[j * n + i, i * n + j] = 1.0
    return p


@dataclass(frozen=True)
class Spectrum:
    """Ascending eigenvalues; column ``k`` of ``eigenvectors`` pairs with ``eigenvalues[k]``."""

    dim: int
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    max_residual: float
    residuals: np.ndarray
    sweeps: int = 0
    backend: str = ""

    def vector(self, k):
        return self.eigenvectors[:, k]

    def residual_bound(self, m):
        return 1e-10 * (1.0 + float(np.max(np.abs(m))) * self.dim)


def _fix_phase(v):
    mags = np.abs(v)
    top = mags.max()
    idx = int(np.flatnonzero(mags >= top - PHASE_TIE_TOL)[0])
    z = v[idx]
    v = v * (np.conj(z) / abs(z))
    v[idx] = v[idx].real
    return v


def eigh(m):
    """Eigendecomposition of a hermitian matrix by cyclic Jacobi rotations.

    Eigenvalues come back ascending; ties keep the order of the diagonal
    slots they converged in. Each eigenvector is rotated so that its
    largest-magnitude entry (lowest index on ties) is real and positive.

    Raises
    ------
    NonHermitianError
        if ``max |m - m^H| > 1e-12``.
    ConvergenceError
        if the off-diagonal Frobenius norm is still above
        ``1e-13 * ||m||_F`` after 100 sweeps.
    """
    m = _square(m, "m")
    defect = hermiticity_defect(m)
    if defect > HERMITIAN_TOL:
        raise NonHermitianError(f"matrix is not hermitian (max |M - M^H| = {defect:.3e})")
    n = m.shape[0]
    a = np.ascontiguousarray(0.5 * (m + m.conj().T))
    v = np.eye(n, dtype=np.complex128)
    tol = JACOBI_REL_TOL * float(np.linalg.norm(a))
    backend, kernel = _kernels.select_kernel()
    sweeps, off = kernel(a, v, tol, JACOBI_MAX_SWEEPS)
    if off > tol:
        raise ConvergenceError(float(off), int(sweeps))

    diag = np.diag(a).real.copy()
    order = np.argsort(diag, kind="stable")
    values = diag[order]
    vectors = np.empty((n, n), dtype=np.complex128)
    for k, src in enumerate(order):
        vectors[:, k] = _fix_phase(v[:, src])

    resid = np.linalg.norm(m @ vectors - vectors * values, axis=0)
    values.setflags(write=False)
    vectors.setflags(write=False)
    resid.setflags(write=False)
    return Spectrum(
        dim=n,
        eigenvalues=values,
        eigenvectors=vectors,
        max_residual=float(resid.max()),
        residuals=resid,
        sweeps=int(sweeps),
        backend=backend,
    )


def reconstruct(spec):
    v = spec.eigenvectors
    return (v * spec.eigenvalues) @ v.conj().T


def mat_exp_hermitian(m, t):
    """exp(t m) for hermitian ``m`` and real ``t``, evaluated through ``eigh``."""
    s = eigh(m)
    v = s.eigenvectors
    return (v * np.exp(float(t) * s.eigenvalues)) @ v.conj().T
