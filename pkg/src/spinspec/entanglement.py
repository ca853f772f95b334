"""Entanglement of 2- and 3-qubit pure states.

States are complex amplitude vectors in the computational basis with the
first qubit most significant (``|q0 q1 q2>`` at index ``4*q0 + 2*q1 + q2``),
matching the Kronecker ordering used by ``pauli.string_to_matrix``.
"""
import math
from dataclasses import dataclass

import numpy as np

from ._search import golden_section
from .linalg_core import as_vector
from .pauli import SIGMA

NORM_TOL = 1e-12
ORTHO_TOL = 1e-10
DEGENERACY_TOL = 1e-9

_YY = np.kron(SIGMA["Y"], SIGMA["Y"])


@dataclass(frozen=True)
class PureState:
    qubit_count: int
    amplitudes: np.ndarray

    @classmethod
    def from_amplitudes(cls, amps, normalize=False):
        v = as_vector(amps, "state")
        q = int(round(math.log2(v.size)))
        if 2**q != v.size:
            raise ValueError(f"state dimension {v.size} is not a power of two")
        norm = float(np.linalg.norm(v))
        if normalize:
            if norm == 0:
                raise ValueError("cannot normalize the zero vector")
            v = v / norm
        elif abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state is not normalized (norm {norm:.15g})")
        return cls(q, v)


@dataclass(frozen=True)
class TangleReport:
    value: float
    measure: str
    degenerate_basis_flag: bool = False


def _state(s, qubits=None):
    if not isinstance(s, PureState):
        s = PureState.from_amplitudes(s)
    if qubits is not None and s.qubit_count != qubits:
        raise ValueError(f"expected a {qubits}-qubit state, got {s.qubit_count} qubits")
    return s


def tangle2(s, degenerate=False):
    """Squared spin-flip concurrence |psi^T (Y (x) Y) psi|^2 of a 2-qubit state."""
    psi = _state(s, 2).amplitudes
    c = abs(psi @ _YY @ psi)
    return TangleReport(float(c * c), "tangle", bool(degenerate))


def hyperdeterminant(amps):
    """Cayley hyperdeterminant d1 - 2 d2 + 4 d3 of a 2x2x2 amplitude tensor."""
    a = np.asarray(amps).reshape(2, 2, 2)
    d1 = (
        a[0, 0, 0] ** 2 * a[1, 1, 1] ** 2
        + a[0, 0, 1] ** 2 * a[1, 1, 0] ** 2
        + a[0, 1, 0] ** 2 * a[1, 0, 1] ** 2
        + a[0, 1, 1] ** 2 * a[1, 0, 0] ** 2
    )
    d2 = (
        a[0, 0, 0] * a[1, 1, 1]
        * (a[0, 1, 1] * a[1, 0, 0] + a[1, 0, 1] * a[0, 1, 0] + a[1, 1, 0] * a[0, 0, 1])
        + a[0, 1, 1] * a[1, 0, 0] * (a[1, 0, 1] * a[0, 1, 0] + a[1, 1, 0] * a[0, 0, 1])
        + a[1, 0, 1] * a[0, 1, 0] * a[1, 1, 0] * a[0, 0, 1]
    )
    d3 = (
        a[0, 0, 0] * a[1, 1, 0] * a[1, 0, 1] * a[0, 1, 1]
        + a[1, 1, 1] * a[0, 0, 1] * a[0, 1, 0] * a[1, 0, 0]
    )
    return d1 - 2 * d2 + 4 * d3


def three_tangle(s, degenerate=False):
    psi = _state(s, 3).amplitudes
    return TangleReport(float(4 * abs(hyperdeterminant(psi))), "three_tangle", bool(degenerate))


def _check_bipartition(q, part):
    part = tuple(sorted(int(p) for p in part))
    if len(set(part)) != len(part) or any(p < 0 or p >= q for p in part):
        raise ValueError(f"bipartition {part} is not a set of qubit positions below {q}")
    if not 0 < len(part) < q:
        raise ValueError(f"bipartition {part} must be a proper nonempty subset of {q} qubits")
    return part


def schmidt_coefficients(s, bipartition):
    """Singular values (descending) of the amplitudes reshaped across ``bipartition | rest``."""
    s = _state(s)
    part = _check_bipartition(s.qubit_count, bipartition)
    q = s.qubit_count
    t = s.amplitudes.reshape((2,) * q)
    rest = [k for k in range(q) if k not in part]
    t = np.transpose(t, list(part) + rest).reshape(2 ** len(part), -1)
    return np.linalg.svd(t, compute_uv=False)


def is_product(s, bipartition, tol=1e-9):
    sv = schmidt_coefficients(s, bipartition)
    return bool(sv.size < 2 or sv[1] <= tol)


def bipartite_tangle(s, bipartition):
    """2 (1 - tr rho_A^2); for a single-qubit side this is 4 det rho_A."""
    sv = schmidt_coefficients(s, bipartition)
    p = sv**2
    return float(max(2.0 * (1.0 - np.sum(p * p)), 0.0))


def single_qubit_tangles(s):
    s = _state(s)
    return [bipartite_tangle(s, (k,)) for k in range(s.qubit_count)]


def degeneracy_flags(eigenvalues, tol=DEGENERACY_TOL):
    lam = np.asarray(eigenvalues, dtype=float)
    flags = np.zeros(lam.size, dtype=bool)
    close = np.abs(np.diff(lam)) <= tol
    flags[:-1] |= close
    flags[1:] |= close
    return flags


def eigenvector_tangles(spectrum, tol=DEGENERACY_TOL):
    """Tangle (2 qubits) or three-tangle (3 qubits) of each eigenvector.

    Eigenvectors whose eigenvalue has a neighbour within ``tol`` carry
    ``degenerate_basis_flag``: their value depends on the basis the solver
    happened to pick inside the degenerate subspace.
    """
    flags = degeneracy_flags(spectrum.eigenvalues, tol)
    if spectrum.dim == 4:
        measure = tangle2
    elif spectrum.dim == 8:
        measure = three_tangle
    else:
        raise ValueError(f"tangles are defined for 2 or 3 qubits, got dimension {spectrum.dim}")
    return [measure(spectrum.eigenvectors[:, k], flags[k]) for k in range(spectrum.dim)]


@dataclass(frozen=True)
class TangleRange:
    min: float
    argmin: tuple
    max: float
    argmax: tuple


def subspace_tangle_range(v1, v2, grid=360, xtol=1e-8):
    """Extremes of the tangle over cos(t) v1 + exp(i p) sin(t) v2.

    Scans ``t`` in [0, pi/2] and ``p`` in [0, 2 pi) on a ``grid x grid``
    mesh, then polishes each extremum by alternating golden-section
    searches in ``t`` and ``p``. Mesh ties resolve to the smallest ``t``,
    then the smallest ``p``.
    """
    a = _state(v1, 2).amplitudes
    b = _state(v2, 2).amplitudes
    overlap = abs(np.vdot(a, b))
    if overlap > ORTHO_TOL:
        raise ValueError(f"subspace vectors are not orthogonal (|<v1,v2>| = {overlap:.3e})")
    if grid < 2:
        raise ValueError("grid must be at least 2")
    g11 = a @ _YY @ a
    g12 = a @ _YY @ b
    g22 = b @ _YY @ b

    def tangle(theta, phi):
        c, s = np.cos(theta), np.sin(theta)
        z = np.exp(1j * phi)
        return np.abs(c * c * g11 + 2 * c * s * z * g12 + s * s * z * z * g22) ** 2

    thetas = np.linspace(0.0, np.pi / 2, grid)
    phis = 2 * np.pi * np.arange(grid) / grid
    values = tangle(thetas[:, None], phis[None, :])
    dt = thetas[1] - thetas[0]
    dp = phis[1] - phis[0]

    def polish(sign, idx):
        i, j = np.unravel_index(idx, values.shape)
        t, p = float(thetas[i]), float(phis[j])
        f = float(sign * values[i, j])
        for _ in range(50):
            improved = False
            t_new, f_new = golden_section(
                lambda x: sign * tangle(x, p), max(t - dt, 0.0), min(t + dt, np.pi / 2), xtol
            )
            if f_new < f:
                improved = improved or abs(t_new - t) > xtol
                t, f = t_new, f_new
            p_new, f_new = golden_section(lambda x: sign * tangle(t, x), p - dp, p + dp, xtol)
            if f_new < f:
                improved = improved or abs(p_new - p) > xtol
                p, f = p_new, f_new
            if not improved:
                break
        return float(sign * f), (t, p % (2 * np.pi))

    lo, arg_lo = polish(1.0, int(np.argmin(values)))
    hi, arg_hi = polish(-1.0, int(np.argmax(values)))
    return TangleRange(max(lo, 0.0), arg_lo, hi, arg_hi)
