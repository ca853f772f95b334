import math

import numpy as np
import pytest

from spinspec.entanglement import (
    PureState,
    bipartite_tangle,
    degeneracy_flags,
    eigenvector_tangles,
    hyperdeterminant,
    is_product,
    schmidt_coefficients,
    single_qubit_tangles,
    subspace_tangle_range,
    tangle2,
    three_tangle,
)
from spinspec.hamiltonian import TwoSpinParams, build_matrix, preset_H2, preset_K2
from spinspec.linalg_core import eigh

from conftest import SY, random_state, random_unitary

R2 = 1 / math.sqrt(2)
GHZ = np.array([1, 0, 0, 0, 0, 0, 0, 1]) * R2
W = np.array([0, 1, 1, 0, 1, 0, 0, 0]) / math.sqrt(3)
XYZ_EIGENSTATE = np.array([1, 1, 0, 0, 0, 0, 1j, -1j]) / 2


def wootters_concurrence(rho):
    yy = np.kron(SY, SY)
    rt = yy @ rho.conj() @ yy
    lam = np.sqrt(np.clip(np.sort(np.linalg.eigvals(rho @ rt).real)[::-1], 0, None))
    return max(0.0, lam[0] - lam[1] - lam[2] - lam[3])


def reduced_pair(psi, keep):
    t = psi.reshape(2, 2, 2)
    drop = ({0, 1, 2} - set(keep)).pop()
    m = np.moveaxis(t, drop, 2).reshape(4, 2)
    return m @ m.conj().T


@pytest.mark.parametrize(
    "amps,expected",
    [
        ([1, 0, 0, 0], 0.0),
        ([R2, 0, 0, R2], 1.0),
        ([0, R2, -R2, 0], 1.0),
        ([0.5, 0.5, 0.5, 0.5], 0.0),
        ([0.5, 0.5, 0.5, -0.5], 1.0),
    ],
)
def test_tangle2_values(amps, expected):
    assert abs(tangle2(amps).value - expected) <= 1e-12


def test_tangle2_matches_determinant_formula(rng):
    for _ in range(20):
        psi = random_state(rng, 4)
        a = psi.reshape(2, 2)
        assert abs(tangle2(psi).value - 4 * abs(np.linalg.det(a)) ** 2) <= 1e-12
        assert abs(tangle2(psi).value - bipartite_tangle(psi, (0,))) <= 1e-12


def test_tangle2_local_unitary_invariance(rng):
    psi = random_state(rng, 4)
    u = np.kron(random_unitary(rng, 2), random_unitary(rng, 2))
    assert abs(tangle2(u @ psi).value - tangle2(psi).value) <= 1e-12


@pytest.mark.parametrize("state,expected", [(GHZ, 1.0), (W, 0.0), (XYZ_EIGENSTATE, 1.0)])
def test_three_tangle_values(state, expected):
    assert abs(three_tangle(state).value - expected) <= 1e-10


def test_three_tangle_product_is_zero(rng):
    psi = np.kron(random_state(rng, 2), random_state(rng, 4))
    assert three_tangle(psi).value <= 1e-12


def test_three_tangle_local_unitary_invariance(rng):
    psi = random_state(rng, 8)
    u = np.kron(np.kron(random_unitary(rng, 2), random_unitary(rng, 2)), random_unitary(rng, 2))
    assert abs(three_tangle(u @ psi).value - three_tangle(psi).value) <= 1e-12


def test_three_tangle_qubit_permutation_symmetry(rng):
    psi = random_state(rng, 8)
    t = psi.reshape(2, 2, 2)
    ref = three_tangle(psi).value
    for perm in ((1, 0, 2), (2, 1, 0), (1, 2, 0)):
        assert abs(three_tangle(np.transpose(t, perm).reshape(8)).value - ref) <= 1e-12


def test_three_tangle_residual_identity(rng):
    # tau_1(23) = C_12^2 + C_13^2 + tau_123 with C from the mixed-state formula
    for _ in range(100):
        psi = random_state(rng, 8)
        tau1 = bipartite_tangle(psi, (0,))
        c12 = wootters_concurrence(reduced_pair(psi, (0, 1)))
        c13 = wootters_concurrence(reduced_pair(psi, (0, 2)))
        assert abs(three_tangle(psi).value - (tau1 - c12**2 - c13**2)) <= 1e-6


def test_hyperdeterminant_ghz():
    assert abs(hyperdeterminant(GHZ) - 0.25) <= 1e-15


def test_schmidt_coefficients():
    np.testing.assert_allclose(schmidt_coefficients(GHZ, (0,)), [R2, R2], atol=1e-15)
    np.testing.assert_allclose(schmidt_coefficients(GHZ, (1, 2)), [R2, R2], atol=1e-15)
    sv = schmidt_coefficients(W, (2,))
    np.testing.assert_allclose(sv, [math.sqrt(2 / 3), math.sqrt(1 / 3)], atol=1e-15)


def test_schmidt_ordering_of_qubits(rng):
    a, b = random_state(rng, 2), random_state(rng, 4)
    psi = np.kron(a, b)
    assert is_product(psi, (0,))
    assert is_product(psi, (1, 2))
    assert not is_product(psi, (1,))  # random b is entangled


def test_single_qubit_tangles():
    np.testing.assert_allclose(single_qubit_tangles(GHZ), [1, 1, 1], atol=1e-12)
    np.testing.assert_allclose(single_qubit_tangles(W), [8 / 9] * 3, atol=1e-12)


@pytest.mark.parametrize("part", [(), (0, 1, 2), (3,), (0, 0)])
def test_bad_bipartition(part):
    with pytest.raises(ValueError):
        schmidt_coefficients(GHZ, part)


def test_state_validation():
    with pytest.raises(ValueError, match="normalized"):
        PureState.from_amplitudes([1, 1])
    s = PureState.from_amplitudes([1, 1], normalize=True)
    assert s.qubit_count == 1 and abs(np.linalg.norm(s.amplitudes) - 1) <= 1e-15
    with pytest.raises(ValueError, match="power of two"):
        PureState.from_amplitudes([1, 0, 0])
    with pytest.raises(ValueError):
        PureState.from_amplitudes([0, 0], normalize=True)
    with pytest.raises(ValueError, match="2-qubit"):
        tangle2(GHZ)
    with pytest.raises(ValueError, match="3-qubit"):
        three_tangle([1, 0, 0, 0])


def test_degeneracy_flags():
    np.testing.assert_array_equal(degeneracy_flags([-1, -1, 0.5, 2]), [True, True, False, False])
    np.testing.assert_array_equal(degeneracy_flags([1.0]), [False])


def test_eigenvector_tangles_two_spin():
    p = TwoSpinParams(1.0, 2.0, 0.5)
    th = eigenvector_tangles(eigh(build_matrix(preset_H2(p))))
    tk = eigenvector_tangles(eigh(build_matrix(preset_K2(p))))
    assert all(t.value <= 1e-10 for t in th)
    assert all(t.value > 0 for t in tk)
    assert not any(t.degenerate_basis_flag for t in th + tk)
    assert {t.measure for t in th} == {"tangle"}


def test_eigenvector_tangles_flags_degenerate_levels():
    p = TwoSpinParams(1.0, 1.0, 0.0)
    tk = eigenvector_tangles(eigh(build_matrix(preset_K2(p))))
    assert sum(t.degenerate_basis_flag for t in tk) == 2


def test_subspace_tangle_range_bell_pair():
    v1 = np.array([1, 0, 0, 0], dtype=complex)
    v2 = np.array([0, 0, 0, 1], dtype=complex)
    r = subspace_tangle_range(v1, v2)
    assert abs(r.min) <= 1e-12 and abs(r.max - 1) <= 1e-12
    assert abs(r.argmax[0] - math.pi / 4) <= 1e-6


def test_subspace_tangle_range_brute_force(rng):
    v = np.linalg.qr(rng.normal(size=(4, 2)) + 1j * rng.normal(size=(4, 2)))[0]
    r = subspace_tangle_range(v[:, 0], v[:, 1], grid=120)
    t = np.linspace(0, math.pi / 2, 301)
    p = np.linspace(0, 2 * math.pi, 601)
    vals = [tangle2(math.cos(a) * v[:, 0] + np.exp(1j * b) * math.sin(a) * v[:, 1]).value for a in t[::10] for b in p[::10]]
    assert r.min <= min(vals) + 1e-9
    assert r.max >= max(vals) - 1e-9
    assert 0 <= r.min <= r.max <= 1 + 1e-12


def test_subspace_requires_orthogonal():
    with pytest.raises(ValueError, match="orthogonal"):
        subspace_tangle_range([1, 0, 0, 0], [R2, R2, 0, 0])
