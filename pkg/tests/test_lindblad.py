import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qmpemba import (
    DimensionMismatchError,
    JumpChannel,
    NonHermitianError,
    NonPhysicalStateError,
    build_liouvillian,
    devectorize,
    dissipator_superoperator,
    element_order,
    hamiltonian_superoperator,
    hermiticity_defect,
    trace_functional,
    vectorize,
)
from qmpemba.threelevel import (
    ThreeLevelParams,
    channels,
    hamiltonian,
    initial_state,
    reference_coherence_block,
    reference_coupling,
    reference_population_block,
)

from oracles import (
    commutator_rhs,
    master_equation_rhs,
    random_density_matrix,
    random_hermitian,
    random_lindblad_system,
    superoperator_by_columns,
)

SQ3_4 = math.sqrt(3.0) / 4.0


def test_element_order_d3():
    assert element_order(3) == (
        (0, 0), (1, 1), (2, 2),
        (0, 1), (1, 0), (0, 2), (2, 0), (1, 2), (2, 1),
    )


def test_vectorize_maximally_mixed():
    p = vectorize(np.eye(3) / 3)
    np.testing.assert_allclose(p, [1/3, 1/3, 1/3, 0, 0, 0, 0, 0, 0], atol=0)


def test_vectorize_beta_state():
    p = vectorize(initial_state("beta"))
    expected = np.array([0.75, 0, 0.25, 0, 0, SQ3_4, SQ3_4, 0, 0], dtype=complex)
    np.testing.assert_allclose(p, expected, atol=1e-15)


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**31 - 1), dim=st.integers(2, 4))
def test_vectorize_round_trip_exact(seed, dim):
    rho = random_density_matrix(np.random.default_rng(seed), dim)
    assert np.array_equal(devectorize(vectorize(rho)), rho)


def test_devectorize_ground_state():
    rho = devectorize(np.array([1, 0, 0, 0, 0, 0, 0, 0, 0], dtype=complex))
    np.testing.assert_array_equal(rho, np.diag([1.0, 0, 0]))


def test_devectorize_rejects_bad_length():
    with pytest.raises(DimensionMismatchError):
        devectorize(np.zeros(7))


def test_devectorize_keeps_non_conjugate_slots():
    p = np.zeros(9, dtype=complex)
    p[3] = 0.5          # rho_12 without its conjugate partner
    rho = devectorize(p)
    assert rho[0, 1] == 0.5 and rho[1, 0] == 0.0
    assert hermiticity_defect(rho) == pytest.approx(0.5)


def test_vectorize_validation():
    bad_herm = np.array([[1.0, 0.1], [0.0, 0.0]])
    with pytest.raises(NonHermitianError):
        vectorize(bad_herm)
    bad_trace = np.eye(2)
    with pytest.raises(NonPhysicalStateError):
        vectorize(bad_trace)
    not_psd = np.array([[1.2, 0.0], [0.0, -0.2]])
    with pytest.raises(NonPhysicalStateError):
        vectorize(not_psd)
    with pytest.warns(UserWarning):
        vectorize(not_psd, allow_nonphysical=True)


def test_nonpositive_psi_needs_override():
    with pytest.raises(NonPhysicalStateError):
        vectorize(initial_state("psi"))
    with pytest.warns(UserWarning):
        vectorize(initial_state("psi"), allow_nonphysical=True)


def test_hamiltonian_superoperator_zero():
    assert np.all(hamiltonian_superoperator(np.zeros((3, 3))) == 0)


def test_hamiltonian_superoperator_diagonal_phases():
    params = ThreeLevelParams()
    A = hamiltonian_superoperator(hamiltonian(params))
    # populations frozen, each coherence rotates at its level splitting
    assert np.abs(A[:3]).max() == 0
    expected = np.diag([1j, -1j, 2j, -2j, 1j, -1j])
    np.testing.assert_allclose(A[3:, 3:], expected, atol=1e-15)


def test_exchange_hamiltonian_matches_coupling_block():
    J = np.zeros((3, 3), dtype=complex)
    J[1, 2] = J[2, 1] = 1.0
    A = hamiltonian_superoperator(J)
    ref = reference_coupling(ThreeLevelParams(delta1=1.0))
    np.testing.assert_allclose(A, ref, atol=1e-15)


def test_hamiltonian_rejects_non_hermitian():
    H = np.array([[0.0, 1.0], [0.0, 0.0]])
    with pytest.raises(NonHermitianError):
        hamiltonian_superoperator(H)
    hamiltonian_superoperator(H, allow_non_hermitian=True)


def test_dissipator_zero_rate():
    L = np.array([[0, 1], [0, 0]], dtype=complex)
    assert np.all(dissipator_superoperator(JumpChannel(L, 0.0)) == 0)


def test_dissipator_single_channel_brute_force():
    rng = np.random.default_rng(7)
    L = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    ch = JumpChannel(L, 0.7)
    built = dissipator_superoperator(ch)
    oracle = superoperator_by_columns(
        lambda E: master_equation_rhs(np.zeros((2, 2)), [ch], E), 2
    )
    np.testing.assert_allclose(built, oracle, atol=1e-12)


def test_reference_blocks_from_generic_build(params=ThreeLevelParams()):
    W0 = build_liouvillian(hamiltonian(params), channels(params))
    np.testing.assert_allclose(
        W0[:3, :3], reference_population_block(params), atol=1e-12
    )
    np.testing.assert_allclose(
        W0[3:, 3:], reference_coherence_block(params), atol=1e-12
    )
    assert np.abs(W0[:3, 3:]).max() == 0
    assert np.abs(W0[3:, :3]).max() == 0


@pytest.mark.parametrize("dim", [2, 3])
def test_liouvillian_brute_force_equivalence(dim, rng):
    H, chans = random_lindblad_system(rng, dim)
    W = build_liouvillian(H, chans)
    oracle = superoperator_by_columns(
        lambda E: master_equation_rhs(H, chans, E), dim
    )
    np.testing.assert_allclose(W, oracle, atol=1e-12)


def test_commutator_brute_force_equivalence(rng):
    J = random_hermitian(rng, 2)
    built = hamiltonian_superoperator(J)
    oracle = superoperator_by_columns(lambda E: commutator_rhs(J, E), 2)
    np.testing.assert_allclose(built, oracle, atol=1e-13)


def test_build_liouvillian_trivial_and_errors():
    assert np.all(build_liouvillian(np.zeros((2, 2)), []) == 0)
    ch = JumpChannel(np.eye(3, dtype=complex), 1.0)
    with pytest.raises(DimensionMismatchError):
        build_liouvillian(np.zeros((2, 2)), [ch])


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 2**31 - 1))
def test_trace_functional_is_left_null_vector(seed):
    rng = np.random.default_rng(seed)
    H, chans = random_lindblad_system(rng, 3)
    W = build_liouvillian(H, chans)
    ell = trace_functional(9)
    assert np.abs(ell @ W).max() < 1e-10


@settings(max_examples=15, deadline=None)
@given(seed=st.integers(0, 2**31 - 1))
def test_propagation_preserves_trace_and_hermiticity(seed):
    from scipy.linalg import expm

    rng = np.random.default_rng(seed)
    H, chans = random_lindblad_system(rng, 2)
    W = build_liouvillian(H, chans)
    rho0 = random_density_matrix(rng, 2)
    p = vectorize(rho0)
    for t in (0.1, 1.0, 10.0):
        pt = expm(W * t) @ p
        rho_t = devectorize(pt)
        assert abs(np.trace(rho_t) - 1) < 1e-12
        assert hermiticity_defect(rho_t) < 1e-10


def test_hamiltonian_superoperator_real_linear(rng):
    H1 = random_hermitian(rng, 3)
    H2 = random_hermitian(rng, 3)
    a, b = 0.7, -1.3
    lhs = hamiltonian_superoperator(a * H1 + b * H2)
    rhs = a * hamiltonian_superoperator(H1) + b * hamiltonian_superoperator(H2)
    np.testing.assert_allclose(lhs, rhs, atol=1e-12)


def test_dissipator_linear_in_rate(rng):
    L = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    d1 = dissipator_superoperator(JumpChannel(L, 0.3))
    d2 = dissipator_superoperator(JumpChannel(L, 0.9))
    np.testing.assert_allclose(3.0 * d1, d2, atol=1e-12)


def test_jump_channel_validation():
    with pytest.raises(ValueError):
        JumpChannel(np.eye(2, dtype=complex), -0.5)
    with pytest.raises(DimensionMismatchError):
        JumpChannel(np.zeros((2, 3)), 1.0)
