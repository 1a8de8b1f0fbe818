import numpy as np
import pytest

from qmpemba import (
    RtnSpec,
    SmallDenominatorError,
    decompose,
    embed,
    extended_generator,
    first_order_vectors,
    coupling_matrix,
    mixing_coefficient,
    mixing_coefficients,
    normalization_factor,
    perturbative_trajectory,
    second_order_eigenvalue,
    steady_state,
)
from qmpemba.threelevel import (
    ThreeLevelParams,
    build_reference_system,
    rtn_spec,
    coherence_mixing_prefactor_closed_form,
    population_shift_closed_form,
)

from oracles import random_lindblad_system, random_hermitian

NU = 0.1


def slow_coherence_index(data):
    """Mode at -gamma21/2 + i*omega2 in the default parameterization."""
    return int(np.argmin(np.abs(data.eigenvalues - (-0.5 + 1j))))


def rate_one_index(data):
    return int(np.argmin(np.abs(data.eigenvalues - (-1.0))))


def test_zero_coupling_gives_zero_corrections(data0):
    res = first_order_vectors(data0, np.zeros((9, 9)), NU, k=2)
    for v in (res.left_correction, res.right_correction,
              res.shifted_left_correction, res.shifted_right_correction):
        assert np.abs(v).max() == 0
    assert normalization_factor(res) == 1.0
    assert second_order_eigenvalue(data0, np.zeros((9, 9)), NU, 2) == 0


def test_shifted_left_correction_structure(data0, system, params):
    """The slow coherence mode's shifted partner picks up exactly one
    physical-block component (the 1-3 coherence slot), with the magnitude
    of the single-term closed form."""
    _, delta, _ = system
    k = slow_coherence_index(data0)
    res = first_order_vectors(data0, delta, params.nu, k)
    corr = res.shifted_left_correction
    assert np.abs(corr[9:]).max() == 0
    support = np.flatnonzero(np.abs(corr[:9]) > 1e-14)
    assert list(support) == [5]  # rho_13 slot
    lam = data0.eigenvalues
    j = int(np.argmin(np.abs(lam - (-4.5 + 2j))))
    expected_mag = params.delta1 / abs(lam[k] - lam[j] - params.nu)
    assert abs(corr[5]) == pytest.approx(expected_mag, rel=1e-12)
    # the single-term closed form agrees in magnitude to a couple percent
    assert abs(corr[5]) == pytest.approx(abs(coherence_mixing_prefactor_closed_form(params)), rel=0.025)


def exact_mode_pair(W, lam_target):
    data = decompose(W)
    k = int(np.argmin(np.abs(data.eigenvalues - lam_target)))
    return data.eigenvalues[k], data.left[:, k], data.right[:, k]


def first_order_residual(params, d1, k_selector):
    """Distance between (zeroth + first order) and the exact eigenvectors,
    with the exact ones rescaled to zeroth-order normalization."""
    pset = ThreeLevelParams(delta1=d1, nu=params.nu)
    W0, delta, W = build_reference_system(pset)
    data0 = decompose(W0)
    k = k_selector(data0)
    lam_k = data0.eigenvalues[k]
    res = first_order_vectors(data0, delta, pset.nu, k)

    R0_shift = np.concatenate([np.zeros(9), data0.right[:, k]])
    L0_shift = np.concatenate([np.zeros(9), data0.left[:, k]])
    _, l_ex, r_ex = exact_mode_pair(W, lam_k - pset.nu)
    r_ex = r_ex / np.vdot(L0_shift, r_ex)
    l_ex = l_ex / np.vdot(l_ex, R0_shift).conjugate()
    dr = np.abs(r_ex - R0_shift - res.shifted_right_correction).max()
    dl = np.abs(l_ex - L0_shift - res.shifted_left_correction).max()
    return max(dr, dl)


def test_first_order_matches_exact_diagonalization(params):
    # residual after subtracting the first-order correction must be at
    # least second order in the coupling (here it is third order: the only
    # second-order piece is parallel to the zeroth vector and is absorbed
    # by the normalization)
    r1 = first_order_residual(params, 0.02, slow_coherence_index)
    r2 = first_order_residual(params, 0.01, slow_coherence_index)
    assert 3.5 < r1 / r2 < 9.0
    assert r1 < 5e-4


def test_mixing_vanishes_at_steady_state(data0, system, pss, params):
    _, delta, _ = system
    coeffs = mixing_coefficients(data0, delta, params.nu, embed(pss))
    assert max(abs(c) for c in coeffs.C.values()) < 1e-12


def test_mixing_zero_for_states_without_coherence(data0, system, params,
                                                  state_vectors):
    _, delta, _ = system
    k = slow_coherence_index(data0)
    for label in ("alpha", "phi"):
        C = mixing_coefficient(data0, delta, params.nu, embed(state_vectors[label]), k)
        assert abs(C) < 1e-12


def test_mixing_beta_value(data0, system, params, state_vectors):
    _, delta, _ = system
    k = slow_coherence_index(data0)
    C = mixing_coefficient(data0, delta, params.nu, embed(state_vectors["beta"]), k)
    # frozen derived value: i*0.4*(sqrt(3)/4) / (3.9 - i)
    expected = 1j * 0.4 * (np.sqrt(3) / 4) / (3.9 - 1j)
    assert C == pytest.approx(expected, abs=5e-13)
    assert abs(C) == pytest.approx(0.0430, abs=5e-4)


def test_mixing_coefficient_exact_oracle_random_system():
    """C_k must reproduce the exact left eigenvector's overlap to second
    order on a generic system, which exercises the j = k intermediate."""
    from qmpemba import build_liouvillian, vectorize

    rng_local = np.random.default_rng(99)
    H, chans = random_lindblad_system(rng_local, 2)
    W0 = build_liouvillian(H, chans)
    J = random_hermitian(rng_local, 2)
    p0_mat = np.array([[0.6, 0.2 - 0.1j], [0.2 + 0.1j, 0.4]])
    p0 = vectorize(p0_mat)
    nu = 0.35

    def resid(d1):
        spec = RtnSpec(J=J, delta1=d1, nu=nu)
        delta = coupling_matrix(spec)
        W = extended_generator(W0, spec)
        data0 = decompose(W0)
        out = []
        for k in range(1, 4):
            lam_k = data0.eigenvalues[k]
            C_pred = mixing_coefficient(data0, delta, nu, embed(p0), k)
            _, l_ex, _ = exact_mode_pair(W, lam_k - nu)
            R0 = np.concatenate([np.zeros(4), data0.right[:, k]])
            l_ex = l_ex / np.vdot(l_ex, R0).conjugate()
            C_exact = np.vdot(l_ex, embed(p0))
            out.append(abs(C_pred - C_exact))
        return max(out)

    r1, r2 = resid(0.02), resid(0.01)
    # physical-block components of the shifted left vector are odd in the
    # coupling, so the residual after first order is third order: ratio 8
    assert 6.0 < r1 / r2 < 10.0


def test_second_order_shift_sign_and_value(data0, system, params):
    _, delta, _ = system
    k = rate_one_index(data0)
    shift = second_order_eigenvalue(data0, delta, params.nu, k)
    assert shift.real < 0
    # frozen derived value: -(7/8) * 2*Re[1/(4.1 - i)] * delta1^2
    expected = -(7 / 8) * (2 * 4.1 / (4.1**2 + 1)) * params.delta1**2
    assert shift == pytest.approx(expected, abs=1e-12)
    # the single-intermediate closed form shares sign and rough size only
    ref = population_shift_closed_form(params)
    assert ref.real < 0
    assert 0.3 < abs(shift) / abs(ref) < 3.0


def test_second_order_matches_exact_diagonalization(params):
    def exact_shift(d1):
        pset = ThreeLevelParams(delta1=d1, nu=params.nu)
        W0, delta, W = build_reference_system(pset)
        data0 = decompose(W0)
        k = rate_one_index(data0)
        lam = np.linalg.eigvals(W)
        lam_exact = lam[np.argmin(np.abs(lam - data0.eigenvalues[k]))]
        pred = second_order_eigenvalue(data0, delta, pset.nu, k)
        return abs((lam_exact - data0.eigenvalues[k]) - pred)

    r1, r2 = exact_shift(0.05), exact_shift(0.025)
    # residual must vanish faster than the second order itself
    assert r1 / r2 > 6.0
    assert r1 < 1e-5


def test_normalization_factor_behavior(data0, params):
    k = slow_coherence_index(data0)

    def b_of(d1):
        delta = coupling_matrix(rtn_spec(ThreeLevelParams(delta1=d1, nu=params.nu)))
        return normalization_factor(first_order_vectors(data0, delta, params.nu, k))

    b = b_of(params.delta1)
    assert abs(b - 1.0) < 0.05
    ratio = abs(b_of(0.4) - 1.0) / abs(b_of(0.2) - 1.0)
    assert ratio == pytest.approx(4.0, abs=0.5)


def test_c1_vanishes_for_all_states(data0, system, params, state_vectors):
    _, delta, _ = system
    for p0 in state_vectors.values():
        C = mixing_coefficient(data0, delta, params.nu, embed(p0), 0)
        assert abs(C) < 1e-12


def test_perturbative_trajectory_error_scaling(params, state_vectors):
    ts = np.linspace(0.0, 20.0, 201)
    p0 = state_vectors["beta"]

    def sup_error(d1):
        pset = ThreeLevelParams(delta1=d1, nu=params.nu)
        W0, delta, W = build_reference_system(pset)
        data0 = decompose(W0)
        approx = perturbative_trajectory(data0, delta, pset.nu, p0, ts)
        dataW = decompose(W)
        pss = steady_state(W0)
        from qmpemba import propagate_spectral

        exact = propagate_spectral(dataW, embed(p0), embed(pss), ts)[:, :9]
        return np.abs(approx - exact).max()

    e1, e2 = sup_error(0.1), sup_error(0.05)
    assert e1 / e2 == pytest.approx(4.0, abs=1.0)
    assert e1 < 5e-3


def test_small_denominator_raises(data0, system):
    _, delta, _ = system
    # nu equal to the gap between the rate-1 mode and the steady mode makes
    # the unshifted correction denominator vanish
    with pytest.raises(SmallDenominatorError) as err:
        first_order_vectors(data0, delta, nu=1.0, k=rate_one_index(data0))
    assert err.value.pair[0] == rate_one_index(data0)


def test_small_denominator_in_mixing():
    data = decompose(np.diag([0.0, -1.0]).astype(complex))
    delta = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
    G0 = np.array([1.0, 0.5, 0.0, 0.0], dtype=complex)
    with pytest.raises(SmallDenominatorError):
        mixing_coefficient(data, delta, 1.0, G0, 0)
