"""
test_diagonalizer.py
────────────────────────────────────────────────────────
- 닫힌형식 (ω 실수 / 순허수) vs eigen2
- ‖S_j‖, ‖S_j⁻¹‖ 성장 적합 + 결손 모드 j_0 정책
- 가환 동시 대각화 / ε 연속 라벨 트랙
"""

from __future__ import annotations

import math

import numpy as np
import pytest

from ghtorus.drivers.symbols import PowerSequence, diagonal_r, nilpotent, offdiag_gamma, perturbed_symbols
from ghtorus.errors import Defective, MixedOmega, ParameterOutOfRange, SmallJ, ZeroOmega
from ghtorus.services.diagonalizer import (
    closed_form_noncomm,
    eigen2,
    entry_norms,
    simultaneous_shift,
    strong_diag_profile,
    track_eigenvalues,
)


def _reconstruct(pair) -> np.ndarray:
    return pair.S @ pair.diag() @ pair.S_inv


# -----------------------------------------------------
# closed_form_noncomm
# -----------------------------------------------------
def test_closed_form_real_matches_eigen2():
    pair = closed_form_noncomm(1.0, 1.0, 1)
    ref = eigen2(np.array([[-1, 1], [1, 1]]))
    assert np.allclose(pair.eigenvalues, (-math.sqrt(2), math.sqrt(2)), atol=1e-12)
    assert np.allclose(pair.eigenvalues, ref.eigenvalues, atol=1e-12)
    assert np.allclose(_reconstruct(pair), [[-1, 1], [1, 1]], atol=1e-12)


def test_closed_form_imaginary_omega():
    pair = closed_form_noncomm(1j, 10.0, 100)
    s = math.sqrt(9900.0)
    assert np.allclose(pair.eigenvalues, (-1j * s, 1j * s), atol=1e-10)
    M = np.array([[-100j, 10], [10, 100j]])
    assert np.allclose(_reconstruct(pair), M, atol=1e-9)


@pytest.mark.parametrize("omega", [2.0, -0.5, 3j])
def test_closed_form_unperturbed(omega):
    pair = closed_form_noncomm(omega, 0.0, 7)
    assert np.allclose(pair.eigenvalues, (-omega * 7, omega * 7))
    assert np.allclose(pair.S, np.eye(2))


def test_closed_form_negative_alpha_keeps_label():
    # σ¹ 은 -ωj = +3 쪽
    pair = closed_form_noncomm(-1.0, 4.0, 3)
    assert pair.eigenvalues[0].real == pytest.approx(5.0)
    assert pair.eigenvalues[1].real == pytest.approx(-5.0)


def test_closed_form_errors():
    with pytest.raises(ZeroOmega):
        closed_form_noncomm(0.0, 1.0, 1)
    with pytest.raises(MixedOmega):
        closed_form_noncomm(1 + 1j, 1.0, 1)
    with pytest.raises(SmallJ):
        closed_form_noncomm(1j, 10.0, 5)
    with pytest.raises(ValueError):
        closed_form_noncomm(1.0, 1.0, 0)


# -----------------------------------------------------
# strong_diag_profile
# -----------------------------------------------------
def test_profile_imaginary_omega_sqrt_gamma():
    fam = offdiag_gamma(PowerSequence(1.0, 0.5))
    fit = strong_diag_profile(1j, fam, 1, 4096)
    # j = 1 은 Jordan 블록 (β²j² = γ_j²)
    assert fit.defective_js == [1]
    assert fit.j0 <= 4
    assert fit.slope_Sinv < 0.05
    assert fit.bounded[1]


def test_profile_symmetric_real_is_flat():
    fam = offdiag_gamma(PowerSequence(1.0, 0.5))
    fit = strong_diag_profile(1.0, fam, 1, 2048)
    assert abs(fit.slope_S) < 0.02
    assert abs(fit.slope_Sinv) < 0.02
    assert fit.bounded == (True, True)
    assert fit.defective_js == []


def test_profile_without_enough_points():
    fam = offdiag_gamma(PowerSequence(1.0, 0.5))
    with pytest.raises(Defective):
        strong_diag_profile(1j, fam, 1, 2)


def test_profile_rejects_empty_range():
    with pytest.raises(ValueError):
        strong_diag_profile(1.0, offdiag_gamma(PowerSequence(1.0, 0.0)), 10, 5)


def test_growth_fits_use_max_entry_norm():
    S = np.array([[[1.0, 1.0], [1.0, 1.0]], [[0.0, -3.0j], [0.5, 0.0]]])
    assert entry_norms(S).tolist() == [1.0, 3.0]


def test_growth_transfer_bound(rng):
    fam = offdiag_gamma(PowerSequence(1.0, 0.5))
    fit = strong_diag_profile(1j, fam, 1, 512)
    for j in rng.integers(fit.j0, 513, size=20):
        pair = eigen2(perturbed_symbols(1j, fam, [int(j)])[0]).require(j=int(j))
        u = rng.normal(size=2) + 1j * rng.normal(size=2)
        u /= np.linalg.norm(u)
        # ‖S u‖₂ ≤ ‖S‖_F ≤ 2·max|s_ik|
        bound = 2.0 * fit.k_const * float(j) ** fit.slope_S
        assert np.linalg.norm(pair.S @ u) <= bound + 1e-12


# -----------------------------------------------------
# 삼각 / 가환
# -----------------------------------------------------
def test_nilpotent_is_triangular_exact():
    M = perturbed_symbols(1.0, nilpotent(PowerSequence(1.0, 0.5)), [5])[0]
    pair = eigen2(M).require(j=5)
    assert pair.eigenvalues == (-5 + 0j, 5 + 0j)


def test_simultaneous_shift_diagonal():
    fam = diagonal_r(PowerSequence(2.0, 1.0))
    pair = simultaneous_shift(1.5, fam, 0.25, 8)
    assert pair.eigenvalues == pytest.approx((-12 + 4, 12 + 4))
    ref = eigen2(perturbed_symbols(1.5, fam, [8], 0.25)[0])
    assert np.allclose(sorted(pair.eigenvalues, key=lambda z: z.real), ref.eigenvalues)


def test_simultaneous_shift_rejects_offdiag():
    with pytest.raises(ParameterOutOfRange):
        simultaneous_shift(1.0, offdiag_gamma(PowerSequence(1.0, 0.0)), 0.5, 3)


# -----------------------------------------------------
# track_eigenvalues
# -----------------------------------------------------
def test_track_at_zero_is_unperturbed():
    js = np.arange(1, 6)
    tr = track_eigenvalues(2.0, offdiag_gamma(PowerSequence(1.0, 0.5)), 0.0, js)
    assert np.array_equal(tr[:, 0], -2.0 * js)
    assert np.array_equal(tr[:, 1], 2.0 * js)


def test_track_labels_follow_unperturbed_branch():
    js = np.arange(1, 33)
    fam = offdiag_gamma(PowerSequence(1.0, 0.5))
    tr = track_eigenvalues(1.0, fam, 0.5, js)
    expected = np.sqrt(js ** 2 + 0.25 * js)
    assert np.allclose(tr[:, 0], -expected, atol=1e-10)
    assert np.allclose(tr[:, 1], expected, atol=1e-10)


def test_small_eps_weyl_bound():
    js = np.arange(1, 65)
    fam = offdiag_gamma(PowerSequence(1.0, 0.5))
    eps = 1e-3
    tr = track_eigenvalues(1j, fam, eps, js)
    base = track_eigenvalues(1j, fam, 0.0, js)
    norms = np.linalg.norm(fam.matrices(js), ord=2, axis=(-2, -1))
    assert np.all(np.abs(tr - base) <= 2 * eps * norms[:, None] + 1e-12)
