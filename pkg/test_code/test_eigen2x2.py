"""
test_eigen2x2.py
────────────────────────────────────────────────────────
- 닫힌형식 2x2 분해: 정렬, 결손, 삼각 정확성, 작은 근 안정성, numpy 대조
"""

from __future__ import annotations

import math

import numpy as np
import pytest

from ghtorus.drivers.eigen2x2 import eigen2, eigen_batch, label_by_reference
from ghtorus.errors import Defective


def test_symmetric_pair_sorted_and_reconstructs():
    M = np.array([[-1.0, 1.0], [1.0, 1.0]])
    pair = eigen2(M)
    assert pair.eigenvalues[0] == pytest.approx(-math.sqrt(2.0))
    assert pair.eigenvalues[1] == pytest.approx(math.sqrt(2.0))
    assert not pair.defective
    assert np.allclose(pair.S @ pair.S_inv, np.eye(2), atol=1e-14)
    assert np.allclose(M @ pair.S, pair.S @ pair.diag(), atol=1e-14)


def test_jordan_block_flagged():
    pair = eigen2(np.array([[0.0, 1.0], [0.0, 0.0]]))
    assert pair.defective
    with pytest.raises(Defective):
        pair.require(j=3)


def test_triangular_eigenvalues_exact():
    phi = (1.0 + math.sqrt(5.0)) / 2.0
    M = np.array([[-5 * phi, 0.0], [3.0, 5 * phi]])
    pair = eigen2(M)
    assert pair.eigenvalues == (complex(-5 * phi), complex(5 * phi))


def test_small_root_is_stable():
    M = np.array([[1e8, 1.0], [1e-8, 0.0]])
    pair = eigen2(M)
    assert pair.eigenvalues[0].real == pytest.approx(-1e-16, rel=1e-9)
    assert pair.eigenvalues[1].real == pytest.approx(1e8, rel=1e-15)


def test_batch_matches_numpy(rng):
    M = rng.normal(size=(200, 2, 2)) + 1j * rng.normal(size=(200, 2, 2))
    vals, S, S_inv, bad = eigen_batch(M)
    assert not bad.any()
    for k in range(M.shape[0]):
        ref = np.linalg.eigvals(M[k])
        assert min(
            abs(vals[k, 0] - ref[0]) + abs(vals[k, 1] - ref[1]),
            abs(vals[k, 0] - ref[1]) + abs(vals[k, 1] - ref[0]),
        ) < 1e-10
    recon = S @ (vals[..., :, None] * S_inv)
    assert np.allclose(recon, M, atol=1e-9)


def test_columns_normalized_to_unit_max():
    M = np.array([[[2.0, 3.0], [1.0, -4.0]]])
    _, S, _, _ = eigen_batch(M)
    assert np.allclose(np.abs(S[0]).max(axis=0), 1.0)


def test_label_by_reference_swaps():
    vals = np.array([[2.0 + 0j, -2.0 + 0j]])
    ref = np.array([[-1.9 + 0j, 1.9 + 0j]])
    out = label_by_reference(vals, ref)
    assert np.array_equal(out, np.array([[-2.0 + 0j, 2.0 + 0j]]))


def test_eigen_batch_rejects_nonpositive_tol():
    with pytest.raises(ValueError):
        eigen_batch(np.eye(2)[None], tol=0.0)
