import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from specproj.symcore import block_diag, is_psd, lambda_min, symmat

from oracles import bisect_lambda_min


def sym_matrices(max_k=6):
    def build(a):
        return 0.5 * (a + a.T)

    return st.integers(1, max_k).flatmap(
        lambda k: arrays(float, (k, k), elements=st.floats(-10, 10)).map(build)
    )


def test_lambda_min_examples():
    assert lambda_min(np.diag([1.0, 2.0])) == 1.0
    assert lambda_min(np.array([[0.0, 1.0], [1.0, 0.0]])) == pytest.approx(-1.0, abs=1e-15)


@pytest.mark.parametrize("seed", range(10))
def test_lambda_min_matches_bisection(seed):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(5, 5))
    M = symmat(0.5 * (a + a.T))
    assert lambda_min(M) == pytest.approx(bisect_lambda_min(M), abs=1e-8)


def test_is_psd_examples():
    assert is_psd(np.zeros((3, 3)), 0.0)
    assert not is_psd(np.array([[1.0, 2.0], [2.0, 1.0]]), 1e-9)
    # [[x, 1], [1, y]] at x = y = 1: diagonal >= 0 and det = 0
    assert is_psd(np.array([[1.0, 1.0], [1.0, 1.0]]), 0.0)


def test_is_psd_rejects_negative_tol():
    with pytest.raises(ValueError):
        is_psd(np.eye(2), -1.0)


def test_block_diag_examples():
    np.testing.assert_array_equal(block_diag([[[1.0]], [[2.0]]]), np.diag([1.0, 2.0]))
    np.testing.assert_array_equal(block_diag([np.eye(2), np.zeros((1, 1))]), np.diag([1.0, 1.0, 0.0]))
    with pytest.raises(ValueError, match="no blocks"):
        block_diag([])


def test_symmat_symmetrizes_and_freezes():
    M = symmat([[1.0, 2.0], [2.0 + 5e-13, 3.0]])
    assert M[0, 1] == M[1, 0]
    assert not M.flags.writeable
    with pytest.raises(ValueError, match="asymmetry"):
        symmat([[1.0, 2.0], [2.1, 3.0]])
    with pytest.raises(ValueError):
        symmat([[1.0, 2.0]])
    with pytest.raises(ValueError):
        symmat([[np.nan]])


@given(sym_matrices(), st.sampled_from([-1.0, 0.0, 1.0, 10.0]))
def test_shift_moves_lambda_min(M, t):
    assert lambda_min(M + t * np.eye(len(M))) == pytest.approx(lambda_min(M) + t, abs=1e-9)


@given(sym_matrices(), st.floats(1e-12, 1e3))
def test_psd_monotone_in_tol(M, tol):
    if is_psd(M, 0.0):
        assert is_psd(M, tol)


@settings(max_examples=50)
@given(st.lists(sym_matrices(4), min_size=2, max_size=4))
def test_block_diag_spectrum_is_union(blocks):
    merged = np.sort(np.concatenate([np.linalg.eigvalsh(b) for b in blocks]))
    np.testing.assert_allclose(np.linalg.eigvalsh(block_diag(blocks)), merged, atol=1e-9)
    assert lambda_min(block_diag(blocks)) == pytest.approx(min(map(lambda_min, blocks)), abs=1e-9)
