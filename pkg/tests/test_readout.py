"""Ridge readout training against independent least-squares oracles."""

import numpy as np
import pytest

from intesn.readout import ReadoutMatrix, readout_apply, ridge_fit, winner_take_all


def oracle_fit(x, y, lam):
    """Independent route: augmented least squares [X; sqrt(lam) I] via lstsq."""
    n = x.shape[1]
    if lam == 0.0:
        w_t = np.linalg.pinv(x, rcond=1e-10) @ y
    else:
        xa = np.vstack([x, np.sqrt(lam) * np.eye(n)])
        ya = np.vstack([y, np.zeros((n, y.shape[1]))])
        w_t, *_ = np.linalg.lstsq(xa, ya, rcond=None)
    return w_t.T


class TestRidgeFit:
    def test_identity_design(self):
        y = np.random.default_rng(0).normal(size=(6, 2))
        fit = ridge_fit(np.eye(6), y, lam=0.0)
        assert np.allclose(fit.w_out, y.T, atol=1e-10)

    def test_huge_lambda_shrinks_to_zero(self):
        rng = np.random.default_rng(1)
        fit = ridge_fit(rng.normal(size=(20, 5)), rng.normal(size=(20, 2)), lam=1e12)
        assert np.abs(fit.w_out).max() < 1e-9

    def test_hand_checked_two_by_two(self):
        # X = diag(1,2), Y = [1,4]^T, lam=1: W = [1/2, 8/5]
        fit = ridge_fit(np.array([[1.0, 0.0], [0.0, 2.0]]), np.array([[1.0], [4.0]]), lam=1.0)
        assert np.allclose(fit.w_out, [[0.5, 1.6]], atol=1e-12)

    @pytest.mark.parametrize("lam", [0.0, 0.1, 1.0])
    def test_matches_oracle(self, lam):
        rng = np.random.default_rng(2)
        for _ in range(20):
            t, n, l = int(rng.integers(12, 50)), int(rng.integers(2, 10)), int(rng.integers(1, 4))
            x = rng.normal(size=(t, n))
            y = rng.normal(size=(t, l))
            ours = ridge_fit(x, y, lam=lam).w_out
            ref = oracle_fit(x, y, lam)
            assert np.abs(ours - ref).max() <= 1e-8 * max(1.0, np.abs(ref).max())

    def test_singular_design_min_norm(self):
        # rank-deficient X: pinv picks the minimum-norm minimizer
        x = np.array([[1.0, 1.0], [2.0, 2.0], [3.0, 3.0]])
        y = np.array([[2.0], [4.0], [6.0]])
        fit = ridge_fit(x, y, lam=0.0)
        assert np.allclose(fit.w_out, [[1.0, 1.0]], atol=1e-9)

    def test_integer_states_promoted(self):
        x = np.array([[1, 0], [0, 2]], dtype=np.int8)
        fit = ridge_fit(x, np.array([[1.0], [4.0]]), lam=0.0)
        assert np.allclose(fit.w_out, [[1.0, 2.0]], atol=1e-9)

    def test_row_order_invariant(self):
        rng = np.random.default_rng(3)
        x = rng.normal(size=(30, 6))
        y = rng.normal(size=(30, 2))
        perm = rng.permutation(30)
        a = ridge_fit(x, y, lam=0.5).w_out
        b = ridge_fit(x[perm], y[perm], lam=0.5).w_out
        assert np.allclose(a, b, atol=1e-10)

    def test_first_order_optimality(self):
        rng = np.random.default_rng(4)
        x = rng.normal(size=(40, 8))
        y = rng.normal(size=(40, 3))
        lam = 0.3
        w = ridge_fit(x, y, lam=lam).w_out

        def objective(m):
            return np.linalg.norm(x @ m.T - y) ** 2 + lam * np.linalg.norm(m) ** 2

        base = objective(w)
        for _ in range(100):
            delta = rng.normal(size=w.shape) * 1e-4
            assert objective(w + delta) >= base - 1e-9

    def test_shape_mismatch(self):
        with pytest.raises(ValueError, match="mismatch"):
            ridge_fit(np.zeros((3, 2)), np.zeros((4, 1)))

    def test_non_finite_rejected(self):
        x = np.zeros((3, 2))
        x[0, 0] = np.inf
        with pytest.raises(ValueError, match="finite"):
            ridge_fit(x, np.zeros((3, 1)))


class TestReadoutApply:
    def test_identity(self):
        r = ReadoutMatrix(np.eye(4))
        x = np.array([1.0, -2.0, 3.0, 0.5])
        assert np.array_equal(readout_apply(r, x), x)

    def test_zero_state(self):
        r = ReadoutMatrix(np.random.default_rng(5).normal(size=(3, 6)))
        assert not readout_apply(r, np.zeros(6)).any()

    def test_small_arithmetic(self):
        r = ReadoutMatrix(np.array([[2.0, -1.0]]))
        assert readout_apply(r, np.array([3.0, 4.0])).tolist() == [2.0]

    def test_batch_rows(self):
        r = ReadoutMatrix(np.array([[1.0, 0.0], [0.0, 1.0]]))
        states = np.array([[1.0, 2.0], [3.0, 4.0]])
        assert np.array_equal(readout_apply(r, states), states)

    def test_dimension_mismatch(self):
        r = ReadoutMatrix(np.ones((1, 3)))
        with pytest.raises(ValueError, match="width"):
            readout_apply(r, np.ones(4))


class TestWinnerTakeAll:
    def test_basic(self):
        assert winner_take_all(np.array([0.1, 0.9, 0.3])) == 1

    def test_tie_breaks_low(self):
        assert winner_take_all(np.array([0.5, 0.5])) == 0

    def test_scale_invariant(self):
        rng = np.random.default_rng(6)
        for _ in range(50):
            y = rng.normal(size=7)
            assert winner_take_all(3.7 * y) == winner_take_all(y)

    def test_empty_rejected(self):
        with pytest.raises(ValueError, match="empty"):
            winner_take_all(np.array([]))
