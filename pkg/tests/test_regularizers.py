import numpy as np
import pytest

from dctrecover import (InvalidCutoffError, InvalidDimensionError,
                        ScaleTooLargeError, dct2, dct_norm_global,
                        dct_norm_gradient, dct_norm_local, dct_norm_multiscale,
                        freq_coupling_gradient, freq_coupling_norm,
                        theorem1_operators, tv_linear_gradient, tv_norm_aniso,
                        tv_norm_iso, tv_norm_linear)


def local_norm_oracle(x, p, q):
    """Loop over every window, transform, zero the low block, accumulate."""
    n, m = x.shape
    total = 0.0
    for i in range(n - p + 1):
        for j in range(m - p + 1):
            d = dct2(x[i:i + p, j:j + p])
            total += np.sum(d * d) - np.sum(d[:q, :q] * d[:q, :q])
    return total


def fd_gradient(f, x, h=1e-5):
    g = np.zeros_like(x)
    it = np.nditer(x, flags=["multi_index"])
    for _ in it:
        idx = it.multi_index
        xp = x.copy(); xp[idx] += h
        xm = x.copy(); xm[idx] -= h
        g[idx] = (f(xp) - f(xm)) / (2 * h)
    return g


def rel_err(a, b):
    return np.linalg.norm(a - b) / max(np.linalg.norm(b), 1e-30)


class TestDctNorms:
    def test_local_matches_windowed_oracle(self):
        rng = np.random.default_rng(0)
        x = rng.uniform(0, 255, (12, 14))
        for p, q in ((2, 1), (3, 2), (8, 4), (12, 12)):
            got = dct_norm_local(x, p, q)
            want = local_norm_oracle(x, p, q)
            assert abs(got - want) < 1e-8 * max(1.0, want)

    def test_global_matches_direct_dct(self):
        x = np.random.default_rng(1).uniform(0, 255, (9, 9))
        d = dct2(x)
        for q in (1, 3, 9):
            want = float(np.sum(d * d) - np.sum(d[:q, :q] ** 2))
            assert abs(dct_norm_global(x, q) - want) < 1e-10 * max(1.0, want)

    def test_global_q1_is_energy_minus_dc(self):
        x = np.random.default_rng(2).uniform(0, 255, (7, 5))
        dc = dct2(x)[0, 0]
        want = float(np.sum(x * x) - dc * dc)   # Parseval
        assert abs(dct_norm_global(x, 1) - want) < 1e-9

    def test_constant_image_scores_zero(self):
        x = np.full((10, 10), 42.0)
        assert dct_norm_global(x, 1) < 1e-18
        for p, q in ((2, 1), (5, 2), (10, 4)):
            assert dct_norm_local(x, p, q) < 1e-18

    def test_full_size_patch_equals_global(self):
        x = np.random.default_rng(3).uniform(0, 255, (9, 9))
        for q in (1, 2, 3):
            assert abs(dct_norm_local(x, 9, q) - dct_norm_global(x, q)) < 1e-10 * 1e5

    def test_multiscale_is_weighted_sum(self):
        x = np.random.default_rng(4).uniform(0, 255, (10, 10))
        scales = [(2, 1, 0.3), (5, 2, 1.7)]
        want = 0.3 * dct_norm_local(x, 2, 1) + 1.7 * dct_norm_local(x, 5, 2)
        assert abs(dct_norm_multiscale(x, scales) - want) < 1e-8
        assert dct_norm_multiscale(x, []) == 0.0
        assert abs(dct_norm_multiscale(x, [(5, 2, 1.0)]) - dct_norm_local(x, 5, 2)) < 1e-10 * 1e5

    def test_nonnegative(self):
        x = np.random.default_rng(5).standard_normal((8, 8))
        assert dct_norm_global(x, 2) >= 0.0
        assert dct_norm_local(x, 3, 1) >= 0.0

    def test_scale_validation(self):
        x = np.ones((4, 4))
        with pytest.raises(ScaleTooLargeError):
            dct_norm_local(x, 5, 1)
        with pytest.raises(InvalidCutoffError):
            dct_norm_local(x, 3, 0)
        with pytest.raises(InvalidCutoffError):
            dct_norm_global(x, 5)
        with pytest.raises(InvalidDimensionError):
            dct_norm_local(np.ones(4), 2, 1)


class TestDctGradient:
    def test_matches_finite_differences(self):
        rng = np.random.default_rng(6)
        scales = [(2, 1, 1.5e-2), (4, 2, 0.5), (8, 3, 1.0)]
        for _ in range(3):
            x = rng.uniform(0, 1, (10, 10))
            full = 2.0 * dct_norm_gradient(x, scales)
            fd = fd_gradient(lambda v: dct_norm_multiscale(v, scales), x)
            assert rel_err(fd, full) < 1e-6

    def test_zero_on_constants(self):
        g = dct_norm_gradient(np.full((9, 9), 7.0), [(2, 1, 1.0), (9, 3, 0.5)])
        assert np.abs(g).max() < 1e-12

    def test_zero_weight_contributes_nothing(self):
        x = np.random.default_rng(7).uniform(0, 255, (8, 8))
        a = dct_norm_gradient(x, [(2, 1, 1.0), (8, 4, 0.0)])
        b = dct_norm_gradient(x, [(2, 1, 1.0)])
        assert np.array_equal(a, b)


class TestTvNorms:
    def test_tiny_example_all_variants(self):
        x = np.array([[0.0, 1.0], [2.0, 3.0]])
        # forward diffs: horizontal 1, 1; vertical 2, 2
        assert abs(tv_norm_aniso(x) - 6.0) < 1e-12
        assert abs(tv_norm_linear(x) - 10.0) < 1e-12
        assert abs(tv_norm_iso(x) - (np.sqrt(5.0) + 3.0)) < 1e-12

    def test_match_direct_sums(self):
        x = np.random.default_rng(8).uniform(0, 255, (11, 13))
        dx = x[:, 1:] - x[:, :-1]
        dy = x[1:, :] - x[:-1, :]
        assert abs(tv_norm_aniso(x) - (np.abs(dx).sum() + np.abs(dy).sum())) < 1e-9
        assert abs(tv_norm_linear(x) - ((dx ** 2).sum() + (dy ** 2).sum())) < 1e-9

    def test_constant_scores_zero(self):
        x = np.full((6, 7), 9.0)
        assert tv_norm_iso(x) == 0.0
        assert tv_norm_aniso(x) == 0.0
        assert tv_norm_linear(x) == 0.0

    def test_linear_gradient_matches_fd(self):
        x = np.random.default_rng(9).uniform(0, 1, (9, 9))
        fd = fd_gradient(tv_norm_linear, x)
        assert rel_err(fd, tv_linear_gradient(x)) < 1e-7


class TestFreqCoupling:
    def test_identical_channels_score_zero(self):
        x = np.random.default_rng(10).uniform(0, 255, (8, 8))
        assert freq_coupling_norm([x, x, x]) == 0.0

    def test_constant_offsets_score_zero(self):
        x = np.random.default_rng(11).uniform(0, 255, (8, 8))
        assert freq_coupling_norm([x, x + 30.0, x - 12.5]) < 1e-18

    def test_value_matches_direct_formula(self):
        rng = np.random.default_rng(12)
        chans = [rng.uniform(0, 255, (8, 8)) for _ in range(3)]
        want = 0.0
        for a in range(3):
            for b in range(a + 1, 3):
                d = dct2(chans[a] - chans[b])
                d[0, 0] = 0.0
                want += np.sum(d * d)
        assert abs(freq_coupling_norm(chans) - 0.5 * want) < 1e-8

    def test_gradient_matches_fd(self):
        rng = np.random.default_rng(13)
        chans = [rng.uniform(0, 1, (6, 6)) for _ in range(3)]
        for c in range(3):
            def f(v, c=c):
                per = [ch.copy() for ch in chans]
                per[c] = v
                return freq_coupling_norm(per)
            fd = fd_gradient(f, chans[c])
            assert rel_err(fd, 2.0 * freq_coupling_gradient(chans, c)) < 1e-7

    def test_channel_validation(self):
        x = np.ones((4, 4))
        with pytest.raises(InvalidDimensionError):
            freq_coupling_norm([x, x])
        with pytest.raises(InvalidDimensionError):
            freq_coupling_norm([x, x, np.ones((3, 3))])


E_VECTORS = np.array([[1, 1, -1, -1], [1, -1, 1, -1], [1, -1, -1, 1]], dtype=float)
D_VECTORS = np.array([[1, 0, -1, 0], [1, -1, 0, 0], [0, 1, 0, -1], [0, 0, 1, -1]], dtype=float)


class TestTheorem1Operators:
    def test_construction(self):
        e, d = theorem1_operators()
        assert np.array_equal(e, 2.0 * E_VECTORS.T @ E_VECTORS)
        assert np.array_equal(d, 2.0 * D_VECTORS.T @ D_VECTORS)

    def test_constant_vector_in_both_null_spaces(self):
        e, d = theorem1_operators()
        ones = np.ones(4)
        assert np.abs(e @ ones).max() == 0.0
        assert np.abs(d @ ones).max() == 0.0

    def test_rank_three_null_space_is_span_of_ones(self):
        for mat in theorem1_operators():
            vals, vecs = np.linalg.eigh(mat)
            assert np.sum(np.abs(vals) < 1e-10) == 1
            null_vec = vecs[:, np.argmin(np.abs(vals))]
            assert np.abs(np.abs(null_vec) - 0.5).max() < 1e-10   # normalized ones

    def test_value_identity_on_patches(self):
        # 4 * high-pass patch energy equals the unnormalized AC expansion
        rng = np.random.default_rng(14)
        for _ in range(50):
            patch = rng.standard_normal((2, 2))
            vec = patch.ravel()
            want = float(np.sum((E_VECTORS @ vec) ** 2))
            assert abs(4.0 * dct_norm_local(patch, 2, 1) - want) < 1e-12

    def test_zero_sets_coincide(self):
        const = np.full((2, 2), 3.0)
        assert dct_norm_local(const, 2, 1) < 1e-18 and tv_norm_linear(const) < 1e-18
        bumpy = np.array([[1.0, 0.0], [0.0, 0.0]])
        assert dct_norm_local(bumpy, 2, 1) > 0.1 and tv_norm_linear(bumpy) > 0.1

    def test_values_differ_off_null_space(self):
        x = np.array([[1.0, 0.0], [0.0, 0.0]])
        assert abs(4.0 * dct_norm_local(x, 2, 1) - 3.0) < 1e-12
        assert abs(tv_norm_linear(x) - 2.0) < 1e-12


def quadratic_hessian(grad_fn, n):
    """Hessian columns of a homogeneous quadratic via its (linear) gradient."""
    h = np.zeros((n * n, n * n))
    for k in range(n * n):
        e = np.zeros((n, n))
        e.flat[k] = 1.0
        h[:, k] = grad_fn(e).ravel()
    return h


def pinned_minimizer(hess, obs_idx, obs_val, n):
    free = np.setdiff1d(np.arange(n * n), obs_idx)
    x = np.zeros(n * n)
    x[obs_idx] = obs_val
    rhs = -hess[np.ix_(free, obs_idx)] @ obs_val
    x[free] = np.linalg.solve(hess[np.ix_(free, free)], rhs)
    return x.reshape(n, n)


@pytest.mark.xfail(strict=True, reason=(
    "the two quadratics share a null space but not level sets, so pinned "
    "minimizers differ: on a single 2x2 patch with a, b, c observed the "
    "patch-DCT optimum of the free pixel is (a+b+c)/3 while the linear-TV "
    "optimum is the mean of its two grid neighbors"))
def test_pinned_minimizers_agree_4x4():
    rng = np.random.default_rng(15)
    n = 4
    h_dct = quadratic_hessian(lambda v: 2.0 * dct_norm_gradient(v, [(2, 1, 1.0)]), n)
    h_tv = quadratic_hessian(tv_linear_gradient, n)
    for _ in range(5):
        obs_idx = rng.choice(n * n, size=3, replace=False)
        obs_val = rng.uniform(0, 255, size=3)
        a = pinned_minimizer(h_dct, obs_idx, obs_val, n)
        b = pinned_minimizer(h_tv, obs_idx, obs_val, n)
        assert np.abs(a - b).max() < 1e-8
