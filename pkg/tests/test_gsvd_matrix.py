import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.testing import assert_allclose, assert_array_equal

from oracles import complex_matrix, pencil_eigenvalues
from tgsvd.error_bounds import matrix_projection_error, theorem1_bound
from tgsvd.errors import DimensionMismatchError, NonFiniteError, NotOrthonormalError, RankOutOfRangeError, SketchSizeError
from tgsvd.gsvd_matrix import (
    cs_decomposition,
    gsvd,
    gsvd_reconstruct,
    partition_factors,
    randomized_gsvd,
    sigma_x,
    sigma_y,
)
from tgsvd.sketch import SketchConfig


def unitary_residual(q):
    return np.linalg.norm(q.conj().T @ q - np.eye(q.shape[1]))


def check_factors(f, x, y):
    assert unitary_residual(f.U) <= 1e-10
    assert unitary_residual(f.V) <= 1e-10
    assert_allclose(f.alphas**2 + f.betas**2, 1, atol=1e-10)
    assert np.all(np.diff(f.alphas) <= 1e-12) and np.all(np.diff(f.betas) >= -1e-12)
    assert f.c + f.d <= f.k
    assert_allclose(f.alphas[: f.c], 1, atol=1e-7)
    assert np.all(f.alphas[f.c:f.c + f.d] > 0)
    xr, yr = gsvd_reconstruct(f)
    assert np.linalg.norm(x - xr) <= 1e-8 * max(np.linalg.norm(x), 1e-300)
    assert np.linalg.norm(y - yr) <= 1e-8 * max(np.linalg.norm(y), 1e-300)
    assert np.linalg.svd(f.Z, compute_uv=False).min() > 0


def test_sigma_layout():
    assert_array_equal(sigma_x(np.array([3.0, 2.0]), 3), [[3, 0], [0, 2], [0, 0]])
    assert_array_equal(sigma_y(np.array([1.0, 2.0]), 3), [[0, 0], [1, 0], [0, 2]])
    # fewer rows than k keeps only the trailing sines
    assert_array_equal(sigma_y(np.array([1.0, 2.0, 3.0]), 2), [[0, 2, 0], [0, 0, 3]])


class TestGsvd:
    def test_identity_pair(self):
        f = gsvd(np.eye(2), np.eye(2))
        assert_allclose(f.alphas, np.sqrt(0.5), atol=1e-14)
        assert_allclose(f.betas, np.sqrt(0.5), atol=1e-14)
        assert_allclose(f.generalized_singular_values(), 1, atol=1e-14)
        xr, yr = gsvd_reconstruct(f)
        assert_allclose(xr, np.eye(2), atol=1e-14)
        assert_allclose(yr, np.eye(2), atol=1e-14)

    def test_identity_y_gives_singular_values(self, rng):
        x = rng.standard_normal((5, 4))
        f = gsvd(x, np.eye(4))
        check_factors(f, x, np.eye(4))
        assert_allclose(f.generalized_singular_values(), np.linalg.svd(x, compute_uv=False), rtol=1e-10)

    def test_pencil_small(self, rng):
        x = rng.standard_normal((4, 3))
        y = rng.standard_normal((5, 3))
        f = gsvd(x, y)
        check_factors(f, x, y)
        assert_allclose(np.sort(f.generalized_singular_values() ** 2), pencil_eigenvalues(x, y), rtol=1e-8)

    @settings(max_examples=50, deadline=None)
    @given(
        n=st.integers(1, 6),
        extra=st.tuples(st.integers(0, 2), st.integers(0, 2)),
        cplx=st.booleans(),
        seed=st.integers(0, 2**32 - 1),
    )
    def test_pencil_property(self, n, extra, cplx, seed):
        g = np.random.default_rng(seed)
        m1, m3 = min(n + extra[0], 8), min(n + extra[1], 8)
        if cplx:
            x, y = complex_matrix(g, m1, n), complex_matrix(g, m3, n)
        else:
            x, y = g.standard_normal((m1, n)), g.standard_normal((m3, n))
        f = gsvd(x, y)
        check_factors(f, x, y)
        got = np.sort(f.generalized_singular_values() ** 2)
        assert_allclose(got, pencil_eigenvalues(x, y), rtol=1e-6)

    def test_complex_pair(self, rng):
        x, y = complex_matrix(rng, 6, 4), complex_matrix(rng, 3, 4)
        check_factors(gsvd(x, y), x, y)

    def test_wide_pair_has_unit_block(self, rng):
        # [X; Y] is 4 x 5: X and Y own complementary directions, so every alpha is 0 or 1
        x = rng.standard_normal((3, 5))
        y = rng.standard_normal((1, 5))
        f = gsvd(x, y)
        check_factors(f, x, y)
        assert f.k == 4 and f.c == 3 and f.d == 0

    def test_null_direction_of_y(self, rng):
        x = rng.standard_normal((4, 3))
        y = np.hstack([np.eye(2), np.zeros((2, 1))])
        f = gsvd(x, y)
        check_factors(f, x, y)
        assert f.c == 1 and f.d == 2
        assert f.betas[0] == 0 and f.generalized_singular_values()[0] == np.inf

    def test_null_direction_of_x(self, rng):
        x = np.hstack([np.zeros((4, 1)), rng.standard_normal((4, 2))])
        y = rng.standard_normal((5, 3))
        f = gsvd(x, y)
        check_factors(f, x, y)
        assert f.alphas[-1] <= 1e-14 and f.d == 2

    def test_rank_deficient_stack(self, rng):
        b = rng.standard_normal((2, 5))
        x = rng.standard_normal((4, 2)) @ b
        y = rng.standard_normal((3, 2)) @ b
        f = gsvd(x, y)
        check_factors(f, x, y)
        assert f.k == 2

    def test_zero_pair(self):
        f = gsvd(np.zeros((3, 3)), np.zeros((2, 3)))
        assert f.k == 0
        assert_allclose(gsvd_reconstruct(f)[0], 0)

    def test_scaling(self, rng):
        x = rng.standard_normal((5, 4))
        y = rng.standard_normal((6, 4))
        base = gsvd(x, y).generalized_singular_values()
        assert_allclose(gsvd(3.5 * x, y).generalized_singular_values(), 3.5 * base, rtol=1e-10)

    def test_cond_z(self, rng):
        x = rng.standard_normal((5, 4))
        y = rng.standard_normal((6, 4))
        f = gsvd(x, y)
        s = np.linalg.svd(f.Z, compute_uv=False)
        assert_allclose(f.cond_Z, s.max() / s.min(), rtol=1e-10)

    def test_errors(self, rng):
        with pytest.raises(DimensionMismatchError):
            gsvd(rng.standard_normal((3, 3)), rng.standard_normal((3, 2)))
        with pytest.raises(NonFiniteError):
            gsvd(np.full((2, 2), np.inf), np.eye(2))


class TestCs:
    def test_unit_block(self):
        cs = cs_decomposition(np.eye(3), np.zeros((2, 3)))
        assert_allclose(cs.alphas, 1)
        assert_allclose(cs.betas, 0)
        assert_allclose(cs.U, np.eye(3), atol=1e-14)
        assert_allclose(cs.W, np.eye(3), atol=1e-14)
        assert cs.c == 3 and cs.k == 3

    def test_balanced(self):
        h = np.sqrt(0.5) * np.eye(2)
        cs = cs_decomposition(h, h)
        assert_allclose(cs.alphas, np.sqrt(0.5), atol=1e-14)
        assert_allclose(cs.betas, np.sqrt(0.5), atol=1e-14)

    @pytest.mark.parametrize("split", [(3, 2), (2, 3), (1, 4), (4, 1)])
    def test_random_split(self, rng, split):
        q = np.linalg.qr(rng.standard_normal((5, 3)))[0]
        e11, e21 = q[: split[0]], q[split[0]:]
        cs = cs_decomposition(e11, e21)
        wh = cs.W.conj().T
        assert np.linalg.norm(e11 - cs.U @ sigma_x(cs.alphas, split[0]) @ wh) <= 1e-10
        assert np.linalg.norm(e21 - cs.V @ sigma_y(cs.betas, split[1]) @ wh) <= 1e-10
        assert_allclose(cs.alphas**2 + cs.betas**2, 1, atol=1e-10)
        for u in (cs.U, cs.V, cs.W):
            assert unitary_residual(u) <= 1e-10

    def test_not_orthonormal(self, rng):
        with pytest.raises(NotOrthonormalError):
            cs_decomposition(rng.standard_normal((3, 2)), rng.standard_normal((2, 2)))


class TestRandomized:
    def test_exact_low_rank(self, rng):
        x = rng.standard_normal((10, 2)) @ rng.standard_normal((2, 8))
        y = rng.standard_normal((9, 3)) @ rng.standard_normal((3, 8))
        f = randomized_gsvd(x, y, SketchConfig(2, 3, 2, 2))
        xr, yr = gsvd_reconstruct(f)
        assert np.linalg.norm(x - xr) <= 1e-8 * np.linalg.norm(x)
        assert np.linalg.norm(y - yr) <= 1e-8 * np.linalg.norm(y)
        assert f.U.shape == (10, 4) and f.V.shape == (9, 5)
        assert unitary_residual(f.U) <= 1e-10

    def test_seeded(self, rng):
        x = rng.standard_normal((7, 6))
        y = rng.standard_normal((8, 6))
        cfg = SketchConfig(2, 2, 2, 2, q=2, seed=99)
        a, b = randomized_gsvd(x, y, cfg), randomized_gsvd(x, y, cfg)
        for name in ("U", "V", "Z", "C", "S", "alphas"):
            assert_array_equal(getattr(a, name), getattr(b, name))

    def test_full_width_matches_deterministic(self, rng):
        x = rng.standard_normal((6, 5))
        y = rng.standard_normal((7, 5))
        f = randomized_gsvd(x, y, SketchConfig(3, 3, 2, 2))
        xr, yr = gsvd_reconstruct(f)
        dx, dy = gsvd_reconstruct(gsvd(x, y))
        assert np.linalg.norm(xr - dx) <= 1e-8 * np.linalg.norm(x)
        assert np.linalg.norm(yr - dy) <= 1e-8 * np.linalg.norm(y)

    def test_sketch_too_wide(self, rng):
        with pytest.raises(SketchSizeError):
            randomized_gsvd(rng.standard_normal((4, 6)), rng.standard_normal((8, 6)), SketchConfig(3, 1, 2, 2))

    def test_expected_error_within_bound(self):
        g = np.random.default_rng(5)
        u = np.linalg.qr(g.standard_normal((6, 6)))[0]
        v = np.linalg.qr(g.standard_normal((4, 4)))[0]
        x = u[:, :4] @ np.diag(0.5 ** np.arange(4)) @ v.T
        y = g.standard_normal((5, 4))
        cfg = SketchConfig(1, 1, 2, 2)
        bx, by = theorem1_bound(x, y, cfg)
        ex, ey = [], []
        for s in range(20):
            f = randomized_gsvd(x, y, SketchConfig(1, 1, 2, 2, seed=s))
            xr, yr = gsvd_reconstruct(f)
            ex.append(np.linalg.norm(x - xr))
            ey.append(np.linalg.norm(y - yr))
        assert np.mean(ex) <= 3 * bx and np.mean(ey) <= 3 * by
        # projection onto the sketch range is what the bound controls
        m = x @ g.standard_normal((4, 3))
        assert matrix_projection_error(x, m) <= np.linalg.norm(x)


class TestPartition:
    def setup_method(self):
        g = np.random.default_rng(1)
        self.f = gsvd(g.standard_normal((5, 4)), g.standard_normal((6, 4)))

    def test_shapes(self):
        p = partition_factors(self.f, 2, 1)
        k = self.f.k
        assert p.Z1.shape == (2, 4) and p.Z2.shape == (k - 2, 4) and p.Z3.shape == (4 - k, 4)
        assert p.Zhat1.shape == (k - 1, 4) and p.Zhat2.shape == (1, 4)
        assert_array_equal(np.vstack([p.Z1, p.Z2, p.Z3]), self.f.Z)
        assert_array_equal(np.vstack([p.Zhat1, p.Zhat2, p.Z3]), self.f.Z)

    def test_boundaries(self):
        assert partition_factors(self.f, self.f.k, 1).Z2.shape[0] == 0
        assert partition_factors(self.f, 0, 1).Z1.shape[0] == 0

    def test_out_of_range(self):
        with pytest.raises(RankOutOfRangeError):
            partition_factors(self.f, self.f.k + 1, 1)


def test_unit_sine_block_is_canonical():
    cs = cs_decomposition(np.zeros((2, 3)), np.eye(3))
    assert_allclose(cs.betas, 1)
    assert_allclose(cs.V, np.eye(3), atol=1e-14)
    assert_allclose(cs.W, np.eye(3), atol=1e-14)
