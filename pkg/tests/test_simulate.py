import numpy as np
import pytest

from hsghs.simulate import (PrecisionStructure, coef_matrix, design_toeplitz,
                            gen_response, precision_ar1, precision_cliques,
                            precision_star, simulate_setting)


def test_ar1_small():
    np.testing.assert_array_equal(
        precision_ar1(3), [[1, 0.45, 0], [0.45, 1, 0.45], [0, 0.45, 1]])
    np.testing.assert_array_equal(precision_ar1(1), [[1.0]])
    with pytest.raises(ValueError):
        precision_ar1(0)


def test_ar1_q25_pd():
    assert np.linalg.eigvalsh(precision_ar1(25))[0] > 0


def test_cliques_blocks():
    om = precision_cliques(6, 3)
    block = np.full((3, 3), 0.75) + 0.25 * np.eye(3)
    np.testing.assert_array_equal(om[:3, :3], block)
    np.testing.assert_array_equal(om[3:, 3:], block)
    assert np.all(om[:3, 3:] == 0)


def test_cliques_min_eigenvalue():
    assert np.linalg.eigvalsh(precision_cliques(48, 3))[0] == pytest.approx(0.25)


def test_cliques_indivisible():
    with pytest.raises(ValueError):
        precision_cliques(25, 3, strict=True)
    om = precision_cliques(25, 3)
    # eight cliques, last row isolated
    assert np.count_nonzero(om[:24, :24] - np.eye(24)) == 8 * 6
    np.testing.assert_array_equal(om[24], np.eye(25)[24])


def test_star():
    om, is_pd = precision_star(3)
    np.testing.assert_array_equal(om, [[1, 0.25, 0.25], [0.25, 1, 0], [0.25, 0, 1]])
    assert is_pd
    assert precision_star(1)[0].tolist() == [[1.0]]
    om, is_pd = precision_star(25)
    assert not is_pd
    assert np.linalg.eigvalsh(om)[0] == pytest.approx(1 - 0.25 * np.sqrt(24))


@pytest.mark.parametrize("kind", ["ar1", "cliques"])
@pytest.mark.parametrize("q", [25, 50])
def test_study_dimensions_pd(kind, q):
    np.linalg.cholesky(PrecisionStructure(kind, q).build())


def test_coef_matrix_counts(rng):
    B, mask = coef_matrix(200, 25, 0.05, rng)
    assert np.count_nonzero(B) == 250 and mask.sum() == 250
    nz = np.abs(B[mask])
    assert np.all((nz >= 0.5) & (nz <= 2))
    assert (B[mask] < 0).any() and (B[mask] > 0).any()


def test_coef_matrix_constant(rng):
    B, mask = coef_matrix(4, 3, 1.0, rng, dist="const5")
    assert np.all(B == 5) and mask.all()
    with pytest.raises(ValueError):
        coef_matrix(4, 3, 0.0, rng)


def test_toeplitz(rng):
    X1 = design_toeplitz(10_000, 1, rng)
    assert abs(X1.var() - 1) < 0.05
    X = design_toeplitz(10_000, 3, rng)
    assert abs(np.cov(X.T)[0, 2] - 0.49) < 0.05
    C = np.corrcoef(design_toeplitz(10_000, 3, rng, rho=0.0).T)
    assert np.all(np.abs(C[np.triu_indices(3, 1)]) < 0.05)


def test_gen_response_identity(rng):
    X = rng.standard_normal((10_000, 2))
    Y = gen_response(X, np.zeros((2, 3)), np.eye(3), rng)
    assert np.all(np.abs(Y.var(axis=0) - 1) < 0.05)


def test_gen_response_scaled(rng):
    X = rng.standard_normal((10_000, 2))
    B = np.array([[1.0, 0.0], [0.0, -1.0]])
    Y = gen_response(X, B, 2 * np.eye(2), rng)
    assert np.all(np.abs((Y - X @ B).var(axis=0) - 0.5) < 0.03)


def test_gen_response_precision(rng):
    om = precision_ar1(3)
    E = gen_response(np.zeros((100_000, 1)), np.zeros((1, 3)), om, rng)
    np.testing.assert_allclose(np.linalg.inv(np.cov(E.T)), om, atol=0.05)


def test_gen_response_trace(rng):
    om = precision_ar1(4)
    n = 10_000
    Y = gen_response(np.zeros((n, 1)), np.zeros((1, 4)), om, rng)
    assert abs(np.trace(Y.T @ Y @ om) / n / 4 - 1) < 0.05


def test_simulate_deterministic():
    a = simulate_setting(20, 10, 4, seed=3)
    b = simulate_setting(20, 10, 4, seed=3)
    for f in ("X", "Y", "B0", "X_test", "Y_test"):
        np.testing.assert_array_equal(getattr(a, f), getattr(b, f))
    assert a.X.shape == (20, 10) and a.Y_test.shape == (20, 4)


def test_simulate_notes_and_star():
    assert simulate_setting(10, 5, 25, structure="cliques", seed=0).notes
    with pytest.raises(ValueError):
        simulate_setting(10, 5, 25, structure="star", seed=0)
    sim = simulate_setting(10, 5, 3, structure="star", coef="const5", seed=0)
    assert set(np.unique(sim.B0)) <= {0.0, 5.0}
