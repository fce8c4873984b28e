import numpy as np
import pytest

from meanlab import maps, spd
from meanlab.measures import (
    FAMILIES,
    MeasureFamily,
    append_atom,
    cell_diameters,
    condition_remove,
    dirac,
    discretize,
    family,
    new_measure,
    pushforward_congruence,
    pushforward_inv,
    pushforward_map,
    pushforward_pow,
    pushforward_scale,
    random_measure,
)


def _close(mu, nu, tol):
    assert mu.size == nu.size
    np.testing.assert_allclose(mu.weights, nu.weights, rtol=1e-14)
    for a, b in zip(mu.atoms, nu.atoms):
        assert spd.norm(a - b) <= tol * max(1.0, spd.norm(a))


def test_new_measure_validation():
    mu = dirac(np.eye(2))
    assert mu.size == 1 and mu.dim == 2 and mu.weights[0] == 1
    mu = new_measure([np.eye(2), 2 * np.eye(2)], [0.5, 0.5 + 1e-10])
    assert abs(mu.weights.sum() - 1) <= 1e-12
    with pytest.raises(ValueError):
        new_measure([np.eye(2), np.eye(2)], [0.5, 0.6])
    with pytest.raises(ValueError):
        new_measure([np.eye(2), np.eye(2)], [1.0, 0.0])
    with pytest.raises(ValueError):
        new_measure([np.eye(2), np.eye(3)])
    with pytest.raises(ValueError):
        new_measure([])
    with pytest.raises(spd.NotPositiveDefiniteError):
        new_measure([np.diag([1.0, -1.0])])


def test_measure_is_immutable():
    mu = new_measure([np.eye(2), 2 * np.eye(2)])
    with pytest.raises(ValueError):
        mu.weights[0] = 0.9
    with pytest.raises(ValueError):
        mu.atoms[0, 0, 0] = 5


def test_pushforward_pow():
    mu = new_measure([np.diag([2.0]), np.diag([3.0])])
    assert pushforward_pow(mu, 1) is mu
    nu = pushforward_pow(mu, 2)
    np.testing.assert_allclose(nu.atoms[:, 0, 0], [4, 9])
    with pytest.raises(ValueError):
        pushforward_pow(mu, 0.5)


def test_pushforward_pow_round_trip(rng):
    for _ in range(50):
        mu = random_measure(rng, int(rng.integers(1, 5)), int(rng.integers(1, 5)), 100)
        p = rng.uniform(1, 4)
        nu = pushforward_pow(mu, p)
        back = new_measure([spd.mpow(a, 1 / p) for a in nu.atoms], nu.weights)
        _close(mu, back, 1e-9)


def test_pushforward_inv(rng):
    nu = pushforward_inv(dirac(2 * np.eye(2)))
    np.testing.assert_allclose(nu.atoms[0], 0.5 * np.eye(2))
    mu = random_measure(rng, 3, 4, 100)
    _close(mu, pushforward_inv(pushforward_inv(mu)), 1e-10)
    np.testing.assert_array_equal(pushforward_inv(mu).weights, mu.weights)


def test_pow_and_inv_commute(rng):
    mu = random_measure(rng, 3, 4, 100)
    a = pushforward_pow(pushforward_inv(mu), 2.5)
    b = pushforward_inv(pushforward_pow(mu, 2.5))
    for x, y in zip(a.atoms, b.atoms):
        assert spd.norm(x - y) <= 1e-10 * spd.norm(x)


def test_pushforward_scale(rng):
    mu = dirac(np.eye(2))
    np.testing.assert_array_equal(pushforward_scale(mu, 1).atoms, mu.atoms)
    np.testing.assert_array_equal(pushforward_scale(mu, 2).atoms[0], 2 * np.eye(2))
    nu = random_measure(rng, 3, 3, 100)
    _close(nu, pushforward_scale(pushforward_scale(nu, 3.7), 1 / 3.7), 1e-12)
    with pytest.raises(ValueError):
        pushforward_scale(nu, 0)


def test_pushforward_congruence(rng):
    mu = dirac(np.eye(2))
    np.testing.assert_allclose(pushforward_congruence(mu, np.eye(2)).atoms, mu.atoms)
    np.testing.assert_allclose(pushforward_congruence(mu, np.diag([2.0, 1.0])).atoms[0], np.diag([4, 1]))
    nu = random_measure(rng, 3, 3, 100)
    C = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3)) + 2 * np.eye(3)
    _close(nu, pushforward_congruence(pushforward_congruence(nu, C), np.linalg.inv(C)), 1e-9)
    with pytest.raises(spd.SingularMatrixError):
        pushforward_congruence(nu, np.zeros((3, 3)))


def test_pushforward_map(rng, commuting_mu):
    _close(commuting_mu, pushforward_map(commuting_mu, maps.make_identity(2)), 0)
    scal = pushforward_map(commuting_mu, maps.make_trace_map(2))
    assert scal.dim == 1
    np.testing.assert_allclose(scal.atoms[:, 0, 0], [2.5, 12.5])
    phi = maps.random_kraus(4, 2, 3, rng)
    mu = random_measure(rng, 4, 3, 100)
    out = pushforward_map(mu, phi)
    assert out.dim == 2 and out.size == 3
    with pytest.raises(ValueError):
        pushforward_map(commuting_mu, phi)


def test_pushforward_map_keeps_coincident_images():
    mu = new_measure([np.diag([1.0, 3.0]), np.diag([3.0, 1.0])])
    nu = pushforward_map(mu, maps.make_trace_map(2))
    assert nu.size == 2
    np.testing.assert_allclose(nu.atoms[:, 0, 0], [2, 2])


def test_condition_remove():
    A, B, C = np.eye(2), 2 * np.eye(2), 3 * np.eye(2)
    mu = new_measure([A, B, C], [0.5, 0.3, 0.2])
    nu = condition_remove(mu, 2)
    np.testing.assert_allclose(nu.weights, [0.625, 0.375])
    assert abs(nu.weights.sum() - 1) <= 1e-12
    two = new_measure([A, B])
    assert condition_remove(two, 0).weights[0] == 1
    with pytest.raises(ValueError):
        condition_remove(dirac(A), 0)
    with pytest.raises(IndexError):
        condition_remove(mu, 3)


def test_append_then_remove_round_trip(rng):
    nu = random_measure(rng, 3, 4, 100)
    mu = append_atom(nu, spd.random_pd(3, 10, rng), 0.3)
    assert mu.size == 5 and abs(mu.weights.sum() - 1) <= 1e-12
    back = condition_remove(mu, -1)
    np.testing.assert_allclose(back.weights, nu.weights, rtol=1e-14)
    np.testing.assert_array_equal(back.atoms, nu.atoms)
    with pytest.raises(ValueError):
        append_atom(nu, np.eye(3), 1.0)


def test_pushforwards_preserve_weights(rng):
    mu = random_measure(rng, 3, 5, 100)
    C = np.eye(3) + 0.1 * rng.standard_normal((3, 3))
    for nu in (pushforward_pow(mu, 2), pushforward_inv(mu), pushforward_scale(mu, 3),
               pushforward_congruence(mu, C), pushforward_map(mu, maps.make_transpose(3))):
        assert nu.size == mu.size
        np.testing.assert_array_equal(nu.weights, mu.weights)


def test_random_measure_is_valid(rng):
    for _ in range(200):
        n, k = int(rng.integers(1, 7)), int(rng.integers(1, 9))
        mu = random_measure(rng, n, k, 1e3)
        assert mu.dim == n and mu.size == k
        assert abs(mu.weights.sum() - 1) <= 1e-12 and mu.weights.min() > 0


def test_discretize_exp_line():
    fam = family("exp-line")
    one = discretize(fam, 1)
    np.testing.assert_allclose(one.atoms[0], np.exp(0.5) * np.eye(2))
    assert one.weights[0] == 1
    two = discretize(fam, 2)
    np.testing.assert_allclose(two.atoms[0], np.exp(0.25) * np.eye(2))
    np.testing.assert_allclose(two.atoms[1], np.exp(0.75) * np.eye(2))
    np.testing.assert_allclose(two.weights, [0.5, 0.5])


def test_discretize_constant_family(rng):
    A = spd.random_pd(3, 10, rng)
    fam = MeasureFamily(curve=lambda s: A, density=lambda s: 1 + s, dim=3, name="const")
    for N in (1, 3, 10):
        mu = discretize(fam, N)
        assert abs(mu.weights.sum() - 1) <= 1e-12
        for a in mu.atoms:
            np.testing.assert_array_equal(a, spd.hermitize(A))
        assert np.all(cell_diameters(fam, N) <= 1e-12)


def test_discretize_errors():
    fam = MeasureFamily(curve=lambda s: -np.eye(2), density=lambda s: 1.0, dim=2)
    with pytest.raises(spd.NotPositiveDefiniteError):
        discretize(fam, 2)
    with pytest.raises(ValueError):
        discretize(family("exp-line"), 0)
    with pytest.raises(KeyError, match="exp-line"):
        family("nope")


@pytest.mark.parametrize("key", list(FAMILIES))
def test_refinement_dominance(key):
    fam = family(key)
    for N in (2, 4, 8):
        coarse = discretize(fam, N)
        fine_mids = (np.arange(2 * N) + 0.5) / (2 * N)
        eps = cell_diameters(fam, N).max()
        for j, s in enumerate(fine_mids):
            A = fam.curve(float(s))
            Aj = coarse.atoms[j // 2]
            assert spd.loewner_leq(np.exp(-eps) * Aj, A, 1e-12).holds
            assert spd.loewner_leq(A, np.exp(eps) * Aj, 1e-12).holds


@pytest.mark.parametrize("key", list(FAMILIES))
def test_family_diameters_shrink(key):
    fam = family(key)
    eps = [cell_diameters(fam, N).max() for N in (4, 16, 64)]
    assert eps[0] > eps[1] > eps[2] > 0
