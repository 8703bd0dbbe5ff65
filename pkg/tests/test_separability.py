import numpy as np
import pytest

from conftest import random_density
from upbwit.construct import build_witness, mu_of_p, rho_of_p
from upbwit.linalg import kron, partial_transpose, projector
from upbwit.separability import (
    SeparabilityError,
    epsilon_grid_oracle,
    epsilon_seesaw,
    is_ppt,
    random_product_factors,
    random_separable_density,
    rng_streams,
    seesaw_single,
    sphere_grid,
    validate_witness,
)

BELL = np.array([1, 0, 0, 1]) / np.sqrt(2)
B2_P = np.array([3, 3, 2]) / 8


def test_seesaw_flat_objective():
    est = epsilon_seesaw(np.eye(4) / 4, (2, 2), restarts=3)
    assert est.value == pytest.approx(0.25, abs=1e-14)


def test_seesaw_example2(example_b2, b2_eps):
    assert b2_eps.value <= 1 / 16 + 1e-9
    mu0 = mu_of_p(example_b2, B2_P)
    v = b2_eps.argmin_vector()
    assert np.vdot(v, mu0 @ v).real == pytest.approx(b2_eps.value, abs=1e-10)
    # the product state named for this set reaches 1/16 but is not the minimizer
    a1, b2 = example_b2.members[0].factors[0], example_b2.members[1].factors[1]
    named = kron(a1, b2)
    assert np.vdot(named, mu0 @ named).real == pytest.approx(1 / 16, abs=1e-12)


def test_seesaw_tiles_bounds(tiles_eps):
    assert 0 < tiles_eps.value < 1 / 9
    assert tiles_eps.converged


def test_seesaw_monotone_history(tiles):
    mu0 = mu_of_p(tiles, np.full(5, 0.2))
    for rng in rng_streams(7, 20):
        run = seesaw_single(mu0, (3, 3), random_product_factors(rng, (3, 3)))
        h = np.array(run.history)
        assert np.all(np.diff(h) <= 1e-12)


def test_seesaw_multipartite():
    rng = np.random.default_rng(0)
    dims = (2, 2, 2)
    rho = random_density(rng, 8, rank=2)
    est = epsilon_seesaw(rho, dims, restarts=32, seed=1)
    v = est.argmin_vector()
    assert np.vdot(v, rho @ v).real == pytest.approx(est.value, abs=1e-10)
    # random product states never beat it
    vals = []
    for r in rng_streams(2, 2000):
        w = kron(*random_product_factors(r, dims))
        vals.append(np.vdot(w, rho @ w).real)
    assert est.value <= min(vals) + 1e-12


def test_seesaw_deterministic(tiles):
    mu0 = mu_of_p(tiles, np.full(5, 0.2))
    a = epsilon_seesaw(mu0, (3, 3), restarts=16, seed=5)
    b = epsilon_seesaw(mu0, (3, 3), restarts=16, seed=5)
    assert a.value == b.value


def test_seesaw_errors():
    with pytest.raises(SeparabilityError):
        epsilon_seesaw(np.eye(4) / 4, (2, 2), restarts=0)
    with pytest.raises(SeparabilityError):
        epsilon_seesaw(np.eye(4) / 4, (2, 3))


def test_sphere_grid_unit():
    for d in (2, 3):
        g = sphere_grid(d, 7)
        assert len(g) == 7 ** (2 * (d - 1))
        assert np.allclose(np.linalg.norm(g, axis=1), 1)


def test_grid_oracle_flat():
    for res in (3, 10):
        assert epsilon_grid_oracle(np.eye(4) / 4, (2, 2), res) == pytest.approx(0.25, abs=1e-14)


def test_grid_oracle_example2(example_b2, b2_eps):
    mu0 = mu_of_p(example_b2, B2_P)
    oracle = epsilon_grid_oracle(mu0, (2, 2), 40)
    assert b2_eps.value <= oracle + 1e-9
    assert oracle - b2_eps.value <= 2e-3


def test_grid_oracle_tiles(tiles, tiles_eps):
    mu0 = mu_of_p(tiles, np.full(5, 0.2))
    oracle = epsilon_grid_oracle(mu0, (3, 3), 6)
    assert tiles_eps.value <= oracle + 1e-9
    assert oracle - tiles_eps.value <= 5e-3


def test_grid_oracle_limits():
    with pytest.raises(SeparabilityError):
        epsilon_grid_oracle(np.eye(16) / 16, (4, 4), 3)
    with pytest.raises(SeparabilityError):
        epsilon_grid_oracle(np.eye(9) / 9, (3, 3), 1000)


def test_is_ppt_bell():
    report = is_ppt(projector(BELL), (2, 2))
    assert not report.is_ppt
    assert report.min_eigenvalue == pytest.approx(-0.5, abs=1e-12)


def test_is_ppt_tiles(tiles):
    rho0 = rho_of_p(tiles, np.full(5, 0.2), b="p_max").rho
    report = is_ppt(rho0, (3, 3))
    assert report.is_ppt and report.min_eigenvalue >= -1e-10


def test_peres_and_pair_symmetry():
    rng = np.random.default_rng(3)
    for dims in [(2, 2), (2, 3), (2, 2, 2)]:
        for _ in range(100):
            sigma = random_separable_density(rng, dims)
            report = is_ppt(sigma, dims)
            assert report.is_ppt
    for _ in range(100):
        rho = random_density(rng, 8)
        report = is_ppt(rho, (2, 2, 2))
        for subset, (_, x) in report.verdicts.items():
            comp = tuple(k for k in range(3) if k not in subset)
            assert x == pytest.approx(report.verdicts[comp][1], abs=1e-10)


def test_random_separable_density_valid():
    rng = np.random.default_rng(4)
    for _ in range(100):
        sigma = random_separable_density(rng, (3, 3))
        assert np.trace(sigma).real == pytest.approx(1)
        assert np.linalg.eigvalsh(sigma)[0] >= -1e-12


def test_validate_minus_identity():
    val = validate_witness(-np.eye(4), (2, 2), samples=500, restarts=4)
    assert val.min_sampled == pytest.approx(-1)
    assert val.min_attack == pytest.approx(-1)
    assert val.violating_sigma is not None


def test_validate_tiles(tiles, tiles_eps):
    wit = build_witness(tiles, np.full(5, 0.2), tiles_eps.value)
    val = validate_witness(wit, (3, 3), samples=20_000)
    assert val.holds(1e-9) and val.violating_sigma is None


def test_validate_example2_violation(example_b2, b2_eps):
    wit = build_witness(example_b2, B2_P, b2_eps.value, force=True)
    val = validate_witness(wit, (2, 2), samples=2000, restarts=8)
    sigma = val.violating_sigma
    assert sigma is not None
    assert np.trace(wit.matrix @ sigma).real < -1e-9
    assert is_ppt(sigma, (2, 2)).is_ppt
