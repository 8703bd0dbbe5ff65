import numpy as np
import pytest

from upbwit.states import ProductStateSet, builtin_family


def random_unit(rng, d, real=False):
    z = rng.standard_normal(d) if real else rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return z / np.linalg.norm(z)


def random_state_set(rng, dims, m, real=False):
    members = [tuple(random_unit(rng, d, real) for d in dims) for _ in range(m)]
    return ProductStateSet(dims, members, name="random")


def random_density(rng, N, rank=None):
    rank = N if rank is None else rank
    g = rng.standard_normal((N, rank)) + 1j * rng.standard_normal((N, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_hermitian(rng, N):
    a = rng.standard_normal((N, N)) + 1j * rng.standard_normal((N, N))
    return (a + a.conj().T) / 2


@pytest.fixture(scope="session")
def tiles():
    return builtin_family("tiles")


@pytest.fixture(scope="session")
def example_b2():
    return builtin_family("example_b2")


@pytest.fixture(scope="session")
def tiles_eps(tiles):
    from upbwit.construct import mu_of_p
    from upbwit.separability import epsilon_seesaw

    return epsilon_seesaw(mu_of_p(tiles, np.full(5, 0.2)), tiles.dims, restarts=256, seed=0)


@pytest.fixture(scope="session")
def b2_eps(example_b2):
    from upbwit.construct import mu_of_p
    from upbwit.separability import epsilon_seesaw

    return epsilon_seesaw(mu_of_p(example_b2, [3 / 8, 3 / 8, 2 / 8]), example_b2.dims, restarts=256, seed=0)
