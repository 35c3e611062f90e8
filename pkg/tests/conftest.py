import pytest

from btnkit.data import Dataset, random_dataset

NS = (1, 2, 3, 4, 8, 17, 64)
DS = (1, 5, 16, 32)
SEEDS = range(5)

# (n, D) cells with n <= 2**D
MATRIX = [(n, D) for D in DS for n in NS if n <= 2**D]

FOUR_VECTORS = Dataset(((0, 0, 0), (1, 0, 0), (1, 0, 1), (1, 1, 1)))


def matrix_datasets():
    for n, D in MATRIX:
        for seed in SEEDS:
            yield pytest.param(n, D, seed, id=f"n{n}-D{D}-s{seed}")


@pytest.fixture
def four_vectors():
    return FOUR_VECTORS


@pytest.fixture(scope="session")
def big():
    return random_dataset(64, 32, 0)
