import numpy as np
import pytest

from lotsize import GenParams, Instance, generate_instance


@pytest.fixture
def e1() -> Instance:
    """Three-period instance small enough to verify by hand."""
    return Instance(T=3, d=[2, 3, 1], p=[1, 1, 1], f=[5, 5, 5], h=[1, 1, 1], cap=[4, 4, 4])


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240817)


def random_small_instance(rng: np.random.Generator, T: int | None = None) -> Instance:
    """Tiny random instance with enough capacity slack to usually be feasible."""
    T = T or int(rng.integers(1, 7))
    d = rng.integers(0, 10, T)
    cap = rng.integers(0, 14, T) + d
    return Instance(
        T=T,
        d=d,
        p=rng.integers(0, 5, T),
        f=rng.integers(0, 30, T),
        h=rng.integers(0, 3, T),
        cap=cap,
        s0=int(rng.integers(0, 4)),
    )


def generated_instances(n: int, seed: int = 5, T: int = 8, c: int = 3, f: float = 50.0):
    params = GenParams(c_ratio=c, f_ratio=f, T=T, demand_range=(1, 20), seed=seed)
    return [generate_instance(params, i) for i in range(n)]
