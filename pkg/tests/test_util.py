import numpy as np
import pytest

from confweight import DEFAULT_SEED, default_seed, fmt17, pairwise_sum
from confweight.util import as_complex_array


def test_default_seed_value():
    assert DEFAULT_SEED == 0x5EED
    assert default_seed() == 0x5EED


def test_default_seed_env_override(monkeypatch):
    monkeypatch.setenv("CW_SEED", "12345")
    assert default_seed() == 12345
    monkeypatch.setenv("CW_SEED", "0x10")
    assert default_seed() == 16


def test_pairwise_sum_matches_exact():
    vals = np.arange(1, 1001, dtype=float)
    assert pairwise_sum(vals) == pytest.approx(500500.0, rel=0, abs=0)


def test_pairwise_sum_deterministic_and_shaped():
    rng = np.random.default_rng(7)
    vals = rng.uniform(size=(37, 53))
    assert pairwise_sum(vals) == pairwise_sum(vals.copy())
    # pairwise tree keeps roundoff well under naive-sum growth
    assert abs(pairwise_sum(vals) - float(np.sum(vals, dtype=np.longdouble))) < 1e-9


def test_pairwise_sum_empty_and_single():
    assert pairwise_sum(np.array([])) == 0.0
    assert pairwise_sum(np.array([3.5])) == 3.5


def test_fmt17_round_trip_values():
    for x in (0.1, -3.0, 1.0 / 3.0, 1e-300, 123456.789, np.pi):
        assert float(fmt17(x)) == x


def test_as_complex_array_scalar_flag():
    arr, scalar = as_complex_array(1 + 2j)
    assert scalar and arr.shape == ()
    arr, scalar = as_complex_array(np.zeros(4, dtype=complex))
    assert not scalar and arr.shape == (4,)


def test_as_complex_array_rejects_nonfinite():
    with pytest.raises(ValueError):
        as_complex_array(complex("nan"))


def test_default_seed_rejects_garbage(monkeypatch):
    monkeypatch.setenv("CW_SEED", "banana")
    with pytest.raises(ValueError, match="CW_SEED"):
        default_seed()
