import math

import pytest

from uavlift.rng import SplitMix64

# Reference outputs of the published constants for seed 1234567; any
# implementation of the documented update must reproduce these exactly.
REFERENCE_STREAM = [
    6457827717110365317,
    3203168211198807973,
    9817491932198370423,
    4593380528125082431,
    16408922859458223821,
]


def test_reference_stream():
    gen = SplitMix64(1234567)
    assert [gen.next_u64() for _ in range(5)] == REFERENCE_STREAM


def test_same_seed_same_stream():
    a = SplitMix64(42)
    b = SplitMix64(42)
    assert [a.next_u64() for _ in range(100)] == [b.next_u64() for _ in range(100)]


def test_different_seeds_differ():
    assert SplitMix64(1).next_u64() != SplitMix64(2).next_u64()


def test_uniform_range():
    gen = SplitMix64(7)
    draws = [gen.uniform(-3.0, 5.0) for _ in range(10_000)]
    assert all(-3.0 <= d < 5.0 for d in draws)
    # crude coverage check: both halves of the interval get hits
    assert any(d < 1.0 for d in draws) and any(d > 1.0 for d in draws)


def test_uniform_degenerate_interval_is_exact():
    gen = SplitMix64(3)
    assert all(gen.uniform(5.0, 5.0) == 5.0 for _ in range(50))


def test_normal_moments():
    gen = SplitMix64(11)
    draws = [gen.normal(2.0, 3.0) for _ in range(20_000)]
    mean = sum(draws) / len(draws)
    var = sum((d - mean) ** 2 for d in draws) / len(draws)
    assert mean == pytest.approx(2.0, abs=0.1)
    assert math.sqrt(var) == pytest.approx(3.0, rel=0.05)


def test_negative_seed_rejected():
    with pytest.raises(ValueError):
        SplitMix64(-1)
