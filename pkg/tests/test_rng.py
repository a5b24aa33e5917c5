import numpy as np
import pytest

from perpetuity import RngStream
from perpetuity.rng import BLOCK

# PCG64 via SeedSequence(1); frozen from this implementation
GOLDEN_SEED_1 = [0.5118216247002567, 0.9504636963259353, 0.14415961271963373]


def test_golden_values():
    s = RngStream(1)
    assert [s.uniform() for _ in range(3)] == GOLDEN_SEED_1


def test_same_seed_same_stream():
    a, b = RngStream(42), RngStream(42)
    assert np.array_equal(a.uniforms(1000), b.uniforms(1000))
    assert not np.array_equal(RngStream(43).uniforms(10), RngStream(42).uniforms(10))


def test_scalar_and_block_reads_agree_across_refills():
    a, b = RngStream(5), RngStream(5)
    scalars = [a.uniform() for _ in range(BLOCK + 17)]
    block = np.concatenate((b.uniforms(3), b.uniforms(BLOCK), b.uniforms(14)))
    assert np.array_equal(scalars, block)
    assert a.consumed == b.consumed == BLOCK + 17


def test_values_in_unit_interval():
    u = RngStream(9).uniforms(10**5)
    assert u.min() >= 0.0 and u.max() < 1.0


@pytest.mark.parametrize("seed", [-1, 2**64, 1.5, "3"])
def test_bad_seed(seed):
    with pytest.raises(ValueError):
        RngStream(seed)


def test_worker_streams():
    w0, w1 = RngStream.for_worker(1, 0), RngStream.for_worker(1, 1)
    a = w0.uniforms(100)
    assert not np.array_equal(a, w1.uniforms(100))
    assert not np.array_equal(a, RngStream(1).uniforms(100))
    assert np.array_equal(a, RngStream.for_worker(1, 0).uniforms(100))
    # documented mixing: the spawn key of SeedSequence
    child = np.random.SeedSequence(1).spawn(2)[1]
    ref = np.random.Generator(np.random.PCG64(child)).random(5)
    assert np.array_equal(RngStream.for_worker(1, 1).uniforms(5), ref)
    with pytest.raises(ValueError):
        RngStream.for_worker(1, -1)
