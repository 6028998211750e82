import math

import numpy as np
import pytest

from setint.errors import InvalidArgumentError
from setint.spaces import (
    SpaceDescriptor,
    c1_constant,
    c1_from,
    cdist_metric,
    hilbert_c1,
    l1,
    l2,
    linf,
    norm,
    norms,
    space_from_json,
    space_to_json,
)


def test_norm_values():
    x = np.array([3.0, -4.0])
    assert norm(l1(2), x) == 7.0
    assert norm(l2(2), x) == 5.0
    assert norm(linf(2), x) == 4.0


def test_norms_vectorized_matches_scalar():
    rng = np.random.default_rng(0)
    m = rng.standard_normal((50, 3))
    for space in (l1(3), l2(3), linf(3)):
        vec = norms(space, m)
        assert vec.shape == (50,)
        for row, v in zip(m, vec):
            assert norm(space, row) == pytest.approx(v, abs=1e-15)


def test_cdist_metric_names():
    assert cdist_metric(l1(2)) == "cityblock"
    assert cdist_metric(l2(2)) == "euclidean"
    assert cdist_metric(linf(2)) == "chebyshev"


def test_descriptor_validation():
    with pytest.raises(InvalidArgumentError):
        SpaceDescriptor(0, "l2")
    with pytest.raises(InvalidArgumentError):
        SpaceDescriptor(2, "l3")
    with pytest.raises(InvalidArgumentError):
        SpaceDescriptor(2, "l2", infratype=(2.5, 1.0))
    with pytest.raises(InvalidArgumentError):
        SpaceDescriptor(2, "l2", infratype=(2.0, 0.0))


def test_c1_constant_hilbert():
    # 2 * 1 / (2**(1/2) - 1) for exponent 2, constant 1
    want = 2.0 / (math.sqrt(2.0) - 1.0)
    assert hilbert_c1() == pytest.approx(want, rel=1e-15)
    assert hilbert_c1() == pytest.approx(4.82842712474619, rel=1e-12)
    assert c1_from(2.0, 1.0) == hilbert_c1()
    assert c1_constant(l2(5)) == hilbert_c1()


def test_c1_monotone_in_c():
    assert c1_from(2.0, 2.0) == pytest.approx(2.0 * hilbert_c1(), rel=1e-15)


def test_space_json_roundtrip():
    for space in (l1(3), l2(4), linf(2), SpaceDescriptor(6, "l1", infratype=(1.5, 2.0))):
        obj = space_to_json(space)
        back = space_from_json(obj)
        assert back == space


def test_space_json_shape():
    obj = space_to_json(l2(3))
    assert obj["dim"] == 3
    assert obj["norm"] == "l2"
    assert obj["infratype"] == [2.0, 1.0]
    assert space_to_json(l1(2))["infratype"] is None
