import numpy as np
import pytest

from trirep.algebra import Algebra, Module, direct_sum, field_algebra, regular_module, truncated_polynomial, zero_module


@pytest.fixture(scope="session")
def f2():
    return field_algebra(2, "F2")


@pytest.fixture(scope="session")
def d2():
    return truncated_polynomial(2, 2, "D2")


@pytest.fixture(scope="session")
def ut2():
    # basis e11, e12, e22 of upper triangular 2x2 matrices over F2
    mul = np.zeros((3, 3, 3), dtype=np.int64)
    mul[0, 0, 0] = mul[0, 1, 1] = mul[1, 2, 1] = mul[2, 2, 2] = 1
    return Algebra(2, mul, np.array([1, 0, 1]), "UT2")


@pytest.fixture(scope="session")
def d2_modules(d2):
    s = Module(d2, [[[1]], [[0]]], "S")
    reg = regular_module(d2)
    return {"0": zero_module(d2), "S": s, "D2": reg, "S+S": direct_sum(s, s, name="S+S")}
