import numpy as np
import pytest

from genmz import hw
from genmz.errors import DomainError


@pytest.mark.parametrize("d", range(2, 8))
def test_commutation_and_order(d):
    X, Z = hw.shift(d), hw.clock(d)
    w = hw.omega(d)
    assert np.allclose(X @ Z, w * Z @ X, atol=1e-14)
    assert np.allclose(np.linalg.matrix_power(X, d), np.eye(d))
    assert np.allclose(np.linalg.matrix_power(Z, d), np.eye(d), atol=1e-13)


def test_shift_acts_as_cyclic_lowering():
    X = hw.shift(4)
    e = np.eye(4)
    # X|k> = |k-1 mod d>
    assert np.array_equal(X @ e[2], e[1])
    assert np.array_equal(X @ e[0], e[3])


def test_exact_roots_of_unity():
    assert hw.omega(2) == -1
    assert hw.omega(4) == 1j
    assert hw.omega(3) == pytest.approx(complex(-0.5, np.sqrt(3) / 2), abs=1e-15)


def test_y_is_power_of_xz():
    for d in (3, 4, 5):
        XZ = hw.shift(d) @ hw.clock(d)
        for k in range(d + 1):
            assert np.allclose(hw.weyl_operator("Y", d, k), np.linalg.matrix_power(XZ, k))


def test_kind_accepts_strings_and_enum():
    assert np.array_equal(hw.weyl_operator(hw.Kind.X, 3), hw.weyl_operator("X", 3))


def test_domain():
    with pytest.raises(DomainError):
        hw.shift(1)
    with pytest.raises(DomainError):
        hw.weyl_operator("X", 3, -1)
