import math

import numpy as np
import pytest

from twodigit import attract, cli, intpoly, regularity
from twodigit.errors import ValidationError
from twodigit.intpoly import parse_poly

CUBICS = [row[0] for row in cli.CUBIC_REFERENCE]


@pytest.mark.parametrize("poly", ["2,1", "-2,0,1", "2,0,0,1", "2,0,0,0,1"])
def test_parallelepiped_is_half(poly):
    # indicator of a parallelepiped: L2 exponent 1/2
    assert regularity.holder_exponent(poly).alpha == pytest.approx(0.5, abs=1e-9)


@pytest.mark.parametrize("poly", CUBICS + ["2,2,1", "2,1,1", "2,0,1,0,1", "2,1,1,1,1"])
def test_two_routes_agree(poly):
    rep = regularity.holder_exponent(poly)
    assert rep.rho2 == pytest.approx(regularity.rho2_from_contact_radius(poly), abs=1e-8)


def test_dragon_boundary_dimension():
    # twindragon boundary dimension is 2 log2(lambda), lambda^3 = lambda^2 + 2
    lam = max(abs(np.roots([1, -1, 0, -2])))
    dim = 2 * math.log2(lam)
    assert regularity.holder_exponent("2,2,1").alpha == pytest.approx((2 - dim) / 2, abs=1e-6)


def test_bear_boundary_dimension():
    # tame twindragon boundary dimension 1.2107
    assert regularity.holder_exponent("2,1,1").alpha == pytest.approx((2 - 1.2107) / 2, abs=1e-4)


def test_opposite_has_same_alpha():
    for poly in CUBICS:
        p = parse_poly(poly)
        q = intpoly.opposite(p)
        assert regularity.holder_exponent(q).alpha == pytest.approx(
            regularity.holder_exponent(p).alpha, abs=1e-9)


def test_special_subspace_is_invariant():
    sys = attract.default_system(parse_poly("2,1,1,1"))
    T0, T1, gamma = regularity.transfer_matrices(sys)
    W = regularity.special_subspace(T0, T1)
    assert regularity.is_zero_sum_hyperplane(W, len(gamma))
    Q = regularity._orthonormal(W)
    for T in (T0, T1):
        img = np.asarray(T, dtype=float) @ Q
        assert np.allclose(Q @ (Q.T @ img), img)


def test_dense_and_iterative_agree(monkeypatch):
    sys = attract.default_system(parse_poly("2,-2,0,1"))
    T0, T1, _ = regularity.transfer_matrices(sys)
    W = regularity.special_subspace(T0, T1)
    dense = regularity.l2_spectral_radius(T0, T1, W)
    monkeypatch.setattr(regularity, "DENSE_LIMIT", 0)
    assert regularity.l2_spectral_radius(T0, T1, W) == pytest.approx(dense, abs=1e-8)


def test_report_fields():
    d = regularity.holder_exponent("2,0,0,1").to_dict()
    # cube: rho2 = lambda^{-1/2} with lambda = 2^{1/3}
    assert d["gamma_size"] == 27 and d["rho2"] == pytest.approx(2 ** (-1 / 6), abs=1e-9)


def test_surface_dimension_needs_isotropy():
    assert regularity.surface_dimension("2,2,1") == pytest.approx(0.238186, abs=1e-5)
    with pytest.raises(ValidationError):
        regularity.surface_dimension("2,1,1,1")
