import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from xxzfloquet.errors import InvalidArgumentError, ParseError, ResourceError
from xxzfloquet.hilbert import (
    ProductState,
    SpinBasis,
    StateVector,
    ladder_coefficient,
    parse_spin_string,
    product_state_vector,
    sz_value,
    total_magnetization,
    total_sz_diagonal,
)


def test_basis_dimensions():
    assert SpinBasis(4).dim == 16
    assert SpinBasis(4, two_s=2).dim == 81
    assert SpinBasis(3, two_s=3).spin == 1.5
    assert SpinBasis(4) == SpinBasis(4, 1)
    assert SpinBasis(4) != SpinBasis(4, 2)
    assert len({SpinBasis(4), SpinBasis(4, 1)}) == 1


def test_basis_cap_and_validation():
    with pytest.raises(ResourceError):
        SpinBasis(30)
    with pytest.raises(ResourceError):
        SpinBasis(10, max_dim=512)
    with pytest.raises(InvalidArgumentError):
        SpinBasis(0)
    with pytest.raises(InvalidArgumentError):
        SpinBasis(4, two_s=0)


@given(st.integers(1, 6), st.integers(1, 3), st.data())
def test_encode_decode_roundtrip(length, two_s, data):
    basis = SpinBasis(length, two_s)
    index = data.draw(st.integers(0, basis.dim - 1))
    digits = basis.decode(index)
    assert basis.encode(digits) == index
    assert tuple(basis.digit_table[:, index]) == digits


def test_site_zero_is_least_significant():
    basis = SpinBasis(4)
    assert basis.decode(1) == (1, 0, 0, 0)
    assert parse_spin_string("uddd", basis).index == 1
    assert parse_spin_string("dddu", basis).index == 8


def test_ladder_coefficients():
    # spin 1/2: <up|S+|down> = 1
    assert ladder_coefficient(1, -1, "+") == 1.0
    assert ladder_coefficient(1, 1, "+") == 0.0
    # spin 1: sqrt(2) on both steps
    assert ladder_coefficient(2, -2, "+") == pytest.approx(np.sqrt(2), abs=1e-15)
    assert ladder_coefficient(2, 0, "-") == pytest.approx(np.sqrt(2), abs=1e-15)
    # spin 3/2, m = 1/2 -> 3/2: sqrt(15/4 - 3/4) = sqrt(3)
    assert ladder_coefficient(3, 1, "+") == pytest.approx(np.sqrt(3), abs=1e-15)
    with pytest.raises(InvalidArgumentError):
        ladder_coefficient(1, 1, "x")


def test_parse_spin_half():
    basis = SpinBasis(4)
    s = parse_spin_string("↑↓ud", basis)
    assert s.digits == (1, 0, 1, 0)
    assert s.label() == "udud"
    assert s.label(arrows=True) == "↑↓↑↓"
    assert sz_value(s, 0) == 0.5 and sz_value(s, 1) == -0.5


def test_parse_general_spin():
    basis = SpinBasis(3, two_s=3)
    s = parse_spin_string("3/2, -1/2, -3/2", basis)
    assert s.digits == (3, 1, 0)
    assert parse_spin_string(s.label(), basis) == s
    b1 = SpinBasis(3, two_s=2)
    assert parse_spin_string("1,0,-1", b1).digits == (2, 1, 0)


@pytest.mark.parametrize(
    "text,two_s,position",
    [("udxd", 1, 3), ("1,0,2", 2, 3), ("1,1/2,0", 2, 2), ("1,a,0", 2, 2)],
)
def test_parse_errors_report_position(text, two_s, position):
    with pytest.raises(ParseError) as err:
        parse_spin_string(text, SpinBasis(4 if two_s == 1 else 3, two_s))
    assert err.value.position == position


def test_parse_length_mismatch():
    with pytest.raises(ParseError):
        parse_spin_string("udu", SpinBasis(4))


def test_product_state_validation():
    with pytest.raises(InvalidArgumentError):
        ProductState(SpinBasis(2), (0, 2))
    with pytest.raises(InvalidArgumentError):
        ProductState(SpinBasis(2), (0,))


def test_state_vector_checks(rng):
    basis = SpinBasis(3)
    with pytest.raises(InvalidArgumentError):
        StateVector(basis, np.zeros(7))
    with pytest.raises(InvalidArgumentError):
        StateVector(basis, np.full(8, np.nan))
    psi = StateVector.random(basis, rng)
    assert psi.norm() == pytest.approx(1.0, abs=1e-14)
    assert StateVector.zeros(basis).norm() == 0.0
    c = psi.copy()
    c.amplitudes[0] = 99
    assert psi.amplitudes[0] != 99


def test_magnetization(rng):
    basis = SpinBasis(4)
    assert list(total_sz_diagonal(basis)[[0, 15, 5]]) == [-2.0, 2.0, 0.0]
    assert total_magnetization(product_state_vector(parse_spin_string("uuud", basis))) == 1.0
    psi = StateVector.random(basis, rng, magnetization=0.0)
    assert total_magnetization(psi) == pytest.approx(0.0, abs=1e-14)
