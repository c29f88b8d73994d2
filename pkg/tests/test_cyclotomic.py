import cmath
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import cyclotomic_value
from xpq.cyclotomic import (Cyclotomic, from_exponents, gaussian, is_rational, is_real,
                            root_of_unity, sign, to_complex)

orders = st.sampled_from([3, 4, 5, 7, 8, 12, 15, 35])
small = st.fractions(min_value=-3, max_value=3, max_denominator=5)


def vec(n):
    return st.lists(small, min_size=n, max_size=n)


@st.composite
def element(draw):
    n = draw(orders)
    coeffs = draw(vec(n))
    return n, coeffs, from_exponents(n, coeffs)


def test_roots_and_sums():
    w = root_of_unity(5)
    assert w ** 5 == 1
    assert sum((root_of_unity(5, k) for k in range(5)), Fraction(0)) == 0
    assert root_of_unity(4, 2) == -1
    assert gaussian(0, 1) * gaussian(0, 1) == -1
    assert isinstance(root_of_unity(5, 0), Fraction)


def test_rational_results_normalise():
    x = root_of_unity(3) + root_of_unity(3, 2)
    assert x == -1 and is_rational(x) and isinstance(x, Fraction)


def test_mixed_orders_compare():
    assert root_of_unity(4) == root_of_unity(8, 2)
    assert root_of_unity(3) * root_of_unity(5) == root_of_unity(15, 8)


def test_sign_of_real_irrational():
    golden = root_of_unity(5) + root_of_unity(5, 4)  # 2 cos(2 pi / 5) > 0
    assert is_real(golden) and sign(golden) == 1
    assert sign(-golden) == -1
    assert not is_real(root_of_unity(5))
    with pytest.raises(ValueError):
        sign(root_of_unity(5))


@given(element())
def test_value_matches_float_evaluation(e):
    n, coeffs, x = e
    assert abs(to_complex(x) - cyclotomic_value(n, coeffs)) < 1e-9


@given(element(), element())
def test_field_operations_match_floats(a, b):
    _, _, x = a
    _, _, y = b
    cx, cy = to_complex(x), to_complex(y)
    assert abs(to_complex(x + y) - (cx + cy)) < 1e-8
    assert abs(to_complex(x * y) - cx * cy) < 1e-7
    assert abs(to_complex(x.conjugate() if hasattr(x, "conjugate") else x) - cx.conjugate()) < 1e-9
    if y != 0:
        q = x / y
        assert q * y == x


@given(element())
def test_norm_is_real_nonnegative(e):
    _, _, x = e
    nrm = x * x.conjugate()
    assert is_real(nrm)
    assert sign(nrm) >= 0
    assert (sign(nrm) == 0) == (x == 0)


def test_unhashable_and_repr():
    x = root_of_unity(7)
    assert isinstance(x, Cyclotomic)
    with pytest.raises(TypeError):
        hash(x)
    assert abs(to_complex(x) - cmath.exp(2j * cmath.pi / 7)) < 1e-12
