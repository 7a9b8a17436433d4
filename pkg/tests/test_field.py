import itertools

import numpy as np
import pytest

from dpcolor.field import (
    FieldSpec,
    field_of_order,
    is_irreducible,
    is_prime_power,
    make_field,
    prime_power,
    smallest_irreducible,
)

SMALL_ORDERS = [k for k in range(2, 65) if is_prime_power(k)]


def test_prime_power_detection():
    assert prime_power(8) == (2, 3)
    assert prime_power(9) == (3, 2)
    assert prime_power(49) == (7, 2)
    assert prime_power(6) is None
    assert prime_power(1) is None
    assert SMALL_ORDERS[:8] == [2, 3, 4, 5, 7, 8, 9, 11]


def test_gf2_is_modular():
    F = make_field(2, 1)
    assert F.k == 2
    assert F.add(1, 1) == 0
    assert F.mul(1, 1) == 1


def test_gf4_modulus_and_omega_squared():
    F = make_field(2, 2)
    # x^2 + x + 1 as coefficients c0, c1, c2
    assert F.modulus == (1, 1, 1)
    omega = 2  # the class of x has digit vector (0, 1)
    assert F.mul(omega, omega) == F.add(omega, 1)


def test_small_examples():
    assert make_field(5).inv(2) == 3
    assert make_field(3).add(1, 2) == 0
    F4 = make_field(2, 2)
    assert all(F4.add(a, a) == 0 for a in range(4))
    assert make_field(7).mul(3, 5) == 1


def test_modulus_choice_is_smallest_low_degree_first():
    assert make_field(2, 3).modulus == (1, 0, 1, 1)  # x^3 + x^2 + 1
    assert make_field(3, 2).modulus == (1, 0, 1)  # x^2 + 1
    assert make_field(2, 4).modulus == (1, 0, 0, 1, 1)  # x^4 + x^3 + 1


def test_smallest_irreducible_is_first_in_order():
    for p, r in [(2, 2), (2, 3), (3, 2), (2, 4), (5, 2)]:
        chosen = smallest_irreducible(p, r)
        for cand in itertools.product(range(p), repeat=r):
            poly = list(cand) + [1]
            if tuple(poly) == chosen:
                break
            assert not is_irreducible(poly, p)


@pytest.mark.parametrize("k", SMALL_ORDERS)
def test_field_axioms_exhaustive(k):
    F = field_of_order(k)
    els = np.arange(k)
    a, b = np.meshgrid(els, els, indexing="ij")
    add = F.add(a, b)
    mul = F.mul(a, b)
    assert (add == add.T).all() and (mul == mul.T).all()
    assert (add[0] == els).all() and (mul[1] == els).all()
    assert (mul[0] == 0).all()
    for x in range(k):
        assert F.add(x, F.neg(x)) == 0
        assert F.sub(x, x) == 0
        if x:
            assert F.mul(x, F.inv(x)) == 1
    # each row of the addition and nonzero multiplication table is a permutation
    assert all(sorted(row) == list(range(k)) for row in add)
    assert all(sorted(row) == list(range(1, k)) for row in mul[1:, 1:])
    A, B, C = np.meshgrid(els, els, els, indexing="ij")
    assert (F.add(F.add(A, B), C) == F.add(A, F.add(B, C))).all()
    assert (F.mul(F.mul(A, B), C) == F.mul(A, F.mul(B, C))).all()
    assert (F.mul(A, F.add(B, C)) == F.add(F.mul(A, B), F.mul(A, C))).all()


@pytest.mark.parametrize("k", SMALL_ORDERS)
def test_frobenius(k):
    F = field_of_order(k)
    assert all(F.pow(a, k) == a for a in range(k))


def test_characteristic_and_prime_subfield():
    F = make_field(3, 2)
    assert F.add(F.add(1, 1), 1) == 0
    assert F.element(7) == 1


def test_determinism():
    a = FieldSpec(2, 5)
    b = FieldSpec(2, 5)
    assert a.add_table.tobytes() == b.add_table.tobytes()
    assert a.mul_table.tobytes() == b.mul_table.tobytes()
    assert make_field(3, 3) is make_field(3, 3)


def test_large_field_without_tables():
    F = make_field(2, 11)
    assert F.mul_table is None
    x = 1234
    assert F.mul(x, F.inv(x)) == 1
    assert F.pow(x, F.k) == x


def test_errors():
    with pytest.raises(ValueError):
        make_field(4, 1)
    with pytest.raises(ValueError):
        make_field(2, 0)
    with pytest.raises(ValueError):
        make_field(2, 17)
    with pytest.raises(ValueError):
        field_of_order(6)
    with pytest.raises(ZeroDivisionError):
        make_field(5).inv(0)
