import pytest
from hypothesis import given
from hypothesis import strategies as st

from j2sym import Permutation

from corpus import X32, Y32

X_STR = (
    "(1,2)(3,5,7,11,17,4,6,9,14,22)(8,13,20,29,23,10,16,25,30,18)"
    "(12,19,28,32,26,15,24,27,31,21)"
)


def perms(degree):
    return st.permutations(range(1, degree + 1)).map(Permutation)


def test_parse_print_roundtrip_exact():
    assert str(Permutation.parse(X_STR, degree=32)) == X_STR
    assert str(Permutation.identity(5)) == "()"
    assert Permutation.parse("()", degree=4) == Permutation.identity(4)


def test_parse_accepts_spaces():
    assert Permutation.parse("(1, 2)(3, 4)") == Permutation.parse("(1,2)(3,4)")


def test_parse_rejects_garbage():
    with pytest.raises(ValueError):
        Permutation.parse("(1,2")
    with pytest.raises(ValueError):
        Permutation.parse("(1,2)(2,3)")
    with pytest.raises(ValueError):
        Permutation.parse("e")  # needs a degree


def test_compose_left_to_right():
    # x maps 3 -> 5 -> 7 along its ten-cycle
    assert (X32 * X32)[3] == 7


def test_compose_identity():
    e = Permutation.identity(32)
    assert e * X32 == X32
    assert X32 * e == X32


def test_compose_degree_mismatch():
    with pytest.raises(ValueError):
        X32 * Permutation.identity(5)


def test_orders():
    assert X32.order() == 10
    assert Y32.order() == 6
    assert Permutation.identity(7).order() == 1
    tau = (X32 ** 5) * (Y32 ** 3)
    assert tau.order() == 2


def test_power_and_inverse():
    assert X32 ** 0 == Permutation.identity(32)
    assert X32 ** -1 == X32.inverse()
    assert (X32 ** 3) * (X32 ** -3) == Permutation.identity(32)


def test_conjugate_convention():
    # p.conjugate(h) == h^-1 p h, so points satisfy (i^h)^(p^h) == (i^p)^h
    p, h = X32, Y32
    c = p.conjugate(h)
    assert c == h.inverse() * p * h
    for i in range(1, 33):
        assert c[h[i]] == h[p[i]]


def test_constructor_validates():
    with pytest.raises(ValueError):
        Permutation((1, 1, 3))
    with pytest.raises(ValueError):
        Permutation((0, 1))


@given(perms(8), perms(8))
def test_inverse_law(p, q):
    assert p * p.inverse() == Permutation.identity(8)
    assert (p * q).inverse() == q.inverse() * p.inverse()


@given(perms(7), perms(7), perms(7))
def test_associativity(p, q, r):
    assert (p * q) * r == p * (q * r)


@given(perms(9))
def test_order_is_least_annihilator(p):
    k = p.order()
    assert (p ** k).is_identity()
    for d in range(1, k):
        if k % d == 0 and d < k:
            assert not (p ** d).is_identity() or d == k


@given(perms(8))
def test_cycles_reconstruct(p):
    assert Permutation.from_cycles(8, p.cycles()) == p
    assert Permutation.parse(str(p), degree=8) == p
