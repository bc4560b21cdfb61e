from fractions import Fraction

import pytest

from oracles import riemann_roch
from ratsurf.lattice import (
    LatticeError,
    SurfaceLattice,
    blow_down,
    blow_up,
    chain,
    euler_char,
    intersect,
    noether_check,
    plane,
    pullback,
)


def test_plane():
    p = plane()
    assert p.rank == 1
    assert intersect(p, p.H, p.H) == 1
    assert p.K.square == 9
    assert euler_char(p, p.H) == 3


def test_blow_up_adds_orthogonal_minus_one_class():
    l = blow_up(plane(), {"point": [0, 0, 1]})
    assert l.rank == 2
    e = l.basis("E1")
    assert e.square == -1
    assert e.dot(l.H) == 0
    assert l.K.square == 8
    assert l.K == l.divisor({"H": -3, "E1": 1})
    assert l.history[0].center == {"point": [0, 0, 1]}


def test_nine_blow_ups_give_k_squared_zero():
    l = chain(9)
    assert l.K.square == 0
    assert intersect(l, -l.K, l.basis("E1")) == 1


def test_cubic_through_center():
    l = chain(1)
    c = l.divisor({"H": 3, "E1": -1})
    assert c.square == 8
    assert c.dot(l.K) == -8


def test_blow_down_last_exceptional():
    l = chain(10)
    small, push = blow_down(l, l.basis("E10"))
    assert small.rank == 10
    assert small.K.square == 0
    assert small.labels == l.labels[:-1]


def test_blow_down_of_section_class():
    l = chain(9)
    D = -l.K
    e = l.basis("E9")
    assert D.square == 0 and D.dot(e) == 1
    small, push = blow_down(l, e)
    D1 = push(D)
    assert D1.square == 1
    assert pullback(l, D1) - e * D.dot(e) == D


def test_blow_down_rejects_bad_classes():
    l = chain(3)
    with pytest.raises(LatticeError, match="not a \\(-1\\)-class"):
        blow_down(l, l.H)
    with pytest.raises(LatticeError, match="unsupported change of basis"):
        blow_down(l, l.divisor({"H": 1, "E1": -1, "E2": -1}))


def test_intersect_rank_mismatch():
    with pytest.raises(LatticeError):
        intersect(chain(2), chain(2).H, chain(1).H)


def test_euler_char_examples():
    l = chain(9)
    assert euler_char(l, l.zero()) == 1
    assert euler_char(l, -l.K) == 1
    for n in range(6):
        D = -l.K * n
        assert euler_char(l, D) == riemann_roch(D.square, D.dot(l.K)) == 1


def test_noether():
    assert noether_check(plane())[0]
    assert noether_check(chain(9))[0]
    broken = SurfaceLattice(chain(9).labels, (Fraction(-3),) + (Fraction(0),) * 9)
    ok, data = noether_check(broken)
    assert not ok and data["sum"] == "21"


def test_k_squared_plus_rank_constant():
    for n in range(12):
        l = chain(n)
        assert l.K.square + l.rank == 10


def test_json_round_trip():
    l = chain(4, [{"point": [0, 1, 0]}])
    assert SurfaceLattice.from_json(l.to_json()) == l


def test_bad_labels_rejected():
    with pytest.raises(LatticeError):
        SurfaceLattice(("E1",), (Fraction(1),))
    with pytest.raises(LatticeError):
        SurfaceLattice(("H", "F1"), (Fraction(-3), Fraction(1)))


def test_serre_symmetry_when_d_squared_equals_dk():
    l = chain(3)
    d = l.divisor({"H": 1, "E1": -1, "E2": -1})  # d^2 = -1 = d.K
    assert d.square == d.dot(l.K)
    assert euler_char(l, d) == euler_char(l, l.K - d)
