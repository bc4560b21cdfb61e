from fractions import Fraction

import pytest

from oracles import E8_MARKS, brute_force_sign, gaussian_kernel
from ratsurf import exact_linalg as la
from ratsurf.config import affine_gram
from ratsurf.exact_linalg import Definiteness


def test_kernel_identity_is_empty():
    assert la.kernel_basis(la.qmatrix([[1, 0], [0, 1]])) == []


def test_kernel_zero_matrix_is_standard_basis():
    assert la.kernel_basis(la.qmatrix([[0, 0], [0, 0]])) == [(1, 0), (0, 1)]


def test_kernel_e8_single_vector_matches_row_reduction():
    g = affine_gram("E", 8)
    ker = la.kernel_basis(g)
    assert len(ker) == 1
    assert all(x == 0 for x in la.mat_vec(g, ker[0]))
    ref = gaussian_kernel(g)
    assert la.primitive_integer_generator(ker[0]) == la.primitive_integer_generator(ref[0])


def test_kernel_vectors_are_independent_and_annihilated():
    m = la.qmatrix([[1, 2, 3, 4], [2, 4, 6, 8], [0, 1, 1, 0]])
    ker = la.kernel_basis(m)
    assert len(ker) == 2
    assert la.rank(tuple(ker)) == 2
    for v in ker:
        assert la.mat_vec(m, v) == (0, 0, 0)


@pytest.mark.parametrize(
    "m, expected",
    [
        ([[-2]], Definiteness.NEGATIVE_DEFINITE),
        ([[-2, 2], [2, -2]], Definiteness.NEGATIVE_SEMIDEFINITE_SINGULAR),
        ([[0, 1], [1, 0]], Definiteness.INDEFINITE_OR_POSITIVE),
        ([[0]], Definiteness.NEGATIVE_SEMIDEFINITE_SINGULAR),
        ([[1]], Definiteness.INDEFINITE_OR_POSITIVE),
        ([[-1, 1], [1, -1]], Definiteness.NEGATIVE_SEMIDEFINITE_SINGULAR),
        ([[-1, 2], [2, -1]], Definiteness.INDEFINITE_OR_POSITIVE),
    ],
)
def test_definiteness_examples(m, expected):
    assert la.definiteness(la.qmatrix(m)) is expected


def test_definiteness_semidefinite_has_kernel():
    m = la.qmatrix([[-2, 2], [2, -2]])
    assert la.kernel_basis(m) == [(1, 1)]


def test_definiteness_rejects_nonsymmetric():
    with pytest.raises(la.LinalgError):
        la.definiteness(la.qmatrix([[1, 2], [3, 4]]))


def test_definiteness_zero_diagonal_with_later_coupling():
    # zero pivot that only becomes coupled after elimination
    m = la.qmatrix([[-1, 1, 0], [1, -1, 1], [0, 1, -1]])
    assert la.definiteness(m) is Definiteness.INDEFINITE_OR_POSITIVE
    assert brute_force_sign(m) == "other"


def test_solve_examples():
    assert la.solve(la.qmatrix([[1, 0], [0, 1]]), [3, 4]) == (3, 4)
    assert la.solve(la.qmatrix([[-2, 1], [1, -2]]), [-1, 0]) == (Fraction(2, 3), Fraction(1, 3))
    assert la.solve(la.qmatrix([[0]]), [1]) is None


def test_solve_underdetermined_returns_echelon_particular():
    x = la.solve(la.qmatrix([[1, 1]]), [2])
    assert x == (2, 0)


def test_primitive_generator_examples():
    assert la.primitive_integer_generator([Fraction(1, 2), 1]) == (1, 2)
    assert la.primitive_integer_generator([-2, -4]) == (1, 2)
    ker = la.kernel_basis(affine_gram("E", 8))[0]
    marks = la.primitive_integer_generator(ker)
    assert marks == E8_MARKS


def test_primitive_generator_rejects_zero():
    with pytest.raises(la.LinalgError):
        la.primitive_integer_generator([0, 0])


def test_rational_strings_round_trip():
    for q in [Fraction(3, 7), Fraction(-5), Fraction(0)]:
        assert la.rational(la.format_rational(q)) == q
    assert la.format_rational(Fraction(4, 2)) == "2"
    assert la.format_rational(Fraction(-1, 3)) == "-1/3"


def test_rational_rejects_float():
    with pytest.raises(la.LinalgError):
        la.rational(0.5)
