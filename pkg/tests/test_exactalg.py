import pytest
import sympy
from hypothesis import given, strategies as st

from pathhom import _modp
from pathhom.errors import CompositionNotZero, ParseError, ValidationError
from pathhom.exactalg import (
    ExactMatrix,
    FieldHomology,
    HomologyGroup,
    Ring,
    elementary_divisors,
    homology_at,
    kernel_basis,
    kunneth,
    rank,
    smith_normal_form,
)

from helpers import sympy_integer_homology, sympy_rank

Z, Q, F2, F3 = Ring.integers(), Ring.rationals(), Ring.prime_field(2), Ring.prime_field(3)

small_ints = st.integers(min_value=-6, max_value=6)


def int_matrices(max_side=5):
    return st.integers(1, max_side).flatmap(
        lambda r: st.integers(1, max_side).flatmap(
            lambda c: st.lists(st.lists(small_ints, min_size=c, max_size=c), min_size=r, max_size=r)))


def determinant(M: ExactMatrix) -> int:
    return int(sympy.Matrix(M.to_lists()).det())


# ---------------------------------------------------------------------------
# rings


def test_ring_parse_accepts_common_spellings():
    assert Ring.parse("Z") == Z
    assert Ring.parse("Q") == Q
    assert Ring.parse("Fp:7") == Ring.prime_field(7)
    assert Ring.parse("F2") == F2


def test_ring_rejects_composite_modulus():
    with pytest.raises(ValidationError):
        Ring.prime_field(6)
    with pytest.raises(ParseError):
        Ring.parse("R")


# ---------------------------------------------------------------------------
# Smith normal form


def test_snf_of_diag_2_3_is_diag_1_6():
    U, S, V = smith_normal_form(ExactMatrix([[2, 0], [0, 3]], Z))
    assert S.to_lists() == [[1, 0], [0, 6]]
    assert (U @ ExactMatrix([[2, 0], [0, 3]], Z) @ V) == S


def test_snf_of_zero_matrix_keeps_identity_transforms():
    U, S, V = smith_normal_form(ExactMatrix.zeros(Z, 2, 3))
    assert S.is_zero() and S.shape == (2, 3)
    assert U == ExactMatrix.identity(Z, 2)
    assert V == ExactMatrix.identity(Z, 3)


@pytest.mark.parametrize("n", [1, 3, 5])
def test_snf_of_identity_is_identity(n):
    assert smith_normal_form(ExactMatrix.identity(Z, n))[1] == ExactMatrix.identity(Z, n)


@given(int_matrices())
def test_snf_is_a_unimodular_diagonalisation(rows):
    M = ExactMatrix(rows, Z)
    U, S, V = smith_normal_form(M)
    assert (U @ M @ V) == S
    assert abs(determinant(U)) == 1 and abs(determinant(V)) == 1
    diag = [S[i, i] for i in range(min(S.shape))]
    assert all(S[i, j] == 0 for i in range(S.rows) for j in range(S.cols) if i != j)
    assert all(d >= 0 for d in diag)
    nonzero = [d for d in diag if d]
    assert diag[: len(nonzero)] == nonzero
    assert all(b % a == 0 for a, b in zip(nonzero, nonzero[1:]))


@given(int_matrices())
def test_elementary_divisors_match_sympy(rows):
    from sympy.matrices.normalforms import smith_normal_form as sympy_snf

    S = sympy_snf(sympy.Matrix(rows), domain=sympy.ZZ)
    expected = sorted(abs(int(S[i, i])) for i in range(min(S.shape)) if S[i, i] != 0)
    assert elementary_divisors(ExactMatrix(rows, Z)) == expected


def test_snf_is_deterministic():
    M = ExactMatrix([[4, 6, 2], [6, 9, 3], [2, 3, 1]], Z)
    first = [m.to_lists() for m in smith_normal_form(M)]
    assert first == [m.to_lists() for m in smith_normal_form(M)]


# ---------------------------------------------------------------------------
# kernels


def test_kernel_of_single_row_over_q():
    basis = kernel_basis(ExactMatrix([[1, 1]], Q))
    assert len(basis) == 1
    assert basis[0][0] == -basis[0][1] != 0


def test_kernel_of_injective_map_over_z_is_empty():
    assert kernel_basis(ExactMatrix([[2]], Z)) == []


def test_kernel_of_rank_one_integer_matrix_is_primitive():
    basis = kernel_basis(ExactMatrix([[1, 2], [2, 4]], Z))
    assert [list(map(abs, b)) for b in basis] == [[2, 1]]
    assert basis[0][0] * basis[0][1] < 0


@given(int_matrices(4))
def test_integer_kernel_is_a_saturated_basis(rows):
    M = ExactMatrix(rows, Z)
    basis = kernel_basis(M)
    assert len(basis) == M.cols - sympy_rank(rows)
    for v in basis:
        assert all(x == 0 for x in M.apply(v))
    if basis:
        # a direct summand: the elementary divisors of the basis matrix are all 1
        assert all(d == 1 for d in elementary_divisors(ExactMatrix(basis, Z)))


# ---------------------------------------------------------------------------
# homology


def test_homology_of_multiplication_by_two_is_z_mod_2():
    h = homology_at(ExactMatrix.zeros(Z, 1, 1), ExactMatrix([[2]], Z))
    assert h == HomologyGroup(0, (2,))


def test_homology_of_three_cycle_graph():
    # vertices 0,1,2 and edges 0->1, 1->2, 2->0 as columns
    d1 = ExactMatrix([[-1, 0, 1], [1, -1, 0], [0, 1, -1]], Z)
    h1 = homology_at(d1, ExactMatrix.zeros(Z, 3, 0))
    assert h1 == HomologyGroup(1)


def test_homology_of_zero_maps_is_free():
    h = homology_at(ExactMatrix.zeros(Z, 0, 5), ExactMatrix.zeros(Z, 5, 0))
    assert h == HomologyGroup(5)


def test_nonzero_composite_is_rejected():
    with pytest.raises(CompositionNotZero):
        homology_at(ExactMatrix([[1]], Z), ExactMatrix([[1]], Z))


@given(int_matrices(4), st.integers(0, 3))
def test_integer_homology_matches_sympy(rows, extra):
    # a complex A --d_in--> B --d_out--> C with d_out · d_in = 0 built from a kernel
    d_in = ExactMatrix(rows, Z)
    left = kernel_basis(d_in.T)
    d_out = ExactMatrix(left[:extra] or [[0] * d_in.rows], Z) if left else ExactMatrix([[0] * d_in.rows], Z)
    h = homology_at(d_out, d_in)
    rank_, torsion = sympy_integer_homology(d_out.to_lists(), rows, d_in.rows)
    assert (h.rank, list(h.torsion)) == (rank_, torsion)


@given(int_matrices(4))
def test_field_homology_is_rank_nullity(rows):
    d_in = ExactMatrix(rows, Q)
    d_out = ExactMatrix.zeros(Q, 1, d_in.rows)
    h = homology_at(d_out, d_in)
    assert h.rank == d_in.rows - rank(d_out) - rank(d_in)
    assert h.torsion == ()
    assert FieldHomology.compute(d_out, d_in).dim == h.rank


def test_homology_group_arithmetic():
    a = HomologyGroup(1, (2,))
    b = HomologyGroup(0, (4,))
    assert a.tensor(b) == HomologyGroup(0, (2, 4))
    assert a.tor(b) == HomologyGroup(0, (2,))
    assert HomologyGroup(0, (2, 3)) == HomologyGroup(0, (6,))
    assert HomologyGroup.from_dict(a.to_dict()) == a


def test_kunneth_formula_includes_tor_term():
    circle_mod_2 = [HomologyGroup(1), HomologyGroup(0, (2,))]
    h = [kunneth(circle_mod_2, circle_mod_2, n) for n in range(4)]
    assert h == [HomologyGroup(1), HomologyGroup(0, (2, 2)), HomologyGroup(0, (2,)), HomologyGroup(0, (2,))]


# ---------------------------------------------------------------------------
# the F_p kernel: numba and numpy paths agree


@pytest.mark.skipif(not _modp.HAVE_NUMBA, reason="numba not importable")
@given(st.integers(1, 12), st.integers(1, 12), st.sampled_from([2, 3, 5, 101]), st.data())
def test_numba_and_numpy_row_reduction_agree(r, c, p, data):
    rows = data.draw(st.lists(st.lists(st.integers(0, p - 1), min_size=c, max_size=c), min_size=r, max_size=r))
    a, pa = _modp.rref_mod_p(rows, p, use_numba=True)
    b, pb = _modp.rref_mod_p(rows, p, use_numba=False)
    assert pa == pb
    assert (a == b).all()
    assert len(pa) == sympy_rank(rows, p)


@given(st.integers(1, 8), st.integers(1, 8), st.data())
def test_rank_over_f3_matches_sympy(r, c, data):
    rows = data.draw(st.lists(st.lists(st.integers(0, 2), min_size=c, max_size=c), min_size=r, max_size=r))
    assert rank(ExactMatrix(rows, F3)) == sympy_rank(rows, 3)
