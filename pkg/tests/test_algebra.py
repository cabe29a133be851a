"""Tests for the structure-constant algebra layer."""

from __future__ import annotations

import json

import pytest

from findim.algebra import (
    Algebra,
    algebra_from_json,
    algebra_to_json,
    cartan_matrix,
    corner,
    opposite,
    radical,
    validate,
)
from findim.errors import NotIdempotent, UnsupportedField
from findim.exactla import GF, QQ

#### small test algebras ################################################


def base_field_algebra():
    return Algebra(QQ, 1, ["1"], [(0, 0, 0, 1)], [1], [[1]], radical_basis=[])


def product_of_two_fields():
    """ℚ×ℚ with its two orthogonal idempotents."""
    return Algebra(QQ, 2, ["e1", "e2"], [(0, 0, 0, 1), (1, 1, 1, 1)],
                   [1, 1], [[1, 0], [0, 1]])


def truncated_polynomials(field=QQ, structural_radical=False):
    """k[x]/(x³) with basis 1, x, x²."""
    sc = [(0, 0, 0, 1), (0, 1, 1, 1), (1, 0, 1, 1), (0, 2, 2, 1),
          (2, 0, 2, 1), (1, 1, 2, 1)]
    rad = [[0, 1, 0], [0, 0, 1]] if structural_radical else None
    return Algebra(field, 3, ["1", "x", "x^2"], sc, [1, 0, 0], [[1, 0, 0]],
                   radical_basis=rad)


def matrix_algebra_2x2():
    """M₂(ℚ) on the basis E11, E12, E21, E22; E_ij·E_kl = δ_jk·E_il."""
    units = {(1, 1): 0, (1, 2): 1, (2, 1): 2, (2, 2): 3}
    sc = []
    for (i, j), a in units.items():
        for (k, l), b in units.items():
            if j == k:
                sc.append((a, b, units[(i, l)], 1))
    return Algebra(QQ, 4, ["E11", "E12", "E21", "E22"], sc, [1, 0, 0, 1],
                   [[1, 0, 0, 0], [0, 0, 0, 1]], radical_basis=[])


def upper_triangular_2x2():
    """Upper-triangular 2×2 matrices on E11, E22, E12."""
    sc = [(0, 0, 0, 1), (1, 1, 1, 1), (2, 2, 2, 0),
          (0, 2, 2, 1), (2, 1, 2, 1)]
    return Algebra(QQ, 3, ["E11", "E22", "E12"], sc, [1, 1, 0],
                   [[1, 0, 0], [0, 1, 0]], radical_basis=[[0, 0, 1]])


#### multiplication and memoized matrices ###############################


def test_mul_vec_truncated_polynomials():
    A = truncated_polynomials()
    x = [0, 1, 0]
    x2 = A.mul_vec(x, x)
    assert x2 == [QQ.of(0), QQ.of(0), QQ.of(1)]
    assert A.mul_vec(x, x2) == [QQ.zero()] * 3
    assert A.mul_vec(A.unit, x) == [QQ.of(0), QQ.of(1), QQ.of(0)]


def test_left_right_matrices_agree_with_mul_vec():
    A = matrix_algebra_2x2()
    for i in range(A.dim):
        ei = [1 if t == i else 0 for t in range(A.dim)]
        for j in range(A.dim):
            ej = [1 if t == j else 0 for t in range(A.dim)]
            prod = A.mul_vec(ei, ej)
            assert A.L(i).col(j) == prod
            assert A.R(j).col(i) == prod


def test_left_mult_matrix_of_general_element():
    A = upper_triangular_2x2()
    v = [2, -1, 3]
    Lv = A.left_mult_matrix(v)
    for j in range(A.dim):
        ej = [1 if t == j else 0 for t in range(A.dim)]
        assert Lv.col(j) == A.mul_vec(v, ej)
    Rv = A.right_mult_matrix(v)
    for j in range(A.dim):
        ej = [1 if t == j else 0 for t in range(A.dim)]
        assert Rv.col(j) == A.mul_vec(ej, v)


def test_written_order_convention():
    # E12·E21 = E11 but E21·E12 = E22: the table keeps written order
    A = matrix_algebra_2x2()
    e12 = [0, 1, 0, 0]
    e21 = [0, 0, 1, 0]
    assert A.mul_vec(e12, e21) == [QQ.one(), QQ.zero(), QQ.zero(), QQ.zero()]
    assert A.mul_vec(e21, e12) == [QQ.zero(), QQ.zero(), QQ.zero(), QQ.one()]


#### validate ###########################################################


def test_validate_accepts_good_tables():
    for A in (base_field_algebra(), product_of_two_fields(),
              truncated_polynomials(structural_radical=True),
              matrix_algebra_2x2(), upper_triangular_2x2()):
        rep = validate(A, check_primitivity=False)
        assert rep.ok, rep.failures


def test_validate_reports_associativity_failure():
    # corrupt x²·x so that (x·x)·x = x ≠ 0 = x·(x·x)
    sc = [(0, 0, 0, 1), (0, 1, 1, 1), (1, 0, 1, 1), (0, 2, 2, 1),
          (2, 0, 2, 1), (1, 1, 2, 1), (2, 1, 1, 1)]
    A = Algebra(QQ, 3, ["1", "x", "x^2"], sc, [1, 0, 0], [[1, 0, 0]])
    rep = validate(A, check_primitivity=False)
    assert any("associativity" in msg for msg in rep.failures)


def test_validate_reports_unit_failure():
    A = Algebra(QQ, 2, ["u", "b"], [(0, 0, 0, 1)], [1, 0], [[1, 0]])
    rep = validate(A, check_primitivity=False)
    assert any("unit" in msg for msg in rep.failures)


def test_validate_reports_idempotent_failures():
    A = Algebra(QQ, 2, ["e1", "e2"], [(0, 0, 0, 1), (1, 1, 1, 1)],
                [1, 1], [[1, 0], [1, 0]])
    rep = validate(A, check_primitivity=False)
    assert any("orthogonal" in msg for msg in rep.failures)
    assert any("sum" in msg for msg in rep.failures)


def test_validate_reports_bad_radical():
    A = Algebra(QQ, 2, ["e1", "e2"], [(0, 0, 0, 1), (1, 1, 1, 1)],
                [1, 1], [[1, 0], [0, 1]], radical_basis=[[0, 1]])
    rep = validate(A, check_primitivity=False)
    assert any("nilpotent" in msg for msg in rep.failures)
    assert any("trace" in msg for msg in rep.failures)


#### opposite ###########################################################


def test_opposite_of_commutative_algebra_has_same_table():
    A = truncated_polynomials()
    B = opposite(A)
    assert B._sc == A._sc
    assert opposite(B) is A


def test_opposite_reverses_products():
    A = matrix_algebra_2x2()
    B = opposite(A)
    e12 = [0, 1, 0, 0]
    e21 = [0, 0, 1, 0]
    # in A^op, e12 ∘ e21 = e21·e12 = E22
    assert B.mul_vec(e12, e21) == A.mul_vec(e21, e12)
    rep = validate(B, check_primitivity=False)
    assert rep.ok, rep.failures


def test_cartan_of_opposite_is_transpose():
    A = upper_triangular_2x2()
    C = cartan_matrix(A)
    Cop = cartan_matrix(opposite(A))
    assert Cop == [list(col) for col in zip(*C)]


#### radical ############################################################


def test_radical_of_semisimple_algebras_is_zero():
    assert radical(product_of_two_fields()) == []
    assert radical(matrix_algebra_2x2()) == []


def test_radical_of_truncated_polynomials():
    A = truncated_polynomials()
    J = radical(A)
    assert len(J) == 2
    for v in J:
        assert not v[0]  # no component on the unit


def test_trace_radical_matches_structural_radical():
    from findim.exactla import row_space_basis

    A = truncated_polynomials()
    B = truncated_polynomials(structural_radical=True)
    assert (row_space_basis(QQ, radical(A), 3)
            == row_space_basis(QQ, radical(B), 3))


def test_radical_over_prime_field_needs_structural_basis():
    A = truncated_polynomials(field=GF(2))
    with pytest.raises(UnsupportedField):
        radical(A)
    B = truncated_polynomials(field=GF(2), structural_radical=True)
    assert len(radical(B)) == 2


#### corner #############################################################


def test_corner_at_unit_reproduces_the_algebra():
    A = upper_triangular_2x2()
    B, data = corner(A, A.unit)
    assert B.dim == A.dim
    assert B._sc == A._sc
    assert B.unit == A.unit
    assert len(B.idempotents) == len(A.idempotents)
    assert data.e == A.unit


def test_corner_at_matrix_unit_is_one_dimensional():
    A = matrix_algebra_2x2()
    B, data = corner(A, [1, 0, 0, 0])
    assert B.dim == 1
    assert B.unit == [QQ.one()]
    assert data.basis == [[QQ.one(), QQ.zero(), QQ.zero(), QQ.zero()]]


def test_corner_of_zero_idempotent_is_zero_algebra():
    A = matrix_algebra_2x2()
    B, _ = corner(A, [0, 0, 0, 0])
    assert B.dim == 0
    assert B.idempotents == []
    rep = validate(B, check_primitivity=False)
    assert rep.ok


def test_corner_rejects_non_idempotent():
    A = truncated_polynomials()
    with pytest.raises(NotIdempotent):
        corner(A, [0, 1, 0])


def test_corner_carries_radical():
    A = truncated_polynomials()
    B, _ = corner(A, [1, 0, 0])
    assert B._radical is not None and len(B._radical) == 2
    rep = validate(B, check_primitivity=False)
    assert rep.ok, rep.failures


def test_corner_keeps_distinguished_idempotents():
    A = upper_triangular_2x2()
    B, _ = corner(A, A.unit)
    # both vertex idempotents survive as the corner's idempotent list
    assert len(B.idempotents) == 2


#### cartan matrices ####################################################


def test_cartan_of_semisimple_product_is_identity():
    assert cartan_matrix(product_of_two_fields()) == [[1, 0], [0, 1]]


def test_cartan_of_upper_triangular():
    A = upper_triangular_2x2()
    C = cartan_matrix(A)
    assert sum(sum(row) for row in C) == A.dim
    assert sorted(x for row in C for x in row) == [0, 1, 1, 1]


def test_cartan_of_local_algebra():
    assert cartan_matrix(truncated_polynomials()) == [[3]]


#### JSON ###############################################################


def test_algebra_json_round_trip():
    A = upper_triangular_2x2()
    d = algebra_to_json(A)
    B = algebra_from_json(d)
    assert B.dim == A.dim
    assert B._sc == A._sc
    assert B.unit == A.unit
    assert B.idempotents == A.idempotents
    assert B._radical == A._radical


def test_algebra_json_is_byte_stable():
    A = truncated_polynomials(structural_radical=True)
    s1 = json.dumps(algebra_to_json(A), sort_keys=True)
    s2 = json.dumps(algebra_to_json(algebra_from_json(json.loads(s1))),
                    sort_keys=True)
    assert s1 == s2


def test_algebra_json_prime_field_scalars_are_integers():
    A = truncated_polynomials(field=GF(2), structural_radical=True)
    d = algebra_to_json(A)
    assert all(isinstance(c, int) for (_, _, _, c) in d["structure_constants"])
    B = algebra_from_json(d)
    assert B.field == GF(2)
    assert B._sc == A._sc


def test_rational_scalars_serialize_as_strings():
    A = Algebra(QQ, 1, ["u"], [(0, 0, 0, "1/1")], ["1"], [["1"]])
    d = algebra_to_json(A)
    assert d["structure_constants"] == [[0, 0, 0, "1"]]
    assert d["unit"] == ["1"]
