import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rmorbit.constraint import (
    AffineTransform,
    Constraint,
    FunctionTable,
    accepted_degrees,
    accepts_function,
    accepts_monomial,
    apply_transform,
    convolution,
    dual_vectors,
    from_polynomial,
    from_table,
    monomial_response,
    pad_arity,
    truncate_arity,
    union,
    unit_constraint,
    vandermonde_constraint,
)
from rmorbit.errors import DomainMismatch, FieldMismatch, OutOfRange, ShrinkNotAllowed, ZeroFunction
from rmorbit.gf import field_from_order
from rmorbit.poly import MultiPoly, evaluate_grid


def random_constraint(F, n, rng, max_k=5, max_r=2):
    k = int(rng.integers(1, max_k + 1))
    r = int(rng.integers(1, max_r + 1))
    pts = rng.integers(0, F.q, (k, n))
    rows = rng.integers(0, F.q, (r, k))
    for row in rows:
        if not row.any():
            row[int(rng.integers(k))] = int(rng.integers(1, F.q))
    return Constraint(F, n, pts, rows)


def degree_vectors(q, n):
    return [tuple((i // q ** t) % q for t in range(n)) for i in range(q ** n)]


def test_validation():
    F = field_from_order(3)
    with pytest.raises(DomainMismatch):
        Constraint(F, 2, [[0, 1, 2]], [[1]])
    with pytest.raises(OutOfRange):
        Constraint(F, 1, [[3]], [[1]])
    with pytest.raises(ValueError):
        Constraint(F, 1, [[0], [1]], [[0, 0]])


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9])
def test_vandermonde(q):
    F = field_from_order(q)
    for d in range(q - 1):
        C = vandermonde_constraint(F, d)
        assert C.k == d + 2
        for e in range(d + 1):
            assert accepts_monomial(C, (e,))
        assert not accepts_monomial(C, (d + 1,))
        # null vectors of a Vandermonde system have full support
        assert np.all(C.rows != 0)
    with pytest.raises(OutOfRange):
        vandermonde_constraint(F, q - 1)


def test_vandermonde_examples():
    assert vandermonde_constraint(field_from_order(2), 0).rows.tolist() == [[1, 1]]
    assert vandermonde_constraint(field_from_order(3), 1).rows.tolist() == [[1, 1, 1]]
    assert vandermonde_constraint(field_from_order(4), 1).rows.tolist() == [[1, 3, 2]]


def test_square_constraint():
    F = field_from_order(2)
    V = vandermonde_constraint(F, 0)
    C = convolution(V, V)
    assert C.k == 4
    assert sorted(map(tuple, C.points.tolist())) == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert accepts_monomial(C, (1, 0)) and accepts_monomial(C, (0, 1))
    assert not accepts_monomial(C, (1, 1))


def test_transform_composition():
    F = field_from_order(5)
    rng = np.random.default_rng(1)
    pts = rng.integers(0, 5, (10, 3))
    T1 = AffineTransform(rng.integers(0, 5, (3, 3)), rng.integers(0, 5, 3))
    T2 = AffineTransform(rng.integers(0, 5, (3, 3)), rng.integers(0, 5, 3))
    both = T1.then(F, T2)
    assert np.array_equal(both.apply(F, pts), T2.apply(F, T1.apply(F, pts)))
    assert np.array_equal(AffineTransform.identity(3).apply(F, pts), pts)


def test_accepts_function_and_transform():
    F = field_from_order(3)
    C = convolution(vandermonde_constraint(F, 1), vandermonde_constraint(F, 1))
    f = FunctionTable.from_poly(MultiPoly(F, 2, {(1, 1): 1, (0, 1): 2}))
    assert accepts_function(C, f)
    g = FunctionTable.from_poly(MultiPoly.monomial(F, (2, 2)))
    assert not accepts_function(C, g)
    swap = AffineTransform(np.array([[0, 1], [1, 0]]), np.zeros(2, dtype=np.int64))
    assert not accepts_function(apply_transform(swap, C), g)
    with pytest.raises(DomainMismatch):
        accepts_function(C, FunctionTable(F, 1, [0, 1, 2]))


def test_unit_is_neutral():
    F = field_from_order(4)
    C = vandermonde_constraint(F, 1)
    D = convolution(unit_constraint(F), C)
    assert D.same_as(C)


def test_convolution_field_mismatch():
    with pytest.raises(FieldMismatch):
        convolution(vandermonde_constraint(field_from_order(2), 0), vandermonde_constraint(field_from_order(3), 0))


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([2, 3, 4]), st.integers(1, 2), st.integers(1, 2), st.integers(0, 2 ** 32 - 1))
def test_convolution_accepts_either(q, n1, n2, seed):
    F = field_from_order(q)
    rng = np.random.default_rng(seed)
    C1, C2 = random_constraint(F, n1, rng), random_constraint(F, n2, rng)
    A1, A2 = accepted_degrees(C1), accepted_degrees(C2)
    both = accepted_degrees(convolution(C1, C2))
    # degree index of (e1, e2) is idx(e1) + q^n1 * idx(e2)
    expected = (A1[:, None] | A2[None, :]).reshape(-1, order="F")
    assert np.array_equal(both, expected)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([2, 3, 4]), st.integers(1, 2), st.integers(0, 2 ** 32 - 1))
def test_union_accepts_both(q, n, seed):
    F = field_from_order(q)
    rng = np.random.default_rng(seed)
    C1, C2 = random_constraint(F, n, rng), random_constraint(F, n, rng)
    U = union(C1, C2)
    assert U.k == C1.k + C2.k
    assert np.array_equal(accepted_degrees(U), accepted_degrees(C1) & accepted_degrees(C2))


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_pad_with_ones_is_inert(q):
    F = field_from_order(q)
    C = convolution(vandermonde_constraint(F, 0), vandermonde_constraint(F, q - 2))
    P = pad_arity(C, 3)
    for e in degree_vectors(q, 3):
        assert accepts_monomial(P, e) == accepts_monomial(C, e[:2])
    with pytest.raises(ShrinkNotAllowed):
        pad_arity(C, 1)


def test_truncate_keeps_completeness():
    F = field_from_order(3)
    C = pad_arity(convolution(vandermonde_constraint(F, 1), vandermonde_constraint(F, 1)), 3)
    T = truncate_arity(C, 1)
    assert T.n == 1
    for e in range(3):
        assert accepts_monomial(T, (e,)) == accepts_monomial(C, (e, 0, 0))
    with pytest.raises(ShrinkNotAllowed):
        truncate_arity(C, 4)


def test_from_table_and_polynomial():
    F = field_from_order(4)
    P = MultiPoly(F, 2, {(2, 0): 1, (1, 1): 1, (0, 2): 1})
    C = from_polynomial(P)
    assert C.k == 9
    vals = evaluate_grid(P)
    assert np.array_equal(dual_vectors(C)[0], vals)
    with pytest.raises(ZeroFunction):
        from_table(F, 2, np.zeros(16, dtype=np.int64))


def test_dual_vectors_sum_duplicates():
    F = field_from_order(3)
    C = Constraint(F, 1, [[0], [0], [1]], [[1, 2, 1]])
    assert dual_vectors(C).tolist() == [[0, 1, 0]]
    C = Constraint(F, 1, [[0], [0], [1]], [[1, 1, 1]])
    assert dual_vectors(C).tolist() == [[2, 1, 0]]


@pytest.mark.parametrize("q,n", [(2, 2), (3, 2), (4, 1), (5, 2)])
def test_monomial_response_matches_direct(q, n):
    F = field_from_order(q)
    rng = np.random.default_rng(q + n)
    C = random_constraint(F, n, rng, max_k=8, max_r=3)
    table = accepted_degrees(C)
    resp = monomial_response(C)
    for i, e in enumerate(degree_vectors(q, n)):
        assert table[i] == accepts_monomial(C, e)
        assert resp.shape == (C.r, q ** n)


def test_serialization():
    F = field_from_order(9)
    C = convolution(vandermonde_constraint(F, 3), vandermonde_constraint(F, 2))
    D = Constraint.from_dict(C.to_dict())
    assert D.same_as(C)
    U = unit_constraint(F)
    assert Constraint.from_dict(U.to_dict()).same_as(U)
    f = FunctionTable(F, 1, list(range(9)))
    assert FunctionTable.from_dict(f.to_dict()).values.tolist() == list(range(9))
    assert f((4,)) == 4


def test_function_from_callable():
    F = field_from_order(3)
    f = FunctionTable.from_callable(F, 2, lambda x: F.mul(x[0], x[1]))
    assert f((2, 2)) == 1
    assert f((0, 2)) == 0


def test_arrays_are_read_only():
    C = vandermonde_constraint(field_from_order(5), 2)
    with pytest.raises(ValueError):
        C.rows[0, 0] = 3


def test_points_of_convolution_are_products():
    F = field_from_order(3)
    A, B = vandermonde_constraint(F, 0), vandermonde_constraint(F, 1)
    C = convolution(A, B)
    expected = [tuple(a) + tuple(b) for a, b in itertools.product(A.points.tolist(), B.points.tolist())]
    assert [tuple(x) for x in C.points.tolist()] == expected
