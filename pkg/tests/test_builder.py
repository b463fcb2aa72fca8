import numpy as np
import pytest

from rmorbit.builder import (
    arity_required,
    constraint_for_degree,
    decompose,
    degree_arity,
    degree_bound_ok,
    provenance,
    rm_bound_ok,
    rm_constraint,
    simple_bound_ok,
)
from rmorbit.constraint import accepted_degrees, accepts_monomial
from rmorbit.errors import ArityTooSmall, OutOfRange
from rmorbit.gf import field_from_order
from rmorbit.poly import b_values, canonical_monomial, vectors_to_index


def test_decompose_examples():
    dec = decompose(4, 4, 2)
    assert (dec.r, dec.l, dec.l_prime, dec.r_prime, dec.variables_needed) == (2, 1, 0, 1, 2)
    dec = decompose(1, 8, 2)
    assert (dec.r, dec.l, dec.extension) == (1, 0, True)
    with pytest.raises(OutOfRange):
        decompose(0, 4, 2)


@pytest.mark.parametrize("q", [2, 3, 4, 5, 8, 9, 16, 25, 27])
def test_decompose_invariants(q):
    F = field_from_order(q)
    p = F.p
    low, block = q // p, q - q // p
    for t in range(1, 8 * q):
        dec = decompose(t, q, p)
        assert dec.target == dec.r + dec.l * block
        assert 0 <= dec.r <= q - 1
        assert dec.l == dec.l_prime * p + dec.r_prime and 0 <= dec.r_prime < p
        if t >= low:
            assert low <= dec.r and dec.r + block > q - 1
            # the window solution is unique
            sols = [r for r in range(low, q) if (t - r) >= 0 and (t - r) % block == 0]
            assert sols == [dec.r]
        assert dec.variables_needed == dec.l + 1


@pytest.mark.parametrize("q", [2, 3, 4, 5, 8, 9, 16])
def test_full_window_target(q):
    p = field_from_order(q).p
    block = q - q // p
    dec = decompose(p * block, q, p)
    assert (dec.r, dec.l) == (block, p - 1)


def test_arity_required_examples():
    assert arity_required(1, 2, 2, 1) == 2
    assert arity_required(2, 4, 2, 2) == 2
    assert arity_required(2, 2, 2, 1) == 4


@pytest.mark.parametrize("q", [2, 3, 4, 8, 9])
def test_arity_required_monotone(q):
    F = field_from_order(q)
    values = [arity_required(d, q, F.p, F.s) for d in range(65)]
    assert values == sorted(values)


def test_per_degree_example():
    F = field_from_order(4)
    C = constraint_for_degree(4, F, 2)
    assert C.k == 9
    table = accepted_degrees(C)
    for i in range(16):
        e = (i % 4, i // 4)
        if sum(e) <= 3:
            assert table[i]
    assert not accepts_monomial(C, (2, 2))
    with pytest.raises(ArityTooSmall):
        constraint_for_degree(8, F, 2)


def test_square_build():
    C = rm_constraint(2, 1, field_from_order(2))
    assert C.k == 4
    assert not accepts_monomial(C, (1, 1))


def test_q4_d2_build():
    F = field_from_order(4)
    C = rm_constraint(2, 2, F)
    table = accepted_degrees(C)
    for i in range(16):
        e = (i % 4, i // 4)
        if sum(e) <= 2:
            assert table[i]
    assert not accepts_monomial(C, (3, 0))
    assert not accepts_monomial(C, (2, 2))


GRID = [(q, d) for q in (2, 3, 4, 8, 9) for d in range(0, 2 * q + 1)]


@pytest.mark.parametrize("q,d", GRID)
def test_completeness_and_border_canonicals(q, d):
    F = field_from_order(q)
    n = arity_required(d, q, F.p, F.s)
    C = rm_constraint(n, d, F)
    if q ** n <= 4096:
        table = accepted_degrees(C)
        idx = np.arange(q ** n)
        digits = (idx[:, None] // q ** np.arange(n)) % q
        assert table[digits.sum(axis=1) <= d].all()
    else:
        rng = np.random.default_rng(q * 100 + d)
        checked = 0
        while checked < 150:
            e = tuple(int(x) for x in rng.integers(0, q, n))
            if sum(e) <= d:
                assert accepts_monomial(C, e)
                checked += 1
    for b in set(b_values(d, F.p, F.s)):
        e = canonical_monomial(b, q, F.p)
        assert not accepts_monomial(C, e + (0,) * (n - len(e)))


@pytest.mark.parametrize("q,d", GRID)
def test_bounds_hold(q, d):
    F = field_from_order(q)
    n = arity_required(d, q, F.p, F.s)
    C = rm_constraint(n, d, F)
    assert rm_bound_ok(C.k, d, q, F.p)
    assert simple_bound_ok(C.k, d, q)
    for b in set(b_values(d, F.p, F.s)):
        dec = decompose(b, q, F.p)
        kb = constraint_for_degree(b, F, dec.variables_needed).k
        assert kb == degree_arity(dec, F)
        assert degree_bound_ok(kb, b, q, F.p)


def test_bound_check_is_exact():
    # k just above the bound must fail
    assert simple_bound_ok(288, 1, 2)
    assert not simple_bound_ok(289, 1, 2)


def test_extension_case_is_vandermonde():
    F = field_from_order(8)
    C = constraint_for_degree(2, F, 3)
    assert C.k == 3
    assert accepts_monomial(C, (1, 0, 0)) and not accepts_monomial(C, (2, 0, 0))


def test_arity_too_small_default():
    with pytest.raises(ArityTooSmall) as exc:
        rm_constraint(1, 2, field_from_order(4))
    assert exc.value.required == 2


def test_projection_mode():
    F = field_from_order(2)
    C = rm_constraint(2, 2, F, project=True)
    assert C.n == 2
    # d = 2 = n(q-1): every function on F_2^2 is a codeword, so everything is accepted
    assert accepted_degrees(C).all()


def test_q2_arities():
    F = field_from_order(2)
    ks = [rm_constraint(arity_required(d, 2, 2, 1), d, F).k for d in range(8)]
    assert ks == [6, 4, 24, 16, 96, 64, 384, 256]
    for d, k in enumerate(ks):
        assert k <= 4 * 2 ** (d + 1)


def test_provenance():
    F = field_from_order(4)
    C = rm_constraint(2, 2, F)
    prov = provenance(2, 2, F, C)
    assert prov["k"] == C.k
    assert prov["b_values"] == [3, 4, 4]
    assert [x["target"] for x in prov["decompositions"]] == [3, 4]
    assert prov["bound_satisfied"]
    assert vectors_to_index((1, 1), 4) == 5
