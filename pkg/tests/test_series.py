import random
from fractions import Fraction
from math import comb

import pytest

from semiconformal.scalars import MODE_EXACT, MODE_FLOAT, CScalar, ModeMismatch
from semiconformal.series import BiSeries


def exact(v, im=0):
    return CScalar.exact(v, im)


def rand_series(rng, trunc, density=0.5):
    table = {}
    for k in range(trunc + 1):
        for l in range(trunc + 1 - k):
            if rng.random() < density:
                table[(k, l)] = CScalar.exact(
                    Fraction(rng.randint(-6, 6), rng.randint(1, 4)),
                    Fraction(rng.randint(-6, 6), rng.randint(1, 4)),
                )
    return BiSeries(trunc, MODE_EXACT, table)


# -- construction invariants ---------------------------------------------------


def test_index_beyond_truncation_rejected():
    with pytest.raises(ValueError):
        BiSeries(2, MODE_EXACT, {(2, 1): exact(1)})


def test_mode_mixture_rejected():
    with pytest.raises(ModeMismatch):
        BiSeries(2, MODE_EXACT, {(0, 0): CScalar.floating(1.0)})


def test_zero_coefficients_are_not_stored():
    s = BiSeries(3, MODE_EXACT, {(0, 0): exact(0), (1, 1): exact(2)})
    assert s.support() == [(1, 1)]
    assert s.coeff(0, 0).is_zero()


# -- addition ---------------------------------------------------------------


def test_add_polynomials():
    one_plus_u = BiSeries(2, MODE_EXACT, {(0, 0): exact(1), (1, 0): exact(1)})
    z = BiSeries(2, MODE_EXACT, {(0, 1): exact(1)})
    total = one_plus_u + z
    assert total.support() == [(0, 0), (0, 1), (1, 0)]
    assert total.coeff(0, 1) == exact(1)


def test_add_zero_is_identity():
    rng = random.Random(11)
    s = rand_series(rng, 4)
    assert s + BiSeries.zero(4, MODE_EXACT) == s


def test_additive_inverse_cancels():
    c = exact(0, 1)
    s = BiSeries(3, MODE_EXACT, {(0, 0): exact(1), (0, 1): c})
    assert (s + (-s)).n_nonzero == 0


def test_add_takes_min_truncation():
    a = BiSeries(5, MODE_EXACT, {(3, 2): exact(1)})
    b = BiSeries(3, MODE_EXACT, {(0, 0): exact(1)})
    total = a + b
    assert total.trunc == 3
    assert total.support() == [(0, 0)]


# -- multiplication ------------------------------------------------------------


def test_mul_polynomials():
    a = BiSeries(2, MODE_EXACT, {(0, 0): exact(1), (1, 0): exact(1)})
    b = BiSeries(2, MODE_EXACT, {(0, 0): exact(1), (0, 1): exact(1)})
    prod = a * b
    assert prod.support() == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert all(prod.coeff(k, l) == exact(1) for k, l in prod.support())


def test_mul_identity():
    rng = random.Random(12)
    s = rand_series(rng, 5)
    one = BiSeries.constant(exact(1), 5)
    assert s * one == s


def test_central_binomial_square_gives_powers_of_four():
    # Oracle first: plain convolution of the central binomial sequence.
    n = 10
    cb = [comb(2 * j, j) for j in range(n + 1)]
    conv = [sum(cb[i] * cb[m - i] for i in range(m + 1)) for m in range(n + 1)]
    assert conv == [4**m for m in range(n + 1)]

    s = BiSeries(n, MODE_EXACT, {(k, 0): exact(cb[k]) for k in range(n + 1)})
    square = s * s
    for m in range(n + 1):
        assert square.coeff(m, 0) == exact(conv[m])


# -- ring axioms on random series ------------------------------------------------


def test_ring_axioms_randomized():
    rng = random.Random(2024)
    for _ in range(8):
        a = rand_series(rng, 8, 0.35)
        b = rand_series(rng, 8, 0.35)
        c = rand_series(rng, 8, 0.35)
        assert a + b == b + a
        assert a * b == b * a
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c


# -- differentiation ---------------------------------------------------------------


def test_diff_term_by_term():
    c = exact(0, 1)
    s = BiSeries(3, MODE_EXACT, {(0, 0): exact(1), (0, 1): c, (1, 2): exact(1)})
    dz = s.diff("z")
    assert dz.trunc == 2
    assert dz.coeff(0, 0) == c
    assert dz.coeff(1, 1) == exact(2)


def test_diff_constant_is_zero():
    s = BiSeries.constant(exact(5), 4)
    assert s.diff("u").n_nonzero == 0


def test_diff_hopf_in_u_is_constant():
    from semiconformal.closed_forms import hopf_series

    du = hopf_series(6).diff("u")
    assert du.support() == [(0, 0)]
    assert du.coeff(0, 0) == exact(-2)


def test_diff_below_degree_zero_rejected():
    with pytest.raises(ValueError):
        BiSeries.constant(exact(1), 0).diff("u")


def test_product_rule_both_variables():
    rng = random.Random(77)
    for var in ("u", "z"):
        a = rand_series(rng, 6, 0.4)
        b = rand_series(rng, 6, 0.4)
        lhs = (a * b).diff(var)
        rhs = a.diff(var) * b + a * b.diff(var)
        common = min(lhs.trunc, rhs.trunc)
        assert lhs.truncate(common) == rhs.truncate(common)


# -- evaluation ----------------------------------------------------------------


def test_eval_hopf_at_origin():
    from semiconformal.closed_forms import hopf_series

    zero = CScalar.zero(MODE_EXACT)
    assert hopf_series(6).evaluate(zero, zero) == exact(1)


def test_eval_at_origin_returns_constant_term():
    rng = random.Random(5)
    s = rand_series(rng, 5)
    zero = CScalar.zero(MODE_EXACT)
    assert s.evaluate(zero, zero) == s.coeff(0, 0)


def test_eval_direct_substitution():
    s = BiSeries(2, MODE_EXACT, {(0, 0): exact(1), (0, 1): exact(0, 1)})
    value = s.evaluate(CScalar.zero(MODE_EXACT), exact(1))
    assert value == exact(1, 1)


def test_eval_is_ring_homomorphism_on_low_degree():
    rng = random.Random(31)
    u = CScalar.exact(Fraction(1, 3), Fraction(1, 5))
    z = CScalar.exact(Fraction(-2, 7))
    for _ in range(6):
        a = rand_series(rng, 3, 0.5)
        b = rand_series(rng, 3, 0.5)
        wide_a = BiSeries(6, MODE_EXACT, dict(a.items()))
        wide_b = BiSeries(6, MODE_EXACT, dict(b.items()))
        assert (wide_a + wide_b).evaluate(u, z) == a.evaluate(u, z) + b.evaluate(u, z)
        assert (wide_a * wide_b).evaluate(u, z) == a.evaluate(u, z) * b.evaluate(u, z)


def test_eval_mode_strictness():
    s = BiSeries.constant(exact(1), 2)
    with pytest.raises(ModeMismatch):
        s.evaluate(CScalar.floating(0.0), CScalar.floating(0.0))


# -- serialization ------------------------------------------------------------------


def test_json_round_trip_exact():
    rng = random.Random(99)
    s = rand_series(rng, 6, 0.4)
    doc = s.to_json_dict()
    assert doc["mode"] == MODE_EXACT
    assert all(isinstance(entry[2], str) for entry in doc["coeffs"])
    assert BiSeries.from_json_dict(doc) == s


def test_json_round_trip_float():
    s = BiSeries(
        2,
        MODE_FLOAT,
        {(0, 0): CScalar.floating(0.1), (1, 1): CScalar.floating(-2.5, 1e-17)},
    )
    assert BiSeries.from_json_dict(s.to_json_dict()) == s


def test_json_schema_shape():
    s = BiSeries(2, MODE_EXACT, {(1, 1): exact(Fraction(3, 2))})
    doc = s.to_json_dict()
    assert doc == {"trunc": 2, "mode": "exact", "coeffs": [[1, 1, "3/2", "0"]]}
