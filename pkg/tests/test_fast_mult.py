# -*- coding: utf-8 -*-
#
# This file is part of fastfir-polymul.
# Copyright (C) 2025 fastfir-polymul contributors.
#
# fastfir-polymul is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.

"""fastfir-polymul functional multiplier tests."""

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fastfir_polymul.errors import DecompositionError, ParameterDomainError
from fastfir_polymul.fast_mult import (
    AlgorithmKind,
    MultAlgorithm,
    OpTally,
    count_coeff_mults,
    count_postproc_addsubs,
    fast2_mul,
    fast2_parts,
    fast3_mul,
    fast4_mul,
    fastM_mul,
    karatsuba2_mul,
    karatsuba2_terms,
    measure_ops,
    multiply,
)
from fastfir_polymul.ring_core import (
    Poly,
    make_params,
    monomial,
    random_poly,
    schoolbook_mul,
)


@st.composite
def operand_pairs(draw, divisor):
    """Draw two elements of a ring whose length ``divisor`` divides."""
    n = divisor * draw(st.integers(1, 6))
    q = draw(st.sampled_from([2, 5, 8, 17, 8192, 3329]))
    params = make_params(n, q)
    coeffs = st.lists(st.integers(0, q - 1), min_size=n, max_size=n)
    return Poly(params, draw(coeffs)), Poly(params, draw(coeffs))


@pytest.mark.parametrize(
    "text,kind,factorization",
    [
        ("schoolbook", AlgorithmKind.SCHOOLBOOK, ()),
        ("FIR", AlgorithmKind.SCHOOLBOOK, ()),
        ("karatsuba2", AlgorithmKind.KARATSUBA2, ()),
        ("Fast2", AlgorithmKind.FAST2, (2,)),
        ("fast3", AlgorithmKind.FAST3, (3,)),
        ("fast4", AlgorithmKind.FAST4, (2, 2)),
        ("fastM:2x3", AlgorithmKind.FASTM, (2, 3)),
        ("fastM:", AlgorithmKind.FASTM, ()),
    ],
)
def test_parse(text, kind, factorization):
    """Engine names and explicit factorizations."""
    algorithm = MultAlgorithm.parse(text)
    assert algorithm.kind == kind
    assert algorithm.factorization == factorization


@pytest.mark.parametrize("text", ["fast5", "fastM:2x5", "toom3", ""])
def test_parse_rejects_unknown(text):
    """Only factors 2 and 3 are supported."""
    with pytest.raises(ParameterDomainError):
        MultAlgorithm.parse(text)


def test_fast_rejects_other_factors():
    """Factorization entries other than 2 and 3 are rejected."""
    with pytest.raises(ParameterDomainError):
        MultAlgorithm.fast([2, 4])


@settings(max_examples=80, deadline=None)
@given(operand_pairs(2))
def test_karatsuba2_matches_schoolbook(pair):
    """Single-level Karatsuba."""
    A, B = pair
    assert karatsuba2_mul(A, B) == schoolbook_mul(A, B)


def test_karatsuba2_terms_identity(rng):
    """``C3 = C1 - C0 - C2`` over the integers."""
    params = make_params(8, 17)
    A, B = random_poly(params, rng), random_poly(params, rng)
    c0, c1, c2, c3 = karatsuba2_terms(A, B)
    assert len(c0) == len(c1) == len(c2) == 7
    assert c3 == [x1 - x0 - x2 for x0, x1, x2 in zip(c0, c1, c2)]


@settings(max_examples=80, deadline=None)
@given(operand_pairs(2))
def test_fast2_matches_schoolbook(pair):
    """Fast two-parallel product."""
    A, B = pair
    assert fast2_mul(A, B) == schoolbook_mul(A, B)


@settings(max_examples=80, deadline=None)
@given(operand_pairs(3))
def test_fast3_matches_schoolbook(pair):
    """Fast three-parallel product."""
    A, B = pair
    assert fast3_mul(A, B) == schoolbook_mul(A, B)


@settings(max_examples=80, deadline=None)
@given(operand_pairs(4))
def test_fast4_matches_schoolbook(pair):
    """Fast four-parallel product."""
    A, B = pair
    assert fast4_mul(A, B) == schoolbook_mul(A, B)


@settings(max_examples=40, deadline=None)
@given(operand_pairs(6), st.sampled_from([(2, 3), (3, 2), ()]))
def test_fastM_matches_schoolbook(pair, factorization):
    """Iterated levels in either order, and the empty factorization."""
    A, B = pair
    assert fastM_mul(A, B, factorization) == schoolbook_mul(A, B)


@pytest.mark.parametrize("q", [2, 3, 4])
@pytest.mark.parametrize("engine", ["karatsuba2", "fast2"])
def test_length_two_exhaustive(engine, q):
    """Every operand pair of length two."""
    params = make_params(2, q)
    polys = [Poly(params, c) for c in itertools.product(range(q), repeat=2)]
    for A, B in itertools.product(polys, repeat=2):
        assert multiply(A, B, engine) == schoolbook_mul(A, B)


def test_fast2_parts_wrap(small_ring, golden_pair):
    """``P0 = U + V*y`` with the negacyclic wrap in the half ring."""
    A, B, P = golden_pair
    p0, p1 = fast2_parts(A, B)
    assert p0.coeffs == P.coeffs[0::2]
    assert p1.coeffs == P.coeffs[1::2]


def test_golden_product_every_engine(golden_pair):
    """The hand-traced product through every engine valid at length 4."""
    A, B, P = golden_pair
    for engine in ["schoolbook", "karatsuba2", "fast2", "fast4", "fastM:2x2"]:
        assert multiply(A, B, engine) == P


def test_sub_multiplier_is_pluggable(rng):
    """The half-length products can use another engine."""
    params = make_params(12, 8192)
    A, B = random_poly(params, rng), random_poly(params, rng)
    assert fast2_mul(A, B, sub_multiplier=fast3_mul) == schoolbook_mul(A, B)


@pytest.mark.parametrize(
    "engine,n",
    [("karatsuba2", 5), ("fast2", 7), ("fast3", 8), ("fast4", 6), ("fastM:2x3", 8)],
)
def test_rejects_indivisible_length(rng, engine, n):
    """The decomposition must divide the length."""
    params = make_params(n, 17)
    A, B = random_poly(params, rng), random_poly(params, rng)
    with pytest.raises(DecompositionError):
        multiply(A, B, engine)


@pytest.mark.parametrize(
    "engine,n,expected",
    [
        ("schoolbook", 256, 65536),
        ("karatsuba2", 256, 49152),
        ("fast2", 256, 49152),
        ("fast4", 256, 36864),
        ("fast3", 180, 21600),
        ("fastM:2x3", 12, 72),
    ],
)
def test_count_coeff_mults(engine, n, expected):
    """Closed-form coefficient multiplication counts."""
    assert count_coeff_mults(engine, n) == expected


@pytest.mark.parametrize("engine,n", [("fast2", 16), ("fast3", 12), ("fast4", 16), ("karatsuba2", 8)])
def test_measured_mults_match_closed_form(rng, engine, n):
    """The instrumented tally agrees with the closed form."""
    params = make_params(n, 8192)
    tally = measure_ops(engine, random_poly(params, rng), random_poly(params, rng))
    assert tally.coeff_mults == count_coeff_mults(engine, n)


def test_fast2_postproc_is_three_halves_n(rng):
    """Fast2 recombines its three products with ``3n/2`` additions."""
    params = make_params(256, 8192)
    tally = measure_ops("fast2", random_poly(params, rng), random_poly(params, rng))
    assert tally.postproc_addsubs == count_postproc_addsubs("fast2", 256) == 384
    assert tally.as_opcount().coeff_mults == 49152


def test_karatsuba_postproc_variants():
    """Both published Karatsuba post-processing counts."""
    assert count_postproc_addsubs("karatsuba2", 256) == 765
    assert count_postproc_addsubs("karatsuba2", 256, variant="7n/2-4") == 892
    with pytest.raises(ParameterDomainError):
        count_postproc_addsubs("karatsuba2", 256, variant="4n")


def test_postproc_closed_form_only_for_two_parallel():
    """Other fast algorithms are measured with a tally instead."""
    with pytest.raises(ParameterDomainError):
        count_postproc_addsubs("fast4", 256)


def test_fast2_beats_karatsuba_postproc():
    """``3n/2`` against ``3n-3`` at every even length of interest."""
    for n in (4, 64, 180, 256):
        assert count_postproc_addsubs("fast2", n) < count_postproc_addsubs("karatsuba2", n)


def test_tally_accumulates(rng):
    """A tally threaded through two products sums them."""
    params = make_params(8, 17)
    tally = OpTally()
    A, B = random_poly(params, rng), random_poly(params, rng)
    multiply(A, B, "fast2", tally=tally)
    multiply(A, B, "fast2", tally=tally)
    assert tally.coeff_mults == 2 * 48


@pytest.mark.parametrize(
    "engine,n,q,a,b,expected",
    [
        ("fast2", 2, 3, [0, 1], [0, 1], [2, 0]),
        ("fast3", 3, 5, [0, 0, 1], [0, 0, 1], [0, 4, 0]),
        ("fast4", 4, 7, [0, 0, 0, 1], [0, 0, 0, 1], [0, 0, 6, 0]),
        ("fastM:2x2", 4, 7, [0, 0, 0, 1], [0, 0, 0, 1], [0, 0, 6, 0]),
        ("fastM:3x2", 6, 5, [0] * 5 + [1], [0] * 5 + [1], [0, 0, 0, 0, 4, 0]),
    ],
)
def test_single_coefficient_sub_rings(engine, n, q, a, b, expected):
    """Sub-products of length one still wrap with ``y = -1``."""
    params = make_params(n, q)
    A, B = Poly(params, a), Poly(params, b)
    assert multiply(A, B, engine).coeffs == tuple(expected)
    assert schoolbook_mul(A, B).coeffs == tuple(expected)


@pytest.mark.parametrize(
    "engine,n",
    [
        ("schoolbook", 4),
        ("karatsuba2", 4),
        ("fast2", 2),
        ("fast2", 8),
        ("fast3", 3),
        ("fast3", 12),
        ("fast4", 4),
        ("fast4", 16),
        ("fastM:2x3", 6),
        ("fastM:3x2", 12),
        ("fastM:2x2x2", 8),
    ],
)
@pytest.mark.parametrize("q", [7, 8192])
def test_wrap_term(engine, n, q):
    """``x^(n-1) * x`` leaves ``q - 1`` in the constant coefficient."""
    params = make_params(n, q)
    product = multiply(monomial(params, n - 1), monomial(params, 1), engine)
    assert product.coeffs == (q - 1,) + (0,) * (n - 1)


@pytest.mark.parametrize(
    "factorization,engine,n", [((2,), "fast2", 12), ((3,), "fast3", 12), ((2, 2), "fast4", 16)]
)
def test_fastM_matches_named_engines(rng, factorization, engine, n):
    """One and two iterated levels equal the named engines output for output."""
    params = make_params(n, 8192)
    for _ in range(20):
        A, B = random_poly(params, rng), random_poly(params, rng)
        assert fastM_mul(A, B, factorization) == multiply(A, B, engine)


@pytest.mark.parametrize(
    "factorization", [(2,), (3,), (2, 2), (2, 3), (3, 2), (2, 2, 2), (3, 3), (2, 2, 3)]
)
def test_fast_count_below_schoolbook(factorization):
    """Every fast decomposition needs strictly fewer products."""
    M = 1
    for factor in factorization:
        M *= factor
    for n in (2 * M, 4 * M, 10 * M):
        fast = count_coeff_mults(MultAlgorithm.fast(factorization), n)
        assert fast < count_coeff_mults("schoolbook", n)
    assert count_coeff_mults("karatsuba2", 2) < count_coeff_mults("schoolbook", 2)


def test_fast2_postproc_smallest_length():
    """Three additions at ``n = 2``."""
    assert count_postproc_addsubs("fast2", 2) == 3
