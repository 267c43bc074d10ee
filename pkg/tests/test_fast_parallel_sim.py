# -*- coding: utf-8 -*-
#
# This file is part of fastfir-polymul.
# Copyright (C) 2025 fastfir-polymul contributors.
#
# fastfir-polymul is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.

"""fastfir-polymul fast parallel datapath tests."""

import pytest

from fastfir_polymul.errors import (
    DecompositionError,
    ParameterDomainError,
    StreamUnderrunError,
)
from fastfir_polymul.fast_parallel_sim import build_fast_parallel_sim, run_parallel_stream
from fastfir_polymul.ring_core import make_params, random_poly, schoolbook_mul, zero_poly
from fastfir_polymul.systolic_sim import predicted_latency


def _stream(rng, n, q, factorization, L, stall_before=None):
    params = make_params(n, q)
    B = random_poly(params, rng)
    As = [random_poly(params, rng) for _ in range(L)]
    sim = build_fast_parallel_sim(params, B, factorization)
    outputs, report = run_parallel_stream(sim, As, stall_before=stall_before)
    return outputs, report, [schoolbook_mul(A, B) for A in As]


@pytest.mark.parametrize(
    "factorization", [(2,), (3,), (2, 2), (2, 3), (3, 2), (2, 2, 2), (3, 3), ()]
)
@pytest.mark.parametrize("q", [8, 17, 8192])
def test_products_and_latency(rng, trials, factorization, q):
    """Every datapath streams correct products on time."""
    n = 72
    M = 1
    for factor in factorization:
        M *= factor
    label = "fastM:" + "x".join(str(f) for f in factorization)
    for L in (1, 2, 5):
        for _ in range(max(1, trials // 10)):
            outputs, report, expected = _stream(rng, n, q, factorization, L)
            assert outputs == expected
            assert report.M == M
            assert report.total_latency == n * (L + 1) // M + sum(
                1 if f == 2 else 2 for f in factorization
            )
            assert report.total_latency == predicted_latency(label, n, L)


@pytest.mark.parametrize(
    "n,factorization,L,expected",
    [
        (180, (2,), 1, 181),
        (180, (2,), 9, 901),
        (180, (3,), 1, 122),
        (180, (3,), 9, 602),
        (180, (2, 2), 1, 92),
        (180, (2, 2), 9, 452),
        (256, (2,), 9, 1281),
        (256, (2,), 12, 1665),
        (256, (2,), 15, 2049),
        (256, (2, 2), 9, 642),
        (256, (2, 2), 12, 834),
        (256, (2, 2), 15, 1026),
    ],
)
def test_reference_latencies(rng, n, factorization, L, expected):
    """Latencies of the comparison tables."""
    outputs, report, products = _stream(rng, n, 8192, factorization, L)
    assert outputs == products
    assert report.total_latency == expected


def test_fast2_throughput_doubles(rng):
    """Two lanes emit two coefficients per cycle."""
    _, report, _ = _stream(rng, 64, 8192, (2,), 4)
    assert report.throughput == 2.0
    assert report.response_time == report.total_latency - 4 * 32 + 1


def test_fast2_census():
    """Three half-length arrays and the radix-2 recombination."""
    params = make_params(8, 17)
    census = build_fast_parallel_sim(params, zero_poly(params), (2,)).census
    assert census["mult"] == 12
    assert census["sub_multipliers"] == 3
    assert census["addsub"] == 4
    assert census["wrap_switches"] == 2
    assert census["wrap_delays"] == 1


def test_fast4_census_at_saber_length():
    """Nine quarter-length arrays."""
    params = make_params(256, 8192)
    census = build_fast_parallel_sim(params, zero_poly(params), (2, 2)).census
    assert census["mult"] == 9 * 64
    assert census["sub_multipliers"] == 9
    assert census["addsub"] == 3 * 4 + 4 * 2


def test_fast3_census():
    """Six third-length arrays and the radix-3 recombination."""
    params = make_params(12, 17)
    census = build_fast_parallel_sim(params, zero_poly(params), (3,)).census
    assert census["mult"] == 24
    assert census["sub_multipliers"] == 6
    assert census["addsub"] == 13
    assert census["stream_addsub"] + census["weight_adders"] == 13


@pytest.mark.parametrize(
    "n,factorization", [(8, (2,)), (12, (3,)), (16, (2, 2)), (24, (2, 3))]
)
@pytest.mark.parametrize("L", [2, 3])
def test_back_to_back_utilization(rng, n, factorization, L):
    """Every multiplier works in every steady-state cycle."""
    outputs, report, products = _stream(rng, n, 17, factorization, L)
    assert outputs == products
    assert report.utilization == 1.0


def test_stall_delays_outputs(rng):
    """Clock-gated cycles shift the outputs and keep them correct."""
    outputs, report, products = _stream(rng, 24, 17, (2, 3), 3)
    stalled, stalled_report, stalled_products = _stream(
        rng, 24, 17, (2, 3), 3, stall_before={1: 2}
    )
    assert outputs == products
    assert stalled == stalled_products
    assert stalled_report.total_latency == predicted_latency("fastM:2x3", 24, 3) + 2


def test_rejects_deep_radix3(rng):
    """At most two radix-3 stages."""
    params = make_params(54, 17)
    with pytest.raises(DecompositionError):
        build_fast_parallel_sim(params, zero_poly(params), (3, 3, 3))


def test_rejects_indivisible_length():
    """``M`` must divide ``n``."""
    params = make_params(10, 17)
    with pytest.raises(DecompositionError):
        build_fast_parallel_sim(params, zero_poly(params), (2, 2))


def test_rejects_foreign_weight():
    """The weight polynomial must belong to the ring."""
    params = make_params(8, 17)
    with pytest.raises(ParameterDomainError):
        build_fast_parallel_sim(params, zero_poly(make_params(8, 8)), (2,))


def test_block_rules(rng):
    """Lane count, range, underrun and drain rules."""
    params = make_params(8, 17)
    sim = build_fast_parallel_sim(params, random_poly(params, rng), (2,))
    with pytest.raises(ParameterDomainError):
        sim.step([1, 2, 3])
    with pytest.raises(ParameterDomainError, match="coefficient out of range"):
        sim.step([1, 17])
    with pytest.raises(StreamUnderrunError):
        sim.step(None)
    sim.step([1, 2])
    with pytest.raises(StreamUnderrunError):
        sim.step(None)


def test_trace_header(rng):
    """The trace names the datapath."""
    _, report, _ = _stream(rng, 12, 17, (2, 3), 1)
    assert report.trace.header["kind"] == "fast-parallel"
    assert report.trace.header["factorization"] == [2, 3]
    assert 0 < report.utilization <= 1
