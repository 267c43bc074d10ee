# -*- coding: utf-8 -*-
#
# This file is part of fastfir-polymul.
# Copyright (C) 2025 fastfir-polymul contributors.
#
# fastfir-polymul is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.

"""Randomised property suites run by ``fastfir-polymul verify``.

Every suite draws from its own stream of the run seed, counts the checks it
performs and stops at the first failure, keeping a counterexample that can be
replayed by hand.
"""

import itertools
import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional

import numpy as np

from fastfir_polymul.config import (
    MULTIPLICATION_ENGINES,
    SABER_B_MAX_MAGNITUDE,
    VERIFY_MODULI,
    VERIFY_SIM_LENGTHS,
    VERIFY_STREAM_LENGTHS,
)
from fastfir_polymul.errors import DecompositionError
from fastfir_polymul.fast_mult import MultAlgorithm, multiply
from fastfir_polymul.ring_core import (
    Poly,
    make_params,
    mul_by_x,
    negacyclic_reduce,
    one_poly,
    plain_convolution,
    poly_add,
    poly_neg,
    polyphase_merge,
    polyphase_split,
    random_poly,
    schoolbook_mul,
)
from fastfir_polymul.saber_bench import (
    SaberParams,
    SchemeStep,
    SignedCoeff,
    random_saber_b,
    run_scheme_step,
    saber_a_poly,
    signmag_mac,
    signmag_schoolbook,
    simulate_stream,
)
from fastfir_polymul.systolic_sim import predicted_latency
from fastfir_polymul.utils import canonical_json, make_rng

EXTRA_FACTORIZATIONS = ("fastM:2x3", "fastM:3x2", "fastM:2x2x2")
EXHAUSTIVE_MODULI = (2, 3, 4)
SABER_ENGINES = ("schoolbook", "karatsuba2", "fast2", "fast4", "fastM:2x2x2")


class CheckFailed(Exception):
    """A property did not hold; carries the counterexample."""

    def __init__(self, details: Dict):
        """Keep the JSON-serialisable ``details``."""
        super().__init__(details.get("check"))
        self.details = details


@dataclass
class SuiteResult:
    """Outcome of one suite."""

    suite: str
    checks: int = 0
    failures: int = 0
    counterexample: Optional[Dict] = field(default=None)

    @property
    def passed(self) -> bool:
        """Whether every check held."""
        return self.failures == 0

    def summary(self) -> str:
        """One deterministic line for the console."""
        status = "PASS" if self.passed else "FAIL"
        return f"{status} suite={self.suite} checks={self.checks} failures={self.failures}"


def _expect(result: SuiteResult, holds: bool, **details):
    result.checks += 1
    if not holds:
        raise CheckFailed(details)


def _poly_case(**polys: Poly) -> Dict:
    return {name: list(poly.coeffs) for name, poly in polys.items()}


def engines_for(n: int) -> List[str]:
    """Named engines and extra factorizations able to multiply length ``n``."""
    engines = []
    for name in [*MULTIPLICATION_ENGINES, *EXTRA_FACTORIZATIONS]:
        try:
            MultAlgorithm.parse(name).check_length(n)
        except DecompositionError:
            continue
        engines.append(name)
    return engines


def ring_suite(rng: np.random.Generator, trials: int, result: SuiteResult):
    """Ring axioms of the reference product and the polyphase bijection."""
    for n, q in itertools.product(VERIFY_SIM_LENGTHS, VERIFY_MODULI):
        params = make_params(n, q)
        one = one_poly(params)
        for _ in range(trials):
            A, B, C = (random_poly(params, rng) for _ in range(3))
            case = dict(n=n, q=q, **_poly_case(A=A, B=B, C=C))
            AB = schoolbook_mul(A, B)
            _expect(result, AB == schoolbook_mul(B, A), check="commutativity", **case)
            _expect(
                result,
                schoolbook_mul(AB, C) == schoolbook_mul(A, schoolbook_mul(B, C)),
                check="associativity",
                **case,
            )
            _expect(
                result,
                schoolbook_mul(A, poly_add(B, C)) == poly_add(AB, schoolbook_mul(A, C)),
                check="distributivity",
                **case,
            )
            _expect(result, schoolbook_mul(A, one) == A, check="identity", **case)
            _expect(
                result,
                negacyclic_reduce(plain_convolution(A, B), params) == AB,
                check="convolution-reduction",
                **case,
            )
            wrapped = A
            for _ in range(n):
                wrapped = mul_by_x(wrapped)
            _expect(result, wrapped == poly_neg(A), check="x^n=-1", **case)
            for M in (2, 3, 4):
                if n % M == 0:
                    _expect(
                        result,
                        polyphase_merge(polyphase_split(A, M)) == A,
                        check=f"polyphase-roundtrip-M{M}",
                        **case,
                    )


def oracle_suite(rng: np.random.Generator, trials: int, result: SuiteResult):
    """Every engine against the reference product."""
    for q in EXHAUSTIVE_MODULI:
        params = make_params(2, q)
        polys = [Poly(params, c) for c in itertools.product(range(q), repeat=2)]
        for engine in engines_for(2):
            for A, B in itertools.product(polys, repeat=2):
                _expect(
                    result,
                    multiply(A, B, engine) == schoolbook_mul(A, B),
                    check="exhaustive-oracle",
                    engine=engine,
                    n=2,
                    q=q,
                    **_poly_case(A=A, B=B),
                )
    for n, q in itertools.product(VERIFY_SIM_LENGTHS, VERIFY_MODULI):
        params = make_params(n, q)
        engines = engines_for(n)
        for _ in range(trials):
            A, B = random_poly(params, rng), random_poly(params, rng)
            expected = schoolbook_mul(A, B)
            for engine in engines:
                actual = multiply(A, B, engine)
                _expect(
                    result,
                    actual == expected,
                    check="random-oracle",
                    engine=engine,
                    n=n,
                    q=q,
                    expected=list(expected.coeffs),
                    actual=list(actual.coeffs),
                    **_poly_case(A=A, B=B),
                )


def sim_suite(rng: np.random.Generator, trials: int, result: SuiteResult):
    """Streamed products and latencies of the timed datapaths."""
    streams = max(1, trials // 100)
    for n, q, L in itertools.product(VERIFY_SIM_LENGTHS, VERIFY_MODULI, VERIFY_STREAM_LENGTHS):
        params = make_params(n, q)
        archs = ["fir"] + [f"fast{M}" for M in (2, 3, 4) if n % M == 0]
        for arch, index in itertools.product(archs, range(streams)):
            B = random_poly(params, rng)
            As = [random_poly(params, rng) for _ in range(L)]
            stall_before = None
            if L > 1 and index % 2:
                stall_before = {int(rng.integers(1, L)): int(rng.integers(1, 4))}
            outputs, report = simulate_stream(arch, B, As, stall_before=stall_before)
            case = dict(arch=arch, n=n, q=q, L=L, stall_before=stall_before)
            _expect(
                result,
                outputs == [schoolbook_mul(A, B) for A in As],
                check="stream-products",
                B=list(B.coeffs),
                As=[list(A.coeffs) for A in As],
                **case,
            )
            if stall_before is None:
                predicted = predicted_latency(arch, n, L)
                _expect(
                    result,
                    report.total_latency == predicted,
                    check="latency-law",
                    measured=report.total_latency,
                    predicted=predicted,
                    **case,
                )


def saber_suite(rng: np.random.Generator, trials: int, result: SuiteResult):
    """Sign-magnitude arithmetic, engine independence and step bookkeeping."""
    saber = SaberParams()
    params = saber.ring
    a_limit = (1 << saber.a_magnitude_bits) - 1
    for _ in range(trials):
        acc = int(rng.integers(0, params.q))
        a = int(rng.integers(-a_limit, a_limit + 1))
        b = int(rng.integers(-SABER_B_MAX_MAGNITUDE, SABER_B_MAX_MAGNITUDE + 1))
        actual = signmag_mac(
            acc,
            SignedCoeff.from_int(a, saber.a_magnitude_bits),
            SignedCoeff.from_int(b, saber.b_magnitude_bits),
            params,
        )
        _expect(
            result,
            actual == (acc + a * b) % params.q,
            check="signmag-mac",
            acc=acc,
            a=a,
            b=b,
            actual=actual,
        )

    A = saber_a_poly(rng.integers(-a_limit, a_limit + 1, size=saber.n).tolist(), saber)
    B = random_saber_b(rng, saber)
    expected = signmag_schoolbook(A, B, params)
    for engine in SABER_ENGINES:
        actual = multiply(A.to_poly(params), B.to_poly(params), engine)
        _expect(
            result,
            actual == expected,
            check="saber-engine",
            engine=engine,
            A=A.to_ints(),
            B=B.to_ints(),
        )

    seed = int(rng.integers(0, 1 << 32))
    for step in SchemeStep:
        _, counter = run_scheme_step(step, seed=seed)
        _expect(
            result,
            counter.multiplications == step.mult_count,
            check="step-multiplications",
            step=step.value,
            counted=counter.multiplications,
        )


SUITES: Dict[str, Callable] = {
    "ring": ring_suite,
    "oracle": oracle_suite,
    "sim": sim_suite,
    "saber": saber_suite,
}
"""Suites in the order ``verify --suite all`` runs them."""


def run_suite(name: str, seed: int, trials: int) -> SuiteResult:
    """Run one suite on its own stream of ``seed``."""
    result = SuiteResult(suite=name)
    rng = make_rng(seed, list(SUITES).index(name))
    try:
        SUITES[name](rng, trials, result)
    except CheckFailed as failure:
        result.failures += 1
        result.counterexample = {"suite": name, **failure.details}
        logging.error(
            "Suite {} failed {} after {} checks.".format(
                name, failure.details["check"], result.checks
            )
        )
    else:
        logging.info("Suite {}: {} checks passed.".format(name, result.checks))
    return result


def run_suites(names, seed: int, trials: int) -> List[SuiteResult]:
    """Run ``names`` in order, stopping after the first failing suite."""
    results = []
    for name in names:
        results.append(run_suite(name, seed, trials))
        if not results[-1].passed:
            break
    return results


def counterexample_json(result: SuiteResult) -> str:
    """Canonical JSON of the counterexample of a failed suite."""
    return canonical_json(result.counterexample or {})
