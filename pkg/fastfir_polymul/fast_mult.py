# -*- coding: utf-8 -*-
#
# This file is part of fastfir-polymul.
# Copyright (C) 2025 fastfir-polymul contributors.
#
# fastfir-polymul is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.

"""Functional fast-filtering polynomial multipliers.

None of these functions model time; they compute the same products the
timed datapaths in :mod:`fastfir_polymul.systolic_sim` and
:mod:`fastfir_polymul.fast_parallel_sim` produce, and they count the
arithmetic they perform.
"""

import enum
import logging
import math
import re
from dataclasses import dataclass
from functools import partial
from typing import Callable, List, Optional, Sequence, Tuple, Union

from fastfir_polymul.config import MULTIPLICATION_ENGINES
from fastfir_polymul.errors import DecompositionError, ParameterDomainError
from fastfir_polymul.ring_core import (
    Poly,
    PolyphaseSet,
    check_same_ring,
    make_params,
    mul_by_x,
    negacyclic_reduce,
    plain_convolution,
    poly_add,
    poly_sub,
    polyphase_merge,
    polyphase_split,
    schoolbook_mul,
)

SubMultiplier = Callable[[Poly, Poly], Poly]

SUBPRODUCTS_PER_LEVEL = {2: 3, 3: 6}
"""Sub-products a fast radix-``f`` level needs instead of ``f**2``."""

KARATSUBA_ADDSUB_VARIANTS = ("3n-3", "7n/2-4")


class AlgorithmKind(enum.Enum):
    """Multiplication algorithm families."""

    SCHOOLBOOK = "schoolbook"
    KARATSUBA2 = "karatsuba2"
    FAST2 = "fast2"
    FAST3 = "fast3"
    FAST4 = "fast4"
    FASTM = "fastM"


_ALIAS_FACTORIZATIONS = {
    AlgorithmKind.FAST2: (2,),
    AlgorithmKind.FAST3: (3,),
    AlgorithmKind.FAST4: (2, 2),
}

_FASTM_PATTERN = re.compile(r"^fastm:(?P<factors>[23](x[23])*)?$")


@dataclass(frozen=True)
class MultAlgorithm:
    """A multiplication algorithm and, for fast ones, its factorization.

    ``factorization`` is applied outermost first. Fast2, Fast3 and Fast4 are
    the fast algorithm with factorizations ``(2,)``, ``(3,)`` and ``(2, 2)``.
    """

    kind: AlgorithmKind
    factorization: Tuple[int, ...] = ()

    def __post_init__(self):
        """Normalise the factorization and check its entries."""
        factors = tuple(int(f) for f in self.factorization)
        if self.kind in _ALIAS_FACTORIZATIONS:
            if factors and factors != _ALIAS_FACTORIZATIONS[self.kind]:
                raise ParameterDomainError(
                    f"{self.kind.value} implies factorization "
                    f"{list(_ALIAS_FACTORIZATIONS[self.kind])}, got {list(factors)}."
                )
            factors = _ALIAS_FACTORIZATIONS[self.kind]
        elif self.kind != AlgorithmKind.FASTM and factors:
            raise ParameterDomainError(f"{self.kind.value} takes no factorization.")
        for factor in factors:
            if factor not in SUBPRODUCTS_PER_LEVEL:
                raise ParameterDomainError(
                    f"Factorization entries must be 2 or 3, got {factor}."
                )
        object.__setattr__(self, "factorization", factors)

    @classmethod
    def fast(cls, factorization: Sequence[int]) -> "MultAlgorithm":
        """Return the fast algorithm for ``factorization``."""
        return cls(AlgorithmKind.FASTM, tuple(factorization))

    @classmethod
    def parse(cls, text: str) -> "MultAlgorithm":
        """Parse an algorithm name.

        Accepts ``schoolbook``, ``fir`` (the systolic array computes the
        schoolbook product), ``karatsuba2``, ``fast2``, ``fast3``, ``fast4``
        and ``fastM:2x3`` style factorizations.
        """
        name = text.strip().lower()
        if name == "fir":
            return cls(AlgorithmKind.SCHOOLBOOK)
        match = _FASTM_PATTERN.match(name)
        if match:
            factors = match.group("factors")
            return cls.fast([int(f) for f in factors.split("x")] if factors else [])
        for kind in AlgorithmKind:
            if kind.value.lower() == name and kind != AlgorithmKind.FASTM:
                return cls(kind)
        raise ParameterDomainError(f"Unknown multiplication algorithm {text!r}.")

    @property
    def M(self) -> int:
        """Number of polyphase lanes of the outermost decomposition."""
        return math.prod(self.factorization)

    @property
    def is_fast(self) -> bool:
        """Whether the algorithm is a fast-filtering decomposition."""
        return self.kind in _ALIAS_FACTORIZATIONS or self.kind == AlgorithmKind.FASTM

    @property
    def label(self) -> str:
        """Printable name, ``fastM:2x3`` style for explicit factorizations."""
        if self.kind == AlgorithmKind.FASTM:
            return "fastM:" + "x".join(str(f) for f in self.factorization)
        return self.kind.value

    def check_length(self, n: int):
        """Raise :class:`DecompositionError` when the algorithm cannot handle ``n``."""
        if self.kind == AlgorithmKind.KARATSUBA2 and n % 2:
            raise DecompositionError(f"karatsuba2 needs an even length, got {n}.")
        if self.is_fast and n % self.M:
            raise DecompositionError(
                f"{self.label} needs a length divisible by {self.M}, got {n}."
            )


@dataclass(frozen=True)
class OpCount:
    """Arithmetic cost of one multiplication."""

    coeff_mults: int
    postproc_addsubs: int


@dataclass
class OpTally:
    """Mutable counter threaded through an instrumented multiplication.

    ``coeff_mults`` counts coefficient products at the leaves,
    ``preproc_adds`` the operand additions in front of the sub-multipliers
    and ``postproc_addsubs`` the modular additions and subtractions that
    recombine sub-products. ``shifts`` and ``shift_adds`` count the
    shift-and-add steps replacing coefficient products whose small operand
    is at most four in magnitude.
    """

    coeff_mults: int = 0
    preproc_adds: int = 0
    postproc_addsubs: int = 0
    shifts: int = 0
    shift_adds: int = 0

    def as_opcount(self) -> OpCount:
        """Freeze the multiplication and post-processing counters."""
        return OpCount(self.coeff_mults, self.postproc_addsubs)


def leaf_mul(A: Poly, B: Poly, tally: Optional[OpTally] = None) -> Poly:
    """Schoolbook product, counting ``n**2`` coefficient multiplications."""
    if tally is not None:
        tally.coeff_mults += A.params.n**2
    return schoolbook_mul(A, B)


def _pre_add(tally, *polys: Poly) -> Poly:
    result = polys[0]
    for poly in polys[1:]:
        result = poly_add(result, poly)
        if tally is not None:
            tally.preproc_adds += poly.params.n
    return result


def _post_add(tally, X: Poly, Y: Poly) -> Poly:
    if tally is not None:
        tally.postproc_addsubs += X.params.n
    return poly_add(X, Y)


def _post_sub(tally, X: Poly, Y: Poly) -> Poly:
    if tally is not None:
        tally.postproc_addsubs += X.params.n
    return poly_sub(X, Y)


def _sub_multiplier(sub_multiplier, tally) -> SubMultiplier:
    if sub_multiplier is None:
        return partial(leaf_mul, tally=tally)
    return sub_multiplier


def karatsuba2_terms(A: Poly, B: Poly) -> Tuple[List[int], ...]:
    """Return the plain half-length products ``(C0, C1, C2, C3)``.

    ``C0 = A0*B0``, ``C1 = (A0+A1)(B0+B1)``, ``C2 = A1*B1`` with ``A0`` the
    low and ``A1`` the high half, and ``C3 = C1 - C0 - C2``. Coefficients are
    integers of length ``n-1``; the operand sums are reduced mod ``q``.

    :raises DecompositionError: When ``n`` is odd.
    """
    params = check_same_ring(A, B)
    if params.n % 2:
        raise DecompositionError(f"karatsuba2 needs an even length, got {params.n}.")
    half = params.n // 2
    half_params = make_params(half, params.q)
    a0, a1 = Poly(half_params, A.coeffs[:half]), Poly(half_params, A.coeffs[half:])
    b0, b1 = Poly(half_params, B.coeffs[:half]), Poly(half_params, B.coeffs[half:])
    c0 = plain_convolution(a0, b0)
    c1 = plain_convolution(poly_add(a0, a1), poly_add(b0, b1))
    c2 = plain_convolution(a1, b1)
    c3 = [x1 - x0 - x2 for x0, x1, x2 in zip(c0, c1, c2)]
    return c0, c1, c2, c3


def karatsuba2_mul(A: Poly, B: Poly, tally: Optional[OpTally] = None) -> Poly:
    """Single-level Karatsuba product reduced mod ``(x^n+1, q)``.

    :raises DecompositionError: When ``n`` is odd.
    """
    c0, _, c2, c3 = karatsuba2_terms(A, B)
    n = A.params.n
    half = n // 2
    full = [0] * (2 * n - 1)
    for index, value in enumerate(c0):
        full[index] += value
    for index, value in enumerate(c3):
        full[index + half] += value
    for index, value in enumerate(c2):
        full[index + n] += value
    if tally is not None:
        tally.coeff_mults += 3 * half**2
        tally.preproc_adds += 2 * half
        # C3 subtractions, the two overlapping additions and the wrap fold
        tally.postproc_addsubs += 2 * (n - 1) + 2 * (half - 1) + (n - 1)
    return negacyclic_reduce(full, A.params)


def fast2_parts(
    A: Poly,
    B: Poly,
    sub_multiplier: Optional[SubMultiplier] = None,
    tally: Optional[OpTally] = None,
) -> Tuple[Poly, Poly]:
    """Return the even and odd polyphase parts ``(P0, P1)`` of ``A*B``.

    With ``U = A0*B0``, ``V = A1*B1`` and ``W = (A0+A1)(B0+B1)`` taken in the
    half-length ring, ``P1 = W - (U + V)`` and ``P0 = U + V*y``, where the
    shift by ``y`` gives ``p0[0] = u[0] - v[n/2-1]``.

    :raises DecompositionError: When ``n`` is odd.
    """
    check_same_ring(A, B)
    if A.params.n % 2:
        raise DecompositionError(f"fast2 needs an even length, got {A.params.n}.")
    multiply_sub = _sub_multiplier(sub_multiplier, tally)
    a0, a1 = polyphase_split(A, 2).parts
    b0, b1 = polyphase_split(B, 2).parts
    u = multiply_sub(a0, b0)
    v = multiply_sub(a1, b1)
    w = multiply_sub(_pre_add(tally, a0, a1), _pre_add(tally, b0, b1))
    p1 = _post_sub(tally, w, _post_add(tally, u, v))
    p0 = _post_add(tally, u, mul_by_x(v))
    return p0, p1


def fast2_mul(
    A: Poly,
    B: Poly,
    sub_multiplier: Optional[SubMultiplier] = None,
    tally: Optional[OpTally] = None,
) -> Poly:
    """Fast two-parallel product: three half-length sub-products.

    :param sub_multiplier: Multiplier of the half-length sub-products,
        schoolbook by default.
    :raises DecompositionError: When ``n`` is odd.
    """
    p0, p1 = fast2_parts(A, B, sub_multiplier, tally)
    return polyphase_merge(PolyphaseSet(p0.params, 2, (p0, p1)))


def fast3_mul(
    A: Poly,
    B: Poly,
    sub_multiplier: Optional[SubMultiplier] = None,
    tally: Optional[OpTally] = None,
) -> Poly:
    """Fast three-parallel product: six third-length sub-products.

    :raises DecompositionError: When 3 does not divide ``n``.
    """
    check_same_ring(A, B)
    if A.params.n % 3:
        raise DecompositionError(f"fast3 needs a length divisible by 3, got {A.params.n}.")
    multiply_sub = _sub_multiplier(sub_multiplier, tally)
    a0, a1, a2 = polyphase_split(A, 3).parts
    b0, b1, b2 = polyphase_split(B, 3).parts
    c0 = multiply_sub(a0, b0)
    c1 = multiply_sub(a1, b1)
    c2 = multiply_sub(a2, b2)
    c3 = multiply_sub(_pre_add(tally, a0, a1), _pre_add(tally, b0, b1))
    c4 = multiply_sub(_pre_add(tally, a1, a2), _pre_add(tally, b1, b2))
    c5 = multiply_sub(_pre_add(tally, a0, a1, a2), _pre_add(tally, b0, b1, b2))
    d0 = _post_sub(tally, c3, c1)
    d1 = _post_sub(tally, c4, c1)
    d2 = _post_sub(tally, c0, mul_by_x(c2))
    d3 = c5
    p0 = _post_add(tally, d2, mul_by_x(d1))
    p1 = _post_sub(tally, d0, d2)
    p2 = _post_sub(tally, _post_sub(tally, d3, d0), d1)
    return polyphase_merge(PolyphaseSet(p0.params, 3, (p0, p1, p2)))


def fast4_mul(
    A: Poly,
    B: Poly,
    sub_multiplier: Optional[SubMultiplier] = None,
    tally: Optional[OpTally] = None,
) -> Poly:
    """Fast four-parallel product built from three fast two-parallel products.

    ``(C0, C1)``, ``(C2, C3)`` and ``(C4, C5)`` are the polyphase parts of
    ``A0*B0``, ``(A0+A1)(B0+B1)`` and ``A1*B1`` in the half-length ring. Then
    ``P0 = C0 + C5*y``, ``P1 = C2 - C0 - C4``, ``P2 = C1 + C4`` and
    ``P3 = C3 - C1 - C5``.

    :raises DecompositionError: When 4 does not divide ``n``.
    """
    check_same_ring(A, B)
    if A.params.n % 4:
        raise DecompositionError(f"fast4 needs a length divisible by 4, got {A.params.n}.")
    a0, a1 = polyphase_split(A, 2).parts
    b0, b1 = polyphase_split(B, 2).parts
    c0, c1 = fast2_parts(a0, b0, sub_multiplier, tally)
    c2, c3 = fast2_parts(_pre_add(tally, a0, a1), _pre_add(tally, b0, b1), sub_multiplier, tally)
    c4, c5 = fast2_parts(a1, b1, sub_multiplier, tally)
    p0 = _post_add(tally, c0, mul_by_x(c5))
    p1 = _post_sub(tally, _post_sub(tally, c2, c0), c4)
    p2 = _post_add(tally, c1, c4)
    p3 = _post_sub(tally, _post_sub(tally, c3, c1), c5)
    return polyphase_merge(PolyphaseSet(p0.params, 4, (p0, p1, p2, p3)))


def fastM_mul(
    A: Poly,
    B: Poly,
    factorization: Sequence[int],
    tally: Optional[OpTally] = None,
) -> Poly:
    """Iterate fast two- and three-parallel levels, outermost factor first.

    The sub-products of the innermost level are schoolbook products of
    length ``n/M``; an empty factorization is the schoolbook product itself.

    :raises DecompositionError: When the product of the factors does not
        divide ``n``.
    """
    algorithm = MultAlgorithm.fast(factorization)
    algorithm.check_length(A.params.n)
    return _fastM(A, B, algorithm.factorization, tally)


def _fastM(A: Poly, B: Poly, factors: Tuple[int, ...], tally) -> Poly:
    if not factors:
        return leaf_mul(A, B, tally)
    inner = partial(_fastM, factors=factors[1:], tally=tally)
    level = fast2_mul if factors[0] == 2 else fast3_mul
    return level(A, B, sub_multiplier=inner, tally=tally)


def count_coeff_mults(alg: Union[MultAlgorithm, str], n: int) -> int:
    """Coefficient multiplications needed by ``alg`` at length ``n``.

    :raises DecompositionError: When ``alg`` cannot handle ``n``.
    """
    algorithm = _as_algorithm(alg)
    algorithm.check_length(n)
    if algorithm.kind == AlgorithmKind.SCHOOLBOOK:
        return n * n
    if algorithm.kind == AlgorithmKind.KARATSUBA2:
        return 3 * (n // 2) ** 2
    subproducts = math.prod(SUBPRODUCTS_PER_LEVEL[f] for f in algorithm.factorization)
    return subproducts * (n // algorithm.M) ** 2


def count_postproc_addsubs(
    alg: Union[MultAlgorithm, str], n: int, variant: str = "3n-3"
) -> int:
    """Post-processing modular additions/subtractions in closed form.

    Only the fast two-parallel algorithm (``3n/2``) and single-level
    Karatsuba (``3n-3``, or ``7n/2-4`` with ``variant="7n/2-4"``) have one.

    :raises ParameterDomainError: For any other algorithm or an unknown variant.
    :raises DecompositionError: When ``n`` is odd.
    """
    algorithm = _as_algorithm(alg)
    if algorithm.kind == AlgorithmKind.KARATSUBA2:
        if variant not in KARATSUBA_ADDSUB_VARIANTS:
            raise ParameterDomainError(
                f"Unknown Karatsuba count variant {variant!r}, "
                f"expected one of {KARATSUBA_ADDSUB_VARIANTS}."
            )
        algorithm.check_length(n)
        return 3 * n - 3 if variant == "3n-3" else 7 * n // 2 - 4
    if algorithm.factorization == (2,):
        algorithm.check_length(n)
        return 3 * n // 2
    raise ParameterDomainError(
        f"No closed-form post-processing count for {algorithm.label}; "
        "use an OpTally to measure it."
    )


def measure_ops(alg: Union[MultAlgorithm, str], A: Poly, B: Poly) -> OpTally:
    """Run one instrumented multiplication and return its tally."""
    tally = OpTally()
    multiply(A, B, alg, tally=tally)
    return tally


def _as_algorithm(alg: Union[MultAlgorithm, str]) -> MultAlgorithm:
    if isinstance(alg, MultAlgorithm):
        return alg
    return MultAlgorithm.parse(alg)


def multiply(
    A: Poly,
    B: Poly,
    alg: Union[MultAlgorithm, str] = "schoolbook",
    tally: Optional[OpTally] = None,
) -> Poly:
    """Multiply with the requested algorithm.

    Named engines are looked up in ``MULTIPLICATION_ENGINES``; explicit
    factorizations go through :func:`fastM_mul`.

    :raises DecompositionError: When ``alg`` cannot handle the length.
    """
    algorithm = _as_algorithm(alg)
    algorithm.check_length(A.params.n)
    logging.debug(
        "Multiplying length-{} polynomials with {}.".format(A.params.n, algorithm.label)
    )
    if algorithm.kind == AlgorithmKind.FASTM:
        return fastM_mul(A, B, algorithm.factorization, tally=tally)
    engine = MULTIPLICATION_ENGINES[algorithm.kind.value]()
    return engine(A, B, tally=tally)
