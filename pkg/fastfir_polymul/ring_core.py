# -*- coding: utf-8 -*-
#
# This file is part of fastfir-polymul.
# Copyright (C) 2025 fastfir-polymul contributors.
#
# fastfir-polymul is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.

"""Negacyclic polynomial ring ``Z_q[x]/(x^n+1)``.

Every value defined here is immutable; every operation is a pure function.
Coefficients are stored little-endian by degree (``coeffs[0]`` is the constant
term) as canonical residues in ``[0, q)``.
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, List, Sequence, Tuple

import numpy as np

from fastfir_polymul.errors import DecompositionError, ParameterDomainError
from fastfir_polymul.utils import ceil_log2

ACCUMULATOR_BITS = 63
"""Bits available in a signed 64-bit accumulator."""


@dataclass(frozen=True)
class RingParams:
    """Descriptor of the ring ``Z_q[x]/(x^n+1)``."""

    n: int
    q: int
    epsilon: int
    q_is_power_of_two: bool

    @property
    def mask(self) -> int:
        """Low-``epsilon``-bit mask, only meaningful for power-of-two moduli."""
        return self.q - 1

    @property
    def accumulator_bits(self) -> int:
        """Width needed to accumulate ``n`` products of two residues, sign included."""
        return 2 * self.epsilon + ceil_log2(self.n) + 1

    @property
    def dtype(self):
        """Numpy dtype wide enough for un-reduced accumulation."""
        if self.accumulator_bits <= ACCUMULATOR_BITS:
            return np.int64
        return object

    def reduce(self, value):
        """Canonicalise an integer or an integer array into ``[0, q)``.

        Power-of-two moduli keep the ``epsilon`` low bits, which is also
        correct for negative two's-complement values.
        """
        if self.q_is_power_of_two:
            return value & self.mask
        return value % self.q

    def reduce_generic(self, value):
        """Canonicalise with the remainder operation whatever the modulus."""
        return value % self.q


def make_params(n: int, q: int) -> RingParams:
    """Build the descriptor of ``Z_q[x]/(x^n+1)``.

    :param n: Polynomial length, at least 1.
    :param q: Coefficient modulus, at least 2.
    :raises ParameterDomainError: When ``n`` or ``q`` is out of range.
    """
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 1:
        raise ParameterDomainError(f"Polynomial length must be >= 1, got {n!r}.")
    if isinstance(q, bool) or not isinstance(q, (int, np.integer)) or q < 2:
        raise ParameterDomainError(f"Modulus must be >= 2, got {q!r}.")
    n, q = int(n), int(q)
    epsilon = ceil_log2(q)
    return RingParams(n=n, q=q, epsilon=epsilon, q_is_power_of_two=(1 << epsilon) == q)


@dataclass(frozen=True)
class Poly:
    """Element of the ring, coefficients in canonical form."""

    params: RingParams
    coeffs: Tuple[int, ...]

    def __post_init__(self):
        """Validate length and canonical form."""
        coeffs = tuple(int(c) for c in self.coeffs)
        if len(coeffs) != self.params.n:
            raise ParameterDomainError(
                f"Expected {self.params.n} coefficients, got {len(coeffs)}."
            )
        for index, coeff in enumerate(coeffs):
            if not 0 <= coeff < self.params.q:
                raise ParameterDomainError(
                    f"coefficient out of range: coeffs[{index}] = {coeff} "
                    f"is not in [0, {self.params.q})."
                )
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def from_ints(cls, params: RingParams, values: Iterable[int]) -> "Poly":
        """Build a polynomial from arbitrary integers, reducing them mod ``q``."""
        return cls(params, tuple(params.reduce(int(v)) for v in values))

    @classmethod
    def from_array(cls, params: RingParams, values: np.ndarray) -> "Poly":
        """Build a polynomial from an integer array, reducing it mod ``q``."""
        return cls(params, tuple(int(v) for v in params.reduce(values)))

    def as_array(self) -> np.ndarray:
        """Return the coefficients as an accumulator-wide numpy array."""
        return np.array(self.coeffs, dtype=self.params.dtype)

    def __len__(self):
        """Return ``n``."""
        return self.params.n


@dataclass(frozen=True)
class PolyphaseSet:
    """Polyphase components of a polynomial for a decomposition factor ``M``.

    Part ``r`` holds the coefficients whose index is ``r`` modulo ``M``.
    """

    params: RingParams
    M: int
    parts: Tuple[Poly, ...]

    def __post_init__(self):
        """Check the number and the shape of the parts."""
        parts = tuple(self.parts)
        if len(parts) != self.M:
            raise DecompositionError(f"Expected {self.M} parts, got {len(parts)}.")
        for index, part in enumerate(parts):
            if part.params.n != self.params.n or part.params.q != self.params.q:
                raise DecompositionError(
                    f"Part {index} has length {part.params.n} modulo {part.params.q}, "
                    f"expected length {self.params.n} modulo {self.params.q}."
                )
        object.__setattr__(self, "parts", parts)


def check_same_ring(*polys: Poly) -> RingParams:
    """Return the common ring of ``polys``.

    :raises ParameterDomainError: When the polynomials live in different rings.
    """
    params = polys[0].params
    for poly in polys[1:]:
        if poly.params != params:
            raise ParameterDomainError(
                f"Ring mismatch: n={poly.params.n}, q={poly.params.q} "
                f"against n={params.n}, q={params.q}."
            )
    return params


def zero_poly(params: RingParams) -> Poly:
    """Return the additive identity."""
    return Poly(params, (0,) * params.n)


def one_poly(params: RingParams) -> Poly:
    """Return the multiplicative identity."""
    return monomial(params, 0)


def monomial(params: RingParams, degree: int, coeff: int = 1) -> Poly:
    """Return ``coeff * x**degree`` for ``0 <= degree < n``."""
    if not 0 <= degree < params.n:
        raise ParameterDomainError(f"Degree {degree} is not in [0, {params.n}).")
    coeffs = [0] * params.n
    coeffs[degree] = params.reduce(coeff)
    return Poly(params, coeffs)


def random_poly(params: RingParams, rng: np.random.Generator) -> Poly:
    """Draw a polynomial with uniformly distributed canonical coefficients."""
    return Poly(params, rng.integers(0, params.q, size=params.n).tolist())


def poly_add(A: Poly, B: Poly) -> Poly:
    """Coefficient-wise modular addition."""
    params = check_same_ring(A, B)
    return Poly.from_array(params, A.as_array() + B.as_array())


def poly_sub(A: Poly, B: Poly) -> Poly:
    """Coefficient-wise modular subtraction."""
    params = check_same_ring(A, B)
    return Poly.from_array(params, A.as_array() - B.as_array())


def poly_neg(A: Poly) -> Poly:
    """Coefficient-wise modular negation."""
    return Poly.from_array(A.params, -A.as_array())


def negacyclic_shift(values: np.ndarray, steps: int = 1) -> np.ndarray:
    """Multiply a coefficient array by ``x**steps`` modulo ``x^n+1``.

    Coefficients rotate up and the ones wrapping past degree ``n-1`` change
    sign. Every full turn multiplies by ``x^n = -1``, so a length-one ring
    negates on each step. The result is not reduced.
    """
    wraps, steps = divmod(steps, len(values))
    shifted = np.roll(values, steps)
    shifted[:steps] = -shifted[:steps]
    if wraps % 2:
        shifted = -shifted
    return shifted


def mul_by_x(A: Poly) -> Poly:
    """Return ``A * x`` in the ring."""
    return Poly.from_array(A.params, negacyclic_shift(A.as_array()))


@lru_cache(maxsize=None)
def _negacyclic_pattern(n: int) -> Tuple[np.ndarray, np.ndarray]:
    """Index and sign matrices such that ``p = (sign * a[index]) @ b``."""
    k = np.arange(n).reshape(-1, 1)
    j = np.arange(n).reshape(1, -1)
    index = (k - j) % n
    sign = np.where(j > k, -1, 1)
    index.setflags(write=False)
    sign.setflags(write=False)
    return index, sign


def schoolbook_mul(A: Poly, B: Poly) -> Poly:
    """Multiply two polynomials modulo ``(x^n+1, q)``.

    ``p[k]`` sums ``(-1)**((i+j)//n) * a[i] * b[j]`` over every ``i + j``
    congruent to ``k`` modulo ``n``. This is the reference every other
    multiplier is checked against.

    :raises ParameterDomainError: When ``A`` and ``B`` live in different rings.
    """
    params = check_same_ring(A, B)
    index, sign = _negacyclic_pattern(params.n)
    a = A.as_array()
    b = B.as_array()
    products = (sign.astype(params.dtype) * a[index]) @ b
    return Poly.from_array(params, products)


def plain_convolution(A: Poly, B: Poly) -> List[int]:
    """Full ``2n-1`` coefficient product of ``A`` and ``B`` over the integers."""
    check_same_ring(A, B)
    return [int(c) for c in np.convolve(A.as_array(), B.as_array())]


def negacyclic_reduce(full: Sequence[int], params: RingParams) -> Poly:
    """Fold a plain product back into the ring.

    ``p[k] = full[k] - full[k+n]``, absent entries counting as zero.

    :raises ParameterDomainError: When ``full`` is empty or longer than ``2n-1``.
    """
    if not 1 <= len(full) <= 2 * params.n - 1:
        raise ParameterDomainError(
            f"Cannot fold {len(full)} coefficients into a length-{params.n} ring, "
            f"expected between 1 and {2 * params.n - 1}."
        )
    padded = np.zeros(2 * params.n, dtype=object)
    padded[: len(full)] = [int(c) for c in full]
    return Poly.from_ints(params, padded[: params.n] - padded[params.n :])


def polyphase_split(A: Poly, M: int) -> PolyphaseSet:
    """Split ``A`` into ``M`` polyphase components.

    Part ``r`` holds ``a[r], a[r+M], a[r+2M], ...`` as a length-``n/M``
    polynomial over the same modulus.

    :raises DecompositionError: When ``M`` does not divide ``n``.
    """
    if M < 1 or A.params.n % M:
        raise DecompositionError(
            f"Cannot split a length-{A.params.n} polynomial into {M} polyphase parts."
        )
    sub_params = make_params(A.params.n // M, A.params.q)
    parts = tuple(Poly(sub_params, A.coeffs[r::M]) for r in range(M))
    return PolyphaseSet(params=sub_params, M=M, parts=parts)


def polyphase_merge(S: PolyphaseSet) -> Poly:
    """Interleave polyphase components back into one polynomial.

    :raises DecompositionError: When the parts do not share one length.
    """
    lengths = {len(part.coeffs) for part in S.parts}
    if len(lengths) != 1 or lengths != {S.params.n}:
        raise DecompositionError(f"Inconsistent polyphase part lengths {sorted(lengths)}.")
    params = make_params(S.params.n * S.M, S.params.q)
    coeffs = [0] * params.n
    for r, part in enumerate(S.parts):
        coeffs[r :: S.M] = part.coeffs
    return Poly(params, coeffs)


def poly_to_dict(A: Poly) -> dict:
    """Return the JSON text-format representation of ``A``."""
    return {"n": A.params.n, "q": A.params.q, "coeffs": list(A.coeffs)}


def poly_from_dict(data: dict) -> Poly:
    """Build a polynomial from its JSON text-format representation."""
    return Poly(make_params(data["n"], data["q"]), data["coeffs"])
