# -*- coding: utf-8 -*-
#
# This file is part of fastfir-polymul.
# Copyright (C) 2025 fastfir-polymul contributors.
#
# fastfir-polymul is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.

"""fastfir-polymul input models."""

from marshmallow import Schema, ValidationError, fields, pre_load, validate, validates_schema

from fastfir_polymul.config import (
    DEFAULT_ENGINE,
    FASTFIR_DEFAULT_SEED,
    FASTFIR_DEFAULT_TRIALS,
    PARALLEL_FACTORIZATIONS,
    SEED_BITS,
)
from fastfir_polymul.errors import ParameterDomainError
from fastfir_polymul.fast_mult import MultAlgorithm

SUBCOMMANDS = ("multiply", "verify", "simulate", "bench")
OUTPUT_FORMATS = ("json", "csv")
VERIFY_SUITES = ("all", "oracle", "ring", "sim", "saber")


class PolySchema(Schema):
    """Polynomial file model: ``{"n": .., "q": .., "coeffs": [..]}``."""

    n = fields.Int(required=True, strict=True)
    q = fields.Int(required=True, strict=True)
    coeffs = fields.List(fields.Int(strict=True), required=True)

    @validates_schema(skip_on_field_errors=True)
    def validate_ring_element(self, data):
        """Check the ring parameters and that every coefficient is canonical."""
        if data["n"] < 1:
            raise ValidationError(f"n must be >= 1, got {data['n']}.", "n")
        if data["q"] < 2:
            raise ValidationError(f"q must be >= 2, got {data['q']}.", "q")
        if len(data["coeffs"]) != data["n"]:
            raise ValidationError(
                f"Expected {data['n']} coefficients, got {len(data['coeffs'])}.",
                "coeffs",
            )
        for index, coeff in enumerate(data["coeffs"]):
            if not 0 <= coeff < data["q"]:
                raise ValidationError(
                    f"coefficient out of range: coeffs[{index}] = {coeff} "
                    f"is not in [0, {data['q']}).",
                    "coeffs",
                )


def _as_int(in_data, name):
    value = in_data.get(name)
    if value is None:
        return None
    try:
        return int(value)
    except (ValueError, TypeError):
        raise ValidationError(f"{name} must be an integer. Provided value is '{value}'.")


class RunConfigSchema(Schema):
    """Validated parameters of one command-line run."""

    subcommand = fields.Str(required=True, validate=validate.OneOf(SUBCOMMANDS))
    n = fields.Int(missing=None, allow_none=True)
    q = fields.Int(missing=None, allow_none=True)
    M = fields.Int(missing=1)
    factorization = fields.List(fields.Int(), missing=None, allow_none=True)
    L = fields.Int(missing=1)
    engine = fields.Str(missing=DEFAULT_ENGINE)
    seed = fields.Int(missing=FASTFIR_DEFAULT_SEED)
    trials = fields.Int(missing=FASTFIR_DEFAULT_TRIALS)
    input_paths = fields.List(fields.Str(), missing=[])
    output_path = fields.Str(missing=None, allow_none=True)
    output_format = fields.Str(missing="json", validate=validate.OneOf(OUTPUT_FORMATS))
    frequency_mhz = fields.Float(missing=None, allow_none=True)
    suite = fields.Str(missing="all", validate=validate.OneOf(VERIFY_SUITES))

    @pre_load
    def resolve_parallelism(self, in_data, **kwargs):
        """Resolve the factorization from ``M`` and check the numeric ranges.

        Method receives the whole data dictionary and returns an updated copy.
        """
        in_data = dict(in_data)
        n, q = _as_int(in_data, "n"), _as_int(in_data, "q")
        M = _as_int(in_data, "M") or 1
        factorization = in_data.get("factorization")

        if n is not None and n < 1:
            raise ValidationError(f"n must be >= 1. Provided value is {n}.")
        if q is not None and q < 2:
            raise ValidationError(f"q must be >= 2. Provided value is {q}.")
        if factorization is None:
            if M not in PARALLEL_FACTORIZATIONS:
                raise ValidationError(
                    f"No default factorization for M={M}; "
                    f"supported values are {sorted(PARALLEL_FACTORIZATIONS)}."
                )
            factorization = list(PARALLEL_FACTORIZATIONS[M])
        try:
            algorithm = MultAlgorithm.fast(factorization)
        except ParameterDomainError as error:
            raise ValidationError(str(error))
        if algorithm.M != M and "M" in in_data:
            raise ValidationError(
                f"Factorization {factorization} gives M={algorithm.M}, not M={M}."
            )
        if n is not None and n % algorithm.M:
            raise ValidationError(f"M={algorithm.M} must divide n={n}.")
        in_data["M"], in_data["factorization"] = algorithm.M, list(factorization)

        for name in ("L", "trials"):
            value = _as_int(in_data, name)
            if value is not None and value < 1:
                raise ValidationError(f"{name} must be >= 1. Provided value is {value}.")
        seed = _as_int(in_data, "seed")
        if seed is not None and not 0 <= seed < 1 << SEED_BITS:
            raise ValidationError(
                f"seed must fit {SEED_BITS} unsigned bits. Provided value is {seed}."
            )
        if "engine" in in_data:
            try:
                MultAlgorithm.parse(in_data["engine"])
            except ParameterDomainError as error:
                raise ValidationError(str(error))
        return in_data
