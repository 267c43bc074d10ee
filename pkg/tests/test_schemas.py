# -*- coding: utf-8 -*-
#
# This file is part of fastfir-polymul.
# Copyright (C) 2025 fastfir-polymul contributors.
#
# fastfir-polymul is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.

"""fastfir-polymul input model tests."""

import pytest

from fastfir_polymul.schemas import PolySchema, RunConfigSchema


def test_poly_schema_valid():
    """A canonical polynomial loads without errors."""
    data, errors = PolySchema().load({"n": 4, "q": 17, "coeffs": [1, 2, 3, 4]})
    assert not errors
    assert data == {"n": 4, "q": 17, "coeffs": [1, 2, 3, 4]}


@pytest.mark.parametrize(
    "payload,field,message",
    [
        ({"n": 4, "q": 17, "coeffs": [1, 2, 17, 4]}, "coeffs", "coefficient out of range"),
        ({"n": 4, "q": 17, "coeffs": [1, 2, 3]}, "coeffs", "Expected 4 coefficients"),
        ({"n": 0, "q": 17, "coeffs": []}, "n", "n must be >= 1"),
        ({"n": 1, "q": 1, "coeffs": [0]}, "q", "q must be >= 2"),
        ({"n": 4, "coeffs": [1, 2, 3, 4]}, "q", "Missing data"),
    ],
)
def test_poly_schema_errors(payload, field, message):
    """Errors are reported under the offending field."""
    _, errors = PolySchema().load(payload)
    assert field in errors
    assert message in " ".join(errors[field])


def test_run_config_defaults():
    """Missing options take their defaults."""
    data, errors = RunConfigSchema().load({"subcommand": "verify"})
    assert not errors
    assert data["M"] == 1
    assert data["factorization"] == []
    assert data["engine"] == "schoolbook"
    assert data["suite"] == "all"


@pytest.mark.parametrize(
    "M,factorization", [(2, [2]), (4, [2, 2]), (6, [2, 3]), (9, [3, 3]), (16, [2, 2, 2, 2])]
)
def test_run_config_resolves_factorization(M, factorization):
    """``M`` selects its default factorization."""
    data, errors = RunConfigSchema().load({"subcommand": "simulate", "n": 144, "M": M})
    assert not errors
    assert data["factorization"] == factorization


def test_run_config_explicit_factorization():
    """An explicit factorization fixes ``M``."""
    data, errors = RunConfigSchema().load(
        {"subcommand": "simulate", "n": 12, "factorization": [3, 2]}
    )
    assert not errors
    assert data["M"] == 6
    assert data["factorization"] == [3, 2]


@pytest.mark.parametrize(
    "payload",
    [
        {"subcommand": "simulate", "n": 10, "M": 4},
        {"subcommand": "simulate", "n": 12, "M": 5},
        {"subcommand": "simulate", "n": 12, "M": 4, "factorization": [2, 3]},
        {"subcommand": "simulate", "n": 12, "factorization": [2, 5]},
        {"subcommand": "simulate", "n": 12, "L": 0},
        {"subcommand": "verify", "trials": 0},
        {"subcommand": "verify", "seed": -1},
        {"subcommand": "verify", "seed": 1 << 64},
        {"subcommand": "multiply", "engine": "toom3"},
        {"subcommand": "bench", "output_format": "xml"},
        {"subcommand": "fly"},
    ],
)
def test_run_config_rejects(payload):
    """Invalid combinations are reported as errors."""
    _, errors = RunConfigSchema().load(payload)
    assert errors


@pytest.mark.parametrize(
    "payload,field",
    [
        ({"n": 2, "q": 17, "coeffs": [1, 1.5]}, "coeffs"),
        ({"n": 2, "q": 17, "coeffs": [1, "2"]}, "coeffs"),
        ({"n": 2.5, "q": 17, "coeffs": [1, 2]}, "n"),
        ({"n": 2, "q": 17.0, "coeffs": [1, 2]}, "q"),
    ],
)
def test_poly_schema_rejects_non_integers(payload, field):
    """Fractions and strings are not truncated into coefficients."""
    _, errors = PolySchema().load(payload)
    assert field in errors
