# -*- coding: utf-8 -*-
#
# This file is part of fastfir-polymul.
# Copyright (C) 2025 fastfir-polymul contributors.
#
# fastfir-polymul is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.

"""fastfir-polymul utils tests."""

import io
import logging

import pytest

from fastfir_polymul.utils import (
    MultilineFormatter,
    canonical_json,
    ceil_log2,
    make_rng,
    read_json_lines,
    write_json_lines,
)


@pytest.mark.parametrize(
    "message,expected_output",
    [
        ("cycle 3", "sim | INFO | cycle 3"),
        ("cycle 3\n", "sim | INFO | cycle 3"),
        (
            "ctrl_sw 011\nctrl_sw 111",
            "sim | INFO | ctrl_sw 011\nsim | INFO | ctrl_sw 111",
        ),
        ("  lane 0\nlane 1  ", "sim | INFO |   lane 0\nsim | INFO | lane 1"),
    ],
)
def test_multiline_formatter_format(message, expected_output):
    """Every line of a multi-line message gets the prefix."""
    formatter = MultilineFormatter("%(name)s | %(levelname)s | %(message)s")
    record = logging.LogRecord("sim", logging.INFO, "pathname", 1, message, None, None)
    assert formatter.format(record) == expected_output


@pytest.mark.parametrize(
    "value,expected", [(1, 0), (2, 1), (3, 2), (4, 2), (5, 3), (16, 4), (17, 5)]
)
def test_ceil_log2(value, expected):
    """Smallest power of two covering the value."""
    assert ceil_log2(value) == expected


def test_canonical_json_sorts_keys():
    """Key order and whitespace do not depend on insertion order."""
    assert canonical_json({"q": 17, "n": 4, "coeffs": [1, 2]}) == (
        '{"coeffs":[1,2],"n":4,"q":17}'
    )


def test_json_lines_roundtrip():
    """Records written as JSON lines read back unchanged."""
    records = [{"cycle": 0, "output": None}, {"cycle": 1, "output": 9}]
    stream = io.StringIO()
    assert write_json_lines(records, stream) == 2
    stream.seek(0)
    assert list(read_json_lines(stream)) == records


def test_make_rng_is_deterministic():
    """Equal seeds give equal draws, sub-streams differ."""
    first = make_rng(7).integers(0, 1 << 30, size=8).tolist()
    assert first == make_rng(7).integers(0, 1 << 30, size=8).tolist()
    assert first != make_rng(7, 1).integers(0, 1 << 30, size=8).tolist()
