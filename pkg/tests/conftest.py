# -*- coding: utf-8 -*-
#
# This file is part of fastfir-polymul.
# Copyright (C) 2025 fastfir-polymul contributors.
#
# fastfir-polymul is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.

"""Pytest configuration for fastfir-polymul."""

import json
import logging
import os

import pytest

from fastfir_polymul.ring_core import Poly, make_params
from fastfir_polymul.utils import make_rng


@pytest.fixture(autouse=True)
def _restore_root_logger():
    """Undo root-logger changes made by ``configure_logging`` in CLI runs."""
    root = logging.getLogger()
    level, handlers = root.level, root.handlers[:]
    yield
    root.setLevel(level)
    root.handlers[:] = handlers


@pytest.fixture(scope="session")
def trials():
    """Random draws per property, ``FASTFIR_TEST_TRIALS`` to run more."""
    return int(os.getenv("FASTFIR_TEST_TRIALS", "25"))


@pytest.fixture()
def rng():
    """Seeded generator, fresh for every test."""
    return make_rng(2024)


@pytest.fixture()
def small_ring():
    """Ring of the hand-traced example, ``Z_17[x]/(x^4+1)``."""
    return make_params(4, 17)


@pytest.fixture()
def golden_pair(small_ring):
    """Operands of the hand-traced example and their product."""
    A = Poly(small_ring, [1, 2, 3, 4])
    B = Poly(small_ring, [5, 6, 7, 8])
    P = Poly(small_ring, [12, 15, 2, 9])
    return A, B, P


@pytest.fixture()
def poly_file(tmp_path):
    """Write a polynomial file and return its path."""

    def _write(name, n, q, coeffs):
        path = tmp_path / name
        path.write_text(json.dumps({"n": n, "q": q, "coeffs": coeffs}))
        return str(path)

    return _write
