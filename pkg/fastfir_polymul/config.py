# -*- coding: utf-8 -*-
#
# This file is part of fastfir-polymul.
# Copyright (C) 2025 fastfir-polymul contributors.
#
# fastfir-polymul is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.

"""fastfir-polymul configuration."""

import os

from werkzeug.utils import import_string

FASTFIR_LOG_LEVEL = os.getenv("FASTFIR_LOG_LEVEL", "INFO").upper()
"""Log level of the command-line interface and library loggers."""

FASTFIR_LOG_FORMAT = os.getenv(
    "FASTFIR_LOG_FORMAT",
    "%(asctime)s | %(name)s | %(threadName)s | %(levelname)s | %(message)s",
)
"""Log format, every line of a multi-line message gets its own prefix."""

FASTFIR_DEFAULT_SEED = int(os.getenv("FASTFIR_DEFAULT_SEED", "42"))
"""Seed of the pseudorandom generator when ``--seed`` is not given."""

FASTFIR_DEFAULT_TRIALS = int(os.getenv("FASTFIR_DEFAULT_TRIALS", "1000"))
"""Number of random trials run by ``verify`` when ``--trials`` is not given."""

FASTFIR_RECORD_ACTIVITY = os.getenv("FASTFIR_RECORD_ACTIVITY", "false").lower() in (
    "1",
    "true",
    "yes",
    "on",
)
"""Record per-multiplier activity flags in simulator traces.

Busy counts are always recorded; the per-multiplier flags make traces of long
streams considerably larger."""

SEED_BITS = 64
"""Width of the seeds accepted on the command line."""

MULTIPLICATION_ENGINES = {
    "schoolbook": lambda: import_string("fastfir_polymul.fast_mult.leaf_mul"),
    "karatsuba2": lambda: import_string("fastfir_polymul.fast_mult.karatsuba2_mul"),
    "fast2": lambda: import_string("fastfir_polymul.fast_mult.fast2_mul"),
    "fast3": lambda: import_string("fastfir_polymul.fast_mult.fast3_mul"),
    "fast4": lambda: import_string("fastfir_polymul.fast_mult.fast4_mul"),
}
"""Functional multiplication engines and the callables implementing them."""

DEFAULT_ENGINE = "schoolbook"
"""Engine used when none is requested."""

PARALLEL_FACTORIZATIONS = {
    1: (),
    2: (2,),
    3: (3,),
    4: (2, 2),
    6: (2, 3),
    8: (2, 2, 2),
    9: (3, 3),
    12: (2, 2, 3),
    16: (2, 2, 2, 2),
}
"""Default factorization used for a requested level of parallelism ``M``."""

MAX_PARALLEL_RADIX3_STAGES = 2
"""Radix-3 stages a simulated datapath may iterate.

Each radix-3 stage adds two cycles of post-processing, so beyond two stages the
datapath is slower than the closed-form latency ``n(1+L)/M + ceil(log2 M)``."""

SABER_N = 256
"""Saber polynomial length."""

SABER_Q = 2**13
"""Saber coefficient modulus."""

SABER_A_MAGNITUDE_BITS = 13
"""Magnitude width of the sign-magnitude coefficients of ``A(x)``."""

SABER_B_MAGNITUDE_BITS = 3
"""Magnitude width of the sign-magnitude coefficients of ``B(x)``."""

SABER_B_MAX_MAGNITUDE = 4
"""Largest magnitude of a coefficient of ``B(x)``."""

SABER_MODULE_RANK = 3
"""Module rank ``l`` of the medium security level."""

SABER_STEP_MULTIPLICATIONS = {"KeyGen": 9, "Encaps": 12, "Decaps": 15}
"""Length-256 polynomial multiplications per scheme step (medium security)."""

SABER_PUBLISHED_LATENCIES = {
    "FIR": {1: 511, 9: 2560, 12: 3328, 15: 4096},
    "Fast2": {1: 255, 9: 1281, 12: 1665, 15: 2049},
    "Fast4": {1: 127, 9: 642, 12: 834, 15: 1026},
}
"""Published cycle counts for n=256, indexed by number of multiplications."""

PUBLISHED_LATENCY_TOLERANCE = 3
"""Largest accepted distance between a published and a simulated cycle count."""

BENCH_LENGTHS = (180, 256)
"""Polynomial lengths of the benchmark comparison matrix."""

BENCH_ARCHITECTURES = ("FIR", "Fast2", "Fast3", "Fast4")
"""Architectures of the benchmark comparison matrix."""

BENCH_STREAM_LENGTHS = (1, 9)
"""Numbers of back-to-back multiplications of the benchmark comparison matrix."""

BENCH_CSV_COLUMNS = (
    "arch",
    "n",
    "M",
    "L",
    "coeff_mults",
    "postproc_addsubs",
    "response_time",
    "total_latency",
    "throughput",
    "census_multipliers",
)
"""Header of the benchmark CSV."""

VERIFY_SIM_LENGTHS = (4, 8, 12, 16, 24)
"""Polynomial lengths exercised by the simulator part of ``verify``."""

VERIFY_MODULI = (8, 17, 8192)
"""Moduli exercised by ``verify``."""

VERIFY_STREAM_LENGTHS = (1, 2, 5)
"""Stream lengths exercised by the simulator part of ``verify``."""
