# -*- coding: utf-8 -*-
#
# This file is part of fastfir-polymul.
# Copyright (C) 2025 fastfir-polymul contributors.
#
# fastfir-polymul is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.

"""fastfir-polymul utils."""

import json
import logging
from logging import Formatter, LogRecord
from typing import IO, Iterable, Mapping

import numpy as np

from fastfir_polymul.config import FASTFIR_LOG_FORMAT, FASTFIR_LOG_LEVEL


class MultilineFormatter(Formatter):
    """Logging formatter for multiline logs."""

    def format(self, record: LogRecord):
        """Format multiline log message.

        :param record: LogRecord object.
        :type record: logging.LogRecord

        :return: Formatted log message.
        :rtype: str
        """
        save_msg = str(record.msg)
        output = ""
        lines = save_msg.splitlines()
        for line in lines:
            record.msg = line
            output += super().format(record) + "\n"
        output = output.strip()
        record.msg = save_msg
        record.message = output

        return output


def configure_logging(level=None):
    """Install the multiline formatter on the root logger.

    :param level: Log level name, defaults to ``FASTFIR_LOG_LEVEL``.
    :type level: str
    """
    handler = logging.StreamHandler()
    handler.setFormatter(MultilineFormatter(FASTFIR_LOG_FORMAT))
    logging.basicConfig(
        level=(level or FASTFIR_LOG_LEVEL).upper(),
        format=FASTFIR_LOG_FORMAT,
        handlers=[handler],
        force=True,
    )


def make_rng(seed: int, *stream: int) -> np.random.Generator:
    """Return the generator every random input of a run is drawn from.

    The bit generator is PCG64 seeded with the plain integer seed, so a seed
    fully determines all random polynomials, streams and sign draws.
    ``stream`` selects an independent sub-stream of the same seed.

    :param seed: Non-negative 64-bit seed.
    :type seed: int
    """
    if stream:
        return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, *stream])))
    return np.random.Generator(np.random.PCG64(seed))


def ceil_log2(value: int) -> int:
    """Return the smallest ``k`` with ``2**k >= value`` for a positive ``value``."""
    return (value - 1).bit_length()


def canonical_json(obj) -> str:
    """Serialise ``obj`` with sorted keys and no insignificant whitespace."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def write_json_lines(records: Iterable[Mapping], stream: IO[str]) -> int:
    """Write one canonical JSON object per line.

    :return: Number of records written.
    :rtype: int
    """
    count = 0
    for record in records:
        stream.write(canonical_json(record) + "\n")
        count += 1
    return count


def read_json_lines(stream: IO[str]):
    """Yield the objects of a JSON-lines stream, skipping blank lines."""
    for line in stream:
        line = line.strip()
        if line:
            yield json.loads(line)
