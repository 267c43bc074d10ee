# -*- coding: utf-8 -*-
#
# This file is part of fastfir-polymul.
# Copyright (C) 2025 fastfir-polymul contributors.
#
# fastfir-polymul is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.

"""fastfir-polymul errors."""


class PolyMulError(Exception):
    """Base class of all fastfir-polymul errors."""


class ParameterDomainError(PolyMulError, ValueError):
    """A parameter is outside of the domain accepted by the operation."""


class DecompositionError(PolyMulError, ValueError):
    """Polyphase decomposition is not possible for the given length."""


class StreamUnderrunError(PolyMulError):
    """Simulator clocked without input samples and without pending outputs."""


class LatencyMismatchError(PolyMulError):
    """Measured latency differs from the closed-form prediction."""

    def __init__(self, measured, predicted):
        """Keep both figures for the diagnostic."""
        self.measured = measured
        self.predicted = predicted
        super().__init__(
            f"Measured total latency {measured} differs from predicted {predicted}."
        )
