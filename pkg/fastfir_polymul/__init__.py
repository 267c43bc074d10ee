# -*- coding: utf-8 -*-
#
# This file is part of fastfir-polymul.
# Copyright (C) 2025 fastfir-polymul contributors.
#
# fastfir-polymul is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.

"""Fast-filtering modular polynomial multipliers and their datapath simulators."""

from __future__ import absolute_import, print_function

from .version import __version__

__all__ = ("__version__",)
