# -*- coding: utf-8 -*-
#
# This file is part of fastfir-polymul.
# Copyright (C) 2025 fastfir-polymul contributors.
#
# fastfir-polymul is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.

"""Sphinx configuration."""

from __future__ import print_function

import os
import sys

sys.path.insert(0, os.path.abspath(".."))

# -- General configuration ------------------------------------------------

extensions = [
    "myst_parser",
    "sphinx.ext.autodoc",
    "sphinx.ext.coverage",
    "sphinx.ext.doctest",
    "sphinx.ext.intersphinx",
    "sphinx.ext.viewcode",
]

templates_path = ["_templates"]

source_suffix = [".rst", ".md"]

myst_enable_extensions = ["colon_fence"]

master_doc = "index"

project = "fastfir-polymul"
copyright = "2025, fastfir-polymul contributors"
author = "fastfir-polymul contributors"

# Get the version string. Cannot be done with import!
g = {}
with open(os.path.join("..", "fastfir_polymul", "version.py"), "rt") as fp:
    exec(fp.read(), g)
    version = g["__version__"]

release = version

language = "en"

exclude_patterns = ["_build", "Thumbs.db", ".DS_Store"]

pygments_style = "sphinx"

todo_include_todos = False

# -- Options for HTML output ----------------------------------------------

html_theme = "alabaster"

html_theme_options = {
    "description": """<p>fastfir-polymul multiplies polynomials modulo
                      (x^n+1, q) with fast-filtering algorithms and models
                      the systolic datapaths that compute them cycle by
                      cycle.</p>""",
    "github_button": False,
    "show_powered_by": False,
    "nosidebar": True,
}

htmlhelp_basename = "fastfirpolymuldoc"

intersphinx_mapping = {
    "python": ("https://docs.python.org/3", None),
    "numpy": ("https://numpy.org/doc/stable", None),
}
