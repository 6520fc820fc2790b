# Configuration file for the Sphinx documentation builder.
import os
import sys

sys.path.insert(0, os.path.abspath('..'))

project = 'stockwell'
author = 'stockwell developers'
release = '1.0.0'

extensions = ['sphinx.ext.autodoc', 'sphinx.ext.viewcode', 'sphinx.ext.mathjax']
autodoc_member_order = 'bysource'
exclude_patterns = ['_build']

html_theme = 'alabaster'
