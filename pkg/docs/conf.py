# Sphinx configuration for the dl-circumscription docs.

import os
import sys

sys.path.insert(0, os.path.abspath('..'))

extensions = [
    'sphinx.ext.autodoc',
]

source_suffix = '.rst'
master_doc = 'index'
exclude_patterns = ['_build']

project = u'dl-circumscription'
copyright = u'2026, dl-circumscription developers'
author = u'dl-circumscription developers'
version = '0.1'
release = '0.1'

pygments_style = 'sphinx'
html_theme = 'alabaster'
