# -*- coding: utf-8 -*-
#
# Configuration file for the Sphinx documentation builder.
#
# http://www.sphinx-doc.org/en/master/config

# -- Path setup --------------------------------------------------------------

import os
import re
import subprocess
import sys
from pathlib import Path

_src_path = Path(__file__).parent.parent / 'src'
_init_text = (_src_path / 'quantum' / 'cvkit' / '__init__.py').read_text()
_match = re.search(
    r"^__version__ = '(?P<major>\d+)\.(?P<minor>\d+)\.(?P<patch>\d+)(?P<tag>.*)?'$",  # noqa
    _init_text, re.M)
if _match is None:
    raise RuntimeError('Unable to determine version.')
_version_info = _match.groupdict()

sys.path.insert(0, str(_src_path))

on_rtd = os.environ.get('READTHEDOCS') == 'True'

if on_rtd:
    try:
        import quantum.cvkit  # noqa
    except ImportError:
        subprocess.run('pip install -U "pip>=19.2" "setuptools>=41.2"', shell=True)
        subprocess.run('pip install -e "..[docs]"', shell=True)


# -- Project information -----------------------------------------------------

project = 'cvkit'
copyright = '2026, cvkit developers'
author = 'cvkit developers'

# The short X.Y version.
version = '{major}.{minor}'.format(**_version_info)
# The full version, including alpha/beta/rc tags.
release = '{major}.{minor}.{patch}{tag}'.format(**_version_info)


# -- General configuration ---------------------------------------------------

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.intersphinx',
    'sphinx.ext.mathjax',
    'sphinx.ext.viewcode',
    'sphinx_autodoc_typehints',
]

templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'
language = None

exclude_patterns = ['_build', 'Thumbs.db', '.DS_Store']

pygments_style = 'tango'
highlight_language = 'python3'

autodoc_member_order = 'bysource'


# -- Options for HTML output -------------------------------------------------

html_theme = "sphinx_rtd_theme"
html_static_path = []
htmlhelp_basename = 'cvkitdoc'


# -- Options for LaTeX output ------------------------------------------------

latex_elements = {
    'papersize': 'a4paper',
    'pointsize': '11pt',
}

latex_documents = [
    (master_doc, 'cvkit.tex', 'cvkit Documentation', author, 'manual'),
]


# -- Options for manual page output ------------------------------------------

man_pages = [
    (master_doc, 'cvkit', 'cvkit Documentation', [author], 1),
]


# -- Extension configuration -------------------------------------------------

intersphinx_mapping = {
    'python': ('https://docs.python.org/3/', None),
    'numpy': ('https://numpy.org/doc/stable/', None),
    'scipy': ('https://docs.scipy.org/doc/scipy/', None),
    'click': ('https://click.palletsprojects.com/en/8.0.x/', None),
}
