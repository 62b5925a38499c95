# Sphinx configuration for the wiener_convex documentation.
import os
import sys

sys.path.insert(0, os.path.abspath("../"))

project = "wiener_convex"
copyright = "2026, The wiener_convex developers"
author = "The wiener_convex developers"

with open("../VERSION", "r") as file:
    version = file.readline().strip()
release = version

extensions = [
    "sphinx.ext.napoleon",
    "sphinx_rtd_theme",
    "sphinx.ext.autodoc",
    "sphinx.ext.autosummary",
    "sphinx.ext.intersphinx",
    "sphinx.ext.viewcode",
    "sphinx.ext.mathjax",
]

intersphinx_mapping = {
    "python": ("https://docs.python.org/3/", None),
    "numpy": ("https://numpy.org/doc/stable/", None),
    "scipy": ("https://docs.scipy.org/doc/scipy/", None),
    "pandas": ("https://pandas.pydata.org/docs/", None),
    "matplotlib": ("https://matplotlib.org/stable/", None),
}

autosummary_generate = True
autoclass_content = "both"
autodoc_inherit_docstrings = True
autodoc_typehints = "none"
autodoc_default_options = {
    "members": True,
    "member-order": "bysource",
    "special-members": "__init__",
    "undoc-members": True,
    "exclude-members": "__weakref__",
}
add_module_names = True
html_show_sourcelink = False

source_suffix = ".rst"
master_doc = "index"
language = "en"
exclude_patterns = ["_build", "Thumbs.db", ".DS_Store"]

html_theme = "sphinx_rtd_theme"
html_static_path = ["_static"]
htmlhelp_basename = "wienerconvexdoc"
man_pages = [(master_doc, "wiener-convex", "wiener_convex Documentation", [author], 1)]


def setup(app):
    """Add the stylesheet of the docs."""
    app.add_css_file("docs.css")
