import datetime
import sys
import tomllib
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent

with open(ROOT / "pyproject.toml", "rb") as f:
    metadata = tomllib.load(f)["project"]

project = metadata["name"]
author = "ecmod developers"
copyright = f"{datetime.date.today().year}, {author}"
release = metadata["version"]
version = ".".join(release.split(".")[:2])

sys.path.insert(0, str(ROOT / "src"))

extensions = [
    "sphinx.ext.napoleon",
    "sphinx_copybutton",
    "sphinx.ext.autodoc",
    "sphinx.ext.intersphinx",
    "sphinx.ext.mathjax",
]

autodoc_default_options = {
    "members": True,
    "undoc-members": True,
    "show-inheritance": True,
}
autodoc_member_order = "bysource"
napoleon_google_docstring = True
napoleon_numpy_docstring = False

intersphinx_mapping = {
    "python": ("https://docs.python.org/3", None),
    "numpy": ("https://numpy.org/doc/stable", None),
    "scipy": ("https://docs.scipy.org/doc/scipy", None),
    "attrs": ("https://www.attrs.org/en/stable", None),
}

templates_path = ["_templates"]
exclude_patterns = ["_build", "Thumbs.db", ".DS_Store"]

html_theme = "furo"
html_title = f"ecmod {release}"
html_short_title = "ecmod"
html_theme_options = {
    "sidebar_hide_name": False,
}
html_context = {"description": metadata["description"]}
