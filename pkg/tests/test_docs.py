import runpy
from pathlib import Path

DOCS = Path(__file__).resolve().parent.parent / "docs"


def test_sphinx_config_describes_project():
    conf = runpy.run_path(str(DOCS / "conf.py"))
    assert conf["project"] == "ecmod"
    assert conf["html_title"] == f"ecmod {conf['release']}"
    assert "elliptic curve modulation" in (
        conf["html_context"]["description"].lower()
    )
    assert {"numpy", "scipy", "attrs"} <= set(conf["intersphinx_mapping"])
