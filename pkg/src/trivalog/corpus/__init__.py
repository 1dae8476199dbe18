"""Bundled example programs and interpretations, loadable by name."""

from __future__ import annotations

from importlib import resources

from ..interpretations import Interpretation3, load_interpretation
from ..syntax import ClausalProgram, parse_program

_PKG = "trivalog.corpus"


def _root():
    return resources.files(_PKG)


def program_names() -> list:
    return sorted(p.name[: -len(".pl")] for p in _root().iterdir() if p.name.endswith(".pl"))


def interpretation_names() -> list:
    return sorted(p.name[: -len(".interp")] for p in _root().iterdir() if p.name.endswith(".interp"))


def program_text(name: str) -> str:
    path = _root() / (name + ".pl")
    if not path.is_file():
        raise KeyError("no bundled program named %r (have: %s)" % (name, ", ".join(program_names())))
    return path.read_text()


def interpretation_text(name: str) -> str:
    path = _root() / (name + ".interp")
    if not path.is_file():
        raise KeyError(
            "no bundled interpretation named %r (have: %s)" % (name, ", ".join(interpretation_names()))
        )
    return path.read_text()


def program(name: str) -> ClausalProgram:
    return parse_program(program_text(name))


def interpretation(name: str) -> Interpretation3:
    return load_interpretation(interpretation_text(name))
