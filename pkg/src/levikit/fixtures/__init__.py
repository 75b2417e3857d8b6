"""Example diagrams shipped with the package."""

from importlib import resources

from ..diagrams import Diagram
from ..fileformat import parse_diagram

NAMES = ("free", "hnn", "amalgam", "collapse")


def path(name: str):
    return resources.files(__name__).joinpath(f"{name}.lrd")


def text(name: str) -> str:
    if name not in NAMES:
        raise KeyError(f"unknown fixture {name!r}; choose from {', '.join(NAMES)}")
    return path(name).read_text(encoding="utf-8")


def load(name: str) -> Diagram:
    return parse_diagram(text(name))
