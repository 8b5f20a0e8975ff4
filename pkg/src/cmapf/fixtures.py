"""Bundled example graphs: ``p3``, ``k3`` and ``fig1``."""

from __future__ import annotations

from importlib import resources

from .graph_io import parse_graph
from .topo_graph import TopoGraph

NAMES = ("p3", "k3", "fig1")


def fixture_text(name: str) -> str:
    if name not in NAMES:
        raise KeyError(f"unknown fixture {name!r}; choose from {NAMES}")
    return resources.files("cmapf.data").joinpath(f"{name}.cmapf").read_text()


def fixture_path(name: str):
    """Filesystem path of a bundled fixture (usable as a context manager target)."""
    fixture_text(name)
    return resources.as_file(resources.files("cmapf.data").joinpath(f"{name}.cmapf"))


def load_fixture(name: str) -> TopoGraph:
    return parse_graph(fixture_text(name))


def p3() -> TopoGraph:
    return load_fixture("p3")


def k3() -> TopoGraph:
    return load_fixture("k3")


def fig1() -> TopoGraph:
    return load_fixture("fig1")
