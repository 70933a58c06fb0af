"""Bundled and user-supplied empirical networks.

A dataset ``name`` is an edge list ``name.txt`` with an optional ground
truth ``name.truth`` (partition file). Files are looked up in the
directories listed in the ``GROUPROP_DATA`` environment variable (path
separator delimited) and then in this package. Only the southern women
network ships with the package; others, such as ``football``, have to be
placed in a ``GROUPROP_DATA`` directory.
"""

from __future__ import annotations

import os
from importlib import resources
from pathlib import Path

from ..graph import Graph, Partition, load_edge_list, load_partition

BUNDLED = ("southern_women",)


class DatasetNotFound(FileNotFoundError):
    pass


def _search_dirs() -> list[Path]:
    dirs = [Path(p) for p in os.environ.get("GROUPROP_DATA", "").split(os.pathsep) if p]
    dirs.append(Path(str(resources.files(__name__))))
    return dirs


def locate(name: str) -> Path:
    """Path of the edge list of dataset ``name``."""
    for d in _search_dirs():
        path = d / f"{name}.txt"
        if path.is_file():
            return path
    raise DatasetNotFound(
        f"dataset {name!r} not found; put {name}.txt (and {name}.truth) in a directory "
        "listed in GROUPROP_DATA"
    )


def available(name: str) -> bool:
    try:
        locate(name)
    except DatasetNotFound:
        return False
    return True


def load(name: str) -> tuple[Graph, Partition | None]:
    """Graph of dataset ``name`` and its ground truth partition when one exists."""
    path = locate(name)
    g = load_edge_list(path)
    truth_path = path.with_suffix(".truth")
    truth = load_partition(truth_path, g) if truth_path.is_file() else None
    return g, truth
