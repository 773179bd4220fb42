"""Front diagrams shipped with the package, and the front file reader.

A front file holds one word in the token format of ``diagram.parse_front``;
``#`` starts a comment that runs to the end of the line.
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

from ..diagram import FrontDiagram, front, parse_front

NAMES = (
    "unknot",
    "hopf_horizontal",
    "hopf_rainbow",
    "trefoil",
    "torus_3_4",
    "m8_21",
    "chekanov_1",
    "chekanov_2",
    "stabilized_unknot",
    "stabilized_trefoil",
    "hopf_wrap",
)


def strip_comments(text: str) -> str:
    return " ".join(line.split("#", 1)[0] for line in text.splitlines())


def read_front(text: str) -> FrontDiagram:
    return front(parse_front(strip_comments(text)))


def read_front_file(path: str | Path) -> FrontDiagram:
    return read_front(Path(path).read_text())


def path(name: str) -> Path:
    if name not in NAMES:
        raise KeyError(f"no corpus front named {name!r}")
    return Path(str(resources.files(__package__) / f"{name}.frt"))


def load(name: str) -> FrontDiagram:
    return read_front_file(path(name))


def expected(name: str) -> dict:
    """Golden JSON outputs recorded for a corpus front."""
    p = Path(str(resources.files(__package__) / "expected" / f"{name}.json"))
    return json.loads(p.read_text())
