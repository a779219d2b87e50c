"""Bundled example systems used by the CLI docs, tests, and scripts.

Two systems ship with the package: a (6,2) heterogeneous system storing a
3-packet file in 13 coded packets over GF(2), with a full surviving-set
table, and a (4,2) system derived from a 5-edge graph on 4 vertices
storing a 4-packet file in 10 packets.
"""

from __future__ import annotations

from .construct import Code, GraphSpec, derive_dss
from .field import Field
from .model import DssSpec, validate_dss

GF2 = Field(2)


def dss_6_2() -> DssSpec:
    """(6,2) system: alpha = [2,2,2,3,2,2], beta = 1, B = 3, 18 surviving sets."""
    return validate_dss({
        "n": 6,
        "k": 2,
        "beta": 1,
        "B": 3,
        "alpha": [2, 2, 2, 3, 2, 2],
        "surviving_sets": {
            "1": [[4, 6], [2, 6]],
            "2": [[1, 3], [1, 5], [3, 4], [4, 5]],
            "3": [[2, 4], [2, 6], [4, 5], [5, 6]],
            "4": [[1, 3, 5], [2, 3, 5], [1, 5, 6], [2, 5, 6]],
            "5": [[2, 4], [3, 4]],
            "6": [[1, 3], [1, 4]],
        },
    })


def code_6_2() -> Code:
    """The 13 explicit packets of the (6,2) system over GF(2).

    Message symbols x1, x2, x3; e.g. node 1 stores x1 and x1+x2+x3.
    """
    return Code(field=GF2, B=3, nodes=(
        ((1, 0, 0), (1, 1, 1)),
        ((1, 0, 0), (0, 1, 0)),
        ((0, 1, 0), (0, 0, 1)),
        ((1, 0, 0), (0, 0, 1), (1, 0, 1)),
        ((0, 1, 0), (1, 0, 1)),
        ((0, 0, 1), (1, 1, 1)),
    ))


def schedule_6_2() -> list[tuple[int, int]]:
    """A full repair round of the (6,2) system: every node fails once."""
    return [(5, 1), (3, 1), (4, 2), (6, 2), (1, 1), (2, 2)]


def graph_4_2() -> GraphSpec:
    """4 vertices, degree sequence (2,2,3,3); v1 and v2 nonadjacent."""
    return GraphSpec(n=4, edges=((1, 3), (1, 4), (2, 3), (2, 4), (3, 4)))


def dss_4_2() -> DssSpec:
    """The system the 4-vertex graph induces with k = 2."""
    return derive_dss(graph_4_2(), 2)


def code_4_2() -> Code:
    """Explicit code for the (4,2) system over GF(2).

    Nodes 1 and 2 hold the basis (x1,x2 | x3,x4); node 3 stores x2,
    x2+x4, x1+x2+x3+x4; node 4 stores x1, x1+x3, x1+x2+x3+x4.
    """
    return Code(field=GF2, B=4, nodes=(
        ((1, 0, 0, 0), (0, 1, 0, 0)),
        ((0, 0, 1, 0), (0, 0, 0, 1)),
        ((0, 1, 0, 0), (0, 1, 0, 1), (1, 1, 1, 1)),
        ((1, 0, 0, 0), (1, 0, 1, 0), (1, 1, 1, 1)),
    ))
