"""Example graphs, with straight-line drawings for the planar ones.

Bundled copies live in ``confspace/data`` as graph JSON and can be addressed
from the command line as ``bundled:NAME``.
"""

from __future__ import annotations

import math
from importlib import resources
from pathlib import Path
from typing import Dict, List, Tuple

from .graph import Graph, graph_from_dict, make_graph, write_graph
from .planar import embed_with_coordinates

Coords = Dict[str, Tuple[float, float]]


def complete_k5() -> Graph:
    """K5 on vertices 1..5, edge ``ij`` oriented from i to j (i < j)."""
    edges = [(f"{i}{j}", str(i), str(j)) for i in range(1, 6) for j in range(i + 1, 6)]
    return make_graph(edges)


def complete_k33() -> Graph:
    """K3,3 with parts a1..a3 and b1..b3, edges oriented a -> b."""
    edges = [(f"a{i}b{j}", f"a{i}", f"b{j}") for i in range(1, 4) for j in range(1, 4)]
    return make_graph(edges)


def _ring(n: int, radius: float, phase: float = 0.0) -> List[Tuple[float, float]]:
    return [
        (radius * math.cos(phase + 2 * math.pi * k / n), radius * math.sin(phase + 2 * math.pi * k / n))
        for k in range(n)
    ]


def k4_drawing() -> Tuple[Graph, Coords]:
    coords = dict(zip("abc", _ring(3, 2.0, math.pi / 2)))
    coords["d"] = (0.0, 0.0)
    edges = [("ab", "a", "b"), ("bc", "b", "c"), ("ca", "c", "a"),
             ("ad", "a", "d"), ("bd", "b", "d"), ("cd", "c", "d")]
    return make_graph(edges), coords


def y_drawing() -> Tuple[Graph, Coords]:
    coords = {"c": (0.0, 0.0)}
    coords.update(zip(("l1", "l2", "l3"), _ring(3, 1.0, math.pi / 2)))
    return make_graph([(f"e{k}", "c", f"l{k}") for k in (1, 2, 3)]), coords


def barbell_drawing() -> Tuple[Graph, Coords]:
    """Two triangles joined through a middle vertex."""
    coords = {
        "a1": (-1.0, 0.0), "a2": (-2.0, 1.0), "a3": (-2.0, -1.0),
        "m": (0.0, 0.0),
        "b1": (1.0, 0.0), "b2": (2.0, 1.0), "b3": (2.0, -1.0),
    }
    edges = [("a12", "a1", "a2"), ("a23", "a2", "a3"), ("a31", "a3", "a1"),
             ("b12", "b1", "b2"), ("b23", "b2", "b3"), ("b31", "b3", "b1"),
             ("pa", "a1", "m"), ("pb", "m", "b1")]
    return make_graph(edges), coords


def gamma_drawing(p: int) -> Tuple[Graph, Coords]:
    """Two concentric p-cycles, a centre, and p radii through both cycles."""
    if p < 3:
        raise ValueError("p must be at least 3")
    w = len(str(p - 1))
    inner = [f"i{k:0{w}d}" for k in range(p)]
    outer = [f"o{k:0{w}d}" for k in range(p)]
    coords: Coords = {"c": (0.0, 0.0)}
    coords.update(zip(inner, _ring(p, 1.0)))
    coords.update(zip(outer, _ring(p, 2.0)))
    edges = []
    for k in range(p):
        nxt = (k + 1) % p
        edges.append((f"in{k:0{w}d}", inner[k], inner[nxt]))
        edges.append((f"out{k:0{w}d}", outer[k], outer[nxt]))
        edges.append((f"hub{k:0{w}d}", "c", inner[k]))
        edges.append((f"rad{k:0{w}d}", inner[k], outer[k]))
    return make_graph(edges), coords


def gamma_prime_drawing(p: int) -> Tuple[Graph, Coords]:
    """Like ``gamma_drawing`` but the hub spokes sit half a step round.

    The inner cycle carries 2p vertices; the centre joins the odd ones and
    the outer radii leave from the even ones.
    """
    if p < 3:
        raise ValueError("p must be at least 3")
    w = len(str(2 * p - 1))
    inner = [f"i{k:0{w}d}" for k in range(2 * p)]
    outer = [f"o{k:0{w}d}" for k in range(p)]
    coords: Coords = {"c": (0.0, 0.0)}
    coords.update(zip(inner, _ring(2 * p, 1.0)))
    coords.update(zip(outer, _ring(p, 2.0)))
    edges = []
    for k in range(2 * p):
        edges.append((f"in{k:0{w}d}", inner[k], inner[(k + 1) % (2 * p)]))
    for k in range(p):
        edges.append((f"out{k:0{w}d}", outer[k], outer[(k + 1) % p]))
        edges.append((f"hub{k:0{w}d}", "c", inner[2 * k + 1]))
        edges.append((f"rad{k:0{w}d}", inner[2 * k], outer[k]))
    return make_graph(edges), coords


def embedded(drawing: Tuple[Graph, Coords]) -> Graph:
    graph, coords = drawing
    return embed_with_coordinates(graph, coords)


def k4() -> Graph:
    return embedded(k4_drawing())


def y_graph() -> Graph:
    return embedded(y_drawing())


def barbell() -> Graph:
    return embedded(barbell_drawing())


def gamma(p: int) -> Graph:
    return embedded(gamma_drawing(p))


def gamma_prime(p: int) -> Graph:
    return embedded(gamma_prime_drawing(p))


def corpus() -> Dict[str, Graph]:
    graphs = {
        "K4": k4(),
        "K5": complete_k5(),
        "K33": complete_k33(),
        "Y": y_graph(),
        "barbell": barbell(),
    }
    for p in range(3, 9):
        graphs[f"gamma{p}"] = gamma(p)
        graphs[f"gamma_prime{p}"] = gamma_prime(p)
    return graphs


def bundled_names() -> List[str]:
    return sorted(
        f.name[:-5] for f in resources.files("confspace.data").iterdir() if f.name.endswith(".json")
    )


def bundled_text(name: str) -> str:
    f = resources.files("confspace.data").joinpath(f"{name}.json")
    if not f.is_file():
        raise KeyError(f"no bundled graph named {name!r}; have {bundled_names()}")
    return f.read_text()


def load_bundled(name: str) -> Graph:
    import json

    return graph_from_dict(json.loads(bundled_text(name)))


def write_corpus(directory) -> List[Path]:
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for name, g in corpus().items():
        path = out / f"{name}.json"
        write_graph(g, path)
        paths.append(path)
    return paths


if __name__ == "__main__":
    import sys

    for path in write_corpus(sys.argv[1] if len(sys.argv) > 1 else Path(__file__).parent / "data"):
        print(path)
