"""Two-terminal directed networks and their minimal paths and cuts.

A network is a set of directed arcs between labelled nodes.  Each arc carries
a component id; several arcs may share one component (an undirected edge is
two antiparallel arcs on the same component), and a component is either up
or down as a whole.

Component states are plain ints used as bitmasks: bit ``i-1`` set means
component ``i`` works.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable

__all__ = [
    "Arc",
    "Network",
    "NetworkError",
    "parse_network",
    "load_network",
    "fixture",
    "FIXTURES",
    "is_working",
    "minimal_paths",
    "minimal_cuts",
    "minimal_transversals",
    "brute_force_minimal_paths",
    "brute_force_minimal_cuts",
    "mask_of",
    "components_of",
]

BRUTE_FORCE_LIMIT = 12


class NetworkError(ValueError):
    """Raised for malformed network documents."""


@dataclass(frozen=True)
class Arc:
    id: int
    tail: str
    head: str
    component: int


@dataclass(frozen=True)
class Network:
    nodes: tuple[str, ...]
    arcs: tuple[Arc, ...]
    source: str
    sink: str
    n: int = field(init=False)

    def __post_init__(self):
        node_set = set(self.nodes)
        if len(node_set) != len(self.nodes):
            raise NetworkError("duplicate node label")
        for label, role in ((self.source, "source"), (self.sink, "sink")):
            if label not in node_set:
                raise NetworkError(f"{role} {label!r} is not a node")
        seen = set()
        for arc in self.arcs:
            if arc.id in seen:
                raise NetworkError(f"duplicate arc id {arc.id}")
            seen.add(arc.id)
            for end in (arc.tail, arc.head):
                if end not in node_set:
                    raise NetworkError(f"arc {arc.id} references unknown node {end!r}")
            if arc.tail == arc.head:
                raise NetworkError(f"arc {arc.id} is a self-loop at {arc.tail!r}")
        comps = sorted({a.component for a in self.arcs})
        if comps != list(range(1, len(comps) + 1)):
            raise NetworkError(f"component ids must be exactly 1..n, got {comps}")
        object.__setattr__(self, "n", len(comps))

    @cached_property
    def adjacency(self) -> dict[str, list[tuple[str, int]]]:
        adj: dict[str, list[tuple[str, int]]] = {v: [] for v in self.nodes}
        for arc in self.arcs:
            adj[arc.tail].append((arc.head, arc.component))
        return adj

    def to_json(self) -> dict:
        return {
            "nodes": list(self.nodes),
            "source": self.source,
            "sink": self.sink,
            "arcs": [
                {"id": a.id, "from": a.tail, "to": a.head, "component": a.component}
                for a in self.arcs
            ],
        }


def mask_of(components: Iterable[int]) -> int:
    mask = 0
    for c in components:
        mask |= 1 << (c - 1)
    return mask


def components_of(mask: int) -> frozenset[int]:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return frozenset(out)


def parse_network(text: str | dict) -> Network:
    """Build a validated :class:`Network` from a JSON document.

    ``"component"`` defaults to the arc id when omitted.
    """
    if isinstance(text, (str, bytes)):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise NetworkError(f"invalid JSON: {exc}") from exc
    else:
        doc = text
    if not isinstance(doc, dict):
        raise NetworkError("network document must be a JSON object")
    for key in ("nodes", "arcs"):
        if key not in doc:
            raise NetworkError(f"missing required key {key!r}")
    for key in ("source", "sink"):
        if key not in doc:
            raise NetworkError(f"missing {key}")
    if not isinstance(doc["nodes"], list) or not isinstance(doc["arcs"], list):
        raise NetworkError("'nodes' and 'arcs' must be lists")
    nodes = tuple(str(v) for v in doc["nodes"])
    arcs = []
    for k, raw in enumerate(doc["arcs"]):
        if not isinstance(raw, dict):
            raise NetworkError(f"arc #{k} is not an object")
        for key in ("id", "from", "to"):
            if key not in raw:
                raise NetworkError(f"arc #{k} lacks {key!r}")
        aid = raw["id"]
        comp = raw.get("component", aid)
        if not isinstance(aid, int) or isinstance(aid, bool):
            raise NetworkError(f"arc #{k} id must be an integer")
        if not isinstance(comp, int) or isinstance(comp, bool):
            raise NetworkError(f"arc {aid} component must be an integer")
        arcs.append(Arc(aid, str(raw["from"]), str(raw["to"]), comp))
    return Network(nodes, tuple(arcs), str(doc["source"]), str(doc["sink"]))


# In fig2 arc 3 runs C->B; fig1 reverses it.
_BRIDGE_FIG2 = {
    "nodes": ["A", "B", "C", "D"],
    "source": "A",
    "sink": "D",
    "arcs": [
        {"id": 1, "from": "A", "to": "B"},
        {"id": 2, "from": "A", "to": "C"},
        {"id": 3, "from": "C", "to": "B"},
        {"id": 4, "from": "B", "to": "D"},
        {"id": 5, "from": "C", "to": "D"},
    ],
}
_BRIDGE_FIG1 = {
    **_BRIDGE_FIG2,
    "arcs": [dict(a, **({"from": "B", "to": "C"} if a["id"] == 3 else {})) for a in _BRIDGE_FIG2["arcs"]],
}

FIXTURES = {"fig1": _BRIDGE_FIG1, "fig2": _BRIDGE_FIG2}


def fixture(name: str) -> Network:
    """Return a built-in network (``"fig1"`` or ``"fig2"``)."""
    name = name.removeprefix("fixture:")
    if name not in FIXTURES:
        raise NetworkError(f"unknown fixture {name!r}; known: {sorted(FIXTURES)}")
    return parse_network(FIXTURES[name])


def load_network(source: str) -> Network:
    """Load ``fixture:<name>`` or a JSON file path."""
    if source.startswith("fixture:"):
        return fixture(source)
    with open(source, encoding="utf-8") as fh:
        return parse_network(fh.read())


def is_working(net: Network, state: int | Iterable[int]) -> bool:
    """True iff the sink is reachable from the source over up components.

    ``state`` is an up-set, either a bitmask or an iterable of component ids.
    """
    up = state if isinstance(state, int) else mask_of(state)
    if net.source == net.sink:
        return True
    adj = net.adjacency
    seen = {net.source}
    queue = deque([net.source])
    while queue:
        v = queue.popleft()
        for w, comp in adj[v]:
            if w in seen or not (up >> (comp - 1)) & 1:
                continue
            if w == net.sink:
                return True
            seen.add(w)
            queue.append(w)
    return False


def _minimize(masks: Iterable[int]) -> list[int]:
    """Drop every mask that is a proper superset of another."""
    out: list[int] = []
    for m in sorted(set(masks), key=lambda x: (x.bit_count(), x)):
        if not any(k & m == k for k in out):
            out.append(m)
    return out


def _sort_key(s: frozenset[int]):
    return (len(s), sorted(s))


def minimal_paths(net: Network) -> list[frozenset[int]]:
    """All inclusion-minimal working component sets.

    Simple source-to-sink paths are enumerated depth first; their component
    sets are then reduced to the minimal ones.  A network whose source equals
    its sink has the single empty path.
    """
    if net.source == net.sink:
        return [frozenset()]
    adj = net.adjacency
    found: set[int] = set()

    def dfs(v: str, visited: set[str], mask: int):
        for w, comp in adj[v]:
            if w in visited:
                continue
            m = mask | (1 << (comp - 1))
            if w == net.sink:
                found.add(m)
                continue
            visited.add(w)
            dfs(w, visited, m)
            visited.remove(w)

    dfs(net.source, {net.source}, 0)
    return sorted((components_of(m) for m in _minimize(found)), key=_sort_key)


def minimal_transversals(family: Iterable[int]) -> list[int]:
    """Minimal hitting sets of a family of bitmasks (Berge's algorithm)."""
    current = [0]
    for edge in _minimize(family):
        nxt = []
        for t in current:
            if t & edge:
                nxt.append(t)
            else:
                e = edge
                while e:
                    low = e & -e
                    nxt.append(t | low)
                    e ^= low
        current = _minimize(nxt)
    return current


def minimal_cuts(net: Network) -> list[frozenset[int]]:
    """All inclusion-minimal cuts, as minimal transversals of the minimal paths.

    When the sink is unreachable even with every component up, the empty set
    is the (only) minimal cut.
    """
    paths = [mask_of(p) for p in minimal_paths(net)]
    cuts = minimal_transversals(paths)
    return sorted((components_of(m) for m in cuts), key=_sort_key)


def _check_small(net: Network):
    if net.n > BRUTE_FORCE_LIMIT:
        raise ValueError(f"brute-force enumeration limited to n <= {BRUTE_FORCE_LIMIT} (got {net.n})")


def brute_force_minimal_paths(net: Network) -> list[frozenset[int]]:
    """Reference enumeration over all ``2**n`` up-sets."""
    _check_small(net)
    working = [m for m in range(1 << net.n) if is_working(net, m)]
    return sorted((components_of(m) for m in _minimize(working)), key=_sort_key)


def brute_force_minimal_cuts(net: Network) -> list[frozenset[int]]:
    """Reference enumeration: failed sets whose complement does not work."""
    _check_small(net)
    full = (1 << net.n) - 1
    cuts = [m for m in range(1 << net.n) if not is_working(net, full & ~m)]
    return sorted((components_of(m) for m in _minimize(cuts)), key=_sort_key)
