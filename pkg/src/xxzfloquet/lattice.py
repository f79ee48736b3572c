"""Interaction graphs: periodic/open chains, square lattices and edge lists."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Iterable

from .errors import InvalidArgumentError

# Shortest periodic chain on which the four-site window i-1..i+2 never
# covers a site twice.
MIN_DYNAMICS_CHAIN = 6


@dataclass(frozen=True)
class LatticeGraph:
    """Undirected simple graph on sites ``0 .. num_sites-1``.

    ``edges`` holds each bond once as an ordered pair in construction
    order (for chains, ``(i, i+1)``; the wraparound bond is ``(L-1, 0)``).
    """

    num_sites: int
    edges: tuple[tuple[int, int], ...]
    kind: str = "custom"
    periodic: bool = False
    shape: tuple[int, ...] = ()
    adjacency: tuple[tuple[int, ...], ...] = field(init=False, repr=False)

    def __post_init__(self):
        if self.num_sites < 1:
            raise InvalidArgumentError("num_sites must be positive")
        seen = set()
        adj: list[list[int]] = [[] for _ in range(self.num_sites)]
        for i, j in self.edges:
            if not (0 <= i < self.num_sites and 0 <= j < self.num_sites):
                raise InvalidArgumentError(f"edge ({i}, {j}) references a site outside 0..{self.num_sites - 1}")
            if i == j:
                raise InvalidArgumentError(f"self-loop at site {i}")
            key = frozenset((i, j))
            if key in seen:
                raise InvalidArgumentError(f"duplicate edge ({i}, {j})")
            seen.add(key)
            adj[i].append(j)
            adj[j].append(i)
        object.__setattr__(self, "adjacency", tuple(tuple(sorted(a)) for a in adj))
        object.__setattr__(self, "_edge_set", frozenset(seen))

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def degree(self, site: int) -> int:
        return len(self.adjacency[site])

    def has_edge(self, i: int, j: int) -> bool:
        return frozenset((i, j)) in self._edge_set

    @property
    def is_periodic_chain(self) -> bool:
        return self.kind == "chain" and self.periodic


def build_chain(length: int, periodic: bool = True) -> LatticeGraph:
    """Nearest-neighbour chain; the bond ``(L-1, 0)`` is added iff periodic."""
    minimum = 3 if periodic else 2
    if length < minimum:
        kind = "periodic" if periodic else "open"
        raise InvalidArgumentError(f"{kind} chain needs length >= {minimum}, got {length}")
    edges = [(i, i + 1) for i in range(length - 1)]
    if periodic:
        edges.append((length - 1, 0))
    return LatticeGraph(length, tuple(edges), kind="chain", periodic=periodic, shape=(length,))


def build_square(lx: int, ly: int, periodic: bool = True) -> LatticeGraph:
    """Nearest-neighbour square lattice; site index is ``x + lx * y``."""
    minimum = 3 if periodic else 1
    if lx < minimum or ly < minimum:
        raise InvalidArgumentError(
            f"square lattice needs lx, ly >= {minimum} (periodic={periodic}), got {lx}x{ly}"
        )
    edges = []
    for y in range(ly):
        for x in range(lx):
            s = x + lx * y
            if x + 1 < lx or periodic:
                edges.append((s, (x + 1) % lx + lx * y))
            if y + 1 < ly or periodic:
                edges.append((s, x + lx * ((y + 1) % ly)))
    return LatticeGraph(lx * ly, tuple(edges), kind="square", periodic=periodic, shape=(lx, ly))


def build_custom(num_sites: int, edges: Iterable[tuple[int, int]]) -> LatticeGraph:
    """Graph from an explicit 0-based edge list."""
    return LatticeGraph(num_sites, tuple((int(i), int(j)) for i, j in edges), kind="custom")


def neighbor_sum_sites(graph: LatticeGraph, i: int, j: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Sites entering the staggered sum around bond ``(i, j)``.

    Returns ``(adjacency(i), adjacency(j))``: the staggered operator is the
    Sz sum over the first tuple minus the Sz sum over the second.  On open
    boundaries only existing neighbours are summed.
    """
    if not graph.has_edge(i, j):
        raise InvalidArgumentError(f"({i}, {j}) is not an edge of the lattice")
    return graph.adjacency[i], graph.adjacency[j]


def check_dynamics_chain(graph: LatticeGraph) -> None:
    """Warn when a periodic chain is too short for the four-site window."""
    if graph.is_periodic_chain and graph.num_sites < MIN_DYNAMICS_CHAIN:
        warnings.warn(
            f"periodic chain of length {graph.num_sites} < {MIN_DYNAMICS_CHAIN}: "
            "four-site clusters overlap themselves",
            stacklevel=2,
        )
