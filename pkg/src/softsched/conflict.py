"""Link conflict graph: which pairs of links may never share a time slot.

Two links conflict when they touch a common node, or when either receiver
would hear the other transmitter within ``beta_db`` of its own signal. The
margin test is pairwise; cumulative interference from several simultaneous
transmitters is deliberately not modelled.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .topology import Link, Node, PropagationParams, received_power_db


@dataclass(frozen=True)
class ConflictParams:
    """``beta_db`` is the acceptable interference margin in dB.

    ``beta_db = -inf`` is a supported sentinel that disables the margin test
    entirely, leaving only shared-node conflicts.
    """

    beta_db: float
    propagation: PropagationParams = field(default_factory=PropagationParams)

    def __post_init__(self):
        if math.isnan(self.beta_db):
            raise ValueError("beta_db must not be NaN")


@dataclass(eq=False)
class ConflictGraph:
    """Symmetric boolean adjacency over scheduled links, true on the diagonal.

    adjacency[i][j] means links i and j cannot be activated together. Every
    link conflicts with itself so that membership logic downstream needs no
    special case.
    """

    n_links: int
    adjacency: np.ndarray

    def __post_init__(self):
        self.adjacency = np.asarray(self.adjacency, dtype=bool)
        if self.adjacency.shape != (self.n_links, self.n_links):
            raise ValueError(
                f"adjacency shape {self.adjacency.shape} does not match n_links={self.n_links}"
            )
        if not np.array_equal(self.adjacency, self.adjacency.T):
            raise ValueError("adjacency must be symmetric")
        if not self.adjacency.diagonal().all():
            raise ValueError("adjacency diagonal must be true")

    @classmethod
    def from_pairs(cls, n_links: int, pairs) -> "ConflictGraph":
        adj = np.eye(n_links, dtype=bool)
        for i, j in pairs:
            if not (0 <= i < n_links and 0 <= j < n_links) or i == j:
                raise ValueError(f"bad conflict pair ({i}, {j}) for {n_links} links")
            adj[i, j] = adj[j, i] = True
        return cls(n_links, adj)

    def edge_set(self) -> frozenset[tuple[int, int]]:
        """Off-diagonal conflicts as (i, j) pairs with i < j."""
        ii, jj = np.nonzero(np.triu(self.adjacency, k=1))
        return frozenset(zip(ii.tolist(), jj.tolist()))


def physically_adjacent(a: Link, b: Link) -> bool:
    """True when the two links share a node (including a link with itself)."""
    return bool({a.tx, a.rx} & {b.tx, b.rx})


def interference_adjacent(a: Link, b: Link, nodes: list[Node],
                          params: ConflictParams) -> bool:
    """Margin test for node-disjoint links a and b.

    At b's receiver, a's transmitter is the interferer; at a's receiver, b's
    transmitter is. The pair conflicts if either desired signal fails to
    exceed the interference by more than beta_db. Testing both receivers
    makes the relation symmetric.
    """
    p = params.propagation
    own_b = received_power_db(nodes[b.tx], nodes[b.rx].position, p)
    other_at_b = received_power_db(nodes[a.tx], nodes[b.rx].position, p)
    if own_b <= other_at_b + params.beta_db:
        return True
    own_a = received_power_db(nodes[a.tx], nodes[a.rx].position, p)
    other_at_a = received_power_db(nodes[b.tx], nodes[a.rx].position, p)
    return own_a <= other_at_a + params.beta_db


def build_conflict_graph(links: list[Link], nodes: list[Node],
                         params: ConflictParams) -> ConflictGraph:
    """Pairwise conflict matrix: shared node or failed interference margin."""
    if not links:
        raise ValueError("cannot build a conflict graph over an empty link list")
    n = len(links)
    adj = np.eye(n, dtype=bool)
    for i in range(n):
        for j in range(i + 1, n):
            hit = physically_adjacent(links[i], links[j]) or interference_adjacent(
                links[i], links[j], nodes, params
            )
            adj[i, j] = adj[j, i] = hit
    return ConflictGraph(n, adj)


def load_conflict_fixture(path) -> tuple[ConflictGraph, tuple[int, ...] | None]:
    """Read a conflict fixture: {"n_links": L, "conflicts": [[i,j],...], "rates": [...]}.

    ``rates`` is optional at this level; callers that need demands must check
    for it. The fixture lets known adjacency structures be injected without
    any geometry behind them.
    """
    with open(path) as fh:
        data = json.load(fh)
    try:
        n_links = int(data["n_links"])
        pairs = [(int(i), int(j)) for i, j in data["conflicts"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"{path}: conflict fixture needs 'n_links' and 'conflicts'") from exc
    graph = ConflictGraph.from_pairs(n_links, pairs)
    rates = data.get("rates")
    if rates is not None:
        rates = tuple(int(r) for r in rates)
        if len(rates) != n_links:
            raise ValueError(f"{path}: {len(rates)} rates for {n_links} links")
    return graph, rates


def is_topology_fixture(path) -> bool:
    """Distinguish topology fixtures from conflict fixtures by their keys."""
    with open(path) as fh:
        data = json.load(fh)
    if isinstance(data, dict) and "nodes" in data:
        return True
    if isinstance(data, dict) and "n_links" in data:
        return False
    raise ValueError(f"{path}: neither a topology nor a conflict fixture")
