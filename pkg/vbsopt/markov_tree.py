"""Rooted Markov trees: construction by variable elimination, the one-step-look-ahead
ordering heuristic, validation and text/DOT rendering.

Vertices are ``VariableSet`` objects (deduplicated by set equality) and edges point from
child to parent. The root is the empty set.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property
from types import MappingProxyType
from typing import Iterable, Mapping, Optional, Sequence

import networkx as nx

from .valuation import (
    EMPTY_SET,
    OptimizationAlgebra,
    Valuation,
    Variable,
    VariableSet,
    combine_all,
    vacuous,
)

logger = logging.getLogger(__name__)

ROOT = EMPTY_SET


class TreeError(Exception):
    """Raised when a Markov tree cannot be built or does not fit its valuations."""


@dataclass(frozen=True)
class Hypergraph:
    hyperedges: frozenset[VariableSet]

    def __post_init__(self) -> None:
        object.__setattr__(self, "hyperedges", frozenset(self.hyperedges))
        if any(not h for h in self.hyperedges):
            raise TreeError("hyperedges must be non-empty")

    @classmethod
    def from_scopes(cls, scopes: Iterable[VariableSet]) -> "Hypergraph":
        return cls(frozenset(scopes))

    @property
    def universe(self) -> VariableSet:
        return VariableSet.union_all(self.hyperedges)

    def ordered(self) -> list[VariableSet]:
        return sorted(self.hyperedges, key=lambda h: h.sort_key)


@dataclass(frozen=True)
class MarkovViolation:
    kind: str
    detail: str
    vertex: Optional[VariableSet] = None
    variable: Optional[Variable] = None

    def __str__(self) -> str:
        return f"{self.kind}: {self.detail}"


@dataclass(frozen=True, eq=False)
class RootedMarkovTree:
    vertices: tuple[VariableSet, ...]
    edges: tuple[tuple[VariableSet, VariableSet], ...]
    valuations: Mapping[VariableSet, Valuation] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "vertices", tuple(dict.fromkeys(self.vertices)))
        object.__setattr__(self, "edges", tuple(self.edges))
        object.__setattr__(self, "valuations", MappingProxyType(dict(self.valuations)))

    @classmethod
    def from_edges(cls, edges: Sequence[tuple[VariableSet, VariableSet]]) -> "RootedMarkovTree":
        vertices: list[VariableSet] = []
        for child, parent in edges:
            vertices.extend((child, parent))
        return cls(tuple(vertices), tuple(edges))

    @property
    def root(self) -> VariableSet:
        return ROOT

    @cached_property
    def _parents(self) -> dict[VariableSet, VariableSet]:
        parents: dict[VariableSet, VariableSet] = {}
        for child, parent in self.edges:
            parents.setdefault(child, parent)
        return parents

    @cached_property
    def _downward(self) -> nx.DiGraph:
        # parent -> child, siblings inserted in canonical order
        downward = nx.DiGraph()
        downward.add_nodes_from(self.vertices)
        kept = [(parent, child) for child, parent in self.edges if self._parents.get(child) == parent]
        downward.add_edges_from(sorted(kept, key=lambda edge: edge[1].sort_key))
        return downward

    @cached_property
    def graph(self) -> nx.DiGraph:
        graph = nx.DiGraph()
        graph.add_nodes_from(self.vertices)
        graph.add_edges_from(self.edges)
        return graph

    def parent(self, vertex: VariableSet) -> Optional[VariableSet]:
        return self._parents.get(vertex)

    def children(self, vertex: VariableSet) -> list[VariableSet]:
        if vertex not in self._downward:
            return []
        return list(self._downward.successors(vertex))

    def eliminated_variable(self, vertex: VariableSet) -> Optional[Variable]:
        parent = self.parent(vertex)
        if parent is None:
            return None
        dropped = vertex - parent
        if len(dropped) == 1:
            return dropped.members[0]
        return None

    def postorder(self) -> list[VariableSet]:
        """Vertices reachable from the root, children before parents, siblings in canonical order."""
        if self.root not in self._downward:
            return [self.root]
        return list(nx.dfs_postorder_nodes(self._downward, source=self.root))

    @property
    def universe(self) -> VariableSet:
        return VariableSet.union_all(self.vertices)

    def max_frame_size(self) -> int:
        return max(v.frame_size for v in self.vertices)

    def valuation(self, vertex: VariableSet) -> Optional[Valuation]:
        return self.valuations.get(vertex)

    def with_valuations(self, valuations: Mapping[VariableSet, Valuation]) -> "RootedMarkovTree":
        return RootedMarkovTree(self.vertices, self.edges, valuations)


# Construction ---------------------------------------------------------
def _elimination_step(
    current: set[VariableSet], variable: Variable
) -> tuple[list[VariableSet], VariableSet, VariableSet]:
    touched = sorted((h for h in current if variable in h), key=lambda h: h.sort_key)
    if not touched:
        raise TreeError(f"variable {variable.name} is not in any remaining hyperedge")
    g = VariableSet.union_all(touched)
    return touched, g, g - VariableSet.of(variable)


def _check_order(hypergraph: Hypergraph, order: Sequence[Variable]) -> None:
    universe = hypergraph.universe
    if len(order) != len(universe) or set(order) != set(universe.members):
        names = ",".join(v.name for v in order)
        raise TreeError(f"elimination order {names} does not cover exactly the variables {universe}")


def build_tree(hypergraph: Hypergraph, order: Sequence[Variable]) -> RootedMarkovTree:
    """Arrange the hyperedges in a rooted Markov tree by eliminating variables in ``order``.

    Step i merges every current hyperedge holding X_i into g_i, links them to g_i, links g_i to
    f_i = g_i - {X_i} and replaces them by f_i. When a connected component is exhausted before
    the last step (f_i empty), its last vertex is hung under the next g instead of the root,
    so the root keeps a single child.
    """
    order = tuple(order)
    _check_order(hypergraph, order)

    current: set[VariableSet] = set(hypergraph.hyperedges)
    vertices: dict[VariableSet, None] = dict.fromkeys(hypergraph.ordered())
    edges: list[tuple[VariableSet, VariableSet]] = []
    finished: list[VariableSet] = []

    for step, variable in enumerate(order):
        touched, g, f = _elimination_step(current, variable)
        vertices.update(dict.fromkeys(touched))
        vertices[g] = None
        edges.extend((h, g) for h in touched if h != g)
        edges.extend((done, g) for done in finished)
        finished = []
        current.difference_update(touched)
        if f or step == len(order) - 1:
            vertices[f] = None
            edges.append((g, f))
            if f:
                current.add(f)
        else:
            finished.append(g)
        logger.debug("step %d: eliminate %s, g=%s f=%s", step + 1, variable.name, g, f)

    tree = RootedMarkovTree(tuple(vertices), tuple(edges))
    logger.info("built Markov tree with %d vertices, largest frame %d", len(tree.vertices), tree.max_frame_size())
    return tree


def osla_order(hypergraph: Hypergraph) -> tuple[Variable, ...]:
    """One-step-look-ahead: repeatedly mark the variable whose f has the smallest frame.

    Ties go to the variable declared first.
    """
    universe = hypergraph.universe
    if not universe:
        raise TreeError("cannot order an empty hypergraph")
    current: set[VariableSet] = set(hypergraph.hyperedges)
    unmarked = list(universe)
    order: list[Variable] = []
    while unmarked:
        best: Optional[tuple[int, int, Variable]] = None
        for variable in unmarked:
            _, _, f = _elimination_step(current, variable)
            candidate = (f.frame_size, variable.index, variable)
            if best is None or candidate[:2] < best[:2]:
                best = candidate
        chosen = best[2]
        touched, _, f = _elimination_step(current, chosen)
        current.difference_update(touched)
        if f:
            current.add(f)
        unmarked.remove(chosen)
        order.append(chosen)
    logger.info("one-step-look-ahead order: %s", ",".join(v.name for v in order))
    return tuple(order)


# Validation -----------------------------------------------------------
def validate_markov(tree: RootedMarkovTree) -> list[MarkovViolation]:
    violations: list[MarkovViolation] = []
    root = tree.root
    out_edges: dict[VariableSet, int] = {v: 0 for v in tree.vertices}
    for child, _ in tree.edges:
        out_edges[child] = out_edges.get(child, 0) + 1

    if root not in out_edges:
        violations.append(MarkovViolation("missing-root", "the empty set is not a vertex"))
    elif out_edges[root]:
        violations.append(MarkovViolation("root-has-parent", "edges leave the root", vertex=root))
    for vertex, count in out_edges.items():
        if vertex == root:
            continue
        if count == 0:
            violations.append(MarkovViolation("orphan", f"{vertex} has no parent", vertex=vertex))
        elif count > 1:
            violations.append(MarkovViolation("multiple-parents", f"{vertex} has {count} parents", vertex=vertex))

    undirected = tree.graph.to_undirected(as_view=True)
    if not undirected.number_of_nodes() or not nx.is_tree(undirected):
        violations.append(MarkovViolation("not-a-tree", "edges do not form a tree"))
    if root in out_edges:
        root_children = sum(1 for _, parent in tree.edges if parent == root)
        if root_children != 1:
            violations.append(
                MarkovViolation("root-children", f"the root has {root_children} children", vertex=root)
            )

    for variable in tree.universe:
        holders = [v for v in tree.vertices if variable in v]
        anchor = holders[0]
        offenders: dict[VariableSet, None] = {}
        for other in holders[1:]:
            if not nx.has_path(undirected, anchor, other):
                continue
            for vertex in nx.shortest_path(undirected, anchor, other):
                if variable not in vertex:
                    offenders[vertex] = None
        for vertex in offenders:
            violations.append(
                MarkovViolation(
                    "markov",
                    f"{variable.name} is missing from {vertex} on a path between vertices holding it",
                    vertex=vertex,
                    variable=variable,
                )
            )
    return violations


def attach_valuations(
    tree: RootedMarkovTree, factors: Iterable[Valuation], alg: OptimizationAlgebra
) -> RootedMarkovTree:
    """Give every non-empty vertex one valuation: its factors combined, or the vacuous one."""
    grouped: dict[VariableSet, list[Valuation]] = {}
    known = set(tree.vertices)
    for factor in factors:
        if factor.domain not in known:
            raise TreeError(f"factor scope {factor.domain} is not a vertex of the tree")
        grouped.setdefault(factor.domain, []).append(factor)
    assigned = {
        vertex: combine_all(grouped[vertex], alg) if vertex in grouped else vacuous(vertex, alg)
        for vertex in tree.vertices
        if vertex
    }
    return tree.with_valuations(assigned)


# Rendering ------------------------------------------------------------
def tree_to_text(tree: RootedMarkovTree) -> str:
    lines = [f"vertices: {len(tree.vertices)}  largest frame: {tree.max_frame_size()}"]
    for vertex in reversed(tree.postorder()):
        parent = tree.parent(vertex)
        if parent is None:
            continue
        line = f"{vertex} -> {parent}"
        eliminated = tree.eliminated_variable(vertex)
        if eliminated is not None:
            line += f"  [eliminates {eliminated.name}]"
        lines.append(line)
    return "\n".join(lines) + "\n"


def tree_to_dot(tree: RootedMarkovTree, name: str = "markov_tree") -> str:
    lines = [f"digraph {name} {{", "\trankdir=BT;"]
    for vertex in reversed(tree.postorder()):
        label = vertex.label()
        shape = "doublecircle" if vertex == tree.root else "box"
        lines.append(f'\t"{label}" [label="{label}", shape={shape}];')
    for vertex in reversed(tree.postorder()):
        parent = tree.parent(vertex)
        if parent is not None:
            lines.append(f'\t"{vertex.label()}" -> "{parent.label()}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
