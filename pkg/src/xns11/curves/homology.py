"""First homology of a branched cover of the line from its monodromy.

The lifted loops form a graph on the sheets over the base point. Its cycle space is
the homology of the punctured surface; dividing out the small loops around the
punctures leaves H_1 of the compact surface. Intersection numbers are counted at the
base fiber, where the cyclic order of the loop ends is known.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from xns11.core.errors import ConvergenceError, IdentityError
from xns11.lattices.normal_forms import determinant, snf

logger = logging.getLogger(__name__)

Step = tuple[int, int]


@dataclass(frozen=True)
class Edge:
    """Lift of loop ``loop`` starting on sheet ``source``."""

    loop: int
    source: int
    target: int


class SheetGraph:
    """Sheets over the base point joined by the lifts of the loops, in angular order."""

    def __init__(self, degree: int, permutations: Sequence[Sequence[int]]):
        self.degree = degree
        self.permutations = [tuple(p) for p in permutations]
        self.edges = [
            Edge(k, i, perm[i]) for k, perm in enumerate(self.permutations) for i in range(degree)
        ]
        self._tree, self._parent = self._spanning_tree()

    def edge_index(self, loop: int, sheet: int) -> int:
        return loop * self.degree + sheet

    def _spanning_tree(self) -> tuple[set[int], dict[int, Step]]:
        parent: dict[int, Step] = {}
        seen = {0}
        queue = deque([0])
        tree: set[int] = set()
        while queue:
            v = queue.popleft()
            for n, e in enumerate(self.edges):
                if e.source == v and e.target not in seen:
                    step, other = (n, 1), e.target
                elif e.target == v and e.source not in seen:
                    step, other = (n, -1), e.source
                else:
                    continue
                seen.add(other)
                tree.add(n)
                parent[other] = step
                queue.append(other)
        if len(seen) != self.degree:
            raise IdentityError("homology", "sheet graph is not connected")
        return tree, parent

    def _to_root(self, v: int) -> list[Step]:
        """Steps walking from v to sheet 0 along the tree."""
        out = []
        while v != 0:
            n, sign = self._parent[v]
            out.append((n, -sign))
            e = self.edges[n]
            v = e.source if sign == 1 else e.target
        return out

    @property
    def nontree(self) -> list[int]:
        return [n for n in range(len(self.edges)) if n not in self._tree]

    def fundamental_walks(self) -> list[list[Step]]:
        """One closed walk per edge outside the spanning tree."""
        walks = []
        for n in self.nontree:
            e = self.edges[n]
            up = self._to_root(e.target)
            down = [(m, -s) for m, s in reversed(self._to_root(e.source))]
            while up and down and up[-1][0] == down[0][0]:
                up.pop()
                down.pop(0)
            walks.append([(n, 1)] + up + down)
        return walks

    def chain(self, walk: Sequence[Step]) -> np.ndarray:
        vec = np.zeros(len(self.edges), dtype=object)
        for n, sign in walk:
            vec[n] += sign
        return vec

    def puncture_chains(self) -> list[np.ndarray]:
        """Small loops around every point over a branch point and over infinity."""
        out = []
        for k, perm in enumerate(self.permutations):
            for cycle in permutation_cycles(perm):
                vec = np.zeros(len(self.edges), dtype=object)
                for i in cycle:
                    vec[self.edge_index(k, i)] = 1
                out.append(vec)
        done: set[int] = set()
        for start in range(self.degree):
            if start in done:
                continue
            vec = np.zeros(len(self.edges), dtype=object)
            cur = start
            while True:
                done.add(cur)
                for k, perm in enumerate(self.permutations):
                    vec[self.edge_index(k, cur)] += 1
                    cur = perm[cur]
                if cur == start:
                    break
            out.append(vec)
        return out

    # ── Intersection pairing ──────────────────────────────────────────

    def _passages(self, walk: Sequence[Step]) -> list[tuple[int, int, int]]:
        """(sheet, position of arriving end, position of leaving end) at each visit.

        Around the base point the lift of loop k leaves at position 2k and returns at
        position 2k + 1, counterclockwise.
        """
        out = []
        for j, (n, sign) in enumerate(walk):
            m, sign_next = walk[(j + 1) % len(walk)]
            e = self.edges[n]
            vertex = e.target if sign == 1 else e.source
            arrive = 2 * e.loop + 1 if sign == 1 else 2 * e.loop
            leave = 2 * self.edges[m].loop + (0 if sign_next == 1 else 1)
            out.append((vertex, arrive, leave))
        return out

    def intersection(self, a: Sequence[Step], b: Sequence[Step]) -> int:
        """a . b, with b pushed off to its right inside the thickened graph."""
        size = 6 * len(self.permutations)
        total = 0
        pb = self._passages(b)
        for va, a_in, a_out in self._passages(a):
            x1, x2 = 3 * a_in, 3 * a_out
            span = (x2 - x1) % size
            for vb, b_in, b_out in pb:
                if vb != va:
                    continue
                y1, y2 = 3 * b_in + 1, 3 * b_out - 1
                inside_1 = 0 < (y1 - x1) % size < span
                inside_2 = 0 < (y2 - x1) % size < span
                total += int(inside_1) - int(inside_2)
        return total


def permutation_cycles(perm: Sequence[int]) -> list[tuple[int, ...]]:
    seen: set[int] = set()
    out = []
    for start in range(len(perm)):
        if start in seen:
            continue
        cycle = [start]
        seen.add(start)
        nxt = perm[start]
        while nxt != start:
            cycle.append(nxt)
            seen.add(nxt)
            nxt = perm[nxt]
        out.append(tuple(cycle))
    return out


@dataclass
class HomologyBasis:
    """Integer edge chains of a Z-basis of H_1 and their intersection matrix."""

    graph: SheetGraph
    cycles: np.ndarray
    intersection: np.ndarray
    punctures: np.ndarray

    @property
    def genus(self) -> int:
        return len(self.cycles) // 2

    def _flat(self, edge_values: np.ndarray) -> np.ndarray:
        return np.asarray(edge_values).reshape(len(self.graph.edges), -1)

    def periods(self, edge_values: np.ndarray) -> np.ndarray:
        """(differential, cycle) periods from integrals over the lifted loops."""
        return (self.cycles.astype(float) @ self._flat(edge_values)).T

    def null_periods(self, edge_values: np.ndarray) -> np.ndarray:
        return (self.punctures.astype(float) @ self._flat(edge_values)).T

    def words(self) -> list[list[list[int]]]:
        """Each basis cycle as (loop, sheet, multiplicity) triples."""
        out = []
        for row in self.cycles:
            out.append([
                [e.loop, e.source, int(c)] for e, c in zip(self.graph.edges, row) if c != 0
            ])
        return out


def homology_basis(degree: int, permutations: Sequence[Sequence[int]]) -> HomologyBasis:
    """Z-basis of H_1 from the permutations of the nontrivial loops in angular order."""
    graph = SheetGraph(degree, permutations)
    walks = graph.fundamental_walks()
    fundamental = np.array([graph.chain(w) for w in walks], dtype=object)
    punctures = np.array(graph.puncture_chains(), dtype=object)
    nontree = graph.nontree
    coords = punctures[:, nontree].T
    if not (coords.T @ fundamental == punctures).all():
        raise IdentityError("homology", "puncture loops are not closed in the sheet graph")

    pairing = np.array([[graph.intersection(a, b) for b in walks] for a in walks], dtype=object)
    if not (pairing == -pairing.T).all():
        raise IdentityError("homology", "intersection pairing is not antisymmetric")
    if (pairing @ coords != 0).any():
        raise IdentityError("homology", "puncture loops pair nontrivially with a cycle")

    reduced = snf(coords)
    rank = reduced.rank
    if any(d != 1 for d in reduced.factors[:rank]):
        raise ConvergenceError(f"torsion {reduced.nontrivial} in homology: bad monodromy")
    free = len(walks) - rank
    if free % 2:
        raise ConvergenceError(f"odd rank {free} for the first homology")
    basis = reduced.left_inverse[:, rank:]
    form = basis.T @ pairing @ basis
    if free and abs(determinant(form)) != 1:
        raise IdentityError("homology", "intersection form on the basis is not unimodular")
    logger.debug("sheet graph: %d edges, %d fundamental cycles, rank %d", len(graph.edges),
                 len(walks), free)
    return HomologyBasis(graph, basis.T @ fundamental, form, punctures)
