"""
Combinatorial model of the Kummer 16_6 configuration.

Subsets of the six Weierstrass points modulo complement form a group of
order 32 under symmetric difference. Even classes are the 16 nodes (2-torsion
points), odd classes are the 16 tropes (theta characteristics); a node lies
on a trope when their difference is a single point.
"""

import itertools
import logging
from collections import Counter
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Tuple

from .exceptions import ChernAuditError


logger = logging.getLogger(__name__)

WEIERSTRASS_POINTS: FrozenSet[int] = frozenset(range(1, 7))
NODES_PER_TROPE = 6


@dataclass(frozen=True, order=True)
class WeierstrassSet:
    """Canonical representative: |S| <= 3, and 1 in S when |S| = 3"""
    members: Tuple[int, ...]

    @classmethod
    def of(cls, members: Iterable[int]) -> "WeierstrassSet":
        chosen = frozenset(members)
        if not chosen <= WEIERSTRASS_POINTS:
            raise ValueError(f"{sorted(chosen)} is not a subset of 1..6")
        complement = WEIERSTRASS_POINTS - chosen
        if len(chosen) > 3 or (len(chosen) == 3 and 1 not in chosen):
            chosen = complement
        return cls(tuple(sorted(chosen)))

    def __post_init__(self):
        size = len(self.members)
        if size > 3 or (size == 3 and 1 not in self.members):
            raise ValueError(f"{self.members} is not a canonical representative")

    @property
    def as_set(self) -> FrozenSet[int]:
        return frozenset(self.members)

    @property
    def is_even(self) -> bool:
        return len(self.members) % 2 == 0

    def __xor__(self, other: "WeierstrassSet") -> "WeierstrassSet":
        return WeierstrassSet.of(self.as_set ^ other.as_set)

    def render(self) -> str:
        return "{" + ",".join(str(m) for m in self.members) + "}"


@dataclass(frozen=True, order=True)
class Node:
    cls: WeierstrassSet

    def __post_init__(self):
        if not self.cls.is_even:
            raise ValueError(f"node label {self.cls.render()} must have even size")

    def render(self) -> str:
        return self.cls.render()


@dataclass(frozen=True, order=True)
class Trope:
    cls: WeierstrassSet

    def __post_init__(self):
        if self.cls.is_even:
            raise ValueError(f"trope label {self.cls.render()} must have odd size")

    def render(self) -> str:
        return self.cls.render()


def node(*members: int) -> Node:
    return Node(WeierstrassSet.of(members))


def trope(*members: int) -> Trope:
    return Trope(WeierstrassSet.of(members))


def _all_classes() -> List[WeierstrassSet]:
    classes = {
        WeierstrassSet.of(subset)
        for size in range(7)
        for subset in itertools.combinations(sorted(WEIERSTRASS_POINTS), size)
    }
    return sorted(classes, key=lambda c: (len(c.members), c.members))


def enumerate_nodes() -> List[Node]:
    return [Node(c) for c in _all_classes() if c.is_even]


def enumerate_tropes() -> List[Trope]:
    return [Trope(c) for c in _all_classes() if not c.is_even]


def incident(n: Node, t: Trope) -> bool:
    """True when n.cls + t.cls is represented by a single point"""
    return len((n.cls ^ t.cls).members) == 1


def translate_node(n: Node, g: Node) -> Node:
    return Node(n.cls ^ g.cls)


def translate_trope(t: Trope, g: Node) -> Trope:
    return Trope(t.cls ^ g.cls)


def nodes_on(t: Trope) -> List[Node]:
    return [n for n in enumerate_nodes() if incident(n, t)]


def tropes_through(n: Node) -> List[Trope]:
    return [t for t in enumerate_tropes() if incident(n, t)]


def incidence_matrix() -> List[List[int]]:
    """Rows indexed by nodes, columns by tropes, in enumeration order"""
    tropes = enumerate_tropes()
    return [[1 if incident(n, t) else 0 for t in tropes] for n in enumerate_nodes()]


def verify_16_6() -> Dict[str, object]:
    """Row and column sums of the incidence matrix and the total count"""
    matrix = incidence_matrix()
    row_sums = Counter(sum(row) for row in matrix)
    column_sums = Counter(sum(column) for column in zip(*matrix))
    total = sum(sum(row) for row in matrix)
    passed = set(row_sums) == {NODES_PER_TROPE} and set(column_sums) == {NODES_PER_TROPE}
    logger.debug(f"16_6 row sums {dict(row_sums)}, column sums {dict(column_sums)}")
    return {
        "nodes": len(matrix),
        "tropes": len(matrix[0]) if matrix else 0,
        "row_sums": sorted(row_sums),
        "column_sums": sorted(column_sums),
        "incidences": total,
        "passed": passed,
    }


def line_partner(t: Trope, n1: Node, n2: Node) -> Trope:
    """The other trope through the line joining two nodes of t"""
    if not (incident(n1, t) and incident(n2, t)):
        raise ChernAuditError(f"nodes {n1.render()}, {n2.render()} do not both lie on {t.render()}")
    if n1 == n2:
        raise ChernAuditError("a line needs two distinct nodes")
    return Trope(t.cls ^ n1.cls ^ n2.cls)


def trope_line_count(t: Trope) -> Dict[str, object]:
    """Pairs of nodes of t, and the trope each pair determines"""
    partners = [line_partner(t, n1, n2) for n1, n2 in itertools.combinations(nodes_on(t), 2)]
    return {
        "lines": len(partners),
        "distinct_partners": len(set(partners)),
        "partners_exclude_self": t not in partners,
    }


def shared_node_counts() -> Counter:
    """How many nodes each unordered pair of distinct tropes has in common"""
    counts: Counter = Counter()
    for t1, t2 in itertools.combinations(enumerate_tropes(), 2):
        shared = set(nodes_on(t1)) & set(nodes_on(t2))
        counts[len(shared)] += 1
    return counts


def translation_invariant() -> bool:
    """incident(n, t) iff incident(n + g, t + g) for every node g"""
    nodes, tropes = enumerate_nodes(), enumerate_tropes()
    return all(
        incident(n, t) == incident(translate_node(n, g), translate_trope(t, g))
        for g in nodes
        for n in nodes
        for t in tropes
    )


def render_incidence(matrix: List[List[int]]) -> str:
    header = " " * 10 + " ".join(f"{t.render():>9}" for t in enumerate_tropes())
    lines = [header]
    for n, row in zip(enumerate_nodes(), matrix):
        lines.append(f"{n.render():>9} " + " ".join(f"{v:>9}" for v in row))
    return "\n".join(lines)
