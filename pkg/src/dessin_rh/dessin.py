"""Dessins d'enfants as pairs of permutations, with plane-tree tools.

Edges are labelled ``0 .. e-1``.  A dessin is a pair of permutations
(black, white) generating a transitive group; cycles of each permutation
are the vertices of that colour, listed in the cyclic order of the edges
around the vertex.  The face permutation is ``black o white`` (white is
applied first).
"""

from __future__ import annotations

import cmath
from collections import Counter, deque
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np


class NotConnectedError(ValueError):
    pass


class NotATreeError(ValueError):
    pass


@dataclass(frozen=True)
class Permutation:
    """A bijection of ``{0, ..., e-1}`` given by its list of images."""

    images: tuple

    def __post_init__(self):
        images = tuple(int(i) for i in self.images)
        if sorted(images) != list(range(len(images))):
            raise ValueError(f"not a permutation: {list(images)}")
        object.__setattr__(self, "images", images)

    @classmethod
    def identity(cls, e: int) -> "Permutation":
        return cls(tuple(range(e)))

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], e: int | None = None) -> "Permutation":
        cycles = [list(c) for c in cycles]
        if e is None:
            e = max((max(c) for c in cycles if c), default=-1) + 1
        images = list(range(e))
        seen = set()
        for cyc in cycles:
            for i, a in enumerate(cyc):
                if a in seen or not 0 <= a < e:
                    raise ValueError(f"bad cycle notation: {cycles}")
                seen.add(a)
                images[a] = cyc[(i + 1) % len(cyc)]
        return cls(tuple(images))

    @property
    def size(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def __len__(self) -> int:
        return len(self.images)

    def compose(self, other: "Permutation") -> "Permutation":
        """``self o other``: apply ``other`` first."""
        return Permutation(tuple(self.images[j] for j in other.images))

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.images)
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation(tuple(inv))

    def conjugate(self, relabel: Sequence[int]) -> "Permutation":
        """Permutation ``relabel o self o relabel^-1``."""
        images = [0] * len(self.images)
        for i, j in enumerate(self.images):
            images[relabel[i]] = relabel[j]
        return Permutation(tuple(images))

    def cycles(self) -> list:
        return orbits(self)

    def cycle_type(self) -> tuple:
        return tuple(sorted((len(c) for c in orbits(self)), reverse=True))

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def __str__(self) -> str:
        return "".join("(" + " ".join(map(str, c)) + ")" for c in orbits(self))


def orbits(p: Permutation) -> list:
    """Cycles of ``p``, each starting at its smallest element, sorted."""
    seen = [False] * len(p)
    out = []
    for start in range(len(p)):
        if seen[start]:
            continue
        cyc = []
        i = start
        while not seen[i]:
            seen[i] = True
            cyc.append(i)
            i = p(i)
        out.append(cyc)
    return out


@dataclass(frozen=True)
class Dessin:
    black: Permutation
    white: Permutation

    def __post_init__(self):
        if len(self.black) != len(self.white):
            raise ValueError("black and white permutations differ in size")
        if len(self.black) < 1:
            raise ValueError("a dessin needs at least one edge")

    @classmethod
    def from_cycles(cls, black, white, edges: int | None = None) -> "Dessin":
        if edges is None:
            edges = max(max((max(c) for c in black if c), default=-1),
                        max((max(c) for c in white if c), default=-1)) + 1
        return cls(Permutation.from_cycles(black, edges), Permutation.from_cycles(white, edges))

    @property
    def edges(self) -> int:
        return len(self.black)

    @property
    def face(self) -> Permutation:
        return self.black.compose(self.white)

    def swapped(self) -> "Dessin":
        return Dessin(self.white, self.black)

    def relabeled(self, relabel: Sequence[int]) -> "Dessin":
        return Dessin(self.black.conjugate(relabel), self.white.conjugate(relabel))

    def is_transitive(self) -> bool:
        e = self.edges
        seen = {0}
        todo = [0]
        while todo:
            i = todo.pop()
            for j in (self.black(i), self.white(i)):
                if j not in seen:
                    seen.add(j)
                    todo.append(j)
        return len(seen) == e

    def valencies(self) -> tuple:
        """Sorted black and white vertex valencies."""
        return self.black.cycle_type(), self.white.cycle_type()

    def __str__(self) -> str:
        return f"Dessin(black={self.black}, white={self.white})"


# -- Euler characteristic -----------------------------------------------------


@dataclass(frozen=True)
class EulerData:
    vertices: int
    edges: int
    faces: int
    genus: int


def euler_data(d: Dessin) -> EulerData:
    if not d.is_transitive():
        raise NotConnectedError("not connected")
    v = len(orbits(d.black)) + len(orbits(d.white))
    e = d.edges
    f = len(orbits(d.face))
    chi = v - e + f
    assert chi % 2 == 0 and chi <= 2
    return EulerData(v, e, f, (2 - chi) // 2)


def is_plane_tree(d: Dessin) -> bool:
    data = euler_data(d)
    return data.vertices == data.edges + 1


def _require_tree(d: Dessin) -> None:
    if not is_plane_tree(d):
        raise NotATreeError("dessin is not a plane tree")


# -- classification -------------------------------------------------------------


@dataclass(frozen=True)
class TreeClass:
    """``kind`` is one of ``"star"``, ``"chain"``, ``"two_star"``, ``"other"``.

    ``size`` is the number of arms for stars and 2-stars, the number of
    edges for chains, and the number of edges for ``"other"``.
    """

    kind: str
    size: int

    @property
    def edges(self) -> int:
        return 2 * self.size if self.kind == "two_star" else self.size

    def __str__(self) -> str:
        names = {"star": "Star", "chain": "Chain", "two_star": "TwoStar", "other": "Other"}
        if self.kind == "other":
            return "Other"
        return f"{names[self.kind]}({self.size})"


def Star(n: int) -> TreeClass:
    return TreeClass("star", n)


def Chain(n: int) -> TreeClass:
    return TreeClass("chain", n)


def TwoStar(m: int) -> TreeClass:
    return TreeClass("two_star", m)


def classify_tree(d: Dessin) -> TreeClass:
    """Star, chain, 2-star or other.

    Degenerate overlaps: one edge is ``Star(1)``; two edges are ``Chain(2)``;
    a 2-star with two arms is the chain with four edges.
    """
    _require_tree(d)
    e = d.edges
    black = [len(c) for c in orbits(d.black)]
    white = [len(c) for c in orbits(d.white)]
    allv = Counter(black + white)
    if e == 1 or (e >= 3 and allv[e] == 1 and allv[1] == e):
        return Star(e)
    if allv[1] == 2 and allv[2] == e - 1:
        return Chain(e)
    if e % 2 == 0 and e >= 2:
        m = e // 2
        for centre, middle in ((black, white), (white, black)):
            cc = Counter(centre)
            if (
                sorted(middle) == [2] * m
                and len(centre) == m + 1
                and cc[m] >= 1
                and cc[1] >= m
            ):
                return TwoStar(m)
    return TreeClass("other", e)


def has_linear_rep_dim_le_2(d: Dessin) -> bool:
    return classify_tree(d).kind in ("star", "chain", "two_star")


# -- Moebius representations ---------------------------------------------------


@dataclass(frozen=True)
class MoebiusTransform:
    """``z -> (a z + b) / (c z + d)`` on the Riemann sphere; ``None`` is infinity."""

    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self):
        det = self.a * self.d - self.b * self.c
        size = max(abs(self.a), abs(self.b), abs(self.c), abs(self.d))
        if abs(det) <= 1e-12 * size * size:
            raise ValueError("degenerate Moebius transform")

    @classmethod
    def identity(cls) -> "MoebiusTransform":
        return cls(1, 0, 0, 1)

    def __call__(self, z):
        if z is None:
            return None if self.c == 0 else self.a / self.c
        den = self.c * z + self.d
        num = self.a * z + self.b
        if abs(den) <= 1e-300 * max(1.0, abs(num)):
            return None
        return num / den

    def compose(self, other: "MoebiusTransform") -> "MoebiusTransform":
        """``self o other``."""
        m = np.array([[self.a, self.b], [self.c, self.d]]) @ np.array(
            [[other.a, other.b], [other.c, other.d]]
        )
        return MoebiusTransform(m[0, 0], m[0, 1], m[1, 0], m[1, 1])


def chordal_distance(z, w) -> float:
    """Distance on the Riemann sphere of diameter one; ``None`` is infinity."""
    if z is None and w is None:
        return 0.0
    if z is None:
        return 1.0 / abs(cmath.sqrt(1 + abs(w) ** 2))
    if w is None:
        return 1.0 / abs(cmath.sqrt(1 + abs(z) ** 2))
    return abs(z - w) / (abs(cmath.sqrt(1 + abs(z) ** 2)) * abs(cmath.sqrt(1 + abs(w) ** 2)))


def induced_permutation(t: MoebiusTransform, points: Sequence, tol: float = 1e-9) -> Permutation:
    """Permutation of ``points`` induced by ``t`` (chordal matching within tol)."""
    images = []
    for z in points:
        w = t(z)
        dist = [chordal_distance(w, p) for p in points]
        j = int(np.argmin(dist))
        if dist[j] > tol:
            raise ValueError("transform does not preserve the point set")
        images.append(j)
    return Permutation(tuple(images))


@dataclass(frozen=True)
class MoebiusRepresentation:
    black: MoebiusTransform
    white: MoebiusTransform
    points: tuple
    relabeling: tuple

    def induced_dessin(self, tol: float = 1e-9) -> Dessin:
        return Dessin(
            induced_permutation(self.black, self.points, tol),
            induced_permutation(self.white, self.points, tol),
        )


def moebius_representation(d: Dessin) -> Optional[MoebiusRepresentation]:
    """Moebius transforms realising ``d`` on points of the sphere, if any.

    Stars use a rotation and the identity; chains use ``z -> 1/z`` and
    ``z -> theta/z`` on the ``n``-th roots of unity.  The two transforms are
    assigned to the colours so that the induced dessin is isomorphic to
    ``d`` (colours preserved).  Returns ``None`` for every other tree.
    """
    cls = classify_tree(d)
    n = d.edges
    theta = cmath.exp(2j * cmath.pi / n)
    points = tuple(theta**k for k in range(n))
    ident = MoebiusTransform.identity()
    if cls.kind == "star":
        rot = MoebiusTransform(theta, 0, 0, 1)
        candidates = [(rot, ident), (ident, rot)]
    elif cls.kind == "chain":
        inv = MoebiusTransform(0, 1, 1, 0)
        half = MoebiusTransform(0, theta, 1, 0)
        candidates = [(inv, half), (half, inv)]
    else:
        return None
    for a, b in candidates:
        rep = MoebiusRepresentation(a, b, points, ())
        match = dessins_isomorphic(rep.induced_dessin(), d, allow_swap=False)
        if match is not None:
            return MoebiusRepresentation(a, b, points, match.relabeling)
    raise AssertionError("standard Moebius model failed to match")  # pragma: no cover


# -- isomorphism ----------------------------------------------------------------


@dataclass(frozen=True)
class Isomorphism:
    """``relabeling[i]`` is the edge of the second dessin matched to edge ``i``."""

    relabeling: tuple
    swapped: bool


def _match_from(d1: Dessin, d2: Dessin, start: int) -> Optional[tuple]:
    e = d1.edges
    phi = [-1] * e
    used = [False] * e
    phi[0] = start
    used[start] = True
    queue = deque([0])
    while queue:
        i = queue.popleft()
        for p1, p2 in ((d1.black, d2.black), (d1.white, d2.white)):
            j, tj = p1(i), p2(phi[i])
            if phi[j] == -1:
                if used[tj]:
                    return None
                phi[j] = tj
                used[tj] = True
                queue.append(j)
            elif phi[j] != tj:
                return None
    if -1 in phi:
        return None
    return tuple(phi)


def _find_relabeling(d1: Dessin, d2: Dessin) -> Optional[tuple]:
    if d1.edges != d2.edges or d1.valencies() != d2.valencies():
        return None
    for start in range(d2.edges):
        phi = _match_from(d1, d2, start)
        if phi is not None:
            return phi
    return None


def dessins_isomorphic(d1: Dessin, d2: Dessin, allow_swap: bool = True) -> Optional[Isomorphism]:
    """Edge relabeling conjugating ``d1`` onto ``d2``, or ``None``.

    With ``allow_swap`` the colour-swapped ``d1`` is tried when the direct
    match fails; ``swapped`` records which one matched.
    """
    if not (d1.is_transitive() and d2.is_transitive()):
        raise NotConnectedError("not connected")
    phi = _find_relabeling(d1, d2)
    if phi is not None:
        return Isomorphism(phi, False)
    if allow_swap:
        phi = _find_relabeling(d1.swapped(), d2)
        if phi is not None:
            return Isomorphism(phi, True)
    return None


def canonical_form(d: Dessin) -> tuple:
    """Isomorphism invariant identifying dessins up to relabeling and colour swap."""
    best = None
    for dd in (d, d.swapped()):
        for start in range(dd.edges):
            order = {start: 0}
            queue = deque([start])
            while queue:
                i = queue.popleft()
                for p in (dd.black, dd.white):
                    j = p(i)
                    if j not in order:
                        order[j] = len(order)
                        queue.append(j)
            key = (
                tuple(order[dd.black(i)] for i in sorted(order, key=order.get)),
                tuple(order[dd.white(i)] for i in sorted(order, key=order.get)),
            )
            if best is None or key < best:
                best = key
    return best


# -- enumeration ----------------------------------------------------------------


def _ordered_trees(e: int):
    """Rooted ordered trees with ``e`` edges as nested tuples of children."""
    if e == 0:
        yield ()
        return
    # first subtree has k edges below its root edge, the rest has e-1-k
    for k in range(e):
        for first in _ordered_trees(k):
            for rest in _ordered_trees(e - 1 - k):
                yield (first,) + rest


def _tree_to_dessin(tree: tuple, e: int) -> Dessin:
    black = [0] * e
    white = [0] * e
    counter = [0]

    def visit(children, parent_edge, depth):
        edges = []
        for child in children:
            edge = counter[0]
            counter[0] += 1
            edges.append((edge, child))
        around = ([parent_edge] if parent_edge is not None else []) + [ed for ed, _ in edges]
        perm = black if depth % 2 == 0 else white
        for i, ed in enumerate(around):
            perm[ed] = around[(i + 1) % len(around)]
        for ed, child in edges:
            visit(child, ed, depth + 1)

    visit(tree, None, 0)
    return Dessin(Permutation(tuple(black)), Permutation(tuple(white)))


def enumerate_plane_trees(e: int) -> list:
    """One dessin per plane tree with ``e`` edges (colour swap identified)."""
    if not 1 <= e <= 8:
        raise ValueError("edge count must be between 1 and 8")
    seen = {}
    for tree in _ordered_trees(e):
        d = _tree_to_dessin(tree, e)
        key = canonical_form(d)
        if key not in seen:
            seen[key] = d
    return [seen[k] for k in sorted(seen)]
