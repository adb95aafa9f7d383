"""Square-lattice geometry: faces, crosses, diamond domains, box windows.

Two distinct graphs coexist here and it pays to keep the vocabulary
straight:

* The **site lattice** Z^d.  Box windows for Bernoulli/random-cluster
  configurations live on it; its graph metric is L1.

* The **face lattice** of Z^2: unit squares, indexed by their lower-left
  corner, so faces are again points of Z^2 but adjacency means "shares a
  side".  Faces split by coordinate-sum parity into the even and odd
  **sublattices**; each sublattice is a diagonally rotated copy of Z^2
  whose graph metric is Chebyshev.

Every site x of Z^2 touches four faces, its **cross**: the two same-parity
diagonal pairs give one even-sublattice edge and one odd-sublattice edge
crossing at x.  Superimposed configurations assign each cross one of three
states; height functions live on faces; spins are signs on faces.

A **diamond domain** is an L1 ball of faces.  Its derived data (boundary
circuit, internal sites, cross window, sublattice vertex sets) follow the
conventions exercised by the fixtures in ``tests/test_lattice.py``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

Coord = tuple[int, ...]
Face = tuple[int, int]
Edge = tuple[Coord, Coord]  # canonical: lexicographically sorted pair


def sorted_edge(a: Coord, b: Coord) -> Edge:
    """Canonical (lexicographically sorted) form of an undirected edge."""
    return (a, b) if a <= b else (b, a)


def parity(face: Face) -> int:
    """0 for the even sublattice, 1 for the odd one."""
    return (face[0] + face[1]) & 1


def face_neighbors(face: Face) -> tuple[Face, Face, Face, Face]:
    """Side-adjacent faces (the face-lattice graph)."""
    x, y = face
    return ((x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1))


def diag_neighbors(face: Face) -> tuple[Face, Face, Face, Face]:
    """Diagonal neighbors: the adjacency within each sublattice."""
    x, y = face
    return ((x + 1, y + 1), (x + 1, y - 1), (x - 1, y + 1), (x - 1, y - 1))


def face_dist(a: Face, b: Face) -> int:
    """Graph distance on the face lattice (L1)."""
    return abs(a[0] - b[0]) + abs(a[1] - b[1])


def sublattice_dist(a: Face, b: Face) -> int:
    """Graph distance within a sublattice (Chebyshev).

    Valid whenever ``a`` and ``b`` have equal parity; diagonal steps move
    both coordinates at once, so max(|dx|, |dy|) steps suffice and are
    necessary.
    """
    return max(abs(a[0] - b[0]), abs(a[1] - b[1]))


def l1_diameter(coords: Iterable[Coord]) -> int:
    """Max pairwise L1 distance, via range of the +-1 linear functionals.

    |u - v|_1 = max_s s.(u - v) over sign vectors s, so the diameter is
    the largest coordinate range among the 2^(d-1) essential functionals.
    Exact, and linear in the number of points.
    """
    pts = list(coords)
    if not pts:
        raise ValueError("diameter of empty set")
    d = len(pts[0])
    best = 0
    # sign patterns with first component fixed to +1 (s and -s coincide)
    for bits in range(1 << (d - 1)):
        signs = [1] + [1 if (bits >> i) & 1 == 0 else -1 for i in range(d - 1)]
        vals = [sum(s * c for s, c in zip(signs, p)) for p in pts]
        best = max(best, max(vals) - min(vals))
    return best


def chebyshev_diameter(coords: Iterable[Coord]) -> int:
    """Max pairwise Chebyshev distance = largest single-coordinate range."""
    pts = list(coords)
    if not pts:
        raise ValueError("diameter of empty set")
    d = len(pts[0])
    return max(
        max(p[i] for p in pts) - min(p[i] for p in pts) for i in range(d)
    )


def l1_ball(center: Face, r: int) -> list[Face]:
    cx, cy = center
    return [
        (cx + dx, cy + dy)
        for dx in range(-r, r + 1)
        for dy in range(-(r - abs(dx)), r - abs(dx) + 1)
    ]


def l1_sphere(center: Face, r: int) -> list[Face]:
    if r == 0:
        return [center]
    cx, cy = center
    out = []
    for dx in range(-r, r + 1):
        dy = r - abs(dx)
        out.append((cx + dx, cy + dy))
        if dy:
            out.append((cx + dx, cy - dy))
    return out


@dataclass(frozen=True)
class Cross:
    """The four faces around a site, split into its two diagonal edges.

    ``primal`` joins the even-parity pair, ``dual`` the odd-parity pair;
    both are canonical edges and both "cross" at ``site``.
    """

    site: Coord
    primal: Edge
    dual: Edge


def cross_of(site: Coord) -> Cross:
    x, y = site
    a = (x - 1, y - 1)  # same parity as site
    b = (x, y)
    c = (x, y - 1)  # opposite parity
    d = (x - 1, y)
    if (x + y) & 1 == 0:
        return Cross(site, sorted_edge(a, b), sorted_edge(c, d))
    return Cross(site, sorted_edge(c, d), sorted_edge(a, b))


def edge_site(edge: Edge) -> Coord:
    """The site at which a sublattice edge crosses its partner.

    The two faces of a diagonal edge sit corner to corner; the shared
    corner is the componentwise max of the two face labels.
    """
    (ax, ay), (bx, by) = edge
    return (max(ax, bx), max(ay, by))


def dual_partner(edge: Edge) -> Edge:
    """The opposite-sublattice edge crossing the same site."""
    cross = cross_of(edge_site(edge))
    if edge == cross.primal:
        return cross.dual
    if edge == cross.dual:
        return cross.primal
    raise ValueError(f"{edge} is not a sublattice edge")


def _separating_site_edge(face: Face, nbr: Face) -> Edge:
    """Site-lattice edge lying between two side-adjacent faces."""
    fx, fy = face
    dx, dy = nbr[0] - fx, nbr[1] - fy
    if (dx, dy) == (1, 0):
        return ((fx + 1, fy), (fx + 1, fy + 1))
    if (dx, dy) == (-1, 0):
        return ((fx, fy), (fx, fy + 1))
    if (dx, dy) == (0, 1):
        return ((fx, fy + 1), (fx + 1, fy + 1))
    if (dx, dy) == (0, -1):
        return ((fx, fy), (fx + 1, fy))
    raise ValueError("faces are not side-adjacent")


class DiamondDomain:
    """L1 ball of faces with its boundary rings, circuit and cross window.

    ``radius`` must be even (so the inner ring lies on the even
    sublattice and the outer ring on the odd one) and the center must be
    an even face.  Height functions on the domain are pinned on both
    rings; the free faces are the strictly smaller ball.
    """

    def __init__(self, radius: int, center: Face = (0, 0)):
        if radius < 2 or radius % 2:
            raise ValueError("radius must be even and >= 2")
        if parity(center) != 0:
            raise ValueError("center must be an even face")
        self.radius = radius
        self.center = center
        self.faces = frozenset(l1_ball(center, radius))
        self.inner_ring = frozenset(l1_sphere(center, radius))
        self.outer_ring = frozenset(l1_sphere(center, radius + 1))
        self.all_faces = self.faces | self.outer_ring
        self.free_faces = frozenset(l1_ball(center, radius - 1))

    def contains_face(self, face: Face) -> bool:
        return face_dist(face, self.center) <= self.radius

    @cached_property
    def circuit_edges(self) -> frozenset[Edge]:
        """Site-lattice edges separating the ball from its complement."""
        out = set()
        for f in self.inner_ring:
            for nb in face_neighbors(f):
                if nb not in self.faces:
                    out.add(sorted_edge(*_separating_site_edge(f, nb)))
        return frozenset(out)

    @cached_property
    def circuit_vertices(self) -> frozenset[Coord]:
        return frozenset(v for e in self.circuit_edges for v in e)

    @cached_property
    def cycle(self) -> tuple[Coord, ...]:
        """Circuit vertices in cyclic order; asserts it is a simple cycle."""
        adj: dict[Coord, list[Coord]] = {}
        for a, b in self.circuit_edges:
            adj.setdefault(a, []).append(b)
            adj.setdefault(b, []).append(a)
        if any(len(nbs) != 2 for nbs in adj.values()):
            raise AssertionError("boundary circuit is not a simple cycle")
        start = min(adj)
        order = [start]
        prev, cur = None, start
        while True:
            nxt = adj[cur][0] if adj[cur][0] != prev else adj[cur][1]
            if nxt == start:
                break
            order.append(nxt)
            prev, cur = cur, nxt
        if len(order) != len(adj):
            raise AssertionError("boundary circuit is disconnected")
        return tuple(order)

    @cached_property
    def interior_sites(self) -> frozenset[Coord]:
        """Sites all four of whose incident faces lie in the ball."""
        out = set()
        for x, y in self.faces:
            s = (x + 1, y + 1)
            if all(f in self.faces for f in _incident_faces(s)):
                out.add(s)
        return frozenset(out)

    @cached_property
    def sites(self) -> frozenset[Coord]:
        """Cross-window sites: internal vertices of the circuit graph.

        The augmented site graph has vertex set interior + circuit; a
        site is internal when all four of its site-lattice neighbors stay
        inside that set.  These are exactly the sites whose crosses carry
        the sublattice edges of the domain.
        """
        hull = self.interior_sites | self.circuit_vertices
        return frozenset(
            s
            for s in hull
            if all(n in hull for n in _site_neighbors(s))
        )

    @cached_property
    def crosses(self) -> dict[Coord, Cross]:
        return {s: cross_of(s) for s in sorted(self.sites)}

    @cached_property
    def primal_edges(self) -> frozenset[Edge]:
        return frozenset(c.primal for c in self.crosses.values())

    @cached_property
    def dual_edges(self) -> frozenset[Edge]:
        return frozenset(c.dual for c in self.crosses.values())

    @cached_property
    def primal_vertices(self) -> frozenset[Face]:
        return frozenset(v for e in self.primal_edges for v in e)

    @cached_property
    def dual_vertices(self) -> frozenset[Face]:
        return frozenset(v for e in self.dual_edges for v in e)

    def boundary_heights(self, m: int) -> dict[Face, int]:
        """Pinned ring values for boundary level ``m``.

        Even faces always carry even heights: for even ``m`` the inner
        (even) ring sits at ``m`` and the outer at ``m + 1``; for odd
        ``m`` the rings swap roles.
        """
        inner, outer = (m, m + 1) if m % 2 == 0 else (m + 1, m)
        vals = {f: inner for f in self.inner_ring}
        vals.update({f: outer for f in self.outer_ring})
        return vals


def _incident_faces(site: Coord) -> tuple[Face, Face, Face, Face]:
    x, y = site
    return ((x - 1, y - 1), (x, y - 1), (x - 1, y), (x, y))


def _site_neighbors(site: Coord) -> tuple[Coord, ...]:
    x, y = site
    return ((x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1))


class BoxWindow:
    """Finite box [0, L1) x ... x [0, Ld) of the site lattice Z^d.

    Vertices and edges get stable integer ids (row-major vertices; edges
    ordered by tail vertex then axis), which fixes the serialization
    format and the meaning of edge-indexed arrays everywhere else.
    """

    def __init__(self, dims: Sequence[int]):
        dims = tuple(int(L) for L in dims)
        if len(dims) not in (2, 3):
            raise ValueError("only d = 2 or 3 supported")
        if any(L < 1 for L in dims):
            raise ValueError("all side lengths must be >= 1")
        self.dims = dims
        self.d = len(dims)
        self.vertices: list[Coord] = list(self._iter_vertices())
        self.index: dict[Coord, int] = {v: i for i, v in enumerate(self.vertices)}
        self.n_vertices = len(self.vertices)
        self.edges: list[Edge] = []
        self.edge_index: dict[Edge, int] = {}
        # adjacency[i] = [(neighbor vertex id, edge id), ...]
        self.adjacency: list[list[tuple[int, int]]] = [[] for _ in self.vertices]
        for v in self.vertices:
            for axis in range(self.d):
                w = tuple(c + (1 if a == axis else 0) for a, c in enumerate(v))
                if self.contains(w):
                    eid = len(self.edges)
                    e = (v, w)
                    self.edges.append(e)
                    self.edge_index[e] = eid
                    self.adjacency[self.index[v]].append((self.index[w], eid))
                    self.adjacency[self.index[w]].append((self.index[v], eid))
        self.n_edges = len(self.edges)

    def _iter_vertices(self) -> Iterator[Coord]:
        def rec(prefix: tuple[int, ...], rest: tuple[int, ...]):
            if not rest:
                yield prefix
                return
            for c in range(rest[0]):
                yield from rec(prefix + (c,), rest[1:])

        yield from rec((), self.dims)

    def contains(self, v: Coord) -> bool:
        return len(v) == self.d and all(0 <= c < L for c, L in zip(v, self.dims))

    def neighbors(self, v: Coord) -> list[Coord]:
        """Ambient Z^d neighbors, including those outside the box."""
        out = []
        for axis in range(self.d):
            for step in (1, -1):
                out.append(
                    tuple(c + (step if a == axis else 0) for a, c in enumerate(v))
                )
        return out

    def dist(self, a: Coord, b: Coord) -> int:
        return sum(abs(x - y) for x, y in zip(a, b))

    def diameter(self, coords: Iterable[Coord]) -> int:
        return l1_diameter(coords)

    @cached_property
    def boundary(self) -> frozenset[Coord]:
        """Vertices with at least one ambient neighbor outside the box."""
        return frozenset(
            v for v in self.vertices if any(c == 0 or c == L - 1 for c, L in zip(v, self.dims))
        )

    def canonical_edge(self, a: Coord, b: Coord) -> Edge:
        e = sorted_edge(a, b)
        if e not in self.edge_index:
            raise KeyError(f"{a}-{b} is not a window edge")
        return e

    def __repr__(self) -> str:
        return f"BoxWindow({'x'.join(map(str, self.dims))})"
