"""Combinatorial simulator for tile-completion growth on a {p,q} tiling.

The patch is stored as an incidence structure (vertices, edges, tiles) with
an explicit counter-clockwise boundary cycle; no coordinates are involved, so
all counts are exact integers.

Growing one layer adds every tile of the infinite tiling that shares a vertex
with the patch. Around a boundary vertex of tile-degree ``d`` there are
``q - d`` missing tiles, separated by ``q - d - 1`` new edges ("spokes")
leaving that vertex. Listing all spokes in boundary order, each new tile sits
between two consecutive spokes. A tile whose spokes leave from the same vertex
touches the patch only at that corner; otherwise it is glued along the ``j``
boundary edges in between. Two of its ``p`` edges are spokes, so it carries
``p - j - 2`` dangling edges.
"""
from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass, field

from .geometry import SchlafliPair, as_pair, bound, finite_layer_lhs
from .inflation import GrowthMatrix, GrowthSystem


class TilingError(RuntimeError):
    """Internal consistency failure of the simulator (a bug, not bad input)."""


class SeedKind(str, enum.Enum):
    SINGLE_TILE = "single-tile"
    SINGLE_EDGE_PAIR = "single-edge-pair"
    VERTEX_STAR = "vertex-star"

    @classmethod
    def parse(cls, value) -> "SeedKind":
        if isinstance(value, cls):
            return value
        aliases = {"tile": cls.SINGLE_TILE, "edge": cls.SINGLE_EDGE_PAIR, "vertex": cls.VERTEX_STAR}
        try:
            return aliases.get(value) or cls(value)
        except ValueError:
            choices = sorted([*aliases, *(k.value for k in cls)])
            raise ValueError(f"unknown seed kind {value!r}; choose from {choices}") from None


@dataclass(frozen=True)
class LayerCensus:
    layer: int
    new_tiles: int
    class_counts: dict[int, int]
    perimeter_edges: int
    cumulative_tiles: int

    @property
    def empirical_rate(self) -> float:
        return self.cumulative_tiles / self.perimeter_edges

    def class_vector(self, labels: tuple[int, int]) -> tuple[int, int]:
        return (self.class_counts.get(labels[0], 0), self.class_counts.get(labels[1], 0))


@dataclass
class CombinatorialMap:
    """Finite simply connected patch of the {p,q} tiling.

    ``edge_ends[e]`` is the vertex pair of edge ``e`` and ``edge_tiles[e]`` the
    one or two tiles containing it. Tile vertex and edge cycles are
    counter-clockwise, with edge ``i`` running from vertex ``i`` to ``i + 1``.
    ``boundary[i] -> boundary[i + 1]`` is perimeter edge
    ``boundary_edges[i]``, traversed with the patch on its left.
    """

    pq: SchlafliPair
    vertex_degree: list[int] = field(default_factory=list)
    edge_ends: list[tuple[int, int]] = field(default_factory=list)
    edge_tiles: list[list[int]] = field(default_factory=list)
    tile_vertices: list[tuple[int, ...]] = field(default_factory=list)
    tile_edges: list[tuple[int, ...]] = field(default_factory=list)
    tile_layer: list[int] = field(default_factory=list)
    boundary: list[int] = field(default_factory=list)
    boundary_edges: list[int] = field(default_factory=list)
    layer: int = 0

    @property
    def n_vertices(self) -> int:
        return len(self.vertex_degree)

    @property
    def n_edges(self) -> int:
        return len(self.edge_ends)

    @property
    def n_tiles(self) -> int:
        return len(self.tile_vertices)

    @property
    def perimeter(self) -> int:
        return len(self.boundary_edges)

    def euler_characteristic(self) -> int:
        return self.n_vertices - self.n_edges + self.n_tiles

    def _new_vertex(self) -> int:
        self.vertex_degree.append(0)
        return len(self.vertex_degree) - 1

    def _new_edge(self, u: int, v: int) -> int:
        self.edge_ends.append((u, v))
        self.edge_tiles.append([])
        return len(self.edge_ends) - 1

    def _add_tile(self, vertices, edges, layer: int) -> int:
        tid = len(self.tile_vertices)
        self.tile_vertices.append(tuple(vertices))
        self.tile_edges.append(tuple(edges))
        self.tile_layer.append(layer)
        for v in vertices:
            self.vertex_degree[v] += 1
        for e in edges:
            self.edge_tiles[e].append(tid)
        return tid

    def _add_polygon(self, vertices, layer: int, shared: dict | None = None) -> int:
        """Add a tile on ``vertices``, creating any edge not found in ``shared``."""
        shared = {} if shared is None else shared
        edges = []
        n = len(vertices)
        for i in range(n):
            u, v = vertices[i], vertices[(i + 1) % n]
            key = frozenset((u, v))
            if key not in shared:
                shared[key] = self._new_edge(u, v)
            edges.append(shared[key])
        return self._add_tile(vertices, edges, layer)

    def dangling(self, tile: int) -> int:
        return sum(1 for e in self.tile_edges[tile] if len(self.edge_tiles[e]) == 1)

    def tiles_in_layer(self, layer: int) -> list[int]:
        return [t for t, lay in enumerate(self.tile_layer) if lay == layer]

    def census(self, layer: int | None = None) -> LayerCensus:
        layer = self.layer if layer is None else layer
        tiles = self.tiles_in_layer(layer)
        classes = Counter(self.dangling(t) for t in tiles)
        return LayerCensus(
            layer=layer,
            new_tiles=len(tiles),
            class_counts=dict(sorted(classes.items())),
            perimeter_edges=self.perimeter,
            cumulative_tiles=sum(1 for lay in self.tile_layer if lay <= layer),
        )

    def validate(self):
        """Check the topological invariants of a disk patch; raise TilingError on failure."""
        p, q = self.pq.p, self.pq.q
        degree = [0] * self.n_vertices
        for t, (verts, edges) in enumerate(zip(self.tile_vertices, self.tile_edges)):
            if len(verts) != p or len(edges) != p or len(set(verts)) != p:
                raise TilingError(f"tile {t} is not a simple {p}-gon: {verts}")
            for i, e in enumerate(edges):
                if set(self.edge_ends[e]) != {verts[i], verts[(i + 1) % p]}:
                    raise TilingError(f"tile {t} edge {e} does not join its vertices {i}, {i + 1}")
                if t not in self.edge_tiles[e]:
                    raise TilingError(f"edge {e} does not record incident tile {t}")
            for v in verts:
                degree[v] += 1
        if degree != self.vertex_degree:
            raise TilingError("stored vertex degrees disagree with tile incidences")

        # interior edges must be traversed in opposite directions (orientability)
        direction = {}
        perimeter = []
        for e, tiles in enumerate(self.edge_tiles):
            if len(tiles) not in (1, 2):
                raise TilingError(f"edge {e} has {len(tiles)} incident tiles")
            if len(tiles) == 1:
                perimeter.append(e)
        for verts in self.tile_vertices:
            for i in range(p):
                step = (verts[i], verts[(i + 1) % p])
                if step in direction:
                    raise TilingError(f"edge {step} traversed twice in the same direction")
                direction[step] = True

        if sorted(perimeter) != sorted(self.boundary_edges):
            raise TilingError("boundary edge list disagrees with perimeter edges")
        m = len(self.boundary)
        if m != len(self.boundary_edges) or m < 3 or len(set(self.boundary)) != m:
            raise TilingError("perimeter is not a single simple cycle")
        for i, e in enumerate(self.boundary_edges):
            u, v = self.boundary[i], self.boundary[(i + 1) % m]
            if set(self.edge_ends[e]) != {u, v} or (u, v) not in direction:
                raise TilingError(f"boundary edge {e} is not {u}->{v} with the patch on its left")

        on_boundary = set(self.boundary)
        for v, d in enumerate(degree):
            if d > q:
                raise TilingError(f"vertex {v} over-saturated: degree {d} > {q}")
            if v in on_boundary and d >= q:
                raise TilingError(f"boundary vertex {v} already has degree {d}")
            if v not in on_boundary and d != q:
                raise TilingError(f"interior vertex {v} has degree {d} != {q}")
        if self.euler_characteristic() != 1:
            raise TilingError(f"Euler characteristic {self.euler_characteristic()} != 1")


def seed(pq, kind=SeedKind.SINGLE_TILE) -> CombinatorialMap:
    """Layer-zero patch: one tile, two tiles sharing an edge, or the q tiles around a vertex."""
    pq = as_pair(pq).require_hyperbolic()
    kind = SeedKind.parse(kind)
    p, q = pq.p, pq.q
    patch = CombinatorialMap(pq)
    shared: dict = {}

    if kind is SeedKind.SINGLE_TILE:
        ring = [patch._new_vertex() for _ in range(p)]
        patch._add_polygon(ring, 0, shared)
        boundary = ring
    elif kind is SeedKind.SINGLE_EDGE_PAIR:
        first = [patch._new_vertex() for _ in range(p)]
        extra = [patch._new_vertex() for _ in range(p - 2)]
        patch._add_polygon(first, 0, shared)
        patch._add_polygon([first[1], first[0], *extra], 0, shared)
        boundary = [*first[1:], first[0], *extra]
    else:
        centre = patch._new_vertex()
        tips = [patch._new_vertex() for _ in range(q)]
        boundary = []
        for i in range(q):
            private = [patch._new_vertex() for _ in range(p - 3)]
            patch._add_polygon([centre, tips[i], *private, tips[(i + 1) % q]], 0, shared)
            boundary += [tips[i], *private]

    patch.boundary = boundary
    patch.boundary_edges = [
        shared[frozenset((boundary[i], boundary[(i + 1) % len(boundary)]))]
        for i in range(len(boundary))
    ]
    return patch


@dataclass(frozen=True)
class _LayerPlan:
    spokes: list[int]  # boundary index of the vertex each spoke leaves from
    covered: list[int]  # boundary edges glued to the tile after spoke r
    dangling: list[int]

    @property
    def perimeter(self) -> int:
        return sum(self.dangling)


def _plan_layer(patch: CombinatorialMap) -> _LayerPlan:
    p, q = patch.pq.p, patch.pq.q
    m = len(patch.boundary)
    spokes = []
    for i, v in enumerate(patch.boundary):
        missing = q - patch.vertex_degree[v]
        if missing < 1:
            raise TilingError(f"boundary vertex {v} has no room for new tiles")
        spokes.extend([i] * (missing - 1))
    n = len(spokes)
    if n == 0:
        raise TilingError("no spokes: the next layer would be a single tile closing the patch")

    covered, dangling = [], []
    for r in range(n):
        a, c = spokes[r], spokes[(r + 1) % n]
        j = c - a if r + 1 < n else (c - a) % m or m
        if j >= m:
            raise TilingError("a new tile would wrap the whole boundary")
        d = p - j - 2
        if d < 0:
            raise TilingError(f"tile after spoke {r} would cover {j} boundary edges of a {p}-gon")
        covered.append(j)
        dangling.append(d)

    # start after a tile with dangling edges so the outer cycle never wraps mid-vertex
    start = next((r for r in range(n) if dangling[r - 1] > 0), None)
    if start is None:
        raise TilingError("new layer has no dangling edges")
    rot = lambda xs: xs[start:] + xs[:start]
    return _LayerPlan(rot(spokes), rot(covered), rot(dangling))


def _apply_layer(patch: CombinatorialMap, plan: _LayerPlan) -> None:
    layer = patch.layer + 1
    B, BE = patch.boundary, patch.boundary_edges
    m, n = len(B), len(plan.spokes)

    outer = [patch._new_vertex()] + [None] * (n - 1)
    spoke_edge = [patch._new_edge(B[plan.spokes[0]], outer[0])] + [None] * (n - 1)
    new_boundary, new_edges = [outer[0]], []

    for r in range(n):
        a = plan.spokes[r]
        j, d = plan.covered[r], plan.dangling[r]
        nxt = (r + 1) % n
        path = [patch._new_vertex() for _ in range(max(d - 1, 0))]
        if nxt:
            if d == 0:
                outer[nxt] = outer[r]
            else:
                outer[nxt] = patch._new_vertex()
            spoke_edge[nxt] = patch._new_edge(B[plan.spokes[nxt]], outer[nxt])

        outer_path = [outer[r], *path, outer[nxt]] if d else [outer[r]]
        path_edges = [patch._new_edge(u, v) for u, v in zip(outer_path, outer_path[1:])]

        # counter-clockwise: back along the old boundary, out the spoke, round the outside
        glued = [B[(a + j - s) % m] for s in range(j + 1)]
        glued_edges = [BE[(a + j - s - 1) % m] for s in range(j)]
        patch._add_tile(
            glued + outer_path,
            glued_edges + [spoke_edge[r]] + path_edges + [spoke_edge[nxt]],
            layer,
        )

        new_boundary.extend(path)
        if d and nxt:
            new_boundary.append(outer[nxt])
        new_edges.extend(path_edges)

    patch.boundary = new_boundary
    patch.boundary_edges = new_edges
    patch.layer = layer


def grow_layer(patch: CombinatorialMap, validate: bool = True):
    """Add every tile sharing a vertex with ``patch`` (in place); return ``(patch, census)``."""
    _apply_layer(patch, _plan_layer(patch))
    if validate:
        patch.validate()
    return patch, patch.census()


def simulate(pq, kind=SeedKind.SINGLE_TILE, max_layers: int = 10, max_boundary: int = 10**6,
             stop_above: int | None = None, validate: bool = True):
    """Grow from a seed; return the final patch and the census of every layer.

    Growth stops after ``max_layers`` layers, before a layer whose perimeter
    would exceed ``max_boundary``, or right after the perimeter first exceeds
    ``stop_above``.
    """
    if max_layers < 1:
        raise ValueError(f"max_layers must be >= 1, got {max_layers}")
    patch = seed(pq, kind)
    if validate:
        patch.validate()
    censuses = [patch.census()]
    for _ in range(max_layers):
        if stop_above is not None and censuses[-1].perimeter_edges > stop_above:
            break
        plan = _plan_layer(patch)
        if plan.perimeter > max_boundary:
            break
        _apply_layer(patch, plan)
        if validate:
            patch.validate()
        censuses.append(patch.census())
    return patch, censuses


def run(pq, kind=SeedKind.SINGLE_TILE, max_layers: int = 10, max_boundary: int = 10**6,
        stop_above: int | None = None, validate: bool = True) -> list[LayerCensus]:
    return simulate(pq, kind, max_layers, max_boundary, stop_above, validate)[1]


def empirical_code_rate(censuses) -> float:
    if not censuses:
        raise ValueError("no censuses given")
    return censuses[-1].empirical_rate


@dataclass(frozen=True)
class GrowthCheck:
    """Outcome of matching a census series against a growth matrix.

    ``transient`` is the first layer from which every census uses only the
    family's two class labels and every step obeys ``u' = M u`` exactly;
    ``two_class_from`` is the first layer from which both labels are present.
    """

    ok: bool
    transient: int | None
    two_class_from: int | None
    labels: tuple[int, int]
    layers: int
    message: str


def verify_growth_matrix(censuses, system: GrowthSystem) -> GrowthCheck:
    if len(censuses) < 4:
        raise ValueError(f"need at least 4 layers, got {len(censuses)}")
    labels = tuple(system.edge_vector)
    matrix: GrowthMatrix = system.matrix
    in_family = [set(c.class_counts) <= set(labels) for c in censuses]
    vectors = [c.class_vector(labels) for c in censuses]
    n = len(censuses)
    step_ok = [
        in_family[i] and in_family[i + 1] and matrix.apply(vectors[i]) == vectors[i + 1]
        for i in range(n - 1)
    ]
    k = n - 1
    while k > 0 and step_ok[k - 1]:
        k -= 1
    k2 = n
    while k2 > 0 and set(censuses[k2 - 1].class_counts) == set(labels):
        k2 -= 1

    layer_of = lambda i: censuses[i].layer
    two_class = layer_of(k2) if k2 < n else None
    verified_steps = n - 1 - k
    if verified_steps < 2:
        return GrowthCheck(False, None, two_class, labels, n,
                           f"u' = M u with labels {labels} fails on the last layers")
    return GrowthCheck(True, layer_of(k), two_class, labels, n,
                       f"u' = M u exact from layer {layer_of(k)} ({verified_steps} steps)")


def verify_isoperimetric(census: LayerCensus, pq) -> bool:
    lhs = finite_layer_lhs(pq, census.cumulative_tiles, census.perimeter_edges)
    return lhs <= bound(pq) + 1e-9


CENSUS_COLUMNS = ("layer", "new_tiles", "class_a", "class_b", "perimeter", "cumulative", "empirical_rate")


def census_rows(censuses, labels: tuple[int, int]) -> list[dict]:
    """Flat rows for CSV/JSON export; ``class_a``/``class_b`` count tiles with ``labels`` dangling edges."""
    rows = []
    for c in censuses:
        a, b = c.class_vector(labels)
        rows.append({
            "layer": c.layer,
            "new_tiles": c.new_tiles,
            "class_a": a,
            "class_b": b,
            "perimeter": c.perimeter_edges,
            "cumulative": c.cumulative_tiles,
            "empirical_rate": c.empirical_rate,
        })
    return rows
