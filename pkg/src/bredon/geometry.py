"""Point clouds, covers, and the combinatorial substrate for local-to-global checks.

A cover is a finite family of point-index subsets of a cloud, together with
its intersection graph (edge iff the member sets overlap).  Layer
decompositions slice a cloud into unit bands of a proper function, the way
the even/odd assembly argument needs them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np


class GeometryError(ValueError):
    pass


class UncoveredPointError(GeometryError):
    def __init__(self, index: int):
        self.index = index
        super().__init__(f"point {index} is not covered by any element")


@dataclass(frozen=True)
class PointCloud:
    """Finite set of points in d-dimensional Euclidean space."""

    points: np.ndarray
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 2:
            raise GeometryError("points must be a 2-D array (n_points, dim)")
        if pts.shape[0] > 0 and pts.shape[1] < 1:
            raise GeometryError("dim must be >= 1")
        if not np.all(np.isfinite(pts)):
            raise GeometryError("coordinates must be finite")
        if self.labels is not None and len(self.labels) != pts.shape[0]:
            raise GeometryError("labels length must match point count")
        pts = pts.copy()
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def dim(self) -> int:
        return int(self.points.shape[1]) if self.points.ndim == 2 else 0

    def __len__(self) -> int:
        return int(self.points.shape[0])

    def distance_matrix(self) -> np.ndarray:
        """Exact pairwise Euclidean distances, (n, n)."""
        diff = self.points[:, None, :] - self.points[None, :, :]
        return np.sqrt(np.sum(diff * diff, axis=2))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[float]], labels: Sequence[str] | None = None) -> "PointCloud":
        return cls(np.asarray(rows, dtype=float).reshape(len(rows), -1),
                   tuple(labels) if labels is not None else None)


# Provenance is a JSON-friendly tagged tuple:
#   ("ball", center_index, radius)
#   ("grid-cell", lo, hi)
#   ("intersection", (parent_id, ...))
#   ("explicit",)
Provenance = tuple


@dataclass(frozen=True)
class CoverElement:
    id: int
    members: tuple[int, ...]
    provenance: Provenance = ("explicit",)

    def __post_init__(self):
        m = tuple(self.members)
        if list(m) != sorted(set(m)):
            raise GeometryError(f"element {self.id}: members must be sorted and duplicate-free")
        object.__setattr__(self, "members", m)

    @property
    def member_set(self) -> frozenset[int]:
        return frozenset(self.members)


def _edges_from_members(elements: Sequence[CoverElement]) -> tuple[tuple[int, int], ...]:
    edges = []
    for i, a in enumerate(elements):
        sa = a.member_set
        for b in elements[i + 1:]:
            if sa & b.member_set:
                edges.append((a.id, b.id) if a.id < b.id else (b.id, a.id))
    return tuple(sorted(edges))


@dataclass(frozen=True)
class Cover:
    """Indexed family of point-index subsets with its intersection graph."""

    elements: tuple[CoverElement, ...]
    ground_set_size: int
    delta: float = 0.0
    edges: tuple[tuple[int, int], ...] = field(default_factory=tuple)

    def __post_init__(self):
        elements = tuple(self.elements)
        object.__setattr__(self, "elements", elements)
        if self.delta < 0:
            raise GeometryError("delta must be nonnegative")
        ids = [e.id for e in elements]
        if len(set(ids)) != len(ids):
            raise GeometryError("element ids must be unique")
        covered = set()
        for e in elements:
            covered.update(e.members)
        expected = set(range(self.ground_set_size))
        missing = expected - covered
        if missing:
            raise UncoveredPointError(min(missing))
        if covered - expected:
            raise GeometryError("element members exceed the ground set")
        object.__setattr__(self, "edges", _edges_from_members(elements))

    def element(self, element_id: int) -> CoverElement:
        for e in self.elements:
            if e.id == element_id:
                return e
        raise KeyError(element_id)

    def members(self, element_id: int) -> tuple[int, ...]:
        return self.element(element_id).members

    def __len__(self) -> int:
        return len(self.elements)


@dataclass(frozen=True)
class IntersectionGraph:
    nodes: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]
    components: tuple[tuple[int, ...], ...]

    def adjacency(self) -> dict[int, tuple[int, ...]]:
        adj: dict[int, list[int]] = {n: [] for n in self.nodes}
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        return {n: tuple(sorted(v)) for n, v in adj.items()}


@dataclass(frozen=True)
class LayerDecomposition:
    """Unit bands A_n = {i : n <= f(i) <= n+1} of a nonnegative proper function.

    Closed intervals, so a point with integer value sits in two adjacent
    layers; even layers are pairwise disjoint, as are odd layers.
    """

    layers: tuple[tuple[int, tuple[int, ...]], ...]
    even_union: tuple[int, ...]
    odd_union: tuple[int, ...]


def build_ball_cover(cloud: PointCloud, radius: float,
                     landmarks: object = "all-points") -> Cover:
    """Cover by metric balls of the given radius around landmark points.

    ``landmarks`` is "all-points", ("maxmin", k), "grid", or an explicit
    sequence of point indices.  Raises UncoveredPointError naming the first
    orphan point when the landmark set fails to cover.
    """
    n = len(cloud)
    if n < 1:
        raise GeometryError("cloud must be nonempty")
    if radius <= 0:
        raise GeometryError("radius must be positive")
    dm = cloud.distance_matrix()
    centers = _select_landmarks(cloud, dm, radius, landmarks)
    elements = []
    for eid, c in enumerate(centers):
        members = tuple(int(j) for j in np.flatnonzero(dm[c] <= radius))
        elements.append(CoverElement(eid, members, ("ball", int(c), float(radius))))
    return Cover(tuple(elements), ground_set_size=n, delta=float(radius))


def _select_landmarks(cloud: PointCloud, dm: np.ndarray, radius: float,
                      landmarks: object) -> list[int]:
    n = len(cloud)
    if isinstance(landmarks, str):
        if landmarks == "all-points":
            return list(range(n))
        if landmarks == "grid":
            # one landmark per occupied grid cell of side = radius,
            # chosen as the point closest to the cell centroid
            cells: dict[tuple[int, ...], list[int]] = {}
            for i in range(n):
                key = tuple(int(math.floor(x / radius)) for x in cloud.points[i])
                cells.setdefault(key, []).append(i)
            out = []
            for key in sorted(cells):
                idxs = cells[key]
                centroid = (np.array(key, dtype=float) + 0.5) * radius
                d = [float(np.linalg.norm(cloud.points[i] - centroid)) for i in idxs]
                out.append(idxs[int(np.argmin(d))])
            return sorted(out)
        raise GeometryError(f"unknown landmark strategy {landmarks!r}")
    if isinstance(landmarks, tuple) and len(landmarks) == 2 and landmarks[0] == "maxmin":
        k = int(landmarks[1])
        if k < 1:
            raise GeometryError("maxmin landmark count must be >= 1")
        # farthest-point sampling, deterministically seeded at index 0
        chosen = [0]
        dist_to_chosen = dm[0].copy()
        while len(chosen) < min(k, n):
            nxt = int(np.argmax(dist_to_chosen))
            chosen.append(nxt)
            dist_to_chosen = np.minimum(dist_to_chosen, dm[nxt])
        return sorted(chosen)
    idxs = [int(i) for i in landmarks]  # type: ignore[union-attr]
    if any(i < 0 or i >= n for i in idxs):
        raise GeometryError("landmark index out of range")
    return sorted(set(idxs))


def build_grid_cover(cloud: PointCloud, filter_values: Sequence[float],
                     resolution: int, gain: float) -> Cover:
    """Cover by preimages of overlapping filter-value windows.

    The filter range is split into ``resolution`` base windows of length L;
    each window is enlarged by gain*L on both sides.  Empty preimages are
    dropped; a zero-width range collapses to a single element.
    """
    n = len(cloud)
    if n < 1:
        raise GeometryError("cloud must be nonempty")
    fv = np.asarray(filter_values, dtype=float)
    if fv.shape != (n,):
        raise GeometryError("filter-values length must equal the point count")
    if not np.all(np.isfinite(fv)):
        raise GeometryError("filter values must be finite")
    if resolution < 1:
        raise GeometryError("resolution must be >= 1")
    if not (0.0 < gain < 1.0):
        raise GeometryError("gain must be in (0, 1)")
    fmin, fmax = float(fv.min()), float(fv.max())
    if resolution == 1 or fmax == fmin:
        el = CoverElement(0, tuple(range(n)), ("grid-cell", fmin, fmax))
        return Cover((el,), ground_set_size=n, delta=(fmax - fmin) / 2.0)
    length = (fmax - fmin) / resolution
    pad = gain * length
    elements = []
    eid = 0
    for w in range(resolution):
        lo = fmin + w * length - pad
        hi = fmin + (w + 1) * length + pad
        members = tuple(int(i) for i in np.flatnonzero((fv >= lo) & (fv <= hi)))
        if not members:
            continue
        elements.append(CoverElement(eid, members, ("grid-cell", lo, hi)))
        eid += 1
    return Cover(tuple(elements), ground_set_size=n, delta=(length + 2 * pad) / 2.0)


def close_under_intersections(cover: Cover, max_depth: int = 2) -> Cover:
    """Close the cover under finite intersections of its elements.

    New elements carry intersection provenance naming their original
    parents; duplicates (by member set) are skipped, originals preserved.
    Iterates pairwise intersections to a fixpoint, which contains every
    nonempty intersection of up to ``max_depth`` original elements.
    """
    if max_depth < 2:
        raise GeometryError("max_depth must be >= 2")
    elements = list(cover.elements)
    seen = {e.member_set for e in elements}
    # parents of an original element are just itself
    parents: dict[int, frozenset[int]] = {}
    for e in elements:
        if e.provenance[0] == "intersection":
            parents[e.id] = frozenset(e.provenance[1])
        else:
            parents[e.id] = frozenset((e.id,))
    next_id = max(e.id for e in elements) + 1
    frontier = list(elements)
    while frontier:
        fresh = []
        for i, a in enumerate(elements):
            for b in frontier:
                if b.id <= a.id:
                    continue
                inter = a.member_set & b.member_set
                if not inter or inter in seen:
                    continue
                seen.add(inter)
                par = tuple(sorted(parents[a.id] | parents[b.id]))
                el = CoverElement(next_id, tuple(sorted(inter)), ("intersection", par))
                parents[el.id] = frozenset(par)
                fresh.append(el)
                next_id += 1
        elements.extend(fresh)
        frontier = fresh
    return Cover(tuple(elements), cover.ground_set_size, cover.delta)


def intersection_graph(cover: Cover) -> IntersectionGraph:
    """Graph with one node per element and an edge iff member sets overlap."""
    nodes = tuple(e.id for e in cover.elements)
    edges = _edges_from_members(cover.elements)
    adj: dict[int, list[int]] = {n: [] for n in nodes}
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    remaining = set(nodes)
    components = []
    while remaining:
        start = min(remaining)
        comp = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in comp:
                    comp.add(y)
                    stack.append(y)
        remaining -= comp
        components.append(tuple(sorted(comp)))
    return IntersectionGraph(nodes, edges, tuple(sorted(components)))


def layer_decomposition(cloud: PointCloud, proper_function: Sequence[float]) -> LayerDecomposition:
    """Slice the cloud into closed unit bands A_n = f^-1[n, n+1], n >= 0."""
    n = len(cloud)
    values = list(proper_function)
    if len(values) != n:
        raise GeometryError("proper-function length must equal the point count")
    for i, v in enumerate(values):
        if not math.isfinite(v) or v < 0:
            raise GeometryError(f"proper-function value at index {i} must be finite and >= 0")
    top = int(math.floor(max(values))) if n else 0
    layers = []
    for band in range(top + 1):
        members = tuple(i for i, v in enumerate(values) if band <= v <= band + 1)
        layers.append((band, members))
    even = sorted({i for band, mem in layers if band % 2 == 0 for i in mem})
    odd = sorted({i for band, mem in layers if band % 2 == 1 for i in mem})
    return LayerDecomposition(tuple(layers), tuple(even), tuple(odd))


def hausdorff_distance(a: PointCloud, b: PointCloud) -> float:
    """Exact Hausdorff distance between two finite clouds of equal dimension."""
    if len(a) == 0 or len(b) == 0:
        raise GeometryError("hausdorff_distance requires nonempty clouds")
    if a.dim != b.dim:
        raise GeometryError(f"dimension mismatch: {a.dim} vs {b.dim}")
    diff = a.points[:, None, :] - b.points[None, :, :]
    d = np.sqrt(np.sum(diff * diff, axis=2))
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))
