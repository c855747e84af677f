"""Filtered simplicial complexes: Vietoris-Rips, nerves, mapper, Betti numbers.

Homology is computed over the two-element field by boundary-matrix rank,
unreduced (so beta_0 counts connected components).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from . import gf2
from .geometry import Cover, GeometryError, PointCloud, build_grid_cover


class ComplexError(ValueError):
    pass


@dataclass(frozen=True)
class Simplex:
    vertices: tuple[int, ...]
    value: float = 0.0

    def __post_init__(self):
        v = tuple(self.vertices)
        if not v:
            raise ComplexError("a simplex needs at least one vertex")
        if any(v[i] >= v[i + 1] for i in range(len(v) - 1)):
            raise ComplexError(f"vertices must be strictly ascending, got {v}")
        object.__setattr__(self, "vertices", v)

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1

    def faces(self) -> list[tuple[int, ...]]:
        if self.dim == 0:
            return []
        return [self.vertices[:i] + self.vertices[i + 1:] for i in range(len(self.vertices))]

    def sort_key(self) -> tuple:
        return (self.value, self.dim, self.vertices)


@dataclass(frozen=True)
class Filtration:
    """Simplicial complex with a monotone filtration value per simplex.

    Simplices are kept in a valid filtration order (faces first); the
    canonical order is (value, dimension, lexicographic vertices).
    """

    simplices: tuple[Simplex, ...]
    vertex_count: int = field(default=0)
    max_dim: int = field(default=-1)

    def __post_init__(self):
        simplices = tuple(self.simplices)
        object.__setattr__(self, "simplices", simplices)
        seen: dict[tuple[int, ...], float] = {}
        for pos, s in enumerate(simplices):
            if s.vertices in seen:
                raise ComplexError(f"duplicate simplex {s.vertices}")
            for f in s.faces():
                if f not in seen:
                    raise ComplexError(
                        f"simplex {s.vertices} at position {pos} appears before its face {f}")
                if seen[f] > s.value:
                    raise ComplexError(
                        f"face {f} has value {seen[f]} > {s.value} of coface {s.vertices}")
            seen[s.vertices] = s.value
        object.__setattr__(self, "vertex_count", sum(1 for s in simplices if s.dim == 0))
        object.__setattr__(self, "max_dim", max((s.dim for s in simplices), default=-1))

    @classmethod
    def build(cls, simplices: Iterable[Simplex], canonical: bool = True) -> "Filtration":
        items = list(simplices)
        if canonical:
            items.sort(key=Simplex.sort_key)
        return cls(tuple(items))

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[Sequence[int], float]]) -> "Filtration":
        return cls.build(Simplex(tuple(v), float(x)) for v, x in pairs)

    def vertices(self) -> tuple[int, ...]:
        return tuple(s.vertices[0] for s in self.simplices if s.dim == 0)

    def max_value(self) -> float:
        return max((s.value for s in self.simplices), default=0.0)

    def at_scale(self, at_scale: float) -> dict[int, list[tuple[int, ...]]]:
        """Simplices with value <= at_scale, grouped by dimension, sorted."""
        by_dim: dict[int, list[tuple[int, ...]]] = {}
        for s in self.simplices:
            if s.value <= at_scale:
                by_dim.setdefault(s.dim, []).append(s.vertices)
        for k in by_dim:
            by_dim[k].sort()
        return by_dim

    def __len__(self) -> int:
        return len(self.simplices)


@dataclass(frozen=True)
class MapperNode:
    element_id: int
    cluster_id: int
    members: tuple[int, ...]


@dataclass(frozen=True)
class MapperComplex:
    """Nerve of the single-linkage clusters inside each filter window."""

    nodes: tuple[MapperNode, ...]
    simplices: Filtration


def boundary_columns(by_dim: dict[int, list[tuple[int, ...]]], k: int) -> list[int]:
    """Columns of the boundary map from k-chains to (k-1)-chains, as bitmasks."""
    if k <= 0 or k not in by_dim:
        return [0] * len(by_dim.get(k, []))
    face_index = {f: i for i, f in enumerate(by_dim.get(k - 1, []))}
    cols = []
    for simplex in by_dim[k]:
        col = 0
        for i in range(len(simplex)):
            face = simplex[:i] + simplex[i + 1:]
            col |= 1 << face_index[face]
        cols.append(col)
    return cols


def betti_numbers(complex: Filtration, at_scale: float | None = None,
                  max_degree: int | None = None) -> list[int]:
    """Betti numbers of the subcomplex at the given scale, over GF(2).

    Unreduced homology: beta_0 is the number of connected components.
    """
    if max_degree is None:
        max_degree = max(complex.max_dim, 0)
    if max_degree < 0:
        raise ComplexError("max_degree must be >= 0")
    if at_scale is None:
        at_scale = complex.max_value()
    by_dim = complex.at_scale(at_scale)
    ranks = {}
    for k in range(1, max_degree + 2):
        ranks[k] = gf2.rank(boundary_columns(by_dim, k))
    out = []
    for k in range(max_degree + 1):
        n_k = len(by_dim.get(k, []))
        out.append(n_k - ranks.get(k + 1, 0) - (ranks.get(k, 0) if k >= 1 else 0))
    return out


def euler_characteristic(complex: Filtration, at_scale: float | None = None) -> int:
    if at_scale is None:
        at_scale = complex.max_value()
    by_dim = complex.at_scale(at_scale)
    return sum((-1) ** k * len(v) for k, v in by_dim.items())


def vietoris_rips(cloud: PointCloud, max_scale: float, max_dim: int,
                  subset: Sequence[int] | None = None) -> Filtration:
    """Clique (Vietoris-Rips) filtration up to max_dim and max_scale.

    A simplex enters at the largest pairwise distance among its vertices;
    vertices enter at 0.  ``subset`` restricts to the given point indices,
    keeping their original ids.
    """
    if max_dim < 0:
        raise ComplexError("max_dim must be >= 0")
    if max_scale <= 0:
        raise ComplexError("max_scale must be positive")
    if len(cloud) < 1:
        raise GeometryError("cloud must be nonempty")
    if subset is None:
        idx = list(range(len(cloud)))
    else:
        idx = sorted(set(int(i) for i in subset))
        if any(i < 0 or i >= len(cloud) for i in idx):
            raise ComplexError("subset index out of range")
    n = len(idx)
    max_dim = min(max_dim, n - 1)
    dm = cloud.distance_matrix()[np.ix_(idx, idx)]
    simplices = [Simplex((idx[i],), 0.0) for i in range(n)]
    # neighbor bitmask per local position, restricted to larger positions
    nbr = []
    for i in range(n):
        mask = 0
        for j in range(i + 1, n):
            if dm[i, j] <= max_scale:
                mask |= 1 << j
        nbr.append(mask)
    # grow cliques one vertex at a time; common = neighbors shared by all
    def grow(clique: tuple[int, ...], common: int, value: float):
        c = common
        while c:
            j = (c & -c).bit_length() - 1
            c &= c - 1
            val = max(value, max(float(dm[i, j]) for i in clique))
            ext = clique + (j,)
            simplices.append(Simplex(tuple(idx[p] for p in ext), val))
            if len(ext) <= max_dim:
                grow(ext, common & nbr[j], val)
    if max_dim >= 1:
        for i in range(n):
            grow((i,), nbr[i], 0.0)
    return Filtration.build(simplices)


def nerve(cover: Cover, max_dim: int) -> Filtration:
    """Nerve of the cover: a k-simplex per k+1 elements sharing a point.

    Vertex i of the nerve is position i in cover.elements; all values 0.
    """
    if max_dim < 0:
        raise ComplexError("max_dim must be >= 0")
    m = len(cover.elements)
    containing: dict[int, list[int]] = {}
    for pos, el in enumerate(cover.elements):
        for p in el.members:
            containing.setdefault(p, []).append(pos)
    found: set[tuple[int, ...]] = {(pos,) for pos in range(m)}
    for positions in containing.values():
        top = min(len(positions), max_dim + 1)
        for size in range(2, top + 1):
            for combo in combinations(positions, size):
                found.add(tuple(combo))
    return Filtration.build(Simplex(v, 0.0) for v in found)


def single_linkage_clusters(cloud: PointCloud, members: Sequence[int],
                            cluster_scale: float) -> list[tuple[int, ...]]:
    """Partition ``members`` into single-linkage clusters cut at cluster_scale."""
    members = sorted(members)
    pos = {p: i for i, p in enumerate(members)}
    parent = list(range(len(members)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    dm = cloud.distance_matrix()
    for a, b in combinations(members, 2):
        if dm[a, b] <= cluster_scale:
            ra, rb = find(pos[a]), find(pos[b])
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    groups: dict[int, list[int]] = {}
    for p in members:
        groups.setdefault(find(pos[p]), []).append(p)
    return [tuple(sorted(g)) for _, g in sorted(groups.items())]


def mapper(cloud: PointCloud, filter_values: Sequence[float], resolution: int,
           gain: float, cluster_scale: float, max_dim: int = 2) -> MapperComplex:
    """Mapper complex: nerve of per-window single-linkage clusters."""
    if len(cloud) < 1:
        raise GeometryError("cloud must be nonempty")
    if cluster_scale <= 0:
        raise ComplexError("cluster-scale must be positive")
    cover = build_grid_cover(cloud, filter_values, resolution, gain)
    nodes = []
    for el in cover.elements:
        for cid, group in enumerate(single_linkage_clusters(cloud, el.members, cluster_scale)):
            nodes.append(MapperNode(el.id, cid, group))
    containing: dict[int, list[int]] = {}
    for pos, node in enumerate(nodes):
        for p in node.members:
            containing.setdefault(p, []).append(pos)
    found: set[tuple[int, ...]] = {(pos,) for pos in range(len(nodes))}
    for positions in containing.values():
        top = min(len(positions), max_dim + 1)
        for size in range(2, top + 1):
            for combo in combinations(positions, size):
                found.add(tuple(combo))
    complex_ = Filtration.build(Simplex(v, 0.0) for v in found)
    return MapperComplex(tuple(nodes), complex_)


def restrict(filtration: Filtration, subset: Iterable[int]) -> Filtration:
    """Full subcomplex on the given vertex subset, values inherited."""
    keep = set(int(i) for i in subset)
    return Filtration.build(s for s in filtration.simplices
                            if all(v in keep for v in s.vertices))


def disjoint_union(a: Filtration, b: Filtration) -> Filtration:
    """Disjoint union; b's vertex ids are shifted past a's largest id."""
    if len(a.simplices) == 0:
        return b
    if len(b.simplices) == 0:
        return a
    shift = max(v for s in a.simplices for v in s.vertices) + 1
    shifted = [Simplex(tuple(v + shift for v in s.vertices), s.value) for s in b.simplices]
    return Filtration.build(list(a.simplices) + shifted)
