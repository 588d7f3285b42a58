"""Graphs, Laplacians and graph-geodesic utilities.

A Graph is an immutable weighted undirected edge list with optional 3D node
positions (populated when built from a mesh). Laplacians come in three
conventions; all downstream operators consume the (L, mass) pair so that the
random-walk operator D^-1 L can be applied and analysed without ever forming
a nonsymmetric matrix.
"""

from __future__ import annotations

import heapq
import warnings

import numpy as np

from ._errors import (
    ArgumentError,
    DimensionError,
    ParseError,
    UnsupportedFormatError,
    ValidationError,
)
from .sparse_linalg import SparseMatrix, spmv

COMBINATORIAL = "combinatorial"
RANDOM_WALK = "random-walk"
SYMMETRIC = "symmetric-normalized"
LAPLACIAN_KINDS = (COMBINATORIAL, RANDOM_WALK, SYMMETRIC)

COT_WEIGHT_FLOOR = 1e-8


class Graph:
    """Undirected weighted graph on nodes 0..n_nodes-1.

    Edges are stored deduplicated with u < v and strictly positive weights.
    Instances are immutable after construction and safe to share.
    """

    def __init__(self, n_nodes, edges, node_positions=None):
        self.n_nodes = int(n_nodes)
        if self.n_nodes <= 0:
            raise ValidationError("graph needs at least one node")
        seen = set()
        clean = []
        for u, v, w in edges:
            u, v, w = int(u), int(v), float(w)
            if u == v:
                raise ValidationError(f"self-loop at node {u} rejected")
            if not (0 <= u < self.n_nodes and 0 <= v < self.n_nodes):
                raise ValidationError(f"edge ({u},{v}) out of range")
            if w <= 0:
                raise ValidationError(f"edge ({u},{v}) has non-positive weight {w}")
            if u > v:
                u, v = v, u
            if (u, v) in seen:
                raise ValidationError(f"duplicate edge ({u},{v})")
            seen.add((u, v))
            clean.append((u, v, w))
        self.edges = tuple(clean)
        if node_positions is not None:
            node_positions = np.asarray(node_positions, dtype=np.float64)
            if node_positions.shape != (self.n_nodes, 3):
                raise DimensionError("node_positions must be (n_nodes, 3)")
        self.node_positions = node_positions

    @property
    def n_edges(self):
        return len(self.edges)

    def adjacency(self) -> SparseMatrix:
        rows, cols, vals = [], [], []
        for u, v, w in self.edges:
            rows += [u, v]
            cols += [v, u]
            vals += [w, w]
        return SparseMatrix.from_coo(self.n_nodes, self.n_nodes, rows, cols, vals)

    def degrees(self) -> np.ndarray:
        d = np.zeros(self.n_nodes)
        for u, v, w in self.edges:
            d[u] += w
            d[v] += w
        return d

    def neighbors(self):
        """Adjacency lists as (node, weight) pairs, built once per call."""
        adj = [[] for _ in range(self.n_nodes)]
        for u, v, w in self.edges:
            adj[u].append((v, w))
            adj[v].append((u, w))
        return adj


class LaplacianPair:
    """Laplacian matrix plus the diagonal mass of its inner product.

    L is always stored as a symmetric sparse matrix. For the random-walk
    kind the operator is D^-1 L and mass = degrees; for the other kinds the
    operator is L itself and mass = 1. ``op`` applies the operator, and
    generalized eigenpairs of (L, mass) are the spectrum all filters see.
    """

    def __init__(self, L: SparseMatrix, degrees, mass, kind):
        self.L = L
        self.degrees = np.asarray(degrees, dtype=np.float64)
        self.mass = np.asarray(mass, dtype=np.float64)
        self.kind = kind

    @property
    def n(self):
        return self.L.n_rows

    def op(self, x) -> np.ndarray:
        """Apply the (possibly mass-normalized) Laplacian operator."""
        y = spmv(self.L, x)
        if self.kind == RANDOM_WALK:
            y /= self.mass
        return y

    def weighted_dot(self, u, v) -> float:
        return float(np.asarray(u) @ (self.mass * np.asarray(v)))

    def weighted_norm(self, u) -> float:
        return float(np.sqrt(max(self.weighted_dot(u, u), 0.0)))

    def constant_mode(self) -> np.ndarray:
        """Unit-mass-norm vector spanning the kernel of a connected Laplacian."""
        x0 = np.ones(self.n)
        return x0 / np.sqrt(self.mass.sum())

    def solve_matrix(self, scale: float = 1.0) -> SparseMatrix:
        """scale * L + diag(mass): the SPD matrix of the rational recursion."""
        return self.L.scaled(scale).add_diagonal(self.mass)


def laplacian(g: Graph, kind: str = COMBINATORIAL) -> LaplacianPair:
    """Build the Laplacian pair of a graph.

    combinatorial        L = D - W, mass = 1
    random-walk          operator D^-1 (D - W), stored as (D - W, mass = D)
    symmetric-normalized L = D^-1/2 (D - W) D^-1/2, mass = 1
    """
    if kind not in LAPLACIAN_KINDS:
        raise ArgumentError(f"unknown Laplacian kind {kind!r}")
    d = g.degrees()
    if kind in (RANDOM_WALK, SYMMETRIC):
        isolated = np.nonzero(d == 0)[0]
        if len(isolated):
            raise ValidationError(
                f"node {isolated[0]} has degree zero; {kind} Laplacian undefined"
            )
    rows, cols, vals = [], [], []
    for u, v, w in g.edges:
        if kind == SYMMETRIC:
            w = w / np.sqrt(d[u] * d[v])
        rows += [u, v]
        cols += [v, u]
        vals += [-w, -w]
    rows += list(range(g.n_nodes))
    cols += list(range(g.n_nodes))
    vals += list(np.ones(g.n_nodes) if kind == SYMMETRIC else d)
    L = SparseMatrix.from_coo(g.n_nodes, g.n_nodes, rows, cols, vals)
    mass = d.copy() if kind == RANDOM_WALK else np.ones(g.n_nodes)
    return LaplacianPair(L, d, mass, kind)


def _open_lines(path):
    with open(path, "r", encoding="utf-8") as fh:
        for no, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if line:
                yield no, line


def _load_positions_csv(path):
    pos = []
    for no, line in _open_lines(path):
        parts = line.replace(",", " ").split()
        if len(parts) != 3:
            raise ParseError(path, no, f"expected 3 coordinates, got {len(parts)}")
        try:
            pos.append([float(p) for p in parts])
        except ValueError as exc:
            raise ParseError(path, no, str(exc)) from exc
    return np.asarray(pos)


def build_from_edge_list(path, weighting="given", sigma=None, positions_path=None):
    """Read a whitespace-separated edge list ("u v [w]", '#' comments, 0-based).

    weighting: 'given' keeps file weights (default 1.0 when the column is
    absent), 'unit' forces 1.0, 'gaussian' sets w = exp(-|p_u - p_v|^2 / sigma^2)
    from the positions sidecar.
    """
    if weighting not in ("given", "unit", "gaussian"):
        raise ArgumentError(f"unknown weighting {weighting!r}")
    positions = _load_positions_csv(positions_path) if positions_path else None
    if weighting == "gaussian":
        if positions is None:
            raise ArgumentError("gaussian weighting requires a positions sidecar")
        if not sigma or sigma <= 0:
            raise ArgumentError("gaussian weighting requires sigma > 0")
    raw = {}
    max_idx = -1
    for no, line in _open_lines(path):
        parts = line.split()
        if len(parts) not in (2, 3):
            raise ParseError(path, no, f"expected 'u v [w]', got {len(parts)} fields")
        try:
            u, v = int(parts[0]), int(parts[1])
            w = float(parts[2]) if len(parts) == 3 else 1.0
        except ValueError as exc:
            raise ParseError(path, no, str(exc)) from exc
        if u < 0 or v < 0:
            raise ParseError(path, no, "negative node index")
        if u == v:
            raise ValidationError(f"{path}:{no}: self-loop at node {u}")
        if w <= 0:
            raise ValidationError(f"{path}:{no}: non-positive weight {w}")
        key = (min(u, v), max(u, v))
        raw.setdefault(key, w)  # duplicate undirected entries collapse to one
        max_idx = max(max_idx, u, v)
    n = max_idx + 1
    if positions is not None and len(positions) != n:
        raise ValidationError(
            f"positions sidecar has {len(positions)} rows for {n} nodes"
        )
    edges = []
    for (u, v), w in sorted(raw.items()):
        if weighting == "unit":
            w = 1.0
        elif weighting == "gaussian":
            diff = positions[u] - positions[v]
            w = float(np.exp(-(diff @ diff) / sigma**2))
        edges.append((u, v, w))
    return Graph(n, edges, node_positions=positions)


def _cot(a, b):
    """Cotangent of the angle between vectors a and b."""
    cross = np.cross(a, b)
    area2 = np.linalg.norm(cross)
    if area2 < 1e-300:
        return np.inf
    return float(a @ b) / area2


def build_from_mesh(path, weighting="cotangent") -> Graph:
    """Read a triangular OFF mesh into a graph.

    Cotangent weights w_ij = (cot a_ij + cot b_ij) / 2 over the angles
    opposite the edge, clamped below at 1e-8 so every Laplacian stays
    positive semi-definite on obtuse or degenerate meshes.
    """
    if weighting not in ("uniform", "cotangent"):
        raise ArgumentError(f"unknown mesh weighting {weighting!r}")
    lines = _open_lines(path)
    try:
        no, header = next(lines)
    except StopIteration:
        raise ParseError(path, 1, "empty file") from None
    if header.strip() != "OFF":
        raise UnsupportedFormatError(f"{path}: expected OFF header, got {header!r}")
    no, counts = next(lines)
    try:
        nv, nf, _ = (int(t) for t in counts.split())
    except ValueError as exc:
        raise ParseError(path, no, f"bad counts line: {exc}") from exc
    verts = np.zeros((nv, 3))
    for i in range(nv):
        no, line = next(lines)
        parts = line.split()
        if len(parts) < 3:
            raise ParseError(path, no, "vertex line needs 3 coordinates")
        verts[i] = [float(p) for p in parts[:3]]
    faces = []
    for _ in range(nf):
        no, line = next(lines)
        parts = [int(t) for t in line.split()]
        if parts[0] != 3:
            raise UnsupportedFormatError(
                f"{path}:{no}: only triangular faces supported, got {parts[0]}-gon"
            )
        faces.append(tuple(parts[1:4]))

    acc = {}
    degenerate = 0
    for i, j, k in faces:
        for (a, b), c in (((i, j), k), ((j, k), i), ((k, i), j)):
            key = (min(a, b), max(a, b))
            if weighting == "uniform":
                acc[key] = 1.0
                continue
            cot = _cot(verts[a] - verts[c], verts[b] - verts[c])
            if not np.isfinite(cot):
                degenerate += 1
                cot = 0.0
            acc[key] = acc.get(key, 0.0) + 0.5 * cot
    if degenerate:
        warnings.warn(f"{degenerate} degenerate triangle corner(s); weights clamped")
    edges = [
        (u, v, max(w, COT_WEIGHT_FLOOR)) for (u, v), w in sorted(acc.items())
    ]
    return Graph(nv, edges, node_positions=verts)


def _edge_length(u, v, w, mode, positions):
    if mode == "unit":
        return 1.0
    if mode == "euclidean":
        return float(np.linalg.norm(positions[u] - positions[v]))
    return w


def dijkstra_distances(g: Graph, source: int, mode: str = "weight") -> np.ndarray:
    """Graph distances from a source node.

    mode selects the edge length: 'weight' (default), 'unit', or 'euclidean'
    (embedding distance, requires node positions; the right choice for
    geodesic sampling on cotangent-weighted meshes). Unreachable nodes get
    +inf.
    """
    if not (0 <= source < g.n_nodes):
        raise ArgumentError(f"source {source} out of range")
    if mode not in ("weight", "unit", "euclidean"):
        raise ArgumentError(f"unknown length mode {mode!r}")
    if mode == "euclidean" and g.node_positions is None:
        raise ArgumentError("euclidean mode requires node positions")
    adj = [[] for _ in range(g.n_nodes)]
    for u, v, w in g.edges:
        ell = _edge_length(u, v, w, mode, g.node_positions)
        adj[u].append((v, ell))
        adj[v].append((u, ell))
    dist = np.full(g.n_nodes, np.inf)
    dist[source] = 0.0
    heap = [(0.0, source)]
    while heap:
        d, u = heapq.heappop(heap)
        if d > dist[u]:
            continue
        for v, ell in adj[u]:
            nd = d + ell
            if nd < dist[v]:
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return dist


def is_connected(g: Graph) -> bool:
    return bool(np.all(np.isfinite(dijkstra_distances(g, 0, mode="unit"))))


def farthest_point_sampling(g: Graph, k: int, seed: int = 0, mode: str = "weight"):
    """Greedy geodesic sampling: each pick maximizes the min-distance to the
    already selected set; ties break toward the lowest node index."""
    if k > g.n_nodes:
        raise ArgumentError(f"k={k} exceeds node count {g.n_nodes}")
    if k < 1:
        raise ArgumentError("k must be >= 1")
    if not (0 <= seed < g.n_nodes):
        raise ArgumentError(f"seed {seed} out of range")
    if not is_connected(g):
        raise ValidationError("farthest point sampling requires a connected graph")
    selected = [seed]
    min_dist = dijkstra_distances(g, seed, mode=mode)
    for _ in range(k - 1):
        nxt = int(np.argmax(min_dist))  # argmax returns the lowest index on ties
        selected.append(nxt)
        min_dist = np.minimum(min_dist, dijkstra_distances(g, nxt, mode=mode))
    return selected
