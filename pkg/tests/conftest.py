import numpy as np
import pytest

from spectrafree import Graph, laplacian


@pytest.fixture
def k2():
    return Graph(2, [(0, 1, 1.0)])


@pytest.fixture
def p3():
    return Graph(3, [(0, 1, 1.0), (1, 2, 1.0)])


@pytest.fixture
def p5():
    return Graph(5, [(i, i + 1, 1.0) for i in range(4)])


def random_connected_graph(n, avg_degree=4.0, seed=0, weighted=True):
    """Erdos-Renyi-ish graph plus a random spanning chain for connectivity."""
    rng = np.random.default_rng(seed)
    edges = {}
    perm = rng.permutation(n)
    for a, b in zip(perm[:-1], perm[1:]):
        u, v = int(min(a, b)), int(max(a, b))
        edges[(u, v)] = float(rng.uniform(0.5, 2.0)) if weighted else 1.0
    p = min(1.0, avg_degree / max(n - 1, 1))
    mask = np.triu(rng.random((n, n)) < p, 1)
    for u, v in zip(*np.nonzero(mask)):
        key = (int(u), int(v))
        if key not in edges:
            edges[key] = float(rng.uniform(0.5, 2.0)) if weighted else 1.0
    return Graph(n, [(u, v, w) for (u, v), w in sorted(edges.items())])


def random_lap(n, kind="combinatorial", seed=0, weighted=True, avg_degree=4.0):
    g = random_connected_graph(n, avg_degree=avg_degree, seed=seed, weighted=weighted)
    return g, laplacian(g, kind)


def write_edge_list(path, edges, positions=None):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("# test graph\n")
        for e in edges:
            fh.write(" ".join(str(t) for t in e) + "\n")
    if positions is not None:
        pos_path = str(path) + ".xyz"
        with open(pos_path, "w", encoding="utf-8") as fh:
            for p in positions:
                fh.write(",".join(repr(float(c)) for c in p) + "\n")
        return str(path), pos_path
    return str(path)


def write_off(path, verts, faces):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("OFF\n")
        fh.write(f"{len(verts)} {len(faces)} 0\n")
        for v in verts:
            fh.write(" ".join(repr(float(c)) for c in v) + "\n")
        for f in faces:
            fh.write("3 " + " ".join(str(i) for i in f) + "\n")
    return str(path)


def grid_mesh(nx, ny, bump=0.15):
    """Triangulated rectangular grid with a gentle height field, nx*ny nodes."""
    verts = []
    for j in range(ny):
        for i in range(nx):
            x = i / max(nx - 1, 1)
            y = j / max(ny - 1, 1)
            z = bump * np.sin(2 * np.pi * x) * np.cos(np.pi * y)
            verts.append((x, y, z))
    faces = []
    for j in range(ny - 1):
        for i in range(nx - 1):
            a = j * nx + i
            b = a + 1
            c = a + nx
            d = c + 1
            faces.append((a, b, d))
            faces.append((a, d, c))
    return verts, faces
