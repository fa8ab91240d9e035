#!/usr/bin/env python3
"""Regenerates crates/core/data/desk: twenty small Matrix Market files and index.csv."""

import math
import os

OUT = os.path.join(os.path.dirname(__file__), "..", "crates", "core", "data", "desk")


class Lcg:
    def __init__(self, seed):
        self.state = seed

    def next(self):
        self.state = (self.state * 6364136223846793005 + 1442695040888963407) % 2**64
        return (self.state >> 11) / 2**53


def fmt(v):
    if isinstance(v, int):
        return str(v)
    return repr(float(v))


def coord(name, rows, cols, entries, field="real", sym="general", kind=""):
    entries = [(i, j, v) for i, j, v in entries if v != 0]
    lines = [f"%%MatrixMarket matrix coordinate {field} {sym}", f"% {kind}", f"{rows} {cols} {len(entries)}"]
    lines += [f"{i + 1} {j + 1} {fmt(v)}" for i, j, v in entries]
    return name, rows, cols, len(entries), field, kind, "\n".join(lines) + "\n"


def array(name, n, values, sym, kind):
    lines = [f"%%MatrixMarket matrix array real {sym}", f"% {kind}", f"{n} {n}"]
    lines += [fmt(v) for v in values]
    return name, n, n, len(values), "real", kind, "\n".join(lines) + "\n"


def sym_lower(n, f):
    return [(i, j, f(i, j)) for j in range(n) for i in range(j, n)]


def build():
    m = []
    m.append(coord("hilbert8", 8, 8, sym_lower(8, lambda i, j: 1 / (i + j + 1)), sym="symmetric", kind="ill-conditioned test matrix"))
    m.append(coord("pascal6", 6, 6, sym_lower(6, lambda i, j: math.comb(i + j, j)), field="integer", sym="symmetric", kind="combinatorial problem"))
    m.append(coord("wilkinson21", 21, 21, [(i, i, abs(10 - i)) for i in range(21)] + [(i + 1, i, 1) for i in range(20)], field="integer", sym="symmetric", kind="eigenvalue test matrix"))
    m.append(coord("poisson1d30", 30, 30, [(i, i, 2.0) for i in range(30)] + [(i + 1, i, -1.0) for i in range(29)], sym="symmetric", kind="2D/3D problem"))
    k = 5
    p2 = []
    for a in range(k * k):
        p2.append((a, a, 4.0))
        if a % k != k - 1:
            p2.append((a + 1, a, -1.0))
        if a + k < k * k:
            p2.append((a + k, a, -1.0))
    m.append(coord("poisson2d5", 25, 25, sorted(p2, key=lambda t: (t[1], t[0])), sym="symmetric", kind="2D/3D problem"))
    m.append(coord("lehmer10", 10, 10, sym_lower(10, lambda i, j: (j + 1) / (i + 1)), sym="symmetric", kind="test matrix"))
    theta = 1.2
    s, c = math.sin(theta), math.cos(theta)
    kahan = [(i, j, s**i if i == j else -c * s**i) for i in range(12) for j in range(i, 12)]
    m.append(coord("kahan12", 12, 12, kahan, kind="ill-conditioned test matrix"))
    frank = [(i, j, 10 - max(i, j)) for i in range(10) for j in range(10) if j >= i - 1]
    m.append(coord("frank10", 10, 10, frank, field="integer", kind="eigenvalue test matrix"))
    m.append(coord("vandermonde8", 8, 8, [(i, j, (i + 1) ** j) for i in range(8) for j in range(8)], field="integer", kind="interpolation problem"))
    m.append(coord("cauchy8", 8, 8, [(i, j, 1 / (i + j + 1.5)) for i in range(8) for j in range(8)], kind="test matrix"))
    m.append(coord("stiffness16", 16, 16, [(i, i, 2.4e7) for i in range(16)] + [(i + 1, i, -1.2e7) for i in range(15)], sym="symmetric", kind="structural problem"))
    rng = Lcg(1)
    circuit = []
    for i in range(20):
        for j in range(20):
            if i == j or rng.next() < 0.12:
                circuit.append((i, j, float(f"{10 ** (-9 + 12 * rng.next()):.6g}") * (1 if i == j else -1)))
    m.append(coord("circuit20", 20, 20, circuit, kind="circuit simulation problem"))
    rng = Lcg(2)
    chem = []
    for i in range(12):
        for j in range(12):
            if i == j or rng.next() < 0.25:
                chem.append((i, j, float(f"{10 ** (-20 + 17 * rng.next()):.5g}")))
    m.append(coord("chemistry12", 12, 12, chem, kind="chemical process simulation problem"))
    rng = Lcg(3)
    markov = []
    for i in range(10):
        w = [rng.next() if rng.next() < 0.4 or j == i else 0.0 for j in range(10)]
        t = sum(w)
        markov += [(i, j, x / t) for j, x in enumerate(w)]
    m.append(coord("markov10", 10, 10, markov, kind="random walk"))
    edges = [(i, (i + 1) % 12) for i in range(12)] + [(0, 6), (2, 9), (3, 7), (1, 10)]
    deg = [0] * 12
    lap = {}
    for a, b in edges:
        deg[a] += 1
        deg[b] += 1
        lap[(max(a, b), min(a, b))] = -1
    for i in range(12):
        lap[(i, i)] = deg[i]
    lap = [(i, j, v) for (i, j), v in sorted(lap.items(), key=lambda t: (t[0][1], t[0][0]))]
    m.append(coord("laplacian12", 12, 12, lap, field="integer", sym="symmetric", kind="undirected graph"))
    rng = Lcg(4)
    econ = [(i, j, round(1e9 * (0.05 + 3 * rng.next()), -3)) for i in range(9) for j in range(9) if i == j or rng.next() < 0.5]
    m.append(coord("economic9", 9, 9, econ, kind="economic problem"))
    dense = [1.0 / (1 + abs(i - j)) + (0.5 if i == j else 0.0) for j in range(6) for i in range(j, 6)]
    m.append(array("densesym6", 6, dense, "symmetric", "statistical/mathematical problem"))
    skew = [(i, j, 0.25 * (i - j) + 0.125) for j in range(8) for i in range(j + 1, 8) if (i + j) % 3 != 0]
    m.append(coord("skew8", 8, 8, skew, sym="skew-symmetric", kind="test matrix"))
    band = [(i, j, (7 * i - 13 * j) % 2001 - 1000) for i in range(15) for j in range(15) if abs(i - j) <= 2]
    m.append(coord("intband15", 15, 15, band, field="integer", kind="test matrix"))
    m.append(coord("extreme10", 10, 10, [(i, i, float(f"1e{-100 + 22 * i}")) for i in range(10)], kind="scaling test matrix"))
    return m


def main():
    mats = build()
    assert len(mats) == 20
    index = ["id,group,name,rows,cols,nnz,field,kind"]
    for name, rows, cols, nnz, field, kind, text in mats:
        with open(os.path.join(OUT, f"{name}.mtx"), "w") as f:
            f.write(text)
        index.append(f"desk/{name},desk,{name},{rows},{cols},{nnz},{field},{kind}")
    with open(os.path.join(OUT, "index.csv"), "w") as f:
        f.write("\n".join([index[0]] + sorted(index[1:])) + "\n")


if __name__ == "__main__":
    main()
