"""Regenerate the bundled lattice fixtures (LLL-reduced Gram matrices as JSON).

    python3 scripts/build_lattice_fixtures.py [outdir]
"""
import itertools
import json
import sys
from pathlib import Path

from voapart.lattice import EvenLattice, lll_reduce

E8_CARTAN = [
    [2, -1, 0, 0, 0, 0, 0, 0],
    [-1, 2, -1, 0, 0, 0, 0, 0],
    [0, -1, 2, -1, 0, 0, 0, -1],
    [0, 0, -1, 2, -1, 0, 0, 0],
    [0, 0, 0, -1, 2, -1, 0, 0],
    [0, 0, 0, 0, -1, 2, -1, 0],
    [0, 0, 0, 0, 0, -1, 2, 0],
    [0, 0, -1, 0, 0, 0, 0, 2],
]


def golay24():
    """Extended binary Golay code: cyclic [23,12] code from g(x), plus parity bit."""
    g = [1, 0, 1, 0, 1, 1, 1, 0, 0, 0, 1, 1]  # x^11 + x^10 + x^6 + x^5 + x^4 + x^2 + 1, low first
    rows = []
    for s in range(12):
        w = [0] * 23
        for i, b in enumerate(g):
            w[(i + s) % 23] = b
        rows.append(w + [sum(w) % 2])
    words = set()
    for coeffs in itertools.product((0, 1), repeat=12):
        w = tuple(sum(c * r[i] for c, r in zip(coeffs, rows)) % 2 for i in range(24))
        words.add(w)
    octads = [w for w in words if sum(w) == 8]
    assert len(words) == 4096 and len(octads) == 759, (len(words), len(octads))
    return rows, octads


def hnf_rows(B):
    """Integer row basis of the lattice spanned by the rows of B (echelon via gcd steps)."""
    B = [list(r) for r in B]
    n = len(B[0])
    out = []
    for c in range(n):
        while True:
            nz = [r for r in B if r[c] != 0]
            if len(nz) <= 1:
                break
            nz.sort(key=lambda r: abs(r[c]))
            p = nz[0]
            for r in nz[1:]:
                q = r[c] // p[c]
                for j in range(n):
                    r[j] -= q * p[j]
            B = [r for r in B if any(r)]
        piv = [r for r in B if r[c] != 0]
        if piv:
            out.append(piv[0])
            B = [r for r in B if r is not piv[0]]
    return out


def gram_from_rows(B, scale):
    G = [[sum(a * b for a, b in zip(r, s)) for s in B] for r in B]
    assert all(x % scale == 0 for row in G for x in row)
    return [[x // scale for x in row] for row in G]


def leech():
    _, octads = golay24()
    gens = [[2 * x for x in o] for o in octads]
    for i in range(24):
        for j in range(i + 1, 24):
            for s in (1, -1):
                v = [0] * 24
                v[i], v[j] = 4, 4 * s
                gens.append(v)
    gens.append([-3] + [1] * 23)
    B = hnf_rows(gens)
    assert len(B) == 24
    return gram_from_rows(B, 8)


def d16plus():
    gens = []
    for i in range(15):
        v = [0] * 16
        v[i], v[i + 1] = 2, -2
        gens.append(v)
    v = [0] * 16
    v[14] = v[15] = 2
    gens.append(v)
    gens.append([1] * 16)
    B = hnf_rows(gens)
    assert len(B) == 16
    return gram_from_rows(B, 4)


def block(*gs):
    n = sum(len(g) for g in gs)
    out = [[0] * n for _ in range(n)]
    o = 0
    for g in gs:
        for i, row in enumerate(g):
            out[o + i][o:o + len(g)] = row
        o += len(g)
    return out


def main(outdir=None):
    outdir = Path(outdir or Path(__file__).resolve().parents[1] / "src/voapart/data/lattices")
    outdir.mkdir(parents=True, exist_ok=True)
    grams = {
        "A1": [[2]],
        "A2": [[2, -1], [-1, 2]],
        "E8": E8_CARTAN,
        "E8E8": block(E8_CARTAN, E8_CARTAN),
        "D16plus": d16plus(),
        "Leech": leech(),
    }
    for name, G in grams.items():
        if name not in ("A1", "A2", "E8", "E8E8"):
            _, G = lll_reduce(G)
        lat = EvenLattice(name, tuple(map(tuple, G)))
        assert lat.determinant == {"A1": 2, "A2": 3}.get(name, 1), (name, lat.determinant)
        (outdir / f"{name}.json").write_text(json.dumps(lat.to_json_obj()) + "\n")
        print(f"{name}: rank {lat.rank}, det {lat.determinant}")


if __name__ == "__main__":
    main(*sys.argv[1:])
