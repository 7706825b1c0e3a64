"""Regenerate the group files shipped in ``axial/catalog``."""

import itertools
import json
from pathlib import Path

from axial.matsuo import CATALOG_FILES, close_class, group_checksum

OUT = Path(__file__).resolve().parents[1] / "src" / "axial" / "catalog"


def swap(n, *pairs):
    p = list(range(n))
    for i, j in pairs:
        p[i], p[j] = p[j], p[i]
    return p


def symmetric(n):
    gens = [swap(n, (i, i + 1)) for i in range(n - 1)]
    return gens, [gens[0]]


def weyl_d4():
    # points 0..3 are +e_i, 4..7 are -e_i
    gens = [swap(8, (i, i + 1), (i + 4, i + 5)) for i in range(3)]
    gens.append(swap(8, (2, 7), (3, 6)))
    return gens, [gens[0]]


def affine_3_3_s4():
    pts = [v for v in itertools.product(range(3), repeat=4) if sum(v) % 3 == 0]
    idx = {v: i for i, v in enumerate(pts)}

    def perm_of(f):
        return [idx[f(v)] for v in pts]

    def coord_swap(i, j):
        def f(v):
            w = list(v)
            w[i], w[j] = w[j], w[i]
            return tuple(w)
        return f

    def reflect01(v):
        w = list(coord_swap(0, 1)(v))
        w[0] = (w[0] + 1) % 3
        w[1] = (w[1] - 1) % 3
        return tuple(w)

    gens = [perm_of(coord_swap(i, i + 1)) for i in range(3)] + [perm_of(reflect01)]
    return gens, [gens[0]]


BUILDERS = {
    "S3": lambda: symmetric(3),
    "S4": lambda: symmetric(4),
    "S5": lambda: symmetric(5),
    "W(D4)": weyl_d4,
    "3^3:S4": affine_3_3_s4,
}


def main():
    OUT.mkdir(exist_ok=True)
    for name, build in BUILDERS.items():
        gens, seeds = build()
        tc = close_class(gens, seeds, name=name)
        data = {
            "name": name,
            "degree": len(gens[0]),
            "generators": gens,
            "seeds": seeds,
            "expected_class_size": len(tc),
        }
        data["sha256"] = group_checksum(data)
        (OUT / CATALOG_FILES[name]).write_text(json.dumps(data, indent=1) + "\n")
        print(name, len(tc), tc.group_order)


if __name__ == "__main__":
    main()
