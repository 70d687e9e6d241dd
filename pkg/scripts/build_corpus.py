"""Freeze a corpus of seed diagrams into src/twistlink/data/corpus.jsonl.

Seeds are alternating, prime, twist-reduced diagrams that are not closed
bigon chains: Rolfsen-table knots and links plus a few pretzel diagrams
with long twist regions.  Also writes the P(c,3,3) family used by the subsurface tests.  Requires
spherogram, which is only needed here; the package reads the frozen file.

    python3 scripts/build_corpus.py
"""

import json
import pathlib

import spherogram
from spherogram import RationalTangle

from twistlink.diagram import PlanarDiagram, checkerboard, is_alternating, to_pd, validate
from twistlink.twist import is_prime, is_twist_reduced, twist_regions

ROOT = pathlib.Path(__file__).resolve().parents[1]
OUT = ROOT / "src/twistlink/data/corpus.jsonl"
# P(c,3,3) for c = 1..10: one open twist region of every length up to 10
FAMILY = ROOT / "tests/data/pretzel_family.jsonl"


def from_spherogram(link):
    return PlanarDiagram(tuple(tuple(a + 1 for a in c) for c in link.PD_code()))


def pretzel(*cols):
    t = RationalTangle(1, cols[0])
    for q in cols[1:]:
        t = t + RationalTangle(1, q)
    return t.numerator_closure()


def admissible(d):
    col = checkerboard(d)
    return (validate(d).ok and is_alternating(d) and is_prime(d) is True
            and is_twist_reduced(d, col) is True
            and not any(r.closed for r in twist_regions(d, col)))


def main():
    rows = []
    names = [f"{n}_{k}" for n, top in ((4, 1), (5, 2), (6, 3), (7, 7), (8, 18)) for k in range(1, top + 1)]
    names += ["L6a1", "L6a2", "L6a4", "L7a1", "L7a5", "L8a1"]
    for name in names:
        d = from_spherogram(spherogram.Link(name))
        if admissible(d):
            rows.append({"name": name, "pd": to_pd(d)})
    for cols in [(3, 3, 3), (5, 3, 3), (4, 3, 5), (3, 3, 2), (7, 5, 3), (2, 3, 5, 3)]:
        d = from_spherogram(pretzel(*cols))
        if admissible(d):
            rows.append({"name": "P(" + ",".join(map(str, cols)) + ")", "pd": to_pd(d)})
    OUT.parent.mkdir(parents=True, exist_ok=True)
    with OUT.open("w") as fh:
        for row in rows:
            fh.write(json.dumps(row) + "\n")
    print(f"{len(rows)} seeds written to {OUT}")
    FAMILY.parent.mkdir(parents=True, exist_ok=True)
    with FAMILY.open("w") as fh:
        for c in range(1, 11):
            d = from_spherogram(pretzel(c, 3, 3))
            assert admissible(d)
            fh.write(json.dumps({"name": f"P({c},3,3)", "c": c, "pd": to_pd(d)}) + "\n")


if __name__ == "__main__":
    main()
