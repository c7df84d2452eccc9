#!/usr/bin/env python3
"""Writes the bundled example documents into data/."""

import argparse
import itertools
import json
from fractions import Fraction
from pathlib import Path

OUTCOMES = ["0", "1"]


def frac(q):
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def header(kind):
    return {"format": "ftcausal", "version": 1, "kind": kind}


def bell(parties, settings=2):
    names = "abcdefgh"[:parties]
    ms = [f"{p}{x}" for p in names for x in range(settings)]
    contexts = [[f"{p}{x}" for p, x in zip(names, xs)]
                for xs in itertools.product(range(settings), repeat=parties)]
    return {
        "measurements": ms,
        "outcomes": OUTCOMES,
        "contexts": contexts,
        "bell_partition": [[f"{p}{x}" for x in range(settings)] for p in names],
    }


def phenomenon(scenario, prob):
    # prob(context measurements, outcome tuple) -> Fraction
    table = []
    for ctx in scenario["contexts"]:
        row = [frac(prob(ctx, outs))
               for outs in itertools.product(range(len(scenario["outcomes"])), repeat=len(ctx))]
        table.append({"context": ctx, "p": row})
    doc = header("phenomenon")
    doc.update({"scenario": scenario, "table": table})
    return doc


def settings_of(ctx):
    return [int(m[1:]) for m in ctx]


def pr_box(ctx, outs):
    x, y = settings_of(ctx)
    a, b = outs
    return Fraction(1, 2) if (a ^ b) == (x & y) else Fraction(0)


def tsirelson_rational(ctx, outs):
    x, y = settings_of(ctx)
    e = Fraction(-27, 40) if x & y else Fraction(27, 40)
    sign = 1 if outs[0] == outs[1] else -1
    return (1 + sign * e) / 4


def ghz(ctx, outs):
    xs = settings_of(ctx)
    e = {(0, 0, 0): 1, (0, 1, 1): -1, (1, 0, 1): -1, (1, 1, 0): -1}.get(tuple(xs), 0)
    sign = -1 if sum(outs) % 2 else 1
    return Fraction(1 + sign * e, 8)


def signalling(ctx, outs):
    _, y = settings_of(ctx)
    return Fraction(1, 2) if outs[0] == y else Fraction(0)


def kcbs_maximal():
    ms = [f"m{i}" for i in range(5)]
    scenario = {"measurements": ms, "outcomes": OUTCOMES,
                "contexts": [[ms[i], ms[(i + 1) % 5]] for i in range(5)]}
    return phenomenon(scenario, lambda ctx, o: Fraction(1, 2) if o[0] != o[1] else Fraction(0))


# Bell DAG X1 -> A1 <- L -> A2 <- X2 with generic positive CPTs.
BELL_L = [Fraction(1, 3), Fraction(2, 3)]
BELL_A1 = [[Fraction(1, 5), Fraction(4, 5)], [Fraction(3, 7), Fraction(4, 7)],
           [Fraction(5, 8), Fraction(3, 8)], [Fraction(2, 11), Fraction(9, 11)]]
BELL_A2 = [[Fraction(1, 4), Fraction(3, 4)], [Fraction(2, 3), Fraction(1, 3)],
           [Fraction(5, 9), Fraction(4, 9)], [Fraction(1, 6), Fraction(5, 6)]]


def bell_dag_prob(ctx, outs):
    x, y = settings_of(ctx)
    a, b = outs
    # rows indexed by (X, L), X most significant
    return sum(BELL_L[l] * BELL_A1[2 * x + l][a] * BELL_A2[2 * y + l][b] for l in range(2))


def observed_nodes():
    return [
        {"id": "X1", "role": "setting", "slot": 1},
        {"id": "X2", "role": "setting", "slot": 2},
        {"id": "A1", "role": "outcome", "slot": 1},
        {"id": "A2", "role": "outcome", "slot": 2},
    ]


def rows(table):
    return [[frac(q) for q in r] for r in table]


def bell_dag_model():
    doc = header("model")
    doc.update({
        "scenario": bell(2),
        "nodes": observed_nodes() + [{"id": "L", "role": "latent", "cardinality": 2}],
        "edges": [["X1", "A1"], ["L", "A1"], ["X2", "A2"], ["L", "A2"]],
        "cpts": {
            "L": {"parents": [], "rows": rows([BELL_L])},
            "A1": {"parents": ["X1", "L"], "rows": rows(BELL_A1)},
            "A2": {"parents": ["X2", "L"], "rows": rows(BELL_A2)},
        },
    })
    return doc


def hidden_edge_model():
    # A1 = L xor (X1 and X2), A2 = L: the PR box with a hidden X2 -> A1 edge.
    a1 = []
    for x1, x2, l in itertools.product(range(2), repeat=3):
        v = l ^ (x1 & x2)
        a1.append([1 - v, v])
    doc = header("model")
    doc.update({
        "scenario": bell(2),
        "nodes": observed_nodes() + [{"id": "L", "role": "latent", "cardinality": 2}],
        "edges": [["X1", "A1"], ["X2", "A1"], ["L", "A1"], ["L", "A2"]],
        "cpts": {
            "L": {"parents": [], "rows": rows([[Fraction(1, 2), Fraction(1, 2)]])},
            "A1": {"parents": ["X1", "X2", "L"], "rows": rows(a1)},
            "A2": {"parents": ["L"], "rows": rows([[1, 0], [0, 1]])},
        },
    })
    return doc


def graph(nodes, edges):
    doc = header("graph")
    doc.update({"nodes": [{"id": v, "role": "latent", "cardinality": 2} for v in nodes],
                "edges": [list(e) for e in edges]})
    return doc


def corpus():
    return {
        "pr-box": phenomenon(bell(2), pr_box),
        "tsirelson-rational": phenomenon(bell(2), tsirelson_rational),
        "ghz-mermin": phenomenon(bell(3), ghz),
        "kcbs-maximal": kcbs_maximal(),
        "uniform-noise": phenomenon(bell(2), lambda ctx, o: Fraction(1, 4)),
        "signalling-box": phenomenon(bell(2), signalling),
        "bell-dag-phenomenon": phenomenon(bell(2), bell_dag_prob),
        "bell-dag": bell_dag_model(),
        "hidden-edge-pr": hidden_edge_model(),
        "chain": graph(["X", "Y", "Z"], [("X", "Y"), ("Y", "Z")]),
        "collider": graph(["X", "Y", "Z"], [("X", "Y"), ("Z", "Y")]),
        "collider-descendant": graph(["X", "Y", "Z", "W"], [("X", "Y"), ("Z", "Y"), ("Y", "W")]),
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", type=Path, default=Path(__file__).resolve().parent.parent / "data")
    args = parser.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    for name, doc in corpus().items():
        (args.out / f"{name}.json").write_text(json.dumps(doc, indent=2) + "\n")
        print(args.out / f"{name}.json")


if __name__ == "__main__":
    main()
