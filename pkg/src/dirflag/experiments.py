"""Named, seeded experiment drivers behind the CLI.

Each driver returns a JSON-ready report dict; identical (name, seed,
trials) triples produce byte-identical reports.  Numeric values are
rendered as exact rational strings, never floats.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .chains import betti_numbers, make_chain, omega_complex, regular_boundary
from .complexes import directed_flag_complex
from .digraph import (INF, Digraph, WeightedDigraph, cross_product,
                      edge_subdivide, is_finite, unit_interval)
from .fileformats import format_rational
from .linalg import QQ
from .persistence import (bottleneck_distance, persistent_dfl_homology,
                          shortest_path_filtration)

EXPERIMENT_NAMES = ("subdiv-dag", "subdiv-nondag", "appendage",
                    "derangement", "cylinder-k2")


def derangement_count(n):
    """Derangement numbers by the standard recurrence, as an oracle."""
    a, b = 1, 0  # subfactorials of 0 and 1
    if n == 0:
        return a
    for m in range(2, n + 1):
        a, b = b, (m - 1) * (b + a)
    return b


def _random_weighted_dag(rng, max_vertices):
    n = rng.randint(3, max_vertices)
    order = list(range(n))
    rng.shuffle(order)
    pos = {v: i for i, v in enumerate(order)}
    weights = (1, 2, 3, 4, 5, Fraction(1, 2), Fraction(3, 2))
    edges = [(u, v, Fraction(rng.choice(weights)))
             for u in range(n) for v in range(n)
             if u != v and pos[u] < pos[v] and rng.random() < 0.45]
    if not edges:
        edges.append((order[0], order[1], Fraction(rng.choice(weights))))
    return WeightedDigraph.from_edges(n, edges)


def _random_subdivision(rng, W, max_edges=3, max_parts=3):
    edges = sorted(W.graph.edges)
    rng.shuffle(edges)
    chosen = edges[:rng.randint(1, min(max_edges, len(edges)))]
    S = {}
    for e in chosen:
        parts = rng.randint(2, max_parts)
        raw = [rng.randint(1, 4) for _ in range(parts)]
        total = sum(raw)
        S[e] = tuple(Fraction(x, total) for x in raw)
    return S


def run_subdiv_dag(seed, trials, max_vertices=12):
    """Subdivision stability on random weighted DAGs, exact arithmetic."""
    rng = random.Random(seed)
    instances = []
    all_ok = True
    for trial in range(trials):
        W = _random_weighted_dag(rng, max_vertices)
        S = _random_subdivision(rng, W)
        sub = edge_subdivide(W, S)
        bound = max(W.weight(*e) for e in S)
        bc1 = persistent_dfl_homology(shortest_path_filtration(W), 1)
        bc2 = persistent_dfl_homology(shortest_path_filtration(sub), 1)
        distance = max(bottleneck_distance(bc1, bc2, k) for k in (0, 1))
        ok = distance <= bound
        all_ok = all_ok and ok
        instances.append({
            "trial": trial,
            "vertices": W.graph.vertex_count,
            "edges": len(W.graph.edges),
            "subdivided_edges": len(S),
            "bound": format_rational(bound),
            "bottleneck": format_rational(distance),
            "ok": ok,
        })
    return {
        "experiment": "subdiv-dag",
        "seed": seed,
        "trials": trials,
        "parameters": {"max_vertices": max_vertices, "degrees": [0, 1]},
        "instances": instances,
        "summary": {"status": "pass" if all_ok else "fail",
                    "violations": sum(1 for i in instances if not i["ok"])},
    }


def fig8_pair():
    W = WeightedDigraph.from_edges(2, [(0, 1, Fraction(1)),
                                       (1, 0, Fraction(1))])
    S = {(0, 1): (Fraction(1, 2), Fraction(1, 2)),
         (1, 0): (Fraction(1, 2), Fraction(1, 2))}
    return W, edge_subdivide(W, S)


def fig9_pair():
    W = WeightedDigraph.from_edges(2, [(0, 1, Fraction(1)),
                                       (1, 0, Fraction(1))])
    W2 = WeightedDigraph.from_edges(3, [(0, 1, Fraction(1)),
                                        (1, 0, Fraction(1)),
                                        (2, 0, Fraction(1))])
    return W, W2


def _instability_report(name, W1, W2, edit):
    bc1 = persistent_dfl_homology(shortest_path_filtration(W1), 1)
    bc2 = persistent_dfl_homology(shortest_path_filtration(W2), 1)
    distance = bottleneck_distance(bc1, bc2, 1)
    reproduced = not is_finite(distance)
    return {
        "experiment": name,
        "seed": None,
        "trials": 1,
        "parameters": {"edit": edit},
        "instances": [{
            "barcode_before_degree1": [
                [format_rational(b.birth), format_rational(b.death)]
                for b in bc1.in_degree(1)],
            "barcode_after_degree1": [
                [format_rational(b.birth), format_rational(b.death)]
                for b in bc2.in_degree(1)],
            "bottleneck_degree1": format_rational(distance),
        }],
        "summary": {"status": "instability reproduced" if reproduced
                    else "fail"},
        "_barcodes": (bc1, bc2),
    }


def run_subdiv_nondag():
    W1, W2 = fig8_pair()
    return _instability_report("subdiv-nondag", W1, W2,
                               "halve both edges of the reciprocal pair")


def run_appendage():
    W1, W2 = fig9_pair()
    return _instability_report("appendage", W1, W2,
                               "add a single incoming appendage edge")


def run_derangement(max_n=5):
    """Top-degree Betti number of the complete digraph versus derangements."""
    instances = []
    all_ok = True
    for n in range(2, max_n + 1):
        G = Digraph.from_edges(n, [(u, v) for u in range(n)
                                   for v in range(n) if u != v])
        rep = omega_complex(directed_flag_complex(G, n), n - 1, QQ)
        bettis = betti_numbers(rep, n - 1)
        expected = derangement_count(n)
        ok = bettis[n - 1] == expected and bettis[0] == 1 and \
            all(b == 0 for b in bettis[1:n - 1])
        all_ok = all_ok and ok
        instances.append({"n": n, "betti": list(bettis),
                          "top_betti": bettis[n - 1],
                          "derangements": expected, "ok": ok})
    return {
        "experiment": "derangement",
        "seed": None,
        "trials": max_n,
        "parameters": {"max_n": max_n},
        "instances": instances,
        "summary": {"status": "pass" if all_ok else "fail"},
    }


def run_cylinder_k2():
    """The reciprocal pair against its crossed cylinder, with the five
    boundary identities certifying that every basic 1-cycle bounds."""
    K2 = Digraph.from_edges(2, [(0, 1), (1, 0)])
    X = cross_product(K2, unit_interval())
    rep_k2 = omega_complex(directed_flag_complex(K2, 2), 1, QQ)
    rep_x = omega_complex(directed_flag_complex(X, 3), 2, QQ)
    h1_k2 = betti_numbers(rep_k2, 1)[1]
    h1_x = betti_numbers(rep_x, 2)[1]

    # vertex encoding: a=(a,0)->0, a'=(a,1)->1, b=(b,0)->2, b'=(b,1)->3
    a, ap, b, bp = 0, 1, 2, 3
    identities = [
        ("ab+ba", {(a, b): 1, (b, a): 1},
         {(a, b, ap): 1, (b, a, ap): 1}),
        ("a'b'+b'a'", {(ap, bp): 1, (bp, ap): 1},
         {(a, bp, ap): 1, (a, ap, bp): 1}),
        ("ab+ba'-aa'", {(a, b): 1, (b, ap): 1, (a, ap): -1},
         {(a, b, ap): 1}),
        ("aa'+a'b'-ab'", {(a, ap): 1, (ap, bp): 1, (a, bp): -1},
         {(a, ap, bp): 1}),
        ("aa'+a'b'-ab-bb'", {(a, ap): 1, (ap, bp): 1, (a, b): -1, (b, bp): -1},
         {(a, ap, bp): 1, (a, b, bp): -1}),
    ]
    instances = []
    all_ok = True
    for label, cycle_terms, filler_terms in identities:
        cycle = make_chain(1, {p: Fraction(c) for p, c in cycle_terms.items()},
                           QQ)
        filler = make_chain(2, {p: Fraction(c)
                                for p, c in filler_terms.items()}, QQ)
        boundary = regular_boundary(filler, QQ)
        ok = boundary == cycle and \
            regular_boundary(cycle, QQ).is_zero() and \
            all(p in rep_x.complex for p, _ in filler.terms)
        all_ok = all_ok and ok
        instances.append({"cycle": label, "bounds": ok})
    ok_dims = h1_k2 == 1 and h1_x == 0
    return {
        "experiment": "cylinder-k2",
        "seed": None,
        "trials": len(identities),
        "parameters": {},
        "instances": instances,
        "summary": {"status": "pass" if (all_ok and ok_dims) else "fail",
                    "h1_reciprocal_pair": h1_k2,
                    "h1_crossed_cylinder": h1_x},
    }


def run_experiment(name, seed=0, trials=50):
    if name == "subdiv-dag":
        return run_subdiv_dag(seed, trials)
    if name == "subdiv-nondag":
        return run_subdiv_nondag()
    if name == "appendage":
        return run_appendage()
    if name == "derangement":
        return run_derangement(max_n=trials if trials else 5)
    if name == "cylinder-k2":
        return run_cylinder_k2()
    raise ValueError(f"unknown experiment {name!r}; "
                     f"choose from {', '.join(EXPERIMENT_NAMES)}")


def render_experiment_figures(report, outdir):
    """Write the experiment's summary figure(s) next to its JSON report."""
    import os

    from . import plotting
    name = report["experiment"]
    paths = []
    if name == "subdiv-dag":
        pairs = [(Fraction(i["bound"]), Fraction(i["bottleneck"]))
                 for i in report["instances"]]
        path = os.path.join(outdir, "subdiv-dag-bounds.png")
        plotting.plot_bound_scatter(pairs, path,
                                    "subdivision stability on random DAGs",
                                    "max subdivided weight",
                                    "bottleneck distance")
        paths.append(path)
    elif name in ("subdiv-nondag", "appendage"):
        bc1, bc2 = report["_barcodes"]
        p1 = os.path.join(outdir, f"{name}-before.png")
        p2 = os.path.join(outdir, f"{name}-after.png")
        plotting.plot_barcode(bc1, p1, title=f"{name}: original")
        plotting.plot_barcode(bc2, p2, title=f"{name}: edited")
        paths.extend([p1, p2])
    elif name == "derangement":
        labels = [str(i["n"]) for i in report["instances"]]
        computed = [i["top_betti"] for i in report["instances"]]
        expected = [i["derangements"] for i in report["instances"]]
        path = os.path.join(outdir, "derangement-betti.png")
        plotting.plot_value_table(labels, computed, expected, path,
                                  "top Betti of complete digraphs")
        paths.append(path)
    elif name == "cylinder-k2":
        labels = ["K2", "K2 x I"]
        computed = [report["summary"]["h1_reciprocal_pair"],
                    report["summary"]["h1_crossed_cylinder"]]
        path = os.path.join(outdir, "cylinder-k2-h1.png")
        plotting.plot_value_table(labels, computed, [1, 0], path,
                                  "degree-1 homology")
        paths.append(path)
    return paths


def strip_private(report):
    """Drop non-serializable working fields before writing JSON."""
    return {k: v for k, v in report.items() if not k.startswith("_")}
