import random
from fractions import Fraction

import pytest

from dirflag.linalg import GF2, QQ
from dirflag.digraph import INF, Digraph, VertexMap, edge_subdivide
from dirflag.complexes import directed_flag_complex
from dirflag.chains import MultiStepWitness, betti_numbers, omega_complex
from dirflag.persistence import (Bar, Barcode, Filtration,
                                 InterleavingCertificate, bottleneck_distance,
                                 check_delta_shifting,
                                 check_grounded_codistortion,
                                 entrance_time_linf, grounded_h1_dimension_at,
                                 grounded_persistent_h1, grounding_time,
                                 persistent_dfl_homology,
                                 shortest_path_filtration,
                                 subdivision_inclusion_map,
                                 subdivision_interim_map,
                                 subdivision_rounding_map,
                                 verify_interleaving_certificate)

from conftest import (appendage_graph, random_weighted_dag,
                      random_weighted_digraph, random_subdivision,
                      reciprocal_pair_weighted, triangle_subdivision,
                      weighted_triangle)


def test_sp_filtration_reciprocal_pair():
    F = shortest_path_filtration(reciprocal_pair_weighted())
    assert F.entrance_map == {(0, 1): 1, (1, 0): 1}


def test_sp_filtration_subdivided_pair_complete_by_two():
    S = {(0, 1): (Fraction(1, 2), Fraction(1, 2)),
         (1, 0): (Fraction(1, 2), Fraction(1, 2))}
    W = edge_subdivide(reciprocal_pair_weighted(), S)
    F = shortest_path_filtration(W)
    assert len(F.entrance) == 12  # every ordered pair eventually enters
    assert all(t <= 2 for _, t in F.entrance)
    G2 = F.digraph_at(Fraction(2))
    assert len(G2.edges) == 12


def test_sp_filtration_single_vertex():
    from dirflag.digraph import WeightedDigraph
    F = shortest_path_filtration(WeightedDigraph.from_edges(1, []))
    assert F.entrance == ()


def test_persistent_h1_reciprocal_pair_never_dies():
    F = shortest_path_filtration(reciprocal_pair_weighted())
    bc = persistent_dfl_homology(F, 1)
    assert bc.in_degree(1) == (Bar(1, Fraction(1), INF),)


def test_persistent_h1_appendage_dies_at_two():
    F = shortest_path_filtration(appendage_graph())
    bc = persistent_dfl_homology(F, 1)
    assert bc.in_degree(1) == (Bar(1, Fraction(1), Fraction(2)),)


def test_persistent_degree0_counts():
    F = shortest_path_filtration(weighted_triangle())
    bc = persistent_dfl_homology(F, 1)
    bars0 = bc.in_degree(0)
    assert len(bars0) == 3
    assert sum(1 for b in bars0 if b.is_infinite()) == 1


def test_static_consistency_random():
    rng = random.Random(101)
    for _ in range(15):
        W = random_weighted_digraph(rng, rng.randint(2, 5), 0.4)
        F = shortest_path_filtration(W)
        bc = persistent_dfl_homology(F, 1)
        crit = F.critical_values()
        samples = list(crit) + [t + Fraction(1, 7) for t in crit[:3]]
        for t in samples:
            G = F.digraph_at(t)
            rep = omega_complex(directed_flag_complex(G, 3), 2, GF2)
            static = betti_numbers(rep, 1)
            assert bc.alive_count(0, t) == static[0]
            assert bc.alive_count(1, t) == static[1]


def test_bottleneck_identical_is_zero():
    b = Barcode.from_bars([Bar(1, Fraction(0), Fraction(2)),
                           Bar(1, Fraction(1), INF)])
    assert bottleneck_distance(b, b, 1) == 0


def test_bottleneck_two_point():
    b1 = Barcode.from_bars([Bar(0, Fraction(0), Fraction(2))])
    b2 = Barcode.from_bars([Bar(0, Fraction(0), Fraction(3))])
    assert bottleneck_distance(b1, b2, 0) == 1


def test_bottleneck_diagonal_option():
    b1 = Barcode.from_bars([Bar(0, Fraction(0), Fraction(10)),
                            Bar(0, Fraction(4), Fraction(5))])
    b2 = Barcode.from_bars([Bar(0, Fraction(0), Fraction(10))])
    assert bottleneck_distance(b1, b2, 0) == Fraction(1, 2)


def test_bottleneck_infinite_mismatch():
    b1 = Barcode.from_bars([Bar(1, Fraction(1), INF)])
    b2 = Barcode.from_bars([Bar(1, Fraction(1), Fraction(2))])
    assert bottleneck_distance(b1, b2, 1) == INF
    assert bottleneck_distance(b1, b2, 0) == 0  # empty in degree 0


def test_bottleneck_infinite_birth_shift():
    b1 = Barcode.from_bars([Bar(1, Fraction(1), INF)])
    b2 = Barcode.from_bars([Bar(1, Fraction(3), INF)])
    assert bottleneck_distance(b1, b2, 1) == 2


def test_instability_subdivision_of_reciprocal_pair():
    W = reciprocal_pair_weighted()
    S = {(0, 1): (Fraction(1, 2), Fraction(1, 2)),
         (1, 0): (Fraction(1, 2), Fraction(1, 2))}
    sub = edge_subdivide(W, S)
    bc1 = persistent_dfl_homology(shortest_path_filtration(W), 1)
    bc2 = persistent_dfl_homology(shortest_path_filtration(sub), 1)
    assert any(b.is_infinite() for b in bc1.in_degree(1))
    assert not any(b.is_infinite() for b in bc2.in_degree(1))
    assert bottleneck_distance(bc1, bc2, 1) == INF


def test_instability_appendage():
    bc1 = persistent_dfl_homology(
        shortest_path_filtration(reciprocal_pair_weighted()), 1)
    # the appendage graph has one extra vertex; compare barcodes directly
    bc2 = persistent_dfl_homology(
        shortest_path_filtration(appendage_graph()), 1)
    assert bottleneck_distance(bc1, bc2, 1) == INF


def test_entrance_time_linf():
    F1 = shortest_path_filtration(weighted_triangle())
    assert entrance_time_linf(F1, F1) == 0
    bumped = dict(F1.entrance_map)
    bumped[(0, 1)] += Fraction(1, 4)
    F2 = Filtration.from_entrance_map(3, bumped)
    assert entrance_time_linf(F1, F2) == Fraction(1, 4)
    dropped = dict(F1.entrance_map)
    del dropped[(0, 1)]
    F3 = Filtration.from_entrance_map(3, dropped)
    assert entrance_time_linf(F1, F3) == INF
    with pytest.raises(ValueError):
        entrance_time_linf(F1, shortest_path_filtration(
            reciprocal_pair_weighted()))


def test_stability_inequality_random():
    rng = random.Random(103)
    for _ in range(10):
        n = rng.randint(2, 4)
        W1 = random_weighted_digraph(rng, n, 0.6)
        # perturb a few weights
        wmap = dict(W1.weight_map)
        for e in list(wmap)[:2]:
            wmap[e] += Fraction(rng.randint(0, 2), 4)
        from dirflag.digraph import WeightedDigraph
        W2 = WeightedDigraph.from_weight_map(W1.graph, wmap)
        F1 = shortest_path_filtration(W1)
        F2 = shortest_path_filtration(W2)
        bound = entrance_time_linf(F1, F2)
        for k in (0, 1):
            d = bottleneck_distance(persistent_dfl_homology(F1, 1),
                                    persistent_dfl_homology(F2, 1), k)
            assert d <= bound


def test_grounded_reciprocal_pair_bar_never_dies():
    W = reciprocal_pair_weighted()
    bc = grounded_persistent_h1(W)
    t0 = grounding_time(shortest_path_filtration(W))
    assert bc.bars == (Bar(1, t0, INF),)


def test_grounded_triangle_bar_closed_by_coning():
    # the always-present direct edge opens a cycle with the two shortest-
    # path legs at the grounding time; the 2-cell arrives only when the
    # long edge enters the shortest-path graph
    bc = grounded_persistent_h1(weighted_triangle())
    assert bc.bars == (Bar(1, Fraction(2), Fraction(3)),)


def test_grounded_acyclic_path_is_empty():
    from dirflag.digraph import WeightedDigraph
    W = WeightedDigraph.from_edges(3, [(0, 1, Fraction(2)),
                                       (1, 2, Fraction(5))])
    assert grounded_persistent_h1(W).bars == ()


def test_grounded_matches_static_oracle_random():
    rng = random.Random(107)
    for _ in range(12):
        W = random_weighted_digraph(rng, rng.randint(2, 5), 0.4)
        bc = grounded_persistent_h1(W)
        F = shortest_path_filtration(W)
        times = sorted({t for _, t in F.entrance} | {grounding_time(F)})
        samples = times + [t + Fraction(1, 3) for t in times[:2]]
        for t in samples:
            assert bc.alive_count(1, t) == grounded_h1_dimension_at(W, t)


def test_grounded_oracle_field_choice_agrees():
    rng = random.Random(109)
    for _ in range(6):
        W = random_weighted_digraph(rng, 4, 0.5)
        F = shortest_path_filtration(W)
        for t in list(F.critical_values())[:3]:
            assert grounded_h1_dimension_at(W, t, GF2) == \
                grounded_h1_dimension_at(W, t, QQ)


def test_identity_interleaving_certificate():
    F = shortest_path_filtration(weighted_triangle())
    ident = VertexMap.identity(3)
    cert = InterleavingCertificate(Fraction(0), ident, ident,
                                   MultiStepWitness.trivial(ident),
                                   MultiStepWitness.trivial(ident))
    report = verify_interleaving_certificate(F, F, cert)
    assert report.ok
    assert report.bound == 0


def subdivision_certificate():
    W = weighted_triangle()
    S = triangle_subdivision()
    sub = edge_subdivide(W, S)
    f = subdivision_inclusion_map(W, S)
    g = subdivision_rounding_map(W, S)
    h = subdivision_interim_map(W, S)
    delta = max(W.weight(*e) for e in S)
    fg = f.compose(g)
    ident = VertexMap.identity(sub.graph.vertex_count)
    # zig-zag f o g <- h -> id inside the subdivided filtration
    wn = MultiStepWitness((fg, h, ident), (-1, 1))
    wm = MultiStepWitness.trivial(VertexMap.identity(3))
    cert = InterleavingCertificate(delta, f, g, wm, wn)
    return W, sub, cert


def test_subdivision_certificate_verifies():
    W, sub, cert = subdivision_certificate()
    F1 = shortest_path_filtration(W)
    F2 = shortest_path_filtration(sub)
    report = verify_interleaving_certificate(F1, F2, cert)
    assert report.ok, report.failures
    assert report.bound == 3
    # soundness: the certified bound dominates the bottleneck distance
    for k in (0, 1):
        d = bottleneck_distance(persistent_dfl_homology(F1, 1),
                                persistent_dfl_homology(F2, 1), k)
        assert d <= report.bound


def test_broken_interleaving_certificate_fails():
    W, sub, cert = subdivision_certificate()
    F1 = shortest_path_filtration(W)
    F2 = shortest_path_filtration(sub)
    tampered = InterleavingCertificate(
        cert.delta, cert.f, cert.g, cert.witnesses_m,
        MultiStepWitness((cert.witnesses_n.maps[0], cert.witnesses_n.maps[2]),
                         (1,)))
    report = verify_interleaving_certificate(F1, F2, tampered)
    assert not report.ok


def test_interim_map_relative_homotopy_on_subdivided_triangle():
    # the half-collapse is one-step related to the rounded composite
    # relative to the original vertices, inside the widened filtration
    from dirflag.homotopy import one_step_dfl_relative
    W = weighted_triangle()
    S = triangle_subdivision()
    sub = edge_subdivide(W, S)
    f = subdivision_inclusion_map(W, S)
    g = subdivision_rounding_map(W, S)
    h = subdivision_interim_map(W, S)
    fg = f.compose(g)
    delta = max(W.weight(*e) for e in S)
    F = shortest_path_filtration(sub)
    for t in F.critical_values():
        G_now = F.digraph_at(t)
        G_wide = F.digraph_at(t + 2 * delta)
        assert one_step_dfl_relative(h, fg, G_now, G_wide, frozenset({0, 1, 2}))


def test_delta_shifting_identity():
    W = weighted_triangle()
    report = check_delta_shifting(VertexMap.identity(3), W, W, Fraction(0))
    assert report.ok


def test_delta_shifting_subdivision_pair():
    W = weighted_triangle()
    S = triangle_subdivision()
    sub = edge_subdivide(W, S)
    f = subdivision_inclusion_map(W, S)
    g = subdivision_rounding_map(W, S)
    delta = max(W.weight(*e) for e in S)
    assert check_delta_shifting(f, W, sub, delta).ok
    assert check_delta_shifting(g, sub, W, delta).ok
    report = check_delta_shifting(g, sub, W, Fraction(0))
    assert not report.ok
    assert any("pair" in msg for msg in report.failures)


def test_grounded_codistortion_identity():
    W = weighted_triangle()
    ident = VertexMap.identity(3)
    report = check_grounded_codistortion(
        W, W, ident, ident, Fraction(0), MultiStepWitness.trivial(ident))
    assert report.ok


def test_grounded_codistortion_subdivision_pair():
    W = weighted_triangle()
    S = triangle_subdivision()
    sub = edge_subdivide(W, S)
    f = subdivision_inclusion_map(W, S)
    g = subdivision_rounding_map(W, S)
    h = subdivision_interim_map(W, S)
    delta = max(W.weight(*e) for e in S)
    ident = VertexMap.identity(sub.graph.vertex_count)
    # (f, g) side: f o g ~ id on the subdivided graph, relative fixed part
    witness = MultiStepWitness((f.compose(g), h, ident), (-1, 1))
    report = check_grounded_codistortion(sub, W, g, f, delta, witness)
    assert report.ok, report.failures
    # (g, f) side: g o f is the identity on the nose
    report2 = check_grounded_codistortion(
        W, sub, f, g, delta,
        MultiStepWitness.trivial(VertexMap.identity(3)))
    assert report2.ok, report2.failures


def test_subdivision_stability_random_dags():
    rng = random.Random(113)
    for _ in range(10):
        W = random_weighted_dag(rng, rng.randint(3, 6), 0.5)
        S = random_subdivision(rng, W)
        sub = edge_subdivide(W, S)
        bound = max((W.weight(*e) for e in S), default=Fraction(0))
        bc1 = persistent_dfl_homology(shortest_path_filtration(W), 1)
        bc2 = persistent_dfl_homology(shortest_path_filtration(sub), 1)
        for k in (0, 1):
            assert bottleneck_distance(bc1, bc2, k) <= bound


def brute_force_bottleneck(bars1, bars2):
    """Exhaustive matching oracle for tiny degree-filtered barcodes."""
    import itertools
    inf1 = sorted(b.birth for b in bars1 if b.is_infinite())
    inf2 = sorted(b.birth for b in bars2 if b.is_infinite())
    if len(inf1) != len(inf2):
        return INF
    best_inf = INF
    for perm in itertools.permutations(range(len(inf2))):
        cost = Fraction(0)
        for i, j in enumerate(perm):
            cost = max(cost, abs(inf1[i] - inf2[j]))
        best_inf = min(best_inf, cost)
    if not inf1:
        best_inf = Fraction(0)
    fin1 = [b for b in bars1 if not b.is_infinite()]
    fin2 = [b for b in bars2 if not b.is_infinite()]
    best_fin = INF
    n1, n2 = len(fin1), len(fin2)
    for k in range(min(n1, n2) + 1):
        for chosen1 in itertools.permutations(range(n1), k):
            for chosen2 in itertools.permutations(range(n2), k):
                cost = Fraction(0)
                for i, j in zip(chosen1, chosen2):
                    cost = max(cost,
                               max(abs(fin1[i].birth - fin2[j].birth),
                                   abs(fin1[i].death - fin2[j].death)))
                for i in range(n1):
                    if i not in chosen1:
                        cost = max(cost,
                                   Fraction(fin1[i].death - fin1[i].birth, 2))
                for j in range(n2):
                    if j not in chosen2:
                        cost = max(cost,
                                   Fraction(fin2[j].death - fin2[j].birth, 2))
                best_fin = min(best_fin, cost)
    if n1 == 0 and n2 == 0:
        best_fin = Fraction(0)
    return max(best_inf, best_fin)


def test_bottleneck_matches_brute_force_oracle():
    rng = random.Random(131)
    times = [Fraction(k, 2) for k in range(9)]
    for _ in range(120):
        bars = []
        for side in (0, 1):
            group = []
            for _ in range(rng.randint(0, 3)):
                birth = rng.choice(times)
                if rng.random() < 0.25:
                    group.append(Bar(0, birth, INF))
                else:
                    death = birth + rng.choice(times[1:])
                    group.append(Bar(0, birth, death))
            bars.append(group)
        b1 = Barcode.from_bars(bars[0])
        b2 = Barcode.from_bars(bars[1])
        expected = brute_force_bottleneck(bars[0], bars[1])
        assert bottleneck_distance(b1, b2, 0) == expected


def test_static_consistency_degree_two():
    rng = random.Random(137)
    for _ in range(6):
        W = random_weighted_digraph(rng, 4, 0.7)
        F = shortest_path_filtration(W)
        bc = persistent_dfl_homology(F, 2)
        for t in F.critical_values():
            G = F.digraph_at(t)
            rep = omega_complex(directed_flag_complex(G, 4), 3, GF2)
            static = betti_numbers(rep, 2)
            assert bc.alive_count(2, t) == static[2]


def test_barcode_determinism():
    rng = random.Random(127)
    W = random_weighted_digraph(rng, 5, 0.5)
    F = shortest_path_filtration(W)
    assert persistent_dfl_homology(F, 1) == persistent_dfl_homology(F, 1)
    assert grounded_persistent_h1(W) == grounded_persistent_h1(W)
