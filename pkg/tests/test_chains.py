import random
from fractions import Fraction

import pytest

from dirflag import linalg
from dirflag.linalg import GF2, QQ, PrimeField
from dirflag.digraph import Digraph, VertexMap, weak_components
from dirflag.complexes import (allowed_path_complex, cylinder,
                               cylinder_inclusion, directed_flag_complex,
                               osc, path_complex, truncation_closure)
from dirflag.chains import (Chain, MultiStepWitness, betti_numbers,
                            chain_homotopy_from_witness, euler_characteristic,
                            induced_chain_map, lift_path, lifting_map,
                            make_chain, omega_complex, regular_boundary)

from conftest import complete_digraph, four_sided_digraph, random_digraph

from test_complexes import random_regular_path_complex


def test_boundary_of_triangle_path():
    c = make_chain(2, {(0, 1, 2): Fraction(1)}, QQ)
    b = regular_boundary(c, QQ)
    assert dict(b.terms) == {(1, 2): 1, (0, 2): -1, (0, 1): 1}


def test_boundary_drops_irregular_faces():
    c = make_chain(2, {(0, 1, 0): Fraction(1)}, QQ)  # aba
    b = regular_boundary(c, QQ)
    # middle face aa is dropped
    assert dict(b.terms) == {(1, 0): 1, (0, 1): 1}


def test_boundary_of_vertices_is_zero():
    c = make_chain(0, {(0,): Fraction(2), (1,): Fraction(-1)}, QQ)
    assert regular_boundary(c, QQ).is_zero()


def test_boundary_squared_zero_on_random_paths():
    rng = random.Random(21)
    for _ in range(500):
        k = rng.randint(2, 5)
        p = [rng.randrange(4)]
        while len(p) < k + 1:
            v = rng.randrange(4)
            if v != p[-1]:
                p.append(v)
        c = make_chain(k, {tuple(p): Fraction(1)}, QQ)
        assert regular_boundary(regular_boundary(c, QQ), QQ).is_zero()


def test_omega_two_path_without_shortcut():
    G = Digraph.from_edges(3, [(0, 1), (1, 2)])
    rep = omega_complex(allowed_path_complex(G, 3), 2, QQ)
    # d(012) includes 02 which is not allowed, so nothing in degree 2
    assert rep.dim(2) == 0
    assert rep.dim(1) == 2


def test_omega_two_path_with_shortcut():
    G = Digraph.from_edges(3, [(0, 1), (1, 2), (0, 2)])
    rep = omega_complex(allowed_path_complex(G, 3), 2, QQ)
    assert rep.dim(2) == 1
    assert rep.bases[2][0].terms == (((0, 1, 2), Fraction(1)),)


def test_omega_of_osc_is_simplex_basis():
    K = directed_flag_complex(four_sided_digraph(), 3)
    rep = omega_complex(K, 2, QQ)
    for k in range(3):
        assert rep.dim(k) == K.path_count(k)


def test_omega_truncation_budget_enforced():
    K = directed_flag_complex(four_sided_digraph(), 2)
    with pytest.raises(ValueError):
        omega_complex(K, 2, QQ)


def test_omega_rejects_irregular_complex():
    P = path_complex(2, [(0, 0)], 1)
    with pytest.raises(ValueError):
        omega_complex(P, 0, QQ)


def test_betti_four_sided_sphere_vs_contractible():
    G = four_sided_digraph()
    dfl = omega_complex(directed_flag_complex(G, 3), 2, QQ)
    assert betti_numbers(dfl, 2) == (1, 0, 1)
    allowed = omega_complex(allowed_path_complex(G, 4), 3, QQ)
    assert betti_numbers(allowed, 2) == (1, 0, 0)


def derangement(n):
    # recurrence a(n) = (n-1) * (a(n-1) + a(n-2))
    a, b = 1, 0  # !0, !1
    for m in range(2, n + 1):
        a, b = b, (m - 1) * (b + a)
    return b if n >= 1 else a


def test_derangement_oracle():
    assert [derangement(n) for n in range(2, 6)] == [1, 2, 9, 44]


def test_betti_complete_digraphs_small():
    for n in range(2, 5):
        K = directed_flag_complex(complete_digraph(n), n)
        rep = omega_complex(K, n - 1, QQ)
        bettis = betti_numbers(rep, n - 1)
        expected = tuple(1 if k == 0 else (derangement(n) if k == n - 1 else 0)
                         for k in range(n))
        assert bettis == expected


def test_betti_zero_counts_weak_components():
    rng = random.Random(31)
    for _ in range(30):
        G = random_digraph(rng, rng.randint(1, 5), 0.3)
        ncomp = len(weak_components(G))
        dfl = omega_complex(directed_flag_complex(G, 2), 1, QQ)
        allowed = omega_complex(allowed_path_complex(G, 2), 1, QQ)
        assert betti_numbers(dfl, 0) == (ncomp,)
        assert betti_numbers(allowed, 0) == (ncomp,)


def test_euler_characteristic_of_osc():
    for G in [four_sided_digraph(), complete_digraph(3)]:
        K = directed_flag_complex(G, G.vertex_count)
        rep = omega_complex(K, G.vertex_count - 1, QQ)
        bettis = betti_numbers(rep, G.vertex_count - 1)
        assert euler_characteristic(rep) == sum(
            (-1) ** k * b for k, b in enumerate(bettis))


def test_field_independence_on_worked_examples():
    G = four_sided_digraph()
    for field in (QQ, GF2, PrimeField(3)):
        dfl = omega_complex(directed_flag_complex(G, 3), 2, field)
        assert betti_numbers(dfl, 2) == (1, 0, 1)
        allowed = omega_complex(allowed_path_complex(G, 4), 3, field)
        assert betti_numbers(allowed, 2) == (1, 0, 0)
    for n in (2, 3, 4):
        K = directed_flag_complex(complete_digraph(n), n)
        over_q = betti_numbers(omega_complex(K, n - 1, QQ), n - 1)
        over_2 = betti_numbers(omega_complex(K, n - 1, GF2), n - 1)
        assert over_q == over_2


def test_mapping_cylinder_of_constant_map_has_point_homology():
    from dirflag.complexes import mapping_cylinder, path_complex, regularise
    P1 = allowed_path_complex(four_sided_digraph(), 3)
    point = path_complex(1, [], 3)
    M = regularise(mapping_cylinder(VertexMap.constant(4, 1, 0), P1, point))
    rep = omega_complex(M, 2, QQ)
    assert betti_numbers(rep, 1) == (1, 0)


def test_induced_identity():
    K = directed_flag_complex(four_sided_digraph(), 3)
    rep = omega_complex(K, 2, QQ)
    mats = induced_chain_map(VertexMap.identity(4), rep, rep)
    for k, m in enumerate(mats):
        assert linalg.mat_eq(m, linalg.identity_matrix(rep.dim(k), QQ), QQ)


def test_induced_collapse_kills_edge_generator():
    G = Digraph.from_edges(2, [(0, 1)])
    H = Digraph.from_edges(1, [])
    src = omega_complex(directed_flag_complex(G, 2), 1, QQ)
    dst = omega_complex(directed_flag_complex(H, 2), 1, QQ)
    mats = induced_chain_map(VertexMap(2, 1, (0, 0)), src, dst)
    assert mats[1] == [[]]  # the edge generator maps to zero in empty degree 1
    assert src.dim(1) == 1 and dst.dim(1) == 0


def test_induced_functoriality_random():
    rng = random.Random(41)
    from conftest import all_vertex_maps
    trials = 0
    while trials < 20:
        G = random_digraph(rng, 3, 0.5)
        H = random_digraph(rng, 3, 0.5)
        L = random_digraph(rng, 3, 0.5)
        from dirflag.digraph import classify_digraph_map, MorphismClass
        fs = [f for f in all_vertex_maps(3, 3)
              if classify_digraph_map(f, G, H) >= MorphismClass.TRIANGLE_COLLAPSING]
        gs = [g for g in all_vertex_maps(3, 3)
              if classify_digraph_map(g, H, L) >= MorphismClass.TRIANGLE_COLLAPSING]
        if not fs or not gs:
            continue
        f, g = rng.choice(fs), rng.choice(gs)
        trials += 1
        rg = omega_complex(directed_flag_complex(G, 3), 2, QQ)
        rh = omega_complex(directed_flag_complex(H, 3), 2, QQ)
        rl = omega_complex(directed_flag_complex(L, 3), 2, QQ)
        mf = induced_chain_map(f, rg, rh)
        mg = induced_chain_map(g, rh, rl)
        mgf = induced_chain_map(g.compose(f), rg, rl)
        for k in range(3):
            comp = linalg.mat_mul(mg[k], mf[k], QQ, nrows=rl.dim(k))
            assert linalg.mat_eq(comp, mgf[k], QQ)


def test_lift_of_edge():
    terms = lift_path((0, 1), QQ)
    # +(v0,0)(v0,1)(v1,1) - (v0,0)(v1,0)(v1,1) with (v,i) -> 2v+i
    assert terms == {(0, 1, 3): Fraction(1), (0, 2, 3): Fraction(-1)}


def test_lift_of_four_path_has_five_alternating_summands():
    p = (0, 1, 2, 3, 4)
    terms = lift_path(p, QQ)
    assert len(terms) == 5
    assert sorted(terms.values()) == [-1, -1, 1, 1, 1]
    top = tuple(2 * v + 1 for v in p)
    bottom = tuple(2 * v for v in p)
    for i in range(5):
        q = bottom[:i + 1] + top[i:]
        assert terms[q] == (1 if i % 2 == 0 else -1)


def test_product_rule_random_regular_complexes():
    rng = random.Random(51)
    for _ in range(15):
        P = random_regular_path_complex(rng, 4, 4, 3, 4)
        rep = omega_complex(P, 2, QQ)
        cyl_rep = omega_complex(cylinder(P), 3, QQ)
        from dirflag.chains import _induced_matrices
        i0 = _induced_matrices(cylinder_inclusion(P, 0), rep, cyl_rep, range(3))
        i1 = _induced_matrices(cylinder_inclusion(P, 1), rep, cyl_rep, range(3))
        for k in range(3):
            lk = lifting_map(rep, cyl_rep, k)
            lhs = linalg.mat_mul(cyl_rep.boundaries[k + 1], lk, QQ,
                                 nrows=cyl_rep.dim(k))
            if k >= 1:
                lk1 = lifting_map(rep, cyl_rep, k - 1)
                lhs = linalg.mat_add(
                    lhs, linalg.mat_mul(lk1, rep.boundaries[k], QQ,
                                        nrows=cyl_rep.dim(k)), QQ)
            rhs = linalg.mat_sub(i1[k], i0[k], QQ)
            assert linalg.mat_eq(lhs, rhs, QQ)


def test_chain_homotopy_empty_witness_is_zero():
    K = directed_flag_complex(four_sided_digraph(), 3)
    rep = omega_complex(K, 2, QQ)
    w = MultiStepWitness.trivial(VertexMap.identity(4))
    mats = chain_homotopy_from_witness(w, rep, rep)
    for m in mats:
        assert linalg.is_zero_matrix(m, QQ)


def test_chain_homotopy_one_step_star_like():
    # star with centre 0 -> {1, 2, 3} and an extra rim edge 1 -> 2;
    # const(0) is one-step related to the identity
    G = Digraph.from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2)])
    rep = omega_complex(directed_flag_complex(G, 4), 3, QQ)
    w = MultiStepWitness((VertexMap.constant(4, 4, 0), VertexMap.identity(4)),
                         (1,))
    mats = chain_homotopy_from_witness(w, rep, rep)
    assert len(mats) == 3  # identity verified inside


def test_chain_homotopy_rejects_unverifiable_step():
    # identity vs swap on the reciprocal pair is not one-step in any
    # direction at the path complex level
    G = Digraph.from_edges(2, [(0, 1), (1, 0)])
    rep = omega_complex(directed_flag_complex(G, 3), 2, QQ)
    w = MultiStepWitness((VertexMap.identity(2), VertexMap(2, 2, (1, 0))), (1,))
    with pytest.raises(ValueError, match="step 0"):
        chain_homotopy_from_witness(w, rep, rep)
