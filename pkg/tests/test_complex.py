import math

import numpy as np
import pytest

from qtanner.complexes import ComplexError, build_complex
from qtanner.groups import DihedralGroup, GeneratorSet, sample_tnc_pair


def d4_complex():
    g = DihedralGroup(4)
    a = GeneratorSet.from_names(g, ["s", "r", "r^3"])
    b = GeneratorSet.from_names(g, ["sr", "sr^3", "r^2"])
    return build_complex(g, a, b)


def d10_complex():
    g = DihedralGroup(10)
    a = GeneratorSet.from_names(g, ["sr", "r", "r^3", "r^7", "r^9"])
    b = GeneratorSet.from_names(g, ["sr^6", "r^2", "r^4", "r^6", "r^8"])
    return build_complex(g, a, b)


def test_d4_face_count():
    assert d4_complex().n_faces == 36  # Delta^2 |G| / 2 = 9*8/2


def test_d10_face_count():
    assert d10_complex().n_faces == 250


def test_vertex_incidence_counts():
    c = d4_complex()
    assert len(c.incidence) == 16
    for faces in c.incidence:
        assert len(faces) == 9
        assert len(set(faces)) == 9


def test_every_face_touches_two_vertices_per_side():
    c = d4_complex()
    order = c.group.order
    for f in c.faces:
        v0 = [v for v in f.vertices if v < order]
        v1 = [v for v in f.vertices if v >= order]
        assert len(v0) == 2 and len(v1) == 2
        assert len(set(f.vertices)) == 4


def test_triple_double_counting():
    # Each face corresponds to exactly two (g, a, b) triples.
    c = d4_complex()
    n_triples = c.group.order * c.gen_a.delta * c.gen_b.delta
    assert n_triples == 2 * c.n_faces


def test_local_view_is_bijection():
    c = d4_complex()
    for v in range(2 * c.group.order):
        view = c.local_view(v)
        assert view.shape == (3, 3)
        assert len(set(view.ravel())) == 9


def test_v0_vertices_of_face_see_it_under_inverted_labels():
    c = d4_complex()
    grp = c.group
    for f in c.faces:
        g0, agb0 = f.vertices[0], f.vertices[3]
        inv_a, inv_b = grp.invert(f.a), grp.invert(f.b)
        ia = c.gen_a.elements.index(f.a)
        ib = c.gen_b.elements.index(f.b)
        ja = c.gen_a.elements.index(inv_a)
        jb = c.gen_b.elements.index(inv_b)
        assert c.local_view(g0)[ia, ib] == f.id
        assert c.local_view(agb0)[ja, jb] == f.id


def test_v0_local_views_cover_every_face_twice():
    c = d4_complex()
    counts = np.zeros(c.n_faces, dtype=int)
    for v in range(c.group.order):
        for fid in c.local_view(v).ravel():
            counts[fid] += 1
    assert np.all(counts == 2)


def test_build_rejects_tnc_violation():
    g = DihedralGroup(4)
    a = GeneratorSet.from_names(g, ["s", "r", "r^3"])
    b = GeneratorSet.from_names(g, ["s", "r", "r^3"])
    with pytest.raises(ComplexError, match="non-conjugacy"):
        build_complex(g, a, b)


def test_build_rejects_non_generating_sets():
    g = DihedralGroup(8)
    a = GeneratorSet.from_names(g, ["r^2", "r^6"])
    b = GeneratorSet.from_names(g, ["r^4"])  # <A u B> is the rotation subgroup
    with pytest.raises(ComplexError, match="generates"):
        build_complex(g, a, b)


def test_cayley_adjacency_structure():
    c = d4_complex()
    for adj, delta in [
        (c.left_cayley_adjacency(), 3),
        (c.right_cayley_adjacency(), 3),
    ]:
        assert np.all(np.diag(adj) == 0)
        assert np.all(adj.sum(axis=1) == delta)
        assert np.array_equal(adj, adj.T)


def test_spectral_lambda1_equals_degree():
    c = d4_complex()
    rep = c.spectral_report()
    assert abs(rep.left.lambda1 - 3) < 1e-9
    assert abs(rep.right.lambda1 - 3) < 1e-9
    assert abs(rep.lrcc.lambda1 - 6) < 1e-9


def test_spectrum_symmetric_and_bound_holds_on_reference_instances():
    for c in (d4_complex(), d10_complex()):
        rep = c.spectral_report()
        assert rep.spectrum_symmetric
        assert rep.bound_satisfied
        assert rep.lrcc.lambda2 <= rep.weyl_bound + 1e-9


def test_spectral_bound_on_random_instances():
    rng = np.random.default_rng(2024)
    g = DihedralGroup(8)
    for _ in range(5):
        a, b = sample_tnc_pair(g, 3, rng)
        rep = build_complex(g, a, b).spectral_report()
        assert rep.spectrum_symmetric
        assert rep.bound_satisfied


def test_ramanujan_flag_definition():
    c = d4_complex()
    rep = c.spectral_report()
    threshold = 2 * math.sqrt(2)
    assert rep.left.ramanujan == (rep.left.nontrivial_radius <= threshold + 1e-9)


def test_summary_json_round_trip():
    import json

    c = d4_complex()
    obj = json.loads(c.summary_json())
    assert obj["group"] == "D4"
    assert obj["n_faces"] == 36
    assert obj["generators_a"] == ["s", "r", "r^3"]
    assert obj["spectral"]["spectrum_symmetric"] is True
