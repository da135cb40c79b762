from fractions import Fraction

import pytest

from nlboxes.boxcore import local_vertex, pr_box
from nlboxes.errors import BadParam, NotCoprime, NotNormalized
from nlboxes.multigen import (GenBox, compose_coprime, d_output_vertex, genbox_dimension,
                              genbox_dimension_formula, genbox_nonsignalling, make_genbox,
                              make_tribox, project_mod, representative_orbit_dimension,
                              tri_deterministic, tri_dimension, tri_fully_local, tri_nonsignalling,
                              tri_parity_box, tri_permute, tri_product, tri_two_way_local,
                              tri_uniform, two_way_generators)


def test_parity_box_nonsignalling():
    report = tri_nonsignalling(tri_parity_box())
    assert report.strong and report.weak


def test_deterministic_nonsignalling():
    assert tri_nonsignalling(tri_deterministic(0, 0, 0, 0, 0, 0)).strong


def test_copying_input_signals():
    t = make_tribox(lambda a, b, c, x, y, z: Fraction(1, 4) if c == x else 0)
    report = tri_nonsignalling(t)
    assert not report.strong and not report.weak
    assert report.witness.party == 0


def test_weak_but_not_strong():
    # single marginals are uniform, yet the pair (a, b) sees z
    t = make_tribox(lambda a, b, c, x, y, z: Fraction(1, 4) if a ^ b == z else 0)
    report = tri_nonsignalling(t)
    assert report.weak and not report.strong
    assert report.witness.party == 2


def test_tribox_validation():
    with pytest.raises(NotNormalized):
        make_tribox(lambda *k: Fraction(1, 4))


def test_fully_local_examples():
    dec = tri_fully_local(tri_deterministic(0, 0, 0, 0, 0, 0))
    assert dec.support() == {(0, 0, 0, 0, 0, 0): 1}
    assert tri_fully_local(tri_uniform()) is not None
    assert tri_fully_local(tri_product(pr_box(), (0, 0))) is None


def test_two_way_examples():
    assert len(two_way_generators()) == 288
    assert tri_two_way_local(tri_product(pr_box(), (0, 0))) is not None
    assert tri_two_way_local(tri_parity_box()) is None
    assert tri_two_way_local(tri_uniform()) is not None


def test_pr_on_other_pairs_two_way_local():
    for perm in ((0, 2, 1), (2, 1, 0)):
        t = tri_permute(tri_product(pr_box(), (1, 0)), perm)
        assert tri_nonsignalling(t).strong
        assert tri_two_way_local(t) is not None
        assert tri_fully_local(t) is None


def test_nesting_on_local_product():
    t = tri_product(local_vertex(1, 0, 0, 1), (1, 1))
    assert tri_fully_local(t) is not None
    assert tri_two_way_local(t) is not None
    assert tri_nonsignalling(t).strong


def test_dimension():
    assert tri_dimension() == 26


@pytest.mark.slow
def test_orbit_span_within_dimension():
    assert representative_orbit_dimension() <= 26


def test_d_output_vertex():
    assert d_output_vertex(2).to_box() == pr_box()
    g3 = d_output_vertex(3)
    assert genbox_nonsignalling(g3)
    assert sum(g3.table) == 4
    padded = d_output_vertex(2, 3, 4)
    assert padded.dims == (2, 2, 3, 4) and genbox_nonsignalling(padded)
    with pytest.raises(BadParam):
        d_output_vertex(3, 2, 3)


def test_genbox_roundtrip_through_box():
    assert GenBox.from_box(pr_box()).to_box() == pr_box()


def test_genbox_signalling_detected():
    g = make_genbox((2, 2, 2, 2), lambda a, b, x, y: Fraction(1, 2) if a == y else 0)
    assert not genbox_nonsignalling(g)


def test_project_mod():
    g6 = d_output_vertex(6)
    assert project_mod(g6, 2) == d_output_vertex(2)
    assert project_mod(g6, 3) == d_output_vertex(3)
    assert project_mod(g6, 6) == g6
    with pytest.raises(BadParam):
        project_mod(g6, 4)


def test_compose_coprime():
    g = compose_coprime(d_output_vertex(2), d_output_vertex(3))
    assert g == d_output_vertex(6)
    assert project_mod(g, 2) == d_output_vertex(2)
    assert project_mod(g, 3) == d_output_vertex(3)
    assert compose_coprime(d_output_vertex(3), d_output_vertex(5)) == d_output_vertex(15)
    with pytest.raises(NotCoprime):
        compose_coprime(d_output_vertex(2), d_output_vertex(2))


@pytest.mark.parametrize("da, db", [(2, 2), (2, 3), (3, 3), (3, 4)])
def test_dimension_formula(da, db):
    assert genbox_dimension(da, db) == genbox_dimension_formula(da, db)
