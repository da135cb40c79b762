import math
import random
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from nlboxes.boxcore import isotropic_box
from nlboxes.distcomp import (BoolFn, anf, bcc_constant, bipartite, bp_simulate, bp_target,
                              broadcast_protocol, chsh_of_success, eval_monomials,
                              factor_bipartite, multiparty_nonsignalling, noisy_parity_success,
                              share_circuit, van_dam_run, van_dam_success)
from nlboxes.errors import ArityTooLarge, BadParam
from nlboxes.wiring import BCC_SQUARED


@settings(max_examples=200)
@given(st.integers(0, 2 ** 16 - 1))
def test_anf_roundtrip(value):
    f = BoolFn.from_hex(format(value, "x"), (2, 2))
    monos = anf(f)
    assert all(eval_monomials(monos, z) == f.table[z] for z in range(16))


def test_anf_of_and():
    f = bipartite(1, 1, lambda x, y: x & y)
    assert anf(f) == frozenset({0b11})


def test_hex_roundtrip():
    f = BoolFn.from_hex("8000", (2, 2))
    assert f(3, 3) == 1 and sum(f.table) == 1
    assert BoolFn.from_hex(f.to_hex(), (2, 2)) == f
    with pytest.raises(BadParam):
        BoolFn.from_hex("10000", (2, 2))


@settings(max_examples=200)
@given(st.integers(0, 2 ** 16 - 1))
def test_factored_form_matches(value):
    f = BoolFn.from_hex(format(value, "x"), (2, 2))
    form = factor_bipartite(f)
    assert len(form.terms) <= 4
    assert all(form.evaluate(x, y) == f(x, y) for x, y in product(range(4), repeat=2))


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2 ** 16 - 1))
def test_van_dam_perfect(value):
    f = BoolFn.from_hex(format(value, "x"), (2, 2))
    for x, y in product(range(4), repeat=2):
        assert van_dam_success(f, x, y) == 1


def test_van_dam_marginals_uniform():
    f = bipartite(2, 2, lambda x, y: (x * y) % 2)
    dist = van_dam_run(f, 3, 1)
    assert sum(dist.values()) == 1
    assert sum(w for (a, b), w in dist.items() if a == 0) == Fraction(1, 2)


def test_van_dam_noisy_matches_parity_formula():
    f = bipartite(2, 2, lambda x, y: bin(x & y).count("1") % 2)  # inner product
    box = isotropic_box(Fraction(7, 8))
    m = len(factor_bipartite(f).terms)
    assert m == 2
    for x, y in product(range(4), repeat=2):
        # isotropic noise does not depend on the inputs, so every box errs independently
        assert van_dam_success(f, x, y, box) == noisy_parity_success(m, Fraction(7, 8))


def test_noisy_parity_formula():
    assert noisy_parity_success(1, Fraction(3, 4)) == Fraction(3, 4)
    assert noisy_parity_success(2, Fraction(3, 4)) == Fraction(5, 8)
    assert chsh_of_success(Fraction(3, 4)) == 2


def test_bcc_constant():
    value, witness = bcc_constant()
    assert value == pytest.approx(4 * math.sqrt(2 / 3))
    assert witness.chsh_squared == BCC_SQUARED


@pytest.mark.parametrize("arities, fn", [
    ((1, 1, 1), lambda a, b, c: a & b & c),
    ((1, 1, 1), lambda a, b, c: a ^ (b & c)),
    ((1, 2, 1), lambda a, b, c: (a & (b >> 1)) ^ (b & c) ^ 1),
    ((1, 1, 1, 1), lambda a, b, c, d: (a & b & c) ^ (b & d)),
])
def test_bp_reproduces_target(arities, fn):
    f = BoolFn.from_callable(arities, fn)
    sim = bp_simulate(f)
    assert sim == bp_target(f)
    assert multiparty_nonsignalling(sim, arities)


def test_bp_box_count():
    f = BoolFn.from_callable((1, 1, 1), lambda a, b, c: a & b & c)
    assert share_circuit(f).box_count == 3


def test_bp_caps():
    with pytest.raises(ArityTooLarge):
        share_circuit(BoolFn.from_callable((1,) * 5, lambda *v: v[0]))


def test_broadcast_computes_f():
    f = BoolFn.from_callable((1, 1, 1), lambda a, b, c: a ^ (b & c))
    circ = share_circuit(f)
    rng = random.Random(2)
    for z in range(8):
        box_bits = [rng.randint(0, 1) for _ in range(circ.box_count)]
        value, messages = broadcast_protocol(f, z, box_bits, [rng.randint(0, 1) for _ in range(2)])
        assert value == f.table[z]
        assert messages == 2
