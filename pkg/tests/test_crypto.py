from fractions import Fraction
from itertools import product

import pytest

from nlboxes.crypto import (bc_accept_probability, bc_binding_advantage, bc_hiding_advantage,
                            bc_honest_run, binding_reference, commit_parity_ok, count11,
                            hiding_reference, honest_commit_strings, ot_correctness,
                            ot_privacy_report, ot_reduction_attack, ot_reduction_report, ot_run)
from nlboxes.errors import TooLarge


@pytest.mark.parametrize("s, expected", [("", 0), ("11", 1), ("0111", 1), ("1111", 2),
                                         ("0110", 0), ("111", 1), ("1", 0)])
def test_count11(s, expected):
    assert count11(s) == expected


def test_ot_correct_everywhere():
    for x0, x1, c in product((0, 1), repeat=3):
        assert ot_correctness(x0, x1, c) == 1
        runs = ot_run(x0, x1, c)
        assert sum(w for w, _ in runs) == 1
        for _, r in runs:
            assert r.m == r.x0 ^ r.a and r.output == r.m ^ r.b


def test_ot_example():
    assert {r.output for _, r in ot_run(1, 0, 1)} == {0}


def test_ot_privacy():
    report = ot_privacy_report()
    assert report.sender_leak == 0
    assert report.receiver_leak == 0


def test_reduction_attack():
    assert ot_reduction_attack() == 1
    assert ot_reduction_attack(cheating=False) == Fraction(1, 2)
    assert ot_reduction_report().sender_view_distance == 0


def test_honest_commit_strings_satisfy_parity():
    for c in (0, 1):
        xs = honest_commit_strings(2, c)
        assert len(xs) == 16
        assert all(commit_parity_ok(x, c) and not commit_parity_ok(x, 1 - c) for x in xs)


@pytest.mark.parametrize("c, n, k", [(0, 1, 1), (1, 2, 2), (1, 1, 2)])
def test_honest_run_accepts(c, n, k):
    t = bc_honest_run(c, n, k, seed=17)
    assert t.accepted
    # what Bob holds before the reveal carries no copy of c
    assert all(len(v) == 3 for v in t.bob_commit_view())


def test_honest_accept_probability_exact():
    assert bc_accept_probability(0, 1, 2) == 1
    assert bc_accept_probability(1, 2, 1) == 1


def test_tampered_reveal_accused():
    flip_first = lambda x: (1 - x[0],) + x[1:]
    flip_last = lambda x: x[:-1] + (1 - x[-1],)
    assert 1 - bc_accept_probability(0, 1, 1, tamper=flip_first) > 0
    assert bc_accept_probability(0, 1, 1, tamper=flip_last) == 0


def test_hiding_values():
    assert bc_hiding_advantage(1, 0) == Fraction(1, 2)
    assert bc_hiding_advantage(1, 1) == Fraction(3, 4)
    assert bc_hiding_advantage(2, 1) == Fraction(5, 8)
    for n, k in product((1, 2), repeat=2):
        assert bc_hiding_advantage(n, k) <= hiding_reference(n, k)


def test_hiding_monotone():
    grid = {(n, k): bc_hiding_advantage(n, k) for n, k in product((1, 2), repeat=2)}
    assert grid[1, 1] <= grid[1, 2] and grid[2, 1] <= grid[2, 2]
    assert grid[2, 1] <= grid[1, 1] and grid[2, 2] <= grid[1, 2]


def test_binding_values():
    assert bc_binding_advantage(1, 1) == Fraction(1, 2)
    assert bc_binding_advantage(1, 2) == Fraction(1, 4)
    assert bc_binding_advantage(1, 1, flip=False) == 1
    assert bc_binding_advantage(1, 2) <= bc_binding_advantage(1, 1)
    assert binding_reference(1) > 1


def test_caps():
    with pytest.raises(TooLarge):
        bc_hiding_advantage(3, 1)
    with pytest.raises(TooLarge):
        bc_binding_advantage(1, 3)
