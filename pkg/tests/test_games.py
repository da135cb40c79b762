import math
import random
from fractions import Fraction

import pytest

from nlboxes.errors import BadParam, DegenerateGame, TooLarge
from nlboxes.games import (BOUNDS, Game, XorGame, analyze_xor_game, check_quantum_bound,
                           chsh_game, classical_value, gamma_equation_residuals,
                           grothendieck_ratio, nlc_game, quantum_bound, random_xor_game,
                           trivial_value, uniform_prior, xor_game, xor_quantum_value)


def test_chsh_values():
    g = chsh_game()
    assert classical_value(g) == Fraction(3, 4)
    assert trivial_value(g) == Fraction(1, 2)
    assert xor_quantum_value(g) == pytest.approx((2 + math.sqrt(2)) / 4, abs=1e-6)
    assert grothendieck_ratio(g) == pytest.approx(math.sqrt(2), abs=1e-5)


def test_trivially_winnable_game():
    g = xor_game(2, 2, uniform_prior(2, 2), lambda c, x, y: True)
    assert classical_value(g) == 1
    assert trivial_value(g) == 1
    assert xor_quantum_value(g) == pytest.approx(1)
    with pytest.raises(DegenerateGame):
        grothendieck_ratio(g)


def test_classical_value_via_general_game():
    g = chsh_game().to_game()
    assert isinstance(g, Game)
    assert classical_value(g) == Fraction(3, 4)


def test_prior_validation():
    with pytest.raises(BadParam):
        XorGame(2, 2, {(0, 0): Fraction(1, 2)}, {})


def test_enumeration_cap():
    g = xor_game(1, 21, uniform_prior(1, 21), lambda c, x, y: c == 0)
    with pytest.raises(TooLarge):
        classical_value(g)


def test_nlc_and():
    g = nlc_game(lambda z: int(z == 3), 2)
    wc = classical_value(g)
    assert wc == Fraction(3, 4)
    assert abs(xor_quantum_value(g) - float(wc)) <= 1e-5


def test_nlc_parity_is_easy():
    # f(z) = z0: Alice and Bob output their own low bit
    g = nlc_game(lambda z: z & 1, 2)
    assert classical_value(g) == 1


def test_quantum_between_classical_and_one():
    rng = random.Random(5)
    for _ in range(20):
        g = random_xor_game(rng)
        wc, wq = classical_value(g), xor_quantum_value(g, restarts=50)
        assert float(wc) - 1e-9 <= wq <= 1 + 1e-9
        assert check_quantum_bound(g, restarts=50)


def test_ratio_below_grothendieck():
    rng = random.Random(8)
    for _ in range(20):
        r = analyze_xor_game(random_xor_game(rng), restarts=50)
        if r.ratio is not None:
            assert r.ratio <= BOUNDS.kg_high + 1e-9


def test_quantum_bound_pieces():
    assert quantum_bound(Fraction(1, 2)) == pytest.approx(BOUNDS.gamma1 / 2)
    assert quantum_bound(Fraction(3, 4)) == pytest.approx(math.sin(3 * math.pi / 8) ** 2)
    # continuity at the breakpoint, up to rounding of the constants
    lo, hi = BOUNDS.gamma1 * BOUNDS.gamma2, math.sin(math.pi / 2 * BOUNDS.gamma2) ** 2
    assert lo == pytest.approx(hi, abs=1e-4)


def test_gamma_constants():
    r1, r2 = gamma_equation_residuals()
    assert abs(r1) < 1e-4 and abs(r2) < 1e-4
    assert BOUNDS.kg_low < BOUNDS.kg_high < 1.7823


def test_quantum_seed_reproducible():
    g = random_xor_game(random.Random(1))
    assert xor_quantum_value(g, seed=4) == xor_quantum_value(g, seed=4)
