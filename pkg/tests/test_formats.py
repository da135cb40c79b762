from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from nlboxes.boxcore import (correlated_nonlocal_box, isotropic_box, local_vertex,
                             nonlocal_vertex, pr_box, uniform_box)
from nlboxes.errors import BadParam, NotNormalized
from nlboxes.formats import (box_from_mnemonic, fmt, format_box, format_game, format_genbox,
                             format_tribox, game_to_xor, parse_box, parse_game, parse_genbox,
                             parse_tribox)
from nlboxes.games import chsh_game, classical_value
from nlboxes.multigen import d_output_vertex, tri_parity_box


def test_fmt():
    assert fmt(4) == "4/1"
    assert fmt(Fraction(6, 8)) == "3/4"


@given(st.fractions(min_value=0, max_value=1, max_denominator=100))
def test_box_roundtrip(eps):
    box = isotropic_box(eps)
    assert parse_box(format_box(box)) == box


def test_writer_order():
    lines = format_box(pr_box()).splitlines()
    assert lines[0] == "0 0 0 0 1/2"
    assert lines[-1] == "1 1 1 1 0/1"
    assert len(lines) == 16


def test_parse_any_order_with_comments():
    text = "# uniform box\n" + "\n".join(reversed(format_box(uniform_box()).splitlines())) + "\n\n"
    assert parse_box(text) == uniform_box()


def test_parse_errors():
    lines = format_box(pr_box()).splitlines()
    with pytest.raises(BadParam):
        parse_box("\n".join(lines[:-1]))                 # missing entry
    with pytest.raises(BadParam):
        parse_box("\n".join(lines + lines[:1]))          # duplicate
    with pytest.raises(BadParam):
        parse_box("0 0 0 2 1/2\n")                       # bad bit
    bad = lines[:]
    bad[0] = "0 0 0 0 1/3"
    with pytest.raises(NotNormalized):
        parse_box("\n".join(bad))


def test_mnemonics():
    assert box_from_mnemonic("pr") == pr_box()
    assert box_from_mnemonic("iso:3/4") == isotropic_box(Fraction(3, 4))
    assert box_from_mnemonic("corr:1/4") == correlated_nonlocal_box(Fraction(1, 4))
    assert box_from_mnemonic("vertex:1010") == local_vertex(1, 0, 1, 0)
    assert box_from_mnemonic("vertex:011") == nonlocal_vertex(0, 1, 1)
    for bad in ("iso", "vertex:12", "pr:1", "nope"):
        with pytest.raises(BadParam):
            box_from_mnemonic(bad)


def test_game_roundtrip():
    text = format_game(chsh_game())
    game = parse_game(text)
    assert classical_value(game) == Fraction(3, 4)
    xg = game_to_xor(game)
    assert xg is not None and classical_value(xg) == Fraction(3, 4)


def test_non_xor_game_detected():
    text = "2 2 2 2\n0 0 1\n1 0 0 0 1\n"
    game = parse_game(text)
    assert game_to_xor(game) is None


def test_tribox_roundtrip():
    t = tri_parity_box()
    assert parse_tribox(format_tribox(t)) == t


def test_genbox_roundtrip():
    g = d_output_vertex(3)
    text = format_genbox(g)
    assert text.splitlines()[0] == "2 2 3 3"
    assert parse_genbox(text) == g
