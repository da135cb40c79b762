"""Plain-text readers and writers for boxes, games and generalized boxes.

All formats are whitespace-separated lines; ``#`` starts a comment and blank
lines are ignored.  Probabilities are written as reduced ``p/q``.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import product

from .boxcore import INDICES, Box, local_vertex, make_box, named_box, nonlocal_vertex
from .errors import BadParam
from .games import Game, XorGame
from .multigen import TRI_INDICES, GenBox, TriBox, make_genbox, make_tribox


def fmt(q) -> str:
    """Exact rational as ``p/q`` (integers too, e.g. ``4/1``)."""
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def _lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


def _bit(tok, lineno, limit=2):
    try:
        v = int(tok)
    except ValueError:
        raise BadParam(f"line {lineno}: expected an integer, got {tok!r}") from None
    if not 0 <= v < limit:
        raise BadParam(f"line {lineno}: value {v} out of range 0..{limit - 1}")
    return v


def _prob(tok, lineno):
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError):
        raise BadParam(f"line {lineno}: bad probability {tok!r}") from None


def _read_table(text: str, width: int, limits=None) -> dict:
    limits = limits or [2] * width
    table = {}
    for lineno, toks in _lines(text):
        if len(toks) != width + 1:
            raise BadParam(f"line {lineno}: expected {width + 1} fields, got {len(toks)}")
        key = tuple(_bit(t, lineno, lim) for t, lim in zip(toks, limits))
        if key in table:
            raise BadParam(f"line {lineno}: duplicate entry {key}")
        table[key] = _prob(toks[-1], lineno)
    return table


# ---------------------------------------------------------------- bipartite

def parse_box(text: str) -> Box:
    """Sixteen ``a b x y p/q`` lines in any order."""
    table = _read_table(text, 4)
    missing = [k for k in INDICES if k not in table]
    if missing:
        raise BadParam(f"box file is missing entries {missing}")
    return make_box(table)


def format_box(box: Box) -> str:
    return "".join(f"{a} {b} {x} {y} {fmt(p)}\n" for (a, b, x, y), p in box.items())


def read_box(path) -> Box:
    with open(path) as fh:
        return parse_box(fh.read())


def box_from_mnemonic(spec: str) -> Box:
    """``pr``, ``antipr``, ``c``, ``uniform``, ``iso:3/4``, ``corr:1/4``,
    ``vertex:abgd`` (local, four bits) or ``vertex:abg`` (PR-type, three bits)."""
    name, _, arg = spec.partition(":")
    if name == "vertex":
        if not arg or any(ch not in "01" for ch in arg) or len(arg) not in (3, 4):
            raise BadParam(f"vertex needs 3 or 4 bits, got {arg!r}")
        bits = [int(ch) for ch in arg]
        return local_vertex(*bits) if len(bits) == 4 else nonlocal_vertex(*bits)
    if name in ("iso", "corr"):
        if not arg:
            raise BadParam(f"{name} needs a parameter, e.g. {name}:1/4")
        return named_box(name, _prob(arg, 0))
    if arg:
        raise BadParam(f"{name} takes no parameter")
    return named_box(name)


# ---------------------------------------------------------------- games

def parse_game(text: str) -> Game:
    """Header ``X Y A B``, prior lines ``x y p/q``, predicate lines ``a b x y v``."""
    lines = list(_lines(text))
    if not lines:
        raise BadParam("empty game file")
    lineno, head = lines[0]
    if len(head) != 4:
        raise BadParam(f"line {lineno}: header must be 'X Y A B'")
    X, Y, A, B = (int(t) for t in head)
    prior, pred = {}, {}
    for lineno, toks in lines[1:]:
        if len(toks) == 3:
            key = (_bit(toks[0], lineno, X), _bit(toks[1], lineno, Y))
            prior[key] = _prob(toks[2], lineno)
        elif len(toks) == 5:
            a, b, x, y, v = (_bit(t, lineno, lim) for t, lim in zip(toks, (A, B, X, Y, 2)))
            pred[a, b, x, y] = v
        else:
            raise BadParam(f"line {lineno}: expected 3 (prior) or 5 (predicate) fields")
    return Game(X, Y, A, B, prior, pred)


def game_to_xor(game: Game) -> XorGame | None:
    """The XOR form of a binary game whose predicate depends only on ``a ^ b``."""
    if (game.A, game.B) != (2, 2):
        return None
    pred = {}
    for x, y in product(range(game.X), range(game.Y)):
        for a, b in product((0, 1), repeat=2):
            c, v = a ^ b, game.wins(a, b, x, y)
            if pred.setdefault((c, x, y), v) != v:
                return None
    return XorGame(game.X, game.Y, dict(game.prior), pred)


def format_game(game: Game | XorGame) -> str:
    if isinstance(game, XorGame):
        game = game.to_game()
    out = [f"{game.X} {game.Y} {game.A} {game.B}\n"]
    for x, y in product(range(game.X), range(game.Y)):
        if game.pi(x, y):
            out.append(f"{x} {y} {fmt(game.pi(x, y))}\n")
    for x, y, a, b in product(range(game.X), range(game.Y), range(game.A), range(game.B)):
        out.append(f"{a} {b} {x} {y} {game.wins(a, b, x, y)}\n")
    return "".join(out)


def read_game(path) -> Game:
    with open(path) as fh:
        return parse_game(fh.read())


# ---------------------------------------------------------------- tripartite and generalized

def parse_tribox(text: str) -> TriBox:
    """``a b c x y z p/q`` lines; absent entries are zero."""
    return make_tribox(_read_table(text, 6))


def format_tribox(t: TriBox) -> str:
    return "".join(" ".join(map(str, k)) + f" {fmt(p)}\n" for k, p in zip(TRI_INDICES, t.table))


def parse_genbox(text: str) -> GenBox:
    """Header ``dx dy da db`` then ``a b x y p/q`` lines; absent entries are zero."""
    lines = list(_lines(text))
    if not lines or len(lines[0][1]) != 4:
        raise BadParam("generalized box file needs a 'dx dy da db' header")
    dims = tuple(int(t) for t in lines[0][1])
    dx, dy, da, db = dims
    body = "\n".join(" ".join(toks) for _, toks in lines[1:])
    return make_genbox(dims, _read_table(body, 4, [da, db, dx, dy]))


def format_genbox(g: GenBox) -> str:
    out = [f"{g.dx} {g.dy} {g.da} {g.db}\n"]
    out += [f"{a} {b} {x} {y} {fmt(p)}\n" for (a, b, x, y), p in zip(g.keys(), g.table)]
    return "".join(out)
