"""Exact bipartite boxes with binary inputs and outputs.

A box is a conditional distribution ``P(a, b | x, y)`` stored as 16 exact
rationals.  Everything here is immutable; constructors validate positivity
and normalization eagerly so that no invalid table ever escapes.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from itertools import product
from typing import Callable, Mapping, NamedTuple, Sequence

from .errors import BadParam, BadWeights, NegativeProbability, NotNormalized

BITS = (0, 1)
ZERO = Fraction(0)
ONE = Fraction(1)
HALF = Fraction(1, 2)


def rat(value) -> Fraction:
    """Coerce ints, strings like ``"3/4"`` and Fractions; floats are refused."""
    if isinstance(value, float):
        raise TypeError(f"refusing float probability {value!r}; pass a Fraction or 'p/q'")
    return Fraction(value)


def _idx(a, b, x, y):
    return (x << 3) | (y << 2) | (a << 1) | b


# (a, b, x, y) tuples in storage order, i.e. sorted by (x, y, a, b)
INDICES = tuple((a, b, x, y) for x, y, a, b in product(BITS, repeat=4))


@dataclass(frozen=True)
class Box:
    table: tuple

    def __post_init__(self):
        if len(self.table) != 16:
            raise BadParam(f"a box needs 16 entries, got {len(self.table)}")
        for (a, b, x, y), p in zip(INDICES, self.table):
            if p < 0:
                raise NegativeProbability((a, b, x, y), p)
        for x, y in product(BITS, repeat=2):
            total = sum(self.table[_idx(a, b, x, y)] for a, b in product(BITS, repeat=2))
            if total != 1:
                raise NotNormalized((x, y), total)

    def __hash__(self):
        # boxes are used as cache keys; hashing 16 Fractions is not free
        try:
            return self.__dict__["_hash"]
        except KeyError:
            h = hash(self.table)
            object.__setattr__(self, "_hash", h)
            return h

    def p(self, a, b, x, y) -> Fraction:
        return self.table[_idx(a, b, x, y)]

    def __getitem__(self, key) -> Fraction:
        return self.p(*key)

    def items(self):
        """Yield ``((a, b, x, y), p)`` in (x, y, a, b) order."""
        return zip(INDICES, self.table)

    def as_dict(self) -> dict:
        return dict(self.items())

    def marginal_a(self, a, x, y) -> Fraction:
        return self.p(a, 0, x, y) + self.p(a, 1, x, y)

    def marginal_b(self, b, x, y) -> Fraction:
        return self.p(0, b, x, y) + self.p(1, b, x, y)

    def __repr__(self):
        cols = []
        for x, y in product(BITS, repeat=2):
            cells = " ".join(str(self.p(a, b, x, y)) for a, b in product(BITS, repeat=2))
            cols.append(f"{x}{y}:[{cells}]")
        return f"Box({' '.join(cols)})"


def make_box(table: Mapping | Callable | Sequence) -> Box:
    """Build a validated box.

    ``table`` may be a mapping ``(a, b, x, y) -> p`` covering all 16 keys, a
    callable ``f(a, b, x, y) -> p``, or a flat sequence in (x, y, a, b) order.
    """
    if callable(table):
        values = [rat(table(*k)) for k in INDICES]
    elif isinstance(table, Mapping):
        missing = [k for k in INDICES if k not in table]
        if missing:
            raise BadParam(f"table is missing entries {missing}")
        values = [rat(table[k]) for k in INDICES]
    else:
        values = [rat(v) for v in table]
    return Box(tuple(values))


class SignallingWitness(NamedTuple):
    """Which marginal moved.

    For ``party == "A"``: ``P(a=outcome | x=own, y=other[0]) != ... y=other[1]``.
    """
    party: str
    outcome: int
    own_input: int
    other_inputs: tuple


class NonSignallingReport(NamedTuple):
    ok: bool
    witness: SignallingWitness | None

    def __bool__(self):
        return self.ok


def is_nonsignalling(box: Box) -> NonSignallingReport:
    for a, x in product(BITS, repeat=2):
        if box.marginal_a(a, x, 0) != box.marginal_a(a, x, 1):
            return NonSignallingReport(False, SignallingWitness("A", a, x, (0, 1)))
    for b, y in product(BITS, repeat=2):
        if box.marginal_b(b, 0, y) != box.marginal_b(b, 1, y):
            return NonSignallingReport(False, SignallingWitness("B", b, y, (0, 1)))
    return NonSignallingReport(True, None)


def correlator(box: Box, x: int, y: int) -> Fraction:
    return box.p(0, 0, x, y) + box.p(1, 1, x, y) - box.p(0, 1, x, y) - box.p(1, 0, x, y)


def chsh_expression(box: Box, x: int = 0, y: int = 0) -> Fraction:
    """Signed ``X_xy + X_xy' + X_x'y - X_x'y'`` (primes are complements).

    With ``x = y = 0`` this is the canonical combination
    ``X00 + X01 + X10 - X11``.
    """
    xb, yb = 1 - x, 1 - y
    return (correlator(box, x, y) + correlator(box, x, yb)
            + correlator(box, xb, y) - correlator(box, xb, yb))


def chsh(box: Box) -> Fraction:
    return max(abs(chsh_expression(box, x, y)) for x, y in product(BITS, repeat=2))


def mix(boxes: Sequence[Box], weights: Sequence) -> Box:
    if len(boxes) != len(weights) or not boxes:
        raise BadWeights("boxes and weights must be non-empty and of equal length")
    ws = [rat(w) for w in weights]
    if any(w < 0 for w in ws):
        raise BadWeights(f"negative weight in {ws}")
    if sum(ws) != 1:
        raise BadWeights(f"weights sum to {sum(ws)}, expected 1")
    return Box(tuple(sum(w * b.table[i] for w, b in zip(ws, boxes)) for i in range(16)))


# ---------------------------------------------------------------- named boxes

def _parity_box(rule: Callable[[int, int], int]) -> Box:
    """Uniform over outputs with ``a ^ b == rule(x, y)``."""
    return make_box(lambda a, b, x, y: HALF if a ^ b == rule(x, y) else ZERO)


@lru_cache(maxsize=None)
def pr_box() -> Box:
    return _parity_box(lambda x, y: x & y)


@lru_cache(maxsize=None)
def anti_pr_box() -> Box:
    return _parity_box(lambda x, y: 1 ^ (x & y))


@lru_cache(maxsize=None)
def correlated_box() -> Box:
    """The fully correlated box ``a == b``."""
    return _parity_box(lambda x, y: 0)


@lru_cache(maxsize=None)
def uniform_box() -> Box:
    return make_box(lambda a, b, x, y: Fraction(1, 4))


def _check_eps(eps) -> Fraction:
    eps = rat(eps)
    if not 0 <= eps <= 1:
        raise BadParam(f"epsilon {eps} outside [0, 1]")
    return eps


def isotropic_box(eps) -> Box:
    """``eps * PR + (1 - eps) * antiPR``."""
    eps = _check_eps(eps)
    return mix([pr_box(), anti_pr_box()], [eps, 1 - eps])


def correlated_nonlocal_box(eps) -> Box:
    """``eps * PR + (1 - eps) * C``."""
    eps = _check_eps(eps)
    return mix([pr_box(), correlated_box()], [eps, 1 - eps])


def _bits(*values):
    for v in values:
        if v not in BITS:
            raise BadParam(f"expected a bit, got {v!r}")


def local_vertex(alpha, beta, gamma, delta) -> Box:
    """Deterministic box ``a = alpha*x ^ beta``, ``b = gamma*y ^ delta``."""
    _bits(alpha, beta, gamma, delta)
    return make_box(lambda a, b, x, y: ONE if (a == (alpha & x) ^ beta
                                               and b == (gamma & y) ^ delta) else ZERO)


def nonlocal_vertex(alpha, beta, gamma) -> Box:
    """PR-type vertex ``a ^ b = xy ^ alpha*x ^ beta*y ^ gamma``."""
    _bits(alpha, beta, gamma)
    return _parity_box(lambda x, y: (x & y) ^ (alpha & x) ^ (beta & y) ^ gamma)


def named_box(name: str, *params) -> Box:
    """Look up a canonical box by name.

    ``pr``, ``antipr``, ``c``, ``uniform`` take no parameters; ``iso`` and
    ``corr`` take epsilon; ``local`` takes four bits; ``nonlocal`` three.
    """
    nullary = {"pr": pr_box, "antipr": anti_pr_box, "c": correlated_box,
               "uniform": uniform_box}
    if name in nullary:
        if params:
            raise BadParam(f"{name} takes no parameters")
        return nullary[name]()
    arity = {"iso": (1, isotropic_box), "corr": (1, correlated_nonlocal_box),
             "local": (4, local_vertex), "nonlocal": (3, nonlocal_vertex)}
    if name not in arity:
        raise BadParam(f"unknown box {name!r}")
    n, ctor = arity[name]
    if len(params) != n:
        raise BadParam(f"{name} takes {n} parameter(s), got {len(params)}")
    return ctor(*params)


# ------------------------------------------------------------------ relabeling

@dataclass(frozen=True)
class PartyRelabel:
    """Input flip ``x <- x ^ flip`` and output shift ``a <- a ^ coef*x ^ const``.

    The wrapped party receives ``x``, feeds ``x ^ flip`` to the box, and
    reports ``a_box ^ coef*x ^ const``.
    """
    flip: int = 0
    coef: int = 0
    const: int = 0

    def then(self, other: PartyRelabel) -> PartyRelabel:
        # apply self first, then other
        return PartyRelabel(self.flip ^ other.flip, self.coef ^ other.coef,
                            self.const ^ other.const ^ (self.coef & other.flip))

    def inverse(self) -> PartyRelabel:
        return PartyRelabel(self.flip, self.coef, self.const ^ (self.coef & self.flip))

    def source(self, out, inp):
        """Map an outer ``(out, inp)`` back to the box's ``(out, inp)``."""
        return out ^ (self.coef & inp) ^ self.const, inp ^ self.flip


@dataclass(frozen=True)
class Relabel:
    alice: PartyRelabel = PartyRelabel()
    bob: PartyRelabel = PartyRelabel()

    def then(self, other: Relabel) -> Relabel:
        return Relabel(self.alice.then(other.alice), self.bob.then(other.bob))

    def inverse(self) -> Relabel:
        return Relabel(self.alice.inverse(), self.bob.inverse())

    def __str__(self):
        a, b = self.alice, self.bob
        return f"{a.flip}{a.coef}{a.const}:{b.flip}{b.coef}{b.const}"


IDENTITY = Relabel()

PARTY_GROUP = tuple(PartyRelabel(*t) for t in product(BITS, repeat=3))
RELABEL_GROUP = tuple(Relabel(a, b) for a in PARTY_GROUP for b in PARTY_GROUP)


def relabel(box: Box, r: Relabel) -> Box:
    def entry(a, b, x, y):
        a0, x0 = r.alice.source(a, x)
        b0, y0 = r.bob.source(b, y)
        return box.p(a0, b0, x0, y0)
    return make_box(entry)


def swap_parties(box: Box) -> Box:
    """Exchange Alice and Bob.  Not part of the relabeling group."""
    return make_box(lambda a, b, x, y: box.p(b, a, y, x))


def equivalent(b1: Box, b2: Box) -> Relabel | None:
    """First group element (in ``RELABEL_GROUP`` order) taking ``b1`` to ``b2``."""
    if chsh(b1) != chsh(b2):
        return None
    for r in RELABEL_GROUP:
        if relabel(b1, r) == b2:
            return r
    return None


def local_vertices() -> list[Box]:
    return [local_vertex(*t) for t in product(BITS, repeat=4)]


def nonlocal_vertices() -> list[Box]:
    return [nonlocal_vertex(*t) for t in product(BITS, repeat=3)]
