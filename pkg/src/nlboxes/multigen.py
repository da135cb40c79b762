"""Tripartite binary boxes and bipartite boxes with larger output alphabets.

Tripartite tables are indexed by ``(a, b, c, x, y, z)`` and stored in
(x, y, z, a, b, c) order.  Generalized boxes keep binary-or-larger input
and output ranges ``dx, dy, da, db`` and are stored in (x, y, a, b) order.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations, product
from typing import Callable, Mapping, NamedTuple, Sequence

from .boxcore import (BITS, PARTY_GROUP, Box, local_vertices, make_box, nonlocal_vertices,
                      pr_box, rat)
from .errors import BadParam, NegativeProbability, NotCoprime, NotNormalized, SizeMismatch
from .exactlp import affine_dimension, convex_combination, rank
from .polytope import ns_constraint_rows, ns_dimension_general

TRI_INDICES = tuple((a, b, c, x, y, z) for x, y, z, a, b, c in product(BITS, repeat=6))
_TRI_POS = {k: i for i, k in enumerate(TRI_INDICES)}


# ------------------------------------------------------------------ TriBox

@dataclass(frozen=True)
class TriBox:
    table: tuple

    def __post_init__(self):
        if len(self.table) != 64:
            raise BadParam(f"a tripartite box needs 64 entries, got {len(self.table)}")
        for k, p in zip(TRI_INDICES, self.table):
            if p < 0:
                raise NegativeProbability(k, p)
        for x, y, z in product(BITS, repeat=3):
            total = sum(self.p(a, b, c, x, y, z) for a, b, c in product(BITS, repeat=3))
            if total != 1:
                raise NotNormalized((x, y, z), total)

    def p(self, a, b, c, x, y, z) -> Fraction:
        return self.table[_TRI_POS[a, b, c, x, y, z]]

    def items(self):
        return zip(TRI_INDICES, self.table)


def make_tribox(table: Mapping | Callable | Sequence) -> TriBox:
    """Same input conventions as :func:`make_box`, with six-bit keys."""
    if callable(table):
        values = [rat(table(*k)) for k in TRI_INDICES]
    elif isinstance(table, Mapping):
        values = [rat(table.get(k, 0)) for k in TRI_INDICES]
    else:
        values = [rat(v) for v in table]
    return TriBox(tuple(values))


def tri_parity_box() -> TriBox:
    """Uniform over ``a ^ b ^ c == xyz``."""
    return make_tribox(lambda a, b, c, x, y, z: Fraction(1, 4) if a ^ b ^ c == x & y & z else 0)


def tri_deterministic(alpha, beta, gamma, delta, mu, nu) -> TriBox:
    """``a = alpha x ^ beta``, ``b = gamma y ^ delta``, ``c = mu z ^ nu``."""
    return make_tribox(lambda a, b, c, x, y, z: int(a == (alpha & x) ^ beta
                                                    and b == (gamma & y) ^ delta
                                                    and c == (mu & z) ^ nu))


def tri_uniform() -> TriBox:
    return make_tribox(lambda *k: Fraction(1, 8))


# bipartitions: (pair, single) party positions within (a, b, c)
BIPARTITIONS = (((0, 1), 2), ((0, 2), 1), ((1, 2), 0))


def tri_product(box: Box, single: Sequence[int], split: tuple = ((0, 1), 2)) -> TriBox:
    """Bipartite ``box`` on the pair times the deterministic box ``o = s0 i ^ s1`` on the rest."""
    (p, q), r = split
    s0, s1 = single

    def entry(*k):
        outs, ins = k[:3], k[3:]
        if outs[r] != (s0 & ins[r]) ^ s1:
            return 0
        return box.p(outs[p], outs[q], ins[p], ins[q])
    return make_tribox(entry)


class TriWitness(NamedTuple):
    """``party``'s input moved from 0 to 1 and changed the marginal ``outcome`` of the others."""
    party: int
    outcome: tuple
    other_inputs: tuple


class TriNSReport(NamedTuple):
    strong: bool
    weak: bool
    witness: TriWitness | None

    def __bool__(self):
        return self.strong


def _marginal(t: TriBox, keep: Sequence[int], outs: tuple, ins: tuple) -> Fraction:
    total = Fraction(0)
    for o in product(BITS, repeat=3):
        if all(o[k] == v for k, v in zip(keep, outs)):
            total += t.p(*o, *ins)
    return total


def _first_violation(t: TriBox, keep_size: int) -> TriWitness | None:
    for party in range(3):
        others = [q for q in range(3) if q != party]
        for keep in (tuple(others),) if keep_size == 2 else ((others[0],), (others[1],)):
            for outs in product(BITS, repeat=len(keep)):
                for oi in product(BITS, repeat=2):
                    vals = []
                    for i in BITS:
                        ins = list(oi)
                        ins.insert(party, i)
                        vals.append(_marginal(t, keep, outs, tuple(ins)))
                    if vals[0] != vals[1]:
                        labelled = tuple(zip(keep, outs))
                        return TriWitness(party, labelled, oi)
    return None


def tri_nonsignalling(t: TriBox) -> TriNSReport:
    """Strong: the joint output law of any two parties ignores the third's input.

    Weak: each single party's output law ignores each other input.  Strong
    implies weak.  The witness reports the first strong violation.
    """
    strong_w = _first_violation(t, 2)
    weak_w = _first_violation(t, 1)
    return TriNSReport(strong_w is None, weak_w is None, strong_w)


@dataclass(frozen=True)
class TriDecomposition:
    """Nonzero convex weights keyed by generator label."""
    weights: Mapping

    def support(self) -> dict:
        return {k: w for k, w in self.weights.items() if w}


def _decompose(generators: dict, t: TriBox) -> TriDecomposition | None:
    labels = list(generators)
    w = convex_combination([generators[k].table for k in labels], t.table)
    if w is None:
        return None
    return TriDecomposition({k: v for k, v in zip(labels, w) if v})


def fully_local_generators() -> dict:
    return {labels: tri_deterministic(*labels) for labels in product(BITS, repeat=6)}


def two_way_generators() -> dict:
    """288 products: 24 bipartite vertices x 4 deterministic third parties x 3 splits."""
    bip = [("local", t, v) for t, v in zip(product(BITS, repeat=4), local_vertices())]
    bip += [("nonlocal", t, v) for t, v in zip(product(BITS, repeat=3), nonlocal_vertices())]
    gens = {}
    for split in BIPARTITIONS:
        for kind, t, v in bip:
            for single in product(BITS, repeat=2):
                gens[split, kind, t, single] = tri_product(v, single, split)
    return gens


def tri_fully_local(t: TriBox) -> TriDecomposition | None:
    return _decompose(fully_local_generators(), t)


def tri_two_way_local(t: TriBox) -> TriDecomposition | None:
    return _decompose(two_way_generators(), t)


def tri_dimension() -> int:
    return ns_dimension_general((2, 2, 2), (2, 2, 2))


def tri_relabel(t: TriBox, rels: Sequence) -> TriBox:
    """Apply one :class:`PartyRelabel` per party."""
    def entry(a, b, c, x, y, z):
        src = [r.source(o, i) for r, o, i in zip(rels, (a, b, c), (x, y, z))]
        return t.p(*(s[0] for s in src), *(s[1] for s in src))
    return make_tribox(entry)


def tri_permute(t: TriBox, perm: Sequence[int]) -> TriBox:
    """Party ``k`` of the result plays the role of party ``perm[k]`` of ``t``."""
    def entry(*k):
        outs, ins = k[:3], k[3:]
        src_o, src_i = [0] * 3, [0] * 3
        for new, old in enumerate(perm):
            src_o[old], src_i[old] = outs[new], ins[new]
        return t.p(*src_o, *src_i)
    return make_tribox(entry)


def representative_orbit_dimension() -> int:
    """Affine dimension of the local vertices plus the orbits of the three representatives.

    The representatives are the deterministic, PR-times-deterministic and
    ``a ^ b ^ c == xyz`` boxes; orbits run over output/input relabelings
    of each party and party permutations.
    """
    reps = [tri_deterministic(0, 0, 0, 0, 0, 0), tri_product(pr_box(), (0, 0)), tri_parity_box()]
    points = {v.table for v in fully_local_generators().values()}
    for rep in reps:
        for perm in permutations(range(3)):
            base = tri_permute(rep, perm)
            for rels in product(PARTY_GROUP, repeat=3):
                points.add(tri_relabel(base, rels).table)
    return affine_dimension(sorted(points))


def tri_constraint_rank() -> int:
    return rank(ns_constraint_rows((2, 2, 2), (2, 2, 2)))


# ------------------------------------------------------------------ GenBox

@dataclass(frozen=True)
class GenBox:
    dx: int
    dy: int
    da: int
    db: int
    table: tuple

    def __post_init__(self):
        if len(self.table) != self.dx * self.dy * self.da * self.db:
            raise SizeMismatch(f"table has {len(self.table)} entries for dims "
                               f"{(self.dx, self.dy, self.da, self.db)}")
        for k, p in zip(self.keys(), self.table):
            if p < 0:
                raise NegativeProbability(k, p)
        for x, y in product(range(self.dx), range(self.dy)):
            total = sum(self.p(a, b, x, y) for a, b in product(range(self.da), range(self.db)))
            if total != 1:
                raise NotNormalized((x, y), total)

    @property
    def dims(self) -> tuple:
        return self.dx, self.dy, self.da, self.db

    def keys(self):
        """``(a, b, x, y)`` in storage order."""
        return [(a, b, x, y) for x, y, a, b in product(range(self.dx), range(self.dy),
                                                       range(self.da), range(self.db))]

    def p(self, a, b, x, y) -> Fraction:
        return self.table[((x * self.dy + y) * self.da + a) * self.db + b]

    def to_box(self) -> Box:
        if self.dims != (2, 2, 2, 2):
            raise SizeMismatch(f"only 2x2x2x2 tables convert to Box, got {self.dims}")
        return make_box(self.p)

    @classmethod
    def from_box(cls, box: Box) -> GenBox:
        return make_genbox((2, 2, 2, 2), box.p)


def make_genbox(dims: Sequence[int], table: Mapping | Callable | Sequence) -> GenBox:
    dx, dy, da, db = dims
    keys = [(a, b, x, y) for x, y, a, b in product(range(dx), range(dy), range(da), range(db))]
    if callable(table):
        values = [rat(table(*k)) for k in keys]
    elif isinstance(table, Mapping):
        values = [rat(table.get(k, 0)) for k in keys]
    else:
        values = [rat(v) for v in table]
    return GenBox(dx, dy, da, db, tuple(values))


def genbox_nonsignalling(g: GenBox) -> bool:
    for a, x in product(range(g.da), range(g.dx)):
        margs = {sum(g.p(a, b, x, y) for b in range(g.db)) for y in range(g.dy)}
        if len(margs) > 1:
            return False
    for b, y in product(range(g.db), range(g.dy)):
        margs = {sum(g.p(a, b, x, y) for a in range(g.da)) for x in range(g.dx)}
        if len(margs) > 1:
            return False
    return True


def d_output_vertex(k: int, da: int | None = None, db: int | None = None) -> GenBox:
    """Uniform on ``(b - a) = xy mod k`` with ``a, b < k``; larger alphabets are padded with zeros."""
    da = k if da is None else da
    db = k if db is None else db
    if not 2 <= k <= min(da, db):
        raise BadParam(f"need 2 <= k <= min(da, db), got k={k}, da={da}, db={db}")
    inv = Fraction(1, k)
    return make_genbox((2, 2, da, db),
                       lambda a, b, x, y: inv if a < k and b < k and (b - a - x * y) % k == 0 else 0)


def project_mod(g: GenBox, d: int) -> GenBox:
    """Both parties reduce their output mod ``d``."""
    if d < 1 or g.da % d or g.db % d:
        raise BadParam(f"{d} does not divide the output sizes {g.da}, {g.db}")
    table = {}
    for (a, b, x, y), p in zip(g.keys(), g.table):
        key = (a % d, b % d, x, y)
        table[key] = table.get(key, 0) + p
    return make_genbox((g.dx, g.dy, d, d), table)


def _crt(r1: int, m1: int, r2: int, m2: int) -> int:
    return (r1 * m2 * pow(m2, -1, m1) + r2 * m1 * pow(m1, -1, m2)) % (m1 * m2)


def compose_coprime(g1: GenBox, g2: GenBox) -> GenBox:
    """Feed the same inputs to both boxes and Chinese-remainder the outputs."""
    d1, d2 = g1.da, g2.da
    if g1.db != d1 or g2.db != d2 or g1.dx != g2.dx or g1.dy != g2.dy:
        raise SizeMismatch("compose_coprime needs square output alphabets and equal inputs")
    if math.gcd(d1, d2) != 1:
        raise NotCoprime(f"gcd({d1}, {d2}) = {math.gcd(d1, d2)}")
    table = {}
    for x, y in product(range(g1.dx), range(g1.dy)):
        for a1, b1, a2, b2 in product(range(d1), range(d1), range(d2), range(d2)):
            p = g1.p(a1, b1, x, y) * g2.p(a2, b2, x, y)
            if p:
                key = (_crt(a1, d1, a2, d2), _crt(b1, d1, b2, d2), x, y)
                table[key] = table.get(key, 0) + p
    return make_genbox((g1.dx, g1.dy, d1 * d2, d1 * d2), table)


def genbox_dimension(da: int, db: int) -> int:
    """Dimension of the binary-input non-signalling polytope with output sizes ``da, db``."""
    return ns_dimension_general((da, db), (2, 2))


def genbox_dimension_formula(da: int, db: int) -> int:
    return 4 * da * db - 2 * da - 2 * db


def simulation_capacity(n: int, d: int, d_prime: int) -> float:
    """Most d-output boxes ``n`` d'-output boxes can simulate exactly (a cited bound, not checked here)."""
    return n * (1 + math.log2(d_prime)) / (1 + math.log2(d))
