"""Adaptive local wirings of n boxes and the distillation protocols built on them.

A party's deterministic strategy queries its ends of the n boxes one at a
time.  The input fed at step ``i`` is a function of the party's external
input and the outcomes of steps ``0..i-1``; the final output is a function
of the external input and all n outcomes.  Strategies are stored as truth
tables so they can be hashed, compared and enumerated.

Truth-table indexing: bit 0 of the index is the external input, bit
``j + 1`` is the outcome observed at step ``j``.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Callable, Iterator, Sequence

import numpy as np

from .boxcore import (BITS, Box, chsh, correlated_nonlocal_box, is_nonsignalling,
                      make_box, rat)
from .errors import BadParam, NotCorrelatedForm, SignallingInput, SizeMismatch, TooLarge


def _pack(x, outcomes):
    idx = x
    for j, o in enumerate(outcomes):
        idx |= o << (j + 1)
    return idx


@dataclass(frozen=True)
class LocalStrategy:
    n: int
    order: tuple
    input_fns: tuple
    output_fn: tuple

    def __post_init__(self):
        if sorted(self.order) != list(range(self.n)):
            raise BadParam(f"order {self.order} is not a permutation of 0..{self.n - 1}")
        if len(self.input_fns) != self.n:
            raise BadParam("one input function per step is required")
        for i, fn in enumerate(self.input_fns):
            # step i may only read outcomes of earlier steps
            if len(fn) != 2 ** (i + 1):
                raise BadParam(f"input function of step {i} must have {2 ** (i + 1)} entries")
        if len(self.output_fn) != 2 ** (self.n + 1):
            raise BadParam(f"output function must have {2 ** (self.n + 1)} entries")

    @classmethod
    def from_functions(cls, n: int, input_fns: Sequence[Callable], output_fn: Callable,
                       order: Sequence[int] | None = None) -> LocalStrategy:
        """Tabulate Python callables.

        ``input_fns[i](x, prev)`` receives the tuple of outcomes of steps
        ``< i``; ``output_fn(x, outs)`` receives all outcomes in step order.
        """
        order = tuple(range(n)) if order is None else tuple(order)
        tables = []
        for i, fn in enumerate(input_fns):
            tables.append(tuple(fn(x, prev) & 1 for prev, x in
                                ((tuple((idx >> (j + 1)) & 1 for j in range(i)), idx & 1)
                                 for idx in range(2 ** (i + 1)))))
        out = tuple(output_fn(idx & 1, tuple((idx >> (j + 1)) & 1 for j in range(n))) & 1
                    for idx in range(2 ** (n + 1)))
        return cls(n, order, tuple(tables), out)

    def run(self, x: int, box_outcomes: Sequence[int]) -> tuple[tuple, int]:
        """Box inputs (indexed by box) and final output for a full outcome vector."""
        inputs = [0] * self.n
        seen = []
        for step, box in enumerate(self.order):
            inputs[box] = self.input_fns[step][_pack(x, seen)]
            seen.append(box_outcomes[box])
        return tuple(inputs), self.output_fn[_pack(x, seen)]

    def channel(self) -> tuple:
        """The induced map ``(x, box outcomes) -> (box inputs, output)``.

        Two strategies with the same channel are interchangeable in any
        composition, so this is the deduplication key.
        """
        return tuple(self.run(x, outs) for x in BITS for outs in product(BITS, repeat=self.n))


@dataclass(frozen=True)
class Wiring:
    """A pair of local strategies, or a rational mixture of such pairs.

    With ``shared`` non-empty it holds ``(weight, alice, bob)`` triples
    selected by shared randomness and ``alice``/``bob`` must be None.
    """
    alice: LocalStrategy | None = None
    bob: LocalStrategy | None = None
    shared: tuple = field(default=())

    def __post_init__(self):
        if self.shared:
            if self.alice is not None or self.bob is not None:
                raise BadParam("give either a deterministic pair or a shared mixture, not both")
            weights = [rat(w) for w, _, _ in self.shared]
            if any(w < 0 for w in weights) or sum(weights) != 1:
                raise BadParam(f"shared-randomness weights {weights} are not a distribution")
            ns = {s.n for _, a, b in self.shared for s in (a, b)}
        else:
            if self.alice is None or self.bob is None:
                raise BadParam("a deterministic wiring needs both strategies")
            ns = {self.alice.n, self.bob.n}
        if len(ns) != 1:
            raise BadParam(f"strategies disagree on box count: {sorted(ns)}")

    @property
    def n(self) -> int:
        return self.pairs()[0][1].n

    def pairs(self) -> list:
        if self.shared:
            return [(rat(w), a, b) for w, a, b in self.shared]
        return [(Fraction(1), self.alice, self.bob)]


def mix_wirings(wirings: Sequence[Wiring], weights: Sequence) -> Wiring:
    triples = []
    for w, wiring in zip(weights, wirings):
        for v, a, b in wiring.pairs():
            triples.append((rat(w) * v, a, b))
    return Wiring(shared=tuple(triples))


def _compose_pair(alice: LocalStrategy, bob: LocalStrategy, boxes: Sequence[Box]) -> dict:
    n = alice.n
    table = {k: Fraction(0) for k in product(BITS, repeat=4)}
    outcome_vectors = list(product(BITS, repeat=n))
    for x, y in product(BITS, repeat=2):
        a_runs = [(outs, alice.run(x, outs)) for outs in outcome_vectors]
        b_runs = [(outs, bob.run(y, outs)) for outs in outcome_vectors]
        for a_outs, (u, a) in a_runs:
            for b_outs, (v, b) in b_runs:
                w = Fraction(1)
                for j in range(n):
                    w *= boxes[j].p(a_outs[j], b_outs[j], u[j], v[j])
                    if not w:
                        break
                if w:
                    table[a, b, x, y] += w
    return table


def compose(wiring: Wiring, boxes: Sequence[Box]) -> Box:
    """Exact box simulated by running ``wiring`` on ``boxes``.

    Sums, for each (x, y), over all 4**n joint outcome branches the product
    of the per-box conditional probabilities, with each side's box inputs
    fixed step by step by its strategy.
    """
    if len(boxes) != wiring.n:
        raise SizeMismatch(f"wiring expects {wiring.n} boxes, got {len(boxes)}")
    for i, b in enumerate(boxes):
        if not is_nonsignalling(b).ok:
            raise SignallingInput(f"box {i} is signalling")
    total = {k: Fraction(0) for k in product(BITS, repeat=4)}
    for weight, alice, bob in wiring.pairs():
        if not weight:
            continue
        part = _compose_pair(alice, bob, boxes)
        for k, v in part.items():
            total[k] += weight * v
    return make_box(total)


# ---------------------------------------------------------------- protocols

def _parity(bits):
    acc = 0
    for b in bits:
        acc ^= b
    return acc


def fww(n: int) -> Wiring:
    """Feed the external input to every box and output the parity of outcomes."""
    if n < 1:
        raise BadParam("fww needs at least one box")
    side = LocalStrategy.from_functions(n, [lambda x, prev: x] * n,
                                        lambda x, outs: _parity(outs))
    return Wiring(side, side)


def identity_wiring() -> Wiring:
    return fww(1)


def bs2() -> Wiring:
    """Two-box adaptive protocol: second box gets ``x * a1``; output ``a1 ^ a2``."""
    side = LocalStrategy.from_functions(
        2, [lambda x, prev: x, lambda x, prev: x & prev[0]],
        lambda x, outs: outs[0] ^ outs[1])
    return Wiring(side, side)


def fww_formula(eps, n) -> Fraction:
    return 3 - (1 - 2 * rat(eps)) ** n


def bs_formula(eps) -> Fraction:
    eps = rat(eps)
    return 3 * eps - eps ** 2 + 2


def correlated_parameter(box: Box) -> Fraction:
    """``eps`` such that ``box == eps*PR + (1-eps)*C``; raises otherwise."""
    eps = 2 * box.p(0, 1, 1, 1)
    if not 0 <= eps <= 1 or correlated_nonlocal_box(eps) != box:
        raise NotCorrelatedForm(f"box is not of correlated form: {box!r}")
    return eps


def bs_step(eps) -> Fraction:
    """Correlated-family parameter after one BS round, read off the composed table."""
    box = correlated_nonlocal_box(eps)
    return correlated_parameter(compose(bs2(), [box, box]))


def iterate_bs(eps0, steps: int) -> list[Fraction]:
    """CHSH values of the correlated box after 0, 1, ..., ``steps`` BS rounds."""
    box = correlated_nonlocal_box(eps0)
    values = [chsh(box)]
    wiring = bs2()
    for _ in range(steps):
        box = compose(wiring, [box, box])
        correlated_parameter(box)
        values.append(chsh(box))
    return values


BCC_SQUARED = Fraction(32, 3)


def exceeds_bcc(value) -> bool:
    """``value > 4*sqrt(2/3)`` decided exactly as ``value**2 > 32/3``."""
    value = rat(value)
    return value > 0 and value ** 2 > BCC_SQUARED


# ------------------------------------------------------------------- limits

@dataclass(frozen=True)
class LimitReport:
    chsh_in: Fraction
    chsh_out: Fraction
    local_preserved: bool
    below_four_preserved: bool

    @property
    def ok(self) -> bool:
        return self.local_preserved and self.below_four_preserved


def limit_checks(box: Box, wiring: Wiring) -> LimitReport:
    out = compose(wiring, [box] * wiring.n)
    cin, cout = chsh(box), chsh(out)
    return LimitReport(cin, cout,
                       local_preserved=not (cin <= 2) or cout <= 2,
                       below_four_preserved=not (cin < 4) or cout < 4)


# ------------------------------------------------------- exhaustive 2-box search

def raw_strategies(n: int = 2, order: Sequence[int] | None = None) -> Iterator[LocalStrategy]:
    """Every deterministic strategy table for one fixed box order."""
    order = tuple(range(n)) if order is None else tuple(order)
    step_tables = [list(product(BITS, repeat=2 ** (i + 1))) for i in range(n)]
    for fns in product(*step_tables):
        for out in product(BITS, repeat=2 ** (n + 1)):
            yield LocalStrategy(n, order, tuple(fns), out)


def canonical_strategies(n: int = 2) -> list[LocalStrategy]:
    """One representative per induced channel, over all box orders."""
    if n != 2:
        raise TooLarge("exhaustive strategy enumeration is only supported for n = 2")
    seen = set()
    result = []
    for order in ((0, 1), (1, 0)):
        for s in raw_strategies(n, order):
            key = s.channel()
            if key not in seen:
                seen.add(key)
                result.append(s)
    return result


def enumerate_wirings(n: int = 2) -> Iterator[Wiring]:
    """Stream of every pair of canonical deterministic strategies."""
    strategies = canonical_strategies(n)
    for a in strategies:
        for b in strategies:
            yield Wiring(a, b)


# Encoding used by the search: a strategy becomes a {-1, 0, 1} vector over
# (external input, outcome vector, box-input vector) holding (-1)**output on
# the box inputs it actually uses.  The correlator of the composed box is then
# bilinear, alice_vec @ K_xy @ bob_vec.

def _strategy_matrix(strategies: Sequence[LocalStrategy], n: int) -> np.ndarray:
    size = 2 * 4 ** n
    mat = np.zeros((len(strategies), size))
    vecs = list(product(BITS, repeat=n))
    for row, s in enumerate(strategies):
        for x in BITS:
            for oi, outs in enumerate(vecs):
                inputs, out = s.run(x, outs)
                ui = vecs.index(inputs)
                mat[row, (x * 2 ** n + oi) * 2 ** n + ui] = -1.0 if out else 1.0
    return mat


def _placement_coefficients():
    """Sign of each correlator in the four CHSH combinations."""
    out = []
    for x0, y0 in product(BITS, repeat=2):
        out.append({(x, y): (-1 if (x, y) == (1 - x0, 1 - y0) else 1)
                    for x, y in product(BITS, repeat=2)})
    return out


def _kernels(boxes: Sequence[Box], n: int):
    denom = 1
    for b in boxes:
        for p in b.table:
            denom = math.lcm(denom, p.denominator)
    scale = denom ** n
    vecs = list(product(BITS, repeat=n))
    size = 2 * 4 ** n
    base = {}
    for x, y in product(BITS, repeat=2):
        k = np.zeros((size, size))
        for (ai, a_outs), (ui, u) in product(enumerate(vecs), repeat=2):
            row = (x * 2 ** n + ai) * 2 ** n + ui
            for (bi, b_outs), (vi, v) in product(enumerate(vecs), repeat=2):
                w = 1
                for j in range(n):
                    w *= boxes[j].p(a_outs[j], b_outs[j], u[j], v[j]) * denom
                if w:
                    k[row, (y * 2 ** n + bi) * 2 ** n + vi] = float(w)
        base[x, y] = k
    kernels = [sum(c[xy] * base[xy] for xy in base) for c in _placement_coefficients()]
    return kernels, scale


def max_chsh_over_wirings(box: Box, n: int = 2, threads: int = 1,
                          chunk: int = 256) -> tuple[Fraction, Wiring]:
    """Largest CHSH reachable by wiring two copies of ``box``, with a witness.

    Searches every pair of canonical deterministic strategies.  Randomized
    wirings cannot do better: for each of the four CHSH combinations the
    composed value is affine in the shared randomness.  The search runs in
    integer-valued float64 (exact below 2**53) and the winning pair is then
    recomposed with rationals to confirm the value.  Ties go to the pair
    that comes first in ``enumerate_wirings`` order.
    """
    if n != 2:
        raise TooLarge("exhaustive wiring search is only supported for n = 2")
    if not is_nonsignalling(box).ok:
        raise SignallingInput("box is signalling")
    strategies = canonical_strategies(n)
    mat = _strategy_matrix(strategies, n)
    kernels, scale = _kernels([box] * n, n)
    nnz = int((mat[0] != 0).sum())
    bound = nnz * nnz * max(float(np.abs(k).max()) for k in kernels)
    if bound >= 2 ** 53:
        raise TooLarge("box denominators too large for the exact float64 search")
    left = [mat @ k for k in kernels]
    right = mat.T.copy()

    def scan(r0):
        r1 = min(r0 + chunk, len(strategies))
        best = None
        for lk in left:
            vals = np.abs(lk[r0:r1] @ right)
            best = vals if best is None else np.maximum(best, vals)
        flat = int(np.argmax(best))
        i, j = divmod(flat, best.shape[1])
        return best[i, j], r0 + i, j

    starts = range(0, len(strategies), chunk)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(scan, starts))
    else:
        results = [scan(r0) for r0 in starts]
    top = max(v for v, _, _ in results)
    i, j = min((i, j) for v, i, j in results if v == top)
    value = Fraction(int(round(top)), scale)
    witness = Wiring(strategies[i], strategies[j])
    exact = chsh(compose(witness, [box] * n))
    if exact != value:
        raise AssertionError(f"search value {value} disagrees with exact recomposition {exact}")
    return value, witness


def strategy_truth_table(s: LocalStrategy) -> str:
    """Serialize a strategy as ``order|f0|f1|...|g`` bit strings."""
    parts = ["".join(map(str, s.order))]
    parts += ["".join(map(str, fn)) for fn in s.input_fns]
    parts.append("".join(map(str, s.output_fn)))
    return "|".join(parts)
