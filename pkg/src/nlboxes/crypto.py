"""Oblivious transfer and bit commitment from PR boxes, analysed exactly.

Every probability returned here comes from full enumeration of the box
outcome branches and the honest parties' coins; nothing is sampled except
in :func:`bc_honest_run`, which produces an illustrative transcript.
"""
from __future__ import annotations

import random
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Callable, Sequence

from .boxcore import BITS, Box, pr_box
from .errors import TooLarge

BC_CAP_N = 2
BC_CAP_K = 2


def count11(s: str | Sequence[int]) -> int:
    """Number of ``11`` blocks at odd (1-based) positions.

    Consumes the string two symbols at a time; a trailing lone symbol
    counts 0.
    """
    bits = [int(c) for c in s]
    total = 0
    while len(bits) >= 2:
        if bits[0] == 1 and bits[1] == 1:
            total += 1
        bits = bits[2:]
    return total


def statistical_distance(p: dict, q: dict) -> Fraction:
    keys = set(p) | set(q)
    return sum((abs(p.get(k, 0) - q.get(k, 0)) for k in keys), Fraction(0)) / 2


def _branches(box: Box, u: int, v: int):
    for a, b in product(BITS, repeat=2):
        w = box.p(a, b, u, v)
        if w:
            yield a, b, w


# ------------------------------------------------------------------ 1-2 OT

@dataclass(frozen=True)
class OTRun:
    x0: int
    x1: int
    c: int
    a: int
    b: int
    m: int
    output: int


def ot_run(x0: int, x1: int, c: int, box: Box | None = None) -> list[tuple[Fraction, OTRun]]:
    """All branches of one transfer: Alice feeds ``x0 ^ x1``, Bob feeds ``c``."""
    box = pr_box() if box is None else box
    runs = []
    for a, b, w in _branches(box, x0 ^ x1, c):
        m = x0 ^ a
        runs.append((w, OTRun(x0, x1, c, a, b, m, m ^ b)))
    return runs


def ot_correctness(x0: int, x1: int, c: int) -> Fraction:
    target = (x0, x1)[c]
    return sum((w for w, r in ot_run(x0, x1, c) if r.output == target), Fraction(0))


@dataclass(frozen=True)
class OTPrivacy:
    sender_leak: Fraction
    receiver_leak: Fraction


def ot_privacy_report() -> OTPrivacy:
    """Worst-case statistical distances of each party's view.

    Sender: her view ``(x0, x1, a)`` under ``c = 0`` versus ``c = 1``.
    Receiver: his view ``(c, b, m)`` for the two values of the bit he did
    not choose, with his choice and the chosen bit held fixed.
    """
    def alice_view(x0, x1, c):
        d = defaultdict(Fraction)
        for w, r in ot_run(x0, x1, c):
            d[r.x0, r.x1, r.a] += w
        return d

    def bob_view(x0, x1, c):
        d = defaultdict(Fraction)
        for w, r in ot_run(x0, x1, c):
            d[r.c, r.b, r.m] += w
        return d

    sender = max(statistical_distance(alice_view(x0, x1, 0), alice_view(x0, x1, 1))
                 for x0, x1 in product(BITS, repeat=2))
    receiver = Fraction(0)
    for c, chosen in product(BITS, repeat=2):
        views = []
        for other in BITS:
            x = [0, 0]
            x[c], x[1 - c] = chosen, other
            views.append(bob_view(x[0], x[1], c))
        receiver = max(receiver, statistical_distance(*views))
    return OTPrivacy(sender, receiver)


@dataclass(frozen=True)
class ReductionReport:
    cheating: Fraction
    honest: Fraction
    sender_view_distance: Fraction


def _reduction_distribution(cheating: bool):
    """Joint law of (sender view, receiver learned the secret)."""
    sender_view = defaultdict(Fraction)
    learned = Fraction(0)
    quarter = Fraction(1, 4)
    for secret, k in product(BITS, repeat=2):
        xs = [0, 0]
        xs[k] = secret
        # an honest receiver commits to c before k is announced; the cheat
        # feeds the box only afterwards and picks c = k
        choices = [(k, Fraction(1))] if cheating else [(c, Fraction(1, 2)) for c in BITS]
        for c, wc in choices:
            for w, r in ot_run(xs[0], xs[1], c):
                weight = quarter * wc * w
                sender_view[secret, k, r.x0, r.x1, r.a, r.m] += weight
                if c == k and r.output == secret:
                    learned += weight
    return sender_view, learned


def ot_reduction_report() -> ReductionReport:
    cheat_view, cheat = _reduction_distribution(True)
    honest_view, honest = _reduction_distribution(False)
    return ReductionReport(cheat, honest, statistical_distance(cheat_view, honest_view))


def ot_reduction_attack(cheating: bool = True) -> Fraction:
    """Probability the receiver learns the sender's secret in the OT-from-1-2-OT reduction."""
    return _reduction_distribution(cheating)[1]


# ---------------------------------------------------------- bit commitment

def commit_parity_ok(x: Sequence[int], c: int) -> bool:
    """``|x_1..x_2n|_11 + x_{2n+1} + c`` is even."""
    return (count11(x[:-1]) + x[-1] + c) % 2 == 0


def honest_commit_strings(n: int, c: int) -> list[tuple]:
    """Every ``x`` an honest committer to ``c`` may pick (equally likely)."""
    out = []
    for head in product(BITS, repeat=2 * n):
        last = (count11(head) + c) % 2
        out.append(head + (last,))
    return out


def _parity(bits):
    acc = 0
    for b in bits:
        acc ^= b
    return acc


@dataclass(frozen=True)
class BCRound:
    x: tuple
    a: tuple
    A: int
    y: tuple
    b: tuple
    revealed_x: tuple
    revealed_a: tuple
    boxes_ok: bool
    parity_ok: bool
    sum_ok: bool

    @property
    def accepted(self) -> bool:
        return self.boxes_ok and self.parity_ok and self.sum_ok


@dataclass(frozen=True)
class Transcript:
    c: int
    n: int
    k: int
    seed: int
    rounds: tuple

    @property
    def accepted(self) -> bool:
        return all(r.accepted for r in self.rounds)

    def bob_commit_view(self) -> list[tuple]:
        """What Bob holds before the reveal: his inputs, outputs and each A."""
        return [(r.y, r.b, r.A) for r in self.rounds]


def _check(x, a, A, y, b, c):
    boxes_ok = all((ai ^ bi) == (xi & yi) for xi, ai, yi, bi in zip(x, a, y, b))
    return boxes_ok, commit_parity_ok(x, c), _parity(a) == A


def bc_honest_run(c: int, n: int, k: int, seed: int = 0,
                  tamper: Callable[[tuple], tuple] | None = None) -> Transcript:
    """One seeded execution; ``tamper`` rewrites the revealed x of every round.

    Bob accepts only if in every round each box satisfies
    ``a_i ^ b_i == x_i y_i``, the revealed x has the right parity for c,
    and the revealed outputs XOR to the announced A.
    """
    rng = random.Random(seed)
    rounds = []
    for _ in range(k):
        x = rng.choice(honest_commit_strings(n, c))
        y = tuple(rng.randint(0, 1) for _ in x)
        a = tuple(rng.randint(0, 1) for _ in x)
        b = tuple(ai ^ (xi & yi) for ai, xi, yi in zip(a, x, y))
        A = _parity(a)
        rx = tamper(x) if tamper else x
        rounds.append(BCRound(x, a, A, y, b, rx, a, *_check(rx, a, A, y, b, c)))
    return Transcript(c, n, k, seed, tuple(rounds))


def _round_branches(n: int, c: int):
    """Honest commit branches: (weight, x, a, y, b) over Alice's x, box coins and Bob's y."""
    xs = honest_commit_strings(n, c)
    size = 2 * n + 1
    w = Fraction(1, len(xs) * 2 ** size * 2 ** size)
    for x in xs:
        for a in product(BITS, repeat=size):
            for y in product(BITS, repeat=size):
                b = tuple(ai ^ (xi & yi) for ai, xi, yi in zip(a, x, y))
                yield w, x, a, y, b


def bc_accept_probability(c: int, n: int, k: int,
                          tamper: Callable[[tuple], tuple] | None = None) -> Fraction:
    """Exact probability Bob accepts when Alice reveals (possibly tampered) honestly."""
    _cap(n, k)
    per_round = Fraction(0)
    for w, x, a, y, b in _round_branches(n, c):
        rx = tamper(x) if tamper else x
        if all(_check(rx, a, _parity(a), y, b, c)):
            per_round += w
    return per_round ** k


def _cap(n, k):
    if n > BC_CAP_N or k > BC_CAP_K or n < 1 or k < 0:
        raise TooLarge(f"(n, k) = ({n}, {k}) outside the enumeration cap n <= {BC_CAP_N}, k <= {BC_CAP_K}")


@lru_cache(maxsize=None)
def _bob_likelihoods(n: int, y: tuple) -> tuple:
    """Distinct likelihood pairs ``(P(view | c=0), P(view | c=1))`` with multiplicity folded in.

    Bob's view of a round is ``(b, A)``; views with identical likelihood
    pairs are merged, which leaves the optimal guessing value unchanged.
    """
    per_view = defaultdict(lambda: [Fraction(0), Fraction(0)])
    size = 2 * n + 1
    for c in BITS:
        xs = honest_commit_strings(n, c)
        w = Fraction(1, len(xs) * 2 ** size)
        for x in xs:
            for a in product(BITS, repeat=size):
                b = tuple(ai ^ (xi & yi) for ai, xi, yi in zip(a, x, y))
                per_view[b, _parity(a)][c] += w
    merged = defaultdict(lambda: [Fraction(0), Fraction(0)])
    counts = defaultdict(int)
    for p0, p1 in per_view.values():
        counts[p0, p1] += 1
    for (p0, p1), m in counts.items():
        merged[p0, p1] = [m * p0, m * p1]
    return tuple((p0, p1) for p0, p1 in merged.values())


def bc_hiding_advantage(n: int, k: int) -> Fraction:
    """Bob's best probability of guessing c before the reveal.

    Bob may choose each round's y adaptively from earlier views; the
    optimum is computed by exact dynamic programming over his unnormalized
    posterior, maximizing over y at every round and guessing the likelier
    bit at the end.  ``k = 0`` gives 1/2.
    """
    _cap(n, k)
    ys = list(product(BITS, repeat=2 * n + 1))

    @lru_cache(maxsize=None)
    def value(rounds, w0, w1):
        if rounds == 0:
            return max(w0, w1)
        return max(sum((value(rounds - 1, w0 * p0, w1 * p1) for p0, p1 in _bob_likelihoods(n, y)),
                       Fraction(0))
                   for y in ys)

    return value(k, Fraction(1, 2), Fraction(1, 2))


def bc_binding_advantage(n: int, k: int, flip: bool = True) -> Fraction:
    """Best probability that an honestly committed Alice opens the other bit.

    Alice commits honestly to ``c``; at reveal time she may send any
    ``(x', a')`` as a function of her view ``(x, a, A)``.  Bob's y is
    unknown to her, so each position contributes a factor: an unchanged
    ``x_i`` passes iff ``a'_i == a_i``, a changed one passes with chance
    1/2 (for the right guess of ``a'_i``).  Rounds use independent boxes
    and coins, so the k-round optimum is the product of per-round optima.
    With ``flip=False`` she opens the committed bit instead.
    """
    _cap(n, k)
    size = 2 * n + 1
    best_total = Fraction(0)
    count = 0
    for c in BITS:
        target = 1 - c if flip else c
        for x in honest_commit_strings(n, c):
            for a in product(BITS, repeat=size):
                A = _parity(a)
                best = Fraction(0)
                for d in product(BITS, repeat=size):      # positions she changes
                    rx = tuple(xi ^ di for xi, di in zip(x, d))
                    if not commit_parity_ok(rx, target):
                        continue
                    for e in product(BITS, repeat=size):  # output bits she changes
                        ra = tuple(ai ^ ei for ai, ei in zip(a, e))
                        if _parity(ra) != A:
                            continue
                        p = Fraction(1)
                        for di, ei in zip(d, e):
                            if di:
                                p /= 2
                            elif ei:
                                p = Fraction(0)
                                break
                        best = max(best, p)
                best_total += best
                count += 1
    return (best_total / count) ** k


def hiding_reference(n: int, k: int) -> Fraction:
    return Fraction(1, 2) + Fraction(k, 2 ** (n + 1))


def binding_reference(k: int) -> Fraction:
    """Reference curve ``1/2 + 1/2**(k-1)``; exceeds 1 for k = 1."""
    return Fraction(1, 2) + Fraction(2, 2 ** k)
