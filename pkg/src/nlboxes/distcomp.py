"""Distributed computation of Boolean functions with PR boxes.

Variables are numbered globally: party 0 owns bits ``0..k0-1``, party 1 the
next ``k1`` bits, and so on.  An input assignment is an integer whose bit
``i`` is variable ``i``; a monomial is the bitmask of its variables.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from itertools import product
from typing import Callable, Sequence

from .boxcore import BITS, Box, pr_box, rat
from .errors import ArityTooLarge, BadParam

MAX_PARTIES = 4
MAX_DEGREE = 4


@dataclass(frozen=True)
class BoolFn:
    arities: tuple
    table: tuple  # table[z] for every input assignment z

    def __post_init__(self):
        if len(self.table) != 2 ** self.nvars:
            raise BadParam(f"table length {len(self.table)} != 2**{self.nvars}")

    @property
    def nvars(self) -> int:
        return sum(self.arities)

    def offsets(self) -> list[int]:
        out, acc = [], 0
        for k in self.arities:
            out.append(acc)
            acc += k
        return out

    def party_mask(self, p: int) -> int:
        return ((1 << self.arities[p]) - 1) << self.offsets()[p]

    def join(self, parts: Sequence[int]) -> int:
        """Combine per-party inputs (each an int of that party's width)."""
        return sum(v << off for v, off in zip(parts, self.offsets()))

    def __call__(self, *parts: int) -> int:
        return self.table[self.join(parts)]

    @classmethod
    def from_callable(cls, arities: Sequence[int], fn: Callable) -> BoolFn:
        arities = tuple(arities)
        probe = cls(arities, (0,) * 2 ** sum(arities))
        table = []
        for z in range(2 ** sum(arities)):
            parts = [(z >> off) & ((1 << k) - 1) for off, k in zip(probe.offsets(), arities)]
            table.append(int(fn(*parts)) & 1)
        return cls(arities, tuple(table))

    @classmethod
    def from_hex(cls, text: str, arities: Sequence[int]) -> BoolFn:
        """Truth table as hex, most significant digit first; bit z is f(z)."""
        n = sum(arities)
        value = int(text, 16)
        if value >> (2 ** n):
            raise BadParam(f"hex table {text} is wider than 2**{n} bits")
        return cls(tuple(arities), tuple((value >> z) & 1 for z in range(2 ** n)))

    def to_hex(self) -> str:
        value = sum(bit << z for z, bit in enumerate(self.table))
        return format(value, "0{}x".format(max(1, 2 ** self.nvars // 4)))


def bipartite(nx: int, ny: int, fn: Callable) -> BoolFn:
    return BoolFn.from_callable((nx, ny), fn)


# ------------------------------------------------------------------------ ANF

def anf(f: BoolFn) -> frozenset:
    """Monomials (as variable bitmasks) of the algebraic normal form."""
    coeffs = list(f.table)
    n = f.nvars
    for i in range(n):
        step = 1 << i
        for z in range(2 ** n):
            if z & step:
                coeffs[z] ^= coeffs[z ^ step]
    return frozenset(z for z, c in enumerate(coeffs) if c)


def eval_monomials(monomials, z: int) -> int:
    acc = 0
    for mono in monomials:
        if z & mono == mono:
            acc ^= 1
    return acc


@dataclass(frozen=True)
class FactoredForm:
    """``f(x, y) = XOR_T P_T(x) * y^T`` with ``P_T`` given by x-monomials.

    ``terms`` holds ``(x_monomials, y_mask)`` pairs with ``y_mask`` a mask of
    y variables in the joint numbering.
    """
    nx: int
    ny: int
    terms: tuple

    def p(self, i: int, x: int) -> int:
        return eval_monomials(self.terms[i][0], x)

    def q(self, i: int, y: int) -> int:
        mask = self.terms[i][1] >> self.nx
        return int(y & mask == mask)

    def evaluate(self, x: int, y: int) -> int:
        acc = 0
        for i in range(len(self.terms)):
            acc ^= self.p(i, x) & self.q(i, y)
        return acc


def factor_bipartite(f: BoolFn) -> FactoredForm:
    """Group ANF monomials by their y-part: at most ``2**ny`` terms."""
    if len(f.arities) != 2:
        raise BadParam("factor_bipartite needs a two-party function")
    nx, ny = f.arities
    xmask = (1 << nx) - 1
    groups: dict[int, set] = {}
    for mono in anf(f):
        groups.setdefault(mono & ~xmask, set()).symmetric_difference_update({mono & xmask})
    terms = tuple((frozenset(xs), ymono) for ymono, xs in sorted(groups.items()) if xs)
    return FactoredForm(nx, ny, terms)


# ------------------------------------------------------------------- van Dam

@lru_cache(maxsize=64)
def _support(box: Box) -> dict:
    """Non-zero outcomes of each input pair: ``{(u, v): [(a, b, p), ...]}``."""
    return {(u, v): [(a, b, box.p(a, b, u, v)) for a, b in product(BITS, repeat=2)
                     if box.p(a, b, u, v)]
            for u, v in product(BITS, repeat=2)}


def _convolve(state: dict, column: list) -> dict:
    out: dict = {}
    for (a, b), w in state.items():
        for ai, bi, p in column:
            key = (a ^ ai, b ^ bi)
            if key in out:
                out[key] += w * p
            else:
                out[key] = w * p
    return out


def van_dam_run(f: BoolFn | FactoredForm, x: int, y: int, box: Box | None = None) -> dict:
    """Exact distribution of Alice's and Bob's outputs ``(a, b)``.

    Term ``i`` uses its own box with inputs ``P_i(x)`` and ``Q_i(y)``;
    each party outputs the parity of its box outcomes.  The joint
    distribution is accumulated box by box over all outcome branches.
    """
    form = f if isinstance(f, FactoredForm) else factor_bipartite(f)
    support = _support(pr_box() if box is None else box)
    state = {(0, 0): Fraction(1)}
    for i in range(len(form.terms)):
        state = _convolve(state, support[form.p(i, x), form.q(i, y)])
    return state


def van_dam_success(f: BoolFn, x: int, y: int, box: Box | None = None) -> Fraction:
    """Probability that ``a ^ b == f(x, y)``."""
    target = f(x, y)
    return sum((w for (a, b), w in van_dam_run(f, x, y, box).items() if a ^ b == target),
               Fraction(0))


def noisy_parity_success(m: int, p) -> Fraction:
    """Chance that the parity of m independent boxes, each right w.p. p, is right."""
    p = rat(p)
    return (1 + (2 * p - 1) ** m) / 2


def chsh_of_success(p):
    """CHSH value of an isotropic box whose success probability is ``p``."""
    return 8 * p - 4


@dataclass(frozen=True)
class BccWitness:
    threshold_success: object  # sympy expression (3 + sqrt 6)/6
    chsh_squared: Fraction
    value: float


def bcc_constant() -> tuple[float, BccWitness]:
    """``4*sqrt(2/3)`` and an exact check that it is the CHSH of the success threshold."""
    import sympy

    p = (3 + sympy.sqrt(6)) / 6
    squared = sympy.nsimplify(sympy.expand(chsh_of_success(p) ** 2))
    if squared != sympy.Rational(32, 3):
        raise AssertionError(f"(8p - 4)^2 simplified to {squared}")
    value = float(4 * sympy.sqrt(sympy.Rational(2, 3)))
    return value, BccWitness(p, Fraction(int(squared.p), int(squared.q)), value)


# ---------------------------------------------------------- multi-party boxes

@dataclass(frozen=True)
class BoxUse:
    """One PR box: ``left`` party feeds share ``share``; ``right`` feeds its factor."""
    left: int
    right: int
    share: int          # index of the share consumed on the left
    factor: int         # monomial mask evaluated by the right party
    out_left: int       # share index created at left
    out_right: int      # share index created at right


@dataclass(frozen=True)
class ShareCircuit:
    """Straight-line circuit of local factors and PR boxes.

    ``seeds`` are shares computed locally: ``(share index, party, mask)``
    evaluating a monomial of the party's own variables.  Output of each
    party is the XOR of the live shares it owns (shares fed into a box are
    spent), plus the constant term at party 0.
    """
    f: BoolFn
    seeds: tuple
    boxes: tuple
    owners: tuple      # owners[i] = party holding share i
    live: tuple
    constant: int

    @property
    def box_count(self) -> int:
        return len(self.boxes)


def share_circuit(f: BoolFn) -> ShareCircuit:
    """Compile ``f`` into XOR shares of its ANF monomials.

    A monomial touching parties ``p1 < p2 < ...`` starts as one share at
    ``p1`` (its local factor).  Multiplying by the next party's factor
    spends one PR box per existing share and doubles the share count, so a
    monomial over k parties uses ``2**(k-1) - 1`` boxes.
    """
    n = len(f.arities)
    if n > MAX_PARTIES:
        raise ArityTooLarge(f"{n} parties exceeds cap {MAX_PARTIES}")
    seeds, boxes, owners, live = [], [], [], []
    constant = 0
    for mono in sorted(anf(f)):
        if mono == 0:
            constant ^= 1
            continue
        parts = [(p, mono & f.party_mask(p)) for p in range(n) if mono & f.party_mask(p)]
        if bin(mono).count("1") > MAX_DEGREE:
            raise ArityTooLarge(f"monomial degree {bin(mono).count('1')} exceeds cap {MAX_DEGREE}")
        first, mask = parts[0]
        seeds.append((len(owners), first, mask))
        current = [len(owners)]
        owners.append(first)
        for party, factor in parts[1:]:
            nxt = []
            for s in current:
                left_idx, right_idx = len(owners), len(owners) + 1
                owners += [owners[s], party]
                boxes.append(BoxUse(owners[s], party, s, factor, left_idx, right_idx))
                nxt += [left_idx, right_idx]
            current = nxt
        live += current
    return ShareCircuit(f, tuple(seeds), tuple(boxes), tuple(owners), tuple(live), constant)


def _run_circuit(circ: ShareCircuit, z: int, box_bits: Sequence[int], rand_bits: Sequence[int]):
    shares = [0] * len(circ.owners)
    for idx, _, mask in circ.seeds:
        shares[idx] = int(z & mask == mask)
    for use, alpha in zip(circ.boxes, box_bits):
        v = int(z & use.factor == use.factor)
        shares[use.out_left] = alpha
        shares[use.out_right] = alpha ^ (shares[use.share] & v)
    n = len(circ.f.arities)
    outs = [0] * n
    for i in circ.live:
        outs[circ.owners[i]] ^= shares[i]
    outs[0] ^= circ.constant
    # fresh XOR-shares of zero from shared randomness make every marginal uniform
    last = 0
    for r in rand_bits:
        last ^= r
    pad = list(rand_bits) + [last]
    return tuple(o ^ p for o, p in zip(outs, pad))


def bp_simulate(f: BoolFn) -> dict:
    """Exact table ``{(outputs, inputs): probability}`` of the simulated box.

    Every PR-box outcome branch (``alpha`` uniform, partner gets
    ``alpha ^ uv``) and every shared random pad is enumerated.
    """
    circ = share_circuit(f)
    n = len(f.arities)
    nb = circ.box_count
    weight = Fraction(1, 2 ** (nb + n - 1))
    table: dict = {}
    for z in range(2 ** f.nvars):
        inputs = tuple((z >> off) & ((1 << k) - 1) for off, k in zip(f.offsets(), f.arities))
        for outs in product(BITS, repeat=n):
            table[outs, inputs] = Fraction(0)
        for box_bits in product(BITS, repeat=nb):
            for rand_bits in product(BITS, repeat=n - 1):
                outs = _run_circuit(circ, z, box_bits, rand_bits)
                table[outs, inputs] += weight
    return table


def bp_target(f: BoolFn) -> dict:
    n = len(f.arities)
    table = {}
    for z in range(2 ** f.nvars):
        inputs = tuple((z >> off) & ((1 << k) - 1) for off, k in zip(f.offsets(), f.arities))
        for outs in product(BITS, repeat=n):
            parity = 0
            for o in outs:
                parity ^= o
            table[outs, inputs] = Fraction(1, 2 ** (n - 1)) if parity == f.table[z] else Fraction(0)
    return table


def multiparty_nonsignalling(table: dict, arities: Sequence[int]) -> bool:
    """Marginal of every subset of parties ignores the other parties' inputs."""
    n = len(arities)
    input_space = list(product(*[range(2 ** k) for k in arities]))
    for keep in product(BITS, repeat=n):
        kept = [i for i in range(n) if keep[i]]
        seen: dict = {}
        for inputs in input_space:
            marg: dict = {}
            for outs in product(BITS, repeat=n):
                key = tuple(outs[i] for i in kept)
                marg[key] = marg.get(key, 0) + table[outs, inputs]
            ctx = tuple(inputs[i] for i in kept)
            if ctx in seen and seen[ctx] != marg:
                return False
            seen.setdefault(ctx, marg)
    return True


def broadcast_protocol(f: BoolFn, z: int, box_bits, rand_bits) -> tuple[int, int]:
    """Everyone sends their output to party 0, which XORs them.

    Returns the computed value and the number of one-bit messages sent.
    """
    outs = _run_circuit(share_circuit(f), z, box_bits, rand_bits)
    value = 0
    for o in outs:
        value ^= o
    return value, len(outs) - 1
