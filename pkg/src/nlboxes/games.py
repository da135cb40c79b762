"""Two-player non-local games: classical, trivial and (for XOR games) quantum values.

Classical values are exact rationals by enumeration.  Quantum values are
only computed for XOR games, through the unit-vector form of the bias, by
alternating maximization with random restarts.  The result is always a
feasible point and hence a lower bound on the true quantum value.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Callable, Mapping

import numpy as np

from .boxcore import rat
from .errors import BadParam, DegenerateGame, TooLarge

ENUMERATION_CAP = 1 << 20


@dataclass(frozen=True)
class GameBounds:
    kg_low: float = 1.6769
    kg_high: float = math.pi / (2 * math.log(1 + math.sqrt(2)))
    gamma1: float = 1.1382
    gamma2: float = 0.74202


BOUNDS = GameBounds()


@dataclass(frozen=True)
class Game:
    """General game; ``prior[x, y]`` and ``predicate[a, b, x, y]`` in {0, 1}."""
    X: int
    Y: int
    A: int
    B: int
    prior: Mapping
    predicate: Mapping

    def __post_init__(self):
        total = Fraction(0)
        for x, y in product(range(self.X), range(self.Y)):
            p = rat(self.prior.get((x, y), 0))
            if p < 0:
                raise BadParam(f"negative prior at {(x, y)}")
            total += p
        if total != 1:
            raise BadParam(f"prior sums to {total}")

    def pi(self, x, y) -> Fraction:
        return rat(self.prior.get((x, y), 0))

    def wins(self, a, b, x, y) -> int:
        return int(self.predicate.get((a, b, x, y), 0))


@dataclass(frozen=True)
class XorGame:
    """XOR game; ``predicate[c, x, y]`` says whether answer parity ``c`` wins."""
    X: int
    Y: int
    prior: Mapping
    predicate: Mapping

    def __post_init__(self):
        Game(self.X, self.Y, 2, 2, self.prior, {})

    def pi(self, x, y) -> Fraction:
        return rat(self.prior.get((x, y), 0))

    def wins(self, c, x, y) -> int:
        return int(self.predicate.get((c, x, y), 0))

    def to_game(self) -> Game:
        pred = {(a, b, x, y): self.wins(a ^ b, x, y)
                for a, b, x, y in product((0, 1), (0, 1), range(self.X), range(self.Y))}
        return Game(self.X, self.Y, 2, 2, dict(self.prior), pred)


def xor_game(X: int, Y: int, prior: Callable | Mapping, predicate: Callable) -> XorGame:
    if callable(prior):
        prior = {(x, y): rat(prior(x, y)) for x, y in product(range(X), range(Y))}
    pred = {(c, x, y): int(predicate(c, x, y)) for c, x, y in product((0, 1), range(X), range(Y))}
    return XorGame(X, Y, dict(prior), pred)


def uniform_prior(X: int, Y: int) -> dict:
    return {(x, y): Fraction(1, X * Y) for x, y in product(range(X), range(Y))}


def chsh_game() -> XorGame:
    return xor_game(2, 2, uniform_prior(2, 2), lambda c, x, y: c == (x & y))


def classical_value(game: Game | XorGame) -> Fraction:
    """Exact optimum over deterministic strategies.

    Alice's strategies are enumerated; Bob's best response is computed
    answer by answer, which is the same maximum as enumerating pairs.
    """
    if isinstance(game, XorGame):
        game = game.to_game()
    if game.A ** game.X * game.B ** game.Y > ENUMERATION_CAP:
        raise TooLarge(f"{game.A}^{game.X} * {game.B}^{game.Y} strategies exceeds the cap")
    best = None
    for alice in product(range(game.A), repeat=game.X):
        total = Fraction(0)
        for y in range(game.Y):
            total += max(sum((game.pi(x, y) * game.wins(alice[x], b, x, y) for x in range(game.X)),
                             Fraction(0))
                         for b in range(game.B))
        if best is None or total > best:
            best = total
    return best


def trivial_value(game: XorGame) -> Fraction:
    return Fraction(1, 2) * sum(game.pi(x, y) * game.wins(c, x, y)
                                for c, x, y in product((0, 1), range(game.X), range(game.Y)))


def _bias_matrix(game: XorGame):
    m = np.zeros((game.X, game.Y))
    base = 0.0
    for x, y in product(range(game.X), range(game.Y)):
        p = float(game.pi(x, y))
        m[x, y] = p * (game.wins(0, x, y) - game.wins(1, x, y))
        base += p * (game.wins(0, x, y) + game.wins(1, x, y)) / 2
    return m, base


def xor_quantum_value(game: XorGame, restarts: int = 200, tol: float = 1e-10,
                      max_sweeps: int = 10000, seed: int = 0, cap: int = 64) -> float:
    """Best winning probability found over unit-vector strategies.

    Maximizes ``sum_xy M[x, y] <u_x, v_y>`` by alternately setting each
    ``u_x`` to the normalized ``sum_y M[x, y] v_y`` and symmetrically for
    ``v``.  Vectors live in dimension ``min(X, Y)``, which is enough for
    the optimum.
    """
    if max(game.X, game.Y) > cap:
        raise TooLarge(f"alphabets {game.X}x{game.Y} exceed cap {cap}")
    m, base = _bias_matrix(game)
    if not m.any():
        return base
    dim = min(game.X, game.Y)
    rng = np.random.default_rng(seed)

    def normalize(rows):
        norms = np.linalg.norm(rows, axis=1)
        out = np.zeros_like(rows)
        out[:, 0] = 1.0  # rows of zeros: the question never matters
        live = norms > 0
        out[live] = rows[live] / norms[live, None]
        return out

    best = -np.inf
    for _ in range(restarts):
        v = normalize(rng.standard_normal((game.Y, dim)))
        prev = -np.inf
        for _ in range(max_sweeps):
            u = normalize(m @ v)
            v = normalize(m.T @ u)
            bias = float(np.sum(m * (u @ v.T)))
            if bias - prev < tol:
                break
            prev = bias
        best = max(best, bias)
    return base + best / 2


def grothendieck_ratio(game: XorGame, **solver) -> float:
    wc, tau = classical_value(game), trivial_value(game)
    if wc == tau:
        raise DegenerateGame("classical value equals trivial value")
    return (xor_quantum_value(game, **solver) - float(tau)) / float(wc - tau)


def quantum_bound(wc) -> float:
    """Upper bound on the quantum value of an XOR game from its classical value."""
    wc = float(wc)
    if wc <= BOUNDS.gamma2:
        return BOUNDS.gamma1 * wc
    return math.sin(math.pi / 2 * wc) ** 2


def check_quantum_bound(game: XorGame, slack: float = 1e-6, **solver) -> bool:
    return xor_quantum_value(game, **solver) <= quantum_bound(classical_value(game)) + slack


def nlc_game(f: Callable | Mapping, m: int) -> XorGame:
    """Non-local computation of ``f`` on ``m`` bits: win iff ``a ^ b == f(x ^ y)``.

    Inputs are m-bit integers; the prior is uniform over all pairs.
    """
    table = f if not callable(f) else {z: int(f(z)) for z in range(2 ** m)}
    size = 2 ** m
    return xor_game(size, size, uniform_prior(size, size),
                    lambda c, x, y: c == table[x ^ y])


def random_xor_game(rng: random.Random, max_inputs: int = 4) -> XorGame:
    """Uniform prior on a random non-empty support; fair-coin predicate bits."""
    X, Y = rng.randint(2, max_inputs), rng.randint(2, max_inputs)
    cells = list(product(range(X), range(Y)))
    support = [c for c in cells if rng.random() < 0.75] or [rng.choice(cells)]
    prior = {c: Fraction(1, len(support)) for c in support}
    pred = {(c, x, y): rng.randint(0, 1) for c in (0, 1) for x, y in cells}
    return XorGame(X, Y, prior, pred)


@dataclass(frozen=True)
class GameReport:
    classical: Fraction
    trivial: Fraction
    quantum: float
    ratio: float | None
    quantum_bound: float
    bound_holds: bool


def analyze_xor_game(game: XorGame, **solver) -> GameReport:
    wc, tau = classical_value(game), trivial_value(game)
    wq = xor_quantum_value(game, **solver)
    ratio = None if wc == tau else (wq - float(tau)) / float(wc - tau)
    bound = quantum_bound(wc)
    return GameReport(wc, tau, wq, ratio, bound, wq <= bound + 1e-6)


def gamma_equation_residuals(gamma1: float = BOUNDS.gamma1, gamma2: float = BOUNDS.gamma2):
    """Residuals of ``pi/2 sin(pi g2) = sin^2(pi g2 / 2) / g2 = g1``."""
    lhs = math.pi / 2 * math.sin(math.pi * gamma2)
    mid = math.sin(math.pi / 2 * gamma2) ** 2 / gamma2
    return lhs - gamma1, mid - gamma1
