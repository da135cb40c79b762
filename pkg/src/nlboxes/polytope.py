"""Local and non-signalling polytopes of two-input two-output boxes.

Locality is decided two ways that are meant to be cross-checked: an exact
LP over the 16 deterministic vertices, and the CHSH criterion.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Mapping, Sequence

from .boxcore import (BITS, RELABEL_GROUP, Box, Relabel, chsh, chsh_expression,
                      correlator, is_nonsignalling, isotropic_box, local_vertices,
                      make_box, mix, nonlocal_vertices, relabel)
from .errors import SignallingInput
from .exactlp import affine_dimension, convex_combination, rank

LOCAL_LABELS = tuple(product(BITS, repeat=4))
NONLOCAL_LABELS = tuple(product(BITS, repeat=3))


def _require_ns(box: Box):
    report = is_nonsignalling(box)
    if not report.ok:
        raise SignallingInput(f"box is signalling: {report.witness}")


@dataclass(frozen=True)
class VertexSet:
    vertices: tuple
    labels: tuple  # ("local", (alpha, beta, gamma, delta)) or ("nonlocal", (alpha, beta, gamma))


def vertex_set() -> VertexSet:
    verts = tuple(local_vertices()) + tuple(nonlocal_vertices())
    labels = (tuple(("local", t) for t in LOCAL_LABELS)
              + tuple(("nonlocal", t) for t in NONLOCAL_LABELS))
    return VertexSet(verts, labels)


@dataclass(frozen=True)
class LocalDecomposition:
    """Convex weights over the deterministic vertices, keyed by (alpha, beta, gamma, delta)."""
    weights: Mapping

    def reconstruct(self) -> Box:
        labels = list(self.weights)
        return mix([local_vertices()[LOCAL_LABELS.index(t)] for t in labels],
                   [self.weights[t] for t in labels])

    def support(self) -> dict:
        return {t: w for t, w in self.weights.items() if w}


def local_decompose(box: Box) -> LocalDecomposition | None:
    """Exact LP feasibility over the 16 deterministic boxes.

    Any feasible certificate is valid; the one returned is the basic
    solution Bland's rule reaches first, so it is reproducible.
    """
    _require_ns(box)
    weights = convex_combination([v.table for v in local_vertices()], box.table)
    if weights is None:
        return None
    return LocalDecomposition(dict(zip(LOCAL_LABELS, weights)))


def is_local(box: Box) -> bool:
    _require_ns(box)
    return chsh(box) <= 2


def is_extreme(points: Sequence[Box], i: int) -> bool:
    """True if ``points[i]`` is not a convex combination of the others."""
    others = [p.table for k, p in enumerate(points) if k != i]
    return convex_combination(others, points[i].table) is None


# ------------------------------------------------------------ quantum tests

@dataclass(frozen=True)
class QuantumTestReport:
    arcsin_sums: tuple
    passed: bool
    tolerance: float


def arcsin_sums(correlators: Mapping) -> tuple:
    """The four ``asin X_xy + asin X_xy' + asin X_x'y - asin X_x'y'`` values.

    ``correlators`` maps (x, y) to a number in [-1, 1]; order of the result
    follows (x, y) = 00, 01, 10, 11.
    """
    s = {k: math.asin(max(-1.0, min(1.0, float(v)))) for k, v in correlators.items()}
    out = []
    for x, y in product(BITS, repeat=2):
        xb, yb = 1 - x, 1 - y
        out.append(s[x, y] + s[x, yb] + s[xb, y] - s[xb, yb])
    return tuple(out)


def arcsin_test_correlators(correlators: Mapping, tol: float = 1e-9) -> QuantumTestReport:
    sums = arcsin_sums(correlators)
    return QuantumTestReport(sums, all(abs(v) <= math.pi + tol for v in sums), tol)


def quantum_arcsin_test(box: Box, tol: float = 1e-9) -> QuantumTestReport:
    _require_ns(box)
    xs = {(x, y): correlator(box, x, y) for x, y in product(BITS, repeat=2)}
    return arcsin_test_correlators(xs, tol)


def tsirelson_test(box: Box) -> bool:
    """``CHSH <= 2*sqrt(2)``, decided exactly by squaring.  Necessary only."""
    return chsh(box) ** 2 <= 8


def classify(box: Box) -> str:
    if not is_nonsignalling(box).ok:
        return "Signalling"
    if chsh(box) <= 2:
        return "Local"
    if quantum_arcsin_test(box).passed:
        return "QuantumConsistent"
    return "SuperQuantumNS"


# ---------------------------------------------------------------- dimensions

def ns_constraint_rows(outputs: Sequence[int], inputs: Sequence[int]) -> list[list[int]]:
    """Normalization and non-signalling rows over a full probability table.

    Columns are indexed by ``product(*ranges(outputs), *ranges(inputs))``.
    For every party the joint marginal of the others must not depend on its
    input; for two parties this is the usual pair of marginal conditions.
    """
    keys = list(product(*[range(d) for d in list(outputs) + list(inputs)]))
    col = {k: i for i, k in enumerate(keys)}
    n = len(outputs)
    rows = []
    for ins in product(*[range(d) for d in inputs]):
        row = [0] * len(keys)
        for outs in product(*[range(d) for d in outputs]):
            row[col[outs + ins]] = 1
        rows.append(row)
    for p in range(n):
        others_out = [range(d) for q, d in enumerate(outputs) if q != p]
        others_in = [range(d) for q, d in enumerate(inputs) if q != p]
        for oo in product(*others_out):
            for oi in product(*others_in):
                for i0 in range(1, inputs[p]):
                    row = [0] * len(keys)
                    for op in range(outputs[p]):
                        outs = oo[:p] + (op,) + oo[p:]
                        row[col[outs + oi[:p] + (0,) + oi[p:]]] += 1
                        row[col[outs + oi[:p] + (i0,) + oi[p:]]] -= 1
                    rows.append(row)
    return rows


def ns_dimension_general(outputs: Sequence[int], inputs: Sequence[int]) -> int:
    unknowns = math.prod(outputs) * math.prod(inputs)
    return unknowns - rank(ns_constraint_rows(outputs, inputs))


def ns_dimension() -> int:
    return ns_dimension_general((2, 2), (2, 2))


def local_affine_dimension() -> int:
    return affine_dimension([v.table for v in local_vertices()])


# ------------------------------------------------------------ depolarization

def depolarize(box: Box) -> Box:
    """Twirl over the 8 shared random bits (alpha, beta, gamma).

    The result is isotropic and keeps ``X00 + X01 + X10 - X11`` exactly.
    """
    _require_ns(box)

    def entry(a, b, x, y):
        total = Fraction(0)
        for al, be, ga in product(BITS, repeat=3):
            total += box.p(a ^ (be & x) ^ (al & be) ^ ga, b ^ (al & y) ^ ga, x ^ al, y ^ be)
        return total / 8
    return make_box(entry)


def canonicalize(box: Box) -> tuple[Box, Relabel]:
    """Relabel so the CHSH-maximizing combination sits at the canonical slot."""
    target = chsh(box)
    for r in RELABEL_GROUP:
        moved = relabel(box, r)
        if chsh_expression(moved) == target:
            return moved, r
    raise AssertionError("no relabeling reaches the canonical slot")  # group is transitive on slots


def isotropic_parameter(box: Box) -> Fraction | None:
    """``eps`` if ``box == P_eps``, else None."""
    eps = (correlator(box, 0, 0) + 1) / 2
    if 0 <= eps <= 1 and isotropic_box(eps) == box:
        return eps
    return None


# ------------------------------------------------------------------ sampling

def random_ns_box(rng: random.Random, max_weight: int = 12) -> Box:
    """A random rational point of the non-signalling polytope.

    Mixes a random subset of the 24 vertices with small integer weights, so
    denominators stay modest and boundary boxes show up now and then.
    """
    verts = vertex_set().vertices
    k = rng.randint(1, 6)
    chosen = rng.sample(range(len(verts)), k)
    raw = [rng.randint(1, max_weight) for _ in chosen]
    total = sum(raw)
    return mix([verts[i] for i in chosen], [Fraction(w, total) for w in raw])
