"""Acceptance criteria 1-11.

Each ``check_N`` returns ``(ok, detail)``; the pytest wrappers record a
PASS/FAIL line per criterion (printed in the terminal summary) and then
assert.  Running this file directly prints the same lines.
"""
import math
import random
import time
from fractions import Fraction as F
from itertools import product

from nlboxes.boxcore import (anti_pr_box, chsh, correlated_nonlocal_box, equivalent,
                             is_nonsignalling, isotropic_box, local_vertices, nonlocal_vertices,
                             pr_box)
from nlboxes.crypto import (bc_accept_probability, bc_binding_advantage, bc_hiding_advantage,
                            hiding_reference, ot_correctness, ot_privacy_report,
                            ot_reduction_attack)
from nlboxes.distcomp import BoolFn, bp_simulate, bp_target, van_dam_success
from nlboxes.games import (check_quantum_bound, chsh_game, classical_value, grothendieck_ratio,
                           nlc_game, random_xor_game, trivial_value, xor_quantum_value)
from nlboxes.multigen import (compose_coprime, d_output_vertex, project_mod, tri_dimension,
                              tri_fully_local, tri_nonsignalling, tri_parity_box, tri_product,
                              tri_two_way_local)
from nlboxes.polytope import (arcsin_test_correlators, is_extreme, local_decompose,
                              ns_dimension, quantum_arcsin_test, random_ns_box, vertex_set)
from nlboxes.wiring import (bs2, bs_formula, compose, correlated_parameter, exceeds_bcc, fww,
                            fww_formula, iterate_bs, max_chsh_over_wirings)

RANDOM_BOX_SEED = 1
RANDOM_GAME_SEED = 7
VAN_DAM_SEED = 3


class Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start


def check_1():
    with Timer() as t:
        ok = chsh(pr_box()) == 4 and chsh(anti_pr_box()) == 4
        ok &= all(chsh(correlated_nonlocal_box(e)) == 2 * (e + 1)
                  for e in (F(1, 8), F(1, 4), F(1, 2), F(3, 4)))
        ok &= all(chsh(isotropic_box(F(k, 16))) == abs(8 * F(k, 16) - 4) for k in range(17))
    return ok and t.elapsed < 1, f"exact CHSH ground truths, {t.elapsed:.3f}s"


def check_2():
    with Timer() as t:
        verts = vertex_set().vertices
        dims = (ns_dimension(), tri_dimension())
        ns_ok = all(is_nonsignalling(v).ok for v in verts)
        extreme = all(is_extreme(verts, i) for i in range(len(verts)))
        loc, nl = local_vertices(), nonlocal_vertices()
        within = (all(equivalent(loc[0], v) is not None for v in loc)
                  and all(equivalent(nl[0], v) is not None for v in nl))
        cross = any(equivalent(u, v) is not None for u in loc for v in nl)
    ok = dims == (8, 26) and ns_ok and extreme and within and not cross and t.elapsed < 30
    return ok, (f"dims={dims} vertices_ns={ns_ok} all_extreme={extreme} classes={within} "
                f"cross_class={cross}, {t.elapsed:.1f}s")


def check_3():
    rng = random.Random(RANDOM_BOX_SEED)
    with Timer() as t:
        disagreements = sum((local_decompose(box) is not None) != (chsh(box) <= 2)
                            for box in (random_ns_box(rng) for _ in range(1000)))
    return disagreements == 0 and t.elapsed < 300, \
        f"1000 random boxes, {disagreements} LP/CHSH disagreements, {t.elapsed:.1f}s"


def check_4():
    rejects_pr = not quantum_arcsin_test(pr_box()).passed
    c = 1 / math.sqrt(2)
    tsirelson = arcsin_test_correlators({(0, 0): c, (0, 1): c, (1, 0): c, (1, 1): -c})
    gap = abs(tsirelson.arcsin_sums[0] - math.pi)
    rng = random.Random(RANDOM_BOX_SEED)
    violations = 0
    for _ in range(1000):
        box = random_ns_box(rng)
        if quantum_arcsin_test(box).passed and chsh(box) ** 2 > 8:
            violations += 1
    ok = rejects_pr and tsirelson.passed and gap <= 1e-9 and violations == 0
    return ok, (f"rejects PR={rejects_pr}, Tsirelson point |sum-pi|={gap:.1e}, "
                f"arcsin-pass but CHSH^2>8: {violations}")


def check_5():
    with Timer() as t:
        fww_ok = all(chsh(compose(fww(n), [correlated_nonlocal_box(e)] * n)) == fww_formula(e, n)
                     for n in range(1, 6) for e in (F(1, 8), F(1, 4), F(1, 2)))
        bs_ok = closure = True
        for e in (F(1, 8), F(1, 4), F(1, 2), F(3, 4)):
            box = correlated_nonlocal_box(e)
            out = compose(bs2(), [box, box])
            bs_ok &= chsh(out) == bs_formula(e) == 3 * e - e ** 2 + 2
            closure &= out == correlated_nonlocal_box(correlated_parameter(out))
        values = iterate_bs(F(1, 10), 10)
        crossing = next((i for i, v in enumerate(values) if exceeds_bcc(v)), None)
    ok = fww_ok and bs_ok and closure and crossing is not None and t.elapsed < 60
    return ok, (f"fww={fww_ok} bs={bs_ok} closure={closure} "
                f"bcc crossed after {crossing} rounds, {t.elapsed:.1f}s")


def check_6():
    parts = []
    ok = True
    with Timer() as t:
        for e in (F(5, 8), F(3, 4), F(7, 8)):
            box = isotropic_box(e)
            best, _ = max_chsh_over_wirings(box)
            ok &= best == chsh(box)
            parts.append(f"P_{e}: max={best} chsh={chsh(box)}")
        best, _ = max_chsh_over_wirings(correlated_nonlocal_box(F(1, 4)))
        ok &= best > F(5, 2)
        parts.append(f"P^C_1/4: max={best}")
    ok &= t.elapsed <= 1800
    return ok, "; ".join(parts) + f", {t.elapsed:.0f}s"


def check_7():
    with Timer() as t:
        g = chsh_game()
        wc = classical_value(g)
        wq = xor_quantum_value(g)
        ratio = grothendieck_ratio(g)
        ok = (wc == F(3, 4) and abs(wq - (2 + math.sqrt(2)) / 4) <= 1e-6
              and abs(ratio - math.sqrt(2)) <= 1e-5)
        rng = random.Random(RANDOM_GAME_SEED)
        worst, bound_fail, degenerate = 0.0, 0, 0
        for _ in range(200):
            game = random_xor_game(rng)
            if classical_value(game) == trivial_value(game):
                degenerate += 1
            else:
                worst = max(worst, grothendieck_ratio(game))
            bound_fail += not check_quantum_bound(game, slack=1e-6)
        nlc = nlc_game(lambda z: int(z == 3), 2)
        nlc_c, nlc_q = classical_value(nlc), xor_quantum_value(nlc)
        ok &= worst <= 1.7823 and bound_fail == 0
        ok &= abs(nlc_q - float(nlc_c)) <= 1e-5 and nlc_c < 1
    ok &= t.elapsed < 600
    return ok, (f"CHSH wc={wc} wq={wq:.8f} ratio={ratio:.6f}; random: max ratio={worst:.4f} "
                f"bound failures={bound_fail} degenerate={degenerate}; NLC-AND wc={nlc_c} "
                f"wq={nlc_q:.6f}, {t.elapsed:.0f}s")


def check_8():
    with Timer() as t:
        bad = 0
        for value in range(2 ** 16):
            f = BoolFn((2, 2), tuple((value >> z) & 1 for z in range(16)))
            bad += sum(van_dam_success(f, x, y) != 1 for x, y in product(range(4), repeat=2))
        rng = random.Random(VAN_DAM_SEED)
        bad33 = 0
        for _ in range(200):
            f = BoolFn((3, 3), tuple(rng.randint(0, 1) for _ in range(64)))
            bad33 += sum(van_dam_success(f, x, y) != 1 for x, y in product(range(8), repeat=2))
    ok = bad == 0 and bad33 == 0 and t.elapsed < 600
    return ok, f"(2,2): {bad} failures over 65536 fns; (3,3): {bad33} over 200 fns, {t.elapsed:.0f}s"


def check_9():
    with Timer() as t:
        fns = {"x1x2x3": lambda a, b, c: a & b & c, "x1+x2x3": lambda a, b, c: a ^ (b & c)}
        results = {}
        for name, fn in fns.items():
            f = BoolFn.from_callable((1, 1, 1), fn)
            results[name] = bp_simulate(f) == bp_target(f)
    ok = all(results.values()) and t.elapsed < 60
    return ok, f"{results}, {t.elapsed:.2f}s"


def check_10():
    with Timer() as t:
        ot_ok = all(ot_correctness(*v) == 1 for v in product((0, 1), repeat=3))
        priv = ot_privacy_report()
        attack = ot_reduction_attack()
        accept = all(bc_accept_probability(c, n, k) == 1
                     for c in (0, 1) for n, k in product((1, 2), repeat=2))
        hiding = {(n, k): bc_hiding_advantage(n, k) for n, k in product((1, 2), repeat=2)}
        hiding_ok = all(v <= hiding_reference(n, k) for (n, k), v in hiding.items())
        binding = {(n, k): bc_binding_advantage(n, k) for n, k in product((1, 2), repeat=2)}
        monotone = all(binding[n, 2] <= binding[n, 1] for n in (1, 2))
    ok = (ot_ok and priv.sender_leak == 0 and priv.receiver_leak == 0 and attack == 1
          and accept and hiding_ok and monotone and t.elapsed < 1200)
    fmt = lambda d: " ".join(f"{n}{k}:{v}" for (n, k), v in sorted(d.items()))
    return ok, (f"ot={ot_ok} leaks=({priv.sender_leak},{priv.receiver_leak}) attack={attack} "
                f"accept={accept} hiding[{fmt(hiding)}] binding[{fmt(binding)}], {t.elapsed:.1f}s")


def check_11():
    with Timer() as t:
        pr_ok = d_output_vertex(2).to_box() == pr_box()
        g = compose_coprime(d_output_vertex(2), d_output_vertex(3))
        round_trip = (g == d_output_vertex(6) and project_mod(g, 2) == d_output_vertex(2)
                      and project_mod(g, 3) == d_output_vertex(3))
        parity = tri_parity_box()
        parity_ok = tri_nonsignalling(parity).strong and tri_two_way_local(parity) is None
        prdet = tri_product(pr_box(), (0, 0))
        prdet_ok = tri_two_way_local(prdet) is not None and tri_fully_local(prdet) is None
    ok = pr_ok and round_trip and parity_ok and prdet_ok and t.elapsed < 120
    return ok, (f"k=2 is PR={pr_ok} crt round trip={round_trip} xyz box={parity_ok} "
                f"PR x det={prdet_ok}, {t.elapsed:.1f}s")


CHECKS = {i: globals()[f"check_{i}"] for i in range(1, 12)}


def _run(criterion, number):
    ok, detail = CHECKS[number]()
    criterion(number, ok, detail)
    assert ok, detail


def test_criterion_01_chsh_ground_truths(criterion):
    _run(criterion, 1)


def test_criterion_02_polytope(criterion):
    _run(criterion, 2)


def test_criterion_03_locality_agreement(criterion):
    _run(criterion, 3)


def test_criterion_04_quantum_tests(criterion):
    _run(criterion, 4)


def test_criterion_05_distillation_formulas(criterion):
    _run(criterion, 5)


def test_criterion_06_short_no_go(criterion):
    _run(criterion, 6)


def test_criterion_07_games(criterion):
    _run(criterion, 7)


def test_criterion_08_van_dam(criterion):
    _run(criterion, 8)


def test_criterion_09_barrett_pironio(criterion):
    _run(criterion, 9)


def test_criterion_10_crypto(criterion):
    _run(criterion, 10)


def test_criterion_11_generalized_tripartite(criterion):
    _run(criterion, 11)


if __name__ == "__main__":
    for number, check in CHECKS.items():
        ok, detail = check()
        print(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}", flush=True)
