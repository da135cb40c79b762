"""Command-line entry point: ``nlbox <verb> [options]``.

Results go to stdout as ``key=value`` lines or CSV; exact quantities are
printed as ``p/q``.  Usage errors exit with 2, domain errors with 1.
"""
from __future__ import annotations

import argparse
import csv
import sys
from fractions import Fraction
from itertools import product

from . import crypto, distcomp, games, multigen, polytope, wiring
from .boxcore import chsh, chsh_expression, correlated_nonlocal_box, is_nonsignalling, pr_box
from .errors import BadParam, NLBoxError
from .formats import (box_from_mnemonic, fmt, format_box, format_genbox, game_to_xor,
                      parse_genbox, parse_tribox, read_box, read_game)


def _bool(v) -> str:
    return "true" if v else "false"


def emit(**pairs):
    for k, v in pairs.items():
        if isinstance(v, bool):
            v = _bool(v)
        elif isinstance(v, Fraction):
            v = fmt(v)
        elif isinstance(v, float):
            v = repr(v)
        print(f"{k}={v}")


def _rat_arg(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from None


def _list_of(conv):
    def parse(text):
        return [conv(t) for t in text.split(",") if t]
    return parse


def _load_box(args):
    if args.file:
        return read_box(args.file)
    return box_from_mnemonic(args.box)


def _add_box_source(p, required=True):
    g = p.add_mutually_exclusive_group(required=required)
    g.add_argument("--box", help="mnemonic: pr, antipr, c, uniform, iso:p/q, corr:p/q, vertex:abgd")
    g.add_argument("--file", help="box file with 'a b x y p/q' lines")


# ---------------------------------------------------------------- verbs

def cmd_classify(args):
    box = _load_box(args)
    report = is_nonsignalling(box)
    emit(**{"class": polytope.classify(box), "nonsignalling": report.ok})
    if not report.ok:
        w = report.witness
        emit(witness=f"{w.party}:outcome={w.outcome}:input={w.own_input}")
        return
    q = polytope.quantum_arcsin_test(box, args.tol)
    emit(chsh=chsh(box), tsirelson_ok=polytope.tsirelson_test(box),
         arcsin_sums=",".join(f"{v:.12g}" for v in q.arcsin_sums))


def cmd_chsh(args):
    box = _load_box(args)
    emit(chsh=chsh(box), s=chsh_expression(box))


def cmd_depolarize(args):
    box = _load_box(args)
    out = polytope.depolarize(box)
    emit(eps=polytope.isotropic_parameter(out), s_in=chsh_expression(box),
         s_out=chsh_expression(out), chsh_in=chsh(box), chsh_out=chsh(out))
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(format_box(out))


def cmd_decompose(args):
    box = _load_box(args)
    dec = polytope.local_decompose(box)
    emit(local=dec is not None)
    if dec is not None:
        for label, w in dec.weights.items():
            print("".join(map(str, label)), fmt(w))


SWEEP_COLUMNS = ("protocol", "eps", "n", "chsh_in", "chsh_out", "formula", "match")


def sweep(protocol: str, eps_grid, n_grid) -> list[dict]:
    """Compose the protocol on correlated boxes and compare with its closed form.

    BS always uses two boxes, so ``n_grid`` only applies to FWW.
    """
    rows = []
    for eps in eps_grid:
        box = correlated_nonlocal_box(eps)
        for n in (n_grid if protocol == "fww" else [2]):
            if protocol == "fww":
                out, formula = wiring.compose(wiring.fww(n), [box] * n), wiring.fww_formula(eps, n)
            else:
                out, formula = wiring.compose(wiring.bs2(), [box, box]), wiring.bs_formula(eps)
            value = chsh(out)
            rows.append(dict(protocol=protocol, eps=eps, n=n, chsh_in=chsh(box), chsh_out=value,
                             formula=formula, match=value == formula))
    return rows


def cmd_distill(args):
    writer = csv.writer(sys.stdout, lineterminator="\n")
    if args.iterate is not None:
        if args.protocol != "bs":
            raise BadParam("--iterate is only defined for the bs protocol")
        eps0 = args.eps[0]
        values = wiring.iterate_bs(eps0, args.iterate)
        writer.writerow(["protocol", "step", "eps", "chsh_in", "chsh_out", "crossed_bcc"])
        eps = eps0
        for step in range(1, len(values)):
            nxt = wiring.bs_step(eps)
            writer.writerow(["bs", step, fmt(eps), fmt(values[step - 1]), fmt(values[step]),
                             _bool(wiring.exceeds_bcc(values[step]))])
            eps = nxt
        return
    writer.writerow(SWEEP_COLUMNS)
    for row in sweep(args.protocol, args.eps, args.n):
        writer.writerow([row["protocol"], fmt(row["eps"]), row["n"], fmt(row["chsh_in"]),
                         fmt(row["chsh_out"]), fmt(row["formula"]), _bool(row["match"])])


def cmd_short_search(args):
    box = _load_box(args)
    value, w = wiring.max_chsh_over_wirings(box, threads=args.threads)
    emit(chsh_in=chsh(box), max_chsh=value, distills=value > chsh(box),
         alice=wiring.strategy_truth_table(w.alice), bob=wiring.strategy_truth_table(w.bob))


def _solver(args):
    return dict(restarts=args.restarts, seed=args.seed)


def _report_xor(game, args):
    r = games.analyze_xor_game(game, **_solver(args))
    emit(omega_c=r.classical, tau=r.trivial, omega_q=r.quantum)
    emit(ratio="undefined" if r.ratio is None else r.ratio,
         ratio_below_kg=r.ratio is None or r.ratio <= games.BOUNDS.kg_high,
         quantum_bound=r.quantum_bound, bound_holds=r.bound_holds)


def cmd_game(args):
    if args.chsh:
        _report_xor(games.chsh_game(), args)
        return
    if not args.file:
        raise BadParam("game needs --file or --chsh")
    game = read_game(args.file)
    xg = game_to_xor(game)
    if xg is None:
        emit(omega_c=games.classical_value(game), xor=False)
    else:
        _report_xor(xg, args)


def cmd_nlc(args):
    m = args.m
    fn = distcomp.BoolFn.from_hex(args.fn, (m,))
    game = games.nlc_game(dict(enumerate(fn.table)), m)
    wc = games.classical_value(game)
    wq = games.xor_quantum_value(game, **_solver(args))
    emit(omega_c=wc, omega_q=wq, gap=abs(wq - float(wc)), equal=abs(wq - float(wc)) <= args.tol)


def cmd_vandam(args):
    f = distcomp.BoolFn.from_hex(args.fn, (args.nx, args.ny))
    form = distcomp.factor_bipartite(f)
    emit(terms=len(form.terms), boxes=len(form.terms))
    if args.check_all:
        ok = all(distcomp.van_dam_success(f, x, y) == 1
                 for x, y in product(range(2 ** args.nx), range(2 ** args.ny)))
        emit(verified=ok)
    if args.x is not None and args.y is not None:
        dist = distcomp.van_dam_run(form, args.x, args.y)
        emit(target=f(args.x, args.y),
             success=sum((w for (a, b), w in dist.items() if a ^ b == f(args.x, args.y)),
                         Fraction(0)))


def cmd_bp(args):
    f = distcomp.BoolFn.from_hex(args.fn, args.arities)
    circ = distcomp.share_circuit(f)
    sim = distcomp.bp_simulate(f)
    emit(parties=len(args.arities), boxes=circ.box_count,
         matches_target=sim == distcomp.bp_target(f),
         nonsignalling=distcomp.multiparty_nonsignalling(sim, args.arities))


def cmd_ot(args):
    correct = min(crypto.ot_correctness(x0, x1, c) for x0, x1, c in product((0, 1), repeat=3))
    priv = crypto.ot_privacy_report()
    red = crypto.ot_reduction_report()
    emit(correctness=correct, sender_leak=priv.sender_leak, receiver_leak=priv.receiver_leak,
         reduction_cheating=red.cheating, reduction_honest=red.honest,
         sender_view_distance=red.sender_view_distance)


def cmd_bc(args):
    if args.action == "demo":
        t = crypto.bc_honest_run(args.bit, args.n, args.k, seed=args.seed)
        for i, r in enumerate(t.rounds):
            emit(**{f"round{i}_x": "".join(map(str, r.x)), f"round{i}_y": "".join(map(str, r.y)),
                    f"round{i}_A": r.A, f"round{i}_accepted": r.accepted})
        emit(accepted=t.accepted,
             accept_probability=crypto.bc_accept_probability(args.bit, args.n, args.k))
    else:
        emit(hiding=crypto.bc_hiding_advantage(args.n, args.k),
             hiding_bound=crypto.hiding_reference(args.n, args.k),
             binding=crypto.bc_binding_advantage(args.n, args.k),
             binding_reference=crypto.binding_reference(args.k))


TRI_NAMES = {
    "parity": multigen.tri_parity_box,
    "pr-det": lambda: multigen.tri_product(pr_box(), (0, 0)),
    "det": lambda: multigen.tri_deterministic(0, 0, 0, 0, 0, 0),
    "uniform": multigen.tri_uniform,
}


def cmd_tri(args):
    if args.dimension:
        emit(dimension=multigen.tri_dimension())
        return
    if args.file:
        with open(args.file) as fh:
            t = parse_tribox(fh.read())
    elif args.box:
        if args.box not in TRI_NAMES:
            raise BadParam(f"unknown tripartite box {args.box!r}; choose from {sorted(TRI_NAMES)}")
        t = TRI_NAMES[args.box]()
    else:
        raise BadParam("tri needs --box, --file or --dimension")
    ns = multigen.tri_nonsignalling(t)
    emit(nonsignalling=ns.strong, nonsignalling_weak=ns.weak)
    if not ns.strong:
        emit(witness=f"party={ns.witness.party}:outcome={ns.witness.outcome}"
                     f":inputs={ns.witness.other_inputs}")
        return
    emit(fully_local=multigen.tri_fully_local(t) is not None,
         two_way_local=multigen.tri_two_way_local(t) is not None)


def cmd_genbox(args):
    if args.dimension:
        da, db = args.dimension
        emit(dimension=multigen.genbox_dimension(da, db),
             formula=multigen.genbox_dimension_formula(da, db))
        return
    if args.file:
        with open(args.file) as fh:
            g = parse_genbox(fh.read())
    elif args.compose:
        d1, d2 = args.compose
        g = multigen.compose_coprime(multigen.d_output_vertex(d1), multigen.d_output_vertex(d2))
    else:
        g = multigen.d_output_vertex(args.k)
    if args.project:
        g = multigen.project_mod(g, args.project)
    emit(dims=",".join(map(str, g.dims)), nonsignalling=multigen.genbox_nonsignalling(g))
    if g.da == g.db and g.dx == g.dy == 2:
        emit(is_vertex=g == multigen.d_output_vertex(g.da))
    if args.print:
        sys.stdout.write(format_genbox(g))


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--tol", type=float, default=1e-9)

    parser = argparse.ArgumentParser(prog="nlbox", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="verb", required=True)

    def verb(name, fn, help):
        p = sub.add_parser(name, parents=[common], help=help)
        p.set_defaults(func=fn)
        return p

    for name, fn, help in (("classify", cmd_classify, "signalling / local / quantum / super-quantum"),
                           ("chsh", cmd_chsh, "CHSH value"),
                           ("decompose", cmd_decompose, "local decomposition weights"),
                           ("short-search", cmd_short_search, "best deterministic 2-box wiring")):
        _add_box_source(verb(name, fn, help))

    p = verb("depolarize", cmd_depolarize, "twirl into isotropic form")
    _add_box_source(p)
    p.add_argument("--out", help="write the depolarized box here")

    p = verb("distill", cmd_distill, "FWW / BS distillation sweeps as CSV")
    p.add_argument("--protocol", choices=("fww", "bs"), required=True)
    p.add_argument("--eps", type=_list_of(_rat_arg), required=True,
                   help="comma-separated epsilons, e.g. 1/8,1/4")
    p.add_argument("--n", type=_list_of(int), default=[2], help="comma-separated box counts (fww)")
    p.add_argument("--iterate", type=int, help="iterate bs this many times from the first eps")

    p = verb("game", cmd_game, "classical, trivial and quantum values")
    p.add_argument("--file")
    p.add_argument("--chsh", action="store_true")
    p.add_argument("--restarts", type=int, default=200)

    p = verb("nlc", cmd_nlc, "non-local computation game of a function")
    p.add_argument("--fn", required=True, help="truth table in hex")
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--restarts", type=int, default=200)

    p = verb("vandam", cmd_vandam, "compute f(x, y) with one bit each via PR boxes")
    p.add_argument("--fn", required=True, help="truth table in hex, bit z = f(z), x in low bits")
    p.add_argument("--nx", type=int, default=2)
    p.add_argument("--ny", type=int, default=2)
    p.add_argument("--check-all", action="store_true")
    p.add_argument("--x", type=int)
    p.add_argument("--y", type=int)

    p = verb("bp", cmd_bp, "simulate a multiparty correlation with PR boxes")
    p.add_argument("--fn", required=True)
    p.add_argument("--arities", type=_list_of(int), default=[1, 1, 1])

    p = verb("ot", cmd_ot, "oblivious transfer analysis")
    p.add_argument("action", choices=("demo",))

    p = verb("bc", cmd_bc, "bit commitment demo and exact analysis")
    p.add_argument("action", choices=("demo", "analyze"))
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--bit", type=int, choices=(0, 1), default=0)

    p = verb("tri", cmd_tri, "tripartite non-signalling and locality")
    p.add_argument("--box", help=f"one of {sorted(TRI_NAMES)}")
    p.add_argument("--file")
    p.add_argument("--dimension", action="store_true")

    p = verb("genbox", cmd_genbox, "d-output boxes and their interconversions")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--file")
    p.add_argument("--compose", type=int, nargs=2, metavar=("D1", "D2"))
    p.add_argument("--project", type=int)
    p.add_argument("--dimension", type=int, nargs=2, metavar=("DA", "DB"))
    p.add_argument("--print", action="store_true")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except NLBoxError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
