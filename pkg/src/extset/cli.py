"""Command-line front end.

Exit status: 0 on success, 1 when a checked property is falsified,
2 on usage errors (bad flags, unreadable or malformed input).
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from pathlib import Path

from . import __version__
from .errors import ExtsetError
from .family import Family, elements, parse_family, serialize, to_json
from .nip import compress_to_terminal, max_nip
from .params import family_params, parse_rational, product_measure
from .predicates import (
    is_cross_sperner,
    is_cross_t_intersecting,
    is_iu,
    is_s_union,
    is_t_intersecting,
)
from .search import (
    SearchBudget,
    exhaustive_pair_max,
    extremal_sweep,
    iu_search,
)
from .separated import (
    SeparatedParams,
    WeightTable,
    a_family,
    a_profile,
    block_shift_pairs,
    build_candidates,
    enumerate_H,
    f23_hypothesis_holds,
    f23_sum,
    parse_separated,
    serialize_separated,
    t3_bound,
    weight_tables,
)
from .shifting import shift_pair_to_fixpoint

DEFAULT_SEED = 20240601

EXIT_OK, EXIT_FALSIFIED, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def dumps(obj) -> str:
    """Canonical JSON used for every report."""
    return json.dumps(obj, indent=2, sort_keys=True)


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _load(path: str) -> Family:
    return parse_family(_read(path))


def _budget(args) -> SearchBudget:
    kw = {"jobs": args.jobs, "parallel_chunks": max(args.jobs, 1)}
    if args.time_cap is not None:
        kw["time_cap"] = args.time_cap
    return SearchBudget(**kw)


def _weights(spec: str | None, k: int, l: int, lp: int, t: int):  # noqa: E741
    """``unit``, ``sep:<n>`` or two comma lists ``w1;w2`` of rationals."""
    if spec is None or spec == "unit":
        ones = WeightTable(tuple([1] * (k + 1)))
        return ones, ones
    if spec.startswith("sep:"):
        return weight_tables(SeparatedParams(int(spec[4:]), k, l, lp, t))
    try:
        a, b = spec.split(";")
        w1 = WeightTable(tuple(parse_rational(x) for x in a.split(",")))
        w2 = WeightTable(tuple(parse_rational(x) for x in b.split(",")))
    except ValueError:
        raise UsageError(f"bad weight spec {spec!r}; use unit, sep:<n> or 'a0,a1,..;b0,b1,..'") from None
    if len(w1.values) != k + 1 or len(w2.values) != k + 1:
        raise UsageError(f"weight tables need {k + 1} entries each")
    return w1, w2


def _emit(args, report: dict, text_lines: list[str]) -> None:
    if args.format == "json":
        print(dumps(report))
    else:
        print("\n".join(text_lines))


# ---------------------------------------------------------------------------
# subcommands


def cmd_check(args) -> int:
    f = _load(args.input)
    report: dict = {"n": f.n, "size": len(f)}
    if args.t is not None:
        report["t_intersecting"] = is_t_intersecting(f, args.t).to_dict()
    if args.s is not None:
        report["s_union"] = is_s_union(f, args.s).to_dict()
    if args.iu or (args.t is None and args.s is None and args.other is None):
        report["iu"] = is_iu(f).to_dict()
    if args.other is not None:
        g = _load(args.other)
        report["cross_t_intersecting"] = is_cross_t_intersecting(f, g, args.cross_t).to_dict()
        report["cross_sperner"] = is_cross_sperner(f, g).to_dict()
    verdicts = {k: v for k, v in report.items() if isinstance(v, dict)}
    lines = [f"n={f.n} |F|={len(f)}"]
    for name, v in verdicts.items():
        extra = f"  witness {v['witness']} ({v['reason']})" if not v["holds"] else ""
        lines.append(f"{name}: {'yes' if v['holds'] else 'no'}{extra}")
    _emit(args, report, lines)
    return EXIT_OK if all(v["holds"] for v in verdicts.values()) else EXIT_FALSIFIED


def cmd_params(args) -> int:
    f = _load(args.input)
    report = family_params(f).to_dict()
    report["size"] = len(f)
    if args.p is not None:
        report["p"] = str(parse_rational(args.p))
        report["measure"] = str(product_measure(f, args.p))
    lines = [
        f"|F|={len(f)}",
        f"max degree={report['max_degree']} (element {report['max_degree_element']})",
        f"diversity={report['diversity']} (element {report['diversity_element']})",
        f"sturdiness={report['sturdiness']} (pair {report['sturdiness_pair']})",
    ]
    if args.p is not None:
        lines.append(f"mu_{report['p']}={report['measure']}")
    _emit(args, report, lines)
    return EXIT_OK


def cmd_shift(args) -> int:
    if args.separated:
        bs, f = parse_separated(_read(args.input))
        bs2, g = parse_separated(_read(args.other)) if args.other else (bs, Family.empty(bs.ground))
        if bs2 != bs:
            raise UsageError("separated files use different block structures")
        allowed = block_shift_pairs(bs)
    else:
        f = _load(args.input)
        g = _load(args.other) if args.other else Family.empty(f.n)
        allowed = None
    res = shift_pair_to_fixpoint(f, g, allowed)
    report = {"f": to_json(res.f), "g": to_json(res.g), "log": res.log_json()}
    if args.out_dir:
        out = Path(args.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        if args.separated:
            (out / "f.shifted").write_text(serialize_separated(bs, res.f))
            (out / "g.shifted").write_text(serialize_separated(bs, res.g))
        else:
            (out / "f.shifted").write_text(serialize(res.f))
            (out / "g.shifted").write_text(serialize(res.g))
        (out / "shift-log.json").write_text(dumps(res.log_json()) + "\n")
    lines = [f"shifts applied: {len(res.log)}", "f:", serialize(res.f).rstrip(), "g:", serialize(res.g).rstrip()]
    _emit(args, report, lines)
    return EXIT_OK


def cmd_profile(args) -> int:
    bs, f = parse_separated(_read(args.input))
    rows = [{"set": list(s), "profile": list(elements(a_profile(m, bs)))} for m, s in zip(f, f.as_sets())]
    fam = a_family(f, bs)
    report = {"n": bs.n, "k": bs.k, "members": rows, "profile_family": to_json(fam)}
    lines = [f"{r['set']} -> {r['profile']}" for r in rows]
    lines.append(f"A(F) = {[list(s) for s in fam.as_sets()]}")
    _emit(args, report, lines)
    return EXIT_OK


def cmd_bound(args) -> int:
    p = SeparatedParams(args.n, args.k, args.l, args.lp, args.t)
    rep = t3_bound(p)
    report = rep.to_dict()
    if args.t == 1 and args.lp >= 2:
        report["f23"] = {"value": f23_sum(args.n, args.k, args.l, args.lp), "hypothesis": f23_hypothesis_holds(args.n, args.l)}
    lines = [f"f({a}) = {v}" for a, v in sorted(rep.f_values.items())]
    lines += [f"g({a}) = {v}" for a, v in sorted(rep.g_values.items())]
    lines.append(f"bound = {rep.bound} (argmax {rep.argmax[0]}({rep.argmax[1]}))")
    if "f23" in report:
        lines.append(f"f23 closed form = {report['f23']['value']} (n > 3l: {report['f23']['hypothesis']})")
    _emit(args, report, lines)
    return EXIT_OK


def cmd_nip(args) -> int:
    f, g = _load(args.input), _load(args.other)
    if f.n != g.n:
        raise UsageError("families live on different ground sets")
    if not args.compress:
        rep = max_nip(f, g, args.t)
        _emit(args, rep.to_dict(), [f"max NIP = {rep.max_nip}", f"F^a = {rep.f_witnesses.as_sets()}", f"G^a = {rep.g_witnesses.as_sets()}"])
        return EXIT_OK
    l = args.l if args.l is not None else max((len(s) for s in f.as_sets()), default=0)  # noqa: E741
    lp = args.lp if args.lp is not None else max((len(s) for s in g.as_sets()), default=0)
    w1, w2 = _weights(args.weights, f.n, max(l, lp), min(l, lp), args.t)
    term = compress_to_terminal(f, g, args.t, w1, w2)
    report = term.to_dict()
    lines = [f"{s.kind}: a {s.a_before} -> {s.a_after}, weight {s.weight_before} -> {s.weight_after}" for s in term.trace]
    lines.append(f"terminal {term.label} at a={term.a}, weight {term.initial_weight} -> {term.weight}")
    _emit(args, report, lines)
    return EXIT_FALSIFIED if term.weight < term.initial_weight else EXIT_OK


def cmd_search(args) -> int:
    budget = _budget(args)
    if args.mode == "pair":
        uf, ug = _load(args.uf), _load(args.ug)
        rep = exhaustive_pair_max(uf, ug, args.t, budget=budget)
        lines = [f"optimum = {rep.optimum} (exhaustive: {rep.exhaustive})"]
        if rep.witnesses:
            lines += [f"f = {rep.witnesses[0].as_sets()}", f"g = {rep.witnesses[1].as_sets()}"]
        _emit(args, rep.to_dict(), lines)
        return EXIT_OK
    if args.mode == "iu":
        rep = iu_search(args.n, budget)
        d = rep.to_dict()
        lines = [
            f"maximal IU-families over [{args.n}]: {rep.count}",
            f"max size {rep.max_size} (bound {rep.size_bound})",
            f"max sturdiness {rep.max_sturdiness} (bound {d['sturdiness_bound']})",
        ]
        _emit(args, d, lines)
        ok = rep.max_size <= rep.size_bound and rep.max_sturdiness <= rep.sturdiness_bound
        return EXIT_OK if ok else EXIT_FALSIFIED
    ranges = {}
    for key in ("n", "k", "t"):
        vals = getattr(args, f"{key}_values")
        if vals:
            ranges[key] = vals
    if args.p_values:
        ranges["p"] = [str(parse_rational(p)) for p in args.p_values]
    records = extremal_sweep(args.target, ranges, budget, args.out)
    if args.target == "n1" and args.random_weights:
        records += _random_n1(args, budget)
    jsonl = [json.dumps(r.to_dict(), sort_keys=True) for r in records]
    if args.out:
        Path(args.out, f"{args.target}-records.jsonl").write_text("\n".join(jsonl) + "\n")
    if args.format == "json":
        print("\n".join(jsonl))
    else:
        for r in records:
            print(f"{r.status:>24}  {r.params}  optimum={r.optimum} bound={r.bound}")
    return EXIT_FALSIFIED if any(r.failed for r in records) else EXIT_OK


def _random_n1(args, budget):
    from .search import _n1_instance

    rng = random.Random(args.seed)
    out = []
    for k in args.k_values or [1, 2, 3]:
        for t in args.t_values or [1, 2]:
            for l in range(t, k + 1):  # noqa: E741
                for lp in range(t, l + 1):
                    for r in range(args.random_weights):
                        w1 = WeightTable(tuple(sorted((rng.randint(0, 9) for _ in range(k + 1)), reverse=True)))
                        w2 = WeightTable(tuple(sorted((rng.randint(0, 9) for _ in range(k + 1)), reverse=True)))
                        out.append(_n1_instance(k, l, lp, t, w1, w2, budget, {"weights": f"random#{r}"}))
    return out


def reproduce_ex1(budget: SearchBudget | None = None) -> dict:
    """Closed forms, enumeration and exhaustive oracle for the two showcase instances."""
    budget = budget or SearchBudget()
    out = {"instances": []}
    for n, k, l, lp in ((2, 3, 3, 2), (2, 4, 4, 2)):  # noqa: E741
        p = SeparatedParams(n, k, l, lp, 1)
        f0, g0 = build_candidates(p, "F0"), build_candidates(p, "G0")
        fa, ga = build_candidates(p, "Fa", l), build_candidates(p, "Ga", l)
        cross = bool(is_cross_t_intersecting(fa, ga, 1))
        inst = {
            "params": p.to_dict(),
            "F0+G0": len(f0) + len(g0),
            "Fa+Ga": len(fa) + len(ga),
            "f23_sum": f23_sum(n, k, l, lp),
            "t3_bound": int(t3_bound(p).bound),
            "candidates_cross_intersecting": cross,
        }
        if k == 3:
            bs = p.blocks
            rep = exhaustive_pair_max(enumerate_H(bs, l), enumerate_H(bs, lp), 1, budget=budget)
            inst["oracle_optimum"] = int(rep.optimum)
            inst["oracle_exhaustive"] = rep.exhaustive
            inst["oracle_witness_cross_intersecting"] = bool(is_cross_t_intersecting(*rep.witnesses, 1))
        inst["confirmed"] = (
            cross
            and inst["Fa+Ga"] > inst["F0+G0"]
            and inst["F0+G0"] == inst["f23_sum"]
            and inst.get("oracle_optimum", inst["Fa+Ga"]) == inst["Fa+Ga"]
            and inst.get("oracle_witness_cross_intersecting", True)
        )
        out["instances"].append(inst)
    out["pass"] = all(i["confirmed"] for i in out["instances"])
    return out


def cmd_reproduce(args) -> int:
    if args.name != "ex1":
        raise UsageError(f"unknown reproduction {args.name!r}; available: ex1")
    rep = reproduce_ex1(_budget(args))
    lines = []
    for inst in rep["instances"]:
        p = inst["params"]
        lines.append(f"(n,k,l,l') = ({p['n']},{p['k']},{p['l']},{p['lp']}), t=1")
        lines.append(f"  |F_0|+|G_0| = {inst['F0+G0']}  (closed form {inst['f23_sum']})")
        lines.append(f"  |F_{p['l']}|+|G_{p['l']}| = {inst['Fa+Ga']}  (cross intersecting: {inst['candidates_cross_intersecting']})")
        if "oracle_optimum" in inst:
            lines.append(f"  exhaustive optimum = {inst['oracle_optimum']}")
        lines.append(f"  counterexample confirmed: {inst['confirmed']}")
    lines.append("PASS" if rep["pass"] else "FAIL")
    _emit(args, rep, lines)
    return EXIT_OK if rep["pass"] else EXIT_FALSIFIED


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for searches")
    common.add_argument("--time-cap", type=float, default=None, help="seconds; overrides EXTSET_BUDGET_SECS")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)

    parser = argparse.ArgumentParser(prog="extset", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"extset {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="family predicates")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--t", type=int)
    p.add_argument("--s", type=int)
    p.add_argument("--iu", action="store_true")
    p.add_argument("--with", dest="other")
    p.add_argument("--cross-t", type=int, default=1)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("params", parents=[common], help="degree, diversity, sturdiness, measure")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--p", help="rational num/den in (0,1)")
    p.set_defaults(func=cmd_params)

    p = sub.add_parser("shift", parents=[common], help="joint shifting to a fixpoint")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--with", dest="other")
    p.add_argument("--separated", action="store_true", help="inputs are separated instance files")
    p.add_argument("--out-dir")
    p.set_defaults(func=cmd_shift)

    p = sub.add_parser("profile", parents=[common], help="A-profiles of a separated family")
    p.add_argument("--in", dest="input", required=True)
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("bound", parents=[common], help="separated-family bound tables")
    for name in ("n", "k", "l", "lp"):
        p.add_argument(f"--{name}", type=int, required=True)
    p.add_argument("--t", type=int, default=1)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("nip", parents=[common], help="necessary intersection points")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--with", dest="other", required=True)
    p.add_argument("--t", type=int, default=1)
    p.add_argument("--compress", action="store_true", help="run compression to a terminal pair")
    p.add_argument("--weights", help="unit | sep:<n> | 'a0,a1,..;b0,b1,..'")
    p.add_argument("--l", type=int)
    p.add_argument("--lp", type=int)
    p.set_defaults(func=cmd_nip)

    p = sub.add_parser("search", parents=[common], help="exhaustive oracles and sweeps")
    p.add_argument("mode", choices=("pair", "iu", "sweep"))
    p.add_argument("--uf")
    p.add_argument("--ug")
    p.add_argument("--t", type=int, default=1)
    p.add_argument("--n", type=int)
    p.add_argument("--target", choices=("t1", "t2", "n1", "t3", "f23"))
    p.add_argument("--n-values", type=int, nargs="+")
    p.add_argument("--k-values", type=int, nargs="+")
    p.add_argument("--t-values", type=int, nargs="+")
    p.add_argument("--p-values", nargs="+")
    p.add_argument("--random-weights", type=int, default=0, help="extra seeded random tables per n1 instance")
    p.add_argument("--out", help="directory for JSON-lines records and witness files")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("reproduce", parents=[common], help="reproduce a worked example")
    p.add_argument("name")
    p.set_defaults(func=cmd_reproduce)
    return parser


def _validate(args) -> None:
    if args.command == "search":
        if args.mode == "pair" and not (args.uf and args.ug):
            raise UsageError("search pair needs --uf and --ug")
        if args.mode == "iu" and args.n is None:
            raise UsageError("search iu needs --n")
        if args.mode == "sweep" and args.target is None:
            raise UsageError("search sweep needs --target")
    if args.jobs < 1:
        raise UsageError("--jobs must be positive")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if args.time_cap is None and os.environ.get("EXTSET_BUDGET_SECS"):
        args.time_cap = float(os.environ["EXTSET_BUDGET_SECS"])
    try:
        _validate(args)
        return args.func(args)
    except (UsageError, ExtsetError) as exc:
        print(f"extset: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def run(argv: list[str] | None = None) -> int:
    return main(argv)


if __name__ == "__main__":
    sys.exit(main())
