"""Command-line front end.

Users are numbered from 1 on the command line and in partition strings
(``"1,2,3;4,5"``); everything is 0-based internally.

Exit codes: 0 definitive answer, 1 usage or validation error, 2 analysis ran
but was inconclusive, 3 a size or iteration limit was hit.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__, kernels
from .core import (
    core_nonempty,
    core_screen,
    is_convex,
    thm_max_min_empty,
    thm_rate_ratio_nonempty,
    thm_second_min_empty,
    thm_symmetric_nonempty,
)
from .dcstable import (
    best_partition_bruteforce,
    is_dc_stable,
    thm_banded_dc_sufficient,
    thm_singleton_dc_sufficient,
)
from .errors import (
    GridDomainError,
    McastGameError,
    ScenarioError,
    SizeLimitError,
    SolverStallError,
    UnsupportedNError,
)
from .experiments import emit_results, reference_sweeps, run_sweep, sweep_from_json
from .scenario import (
    BandedFormula,
    ExplicitList,
    Partition,
    Scenario,
    coalition,
    dump_scenario,
    format_blocks,
    generate_scenario,
    load_scenario,
    members,
    parse_blocks,
    scenario_from_json,
)
from .value import coalition_rate, coalition_value, collection_value

EXIT_OK, EXIT_USAGE, EXIT_INCONCLUSIVE, EXIT_LIMIT = 0, 1, 2, 3


def _users(mask: int) -> list[int]:
    return [i + 1 for i in members(mask)]


def _set(mask: int) -> str:
    return "{" + ",".join(map(str, _users(mask))) + "}"


def _fmt(x) -> str:
    return "n/a" if x is None else f"{x:.6g}"


def _theorem_line(t) -> str:
    if not t.applicable:
        return f"  {t.name:<22} not applicable ({t.note})"
    state = "HOLDS" if t.condition_holds else "fails"
    if t.lhs is None:
        return f"  {t.name:<22} {state}" + (f" ({t.note})" if t.note else "")
    return f"  {t.name:<22} {state:<6} {_fmt(t.lhs)} {t.relation} {_fmt(t.rhs)}"


# --------------------------------------------------------------------------
# subcommands: each returns (exit_code, report_dict, text)
# --------------------------------------------------------------------------


def cmd_validate(args):
    try:
        doc = json.loads(Path(args.file).read_text())
        s = scenario_from_json(doc)
    except ScenarioError as exc:
        viol = [
            {"kind": v.kind, "field": v.field, "index": v.index, "detail": v.detail}
            for v in exc.violations
        ]
        lines = ["invalid scenario:"]
        for v in exc.violations:
            user = f" (user {v.index + 1})" if v.index is not None else ""
            lines.append(f"  {v}{user}")
        return EXIT_USAGE, {"valid": False, "violations": viol}, "\n".join(lines)
    return EXIT_OK, {"valid": True, "n": s.n}, f"valid: {s.n} users"


def cmd_value(args):
    s = load_scenario(args.file)
    idx = [i - 1 for i in (int(t) for t in args.coalition.split(",") if t.strip())]
    mask = coalition(idx, s.n)
    rep = {"coalition": _users(mask), "rate": coalition_rate(s, mask), "value": coalition_value(s, mask)}
    return EXIT_OK, rep, f"v({_set(mask)}) = {rep['value']:.10g}   (bottleneck rate {rep['rate']:g})"


def cmd_check_core(args):
    s = load_scenario(args.file)
    rep: dict = {"method": args.method}
    lines = []
    verdict = None
    fired: list[str] = []
    witness = None
    if args.method in ("theorems", "both"):
        verdict, results, fired = core_screen(s)
        rep["theorems"] = [t.to_dict() for t in results]
        rep["fired"] = fired
        lines += [_theorem_line(t) for t in results]
    lp_used = False
    if args.method == "lp" or (args.method == "both" and verdict is not False):
        try:
            res = core_nonempty(s)
            lp_used = True
            if verdict is None:
                verdict = res.feasible
            elif verdict != res.feasible:
                raise McastGameError("LP contradicts a sufficient condition")
            if res.feasible:
                witness = [float(x) for x in res.witness]
        except SizeLimitError as exc:
            rep["lp_skipped"] = str(exc)
            if verdict is None:
                rep["verdict"] = "inconclusive"
                return EXIT_LIMIT, rep, "\n".join([f"core: INCONCLUSIVE ({exc})", *lines])
    rep["lp_used"] = lp_used
    rep["witness"] = witness
    if verdict is None:
        rep["verdict"] = "inconclusive"
        head = "core: INCONCLUSIVE (no sufficient condition fired)"
        code = EXIT_INCONCLUSIVE
    else:
        rep["verdict"] = "nonempty" if verdict else "empty"
        how = " + ".join(fired + (["LP witness" if verdict else "LP"] if lp_used else []))
        head = f"core: {'NON-EMPTY' if verdict else 'EMPTY'} ({how})"
        code = EXIT_OK
    text = [head, *lines]
    if witness is not None:
        text.append("  witness: " + " ".join(f"{x:.6g}" for x in witness))
    return code, rep, "\n".join(text)


def cmd_check_convex(args):
    s = load_scenario(args.file)
    res = is_convex(s)
    rep = {"convex": res.convex}
    if res.convex:
        return EXIT_OK, rep, "convex: YES"
    a, b = res.counterexample
    from .value import value_table

    v = value_table(s)
    lhs, rhs = float(v[a] + v[b]), float(v[a | b] + v[a & b])
    rep.update(counterexample=[_users(a), _users(b)], lhs=lhs, rhs=rhs)
    return EXIT_OK, rep, (
        f"convex: NO  S1={_set(a)} S2={_set(b)}: v(S1)+v(S2)={lhs:.10g} > v(S1|S2)+v(S1&S2)={rhs:.10g}"
    )


def _partition_arg(s: Scenario, text: str) -> Partition:
    return Partition.from_lists(s.n, parse_blocks(text, s.n))


def cmd_check_dc(args):
    s = load_scenario(args.file)
    p = _partition_arg(s, args.partition)
    res = is_dc_stable(s, p)
    rep = {"partition": format_blocks(p.to_lists()), "stable": res.stable, "value": collection_value(s, p.blocks)}
    if res.stable:
        return EXIT_OK, rep, f"Dc-stable: YES  partition {rep['partition']}  value {rep['value']:.10g}"
    cx = res.counterexample
    if isinstance(cx.witness, int):
        wit = _users(cx.witness)
        desc = f"coalition {_set(cx.witness)}: sum of v(S & P_i) = {cx.lhs:.10g} < v(S) = {cx.rhs:.10g}"
    else:
        wit = [_users(m) for m in cx.witness.parts]
        desc = "split " + " | ".join(_set(m) for m in cx.witness.parts) + f": v(union) = {cx.lhs:.10g} < sum = {cx.rhs:.10g}"
    rep["counterexample"] = {"kind": cx.kind, "witness": wit, "lhs": cx.lhs, "rhs": cx.rhs}
    return EXIT_OK, rep, f"Dc-stable: NO  ({cx.kind}) {desc}"


def cmd_theorems(args):
    s = load_scenario(args.file)
    results = [thm_symmetric_nonempty(s), thm_rate_ratio_nonempty(s), thm_second_min_empty(s),
               thm_max_min_empty(s), thm_singleton_dc_sufficient(s)]
    if args.partition:
        p = _partition_arg(s, args.partition)
        results += [thm_banded_dc_sufficient(s, p), thm_banded_dc_sufficient(s, p, gap_reference="max")]
    rep = {"theorems": [t.to_dict() for t in results], "fired": [t.name for t in results if t.fires]}
    code = EXIT_OK if rep["fired"] else EXIT_INCONCLUSIVE
    return code, rep, "\n".join(["sufficient conditions:"] + [_theorem_line(t) for t in results])


def cmd_best_partition(args):
    s = load_scenario(args.file)
    best = best_partition_bruteforce(s)
    rep = {"partition": format_blocks(best.partition.to_lists()), "value": best.value}
    return EXIT_OK, rep, f"best partition: {rep['partition']}  value {best.value:.10g}"


def cmd_gen(args):
    if args.banded:
        rule, rule_doc = BandedFormula(), "banded"
    elif args.rates:
        rates = tuple(float(r) for r in args.rates.split(","))
        rule, rule_doc = ExplicitList(rates), {"explicit": list(rates)}
    else:
        raise argparse.ArgumentTypeError("gen needs --banded or --rates")
    s = generate_scenario(args.seed, args.n, rule)
    text = dump_scenario(s, args.out, generator={"seed": args.seed, "n": args.n, "rate_rule": rule_doc})
    return EXIT_OK, json.loads(text), text if args.out is None else f"wrote {args.out}"


def _sweep_base(doc: dict, spec_dir: Path) -> Scenario:
    if "scenario" in doc:
        return scenario_from_json(doc["scenario"])
    if "scenario_file" in doc:
        return load_scenario(spec_dir / doc["scenario_file"])
    return generate_scenario(int(doc.get("seed", 7)), 20)


def cmd_sweep(args):
    if args.reference:
        out = Path(args.reference)
        out.mkdir(parents=True, exist_ok=True)
        written = []
        for name, spec in reference_sweeps(seed=args.seed, annotate=args.annotate).items():
            name = name if args.format == "csv" else name.replace(".csv", ".jsonl")
            (out / name).write_text(emit_results(run_sweep(spec), args.format, spec.axis))
            written.append(str(out / name))
        return EXIT_OK, {"written": written}, "\n".join(f"wrote {w}" for w in written)
    if not (args.spec and args.out):
        raise argparse.ArgumentTypeError("sweep needs --spec and --out (or --reference DIR)")
    path = Path(args.spec)
    doc = json.loads(path.read_text())
    spec = sweep_from_json(doc, _sweep_base(doc, path.parent))
    rows = run_sweep(spec)
    Path(args.out).write_text(emit_results(rows, args.format, spec.axis))
    return EXIT_OK, {"written": [args.out], "rows": len(rows)}, f"wrote {len(rows)} rows to {args.out}"


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable report on stdout")

    p = argparse.ArgumentParser(prog="mcastgame", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__} (kernels: {kernels.BACKEND})")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("validate", parents=[common], help="validate a scenario file")
    sp.add_argument("file")
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("value", parents=[common], help="value of one coalition")
    sp.add_argument("file")
    sp.add_argument("--coalition", required=True, help="comma-separated 1-based users")
    sp.set_defaults(func=cmd_value)

    sp = sub.add_parser("check-core", parents=[common], help="is the core non-empty?")
    sp.add_argument("file")
    sp.add_argument("--method", choices=("lp", "theorems", "both"), default="both")
    sp.set_defaults(func=cmd_check_core)

    sp = sub.add_parser("check-convex", parents=[common], help="is the game convex?")
    sp.add_argument("file")
    sp.set_defaults(func=cmd_check_convex)

    sp = sub.add_parser("check-dc", parents=[common], help="is a partition Dc-stable?")
    sp.add_argument("file")
    sp.add_argument("--partition", required=True, help='blocks like "1,2,3;4,5"')
    sp.set_defaults(func=cmd_check_dc)

    sp = sub.add_parser("theorems", parents=[common], help="evaluate the closed-form sufficient conditions")
    sp.add_argument("file")
    sp.add_argument("--partition", help="partition for the banded Dc condition")
    sp.set_defaults(func=cmd_theorems)

    sp = sub.add_parser("best-partition", parents=[common], help="welfare-maximising partition (brute force)")
    sp.add_argument("file")
    sp.set_defaults(func=cmd_best_partition)

    sp = sub.add_parser("gen", parents=[common], help="generate a seeded scenario file")
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--banded", action="store_true", help="banded default rates")
    sp.add_argument("--rates", help="explicit comma-separated rates")
    sp.add_argument("--out", help="write to this file instead of stdout")
    sp.set_defaults(func=cmd_gen)

    sp = sub.add_parser("sweep", parents=[common], help="run a parameter sweep")
    sp.add_argument("--spec", help="sweep spec JSON file")
    sp.add_argument("--out", help="output table path")
    sp.add_argument("--format", choices=("csv", "jsonl"), default="csv")
    sp.add_argument("--reference", metavar="DIR", help="write all six reference sweeps into DIR")
    sp.add_argument("--seed", type=int, default=7, help="seed for --reference")
    sp.add_argument("--annotate", action="store_true", help="add core / Dc verdict columns (--reference)")
    sp.set_defaults(func=cmd_sweep)
    return p


def dispatch(argv=None, stdout=None) -> int:
    out = sys.stdout if stdout is None else stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        code, rep, text = args.func(args)
    except SizeLimitError as exc:
        code, rep, text = EXIT_LIMIT, {"error": "SizeLimit", "detail": str(exc)}, f"limit: {exc}"
    except SolverStallError as exc:
        code, rep, text = EXIT_LIMIT, {"error": "SolverStall", "detail": str(exc)}, f"limit: {exc}"
    except ScenarioError as exc:
        code, rep, text = EXIT_USAGE, {"error": "Scenario", "detail": str(exc)}, f"invalid scenario: {exc}"
    except (UnsupportedNError, GridDomainError, argparse.ArgumentTypeError, ValueError, KeyError, OSError) as exc:
        code, rep, text = EXIT_USAGE, {"error": type(exc).__name__, "detail": str(exc)}, f"error: {exc}"
    if args.json:
        rep = {"command": args.command, "exit_code": code, **rep}
        out.write(json.dumps(rep, sort_keys=True, indent=2, allow_nan=False) + "\n")
    else:
        out.write(text + "\n")
    return code


def main() -> None:
    sys.exit(dispatch())
