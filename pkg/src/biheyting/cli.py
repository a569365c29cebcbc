"""Command-line entry point: ``biheyting <command> [options]``.

Exit codes: 0 when every record passes, 1 when any record fails, 2 on
usage errors.  UNKNOWN records are flagged in the summary but do not fail
the run.  Reports are JSON (``--format json``) or one line per record.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Dict, List, Optional

from . import __version__, fine
from .formula import to_text
from .frames import FinitePoset, chain, antichain, enumerate_posets, evaluate, mask_of, members
from .parser import ParseError, parse, parse_sequent
from .prover import DEFAULT_BUDGET, DERIVABLE, NOT_DERIVABLE, ProofTask, make_prover

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _record(rid: str, status: str, details=None, time_ms: float = 0.0) -> Dict:
    return {"id": rid, "status": status, "details": details or {},
            "time_ms": round(time_ms, 3)}


def make_report(command: str, config: Dict, records: List[Dict]) -> Dict:
    summary = {"PASS": 0, "FAIL": 0, "UNKNOWN": 0}
    for r in records:
        summary[r["status"]] = summary.get(r["status"], 0) + 1
    return {"tool": "biheyting", "version": __version__, "command": command,
            "config": config, "records": records, "summary": summary}


def strip_timing(obj):
    """Copy of a report without timing fields, for determinism comparisons."""
    if isinstance(obj, dict):
        return {k: strip_timing(v) for k, v in obj.items()
                if k not in ("time_ms", "time_s")}
    if isinstance(obj, list):
        return [strip_timing(x) for x in obj]
    return obj


def exit_code(report: Dict) -> int:
    return EXIT_FAIL if report["summary"].get("FAIL", 0) else EXIT_OK


def _line(record: Dict) -> Dict:
    """One JSON line per record; prover results use the batch-result shape."""
    d = record["details"]
    if isinstance(d, dict) and "verdict" in d and "task" in d:
        out = {"task": d["task"], "verdict": d["verdict"], "nodes": d["nodes"],
               "time_ms": record["time_ms"]}
        if "countermodel" in d:
            out["countermodel"] = d["countermodel"]
        return out
    return record


def _emit(report: Dict, args) -> None:
    if args.format == "json":
        text = json.dumps(report, indent=2, ensure_ascii=False, default=str) + "\n"
    elif args.format == "jsonl":
        text = "".join(json.dumps(_line(r), ensure_ascii=False, default=str) + "\n"
                       for r in report["records"])
    else:
        lines = []
        for r in report["records"]:
            brief = r["details"].get("summary") if isinstance(r["details"], dict) else None
            extra = f"  {brief}" if isinstance(brief, str) else ""
            lines.append(f"{r['status']:7s} {r['id']}{extra}")
        s = report["summary"]
        lines.append(f"summary: {s.get('PASS', 0)} pass, {s.get('FAIL', 0)} fail, "
                     f"{s.get('UNKNOWN', 0)} unknown")
        text = "\n".join(lines) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- subcommands -----------------------------------------------------------------

def cmd_parse(args) -> Dict:
    records = []
    for text in args.formulas:
        try:
            phi = parse(text)
            records.append(_record(text, "PASS", {"canonical": to_text(phi),
                                                  "unicode": to_text(phi, unicode=True),
                                                  "summary": to_text(phi)}))
        except ParseError as exc:
            records.append(_record(text, "FAIL", {"error": str(exc), "line": exc.line,
                                                  "column": exc.column, "summary": str(exc)}))
    return make_report("parse", {"formulas": args.formulas}, records)


def _load_poset(spec: str) -> FinitePoset:
    if spec.startswith("chain:"):
        return chain(int(spec.split(":", 1)[1]))
    if spec.startswith("antichain:"):
        return antichain(int(spec.split(":", 1)[1]))
    if spec.startswith("fine:"):
        return fine.truncate(int(spec.split(":", 1)[1])).poset
    if spec.lstrip().startswith("{"):
        return FinitePoset.from_json(spec)
    with open(spec, encoding="utf-8") as fh:
        return FinitePoset.from_json(json.load(fh))


def cmd_eval(args) -> Dict:
    phi = parse(args.formula)
    raw = json.loads(args.valuation) if args.valuation else {}
    t0 = time.perf_counter()
    if args.fine:
        val = {k: fine.ClopenSet.from_json(v) for k, v in raw.items()}
        value = fine.eval_symbolic(val, phi)
        details = {"value": value.to_json(), "top": value == fine.FULL, "summary": repr(value)}
    else:
        P = _load_poset(args.poset)
        val = {k: mask_of(v) for k, v in raw.items()}
        value = evaluate(P, val, phi)
        details = {"value": members(value), "top": value == P.full,
                   "summary": "{" + ", ".join(P.label(i) for i in members(value)) + "}"}
    rec = _record(args.formula, "PASS", details, (time.perf_counter() - t0) * 1000)
    return make_report("eval", {"formula": args.formula, "poset": args.poset,
                                "fine": args.fine, "valuation": raw}, [rec])


def _prove_line(line: str, prover, budget: int, expect: Optional[str]) -> Dict:
    assumptions, goal = parse_sequent(line)
    task = ProofTask(tuple(assumptions), goal, budget)
    v = prover.proves(task)
    details = dict(v.to_json(timing=False), task=task.text(), summary=v.status)
    wanted = expect or DERIVABLE
    if v.status == wanted:
        status = "PASS"
    elif v.status in (DERIVABLE, NOT_DERIVABLE):
        status = "FAIL"
    else:
        status = "UNKNOWN"
    return _record(line, status, details, v.time_ms)


def cmd_prove(args) -> Dict:
    prover = make_prover(args.engine, args.budget, args.countermodel_size)
    config = {"engine": args.engine, "budget": args.budget, "expect": args.expect}
    if args.suite is not None:
        from .derivations import cross_validate, items, negative_controls, derivation_suite
        rep = derivation_suite(args.suite, args.budget, prover=prover, allow_large=args.large)
        recs = rep["records"] + negative_controls()
        xval = cross_validate(recs, {it.id: it for it in items(args.suite)})
        records = [r.to_json() for r in recs + xval]
        config["suite"] = args.suite
        return make_report("prove", config, records)
    lines = list(args.sequents)
    if args.batch:
        with open(args.batch, encoding="utf-8") as fh:
            lines += [ln.strip() for ln in fh if ln.strip() and not ln.startswith("#")]
        config["batch"] = args.batch
    if not lines:
        raise UsageError("prove needs a sequent, --batch FILE or --suite N")
    expect = {"derivable": DERIVABLE, "not-derivable": NOT_DERIVABLE}[args.expect]
    records = []
    for ln in lines:
        try:
            records.append(_prove_line(ln, prover, args.budget, expect))
        except ParseError as exc:
            if not args.batch:
                raise
            # one bad line should not hide the rest of a batch
            records.append(_record(ln, "FAIL", {"error": str(exc), "summary": str(exc)}))
    return make_report("prove", config, records)


def cmd_enumerate(args) -> Dict:
    records = []
    for n in range(1, args.n + 1):
        t0 = time.perf_counter()
        posets = list(enumerate_posets(n, up_to_iso=not args.labelled))
        details = {"n": n, "count": len(posets), "summary": f"{len(posets)} posets"}
        if args.list:
            details["posets"] = [P.to_json() for P in posets]
        records.append(_record(f"n={n}", "PASS", details, (time.perf_counter() - t0) * 1000))
    return make_report("enumerate", {"n": args.n, "labelled": args.labelled}, records)


def cmd_bb2(args) -> Dict:
    from .algebra_props import bb2_characterization_suite
    rep = bb2_characterization_suite(args.max_n, allow_six=args.max_n == 6)
    records = []
    for r in rep["records"]:
        rid = f"n={r['n']}:{','.join(map(str, r['canonical_key']))}"
        summary = "bb2 valid" if r["bb2_valid"] else "bb2 refuted"
        records.append(_record(rid, "PASS" if r["agree"] else "FAIL", dict(r, summary=summary)))
    return make_report("bb2-equiv", {"max_n": args.max_n}, records)


def cmd_fine(args) -> Dict:
    from . import fine_suites as fs
    config = {"suite": args.suite, "n": args.n, "seed": args.seed}
    records = []
    if args.suite == "abcd":
        rep = fs.abcd_suite(args.n, corrected=args.corrected)
        for r in rep["records"]:
            records.append(_record(r["id"], r["status"], r))
    elif args.suite == "delta0":
        rep = fs.delta0_refutation(args.n)
        ok = rep["refuted"] and rep["witness_is_expected"] and not rep["mismatches"]
        details = {"witness": rep["witness"].to_json(), "refuted": rep["refuted"],
                   "mismatches": rep["mismatches"], "summary": f"witness {rep['witness']!r}"}
        records.append(_record("delta0", "PASS" if ok else "FAIL", details))
    elif args.suite == "sample":
        from .families import bb2, delta, kappa, sh_implication_axiom
        cfg = fs.PoolConfig(seed=args.seed, random_upsets=args.samples,
                            random_valuations=args.samples)
        pool = fs.build_pool(cfg)
        targets = [("kappa0", kappa(0), True), ("sh_implication", sh_implication_axiom(), True),
                   ("delta0", delta(0), False)]
        for name, phi, valid in targets:
            r = fs.sample_validate(phi, cfg, pool)
            cex = r["counterexample"]
            ok = (cex is None) == valid
            details = {"valuations": r["valuations"], "pool_size": r["pool_size"],
                       "counterexample": None if cex is None else
                       {k: v.to_json() for k, v in cex.items()},
                       "summary": "no counterexample" if cex is None else
                       "counterexample " + ", ".join(f"{k}={v!r}" for k, v in cex.items())}
            records.append(_record(name, "PASS" if ok else "FAIL", details, r["time_s"] * 1000))
        r = fs.sample_triples(bb2(), args.samples, args.seed)
        records.append(_record("bb2", "PASS" if r["counterexample"] is None else "FAIL",
                               {"valuations": r["valuations"], "seed": args.seed}))
    elif args.suite == "extremal":
        rep = fs.extremal_failure_witness(args.samples, args.seed)
        records.append(_record("extremal", "PASS" if rep["not_extremally_disconnected"] else "FAIL",
                               rep))
    elif args.suite == "truncate-export":
        T = fine.truncate(args.n)
        details = {"poset": T.poset.to_json(with_labels=True), "points": T.poset.n}
        if args.dot:
            with open(args.dot, "w", encoding="utf-8") as fh:
                fh.write(fs.truncation_dot(args.n))
            details["dot"] = args.dot
        records.append(_record(f"truncate({args.n})", "PASS", details))
    return make_report("fine", config, records)


def cmd_incompleteness(args) -> Dict:
    from .algebra_props import finite_incompleteness_shadow, join_distributes_over_meets
    rep = finite_incompleteness_shadow(args.max_n)
    records = [_record("sh-implies-delta0", "FAIL" if rep["violations"] else "PASS",
                       dict(rep, summary=f"{rep['sh_models']} Sh-posets of {rep['posets']}"))]
    bad = [P.to_json() for n in range(1, args.max_n + 1) for P in enumerate_posets(n)
           if not join_distributes_over_meets(P)]
    records.append(_record("join-over-meet", "FAIL" if bad else "PASS", {"violations": bad}))
    return make_report("incompleteness", {"max_n": args.max_n}, records)


def cmd_export_dot(args) -> Dict:
    P = _load_poset(args.poset)
    text = P.to_dot(name=args.name)
    with open(args.path, "w", encoding="utf-8") as fh:
        fh.write(text)
    details = {"path": args.path, "nodes": P.n, "edges": len(P.covers())}
    return make_report("export-dot", {"poset": args.poset, "path": args.path},
                       [_record("export", "PASS", details)])


def cmd_acceptance(args) -> Dict:
    from .acceptance import AcceptanceConfig, run_acceptance
    cfg = AcceptanceConfig(seed=args.seed, budget=args.budget,
                           inject_fault=tuple(args.inject_fault or ()))
    rep = run_acceptance(cfg, args.only)
    for r in rep["records"]:
        r["details"] = dict(r["details"], summary=r["title"])
    return make_report("acceptance", rep["config"], rep["records"])


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "jsonl", "text"], default="text")
    common.add_argument("--output", "-o", help="write the report here instead of stdout")
    common.add_argument("--seed", type=int, default=20240611)

    ap = _Parser(prog="biheyting", description="Checks for intuitionistic and bi-intuitionistic logic.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("parse", parents=[common], help="parse and pretty-print formulas")
    p.add_argument("formulas", nargs="+")
    p.set_defaults(fn=cmd_parse)

    p = sub.add_parser("eval", parents=[common], help="evaluate a formula under a valuation")
    p.add_argument("formula")
    p.add_argument("--poset", default="chain:2",
                   help="poset JSON, a JSON file, chain:N, antichain:N or fine:K")
    p.add_argument("--valuation", help='JSON, e.g. {"p": [1]} (or ClopenSet JSON with --fine)')
    p.add_argument("--fine", action="store_true", help="evaluate in the clopen-upset algebra")
    p.set_defaults(fn=cmd_eval)

    p = sub.add_parser("prove", parents=[common], help="decide IPC sequents 'A1, A2 |- G'")
    p.add_argument("sequents", nargs="*")
    p.add_argument("--batch", help="file with one sequent per line")
    p.add_argument("--suite", type=int, metavar="N", help="run the family derivation suite up to N")
    p.add_argument("--large", action="store_true", help="allow --suite 3")
    p.add_argument("--engine", choices=["intuit", "g4ip"], default="intuit")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--countermodel-size", type=int, default=4)
    p.add_argument("--expect", choices=["derivable", "not-derivable"], default="derivable")
    p.set_defaults(fn=cmd_prove)

    p = sub.add_parser("enumerate", parents=[common], help="count posets up to isomorphism")
    p.add_argument("n", type=int)
    p.add_argument("--labelled", action="store_true")
    p.add_argument("--list", action="store_true", help="include every poset in the report")
    p.set_defaults(fn=cmd_enumerate)

    p = sub.add_parser("bb2-equiv", parents=[common], help="compare the bb2 characterizations")
    p.add_argument("--max-n", type=int, default=5)
    p.set_defaults(fn=cmd_bb2)

    p = sub.add_parser("fine", parents=[common], help="suites over the Fine space")
    p.add_argument("--suite", required=True,
                   choices=["abcd", "delta0", "sample", "extremal", "truncate-export"])
    p.add_argument("--n", type=int, default=20, help="index bound, or truncation depth")
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--corrected", action="store_true",
                   help="abcd: add the D'-corrected B'/C' identities")
    p.add_argument("--dot", help="truncate-export: also write a DOT file")
    p.set_defaults(fn=cmd_fine)

    p = sub.add_parser("incompleteness", parents=[common],
                       help="finite algebras validating Sh validate delta_0")
    p.add_argument("--max-n", type=int, default=5)
    p.set_defaults(fn=cmd_incompleteness)

    p = sub.add_parser("export-dot", parents=[common], help="write a Hasse diagram")
    p.add_argument("poset", help="poset JSON, a JSON file, chain:N, antichain:N or fine:K")
    p.add_argument("path")
    p.add_argument("--name", default="poset")
    p.set_defaults(fn=cmd_export_dot)

    p = sub.add_parser("acceptance", parents=[common], help="run the acceptance battery")
    p.add_argument("--only", nargs="*", metavar="ID", help="criterion ids such as C1 C7")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--inject-fault", nargs="*", metavar="ID", help=argparse.SUPPRESS)
    p.set_defaults(fn=cmd_acceptance)
    return ap


def _check_bounds(args) -> None:
    for name in ("n", "max_n", "budget", "samples", "suite"):
        v = getattr(args, name, None)
        if isinstance(v, int) and v < (0 if name == "suite" else 1):
            raise UsageError(f"--{name.replace('_', '-')} must be positive")


def run(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        _check_bounds(args)
        report = args.fn(args)
    except (UsageError, ParseError, ValueError, KeyError, OSError) as exc:
        print(f"biheyting {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    report["config"] = dict(report.get("config", {}), seed=args.seed, format=args.format)
    _emit(report, args)
    return exit_code(report)


def main() -> None:
    raise SystemExit(run())


if __name__ == "__main__":
    main()
