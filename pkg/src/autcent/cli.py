"""Command line: ``autcent {analyze,audit,verify,consistency}``.

Targets are built-in corpus names, the word ``corpus`` (whole built-in
corpus), presentation files, or directories of ``*.pcg`` files.

Exit codes: 0 success, 2 usage, 3 file not found, 4 parse error,
5 consistency failure, 6 theorem violation or lemma counterexample,
7 formula/oracle mismatch.
"""

from __future__ import annotations

import argparse
import json
import sys
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .analysis import LEMMA_NAMES, analyze
from .corpus import CorpusEntry, builtin_corpus, builtin_names, get_entry, load_directory, load_file
from .groups import FiniteGroup
from .oracle import DEFAULT_HOM_BUDGET, DEFAULT_SUBGROUP_BUDGET
from .pc import PresentationError, check_consistency, format_presentation, parse_presentation

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NOT_FOUND = 3
EXIT_PARSE = 4
EXIT_INCONSISTENT = 5
EXIT_VIOLATION = 6
EXIT_MISMATCH = 7

# when several problems occur, the first listed code wins
_PRIORITY = (EXIT_VIOLATION, EXIT_MISMATCH, EXIT_INCONSISTENT, EXIT_PARSE, EXIT_NOT_FOUND)


def worst(codes) -> int:
    codes = set(codes)
    for c in _PRIORITY:
        if c in codes:
            return c
    return EXIT_OK


@dataclass
class Loaded:
    entries: list[CorpusEntry] = field(default_factory=list)
    errors: list[tuple[str, int, str]] = field(default_factory=list)  # (target, code, message)


def resolve_targets(targets: list[str], corpus_only: bool = False) -> Loaded:
    out = Loaded()
    if corpus_only:
        targets = [t for t in targets if t == "corpus" or t in builtin_names()] or ["corpus"]
    if not targets:
        targets = ["corpus"]
    for t in targets:
        try:
            if t == "corpus":
                out.entries.extend(builtin_corpus(check=False))
            elif t in builtin_names():
                out.entries.append(get_entry(t))
            elif Path(t).is_dir():
                out.entries.extend(load_directory(t))
            elif Path(t).is_file():
                out.entries.extend(load_file(t))
            else:
                out.errors.append((t, EXIT_NOT_FOUND, "no such file, directory or corpus entry"))
        except PresentationError as exc:
            out.errors.append((t, EXIT_PARSE, str(exc)))
        except OSError as exc:
            out.errors.append((t, EXIT_NOT_FOUND, str(exc)))
    return out


def _report_errors(loaded: Loaded, as_json: bool) -> None:
    for target, code, msg in loaded.errors:
        if as_json:
            print(json.dumps({"target": target, "error": msg, "exit_code": str(code)}))
        else:
            print(f"error: {target}: {msg}", file=sys.stderr)


# per-group work (runs in worker processes when --jobs > 1) --------------------


def _group_row(verb: str, pres, consistency, group, opts: dict) -> dict:
    row = {"name": pres.name, "consistent": consistency.ok, "consistency": consistency.summary()}
    if verb == "consistency" or not consistency.ok:
        return row
    row["report"] = analyze(
        group(), oracle=opts["oracle"], budget_homs=opts["budget_homs"], budget_subgroups=opts["budget_subgroups"]
    )
    return row


def _group_task(task: tuple) -> dict:
    verb, text, opts = task
    pres = parse_presentation(text)
    return _group_row(verb, pres, check_consistency(pres), lambda: FiniteGroup.from_presentation(pres), opts)


def _run_tasks(verb: str, entries: list[CorpusEntry], opts: dict, jobs: int) -> list[dict]:
    if jobs > 1 and len(entries) > 1:
        # workers get plain text; presentations carry caches not worth pickling
        tasks = [(verb, format_presentation(e.presentation), opts) for e in entries]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_group_task, tasks))
    else:
        rows = [_group_row(verb, e.presentation, e.consistency, lambda e=e: e.group, opts) for e in entries]
    return sorted(rows, key=lambda r: r["name"])


def _opts(args, oracle: bool) -> dict:
    return {"oracle": oracle, "budget_homs": args.budget_homs, "budget_subgroups": args.budget_subgroups}


# verbs ------------------------------------------------------------------------


def cmd_analyze(args) -> int:
    loaded = resolve_targets([args.target])
    _report_errors(loaded, args.json)
    if loaded.errors:
        return worst(c for _, c, _ in loaded.errors)
    rows = _run_tasks("analyze", loaded.entries, _opts(args, args.oracle), args.jobs)
    code = EXIT_OK
    for i, row in enumerate(rows):
        if not row["consistent"]:
            print(row["consistency"] if not args.json else json.dumps({"name": row["name"], "error": row["consistency"]}))
            code = EXIT_INCONSISTENT
            continue
        report = row["report"]
        if args.json:
            print(report.to_json())
        else:
            if i:
                print()
            print(report.render_table())
    return code


def cmd_consistency(args) -> int:
    loaded = resolve_targets(args.targets, args.corpus_only)
    _report_errors(loaded, args.json)
    rows = _run_tasks("consistency", loaded.entries, _opts(args, False), args.jobs)
    codes = [c for _, c, _ in loaded.errors]
    for row in rows:
        if args.json:
            print(json.dumps({"name": row["name"], "consistent": "true" if row["consistent"] else "false", "summary": row["consistency"]}))
        else:
            print(row["consistency"])
        if not row["consistent"]:
            codes.append(EXIT_INCONSISTENT)
    return worst(codes)


def cmd_audit(args) -> int:
    loaded = resolve_targets(args.targets, args.corpus_only)
    _report_errors(loaded, args.json)
    rows = _run_tasks("audit", loaded.entries, _opts(args, True), args.jobs)
    codes = [c for _, c, _ in loaded.errors]
    theorem_counts: Counter = Counter()
    lemma_counts = {name: Counter() for name in LEMMA_NAMES}
    condition_counts: Counter = Counter()
    for row in rows:
        if not row["consistent"]:
            codes.append(EXIT_INCONSISTENT)
            msg = {"name": row["name"], "error": row["consistency"]}
            print(json.dumps(msg) if args.json else f"{row['name']}: skipped ({row['consistency']})")
            continue
        f = row["report"].fields()
        theorem_counts[f["theorem_status"]] += 1
        condition_counts[f["condition"].value] += 1
        for name in LEMMA_NAMES:
            lemma_counts[name][f[f"lemma_{name}"]] += 1
        bad = f["theorem_status"] == "VIOLATION" or any(f[f"lemma_{n}"] == "FAIL" for n in LEMMA_NAMES)
        if bad:
            codes.append(EXIT_VIOLATION)
        if args.json:
            print(json.dumps({
                "name": f["name"],
                "order": str(f["order"]),
                "condition": f["condition"].value,
                "theorem_rule": f["theorem_rule"],
                "theorem_status": f["theorem_status"],
                **{f"lemma_{n}": f[f"lemma_{n}"] for n in LEMMA_NAMES},
            }))
        else:
            lemmas = " ".join(f"{n}={f[f'lemma_{n}']}" for n in LEMMA_NAMES)
            print(
                f"{f['name']}: order {f['order']}, condition {f['condition'].value}, "
                f"theorem {f['theorem_status']} ({f['theorem_rule']}), {lemmas}"
            )
    summary = {
        "groups": str(len(rows)),
        "errors": str(len(loaded.errors)),
        "condition": {k: str(v) for k, v in sorted(condition_counts.items())},
        "theorem": {k: str(v) for k, v in sorted(theorem_counts.items())},
        **{f"lemma_{n}": {k: str(v) for k, v in sorted(lemma_counts[n].items())} for n in LEMMA_NAMES},
    }
    code = worst(codes)
    summary["exit_code"] = str(code)
    if args.json:
        print(json.dumps({"summary": summary}))
    else:
        print(f"summary: {len(rows)} groups, {len(loaded.errors)} load errors")
        for key in ("condition", "theorem", *(f"lemma_{n}" for n in LEMMA_NAMES)):
            counts = ", ".join(f"{k} {v}" for k, v in summary[key].items()) or "-"
            print(f"  {key}: {counts}")
    return code


def cmd_verify(args) -> int:
    loaded = resolve_targets(args.targets, args.corpus_only)
    _report_errors(loaded, args.json)
    rows = _run_tasks("verify", loaded.entries, _opts(args, True), args.jobs)
    codes = [c for _, c, _ in loaded.errors]
    mismatches = skipped = 0
    for row in rows:
        name = row["name"]
        if not row["consistent"]:
            codes.append(EXIT_INCONSISTENT)
            out = {"name": name, "status": "skipped", "reason": row["consistency"]}
        else:
            r = row["report"]
            if r.abelian:
                out = {"name": name, "status": "skipped", "reason": "abelian"}
            elif r.oracle_centz is None:
                out = {"name": name, "status": "skipped", "reason": "; ".join(r.notes) or "oracle unavailable"}
            else:
                ok_z = r.centz_formula == r.oracle_centz
                cent_checked = r.cent_formula_valid.value == "true"
                ok_c = (not cent_checked) or r.cent_formula == r.oracle_cent
                out = {
                    "name": name,
                    "status": "ok" if ok_z and ok_c else "MISMATCH",
                    "centz_formula": str(r.centz_formula),
                    "centz_oracle": str(r.oracle_centz),
                    "cent_formula": str(r.cent_formula),
                    "cent_oracle": str(r.oracle_cent),
                    "cent_compared": "true" if cent_checked else "false",
                    "purity": r.purity,
                }
                if out["status"] == "MISMATCH":
                    mismatches += 1
                    codes.append(EXIT_MISMATCH)
        if out["status"] == "skipped":
            skipped += 1
        if args.json:
            print(json.dumps(out))
        elif out["status"] == "skipped":
            print(f"{name}: skipped ({out['reason']})")
        else:
            cent = f"{out['cent_formula']} / {out['cent_oracle']}"
            if out["cent_compared"] == "false":
                cent += f" (not compared: {out['purity']})"
            print(f"{name}: {out['status']}  Autcent_Z formula/oracle {out['centz_formula']} / {out['centz_oracle']}"
                  f"  Autcent formula/oracle {cent}")
    code = worst(codes)
    if args.json:
        print(json.dumps({"summary": {"groups": str(len(rows)), "mismatches": str(mismatches), "skipped": str(skipped), "exit_code": str(code)}}))
    else:
        print(f"summary: {len(rows)} groups, {mismatches} mismatches, {skipped} skipped")
    return code


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit JSON lines instead of text")
    common.add_argument("--budget-homs", type=int, default=DEFAULT_HOM_BUDGET, metavar="N",
                        help="max homomorphisms the oracle may enumerate (default %(default)s)")
    common.add_argument("--budget-subgroups", type=int, default=DEFAULT_SUBGROUP_BUDGET, metavar="N",
                        help="max subgroups the direct-factor search may visit (default %(default)s)")
    common.add_argument("--jobs", type=int, default=1, metavar="N", help="worker processes")

    parser = argparse.ArgumentParser(prog="autcent", description="Central automorphism analysis of finite p-groups.")
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("analyze", parents=[common], help="full report for one group or file")
    p.add_argument("target", help="corpus name or presentation file")
    p.add_argument("--oracle", action="store_true", help="also run the brute-force oracle")
    p.set_defaults(func=cmd_analyze)

    for verb, func, text in (
        ("audit", cmd_audit, "check the classification and lemmas on many groups"),
        ("verify", cmd_verify, "compare order formulas with brute force"),
        ("consistency", cmd_consistency, "check presentations for consistency"),
    ):
        p = sub.add_parser(verb, parents=[common], help=text)
        p.add_argument("targets", nargs="*", help="corpus names, 'corpus', files or directories (default: corpus)")
        p.add_argument("--corpus-only", action="store_true", help="ignore file and directory targets")
        p.set_defaults(func=func)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
