"""Command-line front end: ``genus-dp <command> ...``.

Exit codes: 0 success, 1 verification failure, 2 input error.  Reports are
JSON (sorted keys), so reruns with the same input and flags are byte-identical;
wall times are only emitted when ``--timings`` is given.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .decomposition import BranchDecomposition, branchwidth_exact, branchwidth_heuristic, decomposition_from_json
from .embedding import euler_genus
from .errors import GenusDPError, StructuralInputError
from .formats import format_emb, read_emb
from .generators import FAMILIES, generate, nonorientable_corpus, planar_corpus, toroidal_corpus
from .polyhedral import polyhedral_decomposition
from .surface_cut import surface_cut_decomposition, verify_scd

EXIT_OK, EXIT_VERIFY, EXIT_INPUT = 0, 1, 2

CORPORA = {"planar": planar_corpus, "toroidal": toroidal_corpus, "nonorientable": nonorientable_corpus}


def threads():
    try:
        return max(1, int(os.environ.get("GENUS_DP_THREADS", "1")))
    except ValueError:
        return 1


def emit(data, out=None):
    text = json.dumps(data, indent=2, sort_keys=True) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _positive(text):
    val = int(text)
    if val <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return val


# ---------------------------------------------------------------------------
# commands


def cmd_info(args):
    g = read_emb(args.file)
    emit(euler_genus(g).as_dict(), args.output)
    return EXIT_OK


def cmd_poly(args):
    g = read_emb(args.file)
    emit(polyhedral_decomposition(g).to_json(), args.output)
    return EXIT_OK


def _scd_json(scd, report):
    return {
        "width": scd.width,
        "merged_width": scd.merged_width,
        "k_used": scd.k_used,
        "apices": sorted(scd.pd.apices, key=repr),
        "stages": [
            {
                "component": s.component, "edges": s.edges, "euler_genus": s.euler_genus,
                "branch_width": s.branch_width, "carving_width": s.carving_width,
                "bond_width": s.bond_width, "final_width": s.final_width, "exact": s.exact,
            }
            for s in scd.stages
        ],
        "decomposition": scd.bd.to_json(),
        "verification": report.to_json(),
    }


def cmd_scd(args):
    g = read_emb(args.file)
    scd = surface_cut_decomposition(g, args.exact_limit)
    emit(_scd_json(scd, verify_scd(scd)), args.output or args.report)
    return EXIT_OK


def cmd_verify(args):
    g = read_emb(args.file)
    scd = surface_cut_decomposition(g, args.exact_limit)
    report = verify_scd(scd, args.max_nooses, args.max_theta)
    emit(report.to_json(), args.output)
    return EXIT_OK if report.passed else EXIT_VERIFY


def _decomposition(g, kind, exact_limit):
    if kind == "scd":
        return surface_cut_decomposition(g, exact_limit).bd
    if kind == "exact":
        return branchwidth_exact(g)[1]
    return branchwidth_heuristic(g)


def _load_decomposition(path):
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, ValueError) as exc:
        raise StructuralInputError(f"cannot read decomposition {path}: {exc}")
    data = data.get("decomposition", data)
    bd = decomposition_from_json(data)
    if not isinstance(bd, BranchDecomposition):
        raise StructuralInputError("expected a branch decomposition")
    return bd


def cmd_solve(args):
    from .dp import run_dp, table_stats

    g = read_emb(args.file)
    if args.decomp_file:
        bd = _load_decomposition(args.decomp_file)
    else:
        bd = _decomposition(g, args.decomp, args.exact_limit) if g.m else None
    run = run_dp(args.problem, g, bd)
    answer = run.decide(args.budget)
    out = {
        "problem": args.problem,
        "budget": args.budget,
        "answer": answer,
        "optimum": run.optimum,
        "decomposition": "file" if args.decomp_file else args.decomp,
        "width": bd.width if bd is not None else 0,
        "witness": sorted(run.witness, key=repr) if answer else None,
    }
    if args.stats:
        emit(table_stats(run, args.budget).to_json(), args.stats)
    emit(out, args.output)
    return EXIT_OK


def bench_one(path, exact_limit, timings):
    from .dp import run_dp, table_stats

    row = {"instance": Path(path).name}
    start = time.perf_counter()
    try:
        g = read_emb(path)
        row.update(vertices=g.n, edges=g.m, euler_genus=euler_genus(g).euler_genus)
        scd = surface_cut_decomposition(g, exact_limit)
        report = verify_scd(scd)
        row.update(
            bw_used=scd.k_used, scd_width=scd.width, apices=len(scd.pd.apices),
            max_nooses=report.max_nooses, max_theta=report.max_theta, verified=report.passed,
        )
        for problem in ("vc", "cvc"):
            run = run_dp(problem, g, scd.bd)
            stats = table_stats(run)
            row[f"{problem}_optimum"] = run.optimum
            row[f"{problem}_max_entries"] = stats.max_entries
        row["error"] = None
    except (GenusDPError, AssertionError) as exc:
        row["error"] = f"{type(exc).__name__}: {exc}"
    if timings:
        row["wall_time"] = round(time.perf_counter() - start, 4)
    return row


def cmd_bench(args):
    root = Path(args.corpus)
    if not root.is_dir():
        raise GenusDPError(f"{root} is not a directory")
    files = sorted(str(p) for p in root.glob("*.emb"))
    workers = min(args.threads or threads(), max(1, len(files)))
    jobs = [(f, args.exact_limit, args.timings) for f in files]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(bench_one, *zip(*jobs)))
    else:
        rows = [bench_one(*j) for j in jobs]
    if args.format == "csv":
        keys = sorted({k for r in rows for k in r}, key=lambda k: (k != "instance", k))
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        if args.output:
            Path(args.output).write_text(buf.getvalue())
        else:
            sys.stdout.write(buf.getvalue())
    else:
        emit({"instances": rows}, args.output)
    return EXIT_OK


def cmd_gen(args):
    if args.corpus:
        out = Path(args.output or ".")
        out.mkdir(parents=True, exist_ok=True)
        for name, g in CORPORA[args.family]():
            (out / f"{name}.emb").write_text(format_emb(g))
        return EXIT_OK
    g = generate(args.family, args.size, args.seed)
    text = format_emb(g)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def build_parser():
    p = argparse.ArgumentParser(prog="genus-dp", description="Surface cut decompositions and DP on embedded graphs.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_text, file=True):
        sp = sub.add_parser(name, help=help_text)
        if file:
            sp.add_argument("file", help=".emb input")
        sp.add_argument("-o", "--output", help="write the report here instead of stdout")
        sp.set_defaults(func=func)
        return sp

    add("info", cmd_info, "surface summary of an embedding")
    add("poly", cmd_poly, "polyhedral decomposition")
    for name, func, help_text in (("scd", cmd_scd, "surface cut decomposition"),
                                  ("verify", cmd_verify, "build and verify a surface cut decomposition")):
        sp = add(name, func, help_text)
        sp.add_argument("--exact-limit", "--exact-bw-limit", dest="exact_limit", type=int, default=12,
                        help="exact branchwidth up to this many edges")
        if name == "scd":
            sp.add_argument("--report", help="alias of --output")
        if name == "verify":
            sp.add_argument("--max-nooses", type=_positive, help="fail if a certificate needs more nooses")
            sp.add_argument("--max-theta", type=_positive, help="fail if a certificate has larger theta")

    sp = add("solve", cmd_solve, "vertex cover / connected vertex cover by DP")
    sp.add_argument("--problem", choices=("vc", "cvc"), required=True)
    sp.add_argument("--budget", type=int, required=True)
    sp.add_argument("--decomp", choices=("scd", "exact", "heuristic"), default="scd")
    sp.add_argument("--decomp-file", help="branch decomposition JSON (as written by 'scd') to use instead")
    sp.add_argument("--exact-limit", "--exact-bw-limit", dest="exact_limit", type=int, default=12)
    sp.add_argument("--stats", help="write table statistics JSON here")

    sp = add("bench", cmd_bench, "run the pipeline over a directory of .emb files", file=False)
    sp.add_argument("corpus", help="directory of .emb files")
    sp.add_argument("--exact-limit", type=int, default=12)
    sp.add_argument("--format", choices=("json", "csv"), default="json")
    sp.add_argument("--threads", type=_positive, help="worker processes (default: GENUS_DP_THREADS or 1)")
    sp.add_argument("--timings", action="store_true", help="include wall times (output is then not reproducible)")

    sp = add("gen", cmd_gen, "generate an embedding, or a whole corpus with --corpus", file=False)
    sp.add_argument("family", help=f"one of {', '.join(sorted(FAMILIES))}; with --corpus one of "
                                   f"{', '.join(sorted(CORPORA))}")
    sp.add_argument("size", type=int, nargs="?", default=4)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--corpus", action="store_true", help="write a named corpus into the --output directory")
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "corpus", None) is True and args.family not in CORPORA:
        print(f"genus-dp: unknown corpus {args.family!r}", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except GenusDPError as exc:
        print(f"genus-dp: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
