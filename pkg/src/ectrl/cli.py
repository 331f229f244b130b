"""Command-line entry point.

Subcommands: gen (graph generation), analyze (single-shot driver count),
sweep (ensemble experiment -> CSV), oracle (exact validation suite),
schema (print the JSON config schema).

Exit codes: 0 success, 1 runtime/I-O failure, 2 usage or config error.
Standard output carries machine-readable payloads only; logs go to stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

import numpy as np

from . import control, experiments, netgen
from .config import CONFIG_SCHEMA, config_from_dict, parse_rational
from .dynamics import InvalidAssignmentError, assemble, assign_types, make_unit_type
from .experiments import InvalidConfigError, emit_csv, run_sweep
from .netgen import GraphSpec, InvalidSpecError

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_USAGE = 2


def _log(msg: str) -> None:
    print(msg, file=sys.stderr)


def cmd_gen(args) -> int:
    spec = GraphSpec(
        model=args.model,
        n_nodes=args.n,
        mean_degree=args.k,
        gamma=args.gamma,
        directed=args.directed,
        seed=args.seed,
    )
    t = netgen.generate(spec)
    netgen.write_edgelist(t, args.out)
    st = netgen.degree_stats(t)
    print(
        f"N={t.n_nodes} edges={t.n_edges} mean_degree={st.mean_degree:.4g} "
        f"min={st.min_degree} max={st.max_degree} isolated={st.isolated}"
    )
    return EXIT_OK


def parse_types_flag(spec: str, order: int):
    """Parse ``--types``: comma-separated ``eigs:density`` entries, where eigs
    is ``+``-joined rationals for order > 1 (e.g. ``2+3:0.5,0+1:0.5``)."""
    types, densities = [], []
    for part in spec.split(","):
        if ":" not in part:
            raise ValueError(f"bad type entry {part!r} (want eigs:density)")
        eig_s, den_s = part.rsplit(":", 1)
        eigs = [parse_rational(e) for e in eig_s.split("+")]
        if len(eigs) != order:
            raise ValueError(f"type {part!r} has {len(eigs)} eigenvalues, order is {order}")
        types.append(eigs)
        densities.append(parse_rational(den_s))
    return types, densities


def cmd_analyze(args) -> int:
    t = netgen.read_edgelist(args.edgelist)
    if args.types:
        type_eigs, dens = parse_types_flag(args.types, args.order)
    else:
        type_eigs, dens = [[Fraction(0)] * args.order], [Fraction(1)]
    uts = [make_unit_type(args.order, e, type_id=i) for i, e in enumerate(type_eigs)]
    a = assign_types(uts, dens, t.n_nodes, seed=args.seed)
    m = assemble(t, a)
    if args.method == "et":
        res = control.nd_et(m, seed=args.seed, trials=args.trials)
    elif args.method == "ect_numeric":
        phi = experiments._float_realization(m, args.seed)
        res = control.nd_ect_numeric(phi)
    elif args.method == "ect_symmetric":
        phi = experiments._float_realization(m, args.seed)
        res = control.nd_ect_symmetric(phi)
    elif args.method == "sct_matching":
        res = control.nd_sct_matching(t, a if args.order == 1 else None)
    else:  # argparse choices should prevent this
        raise ValueError(f"unknown method {args.method!r}")
    print(json.dumps(res.to_json_dict(), indent=2, default=str))
    return EXIT_OK


def cmd_sweep(args) -> int:
    with open(args.config) as fh:
        doc = json.load(fh)
    cfg = config_from_dict(doc)
    jobs = args.jobs or int(os.environ.get("ECTRL_JOBS", "0")) or cfg.jobs
    if jobs != cfg.jobs:
        from dataclasses import replace

        cfg = replace(cfg, jobs=jobs)
    def progress(done, total):
        if done % 25 == 0 or done == total:
            _log(f"[sweep] {done}/{total} tasks")
    rows = run_sweep(cfg, progress=progress)
    emit_csv(rows, args.out)
    _log(f"[sweep] wrote {len(rows)} rows to {args.out}")
    return EXIT_OK


def cmd_oracle(args) -> int:
    if args.instances < 1:
        raise InvalidConfigError("--instances must be >= 1")
    if args.max_n < 2 or args.max_n > control.ORACLE_DIM_CAP:
        raise InvalidConfigError(
            f"--max-n must be in [2, {control.ORACLE_DIM_CAP}] (exact-oracle cap)"
        )
    from .validation import oracle_agreement_suite, shift_check_suite

    shift = shift_check_suite(n_instances=args.instances, max_n=min(args.max_n, 8), seed=args.seed)
    agree = oracle_agreement_suite(n_instances=args.instances, max_dim=args.max_n, seed=args.seed)
    ok_shift = shift.failures == 0
    ok_agree = agree.agreement_rate >= 0.99
    print(
        f"shift-check: {shift.passed}/{shift.total} passed\n"
        f"oracle-agreement: {agree.agreed}/{agree.total} agreed "
        f"({100 * agree.agreement_rate:.2f}%)"
    )
    for line in shift.diagnostics + agree.diagnostics:
        _log(line)
    return EXIT_OK if (ok_shift and ok_agree) else EXIT_RUNTIME


def cmd_schema(_args) -> int:
    print(json.dumps(CONFIG_SCHEMA, indent=2))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ectrl", description=__doc__)
    sub = p.add_subparsers(dest="subcommand", required=True)

    g = sub.add_parser("gen", help="generate a random graph edge list")
    g.add_argument("--model", choices=["er", "sf"], required=True)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--k", type=float, required=True)
    g.add_argument("--gamma", type=float, default=3.0)
    g.add_argument("--directed", action="store_true")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", default="graph.edges")
    g.set_defaults(func=cmd_gen)

    a = sub.add_parser("analyze", help="driver count of one graph + assignment")
    a.add_argument("edgelist")
    a.add_argument("--types", default="", help='e.g. "2:0.5,0:0.5"; order>1: "2+3:1"')
    a.add_argument("--order", type=int, default=1)
    a.add_argument(
        "--method",
        choices=["et", "ect_numeric", "ect_symmetric", "sct_matching"],
        default="et",
    )
    a.add_argument("--seed", type=int, default=0)
    a.add_argument("--trials", type=int, default=3)
    a.set_defaults(func=cmd_analyze)

    s = sub.add_parser("sweep", help="run an ensemble experiment from a JSON config")
    s.add_argument("config")
    s.add_argument("--out", default="sweep.csv")
    s.add_argument("--jobs", type=int, default=0, help="worker processes (env ECTRL_JOBS)")
    s.set_defaults(func=cmd_sweep)

    o = sub.add_parser("oracle", help="exact validation suites (shift identity, oracle agreement)")
    o.add_argument("--instances", type=int, default=200)
    o.add_argument("--max-n", type=int, default=8, dest="max_n")
    o.add_argument("--seed", type=int, default=0)
    o.set_defaults(func=cmd_oracle)

    c = sub.add_parser("schema", help="print the JSON config schema")
    c.set_defaults(func=cmd_schema)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_USAGE
    try:
        return args.func(args)
    except (
        InvalidSpecError,
        InvalidAssignmentError,
        InvalidConfigError,
        ValueError,
        json.JSONDecodeError,
    ) as exc:
        _log(f"error: {exc}")
        return EXIT_USAGE
    except (OSError, RuntimeError) as exc:
        _log(f"error: {exc}")
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
