"""Command-line front end.

Exit codes: 0 when every check passes, 1 when a check finds a mismatch,
2 for configuration and usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

from . import dilation as dil
from . import qdiff
from . import weighted as wt
from .colours import all_perms, identity, parse_perm
from .errors import QSchurError, UsageError
from .parallel import pmap
from .report import VerificationReport
from .series import (MultiSeries, TruncationBox, format_term, invert_unit, monomial_exponents, parse_monomial,
                     pochhammer, pochhammer_inf, product_side)

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE = 0, 1, 2
DEFAULT_MAX_COST = 10 ** 6


@dataclass
class RunConfig:
    command: str
    r: int = 2
    N: int = 3
    a: tuple[int, ...] = (1, 2)
    sigma: tuple[int, ...] | None = None
    qmax: int = 12
    umax: int = 3
    dmax: int = 3
    xmax: int = 6
    fmt: str = "text"
    list_objects: bool = False
    perturb: bool = False
    max_cost: int = DEFAULT_MAX_COST
    extra: dict = field(default_factory=dict)


# -- helpers -------------------------------------------------------------------

def _ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise UsageError(f"expected a comma-separated list of integers, got {text!r}") from None


def _sigmas(cfg: RunConfig, r: int) -> list[tuple[int, ...]]:
    if cfg.sigma is not None:
        return [parse_perm(",".join(map(str, cfg.sigma)), r)]
    return list(all_perms(r))


def _guard(cfg: RunConfig, cost: int, what: str) -> None:
    if cost > cfg.max_cost:
        raise UsageError(f"{what}: estimated cost {cost} exceeds the ceiling {cfg.max_cost} "
                         f"(raise it with --max-cost)")


def estimate_cost(cfg: RunConfig, r: int, n_sigma: int = 1, with_x: bool = False) -> int:
    """Product of the per-key budgets, times the number of permutations."""
    keys = (cfg.qmax + 1) * (cfg.umax + 1) ** r * (cfg.dmax + 1)
    if with_x:
        keys *= cfg.xmax + 1
    return keys * n_sigma


def _perturb_table(table: dict) -> dict:
    """Corrupt one count (negative control)."""
    t = dict(table)
    key = sorted(t)[len(t) // 2]
    t[key] += 1
    return t


def _emit(cfg: RunConfig, reports: list[VerificationReport], out=None) -> int:
    out = out or sys.stdout
    passed = all(r.passed for r in reports)
    if cfg.fmt == "json":
        payload = {"schema": 1, "command": cfg.command, "passed": passed,
                   "reports": [r.to_dict() for r in reports]}
        print(json.dumps(payload, indent=2), file=out)
    else:
        for rep in reports:
            print(rep.render(), file=out)
        n_fail = sum(not r.passed for r in reports)
        print(f"{len(reports) - n_fail}/{len(reports)} checks passed", file=out)
    return EXIT_OK if passed else EXIT_MISMATCH


# -- verify ---------------------------------------------------------------------

def _weighted_job(args) -> VerificationReport:
    r, sigma, box, method, perturb = args
    d = wt.enumerate_D(r, box)
    e = wt.enumerate_E(r, sigma, box, method=method)
    if perturb:
        e = _perturb_table(e)
    return wt.check_weighted(r, sigma, box, method, d_table=d, e_table=e)


def cmd_verify_weighted(cfg: RunConfig) -> int:
    r = cfg.r
    if r < 1:
        raise UsageError(f"r must be >= 1, got {r}")
    sigmas = _sigmas(cfg, r)
    method = cfg.extra.get("method", "transfer")
    _guard(cfg, estimate_cost(cfg, r, len(sigmas)) * (20 if method == "brute" else 1), "verify weighted")
    box = TruncationBox(r=r, qmax=cfg.qmax, umax=cfg.umax, dmax=cfg.dmax)
    reports = pmap(_weighted_job, [(r, s, box, method, cfg.perturb) for s in sigmas])
    return _emit(cfg, reports)


def _alphabet(cfg: RunConfig) -> dil.Alphabet:
    return dil.Alphabet(cfg.N, cfg.a)


def _dilated_job(args) -> list[VerificationReport]:
    alph, sigma, box, perturb = args
    tables = dil.enumerate_dilated(alph, sigma, box)
    if perturb:
        tables = dict(tables, E=_perturb_table(tables["E"]))
    reps = dil.check_dilated(alph, sigma, box, tables)
    reps += dil.check_transport_tables(alph, sigma, box, tables)
    return reps


def cmd_verify_dilated(cfg: RunConfig) -> int:
    alph = _alphabet(cfg)
    r = alph.r
    sigmas = _sigmas(cfg, r)
    _guard(cfg, estimate_cost(cfg, r, len(sigmas)), "verify dilated")
    box = TruncationBox(r=r, qmax=cfg.qmax, umax=cfg.umax, dmax=cfg.dmax)
    reports: list[VerificationReport] = []
    for reps in pmap(_dilated_job, [(alph, s, box, cfg.perturb) for s in sigmas]):
        reports += reps
    reports += dil.check_unrefined(alph, box)
    reports += dil.check_k0_slices(alph, box)
    reports.append(dil.check_subset_sum_comparison(alph))
    reports.append(dil.check_final_part_equivalence(alph))
    if alph.a == (1, 2):
        reports.append(dil.check_matrices((alph.N,) if alph.N <= 5 else (3, 4, 5)))
        if alph.N == 3:
            reports.append(dil.check_companion())
            reports += dil.check_schur(min(cfg.qmax, 30))
    return _emit(cfg, reports)


def cmd_verify_qdiff(cfg: RunConfig) -> int:
    r = cfg.r
    if r < 1:
        raise UsageError(f"r must be >= 1, got {r}")
    box = TruncationBox(r=r, qmax=cfg.qmax, umax=cfg.umax, dmax=cfg.dmax, xmax=cfg.xmax)
    qdiff.require_sound_box(r, box)
    _guard(cfg, estimate_cost(cfg, r, with_x=True), "verify qdiff")
    fam = qdiff.build_family(r, box)
    if cfg.perturb:
        fam = fam.perturbed(1, monomial_exponents(r, q=min(3, box.qmax), u={1: 1}, x=1))
    res = qdiff.run_pipeline(r, box, fam=fam, exhaustive_counts=cfg.extra.get("counts", True))
    return _emit(cfg, res.reports)


# -- expand -----------------------------------------------------------------------

def _q_box(qmax: int) -> TruncationBox:
    return TruncationBox(r=1, qmax=qmax)


def expand_overpartitions(qmax: int) -> MultiSeries:
    """(-q; q)_inf / (q; q)_inf."""
    box = _q_box(qmax)
    q = monomial_exponents(1, q=1)
    return pochhammer_inf(q, -1, box) * invert_unit(pochhammer_inf(q, 1, box))


def expand_distinct_residues(qmax: int, modulus: int, residues: tuple[int, ...]) -> MultiSeries:
    """prod over parts p = res mod modulus of (1 + q^p): distinct parts from the given classes."""
    box = _q_box(qmax)
    out = MultiSeries.one(box)
    for p in range(1, qmax + 1):
        if p % modulus in residues:
            out = out + out.shift(monomial_exponents(1, q=p))
    return out


def cmd_expand(cfg: RunConfig) -> int:
    what = cfg.extra["what"]
    if what == "overpartitions":
        s = expand_overpartitions(cfg.qmax)
    elif what == "schur":
        s = expand_distinct_residues(cfg.qmax, 3, (1, 2))
    elif what == "product":
        box = TruncationBox(r=cfg.r, qmax=cfg.qmax, umax=cfg.umax, dmax=cfg.dmax)
        _guard(cfg, estimate_cost(cfg, cfg.r), "expand product")
        s = product_side(cfg.r, box)
    elif what == "pochhammer":
        spec = cfg.extra.get("monomial")
        if not spec:
            raise UsageError("expand pochhammer needs --monomial, e.g. --monomial u1*d")
        box = TruncationBox(r=cfg.r, qmax=cfg.qmax, umax=cfg.umax, dmax=cfg.dmax, xmax=cfg.xmax)
        exps = parse_monomial(spec, cfg.r)
        sign = cfg.extra.get("sign", 1)
        n = cfg.extra.get("n")
        s = pochhammer_inf(exps, sign, box) if n is None else pochhammer(exps, sign, n, box)
    else:
        raise UsageError(f"unknown expansion {what!r}")
    terms = s.terms()
    if cfg.fmt == "json":
        print(json.dumps({"schema": 1, "command": "expand", "what": what, "box": s.box.to_dict(),
                          "terms": [[list(e), c] for e, c in terms]}, indent=2))
    else:
        for e, c in terms:
            print(format_term(s.box, e, c))
    return EXIT_OK


# -- enumerate --------------------------------------------------------------------

def cmd_enumerate(cfg: RunConfig) -> int:
    what = cfg.extra["what"]
    if what == "overpartitions":
        objs = wt.overpartitions(cfg.qmax)
        if cfg.list_objects:
            for op in objs:
                print(wt.format_overpartition(op) or "(empty)")
        print(f"{len(objs)} overpartitions of {cfg.qmax}")
        return EXIT_OK
    r = cfg.r
    if r < 1:
        raise UsageError(f"r must be >= 1, got {r}")
    box = TruncationBox(r=r, qmax=cfg.qmax, umax=cfg.umax, dmax=cfg.dmax)
    sigma = parse_perm(",".join(map(str, cfg.sigma)), r) if cfg.sigma is not None else identity(r)
    _guard(cfg, estimate_cost(cfg, r) * (20 if cfg.list_objects or what == "E" else 1), "enumerate")
    if cfg.list_objects:
        it = wt.iter_D(r, box) if what == "D" else wt.iter_E(r, sigma, box)
        count = 0
        for parts in it:
            print(wt.format_parts(parts) or "(empty)")
            count += 1
        print(f"{count} objects")
        return EXIT_OK
    table = wt.enumerate_D(r, box) if what == "D" else wt.enumerate_E(r, sigma, box, method="brute")
    if cfg.fmt == "json":
        print(json.dumps({"schema": 1, "command": "enumerate", "what": what, "key": "l_1..l_r,k,n",
                          "counts": [[list(k), c] for k, c in sorted(table.items())]}, indent=2))
    else:
        for key, c in sorted(table.items()):
            print(" ".join(map(str, key)), c)
    return EXIT_OK


# -- argument parsing -------------------------------------------------------------

def _box_args(p: argparse.ArgumentParser, qmax_help: str = "largest weight n (q-degree)") -> None:
    p.add_argument("--qmax", type=int, default=12, help=qmax_help)
    p.add_argument("--umax", type=int, default=3, help="largest count per primary colour")
    p.add_argument("--dmax", type=int, default=3, help="largest number of non-overlined parts")


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", dest="fmt", choices=("text", "json"), default="text")
    p.add_argument("--max-cost", type=int, default=DEFAULT_MAX_COST,
                   help="refuse runs whose estimated cost is larger (default %(default)s)")
    p.add_argument("--perturb", action="store_true", help=argparse.SUPPRESS)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qschur", description="Exact checks of coloured overpartition identities.")
    sub = ap.add_subparsers(dest="command", required=True)

    vp = sub.add_parser("verify", help="run a verification suite")
    vsub = vp.add_subparsers(dest="suite", required=True)

    p = vsub.add_parser("weighted", help="D side against E side for every (or one) permutation")
    p.add_argument("--r", type=int, default=2)
    p.add_argument("--sigma", type=str, default=None, help="permutation as images, e.g. 2,1")
    p.add_argument("--method", choices=("transfer", "brute"), default="transfer")
    _box_args(p)
    _common(p)

    p = vsub.add_parser("dilated", help="the four modulus-class tables for an alphabet")
    p.add_argument("--N", type=int, default=3)
    p.add_argument("--a", type=str, default="1,2", help="alphabet, e.g. 1,2,4")
    p.add_argument("--sigma", type=str, default=None)
    _box_args(p, "largest weight n")
    _common(p)

    p = vsub.add_parser("qdiff", help="the q-difference equation pipeline")
    p.add_argument("--r", type=int, default=2)
    p.add_argument("--xmax", type=int, default=6, help="largest number of parts tracked (>= r*umax)")
    p.add_argument("--skip-counts", action="store_true", help="skip the exhaustive count identities")
    _box_args(p)
    _common(p)

    p = sub.add_parser("expand", help="print the terms of a truncated product")
    p.add_argument("what", choices=("overpartitions", "schur", "product", "pochhammer"))
    p.add_argument("--r", type=int, default=2)
    p.add_argument("--xmax", type=int, default=6)
    p.add_argument("--monomial", type=str, default=None, help="base monomial for pochhammer, e.g. u1*d")
    p.add_argument("--sign", type=int, choices=(1, -1), default=1, help="(sign*M; q) with sign +1 or -1")
    p.add_argument("--n", type=int, default=None, help="finite length (default: infinite)")
    _box_args(p)
    _common(p)

    p = sub.add_parser("enumerate", help="count or list objects on one side")
    p.add_argument("what", choices=("D", "E", "overpartitions"))
    p.add_argument("--r", type=int, default=2)
    p.add_argument("--sigma", type=str, default=None)
    p.add_argument("--list", dest="list_objects", action="store_true", help="print every object")
    _box_args(p)
    _common(p)
    return ap


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    command = ns.command if ns.command != "verify" else f"verify {ns.suite}"
    cfg = RunConfig(command=command, qmax=ns.qmax, umax=ns.umax, dmax=ns.dmax, fmt=ns.fmt,
                    perturb=ns.perturb, max_cost=ns.max_cost)
    for name in ("r", "N", "xmax"):
        if hasattr(ns, name):
            setattr(cfg, name, getattr(ns, name))
    if getattr(ns, "a", None) is not None:
        cfg.a = _ints(ns.a)
    if getattr(ns, "sigma", None):
        cfg.sigma = _ints(ns.sigma)
    cfg.list_objects = getattr(ns, "list_objects", False)
    for name in ("method", "what", "monomial", "sign", "n"):
        if hasattr(ns, name):
            cfg.extra[name] = getattr(ns, name)
    if getattr(ns, "skip_counts", False):
        cfg.extra["counts"] = False
    for name in ("qmax", "umax", "dmax", "xmax"):
        if getattr(cfg, name) < 0:
            raise UsageError(f"--{name} must be non-negative")
    return cfg


COMMANDS = {
    "verify weighted": cmd_verify_weighted,
    "verify dilated": cmd_verify_dilated,
    "verify qdiff": cmd_verify_qdiff,
    "expand": cmd_expand,
    "enumerate": cmd_enumerate,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        cfg = config_from_args(ns)
        return COMMANDS[cfg.command](cfg)
    except QSchurError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
