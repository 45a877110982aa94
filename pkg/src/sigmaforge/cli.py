"""Command-line front end.

    sigmaforge analyze <file|catalog:NAME> --sigma SPEC [--check NAME ...] [--json]
                       [--dot FILE] [--cap N] [--jobs K]
    sigmaforge check NAME <file|catalog:NAME> --sigma SPEC
    sigmaforge check corpus --sigma SPEC
    sigmaforge corpus [--manifest FILE] [--sigma SPEC] [--json] [--jobs K]
    sigmaforge catalog

Exit codes: 0 all verdicts true, 1 a property is false, 2 bad input or
configuration, 3 scale limit hit, 4 a theorem check disagrees with its brute force.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import catalog
from .errors import DomainError, ParseError, ScaleError, SigmaError, SigmaForgeError
from .groups import PermGroup, prime_factors
from .lattice import build_lattice, is_modular_lattice, to_dot
from .perm import parse_group_text
from .report import PropertyReport
from .sigma import SigmaPartition, parse_sigma_spec, sigma_quasinormal_db
from .structure import (check_theorem_C, check_theorem_E, check_theorem_F, is_QsigmaT_bruteforce,
                        robinson_report, satisfies_Np, satisfies_Pp, satisfies_Q_sigmaP, verify_theorem_B)

EXIT_OK, EXIT_FALSE, EXIT_INPUT, EXIT_SCALE, EXIT_DISAGREE = 0, 1, 2, 3, 4

CHECKS = ("lattice", "qsnormal-db", "qsigmat", "theorem-c", "theorem-e", "theorem-f", "theorem-b",
          "robinson", "np", "pp", "qspq", "corpus")


@dataclass
class RunConfig:
    sigma_spec: str = "finest"
    order_cap: int = 10_000
    checks: list = field(default_factory=lambda: ["qsigmat"])
    output: str = "text"
    parallelism: int = 1

    def __post_init__(self):
        if not self.checks:
            raise SigmaError("at least one check is required")
        unknown = [c for c in self.checks if c not in CHECKS]
        if unknown:
            raise SigmaError(f"unknown check(s): {', '.join(unknown)}")
        if self.order_cap < 1:
            raise SigmaError("order cap must be >= 1")
        if self.output not in ("text", "json", "dot"):
            raise SigmaError(f"unknown output {self.output!r}")
        if self.parallelism < 1:
            raise SigmaError("worker count must be >= 1")

    @property
    def sigma(self) -> SigmaPartition:
        return parse_sigma_spec(self.sigma_spec)


def parse_group_file(text: str, cap: int | None = None, name: str | None = None) -> PermGroup:
    degree, gens = parse_group_text(text)
    return PermGroup(gens, degree=degree, cap=cap, name=name)


def load_group(target: str, cap: int | None = None) -> PermGroup:
    if target.startswith("catalog:"):
        return catalog.build(target)
    path = Path(target)
    if not path.exists():
        raise DomainError(f"no such group file: {target}")
    return parse_group_file(path.read_text(), cap=cap, name=path.stem)


def _lattice_report(g: PermGroup, lat) -> PropertyReport:
    rep = PropertyReport("lattice", is_modular_lattice(lat), note=f"{len(lat)} subgroups")
    bad = lat.pentagon()
    if bad is not None:
        for role, i in zip(("a", "x", "b"), bad):
            rep.witness(role, lat.nodes[i])
    return rep


def _db_report(g: PermGroup, sigma: SigmaPartition, lat) -> PropertyReport:
    db = sigma_quasinormal_db(g, sigma, lat)
    qn = db.qn_in_top()
    sub = db.subqn_nodes()
    rep = PropertyReport("qsnormal-db", True, sigma=sigma.spec,
                         note=f"{len(qn)} sigma-quasinormal, {len(sub)} sigma-subquasinormal of {len(lat)}")
    for h in qn:
        rep.witness("sigma-quasinormal", h)
    for h in sub:
        rep.witness("sigma-subquasinormal", h)
    return rep


def _all_primes(name: str, fn, g: PermGroup) -> PropertyReport:
    rep = PropertyReport(name, True)
    for p in prime_factors(g.order):
        sub = rep.add(fn(g, p))
        rep.verdict = rep.verdict and sub.verdict
    return rep


def run_check(name: str, g: PermGroup, sigma: SigmaPartition, lat=None) -> PropertyReport:
    """Run one named check on g; the lattice is built only for checks that need it."""
    sigma.check_defined(g.order)
    needs_lattice = name in ("lattice", "qsnormal-db", "qsigmat", "theorem-c", "theorem-e", "theorem-f",
                             "theorem-b")
    if needs_lattice and lat is None:
        try:
            lat = build_lattice(g)
        except ScaleError as exc:
            return PropertyReport(name, None, sigma=sigma.spec, status="inconclusive-at-scale", note=str(exc))
    if name == "lattice":
        return _lattice_report(g, lat)
    if name == "qsnormal-db":
        return _db_report(g, sigma, lat)
    if name == "qsigmat":
        return is_QsigmaT_bruteforce(g, sigma, lat)
    if name == "theorem-c":
        return check_theorem_C(g, sigma, lat)
    if name == "theorem-e":
        return check_theorem_E(g, sigma, lat)
    if name == "theorem-f":
        return check_theorem_F(g, lat)
    if name == "theorem-b":
        return verify_theorem_B(g, sigma, lat)
    if name == "robinson":
        return robinson_report(g)
    if name == "np":
        return _all_primes("np", satisfies_Np, g)
    if name == "pp":
        return _all_primes("pp", satisfies_Pp, g)
    if name == "qspq":
        return satisfies_Q_sigmaP(g, sigma)
    raise SigmaError(f"unknown check {name!r}")


def exit_code(reports) -> int:
    reports = list(reports)
    if any(not r.all_consistent() for r in reports):
        return EXIT_DISAGREE
    if any(_has_status(r, "inconclusive-at-scale") for r in reports):
        return EXIT_SCALE
    if any(r.verdict is False for r in reports):
        return EXIT_FALSE
    return EXIT_OK


def _has_status(r: PropertyReport, status: str) -> bool:
    return r.status == status or any(_has_status(s, status) for s in r.sub_reports)


def run_checks(g: PermGroup, config: RunConfig, out=None, dot_path: str | None = None) -> int:
    """Run config.checks on g, write the report stream to ``out`` and return the exit status."""
    out = out or sys.stdout
    sigma = config.sigma
    sigma.check_defined(g.order)
    lat = None
    if dot_path or any(c not in ("robinson", "np", "pp", "qspq") for c in config.checks):
        try:
            lat = build_lattice(g)
        except ScaleError:
            lat = None
    reports = [run_check(c, g, sigma, lat) for c in config.checks]
    if dot_path:
        if lat is None:
            raise ScaleError("lattice too large for DOT export")
        Path(dot_path).write_text(to_dot(lat, sigma, name=g.name or "G"))
    if config.output == "json":
        doc = {"group": g.name, "order": g.order, "sigma": sigma.spec, "reports": [r.to_dict() for r in reports]}
        out.write(json.dumps(doc, sort_keys=True, indent=2) + "\n")
    elif config.output == "dot":
        out.write(to_dot(lat, sigma, name=g.name or "G"))
    else:
        out.write(f"group {g.name or '?'} of order {g.order}, sigma = {sigma.spec}\n")
        for r in reports:
            out.write(r.to_text() + "\n")
    return exit_code(reports)


def run_corpus_command(manifest: str | None, sigma_filter: str | None, jobs: int, as_json: bool, out) -> int:
    from .corpus import corpus_json, load_manifest, run_corpus
    cases = load_manifest(manifest)
    if sigma_filter:
        parse_sigma_spec(sigma_filter)
        cases = [c for c in cases if c.sigma == sigma_filter]
    results = run_corpus(cases, jobs=jobs)
    if as_json:
        out.write(corpus_json(results) + "\n")
    else:
        for r in results:
            flag = "PASS" if r["pass"] else "FAIL"
            out.write(f"{flag} {r['group']} ; {r['sigma']} ; {r['check']} ; expected {str(r['expected']).lower()}"
                      f" got {r['verdict']}\n")
        out.write(f"{sum(r['pass'] for r in results)}/{len(results)} cases passed\n")
    if any(not r["consistent"] for r in results):
        return EXIT_DISAGREE
    if any(r["status"] == "inconclusive-at-scale" for r in results):
        return EXIT_SCALE
    return EXIT_OK if all(r["pass"] for r in results) else EXIT_FALSE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sigmaforge", description="sigma-quasinormality checks on permutation groups")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--sigma", default="finest", help="finest | coarsest | pi:P | onepi:P | classes:[..]..rest")
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.add_argument("--cap", type=int, default=None, help="element-count cap (default 10000 or SIGMAFORGE_CAP)")
        p.add_argument("--jobs", type=int, default=1, help="worker processes for corpus runs")

    a = sub.add_parser("analyze", help="run checks on one group")
    a.add_argument("target", help="group file or catalog:NAME")
    a.add_argument("--check", nargs="+", default=["qsigmat"], choices=CHECKS)
    a.add_argument("--dot", metavar="FILE", help="write the Hasse diagram in DOT format")
    common(a)

    c = sub.add_parser("check", help="run one named check (or the corpus)")
    c.add_argument("name", choices=CHECKS)
    c.add_argument("target", nargs="?")
    c.add_argument("--manifest", default=None)
    common(c)

    k = sub.add_parser("corpus", help="run the acceptance corpus manifest")
    k.add_argument("--manifest", default=None)
    k.add_argument("--sigma", default=None, help="only run cases with this sigma spec")
    k.add_argument("--json", action="store_true")
    k.add_argument("--jobs", type=int, default=1)
    k.add_argument("--cap", type=int, default=None)

    sub.add_parser("catalog", help="list catalog families")
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    saved = os.environ.get("SIGMAFORGE_CAP")
    try:
        return _dispatch(args, out)
    finally:
        # --cap is scoped to this invocation
        if saved is None:
            os.environ.pop("SIGMAFORGE_CAP", None)
        else:
            os.environ["SIGMAFORGE_CAP"] = saved


def _dispatch(args, out) -> int:
    try:
        if getattr(args, "cap", None) is not None:
            if args.cap < 1:
                raise SigmaError("--cap must be >= 1")
            os.environ["SIGMAFORGE_CAP"] = str(args.cap)
        if args.command == "catalog":
            for entry in catalog.CATALOG:
                out.write(f"{entry.name}: {entry.pattern.pattern}\n")
            return EXIT_OK
        if args.command == "corpus":
            return run_corpus_command(args.manifest, args.sigma, args.jobs, args.json, out)
        if args.command == "check" and args.name == "corpus":
            return run_corpus_command(args.manifest, args.sigma, args.jobs, args.json, out)
        if args.command == "check":
            if not args.target:
                raise DomainError("check needs a group target")
            checks, dot = [args.name], None
        else:
            checks, dot = args.check, args.dot
        if "corpus" in checks:
            raise SigmaError("the corpus check takes no group target")
        config = RunConfig(sigma_spec=args.sigma, order_cap=args.cap or 10_000, checks=checks,
                           output="json" if args.json else "text", parallelism=args.jobs)
        g = load_group(args.target, cap=args.cap)
        return run_checks(g, config, out=out, dot_path=dot)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ScaleError as exc:
        print(f"scale error: {exc}", file=sys.stderr)
        return EXIT_SCALE
    except (SigmaError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SigmaForgeError as exc:  # pragma: no cover - every subclass is handled above
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main_entry():  # pragma: no cover - console-script shim
    sys.exit(main())


if __name__ == "__main__":  # pragma: no cover
    main_entry()
