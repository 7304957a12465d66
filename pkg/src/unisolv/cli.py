"""Command-line front end.

Every command writes a JSON document tagged ``"schema": "unisolv/1"``.
Exit status: 0 when every checked outcome matches expectation, 1 on a
verification failure, 2 on bad usage or input.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import random
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import __version__
from .certificate import ComplexTriple, alpha, cauchy_det, verify_certificate
from .dofsys import (
    OPEN_CASE_LABEL,
    CounterexampleError,
    CounterexampleReport,
    DualBasisRefused,
    dimension,
    dual_basis,
    enumerate_functionals,
    unisolvence,
    verify_counterexample,
)
from .exactnum import GaussianRational
from .kernels import BACKEND
from .simplexint import GeometryError, Simplex

SCHEMA = "unisolv/1"

log = logging.getLogger("unisolv")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    ks: list
    d: int = 2
    source: str = "reference"  # reference | file | random
    simplex_path: Optional[str] = None
    count: int = 1
    seed: int = 0
    out: Optional[str] = None
    exploratory: bool = False

    def to_json(self) -> dict:
        out = {"command": self.command, "k": self.ks, "d": self.d, "source": self.source}
        if self.source == "file":
            out["simplex_path"] = self.simplex_path
        if self.source == "random":
            out["count"] = self.count
        out["seed"] = self.seed
        if self.exploratory:
            out["exploratory"] = True
        return out


def parse_k_range(text: str) -> list[int]:
    """``"3"`` or ``"1..4"``."""
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            ks = list(range(int(lo), int(hi) + 1))
        else:
            ks = [int(text)]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad degree range {text!r}; use K or K1..K2")
    if not ks or min(ks) < 1:
        raise argparse.ArgumentTypeError(f"degree range {text!r} must be nonempty with k >= 1")
    return ks


def effective_seed(seed: int) -> int:
    env = os.environ.get("UNISOLV_SEED")
    if env is None or env == "":
        return seed
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"UNISOLV_SEED must be an integer, got {env!r}")


def config_from_args(args) -> RunConfig:
    source = "reference"
    if getattr(args, "simplex", None):
        source = "file"
    elif getattr(args, "random", None) is not None:
        source = "random"
    count = getattr(args, "random", None) or 1
    if getattr(args, "random", None) is not None and args.random < 1:
        raise UsageError("--random needs a count >= 1")
    return RunConfig(
        command=args.command,
        ks=getattr(args, "k", [1]),
        d=getattr(args, "d", 2),
        source=source,
        simplex_path=getattr(args, "simplex", None),
        count=count,
        seed=effective_seed(getattr(args, "seed", 0)),
        out=getattr(args, "out", None),
        exploratory=getattr(args, "exploratory", False),
    )


def simplices_for(cfg: RunConfig) -> list[Simplex]:
    if cfg.source == "reference":
        return [Simplex.reference(cfg.d)]
    if cfg.source == "file":
        try:
            t = Simplex.load(cfg.simplex_path)
        except OSError as exc:
            raise UsageError(f"cannot read simplex file: {exc}")
        except GeometryError as exc:
            raise UsageError(str(exc))
        if t.dim != cfg.d:
            raise UsageError(f"simplex file has dim {t.dim}, but --d {cfg.d} was given")
        return [t]
    rng = random.Random(cfg.seed)
    return [Simplex.random(cfg.d, rng) for _ in range(cfg.count)]


def expected_verdict(k: int, d: int, t: Simplex) -> Optional[str]:
    """Known verdicts; ``None`` marks an open case excluded from the exit status."""
    if d == 2 or k == 1:
        return "unisolvent"
    if k == 2 and t == Simplex.reference(3):
        return "singular"
    return None


def emit(doc: dict, out: Optional[str]) -> None:
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def say(msg: str, cfg_out: Optional[str]) -> None:
    # keep stdout clean for the JSON document when no --out is given
    print(msg, file=sys.stdout if cfg_out else sys.stderr)


def _check_open(cfg: RunConfig, k: int, d: int) -> None:
    if d == 3 and k >= 3 and not cfg.exploratory:
        raise UsageError(
            f"(k={k}, d=3) is an open case; pass --exploratory to run it without an expectation"
        )


# ---------------------------------------------------------------------------
# commands


def cmd_verify(cfg: RunConfig) -> int:
    for k in cfg.ks:
        _check_open(cfg, k, cfg.d)
    simplices = simplices_for(cfg)
    reports, checks = [], []
    for k in cfg.ks:
        for idx, t in enumerate(simplices):
            expected = expected_verdict(k, cfg.d, t)
            label = None if expected is not None else OPEN_CASE_LABEL
            rep = unisolvence(k, cfg.d, t, seed=cfg.seed if cfg.source == "random" else None,
                              label=label)
            reports.append(rep.to_json())
            ok = expected is None or rep.verdict == expected
            checks.append({"k": k, "simplex": idx, "expected": expected,
                           "observed": rep.verdict, "ok": ok})
            tag = "open" if expected is None else ("ok" if ok else "FAIL")
            say(f"[{tag}] k={k} d={cfg.d} simplex#{idx}: {rep.verdict} "
                f"(rank {rep.rank}/{rep.dim}, kernel dim {len(rep.kernel)})", cfg.out)
    passed = all(c["ok"] for c in checks)
    emit({"schema": SCHEMA, "config": cfg.to_json(), "reports": reports,
          "expectations": checks, "passed": passed}, cfg.out)
    return 0 if passed else 1


def certificate_fixtures(ks) -> list[tuple[str, int, ComplexTriple]]:
    fixtures = []
    for k in ks:
        fixtures.append((f"repeated-point k={k}", k, ComplexTriple(0, 0, 1)))
    fixtures.append(("k=1 (0,2,1)", 1, ComplexTriple(0, 2, 1)))
    fixtures.append(("k=2 (0,z,1) at z=2", 2, ComplexTriple(0, 2, 1)))
    return fixtures


FIXTURE_VALUES = {"k=1 (0,2,1)": Fraction(-1), "k=2 (0,z,1) at z=2": Fraction(1, 180)}


def run_certificate(ks, count: int, seed: int) -> dict:
    rng = random.Random(seed)
    results, passed = [], True
    for k in ks:
        for _ in range(count):
            res = verify_certificate(k, ComplexTriple.random(rng))
            results.append(res.to_json())
            passed &= res.match
    fixtures = []
    for name, k, zt in certificate_fixtures(ks):
        res = verify_certificate(k, zt)
        entry = {"name": name, **res.to_json()}
        ok = res.match
        if name.startswith("repeated-point"):
            ok &= res.det_elimination == 0
        if name in FIXTURE_VALUES:
            ok &= res.det_elimination == FIXTURE_VALUES[name]
            entry["expected"] = str(FIXTURE_VALUES[name])
        entry["ok"] = ok
        fixtures.append(entry)
        passed &= ok
    alphas = []
    for k in ks:
        prod_cauchy = cauchy_det(range(1, k + 1), range(0, k)) * cauchy_det(
            range(1, k + 1), range(k, 2 * k))
        ok = alpha(k) == prod_cauchy
        alphas.append({"k": k, "alpha": str(alpha(k)), "cauchy_product": str(prod_cauchy), "ok": ok})
        passed &= ok
    return {"random": results, "fixtures": fixtures, "alpha": alphas, "passed": passed}


def cmd_certificate(cfg: RunConfig) -> int:
    body = run_certificate(cfg.ks, cfg.count, cfg.seed)
    n_rand = len(body["random"])
    n_ok = sum(r["match"] for r in body["random"])
    say(f"random triples: {n_ok}/{n_rand} match", cfg.out)
    for f in body["fixtures"]:
        say(f"[{'ok' if f['ok'] else 'FAIL'}] fixture {f['name']}: det = "
            f"{GaussianRational.from_json(f['det_elimination'])}", cfg.out)
    for a in body["alpha"]:
        say(f"[{'ok' if a['ok'] else 'FAIL'}] alpha({a['k']}) = {a['alpha']}", cfg.out)
    emit({"schema": SCHEMA, "config": cfg.to_json(), **body}, cfg.out)
    return 0 if body["passed"] else 1


def run_counterexample() -> tuple[dict, bool]:
    rep = CounterexampleReport()
    error = None
    try:
        verify_counterexample(rep)
    except CounterexampleError as exc:
        error = exc
    doc = rep.to_json()
    if error is not None:
        doc["error"] = {"step": error.step, "detail": error.detail}
    return doc, error is None


def cmd_counterexample(cfg: RunConfig) -> int:
    doc, ok = run_counterexample()
    for c in doc["checks"]:
        say(f"[{'ok' if c['passed'] else 'FAIL'}] ({c['step']}) {c['description']}", cfg.out)
    if not ok:
        say(f"failed at step ({doc['error']['step']}): {doc['error']['detail']}", cfg.out)
    else:
        say(f"{len(doc['checks'])}/5 checks pass", cfg.out)
    emit({"schema": SCHEMA, "config": {"command": "counterexample"}, **doc}, cfg.out)
    return 0 if ok else 1


def cmd_dual_basis(cfg: RunConfig) -> int:
    if len(cfg.ks) != 1:
        raise UsageError("dual-basis takes a single degree")
    k = cfg.ks[0]
    _check_open(cfg, k, cfg.d)
    t = simplices_for(cfg)[0]
    try:
        db = dual_basis(k, cfg.d, t)
    except DualBasisRefused as exc:
        say(f"refused: {exc}", cfg.out)
        emit({"schema": SCHEMA, "config": cfg.to_json(), "refused": True,
              "unisolvence_report": exc.report.to_json()}, cfg.out)
        return 1
    ok = db.is_biorthogonal()
    say(f"[{'ok' if ok else 'FAIL'}] {len(db.fields)} dual fields, biorthogonality "
        f"sha256 {db.certificate_hash()[:16]}", cfg.out)
    emit({"schema": SCHEMA, "config": cfg.to_json(), **db.to_json()}, cfg.out)
    return 0 if ok else 1


def cmd_report(cfg: RunConfig, max_k: int) -> int:
    counting = []
    for d in (2, 3):
        for k in range(1, max_k + 1):
            n = len(enumerate_functionals(k, d))
            counting.append({"k": k, "d": d, "dim": dimension(k, d), "n_functionals": n,
                             "ok": n == dimension(k, d)})
    verify = []
    for k in range(1, max_k + 1):
        rep = unisolvence(k, 2, Simplex.reference(2))
        verify.append({"k": k, "d": 2, "verdict": rep.verdict, "det": str(rep.det),
                       "ok": rep.verdict == "unisolvent"})
    ce_doc, ce_ok = run_counterexample()
    cert = run_certificate(list(range(1, min(max_k, 4) + 1)), cfg.count, cfg.seed)
    passed = all(c["ok"] for c in counting) and all(v["ok"] for v in verify) and ce_ok \
        and cert["passed"]
    say(f"counting identity: {sum(c['ok'] for c in counting)}/{len(counting)}", cfg.out)
    say(f"2D unisolvence (reference): {sum(v['ok'] for v in verify)}/{len(verify)}", cfg.out)
    say(f"3D counterexample: {'pass' if ce_ok else 'FAIL'}", cfg.out)
    say(f"determinant certificate: {'pass' if cert['passed'] else 'FAIL'}", cfg.out)
    emit({"schema": SCHEMA, "config": {**cfg.to_json(), "max_k": max_k},
          "counting": counting, "unisolvence_2d": verify, "counterexample": ce_doc,
          "certificate": cert, "passed": passed}, cfg.out)
    return 0 if passed else 1


# ---------------------------------------------------------------------------
# argument parsing


def _add_simplex_source(p, random_help="number of seeded random simplices"):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--reference", action="store_true", help="reference simplex (default)")
    g.add_argument("--simplex", metavar="FILE", help='JSON {"dim": d, "vertices": [["p/q", ...], ...]}')
    g.add_argument("--random", type=int, metavar="N", help=random_help)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="unisolv", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__} ({BACKEND} kernels)")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="unisolvence verdicts for one or more degrees")
    p.add_argument("--k", type=parse_k_range, required=True, help="degree K or range K1..K2")
    p.add_argument("--d", type=int, choices=(2, 3), default=2)
    _add_simplex_source(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", metavar="PATH")
    p.add_argument("--exploratory", action="store_true", help="allow open cases (d=3, k>=3)")

    p = sub.add_parser("certificate", help="closed-form determinant checks")
    p.add_argument("--k", type=parse_k_range, default=[1, 2, 3, 4])
    p.add_argument("--random", type=int, default=10, metavar="N", help="random triples per degree")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", metavar="PATH")

    p = sub.add_parser("counterexample", help="check the quadratic 3D counterexample")
    p.add_argument("--out", metavar="PATH")

    p = sub.add_parser("dual-basis", help="nodal basis and biorthogonality certificate")
    p.add_argument("--k", type=parse_k_range, required=True)
    p.add_argument("--d", type=int, choices=(2, 3), default=2)
    _add_simplex_source(p, "use one seeded random simplex (N must be 1)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", metavar="PATH")
    p.add_argument("--exploratory", action="store_true")

    p = sub.add_parser("report", help="aggregate report of all checks")
    p.add_argument("--all", action="store_true", help="run every check (the default)")
    p.add_argument("--max-k", type=int, default=3)
    p.add_argument("--random", type=int, default=3, metavar="N", help="random triples per degree")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", metavar="PATH")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    log.debug("kernel backend: %s", BACKEND)
    try:
        cfg = config_from_args(args)
        if args.command == "verify":
            return cmd_verify(cfg)
        if args.command == "certificate":
            return cmd_certificate(cfg)
        if args.command == "counterexample":
            return cmd_counterexample(cfg)
        if args.command == "dual-basis":
            if cfg.source == "random" and cfg.count != 1:
                raise UsageError("dual-basis works on a single simplex; use --random 1")
            return cmd_dual_basis(cfg)
        if args.command == "report":
            if args.max_k < 1:
                raise UsageError("--max-k must be at least 1")
            return cmd_report(cfg, args.max_k)
    except UsageError as exc:
        print(f"unisolv: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"unisolv: error: {exc}", file=sys.stderr)
        return 2
    parser.error(f"unknown command {args.command}")
    return 2


if __name__ == "__main__":
    sys.exit(main())
