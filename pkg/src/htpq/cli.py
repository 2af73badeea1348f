"""Command-line harness.

Every command prints JSON records, one per line, on stdout.  Wall-clock
timings go to stderr so that stdout is reproducible.

Exit codes: 0 success, 1 negative verdict or refutation, 2 budget
exhausted or undecided, 3 malformed input, 4 resource limit exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

from .category import (
    InA,
    Inconclusive,
    InComplementInterior,
    Member,
    NonMember,
    PhiBudget,
    boundary_probe,
    generic_check,
    negative_certificates,
    phi_decide,
    positive_certificates,
)
from .definability import (
    DiophantineModelSpec,
    ExistentialDefSpec,
    SpecError,
    check_existential_def,
    check_model,
)
from .measure import boundary_gap, estimate_measure_A
from .polyring import Polynomial, PolynomialError, decode, encode, parse_poly, to_text
from .quadratic_oracle import NotInFamily, decide_family_member
from .reductions import GadgetError, GadgetRegistry, conjoin, homogenize_with_positivity, semilocal_reduce
from .solver import DEFAULT_LIMITS, Found, ResourceLimitExceeded, SearchLimits, search, search_exhaustive
from .store import dump_record, store_append, store_load
from .subrings import DescriptorError, format_descriptor, parse_descriptor

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_BUDGET = 2
EXIT_INPUT = 3
EXIT_RESOURCE = 4


class InputError(Exception):
    pass


def emit(rec: dict) -> None:
    print(dump_record(rec))


def side(rec: dict) -> None:
    print(json.dumps(rec, sort_keys=True), file=sys.stderr)


def _poly_lines(path: str) -> list[Polynomial]:
    text = Path(path).read_text(encoding="utf-8")
    return [parse_poly(line) for line in text.splitlines() if line.strip() and not line.lstrip().startswith("#")]


def _limits(args) -> SearchLimits:
    return SearchLimits(
        max_points=getattr(args, "max_points", DEFAULT_LIMITS.max_points),
        max_height=DEFAULT_LIMITS.max_height,
        max_vars=DEFAULT_LIMITS.max_vars,
    )


# ---------------------------------------------------------------------------
# commands


def cmd_solve(args) -> int:
    f, W = parse_poly(args.poly), parse_descriptor(args.ring)
    t0 = time.perf_counter()
    if args.method == "exhaustive":
        out = search_exhaustive(f, W, args.height, limits=_limits(args))
    else:
        out = search(f, W, args.height, limits=_limits(args), jobs=args.jobs)
    side({"command": "solve", "elapsed_s": round(time.perf_counter() - t0, 6)})
    rec = {"command": "solve", "polynomial": to_text(f), "ring": format_descriptor(W), "height_bound": args.height}
    if isinstance(out, Found):
        emit({**rec, "outcome": "found", "witness": out.witness.as_text(), "support": sorted(out.witness.support), "height": out.height})
        return EXIT_OK
    emit({**rec, "outcome": "exhausted"})
    return EXIT_BUDGET


def cmd_reduce(args) -> int:
    if args.kind == "homogenize":
        r = homogenize_with_positivity(parse_poly(args.poly))
        emit({"command": "reduce homogenize", "source": to_text(r.source), "reduced": to_text(r.reduced),
              "y": f"x{r.y}", "squares": [f"x{v}" for v in r.squares], "degree": r.degree})
        return EXIT_OK
    if args.kind == "conjoin":
        gs = _poly_lines(args.polys)
        if not gs:
            raise InputError("no polynomials in the file")
        emit({"command": "reduce conjoin", "count": len(gs), "reduced": to_text(conjoin(gs))})
        return EXIT_OK
    reg = GadgetRegistry.load(args.gadgets) if args.gadgets else GadgetRegistry()
    excluded = [int(p) for p in args.exclude.split(",") if p.strip()]
    r = semilocal_reduce(parse_poly(args.poly), excluded, reg)
    emit({"command": "reduce semilocal", "source": to_text(r.source), "excluded": list(r.excluded),
          "reduced": to_text(r.reduced), "instances": len(r.instances), "semantics": r.semantics})
    return EXIT_OK


def cmd_oracle(args) -> int:
    f, W = parse_poly(args.poly), parse_descriptor(args.ring)
    v = decide_family_member(f, W)
    rec = {"command": "oracle quad", "polynomial": to_text(f), "ring": format_descriptor(W)}
    if isinstance(v, NotInFamily):
        emit({**rec, "verdict": "not_in_family", "reason": v.reason})
        return EXIT_BUDGET
    emit({**rec, "verdict": "solvable" if v.solvable else "unsolvable", "reason": v.reason, "witness": v.witness})
    return EXIT_OK if v.solvable else EXIT_NEGATIVE


def cmd_certify(args) -> int:
    f = parse_poly(args.poly)
    pos = positive_certificates(f, args.depth, args.height, limits=_limits(args))
    neg = negative_certificates(f, args.depth)
    certs = list(pos) + ([] if isinstance(neg, Inconclusive) else list(neg))
    for c in certs:
        emit({"command": "certify", **c.to_record()})
    if isinstance(neg, Inconclusive):
        emit({"command": "certify", "kind": "negative", "polynomial": to_text(f), "inconclusive": neg.reason})
    if args.store:
        store_append(args.store, certs, seed=args.seed)
    return EXIT_OK


def cmd_probe(args) -> int:
    f, W = parse_poly(args.poly), parse_descriptor(args.ring)
    st = boundary_probe(f, W, args.depth, args.height, limits=_limits(args))
    rec = {"command": "probe", "polynomial": to_text(f), "ring": format_descriptor(W)}
    if isinstance(st, InA):
        emit({**rec, "status": "in_A", "witness": st.witness.as_text()})
        return EXIT_OK
    if isinstance(st, InComplementInterior):
        emit({**rec, "status": "in_complement_interior", "excluded": sorted(st.excluded), "reason": st.reason})
        return EXIT_NEGATIVE
    emit({**rec, "status": "undecided", "depth": st.depth, "height": st.height})
    return EXIT_BUDGET


def _phi_record(r) -> tuple[dict, int]:
    if isinstance(r, Member):
        return {"verdict": "member", "witness": r.witness.as_text(), "round": r.round}, EXIT_OK
    if isinstance(r, NonMember):
        return {"verdict": "nonmember", "excluded": sorted(r.excluded), "reason": r.reason, "round": r.round}, EXIT_NEGATIVE
    return {"verdict": "undecided", "rounds": r.rounds, "height": r.height, "solver_limited": r.solver_limited}, EXIT_BUDGET


def _phi_budget(args) -> PhiBudget:
    return PhiBudget(rounds=args.rounds, max_height=args.height, limits=_limits(args))


def cmd_phi(args) -> int:
    f, W = parse_poly(args.poly), parse_descriptor(args.ring)
    rec, code = _phi_record(phi_decide(f, W, _phi_budget(args)))
    emit({"command": "phi", "polynomial": to_text(f), "ring": format_descriptor(W), **rec})
    return code


def cmd_generic(args) -> int:
    W = parse_descriptor(args.ring)
    report = generic_check(W, _poly_lines(args.polys), _phi_budget(args))
    for f, r in report.results:
        emit({"command": "generic", "polynomial": to_text(f), **_phi_record(r)[0]})
    emit({"command": "generic", "ring": format_descriptor(W), "passes_at_budget": report.passes, "count": len(report.results)})
    return EXIT_OK if report.passes else EXIT_BUDGET


def cmd_measure(args) -> int:
    if args.seed is None:
        raise InputError("measure needs --seed")
    f = parse_poly(args.poly)
    est = estimate_measure_A(f, args.height, args.samples, args.seed, jobs=args.jobs, limits=_limits(args))
    rec = {"command": "measure", "polynomial": to_text(f), **est.to_record()}
    if args.exact_family:
        rec["exact"] = boundary_gap(f, args.height, args.depth, limits=_limits(args)).to_record()
    emit(rec)
    return EXIT_OK


def cmd_model_check(args) -> int:
    raw = json.loads(Path(args.spec).read_text(encoding="utf-8"))
    try:
        spec = DiophantineModelSpec(int(raw["n"]), parse_poly(raw["h"]), parse_poly(raw["h_plus"]), parse_poly(raw["h_times"]))
    except KeyError as exc:
        raise InputError(f"model spec missing field {exc}") from exc
    inject = {int(k): v if isinstance(v, list) else [v] for k, v in raw.get("inject", {}).items()}
    W = parse_descriptor(args.ring)
    report = check_model(spec, W, args.range, args.height, inject=inject, limits=_limits(args))
    emit({"command": "model-check", "ring": format_descriptor(W), **report.to_record()})
    return EXIT_NEGATIVE if report.status == "refuted" else EXIT_OK


def cmd_exdef_check(args) -> int:
    W = parse_descriptor(args.ring)
    text = Path(args.probes).read_text(encoding="utf-8")
    probes = [Fraction(t) for t in text.replace(",", " ").split()]
    report = check_existential_def(ExistentialDefSpec(parse_poly(args.g)), W, probes, args.height, limits=_limits(args))
    emit({"command": "exdef-check", "ring": format_descriptor(W), **report.to_record()})
    return EXIT_NEGATIVE if report.status == "refuted" else EXIT_OK


def cmd_encode(args) -> int:
    f = parse_poly(args.poly)
    emit({"command": "encode", "polynomial": to_text(f), "code": str(encode(f))})
    return EXIT_OK


def cmd_decode(args) -> int:
    try:
        n = int(args.code)
    except ValueError as exc:
        raise InputError(f"not a natural number: {args.code!r}") from exc
    emit({"command": "decode", "code": str(n), "polynomial": to_text(decode(n))})
    return EXIT_OK


def cmd_store(args) -> int:
    path = args.path or args.store
    if not path:
        raise InputError("store verify needs a path (positional or --store)")
    st = store_load(path)
    for a in st.audit:
        emit({"command": "store verify", "line": a.line, "error": a.error})
    emit({"command": "store verify", "valid": len(st.records), "invalid": len(st.audit)})
    return EXIT_OK if st.ok else EXIT_NEGATIVE


# ---------------------------------------------------------------------------
# parser


def build_parser(config: dict | None = None) -> argparse.ArgumentParser:
    config = config or {}

    def need(name: str) -> bool:
        return name not in config

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--jobs", type=int, default=argparse.SUPPRESS)
    common.add_argument("--store", default=argparse.SUPPRESS)
    common.add_argument("--config", default=argparse.SUPPRESS)
    common.add_argument("--max-points", dest="max_points", type=int, default=argparse.SUPPRESS)

    p = argparse.ArgumentParser(prog="htpq", description="Hilbert's tenth problem over subrings of Q: desk-scale tools.", parents=[common])
    sub = p.add_subparsers(dest="command", required=True)

    def cmd(name, fn, **kw):
        sp = sub.add_parser(name, parents=[common], **kw)
        sp.set_defaults(func=fn)
        return sp

    s = cmd("solve", cmd_solve, help="bounded search for a zero in R_W")
    s.add_argument("--poly", required=need("poly"))
    s.add_argument("--ring", required=need("ring"))
    s.add_argument("--height", type=int, required=need("height"))
    s.add_argument("--method", choices=("pivot", "exhaustive"), default="pivot")

    s = cmd("reduce", cmd_reduce, help="polynomial reductions")
    rs = s.add_subparsers(dest="kind", required=True)
    r = rs.add_parser("homogenize", parents=[common])
    r.add_argument("--poly", required=need("poly"))
    r = rs.add_parser("conjoin", parents=[common])
    r.add_argument("--polys", required=need("polys"))
    r = rs.add_parser("semilocal", parents=[common])
    r.add_argument("--poly", required=need("poly"))
    r.add_argument("--exclude", default="")
    r.add_argument("--gadgets")

    s = cmd("oracle", cmd_oracle, help="exact verdicts for the quadratic family")
    os_ = s.add_subparsers(dest="kind", required=True)
    o = os_.add_parser("quad", parents=[common])
    o.add_argument("--poly", required=need("poly"))
    o.add_argument("--ring", required=need("ring"))

    s = cmd("certify", cmd_certify, help="positive and negative cylinder certificates")
    s.add_argument("--poly", required=need("poly"))
    s.add_argument("--depth", type=int, required=need("depth"))
    s.add_argument("--height", type=int, required=need("height"))

    s = cmd("probe", cmd_probe, help="locate W relative to A(f)")
    s.add_argument("--poly", required=need("poly"))
    s.add_argument("--ring", required=need("ring"))
    s.add_argument("--depth", type=int, default=8)
    s.add_argument("--height", type=int, default=50)

    for name, fn in (("phi", cmd_phi), ("generic", cmd_generic)):
        s = cmd(name, fn, help="dovetailed decision procedure" if name == "phi" else "bounded genericity check")
        if name == "phi":
            s.add_argument("--poly", required=need("poly"))
        else:
            s.add_argument("--polys", required=need("polys"))
        s.add_argument("--ring", required=need("ring"))
        s.add_argument("--rounds", type=int, default=10)
        s.add_argument("--height", type=int, default=256, help="largest solver height")

    s = cmd("measure", cmd_measure, help="Monte Carlo estimate of mu(A(f))")
    s.add_argument("--poly", required=need("poly"))
    s.add_argument("--height", type=int, required=need("height"))
    s.add_argument("--samples", type=int, required=need("samples"))
    s.add_argument("--exact-family", action="store_true")
    s.add_argument("--depth", type=int, default=8, help="certificate depth for --exact-family")

    s = cmd("model-check", cmd_model_check, help="bounded check of a diophantine model of Z")
    s.add_argument("--spec", required=need("spec"))
    s.add_argument("--ring", required=need("ring"))
    s.add_argument("--range", type=int, required=need("range"))
    s.add_argument("--height", type=int, required=need("height"))

    s = cmd("exdef-check", cmd_exdef_check, help="bounded check of an existential definition of Z")
    s.add_argument("--g", required=need("g"))
    s.add_argument("--ring", required=need("ring"))
    s.add_argument("--probes", required=need("probes"))
    s.add_argument("--height", type=int, required=need("height"))

    s = cmd("encode", cmd_encode, help="polynomial to natural number")
    s.add_argument("--poly", required=need("poly"))
    s = cmd("decode", cmd_decode, help="natural number to polynomial")
    s.add_argument("--code", required=need("code"))

    s = cmd("store", cmd_store, help="certificate store maintenance")
    ss = s.add_subparsers(dest="kind", required=True)
    v = ss.add_parser("verify", parents=[common])
    v.add_argument("path", nargs="?")

    # config values act as defaults for every parser; explicit flags win
    for parser in [p, *sub.choices.values(), *rs.choices.values(), *os_.choices.values(), *ss.choices.values()]:
        parser.set_defaults(**config)
    return p


def _load_config(argv: list[str]) -> dict:
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return {}
    cfg = json.loads(Path(known.config).read_text(encoding="utf-8"))
    if not isinstance(cfg, dict):
        raise InputError("config must be a JSON object")
    return {k.replace("-", "_"): v for k, v in cfg.items()}


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        config = _load_config(argv)
        parser = build_parser(config)
        try:
            args = parser.parse_args(argv)
        except SystemExit as exc:
            return EXIT_INPUT if exc.code else EXIT_OK
        for name, default in (("seed", None), ("jobs", 1), ("store", None), ("max_points", DEFAULT_LIMITS.max_points)):
            if not hasattr(args, name):
                setattr(args, name, default)
        for name in ("jobs", "height", "depth", "samples", "range", "rounds", "max_points"):
            val = getattr(args, name, None)
            if val is not None and val < (0 if name == "depth" else 1):
                raise InputError(f"--{name.replace('_', '-')} must be positive")
        return args.func(args)
    except ResourceLimitExceeded as exc:
        side({"error": "resource_limit", "message": str(exc)})
        return EXIT_RESOURCE
    except (InputError, PolynomialError, DescriptorError, GadgetError, SpecError, ValueError, OSError) as exc:
        side({"error": "input", "message": str(exc)})
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
