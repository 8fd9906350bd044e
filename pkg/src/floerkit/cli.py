"""``floerkit`` command-line interface.

Exit codes: 0 success, 1 usage error, 2 validation failure, 3 stabilization
failure.
"""

from __future__ import annotations

import argparse
import sys

from . import acceptance
from .analyzer import Assumptions, hfk_hat, hfk_table, property_g_report
from .fuzz import FuzzSpec, run_fuzz
from .homology import StabilizationError
from .model import CFKComplex, FlipRequiredError, ParseError, ValidationError, load_complex, validate_complex
from .report import Report
from .surgery import (large_surgery_bound_ok, large_surgery_homology, large_surgery_k, vh_sum,
                      zero_surgery_homology, zero_surgery_twisted)

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_UNSTABLE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _u64(text: str) -> int:
    v = int(text, 0)
    if not 0 <= v < 1 << 64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return v


def _positive(text: str) -> int:
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", type=str.lower, choices=["f2", "q"], default=argparse.SUPPRESS,
                        help="override the coefficient field")
    common.add_argument("--format", choices=["table", "json"], default=argparse.SUPPRESS)

    p = _Parser(prog="floerkit", description="Knot Floer complexes, surgery cones and rank identities.")
    p.add_argument("--format", choices=["table", "json"], default="table")
    p.add_argument("--field", type=str.lower, choices=["f2", "q"], default=argparse.SUPPRESS)
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    v = sub.add_parser("validate", parents=[common], help="check a complex against the model laws")
    v.add_argument("file")

    h = sub.add_parser("hfk", parents=[common], help="knot Floer homology by Alexander grading")
    h.add_argument("file")
    h.add_argument("-k", type=int)

    s = sub.add_parser("surgery-large", parents=[common], help="homology of large positive surgery")
    s.add_argument("file")
    s.add_argument("-n", type=int, required=True)
    s.add_argument("-t", type=int, default=0, help="Spin^c residue mod n (default 0)")
    s.add_argument("-k", type=int, help="explicit representative of t mod n")
    s.add_argument("--force", action="store_true", help="skip the genus bound; result is marked unverified")

    z = sub.add_parser("surgery-zero", parents=[common], help="homology of the zero-surgery cone")
    z.add_argument("file")
    z.add_argument("-k", type=int, required=True)
    z.add_argument("--twisted", action="store_true")

    a = sub.add_parser("analyze", parents=[common], help="rank identities and detection conditions")
    a.add_argument("file")
    a.add_argument("--assume-irreducible", action="store_true")
    a.add_argument("--assume-taut", action="store_true")
    spinc = a.add_mutually_exclusive_group()
    spinc.add_argument("--assume-torsion-spinc", action="store_true")
    spinc.add_argument("--assume-nontorsion-spinc", action="store_true")

    f = sub.add_parser("fuzz", parents=[common], help="random flip-valid complexes through the invariant suite")
    f.add_argument("--seed", type=_u64, required=True)
    f.add_argument("--count", type=_positive, required=True)
    f.add_argument("--max-generators", type=_positive, default=8)
    f.add_argument("--width", type=int, default=3)

    sub.add_parser("selftest", parents=[common], help="run every acceptance criterion")
    return p


def _load(args) -> CFKComplex:
    try:
        c = load_complex(args.file)
    except OSError as e:
        raise UsageError(f"cannot read {args.file}: {e.strerror or e}") from None
    if getattr(args, "field", None):
        c = c.with_field("F2" if args.field == "f2" else "Q")
    return c


def _require_valid(c: CFKComplex):
    rep = validate_complex(c)
    if not rep.ok:
        raise ValidationError(rep)


def _violations(rep) -> list[dict]:
    return [{"code": v.code, "message": v.message} for v in rep.violations]


def cmd_validate(args) -> Report:
    c = _load(args)
    rep = validate_complex(c)
    data = {"valid": rep.ok, "flip_checked": rep.flip_checked, "field": c.field,
            "generators": len(c.generators), "arrows": len(c.arrows), "violations": _violations(rep)}
    base = c.base.name if rep.ok else None
    return Report("validate", c.name, base, data, EXIT_OK if rep.ok else EXIT_INVALID)


def cmd_hfk(args) -> Report:
    c = _load(args)
    _require_valid(c)
    table = {args.k: hfk_hat(c, args.k)} if args.k is not None else hfk_table(c)
    rows = []
    for k, dims in table.items():
        if not dims:
            rows.append({"k": k, "grading": None, "dim": 0})
        for g, n in dims.items():
            rows.append({"k": k, "grading": g, "dim": n})
    totals = [sum(d.values()) for d in table.values()]
    return Report("hfk", c.name, c.base.name, {"field": c.field, "dims": totals, "groups": rows})


def _module_data(mod) -> dict:
    return {
        "rank_pair": list(mod.rank_pair),
        "towers": [{"bottom_grading": g} for g in mod.towers],
        "finite_parts": [{"grading": g, "dim": n} for g, n in mod.finite_parts],
    }


def cmd_surgery_large(args) -> Report:
    c = _load(args)
    _require_valid(c)
    k = large_surgery_k(args.n, args.t, args.k)
    verified = large_surgery_bound_ok(c, args.n)
    mod = large_surgery_homology(c, args.n, args.t, k, force=args.force)
    data = {"n": args.n, "k": k, "hypothesis": "verified" if verified else "hypothesis-unverified"}
    data.update(_module_data(mod))
    return Report("surgery-large", c.name, c.base.name, data)


def cmd_surgery_zero(args) -> Report:
    c = _load(args)
    _require_valid(c)
    if args.twisted:
        tw = zero_surgery_twisted(c, args.k)
        data = {"k": args.k, "twisted": True, "field": tw.field,
                "generic_rank": tw.generic_rank if tw.corank == 0 else "infinite",
                "towers": tw.corank}
        if tw.per_grading is not None:
            data["per_grading"] = [{"grading": g, "dim": n} for g, n in tw.per_grading]
        return Report("surgery-zero", c.name, c.base.name, data)
    mod = zero_surgery_homology(c, args.k)
    data = {"k": args.k, "twisted": False, "field": c.field,
            "graded": vh_sum(c, args.k).degree() is not None}
    data.update(_module_data(mod))
    return Report("surgery-zero", c.name, c.base.name, data)


def cmd_analyze(args) -> Report:
    c = _load(args)
    _require_valid(c)
    assumptions = Assumptions(irreducible=args.assume_irreducible, taut=args.assume_taut,
                              torsion_spinc=args.assume_torsion_spinc,
                              nontorsion_spinc=args.assume_nontorsion_spinc)
    rep = property_g_report(c, assumptions).to_dict()
    rep.pop("name")
    failed = [r["name"] for r in rep["rank_checks"] if not r["passed"]]
    return Report("analyze", c.name, c.base.name, rep, EXIT_INVALID if failed else EXIT_OK)


def cmd_fuzz(args) -> Report:
    spec = FuzzSpec(args.seed, args.count, args.max_generators, args.width)
    results = run_fuzz(spec, "Q" if getattr(args, "field", None) == "q" else "F2")
    rows = [{"seed": r.seed, "generators": r.generators, "status": "pass" if r.ok else "fail"}
            for r in results]
    failed = [r for r in results if not r.ok]
    data = {"seed": spec.seed, "count": spec.count, "passed": len(results) - len(failed), "cases": rows}
    if failed:
        first = failed[0]
        data["first_failure"] = {"seed": first.seed, "failures": first.failures,
                                 "reproduce": f"floerkit fuzz --seed {first.seed} --count 1 "
                                              f"--max-generators {spec.max_generators} --width {spec.width}"}
    return Report("fuzz", f"seed {spec.seed}", None, data, EXIT_INVALID if failed else EXIT_OK)


def cmd_selftest(args) -> Report:
    outcomes = [acceptance.run_criterion(n) for n in acceptance.CRITERIA]
    rows = [{"criterion": o.number, "title": o.title, "result": "PASS" if o.passed else "FAIL",
             "detail": o.detail} for o in outcomes]
    ok = all(o.passed for o in outcomes)
    return Report("selftest", "acceptance criteria", None,
                  {"passed": sum(o.passed for o in outcomes), "total": len(outcomes), "criteria": rows},
                  EXIT_OK if ok else EXIT_INVALID)


COMMANDS = {
    "validate": cmd_validate,
    "hfk": cmd_hfk,
    "surgery-large": cmd_surgery_large,
    "surgery-zero": cmd_surgery_zero,
    "analyze": cmd_analyze,
    "fuzz": cmd_fuzz,
    "selftest": cmd_selftest,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    fmt = args.format
    try:
        report = COMMANDS[args.verb](args)
    except UsageError as e:
        print(f"floerkit: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ValidationError as e:
        print(f"floerkit: invalid complex: {e}", file=sys.stderr)
        return EXIT_INVALID
    except (ParseError, FlipRequiredError) as e:
        print(f"floerkit: invalid input: {e}", file=sys.stderr)
        return EXIT_INVALID
    except StabilizationError as e:
        print(f"floerkit: {e}", file=sys.stderr)
        return EXIT_UNSTABLE
    except ValueError as e:
        print(f"floerkit: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    sys.stdout.write(report.render(fmt))
    return report.status


if __name__ == "__main__":
    sys.exit(main())
