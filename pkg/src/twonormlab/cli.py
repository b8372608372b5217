"""Command-line front end: load spec files, run checks, emit JSON reports.

Exit codes keep usage problems and falsified mathematics apart: 0 means
every checked property passed, 1 means a property verifiably failed
(indefinite gram, unbounded functional, broken suite check), 2 means the
invocation or an input file was unusable.  Reports carry no timestamps,
so identical inputs and flags produce identical bytes.
"""

import argparse
import sys

from .axioms import check_axioms
from .errors import (
    InfeasibleExtensionError,
    InputError,
    SpecFormatError,
    TwoNormError,
    UnboundedFunctionalError,
    UnboundedObjectiveError,
)
from .extension import extend_full
from .fileio import load_family, load_functional, load_space
from .functionals import functional_norm, is_bounded
from .report import SCHEMA_VERSION, report_text, write_report
from .suites import SUITE_NAMES, run_suite

AXIOM_TOLS = {"rel_tol": 1e-9, "zero_tol": 1e-10}
EXTEND_TOLS = {"norm_preserve": 1e-6}


def _tol_pair(text):
    name, sep, value = text.partition("=")
    if not sep or not name.strip():
        raise argparse.ArgumentTypeError(f"expected NAME=VALUE, got {text!r}")
    try:
        return name.strip(), float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"tolerance value in {text!r} is not a number")


def _merge_tols(defaults, pairs):
    out = dict(defaults)
    for name, value in pairs:
        if name not in out:
            raise InputError(f"unknown tolerance {name!r}; known: {sorted(out)}")
        out[name] = value
    return out


def build_parser():
    parser = argparse.ArgumentParser(
        prog="twonormlab",
        description="Numerical laboratory for finite-dimensional linear 2-normed spaces.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--samples", type=int, default=1000, help="sweep size (default 1000)")
        p.add_argument("--seed", type=int, default=42, help="RNG seed (default 42)")
        p.add_argument(
            "--tol",
            action="append",
            type=_tol_pair,
            default=[],
            metavar="NAME=VALUE",
            help="override a named tolerance; repeatable",
        )
        p.add_argument("--out", help="also write the report to this file (atomic)")

    p_ax = sub.add_parser("axioms", help="check N1-N4 on a space spec")
    p_ax.add_argument("space_file")
    common(p_ax)

    p_ext = sub.add_parser("extend", help="extend a functional to the whole space")
    p_ext.add_argument("space_file")
    p_ext.add_argument("functional_file")
    p_ext.add_argument(
        "--alpha-rule",
        choices=("midpoint", "lower", "upper"),
        default="midpoint",
        help="which admissible value to pick at each step",
    )
    common(p_ext)

    p_ver = sub.add_parser("verify", help="run a property suite")
    p_ver.add_argument("suite", choices=SUITE_NAMES)
    p_ver.add_argument("spec_file")
    common(p_ver)
    return parser


def _emit(report, out):
    if out:
        write_report(report, out)
    sys.stdout.write(report_text(report))


def _cmd_axioms(args):
    space = load_space(args.space_file)
    tols = _merge_tols(AXIOM_TOLS, args.tol)
    rep = check_axioms(
        space,
        samples=args.samples,
        seed=args.seed,
        rel_tol=tols["rel_tol"],
        zero_tol=tols["zero_tol"],
    )
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": "axioms",
        "input": args.space_file,
        "tolerances": tols,
    }
    report.update(rep.to_dict())
    _emit(report, args.out)
    return 0 if rep.passed else 1


def _cmd_extend(args):
    space = load_space(args.space_file)
    T = load_functional(args.functional_file, space)
    tols = _merge_tols(EXTEND_TOLS, args.tol)
    if not is_bounded(T):
        sys.stderr.write(
            "error: functional is unbounded on its domain "
            "(coefficients do not vanish on the seminorm kernel)\n"
        )
        return 1
    T_full, trace = extend_full(T, alpha_rule=args.alpha_rule)
    final_norm = functional_norm(T_full)
    preserved = abs(final_norm - trace.initial_norm) <= tols["norm_preserve"] * max(
        1.0, trace.initial_norm
    )
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": "extend",
        "input": {"space": args.space_file, "functional": args.functional_file},
        "tolerances": tols,
        "final_norm": final_norm,
        "norm_preserved": preserved,
    }
    report.update(trace.to_dict())
    _emit(report, args.out)
    return 0 if preserved else 1


def _cmd_verify(args):
    if args.suite in ("ubp", "weakstar"):
        subject = load_family(args.spec_file)
    else:
        subject = load_space(args.spec_file)
    report = run_suite(
        args.suite,
        subject,
        seed=args.seed,
        samples=args.samples,
        tol_overrides=dict(args.tol),
    )
    report["input"] = args.spec_file
    _emit(report, args.out)
    return 0 if report["passed"] else 1


_DISPATCH = {"axioms": _cmd_axioms, "extend": _cmd_extend, "verify": _cmd_verify}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return _DISPATCH[args.command](args)
    except SpecFormatError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except (UnboundedFunctionalError, InfeasibleExtensionError, UnboundedObjectiveError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except TwoNormError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
