"""Command-line front end.

Exit codes: 0 success, 1 usage, 2 unreadable or malformed input,
3 numerical hypothesis failure, 4 internal inconsistency.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import config
from ._version import __version__
from .errors import QTError
from .perturb import CORE_TOL, IDENTITY_TOL, perturb_report
from .report import build_metadata, render_json, render_text
from .spectral import (
    drazin_residuals,
    norm_s,
    pinv_residuals,
    qt_drazin,
    qt_index,
    qt_inverse,
    qt_pinv,
    qt_rank,
    qt_spectral_radius,
    qt_svd,
)
from .tensor import qt_power, qt_product, qt_transpose
from .tensorfile import matrix_as_tensor, read_tensor, write_tensor

VERIFY_TOL = {"pinv": 1e-8, "drazin": 1e-7}
FAILED_STATUSES = ("hypothesis-failed", "bound-inapplicable", "identities-failed")


class UsageError(Exception):
    pass


class Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


def _global_flags(defaults: bool) -> argparse.ArgumentParser:
    # Sub-parsers get SUPPRESS defaults so flags work before or after the subcommand.
    p = argparse.ArgumentParser(add_help=False)

    def d(value):
        return value if defaults else argparse.SUPPRESS

    p.add_argument("--atol", type=float, default=d(None), help="absolute tolerance (core condition in perturb)")
    p.add_argument("--rtol", type=float, default=d(None), help="relative tolerance for residual checks")
    p.add_argument("--paranoid", action="store_true", default=d(False), help="cross-check with independent routes")
    p.add_argument("--seed", type=int, default=d(0), help="seed for randomized self-tests")
    p.add_argument("--reproducible", action="store_true", default=d(False), help="omit the timestamp from reports")
    return p


def build_parser() -> Parser:
    parser = Parser(prog="qtdrazin", description=__doc__.splitlines()[0], parents=[_global_flags(True)])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=Parser)
    sub.required = True
    common = [_global_flags(False)]

    def command(name, help_text):
        return sub.add_parser(name, help=help_text, description=help_text, parents=common)

    def out(p):
        p.add_argument("-o", "--output", default="-", help="output file (default: stdout)")

    p = command("info", "dimensions, ranks, index, spectral norm and radius")
    p.add_argument("file")
    p = command("product", "QT-product A*B")
    p.add_argument("a")
    p.add_argument("b")
    out(p)
    for name, text in (
        ("transpose", "conjugate transpose"),
        ("inverse", "QT-inverse"),
        ("pinv", "Moore-Penrose inverse"),
        ("bcirc", "z-block circulant matrix, stored as an (n1 n3) x (n2 n3) x 1 tensor"),
    ):
        p = command(name, text)
        p.add_argument("a")
        out(p)
    p = command("power", "QT-power A^K")
    p.add_argument("a")
    p.add_argument("k", type=int)
    out(p)
    p = command("drazin", "Drazin inverse")
    p.add_argument("a")
    p.add_argument("--l", type=int, default=None, help="power used in the formula (default: the index)")
    out(p)
    p = command("svd", "QT-SVD, written to PREFIX{U,S,V}.qt")
    p.add_argument("a")
    p.add_argument("--prefix", required=True)
    p = command("verify", "residuals of the defining equations of a generalized inverse")
    p.add_argument("a")
    p.add_argument("x")
    p.add_argument("--as", dest="kind", choices=("pinv", "drazin"), required=True)
    p = command("perturb", "certify the perturbation identities and bounds for B = A + E")
    p.add_argument("a")
    p.add_argument("e")
    p.add_argument("--format", choices=("json", "text"), default="json")
    out(p)
    command("selftest", "randomized consistency checks (uses --seed)")
    return parser


def _emit(text: str, dest: str) -> None:
    if dest == "-":
        sys.stdout.write(text)
    else:
        Path(dest).write_text(text, encoding="utf-8")


def cmd_info(args) -> int:
    a = read_tensor(args.file)
    rank = qt_rank(a)
    lines = ["dims: {} x {} x {}".format(*a.shape), f"tubal_rank: {rank.tubal_rank}", f"bcirc_rank: {rank.bcirc_rank}"]
    if a.n1 == a.n2:
        lines.append(f"qt_index: {qt_index(a)}")
    lines.append(f"norm_s: {norm_s(a)!r}")
    if a.n1 == a.n2:
        lines.append(f"rho_qt: {qt_spectral_radius(a)!r}")
    print("\n".join(lines))
    return 0


def cmd_unary(args) -> int:
    a = read_tensor(args.a)
    if args.command == "transpose":
        result = qt_transpose(a)
    elif args.command == "inverse":
        result = qt_inverse(a)
    elif args.command == "pinv":
        result = qt_pinv(a)
    elif args.command == "bcirc":
        result = matrix_as_tensor(a.bcirc_z)
    elif args.command == "power":
        result = qt_power(a, args.k)
    elif args.command == "drazin":
        result = qt_drazin(a, args.l)
    else:  # pragma: no cover
        raise AssertionError(args.command)
    write_tensor(result, args.output)
    return 0


def cmd_product(args) -> int:
    write_tensor(qt_product(read_tensor(args.a), read_tensor(args.b)), args.output)
    return 0


def cmd_svd(args) -> int:
    for name, part in zip("USV", qt_svd(read_tensor(args.a))):
        write_tensor(part, f"{args.prefix}{name}.qt")
    return 0


def cmd_verify(args) -> int:
    a, x = read_tensor(args.a), read_tensor(args.x)
    resid = pinv_residuals(a, x) if args.kind == "pinv" else drazin_residuals(a, x)
    tol = args.rtol if args.rtol is not None else VERIFY_TOL[args.kind]
    worst = max(resid.values())
    for name, value in resid.items():
        print(f"{name}: {value:.3e}")
    print(f"max: {worst:.3e} (tolerance {tol:g})")
    if not worst <= tol:
        print(f"error: residual {worst:.3e} exceeds {tol:g}", file=sys.stderr)
        return 3
    return 0


def cmd_perturb(args) -> int:
    tol = args.rtol if args.rtol is not None else IDENTITY_TOL
    core_tol = args.atol if args.atol is not None else CORE_TOL
    report = perturb_report(read_tensor(args.a), read_tensor(args.e), tol=tol, core_tol=core_tol)
    meta = build_metadata(
        {"A": args.a, "E": args.e},
        {"identity": tol, "core": core_tol},
        args.reproducible,
    )
    render = render_json if args.format == "json" else render_text
    _emit(render(report, meta), args.output)
    if report.status in FAILED_STATUSES:
        print(f"error: perturbation report status '{report.status}'", file=sys.stderr)
        for note in report.notes:
            print(f"  {note}", file=sys.stderr)
        return 3
    return 0


def cmd_selftest(args) -> int:
    from .testing import core_perturbation, planted_tensor, random_tensor

    rng = np.random.default_rng(args.seed)
    tol = args.rtol if args.rtol is not None else 1e-7
    worst = {"homomorphism": 0.0, "pinv": 0.0, "drazin": 0.0, "perturbation": 0.0}
    for _ in range(10):
        n, n3 = int(rng.integers(2, 5)), int(rng.integers(1, 5))
        a = random_tensor(rng, n, n, n3)
        b = random_tensor(rng, n, n, n3)
        lhs = qt_product(a, b).bcirc_z
        rhs = a.bcirc_z @ b.bcirc_z
        worst["homomorphism"] = max(worst["homomorphism"], (lhs - rhs).norm_fro() / rhs.norm_fro())
        worst["pinv"] = max(worst["pinv"], max(pinv_residuals(a, qt_pinv(a)).values()))
        p = planted_tensor(rng, n, rng.integers(0, 3, size=n3))
        pd = qt_drazin(p)
        worst["drazin"] = max(worst["drazin"], max(drazin_residuals(p, pd).values()))
        e = core_perturbation(rng, p, pd, float(rng.uniform(0.1, 0.6)))
        rep = perturb_report(p, e)
        if rep.identities:
            scale = max(1.0, rep.norms["BD"])
            worst["perturbation"] = max(
                worst["perturbation"],
                max(
                    v / scale
                    for v in (
                        rep.projector_residual,
                        rep.diff_residual_left,
                        rep.diff_residual_right,
                        rep.resolvent_residual_left,
                        rep.resolvent_residual_right,
                    )
                ),
            )
    ok = True
    for name, value in worst.items():
        good = value <= tol
        ok &= good
        print(f"{name}: {value:.3e} {'ok' if good else 'FAIL'}")
    print(f"seed {args.seed}: {'passed' if ok else 'failed'}")
    return 0 if ok else 4


HANDLERS = {
    "info": cmd_info,
    "product": cmd_product,
    "transpose": cmd_unary,
    "power": cmd_unary,
    "inverse": cmd_unary,
    "pinv": cmd_unary,
    "drazin": cmd_unary,
    "bcirc": cmd_unary,
    "svd": cmd_svd,
    "verify": cmd_verify,
    "perturb": cmd_perturb,
    "selftest": cmd_selftest,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(exc, file=sys.stderr)
        return 1
    try:
        with config.paranoid(args.paranoid or config.paranoid_enabled()):
            return HANDLERS[args.command](args)
    except QTError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
