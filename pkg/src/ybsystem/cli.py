"""Command-line front end.

Matrix files are line oriented; ``#`` starts a comment and tokens are split
shell-style, so expressions containing spaces must be quoted::

    dimension 2            # optional, default 2
    params t r             # optional symbolic parameters
    bind t "3/4"           # optional value for a parameter
    R                      # section header, followed by d^2 rows
    "1" "0" "0" "0"
    ...
    Q
    ...
    basis alpha            # named matrices, used as a display gauge
    ...

Field: ``--prime p`` gives F_p; otherwise unbound parameters give Q(params)
and a file without unbound parameters is read over Q.

Exit codes: 0 success or solution, 1 verified not a solution, 2 input error.
"""

from __future__ import annotations

import argparse
import shlex
import sys
from dataclasses import dataclass, field as dc_field

from .arith import QQ, FunctionField, ParseError, PrimeField, format_scalar, parse_scalar
from .catalog import InstantiationError, catalog_entries, get_entry
from .matrix import Matrix, SingularMatrixError
from .solver import (
    EnumerationBoundError,
    NullSpaceBasis,
    cubic_constraints,
    enumerate_fp,
    solve_linear,
    verify_family,
)
from .symmetry import SymmetryElement, apply_symmetry
from .system import EQUATION_LABELS, YBPair, is_solution

EXIT_OK, EXIT_NOT_SOLUTION, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


@dataclass
class MatrixFile:
    dimension: int = 2
    params: tuple = ()
    bindings: dict = dc_field(default_factory=dict)
    R: tuple | None = None
    Q: tuple | None = None
    bases: list = dc_field(default_factory=list)  # (name, grid)


def parse_matrix_file(text: str) -> MatrixFile:
    mf = MatrixFile()
    lines = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        try:
            toks = shlex.split(raw, comments=True)
        except ValueError as exc:
            raise InputError(f"line {lineno}: {exc}") from None
        if toks:
            lines.append((lineno, toks))
    i = 0
    while i < len(lines):
        lineno, toks = lines[i]
        head = toks[0]
        i += 1
        if head == "dimension":
            if len(toks) != 2 or not toks[1].isdigit() or int(toks[1]) < 1:
                raise InputError(f"line {lineno}: dimension needs one positive integer")
            mf.dimension = int(toks[1])
        elif head == "params":
            mf.params = tuple(toks[1:])
        elif head == "bind":
            if len(toks) != 3:
                raise InputError(f"line {lineno}: bind NAME VALUE")
            mf.bindings[toks[1]] = toks[2]
        elif head in ("R", "Q", "basis"):
            if head == "basis" and len(toks) != 2 or head != "basis" and len(toks) != 1:
                raise InputError(f"line {lineno}: bad section header")
            n = mf.dimension ** 2
            rows = [t for _, t in lines[i:i + n]]
            if len(rows) != n or any(len(r) != n for r in rows):
                raise InputError(f"line {lineno}: section {head} needs {n} rows of {n} entries")
            i += n
            grid = tuple(tuple(r) for r in rows)
            if head == "basis":
                mf.bases.append((toks[1], grid))
            else:
                setattr(mf, head, grid)
        else:
            raise InputError(f"line {lineno}: unknown keyword {head!r}")
    unknown = set(mf.bindings) - set(mf.params)
    if unknown:
        raise InputError(f"bindings for undeclared parameters: {sorted(unknown)}")
    return mf


def field_for(mf: MatrixFile, prime: int | None):
    free = tuple(p for p in mf.params if p not in mf.bindings)
    if prime is not None:
        if free:
            raise InputError(f"--prime needs every parameter bound; unbound: {list(free)}")
        return PrimeField(prime)
    return FunctionField(free) if free else QQ


def _bindings(mf: MatrixFile, fld):
    out = {}
    for name, value in mf.bindings.items():
        out[name] = parse_scalar(value, fld, out)
    return out


def build_matrix(grid, mf: MatrixFile, fld) -> Matrix:
    return Matrix.parse(grid, fld, _bindings(mf, fld))


def load(path: str, prime: int | None = None):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    mf = parse_matrix_file(text)
    return mf, field_for(mf, prime)


def format_matrix_rows(M: Matrix) -> list[str]:
    return [" ".join(f'"{s}"' for s in row) for row in M.to_strings()]


def matrix_inline(M: Matrix) -> str:
    return " / ".join(" ".join(row) for row in M.to_strings())


def _first_nonzero(M: Matrix) -> str:
    i, j, x = M.first_nonzero()
    return f"nonzero at ({i},{j}) = {format_scalar(x)}"


# ---------------------------------------------------------------------------
# commands

def _require(mf: MatrixFile, *names):
    for n in names:
        if getattr(mf, n) is None:
            raise InputError(f"file has no {n} section")


def verify_lines(pair: YBPair) -> tuple[list[str], int]:
    report = is_solution(pair)
    lines = [f"field {pair.field}"]
    for name, M in report.residuals.items():
        status = "zero" if M.is_zero() else _first_nonzero(M)
        lines.append(f"{name} [{EQUATION_LABELS[name]}]: {status}")
    lines.append(f"R invertible: {'yes' if report.invertible_R else 'no'}")
    lines.append(f"Q invertible: {'yes' if report.invertible_Q else 'no'}")
    if report.solves:
        lines.append("verdict: solution (all four residuals zero)")
        return lines, EXIT_OK
    bad = [n for n, ok in report.equation_status().items() if not ok]
    lines.append(f"verdict: not a solution (nonzero: {', '.join(bad)})")
    return lines, EXIT_NOT_SOLUTION


def cmd_verify(args) -> int:
    mf, fld = load(args.file, args.prime)
    _require(mf, "R", "Q")
    d = mf.dimension
    pair = YBPair(build_matrix(mf.R, mf, fld), build_matrix(mf.Q, mf, fld), d)
    lines, code = verify_lines(pair)
    print("\n".join(lines))
    return code


def cmd_nullspace(args) -> int:
    mf, fld = load(args.file, args.prime)
    _require(mf, "R")
    ns = solve_linear(build_matrix(mf.R, mf, fld), mf.dimension)
    print(f"field {fld}")
    print(f"dimension {ns.dimension}")
    for name, B in zip(ns.coords, ns.basis):
        print(f"basis {name}")
        print("\n".join(format_matrix_rows(B)))
    return EXIT_OK


def cmd_constraints(args) -> int:
    mf, fld = load(args.file, args.prime)
    _require(mf, "R")
    d = mf.dimension
    R = build_matrix(mf.R, mf, fld)
    if args.gauge:
        gf = mf if args.gauge == args.file else None
        if gf is None:
            gf, _ = load(args.gauge)
            if gf.dimension != d:
                raise InputError("gauge file dimension differs")
            gf.params, gf.bindings = mf.params, mf.bindings
        if not gf.bases:
            raise InputError("gauge file has no basis sections")
        names = tuple(n for n, _ in gf.bases)
        mats = tuple(build_matrix(g, gf, fld) for _, g in gf.bases)
        basis = NullSpaceBasis(mats, names, d)
    else:
        basis = solve_linear(R, d)
    system = cubic_constraints(R, basis, d)
    print(f"variables {' '.join(system.variables)}")
    print(f"count {len(system)}")
    if len(system) <= args.limit or args.all:
        for s in system.to_strings():
            print(s)
    else:
        print(f"(not printed: more than {args.limit}; pass --all)")
    return EXIT_OK


def cmd_catalog(args) -> int:
    if args.action == "list":
        for e in catalog_entries():
            print(f"{e.name}  params={','.join(e.params) or '-'}  {e.anchor}")
        return EXIT_OK
    try:
        entries = [get_entry(args.entry)] if args.entry else catalog_entries()
    except KeyError:
        raise InputError(f"unknown catalog entry {args.entry!r}") from None
    ok = True
    for e in entries:
        rep = verify_family(e, samples=args.samples, seed=args.seed)
        sym = "n/a" if rep.symbolic is None else \
            f"{'ok' if rep.symbolic else 'FAIL'} ({rep.symbolic_branches} branches)"
        status = "ok" if rep.ok else "FAIL"
        print(f"{e.name}: {status}  samples {rep.passed}/{rep.samples}  symbolic {sym}")
        for binding, why in rep.failures:
            shown = ", ".join(f"{k}={format_scalar(v)}" for k, v in sorted(binding.items()))
            print(f"  failure at {shown}: {why}")
        ok &= rep.ok
    print("all families verified" if ok else "some families failed")
    return EXIT_OK if ok else EXIT_NOT_SOLUTION


def cmd_enumerate(args) -> int:
    mf, fld = load(args.file, args.prime)
    _require(mf, "R")
    R = build_matrix(mf.R, mf, fld)
    sols = enumerate_fp(R, args.prime, mf.dimension, bound=args.bound)
    print(f"field {fld}")
    print(f"solutions {len(sols)}")
    print(f"invertible {sum(s.invertible for s in sols)}")
    for s in sols:
        coords = ",".join(str(c) for c in s.coords)
        flag = "invertible" if s.invertible else "singular"
        print(f"({coords}) {flag}: {matrix_inline(s.Q)}")
    return EXIT_OK


def cmd_orbit(args) -> int:
    mf, fld = load(args.file, args.prime)
    _require(mf, "R", "Q")
    if mf.dimension != 2:
        raise InputError("orbit is implemented for dimension 2")
    b = _bindings(mf, fld)
    parts = [p.strip() for p in args.s.split(",")]
    if len(parts) != 4:
        raise InputError("--s needs four comma-separated entries")
    S = Matrix.parse([parts[:2], parts[2:]], fld, b)
    lam = parse_scalar(args.lam, fld, b)
    kappa = parse_scalar(args.kappa, fld, b)
    try:
        g = SymmetryElement(S, lam, kappa, args.flip)
    except (SingularMatrixError, ValueError) as exc:
        raise InputError(str(exc)) from None
    pair = YBPair(build_matrix(mf.R, mf, fld), build_matrix(mf.Q, mf, fld), 2)
    out = apply_symmetry(pair, g)
    print(f"# field {fld}")
    print("dimension 2")
    if isinstance(fld, FunctionField) and fld.variables:
        print("params " + " ".join(fld.variables))
    print("R")
    print("\n".join(format_matrix_rows(out.R)))
    print("Q")
    print("\n".join(format_matrix_rows(out.Q)))
    lines, code = verify_lines(out)
    print("\n".join("# " + line for line in lines))
    return code


# ---------------------------------------------------------------------------

def _prime(text: str) -> int:
    try:
        p = int(text)
        PrimeField(p)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not a prime") from None
    return p


def _positive(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        n = 0
    if n < 1:
        raise argparse.ArgumentTypeError(f"{text!r} is not a positive integer")
    return n


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ybsystem", description="Exact tools for the constant Yang-Baxter system.")
    sub = ap.add_subparsers(dest="command", required=True)

    def with_file(name, help_, prime_required=False):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("file")
        sp.add_argument("--prime", type=_prime, required=prime_required)
        return sp

    with_file("verify", "check all four equations for the pair in FILE").set_defaults(func=cmd_verify)
    with_file("nullspace", "kernel of the linear equations for R").set_defaults(func=cmd_nullspace)

    sp = with_file("constraints", "cubic constraints on the kernel coordinates")
    sp.add_argument("--gauge", help="file with basis sections used as coordinates")
    sp.add_argument("--limit", type=int, default=20, help="print polynomials only up to this count")
    sp.add_argument("--all", action="store_true", help="always print every polynomial")
    sp.set_defaults(func=cmd_constraints)

    sp = sub.add_parser("catalog", help="list or verify the exceptional families")
    sp.add_argument("action", choices=("list", "verify"))
    sp.add_argument("--samples", type=_positive, default=20)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--entry")
    sp.set_defaults(func=cmd_catalog)

    sp = with_file("enumerate", "all solutions Q over F_p", prime_required=True)
    sp.add_argument("--bound", type=_positive, default=None, help="maximum number of kernel points")
    sp.set_defaults(func=cmd_enumerate)

    sp = with_file("orbit", "apply a symmetry and re-verify")
    sp.add_argument("--s", default="1,0,0,1", help="entries a,b,c,d of S")
    sp.add_argument("--lambda", dest="lam", default="1")
    sp.add_argument("--kappa", default="1")
    sp.add_argument("--flip", action="store_true")
    sp.set_defaults(func=cmd_orbit)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except EnumerationBoundError as exc:
        print(f"error: {exc} (required {exc.required})", file=sys.stderr)
    except (InputError, ParseError, InstantiationError, SingularMatrixError, ZeroDivisionError,
            ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
