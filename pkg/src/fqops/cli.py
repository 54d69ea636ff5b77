"""Command-line front end.

Exit status: 0 on success, 1 on a mathematical failure (violated property,
inconsistent system, singular differential), 2 on usage errors.
"""

from __future__ import annotations

import argparse
import ast
import sys
from fractions import Fraction
from pathlib import Path
from typing import List, Optional

from .bases import BASES, MIXED
from .fqop import (
    A1, A2, EQ1, EQ2, KINDS, VECTORIAL, Expr, FQOperation, comm, deserialize,
    evaluate_expression, serialize,
)


class UsageError(ValueError):
    pass


# -- operands ---------------------------------------------------------------

def load_operation(spec: str, order: int, basis: Optional[str] = None) -> FQOperation:
    """A builtin name, a file path, or ``-`` for standard input."""
    from .library import NAMES, builtin

    if spec in NAMES:
        return builtin(spec, order, basis or MIXED)
    if spec == "-":
        text = sys.stdin.read()
    else:
        path = Path(spec)
        if not path.is_file():
            raise UsageError(f"{spec!r} is neither a builtin nor a readable file")
        text = path.read_text()
    op = deserialize(text)
    return op.to_basis(basis) if basis else op


_NAMES = {"A1": A1, "A2": A2, "Q1": EQ1, "Q2": EQ2}


def parse_expression(text: str):
    """Parse e.g. ``(A1, A2)`` or ``comm(A1, A2) / 2`` into expression nodes."""
    try:
        tree = ast.parse(text, mode="eval").body
    except SyntaxError as exc:
        raise UsageError(f"cannot parse expression: {exc.msg}") from exc

    def num(node) -> Optional[Fraction]:
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return Fraction(node.value)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
            v = num(node.operand)
            return None if v is None else -v
        if isinstance(node, ast.BinOp) and isinstance(node.op, ast.Div):
            a, b = num(node.left), num(node.right)
            if a is not None and b:
                return a / b
        return None

    def walk(node) -> Expr:
        if isinstance(node, ast.Name):
            if node.id not in _NAMES:
                raise UsageError(f"unknown symbol {node.id!r}")
            return _NAMES[node.id]
        c = num(node)
        if c is not None:
            return Expr("const", (), c)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
            return -walk(node.operand)
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Div):
                d = num(node.right)
                if not d:
                    raise UsageError("division only by nonzero rationals")
                return walk(node.left) * (1 / d)
            left, right = walk(node.left), walk(node.right)
            if isinstance(node.op, ast.Add):
                return left + right
            if isinstance(node.op, ast.Sub):
                return left - right
            if isinstance(node.op, ast.Mult):
                return left * right
        if isinstance(node, ast.Call) and isinstance(node.func, ast.Name):
            args = [walk(a) for a in node.args]
            if node.func.id == "comm" and len(args) == 2:
                return comm(*args)
            if node.func.id == "inv" and len(args) == 1:
                return args[0].inv()
        raise UsageError(f"unsupported expression element: {ast.dump(node)[:60]}")

    if isinstance(tree, ast.Tuple):
        if len(tree.elts) != 2:
            raise UsageError("a vectorial expression is a pair")
        return tuple(walk(e) for e in tree.elts)
    return walk(tree)


# -- verbs ------------------------------------------------------------------

def cmd_builtin(args) -> int:
    print(serialize(load_operation(args.name, args.order, args.basis)), end="")
    return 0


def cmd_expand(args) -> int:
    e = parse_expression(args.expression)
    kind = args.kind or (VECTORIAL if isinstance(e, tuple) else None)
    if kind is None:
        raise UsageError("--kind is required for a single expression")
    print(serialize(evaluate_expression(e, kind, args.order, args.basis)), end="")
    return 0


def cmd_transform(args) -> int:
    op = load_operation(args.operation, args.order)
    print(serialize(op.to_basis(args.to)), end="")
    return 0


def cmd_check(args) -> int:
    from .invariance import check, parse_properties, validate

    specs = parse_properties(args.properties)
    for s in specs:
        validate(s)
    op = load_operation(args.operation, args.order)
    status = 0
    for s in specs:
        rep = check(op, s, max_order=args.max_order, reduced=args.reduced)
        if rep.holds:
            print(f"{s}: holds")
        else:
            status = 1
            print(f"{s}: violated at order {rep.order}: {rep.label} = {rep.value}")
    return status


def cmd_compose(args) -> int:
    from .calculus import compose

    outer = load_operation(args.outer, args.order)
    inner = load_operation(args.inner, args.order)
    print(serialize(compose(outer, inner, args.order)), end="")
    return 0


def cmd_invert(args) -> int:
    from .calculus import invert

    print(serialize(invert(load_operation(args.operation, args.order))), end="")
    return 0


def cmd_solve(args) -> int:
    from .invariance import parse_properties, validate
    from .linsolve import solve_layered

    specs = parse_properties(args.properties)
    for s in specs:
        validate(s)
    log = (lambda m: print(m, file=sys.stderr)) if args.verbose else None
    table = solve_layered(specs, args.kind, args.order, log=log).table
    print("\n".join(table.records()) if args.records else table.render())
    return 1 if table.inconsistent_at is not None else 0


def cmd_selftest(args) -> int:
    from .selftest import run

    failures = 0
    for name, ok, detail in run():
        print(f"{'ok  ' if ok else 'FAIL'} {name}" + (f": {detail}" if detail and not ok else ""))
        failures += not ok
    print(f"{failures} failure(s)")
    return 1 if failures else 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fqops", description="Exact formal FQ operation calculus (n = 2).")
    p.add_argument("--threads", type=int, default=1,
                   help="accepted for interface compatibility; computation is single-threaded")
    sub = p.add_subparsers(dest="verb", required=True)

    def common(sp, basis=True):
        sp.add_argument("--order", type=int, default=2)
        if basis:
            sp.add_argument("--basis", choices=BASES, default=MIXED)

    sp = sub.add_parser("builtin", help="print a built-in operation")
    sp.add_argument("name")
    common(sp)
    sp.set_defaults(fn=cmd_builtin)

    sp = sub.add_parser("expand", help="expand an expression in A1, A2")
    sp.add_argument("expression")
    sp.add_argument("--kind", choices=KINDS)
    common(sp)
    sp.set_defaults(fn=cmd_expand)

    sp = sub.add_parser("transform", help="rewrite an operation in another basis")
    sp.add_argument("operation")
    sp.add_argument("--to", choices=BASES, required=True)
    common(sp, basis=False)
    sp.set_defaults(fn=cmd_transform)

    sp = sub.add_parser("check", help="check properties of an operation")
    sp.add_argument("operation")
    sp.add_argument("properties")
    sp.add_argument("--max-order", type=int)
    sp.add_argument("--reduced", action="store_true", help="evaluate on natural-reduced data")
    common(sp, basis=False)
    sp.set_defaults(fn=cmd_check)

    sp = sub.add_parser("compose", help="outer o inner")
    sp.add_argument("outer")
    sp.add_argument("inner")
    common(sp, basis=False)
    sp.set_defaults(fn=cmd_compose)

    sp = sub.add_parser("invert", help="compositional inverse")
    sp.add_argument("operation")
    common(sp, basis=False)
    sp.set_defaults(fn=cmd_invert)

    sp = sub.add_parser("solve", help="fiber dimensions of a property set")
    sp.add_argument("properties")
    sp.add_argument("--kind", choices=KINDS, default=VECTORIAL)
    sp.add_argument("--records", action="store_true", help="machine-readable output")
    sp.add_argument("--verbose", action="store_true")
    common(sp, basis=False)
    sp.set_defaults(fn=cmd_solve)

    sp = sub.add_parser("selftest", help="run the golden-value suite")
    sp.set_defaults(fn=cmd_selftest)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "order", 0) is not None and getattr(args, "order", 0) < 0:
        parser.error("--order must be non-negative")
    try:
        return args.fn(args)
    except UsageError as exc:
        print(f"fqops: {exc}", file=sys.stderr)
        return 2
    except ArithmeticError as exc:
        print(f"fqops: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"fqops: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
