"""Command-line front end.

Exit codes: 0 success, 1 verified false (a witness is printed), 2 usage or
parse error, 3 budget or retry limit exceeded.
"""

from __future__ import annotations

import argparse
import logging
import random
import sys
from typing import List, Optional

from .domain import BudgetExceeded, budget, format_labeling, get_cap
from .dual import greedy_base, in_B_K, in_U
from .formats import (
    ParseError,
    format_certificate,
    format_full,
    format_function,
    format_signed,
    format_value,
    parse_function,
)
from .functions import (
    RetryLimitExceeded,
    ValuedFunction,
    brute_force_min,
    check_k_modular,
    check_k_submodular,
    check_k_supermodular,
    check_pairwise,
    gen_rejection,
    gen_unary,
    normalize,
)
from .minmax import Certificate, max_dual, max_dual_integer, verify_minmax
from .multimatroid import check_integral, gen_free_rank, rank_is_k_submodular
from .polyhedron import verify_ft

log = logging.getLogger("ksubmod")

OK, FALSE, USAGE, BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _load(path: str) -> ValuedFunction:
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return parse_function(text)
    except ParseError:
        raise
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def _normalized(f: ValuedFunction) -> ValuedFunction:
    g = normalize(f)
    if g is not f:
        log.warning("f(0) = %s; values below are for f - f(0)", format_value(g.offset))
    return g


def _verdict(name: str, witness) -> str:
    return f"{name}: yes" if witness is None else f"{name}: no ({witness})"


def cmd_check(args, out) -> int:
    f = _load(args.file)
    sub = check_k_submodular(f)
    print(_verdict("k-submodular", sub), file=out)
    print(_verdict("k-supermodular", check_k_supermodular(f)), file=out)
    print(_verdict("k-modular", check_k_modular(f)), file=out)
    print(_verdict("pairwise", check_pairwise(f)), file=out)
    return OK if sub is None else FALSE


def cmd_minimize(args, out) -> int:
    f = _load(args.file)
    value, argmin = brute_force_min(f)
    print(f"minimum {format_value(value)}", file=out)
    print(f"argmin {format_labeling(argmin)}", file=out)
    if not args.certificate:
        return OK
    g = _normalized(f)
    result = verify_minmax(g)
    if isinstance(result, Certificate):
        out.write(format_certificate(result, g.k))
        return OK
    print(f"no certificate: {result.reason}", file=out)
    if result.dual is not None:
        out.write(format_signed(result.dual))
    return FALSE


def cmd_dual(args, out) -> int:
    g = _normalized(_load(args.file))
    res = max_dual_integer(g) if args.integer else max_dual(g)
    if res is None:
        print("U(f) is empty", file=out)
        return FALSE
    value, v = res
    print(f"value {format_value(value)}", file=out)
    out.write(format_signed(v))
    return OK


def cmd_verify_ft(args, out) -> int:
    g = _normalized(_load(args.file))
    rep = verify_ft(g)
    show = lambda v: "none" if v is None else format_value(v)  # noqa: E731
    print(f"min {show(rep.min_value)}", file=out)
    print(f"ft {show(rep.ft_value)}", file=out)
    print(f"dual {show(rep.dual_value)}", file=out)
    if rep.ft_point is not None:
        print("point", file=out)
        out.write(format_full(rep.ft_point))
    for note in rep.notes:
        print(f"note: {note}", file=out)
    print("ok" if rep.ok else "failed", file=out)
    return OK if rep.ok else FALSE


def cmd_multimatroid(args, out) -> int:
    r = _load(args.file)
    try:
        check_integral(r)
    except ValueError as exc:
        raise ParseError(str(exc)) from None
    rep = rank_is_k_submodular(r)
    print("rank axioms: yes" if rep.axioms is None else f"rank axioms: no ({rep.axioms})", file=out)
    print(_verdict("pairwise", rep.pairwise), file=out)
    print(_verdict("k-submodular", rep.submodular), file=out)
    if not rep.consistent:
        print("inconsistent: rank axioms hold but k-submodularity fails", file=out)
    return OK if rep.is_rank and rep.consistent else FALSE


def cmd_generate(args, out) -> int:
    if args.kind == "unary":
        f = gen_unary(args.k, args.n, args.seed, lo=args.lo, hi=args.hi)
    elif args.kind == "random":
        f = gen_rejection(args.k, args.n, lo=args.lo, hi=args.hi, seed=args.seed)
    else:
        f = gen_free_rank(args.k, args.n, cap=args.cap)
    out.write(format_function(f))
    return OK


def cmd_base(args, out) -> int:
    f = _normalized(_load(args.file))
    if args.K is None:
        K = (1,) * f.n
    else:
        K = tuple(args.K)
        if len(K) != f.n or any(not 1 <= t <= f.k for t in K):
            raise UsageError(f"--K needs {f.n} leaves in 1..{f.k}")
    order = list(range(f.n))
    if args.order_seed is not None:
        random.Random(args.order_seed).shuffle(order)
    v = greedy_base(f, K, order)
    print(f"order {' '.join(map(str, order))}", file=out)
    out.write(format_signed(v))
    bad_u = in_U(f, v)
    bad_b = in_B_K(f, v, K)
    print("in U: yes" if bad_u is None else f"in U: no (violated at {format_labeling(bad_u)})", file=out)
    print("in B_K: yes" if bad_b is None else f"in B_K: no ({bad_b})", file=out)
    if bad_u is not None or (bad_b is not None and f.k >= 2):
        return FALSE
    return OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ksubmod", description="Exact tools for k-submodular functions.")
    p.add_argument("--budget", type=int, default=None, help=f"enumeration cap (default {get_cap()})")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def with_file(name, help_text):
        q = sub.add_parser(name, help=help_text)
        q.add_argument("file", help="instance file, or - for stdin")
        return q

    q = with_file("check", "k-sub/super/modularity and pairwise verdicts")
    q.set_defaults(run=cmd_check)
    q = with_file("minimize", "brute-force minimum")
    q.add_argument("--certificate", action="store_true", help="also emit a min-max certificate")
    q.set_defaults(run=cmd_minimize)
    q = with_file("dual", "maximize -|x| over U(f)")
    q.add_argument("--integer", action="store_true", help="search integer vectors only")
    q.set_defaults(run=cmd_dual)
    q = with_file("verify-ft", "compare the polyhedral LP, brute force and the dual")
    q.set_defaults(run=cmd_verify_ft)
    q = with_file("multimatroid", "check rank axioms and k-submodularity")
    q.set_defaults(run=cmd_multimatroid)
    q = with_file("base", "greedy base vector below K")
    q.add_argument("--K", type=int, nargs="+", help="all-leaf labeling (default all ones)")
    q.add_argument("--order-seed", type=int, default=None, help="shuffle the greedy order with this seed")
    q.set_defaults(run=cmd_base)

    q = sub.add_parser("generate", help="write a random instance")
    q.add_argument("--kind", choices=["unary", "random", "rank"], required=True)
    q.add_argument("--k", type=int, required=True)
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--lo", type=int, default=None)
    q.add_argument("--hi", type=int, default=None)
    q.add_argument("--cap", type=int, default=None, help="rank cap (default none)")
    q.set_defaults(run=cmd_generate)
    return p


def _fill_generate_defaults(args) -> None:
    if args.lo is None:
        args.lo = -5 if args.kind == "unary" else -3
    if args.hi is None:
        args.hi = 5 if args.kind == "unary" else 3
    if args.k < 1 or args.n < 1:
        raise UsageError("--k and --n must be positive")
    if args.lo > args.hi:
        raise UsageError("--lo must not exceed --hi")
    if args.cap is not None and args.cap < 1:
        raise UsageError("--cap must be positive")


def main(argv: Optional[List[str]] = None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        if args.command == "generate":
            _fill_generate_defaults(args)
        if args.budget is not None:
            if args.budget < 1:
                raise UsageError("--budget must be positive")
            with budget(args.budget):
                return args.run(args, out)
        return args.run(args, out)
    except (ParseError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    except (BudgetExceeded, RetryLimitExceeded) as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return BUDGET


if __name__ == "__main__":
    sys.exit(main())
