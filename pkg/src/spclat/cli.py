"""``spclat`` command line.

Exit status: 0 on success, 1 on invalid input, 2 when a bounded search
could not decide (the diagnostic names the query), 3 when ``--check``
finds a violated invariant.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path
from typing import Any

from . import balmer, dlat, oag, oracle, spectral
from .errors import InvalidInput, Undecided
from .order import product, semilattice_from_poset
from .serialize import (
    arch_to_json,
    dumps,
    emit_dot,
    group_from_json,
    lattice_from_json,
    poset_from_json,
    space_from_json,
    window_from_json,
)

DEFAULT_SEED = 0


def _load(path: str | None) -> Any:
    if path is None:
        raise InvalidInput("missing input file")
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise InvalidInput(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"{path} is not valid JSON: {exc}") from None


def _labels(raw: str | None) -> list[str]:
    if raw is None:
        raise InvalidInput("missing --set")
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        raise InvalidInput("--set must be a JSON list") from None
    if not isinstance(value, list):
        raise InvalidInput("--set must be a JSON list")
    return [str(x) for x in value]


def _group(args) -> oag.OrderedAbelianGroup:
    return group_from_json(_load(args.group), bound=args.bound)


class Output:
    """One artifact to emit: JSON payload plus the object drawn by ``--dot``."""

    def __init__(self, payload: Any, drawable: Any = None):
        self.payload = payload
        self.drawable = drawable


# -- subcommands -------------------------------------------------------------------------


def cmd_poset(args) -> Output:
    P = poset_from_json(_load(args.input))
    if args.op == "validate":
        return Output(P.to_json(), P)
    if args.op == "opens":
        L = dlat.upsets_lattice(P)
        return Output(L.to_json(), L)
    if args.op == "product":
        Q = poset_from_json(_load(args.other))
        R = product(P, Q)
        return Output(R.to_json(), R)
    if args.op == "semilattice":
        U = semilattice_from_poset(P)
        return Output(U.poset.to_json(), U)
    raise InvalidInput(f"unknown poset operation {args.op!r}")


def cmd_dlat(args) -> Output:
    if args.op == "free":
        U = semilattice_from_poset(poset_from_json(_load(args.input)))
        F = dlat.free_dlat(U)
        if args.check:
            _report_check(oracle.check_free_universal(U))
        return Output(F.lattice.to_json(), F.lattice)
    L = lattice_from_json(_load(args.input))
    if args.op == "validate":
        R = L
    elif args.op == "irr":
        P = dlat.join_irreducibles(L)
        return Output(P.to_json(), P)
    elif args.op == "opposite":
        R = dlat.opposite(L)
    elif args.op == "booleanize":
        R = dlat.booleanize(L).lattice
        if args.check:
            _report_check(oracle.check_boolean_reflection(L))
    elif args.op == "power":
        R = dlat.power(L, _labels(args.set))
    elif args.op == "tensor":
        M = lattice_from_json(_load(args.other))
        R = dlat.tensor(L, M)
        if args.check:
            _report_check(oracle.check_tensor_coproduct(L, M))
    else:
        raise InvalidInput(f"unknown dlat operation {args.op!r}")
    return Output(R.to_json(), R)


def cmd_spec(args) -> Output:
    if args.space:
        X = space_from_json(_load(args.input))
    else:
        L = lattice_from_json(_load(args.input))
        X = spectral.spc(L) if args.spc else spectral.spec(L)
    if args.constructible:
        X = spectral.constructible(X)
    return Output(X.to_json(), X)


def cmd_arch(args) -> Output:
    A = _group(args)
    W = oag.arch(A, window_from_json(args.window, A))
    return Output(arch_to_json(W), W)


def _lattice_and_spectrum(L: dlat.DistLattice, extra: dict | None = None) -> Output:
    X = spectral.spc(L)
    payload = {"lattice": L.to_json(), "spectrum": X.to_json()}
    if extra:
        payload.update(extra)
    return Output(payload, X)


def cmd_balmer(args) -> Output:
    zar = lattice_from_json(_load(args.zar))
    if args.kind == "pointwise":
        shape = _labels(args.shape)
        L = balmer.zar_pointwise(zar, shape)
        if args.check:
            balmer.pointwise_comparison(zar, shape)
        return _lattice_and_spectrum(L)
    if args.kind == "sheaf":
        base = lattice_from_json(_load(args.base))
        L = balmer.zar_sheaf(zar, base)
        if args.check:
            balmer.spc_sheaf(zar, base, max_points=args.max_points)
        return _lattice_and_spectrum(L)
    if args.kind == "day":
        A = _group(args)
        window = window_from_json(args.window, A)
        data = balmer.day_data(A, window)
        L = balmer.zar_day(zar, A, window)
        if args.check:
            _check_day(zar, A, data, args.seed)
        return _lattice_and_spectrum(L, {"arch": arch_to_json(data.arch)})
    raise InvalidInput(f"unknown balmer kind {args.kind!r}")


def _check_day(zar: dlat.DistLattice, A: oag.OrderedAbelianGroup, data: balmer.DayData, seed: int) -> None:
    """Random presentations on the window: tuple and tensor forms of the support must agree."""
    rng = random.Random(seed)
    W = data.arch
    for _ in range(20):
        k = rng.randint(0, len(W.window))
        a_list = rng.sample(list(W.window), k)
        F = balmer.generator(A, zar, rng.choice(zar.elements), a_list)
        direct = balmer.day_support(F, W)
        via_tensor = balmer.tensor_to_day(zar, W, balmer.day_support_tensor(F, W))
        if direct != via_tensor:
            raise AssertionError("support formula disagrees with its tensor-product form")
        if balmer.day_support(balmer.shift(F, rng.choice(list(data.window_closure))), W) != direct:
            raise AssertionError("support formula is not shift invariant")


def _report_check(report: oracle.CheckReport) -> None:
    print(dumps(report.to_json()), file=sys.stderr)
    if not report.passed:
        raise AssertionError(f"check {report.name} failed")


def cmd_oracle(args) -> Output:
    try:
        reports = oracle.run_suite(args.suite, seed=args.seed)
    except KeyError:
        raise InvalidInput(f"unknown suite {args.suite!r}; choose from all, {', '.join(oracle.SUITES)}") from None
    return Output([r.to_json() for r in reports])


# -- parser ------------------------------------------------------------------------------


def _common(p: argparse.ArgumentParser) -> None:
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="emit JSON (default)")
    fmt.add_argument("--dot", action="store_true", help="emit a Graphviz digraph")
    p.add_argument("--bound", type=int, default=None, help="cone search bound (default: SPCLAT_BOUND or 16)")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED, help=f"random seed (default {DEFAULT_SEED})")
    p.add_argument("--check", action="store_true", help="run the invariant checks for this instance")
    p.add_argument("--out", default=None, help="write output here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spclat", description="Balmer spectra at the lattice level.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("poset", help="validate posets, Alexandroff opens, products, semilattices")
    p.add_argument("op", choices=["validate", "opens", "product", "semilattice"])
    p.add_argument("--in", dest="input")
    p.add_argument("--other")
    _common(p)
    p.set_defaults(run=cmd_poset)

    p = sub.add_parser("dlat", help="distributive lattice constructions")
    p.add_argument("op", choices=["validate", "irr", "opposite", "free", "booleanize", "power", "tensor"])
    p.add_argument("--in", dest="input")
    p.add_argument("--other")
    p.add_argument("--set", help="JSON list of labels for power")
    _common(p)
    p.set_defaults(run=cmd_dlat)

    p = sub.add_parser("spec", help="spectrum of a lattice (or a space given by its opens)")
    p.add_argument("--in", dest="input")
    p.add_argument("--spc", action="store_true", help="spectrum of the opposite lattice")
    p.add_argument("--space", action="store_true", help="input is a space, not a lattice")
    p.add_argument("--constructible", action="store_true")
    _common(p)
    p.set_defaults(run=cmd_spec)

    p = sub.add_parser("arch", help="Archimedes semilattice of a window")
    p.add_argument("--group", required=True)
    p.add_argument("--window", default="[]")
    _common(p)
    p.set_defaults(run=cmd_arch)

    p = sub.add_parser("balmer", help="Zariski lattices of diagram, sheaf and filtered categories")
    p.add_argument("kind", choices=["pointwise", "sheaf", "day"])
    p.add_argument("--zar", required=True)
    p.add_argument("--shape", help="JSON list of objects (pointwise)")
    p.add_argument("--base", help="lattice of the base space (sheaf)")
    p.add_argument("--group", help="ordered group (day)")
    p.add_argument("--window", default="[]")
    p.add_argument("--max-points", type=int, default=64, help="homeomorphism search guard for --check")
    _common(p)
    p.set_defaults(run=cmd_balmer)

    p = sub.add_parser("oracle", help="brute-force verification suites")
    p.add_argument("action", choices=["run"])
    p.add_argument("--suite", default="all")
    _common(p)
    p.set_defaults(run=cmd_oracle)
    return parser


def _render(out: Output, args) -> str:
    if args.dot:
        if out.drawable is None:
            raise InvalidInput("this command has no DOT rendering")
        return emit_dot(out.drawable)
    if isinstance(out.payload, list) and args.command == "oracle":
        return "".join(dumps(r) + "\n" for r in out.payload)
    return dumps(out.payload) + "\n"


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.bound is not None and args.bound < 1:
            raise InvalidInput("--bound must be at least 1")
        text = _render(args.run(args), args)
    except InvalidInput as exc:
        print(f"spclat: invalid input: {exc}", file=sys.stderr)
        return 1
    except Undecided as exc:
        print(f"spclat: undecided: {exc}", file=sys.stderr)
        return 2
    except AssertionError as exc:
        print(f"spclat: check failed: {exc}", file=sys.stderr)
        return 3
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
