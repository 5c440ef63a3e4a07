"""Command-line interface: build canonical maps, classify map files, and run
Monte-Carlo verification.

Exit codes are a stable contract: 0 for a positive result, 1 for a
demonstrated non-preserver (or failed verification), 2 for malformed input or
violated construction constraints, 3 for indeterminate classifications
(sampled patterns and insufficient richness).
"""

import argparse
import json
import sys

from . import serialize
from .errors import ClassificationError, StructureError
from .linalg import as_rng, random_pure
from .pure_analysis import classify_pure_preserver, mc_verify_pure
from .sep_analysis import (
    FORM,
    INSUFFICIENT,
    MULTI_FORM,
    PATTERN89,
    classify_sep_preserver,
    classify_multi_preserver,
    mc_verify_product,
)
from .superop import (
    CONJUGATE,
    LINEAR,
    MultiForm,
    SepForm,
    canonical_multi,
    canonical_sep,
    conjugation,
    random_isometry,
    trace_replacer,
)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_BAD_INPUT = 2
EXIT_INDETERMINATE = 3


def _parse_dims(text: str) -> tuple[int, ...]:
    try:
        dims = tuple(int(part) for part in text.split(","))
    except ValueError:
        raise StructureError(f"--dims expects comma-separated integers, got {text!r}")
    if not dims or any(d < 1 for d in dims):
        raise StructureError(f"--dims entries must be positive, got {text!r}")
    return dims


def _parse_flags(text, count: int, rng) -> list[str]:
    if text is None:
        return [str(rng.choice([LINEAR, CONJUGATE])) for _ in range(count)]
    flags = text.split(",")
    if len(flags) != count or any(f not in (LINEAR, CONJUGATE) for f in flags):
        raise StructureError(
            f"--flags expects {count} comma-separated values from "
            f"{{{LINEAR},{CONJUGATE}}}, got {text!r}"
        )
    return flags


def _random_sep_form(tag: int, m: int, n: int, rng, flags) -> SepForm:
    if tag == 1:
        return SepForm(1, r1=random_pure(m, rng), r2=random_pure(n, rng))
    if tag == 2:
        return SepForm(2, u1=random_isometry(m, m, rng, flags[0]), r2=random_pure(n, rng))
    if tag == 3:
        return SepForm(3, r1=random_pure(m, rng), u2=random_isometry(n, n, rng, flags[0]))
    if tag == 4:
        if m < n:
            raise StructureError(f"form 4 requires dims m >= n, got {m},{n}")
        return SepForm(4, u1=random_isometry(m, n, rng, flags[0]), r2=random_pure(n, rng))
    if tag == 5:
        if m > n:
            raise StructureError(f"form 5 requires dims m <= n, got {m},{n}")
        return SepForm(5, r1=random_pure(m, rng), u2=random_isometry(n, m, rng, flags[0]))
    if tag == 6:
        return SepForm(6, u1=random_isometry(m, m, rng, flags[0]),
                       u2=random_isometry(n, n, rng, flags[1]))
    if tag == 7:
        if m != n:
            raise StructureError(f"form 7 requires equal factor dimensions, got {m},{n}")
        return SepForm(7, u1=random_isometry(m, n, rng, flags[0]),
                       u2=random_isometry(n, m, rng, flags[1]))
    raise StructureError(f"unknown form tag {tag}")


def cmd_make(args) -> int:
    rng = as_rng(args.seed)
    dims = _parse_dims(args.dims)
    if args.multi:
        if args.pi is None:
            raise StructureError("--multi requires --pi")
        perm = _parse_dims(args.pi)
        if sorted(perm) != list(range(1, len(dims) + 1)):
            raise StructureError(f"--pi {args.pi!r} is not a permutation of 1..{len(dims)}")
        for j, p in enumerate(perm):
            if dims[p - 1] > dims[j]:
                raise StructureError(
                    f"slot {j + 1} violates the dimension law: carried factor "
                    f"dim {dims[p - 1]} > slot dim {dims[j]}"
                )
        flags = _parse_flags(args.flags, len(dims), rng)
        isos = tuple(
            random_isometry(dims[j], dims[perm[j] - 1], rng, flags[j])
            for j in range(len(dims))
        )
        op = canonical_multi(MultiForm(perm, isos), dims)
    elif args.pure is not None:
        if len(dims) != 2:
            raise StructureError("--pure expects --dims m,n (input and output dimension)")
        m, n = dims
        if args.pure == "trace_replacer":
            op = trace_replacer(random_pure(n, rng), (m,), (n,))
        else:
            if m > n:
                raise StructureError(f"conjugation requires dims m <= n, got {m},{n}")
            flags = _parse_flags(args.flags, 1, rng)
            op = conjugation(random_isometry(n, m, rng, flags[0]))
    else:
        if args.form is None:
            raise StructureError("make needs one of --form, --pure or --multi")
        if args.form in (8, 9):
            raise StructureError(
                f"form {args.form} has no constructor: whether such maps exist "
                "is an open question; only pattern detection is supported"
            )
        if not 1 <= args.form <= 7:
            raise StructureError(f"--form must be 1..7, got {args.form}")
        if len(dims) != 2:
            raise StructureError("bipartite forms expect --dims m,n")
        flags = _parse_flags(args.flags, 2, rng)
        form = _random_sep_form(args.form, dims[0], dims[1], rng, flags)
        op = canonical_sep(form, dims)
    sys.stdout.write(serialize.dumps(serialize.superop_to_json(op)))
    return EXIT_OK


def _load_superop(path: str):
    if path == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(path, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise StructureError(f"cannot read {path}: {exc}")
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StructureError(f"malformed JSON: {exc}")
    return serialize.superop_from_json(obj)


def cmd_classify(args) -> int:
    op = _load_superop(args.path)
    if len(op.in_dims) == 1 and len(op.out_dims) == 1:
        c = classify_pure_preserver(op, args.tol, args.seed)
        sys.stdout.write(serialize.dumps(serialize.pure_report(c)))
        return EXIT_OK if c.positive else EXIT_NEGATIVE
    if len(op.in_dims) == 2:
        c = classify_sep_preserver(op, args.tol, args.seed)
        sys.stdout.write(serialize.dumps(serialize.sep_report(c)))
        if c.kind == FORM:
            return EXIT_OK
        if c.kind == PATTERN89:
            return EXIT_INDETERMINATE
        return EXIT_NEGATIVE
    c = classify_multi_preserver(op, args.tol, args.seed)
    sys.stdout.write(serialize.dumps(serialize.multi_report(c)))
    if c.kind == MULTI_FORM:
        return EXIT_OK
    if c.kind == INSUFFICIENT:
        return EXIT_INDETERMINATE
    return EXIT_NEGATIVE


def cmd_verify(args) -> int:
    op = _load_superop(args.path)
    if len(op.in_dims) == 1:
        res = mc_verify_pure(op, args.samples, args.seed, args.tol)
        witness = (serialize.matrix_to_json(res.witness.projection.with_dims(op.in_dims))
                   if res.witness is not None else None)
    else:
        res = mc_verify_product(op, args.samples, args.seed, args.tol)
        witness = None
        if res.witness is not None:
            witness = {"factors": [serialize.matrix_to_json(p.projection)
                                   for p in res.witness]}
    report = {"passed": bool(res.passed), "samples": int(res.samples), "witness": witness}
    sys.stdout.write(serialize.dumps(report))
    return EXIT_OK if res.passed else EXIT_NEGATIVE


def cmd_demo(args) -> int:
    rng = as_rng(args.seed)
    lines = []
    tr = trace_replacer(random_pure(3, rng), (2,), (3,))
    lines.append(f"trace replacer (2 -> 3): {classify_pure_preserver(tr).kind}")
    from .linalg import HermitianOperator, partial_transpose
    from .superop import from_action

    transpose = from_action((2,), (2,), lambda a: HermitianOperator(a.matrix.T, (2,)))
    c = classify_pure_preserver(transpose)
    lines.append(f"transpose map: {c.kind} with flag {c.isometry.flag}")
    pt = from_action((2, 2), (2, 2), lambda a: partial_transpose(a, 1))
    c = classify_sep_preserver(pt)
    lines.append(
        f"partial transpose on factor 1: form {c.form.tag}, "
        f"flags ({c.form.u1.flag}, {c.form.u2.flag})"
    )
    form6 = canonical_sep(
        SepForm(6, u1=random_isometry(2, 2, rng), u2=random_isometry(2, 2, rng, CONJUGATE)),
        (2, 2),
    )
    c = classify_sep_preserver(form6)
    lines.append(
        f"random factorwise conjugation: form {c.form.tag}, "
        f"grid ({c.grid[0]},{c.grid[1]})"
    )
    for line in lines:
        sys.stdout.write(line + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="preservers",
        description="Construct, classify and verify product-pure-state preserving maps.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_make = sub.add_parser("make", help="emit a canonical map as JSON")
    p_make.add_argument("--form", type=int, help="bipartite canonical form tag 1..7")
    p_make.add_argument("--pure", choices=["trace_replacer", "conjugation"],
                        help="single-factor map kind")
    p_make.add_argument("--multi", action="store_true", help="multipartite form")
    p_make.add_argument("--pi", help="factor permutation for --multi, e.g. 2,3,1")
    p_make.add_argument("--dims", required=True, help="factor dimensions, e.g. 2,3")
    p_make.add_argument("--flags", help="conjugation flags, e.g. linear,conjugate")
    p_make.add_argument("--seed", type=int, default=0)
    p_make.set_defaults(func=cmd_make)

    p_cls = sub.add_parser("classify", help="classify a map JSON file ('-' for stdin)")
    p_cls.add_argument("path")
    p_cls.add_argument("--tol", type=float, default=1e-8)
    p_cls.add_argument("--seed", type=int, default=0)
    p_cls.set_defaults(func=cmd_classify)

    p_ver = sub.add_parser("verify", help="Monte-Carlo purity verification")
    p_ver.add_argument("path")
    p_ver.add_argument("--samples", type=int, default=500)
    p_ver.add_argument("--tol", type=float, default=1e-8)
    p_ver.add_argument("--seed", type=int, default=0)
    p_ver.set_defaults(func=cmd_verify)

    p_demo = sub.add_parser("demo", help="run a small classification walkthrough")
    p_demo.add_argument("--seed", type=int, default=0)
    p_demo.set_defaults(func=cmd_demo)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_BAD_INPUT if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except StructureError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_BAD_INPUT
    except ClassificationError as exc:
        sys.stderr.write(f"indeterminate: {exc}\n")
        return EXIT_INDETERMINATE


if __name__ == "__main__":
    sys.exit(main())
