"""Command-line front end: construct, verify, pd, betti, sweep.

Exit codes: 0 success/verified, 1 verification failed, 2 invalid input,
3 resource limit exceeded.
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .errors import IdealfamError, ParseError, ResourceLimitError, ValidationError
from .family import (
    FamilyParams,
    build_ideal,
    caviglia_ideal,
    derived_constants,
    enumerate_A,
    identify_subfamily,
    mccullough_ideal,
    mccullough_witness,
    pd_formula,
    preset_many_generators,
    preset_three_generators,
    socle_witness,
    variable_count,
    verification_basis,
    verification_degree,
    verify_lemma,
    verify_socle,
    verify_socle_ideal,
)
from .groebner import buchberger
from .resolution import resolve
from .ring import PrimeField, QQ

EXIT_OK = 0
EXIT_VERIFICATION_FAILED = 1
EXIT_INVALID_INPUT = 2
EXIT_RESOURCE_LIMIT = 3


@dataclass
class RunConfig:
    command: str
    target: list[str]
    field: object
    degree_limit: int | None
    fmt: str
    out: str | None
    jobs: int
    pair_limit: int
    args: argparse.Namespace


def _parse_field(text):
    if text.upper() == "QQ":
        return QQ
    try:
        p = int(text)
    except ValueError:
        raise ValidationError(f"--field expects a prime or QQ, got {text!r}") from None
    return PrimeField(p)


def _build_target(target, field):
    """Resolve a CLI target into (kind, ideal, extras)."""
    if not target:
        raise ValidationError("missing construction target")
    head = target[0]
    if head == "mccullough":
        if len(target) != 4:
            raise ValidationError("usage: mccullough M N D")
        m, n, d = (int(x) for x in target[1:])
        return ("mccullough", mccullough_ideal(m, n, d, field), (m, n, d))
    if head == "caviglia":
        if len(target) != 2:
            raise ValidationError("usage: caviglia D")
        d = int(target[1])
        return ("caviglia", caviglia_ideal(d, field), (d,))
    if len(target) != 1:
        raise ValidationError(f"unrecognized target {' '.join(target)!r}")
    params = FamilyParams.parse(head)
    return ("family", build_ideal(params, field), params)


def _constants_payload(params):
    cs = derived_constants(params)
    return {
        "g": params.g,
        "m": list(params.m),
        "d": list(cs.d),
        "M": list(cs.M),
        "A_sizes": [len(enumerate_A(params, k)) for k in range(params.n + 1)],
        "variable_count": variable_count(params),
        "pd_formula": pd_formula(params),
    }


def _construct_payload(kind, ideal, extra):
    payload = {
        "params": str(extra) if kind == "family" else {"constructor": kind, "arguments": list(extra)},
        "constants": _constants_payload(extra) if kind == "family" else None,
        "generators": [str(g) for g in ideal.generators],
        "variables": list(ideal.ring.table.names),
        "report": None,
    }
    return payload


def _m2_script(ideal, compute_betti=False):
    """One-way export for independent cross-checking."""
    ring = ideal.ring
    names = ring.table.names
    lines = ["-- generated by idealfam; variable key:"]
    for i, name in enumerate(names):
        lines.append(f"--   v_{i} = {name}")
    coeff = "QQ" if not ring.field.is_prime_field else f"ZZ/{ring.field.p}"
    n = len(names)
    lines.append(f"R = {coeff}[v_0..v_{n - 1}];")
    rendered = []
    for g in ideal.generators:
        chunks = []
        for e, c in g.terms:
            mono = "*".join(
                f"v_{i}^{x}" if x > 1 else f"v_{i}" for i, x in enumerate(e) if x
            )
            if not mono:
                chunks.append(str(c))
            elif c == 1:
                chunks.append(mono)
            else:
                chunks.append(f"{c}*{mono}")
        rendered.append(" + ".join(chunks))
    lines.append("I = ideal(")
    lines.append(",\n".join("  " + r for r in rendered))
    lines.append(");")
    if compute_betti:
        lines.append("betti res I")
    return "\n".join(lines) + "\n"


def _emit(text, config):
    if config.out:
        with open(config.out, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        print(text)


def cmd_construct(config) -> int:
    kind, ideal, extra = _build_target(config.target, config.field)
    if config.fmt == "m2":
        _emit(_m2_script(ideal), config)
        return EXIT_OK
    payload = _construct_payload(kind, ideal, extra)
    if config.fmt == "json":
        _emit(json.dumps(payload, indent=2), config)
        return EXIT_OK
    lines = []
    if kind == "family":
        cs = payload["constants"]
        lines.append(f"params: {payload['params']}")
        lines.append(f"degrees d_k: {cs['d']}")
        lines.append(f"bounds  M_k: {cs['M']}")
        lines.append(f"stage sizes |A_k| (k=0..n): {cs['A_sizes']}")
        lines.append(f"variables ({len(payload['variables'])}): {', '.join(payload['variables'])}")
        lines.append(f"pd formula: {cs['pd_formula']}   variable count: {cs['variable_count']}")
    else:
        lines.append(f"constructor: {payload['params']}")
        lines.append(f"variables ({len(payload['variables'])}): {', '.join(payload['variables'])}")
    lines.append("generators:")
    for g in payload["generators"]:
        lines.append(f"  {g}")
    _emit("\n".join(lines), config)
    return EXIT_OK


def cmd_verify(config) -> int:
    kind, ideal, extra = _build_target(config.target, config.field)
    if kind == "family":
        limit = config.degree_limit or verification_degree(extra)
        gb = buchberger(
            ideal,
            degree_limit=limit,
            pair_limit=config.pair_limit,
            tail_reduce=False,
            interreduce=False,
        )
        socle = verify_socle(extra, gb)
        lemma = verify_lemma(extra, gb)
        payload = {
            "params": str(extra),
            "constants": _constants_payload(extra),
            "generators": [str(g) for g in ideal.generators],
            "report": {"socle": socle.as_dict(), "lemma": lemma.as_dict()},
        }
        ok = socle.conclusion and lemma.ok
    else:
        if kind == "mccullough":
            m, n, d = extra
            witness = mccullough_witness(m, n, d, ideal.ring.table)
        else:
            (d,) = extra
            # witness x^(d-1) y^(d-1) w^(d-2) z^(d-2) over the table (w,x,y,z)
            witness = ideal.ring.monomial([d - 2, d - 1, d - 1, d - 2])
        limit = config.degree_limit or witness.degree + 1
        gb = buchberger(
            ideal,
            degree_limit=limit,
            pair_limit=config.pair_limit,
            tail_reduce=False,
            interreduce=False,
        )
        socle = verify_socle_ideal(ideal, witness, gb)
        payload = {
            "params": {"constructor": kind, "arguments": list(extra)},
            "constants": None,
            "generators": [str(g) for g in ideal.generators],
            "report": {"socle": socle.as_dict(), "lemma": None},
        }
        ok = socle.conclusion
    if config.fmt == "json":
        _emit(json.dumps(payload, indent=2), config)
    else:
        lines = [f"target: {payload['params']}"]
        lines.append(f"witness: {payload['report']['socle']['witness']}")
        lines.append(f"witness outside ideal: {payload['report']['socle']['not_in_ideal']}")
        killed = payload["report"]["socle"]["killed_by"]
        bad = [name for name, good in killed.items() if not good]
        lines.append(
            f"every variable kills the witness: {not bad}"
            + (f" (failing: {', '.join(bad)})" if bad else "")
        )
        if payload["report"]["lemma"] is not None:
            lines.append(f"stage monomials in ideal: {payload['report']['lemma']['ok']}")
        lines.append(
            f"depth-zero verified: {ok}; implied pd = {payload['report']['socle']['implied_pd']}"
        )
        _emit("\n".join(lines), config)
    return EXIT_OK if ok else EXIT_VERIFICATION_FAILED


def _corollary_notes(params):
    notes = []
    for p in (2, 3):
        if params == preset_three_generators(p):
            cs = derived_constants(params)
            notes.append(
                f"three-generator preset p={p}: degree {cs.degree} = {p}^2, "
                f"pd {pd_formula(params)} >= {p ** (p - 1)} = p^(p-1)"
            )
    for p in (1, 2, 3):
        if params == preset_many_generators(p):
            cs = derived_constants(params)
            notes.append(
                f"many-generator preset p={p}: {2 * p + 1} generators of degree "
                f"{cs.degree} = 2p+1, pd {pd_formula(params)} >= {p ** (2 * p)} = p^(2p)"
            )
    return notes


def cmd_pd(config) -> int:
    if len(config.target) != 1:
        raise ValidationError("pd expects family parameters like 2:(2,2,2)")
    params = FamilyParams.parse(config.target[0])
    formula = pd_formula(params)
    count = variable_count(params)
    if config.fmt == "json":
        payload = {
            "params": str(params),
            "constants": _constants_payload(params),
            "generators": None,
            "report": {
                "pd_formula": formula,
                "variable_count": count,
                "agree": formula == count,
                "corollary_notes": _corollary_notes(params),
            },
        }
        _emit(json.dumps(payload, indent=2), config)
    else:
        lines = [f"pd formula: {formula}", f"variable count: {count}"]
        lines += _corollary_notes(params)
        _emit("\n".join(lines), config)
    return EXIT_OK if formula == count else EXIT_VERIFICATION_FAILED


def cmd_betti(config) -> int:
    kind, ideal, extra = _build_target(config.target, config.field)
    if config.fmt == "m2":
        _emit(_m2_script(ideal, compute_betti=True), config)
        return EXIT_OK
    table = resolve(ideal, degree_limit=config.degree_limit)
    payload = {
        "params": str(extra) if kind == "family" else {"constructor": kind, "arguments": list(extra)},
        "constants": _constants_payload(extra) if kind == "family" else None,
        "generators": [str(g) for g in ideal.generators],
        "report": {
            "betti": table.triples(),
            "pd": table.pd,
            "reg": table.reg,
            "truncated_at": table.truncated_at,
        },
    }
    if config.fmt == "json":
        _emit(json.dumps(payload, indent=2), config)
    else:
        lines = []
        if table.truncated_at is not None:
            lines.append(
                f"*** truncated at internal degree {table.truncated_at}; "
                "entries above it are absent ***"
            )
        lines.append(table.render())
        lines.append(f"pd = {table.pd}   reg = {table.reg}")
        _emit("\n".join(lines), config)
    return EXIT_OK


def _sweep_instance(args):
    g, m, do_verify, prime = args
    params = FamilyParams(g, m)
    formula = pd_formula(params)
    count = variable_count(params)
    row = {
        "params": str(params),
        "pd_formula": formula,
        "variable_count": count,
        "agree": formula == count,
    }
    if do_verify:
        field = PrimeField(prime)
        gb = verification_basis(params, field)
        row["socle"] = verify_socle(params, gb).conclusion
        row["lemma"] = verify_lemma(params, gb).ok
    return row


def cmd_sweep(config) -> int:
    args = config.args
    instances = []
    for n in range(1, args.max_n + 1):
        ranges = []
        for i in range(n):
            if i == n - 1:
                lo = 0
            elif i == n - 2:
                lo = 1
            else:
                lo = 2
            ranges.append(range(lo, args.max_m + 1))
        for m in itertools.product(*ranges):
            for g in range(2, args.max_g + 1):
                instances.append((g, m, args.verify, getattr(config.field, "p", 32003)))
    if config.jobs > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            rows = list(pool.map(_sweep_instance, instances))
    else:
        rows = [_sweep_instance(item) for item in instances]
    ok = all(
        row["agree"] and row.get("socle", True) and row.get("lemma", True)
        for row in rows
    )
    if config.fmt == "json":
        _emit(json.dumps({"rows": rows, "ok": ok}, indent=2), config)
    else:
        lines = []
        for row in rows:
            extra = ""
            if "socle" in row:
                extra = f" socle={row['socle']} lemma={row['lemma']}"
            lines.append(
                f"{row['params']:>16}  pd={row['pd_formula']:<8} vars={row['variable_count']:<8}"
                f" agree={row['agree']}{extra}"
            )
        lines.append(f"{len(rows)} instances; all consistent: {ok}")
        _emit("\n".join(lines), config)
    return EXIT_OK if ok else EXIT_VERIFICATION_FAILED


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", default="32003", help="prime modulus or QQ")
    common.add_argument("--degree-limit", type=int, default=None,
                        help="truncate Groebner/resolution computations at this degree")
    common.add_argument("--format", dest="fmt", choices=("text", "json", "m2"),
                        default="text")
    common.add_argument("--out", default=None, help="write output to a file")
    common.add_argument("--jobs", type=int, default=1,
                        help="parallel workers for sweep")
    common.add_argument("--pair-limit", type=int, default=1_000_000,
                        help="abort Groebner runs whose pair queue exceeds this bound")

    parser = argparse.ArgumentParser(
        prog="idealfam",
        description=(
            "Construct ideal families with extremal projective dimension and "
            "regularity, verify depth zero via socle witnesses, and compute "
            "Betti tables."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", parents=[common],
                       help="build an ideal and print it")
    p.add_argument("target", nargs="+")

    p = sub.add_parser("verify", parents=[common],
                       help="run the socle and stage-monomial checks")
    p.add_argument("target", nargs="+")

    p = sub.add_parser("pd", parents=[common],
                       help="evaluate the projective-dimension formula")
    p.add_argument("target", nargs="+")

    p = sub.add_parser("betti", parents=[common],
                       help="resolve and print the Betti table")
    p.add_argument("target", nargs="+")

    p = sub.add_parser("sweep", parents=[common],
                       help="scan parameter space for consistency")
    p.add_argument("--max-g", type=int, default=4)
    p.add_argument("--max-n", type=int, default=3)
    p.add_argument("--max-m", type=int, default=4)
    p.add_argument("--verify", action="store_true",
                   help="also run socle/lemma verification per instance")

    return parser


_COMMANDS = {
    "construct": cmd_construct,
    "verify": cmd_verify,
    "pd": cmd_pd,
    "betti": cmd_betti,
    "sweep": cmd_sweep,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = RunConfig(
            command=args.command,
            target=getattr(args, "target", []),
            field=_parse_field(args.field),
            degree_limit=args.degree_limit,
            fmt=args.fmt,
            out=args.out,
            jobs=args.jobs,
            pair_limit=args.pair_limit,
            args=args,
        )
        if config.degree_limit is not None and config.degree_limit <= 0:
            raise ValidationError("--degree-limit must be positive")
        return _COMMANDS[args.command](config)
    except ResourceLimitError as err:
        print(f"resource limit: {err}", file=sys.stderr)
        return EXIT_RESOURCE_LIMIT
    except (ValidationError, ParseError, ValueError) as err:
        print(f"invalid input: {err}", file=sys.stderr)
        return EXIT_INVALID_INPUT
    except IdealfamError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INVALID_INPUT


def console_main():
    raise SystemExit(main())


if __name__ == "__main__":
    console_main()
