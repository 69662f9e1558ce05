"""Command-line front end. JSON in, JSON out; see ``zpcp --help``.

Exit codes: 0 ok, 1 verification or predicate failure, 2 input or schema
error, 3 internal contradiction.
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from . import serialize as ser
from .arith import check_prime, format_rational
from .errors import (
    DegenerateForm,
    DimensionMismatch,
    InconsistentType,
    InternalContradiction,
    NotElementary,
    NotFree,
    NotPLocal,
    NotSigmaInvariant,
    PreconditionViolated,
    PrimeMismatch,
    ZpcpError,
)
from .hermitian import (
    FormedLattice,
    elementary_witness,
    example_dim2_gram,
    hermitian_to_bilinear,
    integrality_witness,
    jordan_split,
    modularity_witness,
    verify_jordan,
)
from .instances import RNG_ALGORITHM, block_type_instance, elementary_hermitian_gram, free_pair, make_rng
from .modulestruct import (
    CompatibleBasisResult,
    compatible_basis,
    counterexample_pair,
    decomposition_type,
    is_free,
    tate_dimensions,
    verify_compatible,
)
from .selftest import SelftestConfig, run_selftest, selftest_report

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3

GENERATE_KINDS = ("free_pair", "elementary_hermitian", "block_type", "example24", "exampledim2")

# errors raised while loading or validating a document
_INPUT_ERRORS = (
    ser.SchemaError,
    NotPLocal,
    PrimeMismatch,
    DimensionMismatch,
    DegenerateForm,
    NotSigmaInvariant,
    ValueError,
)


class CliError(Exception):
    def __init__(self, code: int, message: str, result=None):
        super().__init__(message)
        self.code = code
        self.result = result


def _vec(v) -> list:
    return [format_rational(x) for x in v]


def _read_input(path: str | None) -> str:
    if path is None or path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _write_output(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _load(args, kinds: Sequence[str]) -> tuple:
    try:
        p, kind, obj = ser.loads_instance(_read_input(args.input))
    except _INPUT_ERRORS as e:
        raise CliError(EXIT_INPUT, f"{type(e).__name__}: {e}") from None
    except OSError as e:
        raise CliError(EXIT_INPUT, f"cannot read input: {e}") from None
    if kind not in kinds:
        raise CliError(EXIT_INPUT, f"expected payload kind {' or '.join(kinds)}, got {kind}")
    return p, kind, obj


def _formed(p: int, kind: str, obj) -> FormedLattice:
    if kind == "hermitian_gram":
        try:
            return hermitian_to_bilinear(obj, p)
        except DegenerateForm as e:
            raise CliError(EXIT_INPUT, f"DegenerateForm: {e}") from None
    return obj


# -- commands ----------------------------------------------------------------------


def cmd_classify(args) -> tuple:
    p, _, M = _load(args, ["sigma_lattice"])
    try:
        typ = decomposition_type(M)
    except InconsistentType as e:
        raise CliError(EXIT_INTERNAL, f"InconsistentType: {e}") from None
    h0, h1 = tate_dimensions(M)
    free = is_free(M)
    a, b, c = typ.as_tuple()
    rank_ok = typ.rank(p) == M.rank
    free_ok = free == (b == 0 and c == 0)
    diags = [
        f"[{'PASS' if rank_ok else 'FAIL'}] rank {M.rank} = {p}*{a} + {p - 1}*{b} + {c}",
        f"[PASS] dim H0 = {h0} = c, dim H1 = {h1} = b",
        f"[{'PASS' if free_ok else 'FAIL'}] free = {free} matches (b, c) = ({b}, {c})",
    ]
    if not (rank_ok and free_ok):
        raise CliError(EXIT_INTERNAL, "classification is inconsistent", {"diagnostics": diags})
    result = {"type": [a, b, c], "free": free, "tate": [h0, h1], "rank": M.rank}
    return result, diags


def cmd_compat(args) -> tuple:
    p, _, (M, L) = _load(args, ["lattice_pair"])
    try:
        out = compatible_basis(M, L)
    except PreconditionViolated as e:
        raise CliError(EXIT_FAIL, f"precondition failed: {e}") from None
    ok = verify_compatible(M, L, out)
    result = {"t": out.t, "a": out.a, "basis": ser.mat_to_json(out.basis)}
    # re-verify after a trip through the wire format
    again = CompatibleBasisResult(ser.mat_from_json(result["basis"]), result["t"])
    ok_wire = verify_compatible(M, L, again)
    diags = [
        f"[{'PASS' if ok else 'FAIL'}] basis is an R-basis of M, scaled tail gives an R-basis of L, [M:L] = p^{p * (out.a - out.t)}",
        f"[{'PASS' if ok_wire else 'FAIL'}] serialized basis re-verifies",
    ]
    if not (ok and ok_wire):
        raise CliError(EXIT_FAIL, "compatible basis failed verification", {**result, "diagnostics": diags})
    result["verified"] = True
    return result, diags


def _formed_to_result(F: FormedLattice) -> dict:
    return {"rank": F.rank, "basis": ser.mat_to_json(F.lattice.basis), "gram": ser.mat_to_json(F.gram())}


def cmd_jordan(args) -> tuple:
    p, kind, obj = _load(args, ["formed_lattice", "hermitian_gram"])
    L = _formed(p, kind, obj)
    try:
        split = jordan_split(L)
    except NotElementary as e:
        witness = _vec(e.witness) if e.witness is not None else None
        raise CliError(EXIT_FAIL, f"NotElementary: {e} (witness x in pL^# outside L)", {"witness": witness}) from None
    except NotFree as e:
        raise CliError(EXIT_FAIL, f"NotFree: {e}") from None
    checks = verify_jordan(L, split)
    diags = [f"[{'PASS' if ok else 'FAIL'}] {name}" for name, ok in checks]
    if not all(ok for _, ok in checks):
        raise CliError(EXIT_INTERNAL, "Jordan splitting failed its checks", {"diagnostics": diags})
    result = {
        "t": split.t,
        "L0": _formed_to_result(split.L0),
        "L1": _formed_to_result(split.L1),
        "checks": {name: ok for name, ok in checks},
    }
    return result, diags


def _parse_predicate(name: str) -> tuple:
    if name in ("integral", "unimodular", "elementary"):
        return name, None
    if name.startswith("modular:"):
        try:
            return "modular", int(name.split(":", 1)[1])
        except ValueError:
            pass
    raise CliError(EXIT_INPUT, f"unknown predicate {name!r}; expected integral, unimodular, modular:j or elementary")


def cmd_check(args) -> tuple:
    if not args.predicate:
        raise CliError(EXIT_INPUT, "--predicate is required")
    pred, j = _parse_predicate(args.predicate)
    p, kind, obj = _load(args, ["formed_lattice", "hermitian_gram"])
    L = _formed(p, kind, obj)
    if pred == "integral":
        w = integrality_witness(L)
        how = "L <= L^#"
    elif pred == "unimodular":
        w = modularity_witness(L, 0)
        how = "L = L^#"
    elif pred == "modular":
        w = modularity_witness(L, j)
        how = f"L = p^{j} L^#"
    else:
        w = elementary_witness(L)
        how = "pL^# <= L <= L^#"
    holds = w is None
    result = {"predicate": args.predicate, "holds": holds, "witness": None if holds else _vec(w)}
    diags = [f"[{'PASS' if holds else 'FAIL'}] {how}" + ("" if holds else f"; witness ({', '.join(result['witness'])})")]
    if not holds:
        raise CliError(EXIT_FAIL, f"predicate {args.predicate} does not hold", {**result, "diagnostics": diags})
    return result, diags


def _parse_type(text: str | None) -> tuple:
    if not text:
        raise CliError(EXIT_INPUT, "block_type needs --type a,b,c")
    try:
        a, b, c = (int(x) for x in text.split(","))
    except ValueError:
        raise CliError(EXIT_INPUT, f"malformed --type {text!r}; expected a,b,c") from None
    if min(a, b, c) < 0 or a + b + c == 0:
        raise CliError(EXIT_INPUT, "--type needs non-negative a,b,c, not all zero")
    return a, b, c


def generate_instance(kind: str, p: int, rank: int | None = None, t: int | None = None, seed: int = 0, type_abc=None) -> dict:
    """Deterministic InstanceDoc for the given generator parameters."""
    try:
        check_prime(p)
    except ValueError as e:
        raise CliError(EXIT_INPUT, str(e)) from None
    params = {"p": p, "seed": seed}
    if kind in ("free_pair", "elementary_hermitian"):
        if rank is None or t is None:
            raise CliError(EXIT_INPUT, f"{kind} needs --rank and --t")
        if rank < 1 or not 0 <= t <= rank:
            raise CliError(EXIT_INPUT, "need rank >= 1 and 0 <= t <= rank")
        params.update(rank=rank, t=t)
        rng = make_rng(seed, kind, p, rank, t)
        if kind == "free_pair":
            M, L = free_pair(p, rank, t, rng)
            doc = ser.instance_doc(p, "lattice_pair", ser.lattice_pair_to_json(M, L))
        else:
            doc = ser.instance_doc(p, "hermitian_gram", ser.hermitian_gram_to_json(elementary_hermitian_gram(p, rank, t, rng)))
    elif kind == "block_type":
        a, b, c = type_abc
        params["type"] = [a, b, c]
        M = block_type_instance(p, a, b, c, make_rng(seed, kind, p, a, b, c))
        doc = ser.instance_doc(p, "sigma_lattice", ser.sigma_lattice_to_json(M))
    elif kind == "example24":
        if p == 2:
            raise CliError(EXIT_INPUT, "example24 needs an odd prime")
        M, L, _ = counterexample_pair(p)
        doc = ser.instance_doc(p, "lattice_pair", ser.lattice_pair_to_json(M, L))
        params.pop("seed")
    elif kind == "exampledim2":
        doc = ser.instance_doc(p, "hermitian_gram", ser.hermitian_gram_to_json(example_dim2_gram(p)))
        params.pop("seed")
    else:
        raise CliError(EXIT_INPUT, f"unknown kind {kind!r}; expected one of {', '.join(GENERATE_KINDS)}")
    doc["generator"] = {"kind": kind, "params": params, "rng": RNG_ALGORITHM}
    return doc


def cmd_generate(args) -> dict:
    if args.p is None:
        raise CliError(EXIT_INPUT, "--p is required")
    p = _single_prime(args.p)
    type_abc = _parse_type(args.type) if args.kind == "block_type" else None
    return generate_instance(args.kind, p, args.rank, args.t, args.seed, type_abc)


def _prime_list(text: str) -> list:
    try:
        primes = [int(x) for x in text.split(",") if x.strip()]
        for q in primes:
            check_prime(q)
    except ValueError:
        raise CliError(EXIT_INPUT, f"malformed prime list {text!r}") from None
    if not primes:
        raise CliError(EXIT_INPUT, "empty prime list")
    return primes


def _single_prime(text: str) -> int:
    primes = _prime_list(text)
    if len(primes) != 1:
        raise CliError(EXIT_INPUT, "--p takes a single prime here")
    return primes[0]


def _criteria_list(text: str | None):
    if not text:
        return None
    try:
        chosen = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise CliError(EXIT_INPUT, f"malformed criteria list {text!r}") from None
    if not chosen or any(not 1 <= n <= 9 for n in chosen):
        raise CliError(EXIT_INPUT, "criteria are numbered 1 to 9")
    return chosen


def cmd_selftest(args) -> tuple:
    cfg = SelftestConfig(
        primes=_prime_list(args.p) if args.p else (2, 3, 5),
        max_rank=args.rank if args.rank is not None else 3,
        seed=args.seed,
        instances=args.instances,
        mutate=args.mutate,
        criteria=_criteria_list(args.criteria),
    )
    if cfg.max_rank < 1 or cfg.instances < 1:
        raise CliError(EXIT_INPUT, "--rank and --instances must be positive")
    results = run_selftest(cfg)
    for r in results:
        print(r.summary(), file=sys.stderr)
        for line in r.lines:
            print(f"    {line}", file=sys.stderr)
    report = selftest_report(results, cfg)
    diags = [r.summary() for r in results]
    if not report["all_passed"]:
        raise CliError(EXIT_FAIL, "some acceptance criteria failed", {**report, "diagnostics": diags})
    return report, diags


_COMMANDS = {
    "classify": cmd_classify,
    "compat": cmd_compat,
    "jordan": cmd_jordan,
    "check": cmd_check,
    "selftest": cmd_selftest,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="zpcp", description="Lattices over Z_(p) C_p: classification, compatible bases, Jordan splitting.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="instance JSON file (default: stdin)")
    common.add_argument("--output", help="write JSON here (default: stdout)")
    common.add_argument("--pretty", action="store_true", help="indent the JSON output")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("classify", parents=[common], help="decomposition type R^a + T^b + S^c of a sigma-lattice")
    sub.add_parser("compat", parents=[common], help="compatible R-basis for a pair pM <= L <= M")
    sub.add_parser("jordan", parents=[common], help="split a free elementary lattice into unimodular + p-modular parts")
    chk = sub.add_parser("check", parents=[common], help="test integral / unimodular / modular:j / elementary")
    chk.add_argument("--predicate", help="integral, unimodular, modular:j or elementary")
    gen = sub.add_parser("generate", parents=[common], help="emit a seeded instance document")
    gen.add_argument("kind", choices=GENERATE_KINDS)
    gen.add_argument("--p", help="prime")
    gen.add_argument("--rank", type=int, help="R-rank a")
    gen.add_argument("--t", type=int, help="number of unscaled basis vectors")
    gen.add_argument("--type", help="a,b,c for block_type")
    gen.add_argument("--seed", type=int, default=0)
    st = sub.add_parser("selftest", parents=[common], help="run the acceptance criteria")
    st.add_argument("--p", help="comma-separated primes (default 2,3,5)")
    st.add_argument("--rank", type=int, help="maximal R-rank (default 3)")
    st.add_argument("--seed", type=int, default=0)
    st.add_argument("--instances", type=int, default=25, help="random instances per (p, a, t)")
    st.add_argument("--criteria", help="comma-separated subset of 1..9")
    st.add_argument("--mutate", action="store_true", help="corrupt one basis vector to check that failures are caught")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "generate":
        try:
            doc = cmd_generate(args)
        except CliError as e:
            print(f"error: {e}", file=sys.stderr)
            return e.code
        _write_output(ser.dumps(doc, args.pretty), args.output)
        return EXIT_OK

    seed = getattr(args, "seed", None) if args.command == "selftest" else None
    rng = RNG_ALGORITHM if seed is not None else None
    try:
        result, diags = _COMMANDS[args.command](args)
        doc = ser.report_doc(args.command, "ok", result, diags, seed, rng)
        code = EXIT_OK
    except CliError as e:
        extra = dict(e.result or {})
        diags = extra.pop("diagnostics", [])
        doc = ser.report_doc(args.command, "error", extra or None, [str(e)] + diags, seed, rng)
        code = e.code
    except InternalContradiction as e:
        doc = ser.report_doc(args.command, "error", None, [f"InternalContradiction: {e}"], seed, rng)
        code = EXIT_INTERNAL
    except ZpcpError as e:
        doc = ser.report_doc(args.command, "error", None, [f"{type(e).__name__}: {e}"], seed, rng)
        code = EXIT_FAIL
    if code != EXIT_OK:
        print(doc["diagnostics"][0], file=sys.stderr)
    _write_output(ser.dumps(doc, args.pretty), args.output)
    return code


if __name__ == "__main__":
    sys.exit(main())
