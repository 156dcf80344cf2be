"""Command-line front end.

Commands:
  demo           reproduce the fixed F_5, K=2, d=2 worked example and verify
                 every coefficient against the frozen reference values
  validate       run randomized encode/compute/decode trials (JSON lines)
  privacy-audit  exhaustively audit per-worker share distributions (JSON)
  compare        print the worker counts of all schemes for a given (K, d)
  encode         dataset file -> shares file (never looks at the task:
                 encodings depend only on p, K, d)
  decode         shares-file parameters + outputs file -> decoded f vector

Exit codes: 0 success, 1 validity/golden/privacy failure, 2 usage or
configuration error. PRIVACY_AUDIT_BUDGET overrides the auditor's
state-count cap.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys

from . import baselines, fileio, harmonic, sim
from .errors import (
    BudgetExceededError,
    ConstantPolynomialError,
    CountMismatchError,
    DegreeMismatchError,
    DimensionMismatchError,
    FieldTooSmallError,
    InvalidParamsError,
    NotPrimeError,
    ResidueRangeError,
    SchemaViolationError,
)
from .field import FieldConfig, sample_uniform_vector
from .poly import Dataset, PolyMap, random_dataset, random_poly

SCHEMES = ("harmonic", "lcc", "shamir", "freshman")

# Frozen reference values for the worked example (p=5, K=2, d=2, c=4, beta=4),
# as coefficient rows over (X1, X2, Z).
DEMO_P_ROWS = ((0, 0, 1), (3, 0, 3), (2, 2, 2))
DEMO_MATRIX = ((0, 0, 1), (2, 0, 4), (4, 3, 4), (2, 2, 2))
DEMO_DECODE = (2, 1, 3, 1)
DEMO_TRIALS = 100


class UsageError(ValueError):
    """Semantically invalid flag combination."""


def _parse_betas(text):
    if text is None:
        return None
    try:
        return [int(part) for part in text.split(",") if part.strip() != ""]
    except ValueError as exc:
        raise UsageError(f"--betas must be comma-separated integers, got {text!r}") from exc


def _demo_quadratic_map(field: FieldConfig) -> PolyMap:
    """g(X) = A X^T X + B X + C over F_5 for 2x2 matrices, flattened row-major.

    Output (r,s) collects sum_{t,u} A[r][t] X[u][t] X[u][s]
    plus sum_u B[r][u] X[u][s] plus C[r][s].
    """
    A = ((1, 2), (3, 0))
    B = ((1, 0), (4, 2))
    C = ((2, 1), (0, 3))
    raw = []
    for r in range(2):
        for s in range(2):
            terms = []
            for t in range(2):
                for u in range(2):
                    exps = [0, 0, 0, 0]
                    exps[2 * u + t] += 1
                    exps[2 * u + s] += 1
                    terms.append((A[r][t], tuple(exps)))
            for u in range(2):
                exps = [0, 0, 0, 0]
                exps[2 * u + s] = 1
                terms.append((B[r][u], tuple(exps)))
            terms.append((C[r][s], (0, 0, 0, 0)))
            raw.append(terms)
    return PolyMap.from_terms(field, 4, raw)


def cmd_demo(args) -> int:
    field = FieldConfig(5)
    c = 4 if args.c is None else args.c
    betas = _parse_betas(args.betas)
    if betas is None and c == 4:
        betas = [4]
    params = harmonic.select_params(field, 2, 2, c=c, betas=betas)
    print(f"harmonic coding worked example (p=5, K=2, d=2, "
          f"c={params.c.value}, betas={[b.value for b in params.betas]})")
    diffs = []

    p_rows = _probe_chain_rows(params)
    print("masking chain coefficients over (X1, X2, Z):")
    for j, row in enumerate(p_rows):
        print(f"  P{j} = {row}")
        if row != DEMO_P_ROWS[j]:
            diffs.append(f"P{j}: expected {DEMO_P_ROWS[j]}, got {row}")

    matrix = harmonic.encoding_matrix(params)
    print("encoding matrix rows over (X1, X2, Z):")
    for w, row in enumerate(matrix.int_rows(), start=1):
        print(f"  worker {w}: {row}")
        if row != DEMO_MATRIX[w - 1]:
            diffs.append(f"matrix row {w}: expected {DEMO_MATRIX[w - 1]}, got {row}")

    vector = harmonic.decode_vector(params).int_weights()
    print(f"decode vector: {vector}")
    if vector != DEMO_DECODE:
        diffs.append(f"decode vector: expected {DEMO_DECODE}, got {vector}")

    g = _demo_quadratic_map(field)
    handle = sim.HarmonicScheme(params)
    rng = random.Random(20240405)
    exact = 0
    for _ in range(DEMO_TRIALS):
        data = random_dataset(rng, field, 2, 4)
        report = sim.run_trial(handle, g, data, rng.randrange(2**32))
        exact += report.exact_match
    print(f"matrix quadratic g over F_5 (m=4, n=4): {exact}/{DEMO_TRIALS} trials exact")
    if exact != DEMO_TRIALS:
        diffs.append(f"quadratic trial: expected {DEMO_TRIALS} exact, got {exact}")

    if diffs:
        for d in diffs:
            print(f"MISMATCH {d}")
        print("reference values NOT reproduced")
        return 1
    print("all reference values reproduced")
    return 0


def _probe_chain_rows(params) -> list[tuple[int, ...]]:
    """Coefficient rows of P_0..P_K over (X_1..X_K, Z) via unit-vector probing."""
    field = params.field
    K = params.K
    rows = [[0] * (K + 1) for _ in range(K + 1)]
    for t in range(K + 1):
        inputs = [[1 if idx == t else 0] for idx in range(K + 1)]
        data = Dataset([field.vector(v) for v in inputs[:K]])
        z = field.vector(inputs[K])
        chain = harmonic.intermediate_vars(params, data, z)
        for j, vec in enumerate(chain):
            rows[j][t] = vec.values()[0]
    return [tuple(r) for r in rows]


def _build_params(scheme, field, K, d, m, args):
    if scheme == "harmonic":
        return harmonic.select_params(field, K, d, c=getattr(args, "c", None),
                                      betas=_parse_betas(getattr(args, "betas", None)))
    if scheme == "shamir":
        return baselines.shamir_params(field, K, d)
    if scheme == "lcc":
        return baselines.lcc_params(field, K, d)
    if scheme == "freshman":
        if d != field.p:
            raise UsageError(
                f"freshman requires d equal to the characteristic: --d {field.p}")
        ones = [[field.one()] * m]
        return baselines.FreshmanParams(field, K, m, 1, ones)
    raise UsageError(f"unknown scheme {scheme!r}")


def cmd_validate(args) -> int:
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    if args.m < 1 or args.n < 1:
        raise UsageError("--m and --n must be >= 1")
    field = FieldConfig(args.p)
    task_g = None
    if args.task is not None:
        if args.scheme == "freshman":
            raise UsageError("freshman fixes its own g; --task is not accepted")
        task_field, task_g = fileio.load_task(args.task)
        if task_field != field:
            raise UsageError(f"task file is over F_{task_field.p}, flags say F_{field.p}")
        if task_g.total_degree() == 0:
            raise ConstantPolynomialError("task polynomial is constant")
        if task_g.total_degree() > args.d:
            raise UsageError(
                f"task degree {task_g.total_degree()} exceeds --d {args.d}")
    if args.scheme == "freshman" and args.d != field.p:
        raise UsageError(
            f"freshman requires d equal to the characteristic: --d {field.p}")
    master = random.Random(args.seed)
    all_exact = True
    for _ in range(args.trials):
        if args.scheme == "freshman":
            params = _random_freshman_params(master, field, args.K, args.m, args.n)
            handle = sim.FreshmanScheme(params)
            g = None
            data = random_dataset(master, field, args.K, args.m)
        else:
            params = _build_params(args.scheme, field, args.K, args.d, args.m, args)
            handle = sim.make_handle(params)
            g = task_g if task_g is not None else random_poly(
                master, field, args.m, args.n, args.d)
            data = random_dataset(master, field, args.K, args.m)
        report = sim.run_trial(handle, g, data, master.randrange(2**32))
        print(json.dumps(report.to_json()))
        all_exact &= report.exact_match
    return 0 if all_exact else 1


def _random_freshman_params(rng, field, K, m, n):
    while True:
        matrix = [[field.element(rng.randrange(field.p)) for _ in range(m)]
                  for _ in range(n)]
        if any(e.value for row in matrix for e in row):
            return baselines.FreshmanParams(field, K, m, n, matrix)


def cmd_privacy_audit(args) -> int:
    if args.m < 1:
        raise UsageError("--m must be >= 1")
    budget = sim.DEFAULT_AUDIT_BUDGET
    env = os.environ.get("PRIVACY_AUDIT_BUDGET")
    if env is not None:
        try:
            budget = int(env)
        except ValueError as exc:
            raise UsageError(f"PRIVACY_AUDIT_BUDGET must be an integer, got {env!r}") from exc
    field = FieldConfig(args.p)
    params = _build_params(args.scheme, field, args.K, args.d, args.m, args)
    handle = sim.make_handle(params)
    if args.inject_leak:
        handle = sim.ClearStorageScheme(handle)
    report = sim.privacy_audit_exhaustive(handle, m=args.m, budget=budget)
    print(json.dumps(report.to_json(), indent=2))
    return 0 if report.all_private else 1


def cmd_compare(args) -> int:
    rows = sim.worker_count_table(args.K, args.d)
    if args.json:
        doc = {
            "K": args.K,
            "d": args.d,
            "workers": {row.scheme: row.workers for row in rows},
            "special_case_only": [row.scheme for row in rows if row.special_case_only],
        }
        print(json.dumps(doc))
        return 0
    print(f"worker counts for K={args.K}, d={args.d}")
    for row in rows:
        note = "  (requires deg g = field characteristic)" if row.special_case_only else ""
        print(f"  {row.scheme:<9} {row.workers}{note}")
    return 0


def cmd_encode(args) -> int:
    field = FieldConfig(args.p)
    data = fileio.load_dataset(args.data, field)
    params = _build_params(args.scheme, field, data.K, args.d, data.m, args)
    handle = sim.make_handle(params)
    rng = random.Random(args.seed)
    keys = [sample_uniform_vector(rng, field, data.m)
            for _ in range(handle.num_keys)]
    shares = handle.encode(data, keys)
    fileio.write_shares(args.out, params, shares)
    print(f"wrote {len(shares)} shares to {args.out}")
    return 0


def cmd_decode(args) -> int:
    params, shares = fileio.load_shares(args.shares)
    handle = sim.make_handle(params)
    outputs = fileio.load_outputs(args.outputs, params.field)
    if len(outputs) != handle.worker_count:
        raise CountMismatchError(
            f"outputs: scheme needs {handle.worker_count} worker outputs, "
            f"file has {len(outputs)}")
    decoded = handle.decode(outputs)
    fileio.write_decoded(args.out, decoded)
    print(f"wrote decoded vector (n={decoded.dim}) to {args.out}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="harmcode",
        description="Privacy-preserving coded computation of g(X_1)+...+g(X_K) "
                    "over prime fields.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_demo = sub.add_parser("demo", help="reproduce the worked example")
    p_demo.add_argument("--c", type=int, default=None)
    p_demo.add_argument("--betas", type=str, default=None)
    p_demo.set_defaults(func=cmd_demo)

    p_val = sub.add_parser("validate", help="randomized validity trials")
    p_val.add_argument("--scheme", choices=SCHEMES, required=True)
    p_val.add_argument("--p", type=int, required=True)
    p_val.add_argument("--K", type=int, default=2)
    p_val.add_argument("--d", type=int, required=True)
    p_val.add_argument("--m", type=int, default=1)
    p_val.add_argument("--n", type=int, default=1)
    p_val.add_argument("--trials", type=int, default=100)
    p_val.add_argument("--seed", type=int, default=0)
    p_val.add_argument("--task", type=str, default=None,
                       help="fix g from a task file instead of sampling")
    p_val.add_argument("--c", type=int, default=None)
    p_val.add_argument("--betas", type=str, default=None)
    p_val.set_defaults(func=cmd_validate)

    p_priv = sub.add_parser("privacy-audit", help="exhaustive share-law audit")
    p_priv.add_argument("--scheme", choices=SCHEMES, required=True)
    p_priv.add_argument("--p", type=int, required=True)
    p_priv.add_argument("--K", type=int, default=2)
    p_priv.add_argument("--d", type=int, required=True)
    p_priv.add_argument("--m", type=int, default=1)
    p_priv.add_argument("--c", type=int, default=None)
    p_priv.add_argument("--betas", type=str, default=None)
    p_priv.add_argument("--inject-leak", action="store_true", help=argparse.SUPPRESS)
    p_priv.set_defaults(func=cmd_privacy_audit)

    p_cmp = sub.add_parser("compare", help="worker counts per scheme")
    p_cmp.add_argument("--K", type=int, required=True)
    p_cmp.add_argument("--d", type=int, required=True)
    p_cmp.add_argument("--json", action="store_true")
    p_cmp.set_defaults(func=cmd_compare)

    p_enc = sub.add_parser("encode", help="dataset file -> shares file")
    p_enc.add_argument("--scheme", choices=SCHEMES, required=True)
    p_enc.add_argument("--p", type=int, required=True)
    p_enc.add_argument("--d", type=int, required=True)
    p_enc.add_argument("--data", type=str, required=True)
    p_enc.add_argument("--out", type=str, required=True)
    p_enc.add_argument("--seed", type=int, default=0)
    p_enc.add_argument("--c", type=int, default=None)
    p_enc.add_argument("--betas", type=str, default=None)
    p_enc.set_defaults(func=cmd_encode)

    p_dec = sub.add_parser("decode", help="outputs file -> decoded f vector")
    p_dec.add_argument("--shares", type=str, required=True)
    p_dec.add_argument("--outputs", type=str, required=True)
    p_dec.add_argument("--out", type=str, required=True)
    p_dec.set_defaults(func=cmd_decode)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, SchemaViolationError, ResidueRangeError, CountMismatchError,
            FieldTooSmallError, InvalidParamsError, BudgetExceededError,
            NotPrimeError, ConstantPolynomialError, DegreeMismatchError,
            DimensionMismatchError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
