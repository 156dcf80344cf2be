"""Master/worker simulation, trial reports, and the exhaustive privacy auditor.

Workers are simulated as pure function applications: a trial encodes the
dataset with fresh seeded keys, applies g to every share, decodes, and
compares against the brute-force gradient sum. The privacy auditor
enumerates *every* dataset and key value, tabulates exact integer counts
of each worker's share, and declares a worker private only when its share
distribution is literally identical for all dataset values -- mutual
information is derived from the same counts for reporting, but the
pass/fail criterion never touches floating point.
"""

from __future__ import annotations

import itertools
import math
import random
from collections import Counter
from dataclasses import dataclass
from typing import Optional, Sequence

from . import baselines, harmonic
from .errors import (
    BudgetExceededError,
    ConstantPolynomialError,
    DegreeMismatchError,
    DimensionMismatchError,
)
from .field import FieldConfig, FieldVector, sample_uniform_vector
from .poly import Dataset, PolyMap, direct_gradient_sum

DEFAULT_AUDIT_BUDGET = 10_000_000


@dataclass(frozen=True)
class TrialReport:
    """Outcome of one encode/compute/decode round against the oracle."""

    scheme: str
    p: int
    K: int
    d: int
    m: int
    n: int
    seed: int
    decoded: tuple[int, ...]
    oracle: tuple[int, ...]
    exact_match: bool
    worker_evals: int
    num_keys: int

    def to_json(self) -> dict:
        return {
            "scheme": self.scheme,
            "p": self.p,
            "K": self.K,
            "d": self.d,
            "m": self.m,
            "n": self.n,
            "seed": self.seed,
            "decoded": list(self.decoded),
            "oracle": list(self.oracle),
            "exact_match": self.exact_match,
            "worker_evals": self.worker_evals,
            "num_keys": self.num_keys,
        }


@dataclass(frozen=True)
class PrivacyReport:
    """Per-worker result of an exhaustive share-distribution audit."""

    scheme: str
    p: int
    K: int
    d: int
    m: int
    mi_bits_per_worker: tuple[float, ...]
    conditional_equal_per_worker: tuple[bool, ...]
    dataset_states: int
    key_states: int

    @property
    def all_private(self) -> bool:
        return all(self.conditional_equal_per_worker)

    def to_json(self) -> dict:
        return {
            "scheme": self.scheme,
            "p": self.p,
            "K": self.K,
            "d": self.d,
            "m": self.m,
            "mi_bits_per_worker": list(self.mi_bits_per_worker),
            "conditional_equal_per_worker": list(self.conditional_equal_per_worker),
            "dataset_states": self.dataset_states,
            "key_states": self.key_states,
        }


# ---------------------------------------------------------------------------
# Scheme handles: one uniform surface over the four constructions


class HarmonicScheme:
    kind = "harmonic"
    num_keys = 1

    def __init__(self, params: harmonic.HarmonicParams):
        self.params = params

    @property
    def field(self) -> FieldConfig:
        return self.params.field

    @property
    def K(self) -> int:
        return self.params.K

    @property
    def d(self) -> int:
        return self.params.d

    @property
    def worker_count(self) -> int:
        return self.params.N

    def encode(self, data: Dataset, keys: Sequence[FieldVector]) -> list[FieldVector]:
        (z,) = keys
        return harmonic.encode(self.params, data, z)

    def decode(self, outputs: Sequence[FieldVector]) -> FieldVector:
        return harmonic.decode(self.params, outputs)


class ShamirScheme:
    kind = "shamir"

    def __init__(self, params: baselines.ShamirParams):
        self.params = params

    @property
    def num_keys(self) -> int:
        return self.params.K

    @property
    def field(self) -> FieldConfig:
        return self.params.field

    @property
    def K(self) -> int:
        return self.params.K

    @property
    def d(self) -> int:
        return self.params.d

    @property
    def worker_count(self) -> int:
        return self.params.N

    def encode(self, data: Dataset, keys: Sequence[FieldVector]) -> list[FieldVector]:
        return baselines.shamir_encode(self.params, data, keys)

    def decode(self, outputs: Sequence[FieldVector]) -> FieldVector:
        return baselines.shamir_decode(self.params, outputs)


class LccScheme:
    kind = "lcc"
    num_keys = 1

    def __init__(self, params: baselines.LCCParams):
        self.params = params

    @property
    def field(self) -> FieldConfig:
        return self.params.field

    @property
    def K(self) -> int:
        return self.params.K

    @property
    def d(self) -> int:
        return self.params.d

    @property
    def worker_count(self) -> int:
        return self.params.N

    def encode(self, data: Dataset, keys: Sequence[FieldVector]) -> list[FieldVector]:
        (z,) = keys
        return baselines.lcc_encode(self.params, data, z)

    def decode(self, outputs: Sequence[FieldVector]) -> FieldVector:
        return baselines.lcc_decode(self.params, outputs)


class FreshmanScheme:
    """Carries its own worker function: g is fixed by the params matrix."""

    kind = "freshman"
    num_keys = 1

    def __init__(self, params: baselines.FreshmanParams):
        self.params = params

    @property
    def field(self) -> FieldConfig:
        return self.params.field

    @property
    def K(self) -> int:
        return self.params.K

    @property
    def d(self) -> int:
        return self.params.d

    @property
    def worker_count(self) -> int:
        return self.params.N

    def encode(self, data: Dataset, keys: Sequence[FieldVector]) -> list[FieldVector]:
        (z,) = keys
        return baselines.freshman_encode(self.params, data, z)

    def decode(self, outputs: Sequence[FieldVector]) -> FieldVector:
        return baselines.freshman_decode(self.params, outputs)

    def apply_g(self, x: FieldVector) -> FieldVector:
        return baselines.freshman_apply(self.params, x)

    def oracle(self, data: Dataset) -> FieldVector:
        return baselines.freshman_oracle(self.params, data)


class ClearStorageScheme:
    """Fault-injection wrapper: one worker stores X_1 in the clear.

    Exists to prove the auditor rejects leaky schemes; never use outside
    tests and the audit tooling.
    """

    def __init__(self, inner, leak_worker: int = 0):
        if not 0 <= leak_worker < inner.worker_count:
            raise IndexError(f"leak worker {leak_worker} outside [0, {inner.worker_count})")
        self.inner = inner
        self.leak_worker = leak_worker

    @property
    def kind(self) -> str:
        return f"leaky-{self.inner.kind}"

    @property
    def num_keys(self) -> int:
        return self.inner.num_keys

    @property
    def field(self) -> FieldConfig:
        return self.inner.field

    @property
    def K(self) -> int:
        return self.inner.K

    @property
    def d(self) -> int:
        return self.inner.d

    @property
    def worker_count(self) -> int:
        return self.inner.worker_count

    def encode(self, data: Dataset, keys: Sequence[FieldVector]) -> list[FieldVector]:
        shares = self.inner.encode(data, keys)
        shares[self.leak_worker] = data.items[0]
        return shares

    def decode(self, outputs: Sequence[FieldVector]) -> FieldVector:
        return self.inner.decode(outputs)


def make_handle(params):
    """Wrap a params object in its scheme handle."""
    if isinstance(params, harmonic.HarmonicParams):
        return HarmonicScheme(params)
    if isinstance(params, baselines.ShamirParams):
        return ShamirScheme(params)
    if isinstance(params, baselines.LCCParams):
        return LccScheme(params)
    if isinstance(params, baselines.FreshmanParams):
        return FreshmanScheme(params)
    raise TypeError(f"no scheme handle for {type(params).__name__}")


# ---------------------------------------------------------------------------
# Trial runner


def run_trial(scheme, g: Optional[PolyMap], data: Dataset, seed: int) -> TrialReport:
    """Encode with seeded keys, apply g at every worker, decode, compare.

    The freshman scheme embeds its own g (pass None); every other scheme
    takes an explicit non-constant map of total degree <= scheme.d. Keys
    are drawn from random.Random(seed), one vector per key in key order.
    """
    if data.K != scheme.K:
        raise DimensionMismatchError(f"dataset has K={data.K}, scheme has K={scheme.K}")
    if isinstance(scheme, FreshmanScheme) or hasattr(scheme, "apply_g"):
        if g is not None:
            raise ValueError("this scheme fixes its own g; pass g=None")
        worker_fn = scheme.apply_g
        oracle = scheme.oracle(data)
        n = oracle.dim
    else:
        if g is None:
            raise ValueError("scheme needs an explicit polynomial map g")
        if g.total_degree() == 0:
            raise ConstantPolynomialError("constant g has no gradient structure")
        if g.total_degree() > scheme.d:
            raise DegreeMismatchError(
                f"g has degree {g.total_degree()}, scheme supports <= {scheme.d}")
        if g.m != data.m:
            raise DimensionMismatchError(f"g expects m={g.m}, data has m={data.m}")
        worker_fn = g.eval
        oracle = direct_gradient_sum(g, data)
        n = g.n
    rng = random.Random(seed)
    keys = [sample_uniform_vector(rng, scheme.field, data.m)
            for _ in range(scheme.num_keys)]
    shares = scheme.encode(data, keys)
    outputs = [worker_fn(share) for share in shares]
    decoded = scheme.decode(outputs)
    return TrialReport(
        scheme=scheme.kind,
        p=scheme.field.p,
        K=data.K,
        d=scheme.d,
        m=data.m,
        n=n,
        seed=seed,
        decoded=decoded.values(),
        oracle=oracle.values(),
        exact_match=decoded.values() == oracle.values(),
        worker_evals=scheme.worker_count,
        num_keys=scheme.num_keys,
    )


# ---------------------------------------------------------------------------
# Exhaustive privacy auditor


def privacy_audit_exhaustive(scheme, m: int = 1,
                             budget: int = DEFAULT_AUDIT_BUDGET) -> PrivacyReport:
    """Enumerate every dataset and key value; judge each worker's share law.

    A worker passes when its share distribution (exact integer counts over
    key draws) is identical for every dataset value -- equivalent to zero
    mutual information under *any* input prior. The reported MI assumes a
    uniform prior and is computed from the same counts.
    """
    field = scheme.field
    p = field.p
    K = scheme.K
    nkeys = scheme.num_keys
    dataset_states = p ** (K * m)
    key_states = p ** (nkeys * m)
    total = dataset_states * key_states
    if total > budget:
        raise BudgetExceededError(
            f"audit needs {total} states (> budget {budget}); "
            f"raise the budget to at least {total} to run it")
    N = scheme.worker_count
    counts: list[dict[tuple, Counter]] = [{} for _ in range(N)]
    for x_flat in itertools.product(range(p), repeat=K * m):
        data = Dataset([field.vector(x_flat[i * m:(i + 1) * m]) for i in range(K)])
        per_worker = [Counter() for _ in range(N)]
        for z_flat in itertools.product(range(p), repeat=nkeys * m):
            keys = [field.vector(z_flat[i * m:(i + 1) * m]) for i in range(nkeys)]
            shares = scheme.encode(data, keys)
            for w, share in enumerate(shares):
                per_worker[w][share.values()] += 1
        for w in range(N):
            counts[w][x_flat] = per_worker[w]
    cond_equal = []
    mi_bits = []
    for w in range(N):
        per_x = counts[w]
        reference = next(iter(per_x.values()))
        equal = all(c == reference for c in per_x.values())
        cond_equal.append(equal)
        if equal:
            mi_bits.append(0.0)
        else:
            marginal: Counter = Counter()
            for c in per_x.values():
                marginal.update(c)
            mi = 0.0
            for c in per_x.values():
                for share, j in c.items():
                    # P(x,s)=j/total, P(x)=key_states/total, P(s)=marginal/total
                    mi += (j / total) * math.log2(j * total / (key_states * marginal[share]))
            mi_bits.append(mi)
    return PrivacyReport(
        scheme=scheme.kind,
        p=p,
        K=K,
        d=scheme.d,
        m=m,
        mi_bits_per_worker=tuple(mi_bits),
        conditional_equal_per_worker=tuple(cond_equal),
        dataset_states=dataset_states,
        key_states=key_states,
    )


# ---------------------------------------------------------------------------
# Worker-count comparison


@dataclass(frozen=True)
class WorkerCountRow:
    scheme: str
    workers: int
    special_case_only: bool = False


def worker_count_table(K: int, d: int) -> tuple[WorkerCountRow, ...]:
    """Workers each scheme needs for K inputs of degree d.

    The freshman row is flagged: it only applies when d equals the field
    characteristic and g has the coordinatewise-powers form.
    """
    if K < 1 or d < 1:
        raise ValueError(f"need K >= 1 and d >= 1, got K={K}, d={d}")
    return (
        WorkerCountRow("harmonic", K * (d - 1) + 2),
        WorkerCountRow("lcc", K * d + 1),
        WorkerCountRow("shamir", K * (d + 1)),
        WorkerCountRow("freshman", 2, special_case_only=True),
    )
