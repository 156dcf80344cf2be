"""Harmonic-progression coded sharing for gradient-type sums.

Given K inputs X_1..X_K in F_p^m and one uniform key Z, the encoder
emits N = K(d-1)+2 shares such that applying any polynomial map g of
total degree <= d to every share lets the master recover
g(X_1)+...+g(X_K) with one fixed linear combination, while each single
share on its own is uniform whatever the data is (every share carries Z
with a nonzero coefficient).

The masking chain runs on reciprocals of the progression c, c-1, ..., c-K:

    P_0 = Z,    P_j = ((c-j+1) * P_{j-1} - X_j) / (c-j)

so that P_j = (c/(c-j)) Z - (1/(c-j)) (X_1+...+X_j). Worker 1 stores P_0
and worker N stores P_K. Group j (d-1 workers) stores blends of X_j with
the previous chain value,

    share(i,j) = (1 - q_ij) X_j + q_ij P_{j-1},   q_ij = beta_i (c-j+1) / c.

Restricted to the line t -> (1-t) X_j + t P_{j-1}, g becomes a univariate
polynomial of degree <= d whose value is known at the d-1 points q_ij
(group outputs), at 1 (g(P_{j-1})), and at (c-j+1)/(c-j) (g(P_j), because
the chain recursion places P_j on the same line). Interpolating the value
at 0 yields

    Q_j = sum_i w_ij g(share(i,j)) = g(X_j) - A_j g(P_{j-1}) + B_j g(P_j)

and the progression forces A_{j+1} = B_j, so summing the Q_j telescopes:
everything cancels except sum_j g(X_j), A_1 g(P_0), and B_K g(P_K), and
the head and tail workers supply those last two directly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import (
    DimensionMismatchError,
    FieldTooSmallError,
    InvalidParamsError,
    ParameterCorruptionError,
)
from .field import FieldConfig, FieldElement, FieldVector, combine
from .poly import Dataset


@dataclass
class EncodeStats:
    """Operation counter for the recursive encoder."""

    two_term_combos: int = 0


class WorkerLayout:
    """Flat 1-based worker indices: head=1, group-major blocks, tail=N.

    Worker (i, j) -- blend i in group j -- sits at 1 + (j-1)(d-1) + i.
    """

    __slots__ = ("K", "d")

    def __init__(self, K: int, d: int):
        if K < 1 or d < 1:
            raise InvalidParamsError([f"need K >= 1 and d >= 1, got K={K}, d={d}"])
        self.K = K
        self.d = d

    @property
    def N(self) -> int:
        return self.K * (self.d - 1) + 2

    @property
    def head(self) -> int:
        return 1

    @property
    def tail(self) -> int:
        return self.N

    def group_flat(self, i: int, j: int) -> int:
        if not 1 <= i <= self.d - 1:
            raise IndexError(f"blend index i={i} outside [1, {self.d - 1}]")
        if not 1 <= j <= self.K:
            raise IndexError(f"group index j={j} outside [1, {self.K}]")
        return 1 + (j - 1) * (self.d - 1) + i

    def label_of(self, w: int):
        """'head', 'tail', or the (i, j) pair for a flat index."""
        if not 1 <= w <= self.N:
            raise IndexError(f"worker {w} outside [1, {self.N}]")
        if w == 1:
            return "head"
        if w == self.N:
            return "tail"
        idx = w - 2
        return (idx % (self.d - 1) + 1, idx // (self.d - 1) + 1)

    def __eq__(self, other):
        return isinstance(other, WorkerLayout) and (self.K, self.d) == (other.K, other.d)

    def __repr__(self):
        return f"WorkerLayout(K={self.K}, d={self.d}, N={self.N})"


class HarmonicParams:
    """Scheme parameters: field, K, d, the chain anchor c, and blend points betas.

    Construction only checks shape (d-1 betas, consistent fields); the
    arithmetic constraints live in :func:`validate_params` so that
    deliberately broken parameter sets can still be built and probed.
    """

    __slots__ = ("field", "K", "d", "c", "betas")

    def __init__(self, field: FieldConfig, K: int, d: int,
                 c: FieldElement, betas: Sequence[FieldElement]):
        if K < 1:
            raise InvalidParamsError([f"K must be >= 1, got {K}"])
        if d < 1:
            raise InvalidParamsError([f"d must be >= 1, got {d}"])
        betas = tuple(betas)
        if len(betas) != d - 1:
            raise InvalidParamsError(
                [f"need exactly d-1={d - 1} betas, got {len(betas)}"])
        if c.field != field or any(b.field != field for b in betas):
            raise InvalidParamsError(["c/betas bound to a different field"])
        self.field = field
        self.K = K
        self.d = d
        self.c = c
        self.betas = betas

    @property
    def N(self) -> int:
        return self.K * (self.d - 1) + 2

    @property
    def layout(self) -> WorkerLayout:
        return WorkerLayout(self.K, self.d)

    def __eq__(self, other):
        return (
            isinstance(other, HarmonicParams)
            and (self.field, self.K, self.d, self.c, self.betas)
            == (other.field, other.K, other.d, other.c, other.betas)
        )

    def __repr__(self):
        return (f"HarmonicParams(F_{self.field.p}, K={self.K}, d={self.d}, "
                f"c={self.c.value}, betas={[b.value for b in self.betas]})")


def _forbidden_betas(field: FieldConfig, K: int, c: FieldElement) -> set[int]:
    """{0} plus every defined ratio c/(c-i) for i = 0..K."""
    bad = {0}
    for i in range(K + 1):
        den = (c.value - i) % field.p
        if den != 0:
            bad.add(c.value * pow(den, field.p - 2, field.p) % field.p)
    return bad


def validate_params(params: HarmonicParams) -> list[str]:
    """All constraint violations (empty list means the parameters are valid).

    Checks: c avoids the residues 0..K (so every chain denominator c-j is
    nonzero), and the betas are pairwise distinct, nonzero, and avoid every
    ratio c/(c-i) for i = 0..K (so all interpolation points stay distinct).
    """
    field, K = params.field, params.K
    violations = []
    forbidden_c = {i % field.p for i in range(K + 1)}
    if params.c.value in forbidden_c:
        violations.append(
            f"c={params.c.value} collides with a residue of 0..{K} mod {field.p}")
    beta_vals = [b.value for b in params.betas]
    if len(set(beta_vals)) != len(beta_vals):
        violations.append(f"betas {beta_vals} are not pairwise distinct")
    bad = _forbidden_betas(field, K, params.c)
    for b in beta_vals:
        if b in bad:
            violations.append(f"beta={b} lies in the forbidden set {sorted(bad)}")
    return violations


def select_params(field: FieldConfig, K: int, d: int,
                  c=None, betas=None) -> HarmonicParams:
    """Deterministic parameter choice, with optional explicit overrides.

    Default scan: c is the smallest residue above K, then betas are taken
    in ascending order from 2 upward, skipping the forbidden set. Any
    prime p >= K + d + 2 is guaranteed to have room. Overrides (ints or
    elements) are validated and rejected with the full violation list.
    """
    if K < 1 or d < 1:
        raise InvalidParamsError([f"need K >= 1 and d >= 1, got K={K}, d={d}"])
    p = field.p
    if c is None:
        chosen_c = None
        forbidden_c = {i % p for i in range(K + 1)}
        for cand in range(K + 1, p):
            if cand not in forbidden_c:
                chosen_c = field.element(cand)
                break
        if chosen_c is None:
            raise FieldTooSmallError(
                f"F_{p} has no anchor c outside 0..{K}; any prime >= {K + d + 2} works")
    else:
        chosen_c = c if isinstance(c, FieldElement) else field.element(c)
    if betas is None:
        bad = _forbidden_betas(field, K, chosen_c)
        chosen: list[FieldElement] = []
        for cand in range(2, p):
            if len(chosen) == d - 1:
                break
            if cand not in bad:
                chosen.append(field.element(cand))
        if len(chosen) < d - 1:
            raise FieldTooSmallError(
                f"F_{p} has only {len(chosen)} usable betas, need {d - 1}; "
                f"any prime >= {K + d + 2} works")
        chosen_betas = tuple(chosen)
    else:
        chosen_betas = tuple(
            b if isinstance(b, FieldElement) else field.element(b) for b in betas)
    params = HarmonicParams(field, K, d, chosen_c, chosen_betas)
    violations = validate_params(params)
    if violations:
        raise InvalidParamsError(violations)
    return params


def intermediate_vars(params: HarmonicParams, data: Dataset, z: FieldVector,
                      stats: EncodeStats | None = None) -> list[FieldVector]:
    """The masking chain P_0..P_K, one two-term combination per step."""
    if data.K != params.K:
        raise DimensionMismatchError(f"dataset has K={data.K}, scheme has K={params.K}")
    if z.dim != data.m:
        raise DimensionMismatchError(f"key dim {z.dim} != data dim {data.m}")
    field = params.field
    c = params.c
    chain = [z]
    prev = z
    for j in range(1, params.K + 1):
        inv_cj = field.element(c.value - j).inv()
        a = field.element(c.value - j + 1) * inv_cj
        b = -inv_cj
        prev = combine(a, prev, b, data.items[j - 1])
        if stats is not None:
            stats.two_term_combos += 1
        chain.append(prev)
    return chain


class EncodingMatrix:
    """N x (K+1) scalar matrix: column k <= K multiplies X_k, the last multiplies Z.

    Every row's Z entry must be nonzero -- the per-worker privacy witness --
    and construction refuses rows that break it.
    """

    __slots__ = ("field", "K", "rows")

    def __init__(self, field: FieldConfig, K: int,
                 rows: Sequence[Sequence[FieldElement]]):
        rows = tuple(tuple(r) for r in rows)
        for w, row in enumerate(rows, start=1):
            if len(row) != K + 1:
                raise DimensionMismatchError(
                    f"row {w} has {len(row)} entries, expected {K + 1}")
            if row[-1].value == 0:
                raise InvalidParamsError(
                    [f"row {w} gives the key Z a zero coefficient and would leak data"])
        self.field = field
        self.K = K
        self.rows = rows

    @property
    def N(self) -> int:
        return len(self.rows)

    def int_rows(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(e.value for e in row) for row in self.rows)

    def apply(self, data: Dataset, z: FieldVector) -> list[FieldVector]:
        """Reference encoding: share_w = sum_k row[w][k] X_k + row[w][K] Z."""
        if data.K != self.K:
            raise DimensionMismatchError(f"dataset has K={data.K}, matrix has K={self.K}")
        if z.dim != data.m:
            raise DimensionMismatchError(f"key dim {z.dim} != data dim {data.m}")
        p = self.field.p
        cols = [item.values() for item in data.items] + [z.values()]
        shares = []
        for row in self.rows:
            acc = [0] * data.m
            for coeff, col in zip(row, cols):
                cv = coeff.value
                if cv:
                    acc = [(s + cv * x) % p for s, x in zip(acc, col)]
            shares.append(self.field.vector(acc))
        return shares

    def __eq__(self, other):
        return (
            isinstance(other, EncodingMatrix)
            and self.field == other.field
            and self.K == other.K
            and self.rows == other.rows
        )

    def __repr__(self):
        return f"EncodingMatrix(F_{self.field.p}, {self.N}x{self.K + 1})"


def encoding_matrix(params: HarmonicParams) -> EncodingMatrix:
    """Closed-form share coefficients in worker order.

    head:   (0, ..., 0 | 1)
    (i,j):  column j is 1 - q_ij, columns k < j are -beta_i/c, Z is beta_i
            (substituting the chain formula for P_{j-1} into the blend)
    tail:   columns 1..K are -1/(c-K), Z is c/(c-K)
    """
    field, K, d = params.field, params.K, params.d
    c = params.c
    zero, one = field.zero(), field.one()
    rows = [[zero] * K + [one]]
    c_inv = c.inv()
    for j in range(1, K + 1):
        cj1 = field.element(c.value - j + 1)
        for beta in params.betas:
            q = beta * cj1 * c_inv
            row = [zero] * (K + 1)
            neg = -(beta * c_inv)
            for k in range(1, j):
                row[k - 1] = neg
            row[j - 1] = one - q
            row[K] = beta
            rows.append(row)
    inv_cK = field.element(c.value - K).inv()
    rows.append([-inv_cK] * K + [c * inv_cK])
    return EncodingMatrix(field, K, rows)


def encode(params: HarmonicParams, data: Dataset, z: FieldVector,
           stats: EncodeStats | None = None) -> list[FieldVector]:
    """Shares in worker order via the recursive chain.

    Costs K + K(d-1) two-term vector combinations; the result is
    coordinate-identical to ``encoding_matrix(params).apply(data, z)``.
    """
    field = params.field
    c = params.c
    chain = intermediate_vars(params, data, z, stats)
    shares = [chain[0]]
    c_inv = c.inv()
    one = field.one()
    for j in range(1, params.K + 1):
        cj1 = field.element(c.value - j + 1)
        x_j = data.items[j - 1]
        for beta in params.betas:
            q = beta * cj1 * c_inv
            shares.append(combine(one - q, x_j, q, chain[j - 1]))
            if stats is not None:
                stats.two_term_combos += 1
    shares.append(chain[params.K])
    return shares


def _guarded_inv(x: FieldElement) -> FieldElement:
    if x.value == 0:
        raise ParameterCorruptionError(
            "zero denominator in decode coefficients; parameters fail validate_params")
    return x.inv()


@dataclass(frozen=True)
class GroupCoeffs:
    """Combining a group's outputs with `weights` yields
    g(X_j) - a * g(P_{j-1}) + b * g(P_j)."""

    weights: tuple[FieldElement, ...]
    a: FieldElement
    b: FieldElement


def group_coeffs(params: HarmonicParams, j: int) -> GroupCoeffs:
    """Interpolation weights for group j and the chain coefficients A_j, B_j.

        A_j = (c-j+1) prod_i beta_i (c-j+1) / (beta_i (c-j+1) - c)
        B_j = (c-j)   prod_i beta_i (c-j)   / (beta_i (c-j)   - c)
        w_ij = [r / ((1 - q_ij)(r - q_ij))] * prod_{i' != i} beta_i' / (beta_i' - beta_i)

    with q_ij = beta_i (c-j+1)/c and r = (c-j+1)/(c-j). For d = 1 the
    group is empty and both products collapse to 1. Every inversion is
    guarded: valid parameters can never hit a zero denominator, so one
    signals corruption.
    """
    if not 1 <= j <= params.K:
        raise IndexError(f"group index j={j} outside [1, {params.K}]")
    field = params.field
    c = params.c
    cj1 = field.element(c.value - j + 1)
    cj = field.element(c.value - j)
    one = field.one()

    a = cj1
    b = cj
    for beta in params.betas:
        a = a * (beta * cj1) * _guarded_inv(beta * cj1 - c)
        b = b * (beta * cj) * _guarded_inv(beta * cj - c)

    c_inv = _guarded_inv(c)
    r = cj1 * _guarded_inv(cj)
    weights = []
    for i, beta in enumerate(params.betas):
        q = beta * cj1 * c_inv
        w = r * _guarded_inv((one - q) * (r - q))
        for i2, other in enumerate(params.betas):
            if i2 != i:
                w = w * other * _guarded_inv(other - beta)
        weights.append(w)
    return GroupCoeffs(tuple(weights), a, b)


class DecodeVector:
    """The N master-side weights; applying them to worker outputs yields f."""

    __slots__ = ("field", "weights")

    def __init__(self, field: FieldConfig, weights: Sequence[FieldElement]):
        self.field = field
        self.weights = tuple(weights)

    @property
    def N(self) -> int:
        return len(self.weights)

    def int_weights(self) -> tuple[int, ...]:
        return tuple(w.value for w in self.weights)

    def apply(self, outputs: Sequence[FieldVector]) -> FieldVector:
        """sum_w weight_w * output_w, accumulated in ascending worker order."""
        outputs = list(outputs)
        if len(outputs) != self.N:
            raise DimensionMismatchError(
                f"expected {self.N} worker outputs, got {len(outputs)}")
        dim = outputs[0].dim
        p = self.field.p
        acc = [0] * dim
        for w, out in zip(self.weights, outputs):
            if out.field != self.field:
                raise DimensionMismatchError("output from a different field")
            if out.dim != dim:
                raise DimensionMismatchError("outputs of differing dimensions")
            wv = w.value
            acc = [(s + wv * o) % p for s, o in zip(acc, out.values())]
        return self.field.vector(acc)

    def __eq__(self, other):
        return (
            isinstance(other, DecodeVector)
            and self.field == other.field
            and self.weights == other.weights
        )

    def __repr__(self):
        return f"DecodeVector{self.int_weights()}"


def decode_vector(params: HarmonicParams) -> DecodeVector:
    """Master weights: A_1 for the head, the group weights, -B_K for the tail.

    Summing the per-group combinations telescopes (A_{j+1} = B_j) down to
    sum_j g(X_j) - A_1 g(P_0) + B_K g(P_K); adding A_1 times the head
    output and -B_K times the tail output leaves exactly the gradient sum.
    For d = 1 this degenerates to (c, -(c-K)).
    """
    weights = [group_coeffs(params, 1).a]
    for j in range(1, params.K + 1):
        weights.extend(group_coeffs(params, j).weights)
    weights.append(-group_coeffs(params, params.K).b)
    return DecodeVector(params.field, weights)


def decode(params: HarmonicParams, outputs: Sequence[FieldVector]) -> FieldVector:
    """Recover g(X_1)+...+g(X_K) from the N worker outputs."""
    return decode_vector(params).apply(outputs)
