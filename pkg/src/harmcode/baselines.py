"""Reference schemes sharing the harmonic module's encode/decode contract.

* Shamir-style MPC: every input is masked separately (X_k + Z_k * theta),
  each of the d+1 share points gets one worker per input, and each
  g(X_k) is recovered by interpolating at 0. K(d+1) workers, K keys.
* Lagrange coded computing (LCC): one degree-K vector polynomial hits the
  K inputs plus one key at fixed anchors; workers evaluate it elsewhere,
  and the composed degree-Kd polynomial is interpolated back. Kd+1
  workers, one key.
* Freshman scheme: for the special family g(X) = A (X_1^d, ..., X_m^d)^T
  with d equal to the field characteristic, two workers suffice because
  coordinatewise (a+b)^p = a^p + b^p makes g additive.
"""

from __future__ import annotations

from typing import Sequence

from .errors import (
    DimensionMismatchError,
    FieldTooSmallError,
    InvalidParamsError,
)
from .field import FieldConfig, FieldElement, FieldVector
from .poly import Dataset


def _basis_coeff(points: Sequence[FieldElement], k: int, at: FieldElement) -> FieldElement:
    """Lagrange basis for node k over `points`, evaluated at `at`."""
    num = at.field.one()
    den = at.field.one()
    xk = points[k]
    for k2, xo in enumerate(points):
        if k2 != k:
            num = num * (at - xo)
            den = den * (xk - xo)
    return num * den.inv()


# ---------------------------------------------------------------------------
# Shamir-style MPC baseline


class ShamirParams:
    """Per-variable masking at d+1 nonzero share points; N = K(d+1)."""

    __slots__ = ("field", "K", "d", "thetas")

    def __init__(self, field: FieldConfig, K: int, d: int,
                 thetas: Sequence[FieldElement]):
        if K < 1 or d < 1:
            raise InvalidParamsError([f"need K >= 1 and d >= 1, got K={K}, d={d}"])
        thetas = tuple(thetas)
        if len(thetas) != d + 1:
            raise InvalidParamsError(
                [f"need exactly d+1={d + 1} share points, got {len(thetas)}"])
        vals = [t.value for t in thetas]
        if 0 in vals:
            raise InvalidParamsError(
                ["share point 0 would store an input in the clear"])
        if len(set(vals)) != len(vals):
            raise InvalidParamsError([f"share points {vals} are not distinct"])
        self.field = field
        self.K = K
        self.d = d
        self.thetas = thetas

    @property
    def N(self) -> int:
        return self.K * (self.d + 1)

    def __repr__(self):
        return (f"ShamirParams(F_{self.field.p}, K={self.K}, d={self.d}, "
                f"thetas={[t.value for t in self.thetas]})")


def shamir_params(field: FieldConfig, K: int, d: int) -> ShamirParams:
    """Canonical points theta_r = r for r = 1..d+1 (needs p >= d+2)."""
    if d + 1 >= field.p:
        raise FieldTooSmallError(
            f"F_{field.p} has only {field.p - 1} nonzero points, need {d + 1}; "
            f"any prime >= {d + 2} works")
    return ShamirParams(field, K, d,
                        tuple(field.element(r) for r in range(1, d + 2)))


def shamir_encode(params: ShamirParams, data: Dataset,
                  keys: Sequence[FieldVector]) -> list[FieldVector]:
    """Share for worker (k, r) is X_k + Z_k * theta_r, k-major order."""
    if data.K != params.K:
        raise DimensionMismatchError(f"dataset has K={data.K}, scheme has K={params.K}")
    keys = list(keys)
    if len(keys) != params.K:
        raise DimensionMismatchError(
            f"need one key per input ({params.K}), got {len(keys)}")
    for z in keys:
        if z.dim != data.m:
            raise DimensionMismatchError(f"key dim {z.dim} != data dim {data.m}")
    shares = []
    for x, z in zip(data.items, keys):
        for theta in params.thetas:
            shares.append(x + z.scale(theta))
    return shares


def shamir_decode(params: ShamirParams, outputs: Sequence[FieldVector]) -> FieldVector:
    """Interpolate each input's degree-d output curve at 0, then sum."""
    outputs = list(outputs)
    if len(outputs) != params.N:
        raise DimensionMismatchError(
            f"expected {params.N} worker outputs, got {len(outputs)}")
    field = params.field
    zero = field.zero()
    lams = [_basis_coeff(params.thetas, r, zero) for r in range(params.d + 1)]
    dim = outputs[0].dim
    p = field.p
    acc = [0] * dim
    width = params.d + 1
    for k in range(params.K):
        for r, lam in enumerate(lams):
            out = outputs[k * width + r]
            if out.dim != dim:
                raise DimensionMismatchError("outputs of differing dimensions")
            acc = [(s + lam.value * o) % p for s, o in zip(acc, out.values())]
    return field.vector(acc)


# ---------------------------------------------------------------------------
# Lagrange coded computing baseline


class LCCParams:
    """Anchors alpha_1..alpha_{K+1} (inputs + key) and N = Kd+1 evaluation points.

    Evaluation points must avoid the K data anchors -- that keeps the key's
    basis coefficient nonzero in every share -- and be pairwise distinct so
    the composed polynomial can be interpolated back.
    """

    __slots__ = ("field", "K", "d", "alphas", "gammas")

    def __init__(self, field: FieldConfig, K: int, d: int,
                 alphas: Sequence[FieldElement], gammas: Sequence[FieldElement]):
        if K < 1 or d < 1:
            raise InvalidParamsError([f"need K >= 1 and d >= 1, got K={K}, d={d}"])
        alphas = tuple(alphas)
        gammas = tuple(gammas)
        if len(alphas) != K + 1:
            raise InvalidParamsError(
                [f"need K+1={K + 1} anchors, got {len(alphas)}"])
        if len(gammas) != K * d + 1:
            raise InvalidParamsError(
                [f"need Kd+1={K * d + 1} evaluation points, got {len(gammas)}"])
        a_vals = [a.value for a in alphas]
        g_vals = [g.value for g in gammas]
        if len(set(a_vals)) != len(a_vals):
            raise InvalidParamsError([f"anchors {a_vals} are not distinct"])
        if len(set(g_vals)) != len(g_vals):
            raise InvalidParamsError([f"evaluation points {g_vals} are not distinct"])
        data_anchors = set(a_vals[:K])
        clash = sorted(set(g_vals) & data_anchors)
        if clash:
            raise InvalidParamsError(
                [f"evaluation points {clash} coincide with data anchors and leak inputs"])
        self.field = field
        self.K = K
        self.d = d
        self.alphas = alphas
        self.gammas = gammas

    @property
    def N(self) -> int:
        return self.K * self.d + 1

    def __repr__(self):
        return f"LCCParams(F_{self.field.p}, K={self.K}, d={self.d}, N={self.N})"


def lcc_params(field: FieldConfig, K: int, d: int) -> LCCParams:
    """Canonical points: anchors 0..K and evaluations K+1..K+N.

    When the field is one residue short, the key anchor K doubles as the
    last evaluation point (a share equal to Z leaks nothing); below that
    there is no collision-free layout.
    """
    p = field.p
    N = K * d + 1
    alphas = tuple(field.element(i) for i in range(K + 1))
    room = p - (K + 1)
    if N <= room:
        gammas = tuple(field.element(K + i) for i in range(1, N + 1))
    elif N == room + 1:
        gammas = tuple(field.element(v) for v in range(K + 1, p)) + (field.element(K),)
    else:
        raise FieldTooSmallError(
            f"F_{p} cannot host {N} evaluation points clear of {K} data anchors; "
            f"any prime >= {K + N + 1} works")
    return LCCParams(field, K, d, alphas, gammas)


def lcc_encode(params: LCCParams, data: Dataset, z: FieldVector) -> list[FieldVector]:
    """Share i is u(gamma_i) for the degree-<=K vector polynomial with
    u(alpha_k) = X_k and u(alpha_{K+1}) = Z."""
    if data.K != params.K:
        raise DimensionMismatchError(f"dataset has K={data.K}, scheme has K={params.K}")
    if z.dim != data.m:
        raise DimensionMismatchError(f"key dim {z.dim} != data dim {data.m}")
    field = params.field
    p = field.p
    cols = [item.values() for item in data.items] + [z.values()]
    shares = []
    for gamma in params.gammas:
        acc = [0] * data.m
        for k, col in enumerate(cols):
            cv = _basis_coeff(params.alphas, k, gamma).value
            if cv:
                acc = [(s + cv * x) % p for s, x in zip(acc, col)]
        shares.append(field.vector(acc))
    return shares


def lcc_decode(params: LCCParams, outputs: Sequence[FieldVector]) -> FieldVector:
    """Interpolate the degree-<=Kd output polynomial through the evaluation
    points and sum its values at the K data anchors."""
    outputs = list(outputs)
    if len(outputs) != params.N:
        raise DimensionMismatchError(
            f"expected {params.N} worker outputs, got {len(outputs)}")
    field = params.field
    p = field.p
    dim = outputs[0].dim
    acc = [0] * dim
    for k in range(params.K):
        alpha = params.alphas[k]
        for i, out in enumerate(outputs):
            if out.dim != dim:
                raise DimensionMismatchError("outputs of differing dimensions")
            cv = _basis_coeff(params.gammas, i, alpha).value
            if cv:
                acc = [(s + cv * o) % p for s, o in zip(acc, out.values())]
    return field.vector(acc)


# ---------------------------------------------------------------------------
# Freshman scheme (degree = characteristic)


class FreshmanParams:
    """Two-worker scheme for g(X) = A (X_1^d, ..., X_m^d)^T with d = char F.

    The matrix A must be nonzero; the implied degree d is always the field
    characteristic, which is what makes x -> x^d additive.
    """

    __slots__ = ("field", "K", "m", "n", "matrix")

    def __init__(self, field: FieldConfig, K: int, m: int, n: int,
                 matrix: Sequence[Sequence[FieldElement]]):
        if K < 1:
            raise InvalidParamsError([f"K must be >= 1, got {K}"])
        if m < 1 or n < 1:
            raise InvalidParamsError([f"need m >= 1 and n >= 1, got m={m}, n={n}"])
        matrix = tuple(tuple(row) for row in matrix)
        if len(matrix) != n or any(len(row) != m for row in matrix):
            raise InvalidParamsError([f"matrix must be {n}x{m}"])
        if not any(e.value for row in matrix for e in row):
            raise InvalidParamsError(["matrix must be nonzero"])
        self.field = field
        self.K = K
        self.m = m
        self.n = n
        self.matrix = matrix

    @property
    def d(self) -> int:
        return self.field.p

    @property
    def N(self) -> int:
        return 2

    def __repr__(self):
        return (f"FreshmanParams(F_{self.field.p}, K={self.K}, "
                f"m={self.m}, n={self.n}, d={self.d})")


def freshman_encode(params: FreshmanParams, data: Dataset,
                    z: FieldVector) -> list[FieldVector]:
    """Two shares: Z and Z + X_1 + ... + X_K."""
    if data.K != params.K:
        raise DimensionMismatchError(f"dataset has K={data.K}, scheme has K={params.K}")
    if data.m != params.m or z.dim != params.m:
        raise DimensionMismatchError(
            f"expected dimension {params.m}, got data {data.m} / key {z.dim}")
    total = z
    for item in data.items:
        total = total + item
    return [z, total]


def freshman_apply(params: FreshmanParams, x: FieldVector) -> FieldVector:
    """The scheme's own worker function: A applied to coordinatewise d-th powers."""
    if x.dim != params.m:
        raise DimensionMismatchError(f"input dim {x.dim} != m={params.m}")
    p = params.field.p
    powers = [pow(v, params.d, p) for v in x.values()]
    out = []
    for row in params.matrix:
        out.append(sum(e.value * v for e, v in zip(row, powers)) % p)
    return params.field.vector(out)


def freshman_oracle(params: FreshmanParams, data: Dataset) -> FieldVector:
    """Brute-force sum of freshman_apply over the dataset items."""
    acc = freshman_apply(params, data.items[0])
    for item in data.items[1:]:
        acc = acc + freshman_apply(params, item)
    return acc


def freshman_decode(params: FreshmanParams,
                    outputs: Sequence[FieldVector]) -> FieldVector:
    """g(Z + sum X_k) - g(Z), exact because d-th powers add in characteristic d."""
    outputs = list(outputs)
    if len(outputs) != 2:
        raise DimensionMismatchError(f"expected 2 worker outputs, got {len(outputs)}")
    return outputs[1] - outputs[0]
