"""Harmonic scheme: parameters, chain, matrix, coefficients, decoding.

The frozen reference values for p=5, K=2, d=2, c=4, beta=4 are:
chain rows (0,0,1), (3,0,3), (2,2,2); matrix rows (0,0,1), (2,0,4),
(4,3,4), (2,2,2); group coefficients j=1: w=(1,), A=2, B=2 and
j=2: w=(3,), A=2, B=4; decode vector (2,1,3,1).
"""

import itertools
import random

import pytest

from harmcode.errors import (
    DimensionMismatchError,
    FieldTooSmallError,
    InvalidParamsError,
    ParameterCorruptionError,
)
from harmcode.field import FieldConfig, sample_uniform_vector
from harmcode.harmonic import (
    EncodeStats,
    EncodingMatrix,
    HarmonicParams,
    WorkerLayout,
    decode,
    decode_vector,
    encode,
    encoding_matrix,
    group_coeffs,
    intermediate_vars,
    select_params,
    validate_params,
)
from harmcode.poly import (
    Dataset,
    PolyMap,
    direct_gradient_sum,
    random_dataset,
    random_poly,
)

F5 = FieldConfig(5)


def worked_example_params():
    return select_params(F5, 2, 2, c=4, betas=[4])


# ---------------------------------------------------------------------------
# parameter selection and validation


def test_select_params_scan_f5():
    params = select_params(F5, 2, 2)
    assert params.c.value == 3
    # forbidden betas for c=3: {0, 3/3=1, 3/2=4, 3/1=3}; scan from 2 hits 2
    assert [b.value for b in params.betas] == [2]
    assert validate_params(params) == []


def test_select_params_scan_f7():
    params = select_params(FieldConfig(7), 2, 2)
    assert params.c.value == 3
    # forbidden: {0, 1, 3/2=5, 3}; 2 is free
    assert [b.value for b in params.betas] == [2]


def test_select_params_override_fixture():
    params = worked_example_params()
    assert params.c.value == 4
    assert [b.value for b in params.betas] == [4]
    assert validate_params(params) == []


def test_select_params_rejects_bad_override():
    with pytest.raises(InvalidParamsError):
        select_params(F5, 2, 2, c=2)  # c in 0..K
    with pytest.raises(InvalidParamsError):
        select_params(F5, 2, 2, c=4, betas=[1])  # 1 always forbidden


def test_select_params_field_too_small():
    with pytest.raises(FieldTooSmallError):
        select_params(FieldConfig(3), 3, 2)  # no c outside 0..3 mod 3
    with pytest.raises(FieldTooSmallError):
        select_params(F5, 2, 4)  # needs 3 betas, only one candidate survives


def test_validate_params_reports_violations():
    bad_c = HarmonicParams(F5, 2, 2, F5.element(2), (F5.element(4),))
    assert any("c=2" in v for v in validate_params(bad_c))
    bad_beta = HarmonicParams(F5, 2, 2, F5.element(4), (F5.element(1),))
    assert any("beta=1" in v for v in validate_params(bad_beta))
    dup = HarmonicParams(FieldConfig(11), 1, 3, FieldConfig(11).element(2),
                         (FieldConfig(11).element(4), FieldConfig(11).element(4)))
    assert any("distinct" in v for v in validate_params(dup))


def test_params_structural_checks():
    with pytest.raises(InvalidParamsError):
        HarmonicParams(F5, 2, 2, F5.element(4), ())  # needs d-1 = 1 beta
    with pytest.raises(InvalidParamsError):
        HarmonicParams(F5, 0, 2, F5.element(4), (F5.element(4),))


def test_worker_layout_group_major():
    layout = WorkerLayout(3, 4)
    assert layout.N == 11
    assert layout.head == 1
    assert layout.tail == 11
    for j in range(1, 4):
        for i in range(1, 4):
            assert layout.group_flat(i, j) == 1 + (j - 1) * 3 + i
    assert layout.label_of(1) == "head"
    assert layout.label_of(11) == "tail"
    assert layout.label_of(2) == (1, 1)
    assert layout.label_of(5) == (1, 2)
    with pytest.raises(IndexError):
        layout.group_flat(4, 1)


# ---------------------------------------------------------------------------
# masking chain


def chain_direct(params, data, z):
    """Independent oracle: P_j = (c/(c-j)) Z - (1/(c-j)) sum_{k<=j} X_k."""
    field = params.field
    p = field.p
    c = params.c.value
    out = []
    for j in range(params.K + 1):
        inv_cj = pow((c - j) % p, p - 2, p)
        coeffs_z = c * inv_cj % p
        acc = []
        for t in range(z.dim):
            s = sum(item.values()[t] for item in data.items[:j]) % p
            acc.append((coeffs_z * z.values()[t] - inv_cj * s) % p)
        out.append(field.vector(acc))
    return out


def test_chain_fixture_rows():
    params = worked_example_params()
    rows = []
    for t in range(3):
        basis = [[1 if idx == t else 0] for idx in range(3)]
        data = Dataset([F5.vector(v) for v in basis[:2]])
        z = F5.vector(basis[2])
        chain = intermediate_vars(params, data, z)
        rows.append([v.values()[0] for v in chain])
    by_j = list(zip(*rows))
    assert by_j[0] == (0, 0, 1)   # P0 = Z
    assert by_j[1] == (3, 0, 3)   # P1 = 3 X1 + 3 Z
    assert by_j[2] == (2, 2, 2)   # P2 = 2 X2 + 2 X1 + 2 Z


def test_chain_head_is_key():
    rng = random.Random(1)
    for p, K in [(7, 1), (11, 3), (13, 4)]:
        field = FieldConfig(p)
        params = select_params(field, K, 2)
        data = random_dataset(rng, field, K, 2)
        z = sample_uniform_vector(rng, field, 2)
        assert intermediate_vars(params, data, z)[0] == z


def test_chain_recursion_matches_direct_formula():
    rng = random.Random(2)
    for _ in range(40):
        p = rng.choice([7, 11, 13, 101])
        field = FieldConfig(p)
        K = rng.randint(1, 4)
        d = rng.randint(1, 3)
        try:
            params = select_params(field, K, d)
        except FieldTooSmallError:
            continue
        m = rng.randint(1, 3)
        data = random_dataset(rng, field, K, m)
        z = sample_uniform_vector(rng, field, m)
        assert intermediate_vars(params, data, z) == chain_direct(params, data, z)


def test_chain_dimension_errors():
    params = worked_example_params()
    data = Dataset([F5.vector([1]), F5.vector([2])])
    with pytest.raises(DimensionMismatchError):
        intermediate_vars(params, data, F5.vector([1, 2]))
    with pytest.raises(DimensionMismatchError):
        intermediate_vars(params, Dataset([F5.vector([1])]), F5.vector([1]))


# ---------------------------------------------------------------------------
# encoding matrix and encoder


def test_matrix_fixture_rows():
    matrix = encoding_matrix(worked_example_params())
    assert matrix.int_rows() == ((0, 0, 1), (2, 0, 4), (4, 3, 4), (2, 2, 2))


def test_matrix_z_column_nonzero_grid():
    for p in [7, 11, 13]:
        field = FieldConfig(p)
        for K in range(1, 4):
            for d in range(1, 4):
                if p < K + d + 2:
                    continue
                matrix = encoding_matrix(select_params(field, K, d))
                assert all(row[-1] != 0 for row in matrix.int_rows())


def test_matrix_construction_rejects_zero_z_entry():
    with pytest.raises(InvalidParamsError):
        EncodingMatrix(F5, 2, [[F5.element(1), F5.element(0), F5.element(0)]])


def test_matrix_rows_match_unit_vector_probing():
    # Oracle: feed basis vectors through the recursive encoder; column t of
    # row w is the share worker w gets when exactly input t is 1.
    rng = random.Random(3)
    for _ in range(12):
        p = rng.choice([7, 11, 13])
        field = FieldConfig(p)
        K = rng.randint(1, 3)
        d = rng.randint(1, 3)
        if p < K + d + 2:
            continue
        params = select_params(field, K, d)
        matrix = encoding_matrix(params)
        probed = [[0] * (K + 1) for _ in range(params.N)]
        for t in range(K + 1):
            basis = [[1 if idx == t else 0] for idx in range(K + 1)]
            data = Dataset([field.vector(v) for v in basis[:K]])
            z = field.vector(basis[K])
            shares = encode(params, data, z)
            for w, share in enumerate(shares):
                probed[w][t] = share.values()[0]
        assert matrix.int_rows() == tuple(tuple(r) for r in probed)


def test_encode_fixture_values():
    # Applying the frozen matrix rows to X1=1, X2=2, Z=3 gives (3, 4, 2, 2).
    params = worked_example_params()
    data = Dataset([F5.vector([1]), F5.vector([2])])
    shares = encode(params, data, F5.vector([3]))
    assert [s.values()[0] for s in shares] == [3, 4, 2, 2]


def test_encode_k1_d1_two_shares():
    field = FieldConfig(7)
    params = select_params(field, 1, 1)
    c = params.c.value
    x1, z = 4, 6
    shares = encode(params, Dataset([field.vector([x1])]), field.vector([z]))
    assert len(shares) == 2
    assert shares[0].values() == (z,)
    inv = pow(c - 1, 5, 7)
    assert shares[1].values() == ((c * inv * z - inv * x1) % 7,)


def test_share_count_grid():
    field = FieldConfig(101)
    for K in range(1, 6):
        for d in range(1, 5):
            params = select_params(field, K, d)
            data = random_dataset(random.Random(K * 10 + d), field, K, 1)
            z = field.vector([7])
            assert len(encode(params, data, z)) == K * (d - 1) + 2 == params.N


def test_encode_identical_to_matrix_apply():
    rng = random.Random(4)
    for _ in range(20):
        p = rng.choice([7, 11, 13, 101])
        field = FieldConfig(p)
        K = rng.randint(1, 4)
        d = rng.randint(1, 4)
        try:
            params = select_params(field, K, d)
        except FieldTooSmallError:
            continue
        m = rng.randint(1, 3)
        data = random_dataset(rng, field, K, m)
        z = sample_uniform_vector(rng, field, m)
        assert encode(params, data, z) == encoding_matrix(params).apply(data, z)


def test_encoder_operation_count():
    # K chain steps plus one blend per group worker: K*d combos, <= 2N here.
    rng = random.Random(5)
    for K in range(1, 4):
        for d in range(1, 4):
            field = FieldConfig(13)
            params = select_params(field, K, d)
            stats = EncodeStats()
            data = random_dataset(rng, field, K, 2)
            z = sample_uniform_vector(rng, field, 2)
            encode(params, data, z, stats)
            assert stats.two_term_combos == K * d
            assert stats.two_term_combos <= 2 * params.N


# ---------------------------------------------------------------------------
# group coefficients and decoding


def test_group_coeffs_fixture():
    params = worked_example_params()
    g1 = group_coeffs(params, 1)
    assert [w.value for w in g1.weights] == [1]
    assert g1.a.value == 2
    assert g1.b.value == 2
    g2 = group_coeffs(params, 2)
    assert [w.value for w in g2.weights] == [3]
    assert g2.a.value == 2
    assert g2.b.value == 4
    with pytest.raises(IndexError):
        group_coeffs(params, 3)


def test_group_coeffs_telescoping_random():
    rng = random.Random(6)
    for _ in range(60):
        p = rng.choice([11, 101, 65537])
        field = FieldConfig(p)
        K = rng.randint(2, 5)
        d = rng.randint(1, 5)
        c = field.element(rng.randrange(K + 1, p))
        from harmcode.harmonic import _forbidden_betas
        bad = _forbidden_betas(field, K, c)
        pool = [v for v in range(2, p) if v not in bad]
        rng.shuffle(pool)
        betas = tuple(field.element(v) for v in pool[:d - 1])
        params = HarmonicParams(field, K, d, c, betas)
        assert validate_params(params) == []
        for j in range(1, K):
            assert group_coeffs(params, j + 1).a == group_coeffs(params, j).b


def test_decode_vector_fixture():
    assert decode_vector(worked_example_params()).int_weights() == (2, 1, 3, 1)


def test_decode_vector_d1_closed_form():
    # d=1: empty groups leave (c, -(c-K)).
    for p, K in [(7, 3), (11, 2), (13, 5)]:
        field = FieldConfig(p)
        params = select_params(field, K, 1)
        c = params.c.value
        assert decode_vector(params).int_weights() == (c, (-(c - K)) % p)


def test_decode_vector_d1_exhaustive_affine():
    # p=7, K=3, affine g: every (X1, X2, X3, Z) decodes to the oracle.
    field = FieldConfig(7)
    params = select_params(field, 3, 1)
    g = PolyMap.univariate(field, [5, 3])  # 3x + 5
    vec = decode_vector(params)
    for x1, x2, x3, z in itertools.product(range(7), repeat=4):
        data = Dataset([field.vector([v]) for v in (x1, x2, x3)])
        shares = encode(params, data, field.vector([z]))
        outputs = [g.eval(s) for s in shares]
        assert vec.apply(outputs) == direct_gradient_sum(g, data)


def test_decode_exhaustive_p11_k2_d3():
    # All 11^3 scalar instances for a fixed cubic.
    field = FieldConfig(11)
    params = select_params(field, 2, 3)
    g = PolyMap.univariate(field, [1, 2, 0, 1])  # x^3 + 2x + 1
    vec = decode_vector(params)
    for x1, x2, z in itertools.product(range(11), repeat=3):
        data = Dataset([field.vector([x1]), field.vector([x2])])
        shares = encode(params, data, field.vector([z]))
        outputs = [g.eval(s) for s in shares]
        assert vec.apply(outputs) == direct_gradient_sum(g, data)


def test_decode_linearity():
    params = worked_example_params()
    field = params.field
    zeros = [field.zero_vector(2) for _ in range(params.N)]
    assert decode(params, zeros) == field.zero_vector(2)
    rng = random.Random(8)
    outputs = [sample_uniform_vector(rng, field, 2) for _ in range(params.N)]
    s = field.element(3)
    scaled = [o.scale(s) for o in outputs]
    assert decode(params, scaled) == decode(params, outputs).scale(s)


def test_decode_wrong_count_or_dim():
    params = worked_example_params()
    field = params.field
    outputs = [field.vector([1]) for _ in range(params.N - 1)]
    with pytest.raises(DimensionMismatchError):
        decode(params, outputs)
    ragged = [field.vector([1])] * (params.N - 1) + [field.vector([1, 2])]
    with pytest.raises(DimensionMismatchError):
        decode(params, ragged)


def test_degree_robustness():
    # A scheme built for degree d also decodes every lower-degree g.
    rng = random.Random(9)
    field = FieldConfig(13)
    params = select_params(field, 2, 3)
    for d_poly in [1, 2, 3]:
        for _ in range(10):
            g = random_poly(rng, field, 2, 2, d_poly)
            data = random_dataset(rng, field, 2, 2)
            z = sample_uniform_vector(rng, field, 2)
            outputs = [g.eval(s) for s in encode(params, data, z)]
            assert decode(params, outputs) == direct_gradient_sum(g, data)


def test_universality_matrix_independent_of_g():
    field = FieldConfig(11)
    params_a = select_params(field, 3, 2)
    params_b = select_params(field, 3, 2)
    assert encoding_matrix(params_a) == encoding_matrix(params_b)
    assert decode_vector(params_a) == decode_vector(params_b)


def test_corrupt_params_raise_at_decode():
    # beta = c/(c-1) collides with an interpolation point; the guard fires.
    field = FieldConfig(7)
    params = HarmonicParams(field, 1, 2, field.element(2), (field.element(2),))
    assert validate_params(params) != []
    with pytest.raises(ParameterCorruptionError):
        decode_vector(params)


def test_exhaustive_validity_f5_sampled_quadratics():
    # Smaller sibling of the acceptance sweep: 5 sampled maps, all 125 states.
    params = select_params(F5, 2, 2)
    vec = decode_vector(params)
    rng = random.Random(10)
    share_sets = {}
    for x1, x2, z in itertools.product(range(5), repeat=3):
        data = Dataset([F5.vector([x1]), F5.vector([x2])])
        share_sets[(x1, x2, z)] = (data, encode(params, data, F5.vector([z])))
    for _ in range(5):
        g = random_poly(rng, F5, 1, 1, rng.randint(1, 2))
        for (x1, x2, z), (data, shares) in share_sets.items():
            outputs = [g.eval(s) for s in shares]
            assert vec.apply(outputs) == direct_gradient_sum(g, data)
