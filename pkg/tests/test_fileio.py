"""JSON schemas: round-trips and distinct, named violations."""

import json

import pytest

from harmcode.errors import (
    CountMismatchError,
    ResidueRangeError,
    SchemaViolationError,
)
from harmcode.baselines import (
    FreshmanParams,
    freshman_encode,
    lcc_encode,
    lcc_params,
    shamir_encode,
    shamir_params,
)
from harmcode.field import FieldConfig
from harmcode.fileio import (
    load_dataset,
    load_outputs,
    load_shares,
    load_task,
    params_from_json,
    params_to_json,
    write_dataset,
    write_outputs,
    write_shares,
    write_task,
)
from harmcode.harmonic import encode, select_params
from harmcode.poly import Dataset, PolyMap

F5 = FieldConfig(5)


def _write(path, doc):
    path.write_text(json.dumps(doc))
    return path


def test_task_roundtrip(tmp_path):
    g = PolyMap.from_terms(F5, 2, [[(2, (1, 1)), (1, (0, 1))], [(3, (2, 0))]])
    path = tmp_path / "task.json"
    write_task(path, g)
    field, loaded = load_task(path)
    assert field == F5
    assert loaded == g


def test_dataset_roundtrip(tmp_path):
    data = Dataset([F5.vector([1, 2]), F5.vector([3, 4])])
    path = tmp_path / "data.json"
    write_dataset(path, data)
    assert load_dataset(path, F5) == data


def test_shares_roundtrip_all_schemes(tmp_path):
    data = Dataset([F5.vector([1]), F5.vector([2])])
    z = F5.vector([3])
    cases = [
        (select_params(F5, 2, 2, c=4, betas=[4]), lambda p: encode(p, data, z)),
        (shamir_params(F5, 2, 2),
         lambda p: shamir_encode(p, data, [z, F5.vector([4])])),
        (lcc_params(F5, 2, 1), lambda p: lcc_encode(p, data, z)),
        (FreshmanParams(F5, 2, 1, 1, [[F5.one()]]),
         lambda p: freshman_encode(p, data, z)),
    ]
    for idx, (params, encoder) in enumerate(cases):
        shares = encoder(params)
        path = tmp_path / f"shares{idx}.json"
        write_shares(path, params, shares)
        loaded_params, loaded_shares = load_shares(path)
        assert params_to_json(loaded_params) == params_to_json(params)
        assert loaded_shares == shares


def test_outputs_roundtrip(tmp_path):
    outs = [F5.vector([1, 2]), F5.vector([0, 4])]
    path = tmp_path / "outputs.json"
    write_outputs(path, outs)
    assert load_outputs(path, F5) == outs


def test_schema_violationerrors(tmp_path):
    with pytest.raises(SchemaViolationError):
        load_task(_write(tmp_path / "a.json", {"p": 5, "m": 1}))  # missing keys
    with pytest.raises(SchemaViolationError):
        load_dataset(_write(tmp_path / "b.json", {"K": 1, "data": "nope"}), F5)
    bad = tmp_path / "c.json"
    bad.write_text("{not json")
    with pytest.raises(SchemaViolationError):
        load_dataset(bad, F5)
    with pytest.raises(SchemaViolationError):
        params_from_json({"scheme": "mystery", "p": 5, "K": 1, "d": 1})
    with pytest.raises(SchemaViolationError):
        params_from_json({"scheme": "freshman", "p": 5, "K": 1, "d": 4})


def test_residue_range_errors(tmp_path):
    with pytest.raises(ResidueRangeError):
        load_dataset(_write(tmp_path / "a.json", {"K": 1, "data": [[7]]}), F5)
    with pytest.raises(ResidueRangeError):
        load_dataset(_write(tmp_path / "b.json", {"K": 1, "data": [[-1]]}), F5)
    with pytest.raises(ResidueRangeError):
        load_task(_write(tmp_path / "c.json",
                         {"p": 5, "m": 1, "n": 1,
                          "g": [[{"coeff": 1, "exps": [9]}]]}))  # exps > p-1


def test_count_mismatch_errors(tmp_path):
    with pytest.raises(CountMismatchError):
        load_dataset(_write(tmp_path / "a.json", {"K": 3, "data": [[1], [2]]}), F5)
    with pytest.raises(CountMismatchError):
        load_dataset(_write(tmp_path / "b.json",
                            {"K": 2, "data": [[1, 2], [3]]}), F5)  # ragged
    # share count disagreeing with the scheme's N
    params = select_params(F5, 2, 2, c=4, betas=[4])
    doc = params_to_json(params)
    doc["shares"] = [[1], [2], [3]]  # N should be 4
    with pytest.raises(CountMismatchError):
        load_shares(_write(tmp_path / "c.json", doc))


def test_shares_file_is_deterministic(tmp_path):
    params = select_params(F5, 2, 2, c=4, betas=[4])
    data = Dataset([F5.vector([1]), F5.vector([2])])
    shares = encode(params, data, F5.vector([3]))
    p1, p2 = tmp_path / "s1.json", tmp_path / "s2.json"
    write_shares(p1, params, shares)
    write_shares(p2, params, shares)
    assert p1.read_bytes() == p2.read_bytes()
