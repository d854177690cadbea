"""Generators, validation, and the canonical file format."""

import math
from array import array
from fractions import Fraction
from itertools import product

import pytest

from basisfill.errors import InputError, SchemaError
from basisfill.instance import (
    Instance,
    canonical_json,
    gen_graphic,
    gen_linear_random,
    gen_rota,
    gen_uniform,
    instance_from_data,
    load,
    parse_epsilon,
    save,
)
from basisfill.kernel import gf_columns_independent
from basisfill.matroid import LinearOracle


def test_gen_linear_all_cells_are_bases():
    inst = gen_linear_random(2, 3, 1, seed=7)
    for row in inst.bases:
        for cell in row:
            assert len(cell) == 3
            assert inst.matroid.is_independent(cell)
    inst.validate()


def test_gen_linear_single_dim():
    inst = gen_linear_random(2, 1, 1, seed=123)
    assert inst.matroid.ground_size == 1
    assert inst.bases == (((0,),),)


def test_gen_rota_column_constant():
    inst = gen_rota(2, 8, seed=3)
    assert inst.f == math.floor((1 - inst.epsilon) * inst.n / 2)
    for i in range(inst.f):
        for j in range(inst.n):
            assert inst.bases[i][j] == inst.bases[0][j]


def test_gen_rota_small_n_clamps_to_one_row():
    inst = gen_rota(2, 2, seed=0)  # floor((1-1/5)*2/2) = 0, clamped to 1
    assert inst.f == 1


def test_gen_rota_n2_columns_from_six_ordered_bases():
    # GF(2)^2 has exactly 6 invertible 2x2 matrices; enumerate them.
    ordered = [
        (c0, c1)
        for c0, c1 in product(product(range(2), repeat=2), repeat=2)
        if gf_columns_independent(
            array("i", [c0[0], c1[0], c0[1], c1[1]]), 2, 2, [0, 1], 2
        )
    ]
    assert len(ordered) == 6
    unordered = {frozenset(m) for m in ordered}
    inst = gen_rota(2, 2, seed=9, epsilon=Fraction(1, 100))
    vectors = inst.matroid.vectors
    for j in range(inst.n):
        cell = frozenset(vectors[e] for e in inst.bases[0][j])
        assert cell in unordered


def test_gen_graphic_spanning_trees():
    inst = gen_graphic(3, 2, seed=1)
    assert inst.n == 2
    for row in inst.bases:
        for cell in row:
            assert len(cell) == 2
            assert inst.matroid.is_independent(cell)
    inst4 = gen_graphic(4, 1, seed=5)
    for cell in inst4.bases[0]:
        assert inst4.matroid.is_independent(cell)


def test_gen_uniform_cells():
    inst = gen_uniform(8, 4, 2, seed=0)
    assert inst.matroid.kind == "uniform"
    inst.validate()


def test_seed_determinism_bytes():
    a = canonical_json(gen_linear_random(3, 4, 2, seed=42).to_data())
    b = canonical_json(gen_linear_random(3, 4, 2, seed=42).to_data())
    c = canonical_json(gen_linear_random(3, 4, 2, seed=43).to_data())
    assert a == b
    assert a != c


@pytest.mark.parametrize(
    "make",
    [
        lambda: gen_linear_random(2, 3, 2, seed=1),
        lambda: gen_rota(3, 6, seed=2),
        lambda: gen_graphic(4, 2, seed=3),
        lambda: gen_uniform(6, 3, 2, seed=4),
    ],
)
def test_save_load_roundtrip_byte_identity(make, tmp_path):
    inst = make()
    path = tmp_path / "inst.json"
    save(inst, str(path))
    first = path.read_bytes()
    again = tmp_path / "again.json"
    save(load(str(path)), str(again))
    assert again.read_bytes() == first
    assert first.endswith(b"\n")


def test_epsilon_parsing():
    assert parse_epsilon("1/4") == Fraction(1, 4)
    for bad in ["0/1", "1/1", "0.25", "2/0", "x"]:
        with pytest.raises(SchemaError):
            parse_epsilon(bad)


def test_regime_and_target():
    inst = gen_linear_random(2, 10, 4, seed=0, epsilon=Fraction(1, 5))
    assert inst.regime_flag  # 4 <= floor(0.4 * 10)
    assert inst.target_full_rows == 4 - math.ceil(Fraction(1, 5) * 10 / 2)
    wide = gen_linear_random(2, 4, 4, seed=0, epsilon=Fraction(1, 5))
    assert not wide.regime_flag


def test_load_rejects_wrong_cell_size(tmp_path):
    inst = gen_linear_random(2, 3, 1, seed=7)
    data = inst.to_data()
    data["bases"][0][1] = data["bases"][0][1][:2]  # cell (0,1) too small
    path = tmp_path / "bad.json"
    path.write_bytes(canonical_json(data))
    with pytest.raises(SchemaError, match=r"\(0,1\)"):
        load(str(path))


def test_load_rejects_dependent_cell(tmp_path):
    # Repeated vector in one cell of a GF(2) instance: ids differ, vectors
    # collide, so the cell is dependent.
    vectors = [(1, 0), (0, 1), (1, 0)]
    data = {
        "matroid": {"kind": "linear", "p": 2, "vectors": [list(v) for v in vectors]},
        "n": 2,
        "f": 1,
        "epsilon": "1/5",
        "bases": [[[0, 1], [0, 2]]],
    }
    path = tmp_path / "dep.json"
    path.write_bytes(canonical_json(data))
    with pytest.raises(SchemaError, match=r"\(0,1\)"):
        load(str(path))


def test_load_rejects_empty_file(tmp_path):
    path = tmp_path / "empty.json"
    path.write_bytes(b"")
    with pytest.raises(SchemaError, match="empty"):
        load(str(path))


def test_load_rejects_unknown_ids(tmp_path):
    inst = gen_linear_random(2, 2, 1, seed=1)
    data = inst.to_data()
    data["bases"][0][0] = [0, 999]
    path = tmp_path / "ids.json"
    path.write_bytes(canonical_json(data))
    with pytest.raises(SchemaError):
        load(str(path))


def test_rank_mismatch_detected():
    oracle = LinearOracle(2, [(1, 0), (0, 1)])
    inst = Instance(oracle, 3, 1, Fraction(1, 5), ((() ,) * 3,))
    with pytest.raises(SchemaError, match="rank"):
        inst.validate()


def test_instance_from_data_requires_keys():
    with pytest.raises(SchemaError, match="missing key"):
        instance_from_data({"n": 1})
    with pytest.raises(SchemaError):
        instance_from_data([1, 2])


def test_ground_sharing_deduplicates_vectors():
    inst = gen_rota(2, 4, seed=0, epsilon=Fraction(1, 5))
    assert len(set(inst.matroid.vectors)) == inst.matroid.ground_size
