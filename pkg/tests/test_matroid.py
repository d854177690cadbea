"""Oracle contracts: axioms, rank, augmentation, extension."""

import random
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from basisfill.errors import InfeasibleError, InputError, OracleViolationError
from basisfill.instance import gen_linear_random
from basisfill.matroid import GraphicOracle, LinearOracle, UniformOracle

from helpers import ref_subset_rank


def k_graph(m):
    return GraphicOracle(m, [(u, v) for u in range(m) for v in range(u + 1, m)])


def random_linear(p, n, ground, seed):
    rng = random.Random(seed)
    while True:
        vectors = [tuple(rng.randrange(p) for _ in range(n)) for _ in range(ground)]
        try:
            return LinearOracle(p, vectors)
        except InputError:
            continue


def random_independent(oracle, rng):
    elems = []
    for e in rng.sample(range(oracle.ground_size), oracle.ground_size):
        if oracle.is_independent(elems + [e]):
            elems.append(e)
        if len(elems) == oracle.rank_n or rng.random() < 0.3:
            break
    return elems


ORACLES = [
    lambda: UniformOracle(3, 7),
    lambda: k_graph(4),
    lambda: k_graph(5),
    lambda: random_linear(2, 4, 9, seed=11),
    lambda: random_linear(3, 4, 9, seed=12),
    lambda: random_linear(5, 3, 8, seed=13),
]


def test_empty_set_independent():
    for make in ORACLES:
        assert make().is_independent(())


def test_uniform_examples():
    u24 = UniformOracle(2, 4)
    assert u24.is_independent(())
    assert not u24.is_independent((0, 1, 2))
    assert u24.rank(range(4)) == 2


def test_linear_dependent_example():
    oracle = LinearOracle(2, [(1, 0), (0, 1), (1, 1)])
    assert not oracle.is_independent((0, 1, 2))
    assert oracle.is_independent((0, 2))
    assert oracle.rank((0, 1, 2)) == 2


def test_graphic_triangle_rank():
    tri = GraphicOracle(3, [(0, 1), (1, 2), (0, 2)])
    assert tri.rank((0, 1, 2)) == 2
    assert tri.rank(()) == 0
    assert not tri.is_independent((0, 1, 2))
    assert tri.is_independent((0, 1))


def test_rank_matches_subset_enumeration_gf3():
    oracle = random_linear(3, 3, 6, seed=5)
    rng = random.Random(42)
    subset = rng.sample(range(6), 4)
    assert oracle.rank(subset) == ref_subset_rank(oracle, subset)


@pytest.mark.parametrize("make", ORACLES)
def test_downward_closure_randomized(make):
    oracle = make()
    rng = random.Random(7)
    for _ in range(200):
        indep = random_independent(oracle, rng)
        for drop in indep:
            assert oracle.is_independent([e for e in indep if e != drop])


@pytest.mark.parametrize("make", ORACLES)
def test_augmentation_randomized(make):
    oracle = make()
    rng = random.Random(8)
    done = 0
    while done < 200:
        a = random_independent(oracle, rng)
        b = random_independent(oracle, rng)
        if len(a) <= len(b):
            continue
        done += 1
        e = oracle.augment(a, b)
        assert e in set(a) - set(b)
        assert oracle.is_independent(sorted(set(b) | {e}))


def test_augment_lowest_id_uniform():
    u35 = UniformOracle(3, 5)
    assert u35.augment((0, 1), (4,)) == 0


def test_augment_gf2_plane():
    oracle = LinearOracle(2, [(1, 0), (0, 1), (1, 1)])
    # A = {(1,0),(0,1)}, B = {(1,1)}: both candidates work, lowest id wins.
    assert oracle.augment((0, 1), (2,)) == 0


def test_augment_graphic_tree():
    k4 = k_graph(4)
    tree = (0, 1, 2)
    assert k4.is_independent(tree)
    picked = k4.augment(tree, (0,))
    assert picked == min(set(tree) - {0})
    assert k4.is_independent((0, picked))


def test_augment_precondition_errors():
    u = UniformOracle(2, 4)
    with pytest.raises(InputError):
        u.augment((0,), (1, 2))  # |A| <= |B|
    with pytest.raises(InputError):
        u.augment((0, 1, 2), (3,))  # A dependent


def test_rank_submodular_small_ground():
    for make in (lambda: UniformOracle(2, 5), lambda: k_graph(4)):
        oracle = make()
        ground = range(oracle.ground_size)
        for ra in range(3):
            for a in combinations(ground, ra):
                for rb in range(3):
                    for b in combinations(ground, rb):
                        union = sorted(set(a) | set(b))
                        inter = sorted(set(a) & set(b))
                        assert oracle.rank(union) + oracle.rank(inter) <= (
                            oracle.rank(a) + oracle.rank(b)
                        )


def test_linear_agrees_with_subset_oracle_small():
    oracle = random_linear(2, 3, 7, seed=3)
    for size in range(4):
        for sub in combinations(range(7), size):
            brute = ref_subset_rank(oracle, sub) == len(sub) if sub else True
            assert oracle.is_independent(sub) == brute


def test_extend_independent_examples():
    oracle = LinearOracle(2, [(1, 0, 0), (1, 1, 0), (0, 1, 0), (0, 0, 1)])
    # base = {e1}, pool ordered (e1+e2, e2, e1): lowest-id extension first.
    assert oracle.extend_independent((0,), (1, 2, 0), 2) == (0, 1)
    basis = oracle.extend_independent((), range(4), 3)
    assert len(basis) == 3 and oracle.is_independent(basis)
    assert oracle.extend_independent((0, 2), (), 2) == (0, 2)
    with pytest.raises(InfeasibleError):
        oracle.extend_independent((0,), (1, 2), 4)


def test_extend_independent_matches_rank():
    inst = gen_linear_random(3, 4, 1, seed=2)
    oracle = inst.matroid
    pool = list(range(min(6, oracle.ground_size)))
    top = oracle.rank(pool)
    got = oracle.extend_independent((), pool, top)
    assert len(got) == top and oracle.is_independent(got)


def test_invalid_ids_rejected():
    u = UniformOracle(2, 4)
    with pytest.raises(InputError):
        u.is_independent((0, 9))
    with pytest.raises(InputError):
        u.rank((-1,))


def test_oracle_construction_errors():
    with pytest.raises(InputError):
        LinearOracle(4, [(1, 0), (0, 1)])  # not prime
    with pytest.raises(InputError):
        LinearOracle(2, [(1, 0), (1, 0)])  # does not span
    with pytest.raises(InputError):
        GraphicOracle(4, [(0, 1), (2, 3), (0, 1)])  # disconnected
    with pytest.raises(InputError):
        GraphicOracle(3, [(0, 0), (0, 1), (1, 2)])  # loop
    with pytest.raises(InputError):
        UniformOracle(5, 3)  # k > ground


def test_parallel_edges_are_distinct_elements():
    oracle = GraphicOracle(3, [(0, 1), (0, 1), (1, 2)])
    assert oracle.is_independent((0, 2))
    assert oracle.is_independent((1, 2))
    assert not oracle.is_independent((0, 1))  # parallel pair is a cycle


def test_cache_does_not_change_answers():
    cached = random_linear(2, 4, 9, seed=11)
    uncached = LinearOracle(2, cached.vectors, cache_size=0)
    rng = random.Random(1)
    for _ in range(300):
        sub = rng.sample(range(9), rng.randrange(1, 6))
        assert cached.is_independent(sub) == uncached.is_independent(sub)


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 10_000), p=st.sampled_from([2, 3, 5]))
def test_augmentation_property_linear(seed, p):
    oracle = random_linear(p, 3, 6, seed=seed)
    rng = random.Random(seed)
    a = random_independent(oracle, rng)
    b = random_independent(oracle, rng)
    if len(a) > len(b):
        e = oracle.augment(a, b)
        assert oracle.is_independent(sorted(set(b) | {e}))


def test_augment_failure_reports_axiom_violation():
    class Liar(UniformOracle):
        def _indep(self, elems):
            # Accepts {0,1} and singletons but denies every extension of {2}.
            return len(elems) <= 1 or set(elems) == {0, 1}

    liar = Liar(2, 3)
    with pytest.raises(OracleViolationError):
        liar.augment((0, 1), (2,))
