import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from maxkcolor.graph import BudgetExceeded
from maxkcolor.pcp import (LabelCoverInstance, Labeling, LongCodeProof, acceptance_probability, block_permutation,
                           compose, gen_label_cover, influence_decode, invert, labeling_value, long_code_encode,
                           monte_carlo_acceptance, sigma_permutations)


def random_two_to_one(rng, R):
    perm = rng.permutation(2 * R)
    proj = [0] * (2 * R)
    for i in range(R):
        proj[perm[2 * i]] = proj[perm[2 * i + 1]] = i
    return proj


def test_instance_validation():
    with pytest.raises(ValueError):
        LabelCoverInstance(1, 1, 2, ((0, 0, (0, 0, 0, 1)),))
    with pytest.raises(ValueError):
        LabelCoverInstance(2, 2, 1, ((0, 0, (0, 0)), (0, 1, (0, 0)), (1, 0, (0, 0))))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 3), st.integers(1, 4), st.integers(1, 3))
def test_generator_properties(seed, n_u, n_v, R):
    deg = min(2, n_v)
    inst, lab = gen_label_cover(seed, n_u, n_v, deg, R)
    assert labeling_value(inst, lab) == 1
    for _, _, proj in inst.edges:
        assert sorted(proj) == sorted(list(range(R)) * 2)
    assert all(len(inst.neighbourhood(u)) == deg for u in range(n_u))
    assert gen_label_cover(seed, n_u, n_v, deg, R) == (inst, lab)


def test_generator_rejects_infeasible_degree():
    with pytest.raises(ValueError):
        gen_label_cover(0, 2, 2, 3, 1)


def test_identity_projection_gives_identity_sigma():
    for R in (1, 2, 3):
        assert block_permutation([j // 2 for j in range(2 * R)]) == tuple(range(2 * R))


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 4))
def test_sigma_pairing_equation(seed, R):
    rng = np.random.default_rng(seed)
    p1, p2 = random_two_to_one(rng, R), random_two_to_one(rng, R)
    s1, s2 = sigma_permutations(p1, p2)
    assert sorted(s1) == list(range(2 * R)) and sorted(s2) == list(range(2 * R))
    i1, i2 = invert(s1), invert(s2)
    for i in range(R):
        assert p1[i1[2 * i]] == p1[i1[2 * i + 1]] == p2[i2[2 * i]] == p2[i2[2 * i + 1]] == i


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 2), st.sampled_from([2, 3]))
def test_long_code_composition_law(seed, R, k):
    rng = np.random.default_rng(seed)
    sigma = tuple(int(s) for s in rng.permutation(2 * R))
    label = int(rng.integers(2 * R))
    table = long_code_encode(label, 2 * R, k)
    comp = compose(table, sigma)
    for x in itertools.product(range(k), repeat=2 * R):
        assert table[x] == x[label] + 1
        assert comp[x] == x[sigma[label]] + 1
        assert comp[x] == table[tuple(x[sigma[j]] for j in range(2 * R))]


@pytest.mark.parametrize("k,R", [(4, 1), (4, 2), (6, 1)])
def test_completeness(k, R):
    for seed in range(4):
        inst, lab = gen_label_cover(seed, 2, 4, 2, R)
        assert acceptance_probability(inst, LongCodeProof.from_labeling(inst, lab, k), k) == 1


def test_constant_proof_always_rejected():
    inst, _ = gen_label_cover(0, 2, 3, 2, 1)
    assert acceptance_probability(inst, LongCodeProof.constant(inst, 4), 4) == 0


@pytest.mark.parametrize("k,R", [(4, 1), (6, 1), (4, 2)])
def test_perturbation_decreases_acceptance(k, R):
    rng = np.random.default_rng(k * 10 + R)
    for seed in range(3):
        inst, lab = gen_label_cover(seed, 2, 3, 2, R)
        proof = LongCodeProof.from_labeling(inst, lab, k)
        v = inst.edges[0][1]
        tried = 0
        while tried < 5:
            point = tuple(int(a) for a in rng.integers(k, size=2 * R))
            absent = [c for c in range(1, k + 1) if c - 1 not in point]
            if not absent:
                continue
            tried += 1
            bad = proof.with_entry(v, point, absent[int(rng.integers(len(absent)))])
            assert acceptance_probability(inst, bad, k) < 1


def test_rejects_small_k_and_budget():
    inst, lab = gen_label_cover(0, 1, 2, 1, 1)
    with pytest.raises(ValueError):
        acceptance_probability(inst, LongCodeProof.from_labeling(inst, lab, 3), 3)
    with pytest.raises(BudgetExceeded):
        acceptance_probability(inst, LongCodeProof.from_labeling(inst, lab, 4), 4, budget=10)


@pytest.mark.parametrize("seed", range(3))
def test_exact_matches_monte_carlo(seed):
    inst, _ = gen_label_cover(seed, 1, 2, 2, 1, satisfiable=False)
    proof = LongCodeProof.random(inst, 4, seed)
    exact = acceptance_probability(inst, proof, 4)
    assert 0 <= exact <= 1
    mean, se = monte_carlo_acceptance(inst, proof, 4, samples=10**6, seed=seed)
    assert abs(mean - float(exact)) <= 4 * se


@pytest.mark.parametrize("k,R", [(4, 1), (4, 2)])
def test_influence_decode_recovers_planted_labeling(k, R):
    for seed in range(3):
        inst, lab = gen_label_cover(seed, 2, 3, 2, R)
        dec = influence_decode(inst, LongCodeProof.from_labeling(inst, lab, k), k, t=1, delta=0.1)
        used = {v for _, v, _ in inst.edges}
        for v in used:
            assert dec.sugg_v[v] == (lab.v_labels[v],)
        assert dec.value == 1
        for s in dec.sugg_u:
            assert len(s) <= 1 / 0.1
        for s in dec.sugg_v:
            assert len(s) <= 8 / 0.1


def test_influence_decode_constant_proof():
    inst, _ = gen_label_cover(1, 2, 3, 2, 1)
    dec = influence_decode(inst, LongCodeProof.constant(inst, 4), 4)
    assert all(not s for s in dec.sugg_u + dec.sugg_v)
    assert max(max(r) for r in dec.u_influence + dec.v_influence) < 1e-12


def test_labeling_value_partial():
    inst = LabelCoverInstance(1, 2, 1, ((0, 0, (0, 0)), (0, 1, (0, 0))))
    assert labeling_value(inst, Labeling((0,), (1, 0))) == 1
