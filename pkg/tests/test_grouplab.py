import random
from itertools import combinations, product

import pytest

from artifact.grouplab import (IndexOutOfRange, TruncationTooShallow, augmentation_oracle,
                               beta_formula, beta_pairing, build_Vi, check_all, closure,
                               digits_A, expected_ma_series, father_son_maps,
                               fibered_identification_check, layered_series_term, lcs_bruteforce,
                               lcs_oracle, ma_generators, ma_series_formula, ma_subgroup, omega,
                               omega_generators, one_index_in_advance_check, psi_functional,
                               shifted_index, transition_check, v2)
from artifact.treegroup import compose_bits, phi, sigma_w

ALL_A = [frozenset(s) for r in range(1, 4) for s in combinations(range(3), r)]


def test_build_Vi_examples():
    assert build_Vi(3, 0).dim == 8
    V = build_Vi(1, 1)
    assert sorted(V.elements()) == [0b00, 0b11]
    s, _ = father_son_maps(3)
    assert set(build_Vi(3, 4).elements()) == {s(v) for v in range(16)}
    assert build_Vi(2, 4).dim == 0
    with pytest.raises(IndexOutOfRange):
        build_Vi(2, 5)


def test_Vi_matches_augmentation_oracle():
    for N in range(5):
        gens = omega_generators(N)
        for i in range((1 << N) + 1):
            V = build_Vi(N, i)
            assert V.space == augmentation_oracle(gens, N, i).space
            assert V.dim == (1 << N) - i


def test_augmentation_oracle_extremal_example():
    gens = ma_generators(3, {0})
    assert augmentation_oracle(gens, 3, 0, level=2).dim == 4
    assert augmentation_oracle(gens, 3, 1, level=2).space == build_Vi(2, 2).space


def test_transition_examples():
    se, sx = sigma_w(3, "").bits, sigma_w(3, "x").bits
    assert transition_check(3, 0, se)
    assert not transition_check(3, 1, se)
    assert not transition_check(3, 3, sx)
    assert transition_check(3, 3, sigma_w(3, "xy").bits)
    with pytest.raises(IndexOutOfRange):
        transition_check(3, 6, se)


def test_transition_characters_sweep():
    for N in range(2, 5):
        V = {j: build_Vi(N, j) for j in range((1 << N) + 1)}
        gens = list(range(1, 1 << ((1 << N) - 1))) if N <= 3 else [
            compose_bits(N, a, b) for a in omega_generators(N) for b in omega_generators(N)]
        for i in range((1 << N) - 2):
            for g in gens:
                assert transition_check(N, i, g, V) == bool(phi(g, v2(i + 1)))


def test_psi_functional_independent_of_freezing():
    for N in (1, 2, 3):
        for i in range(1 << N):
            Vi, Vi1 = build_Vi(N, i), build_Vi(N, i + 1)
            A = digits_A(N, i)
            vals = set()
            for choice in product((0, 1), repeat=len(A)):
                m = psi_functional(N, i, dict(zip(A, choice)))
                vals.add(tuple((v & m).bit_count() & 1 for v in Vi.space.basis))
            assert len(vals) == 1
            m = psi_functional(N, i)
            ker = [v for v in Vi.elements() if not (v & m).bit_count() & 1]
            assert set(ker) == set(Vi1.elements())


def test_non_extremal_subgroups_share_filtration():
    rng = random.Random(17)
    done = 0
    while done < 100:
        gens = [rng.getrandbits(15) for _ in range(rng.randint(2, 5))]
        if not all(any(phi(g, i) for g in gens) for i in range(4)):
            continue
        for k in range(4):
            for i in range((1 << k) + 1):
                assert augmentation_oracle(gens, 4, i, level=k).space == build_Vi(k, i).space
        done += 1


def test_father_son_exactness():
    for N in range(1, 5):
        s, f = father_son_maps(N)
        half = 1 << (N - 1)
        im = {s(v) for v in range(1 << half)}
        ker = {v for v in range(1 << (1 << N)) if f(v) == 0}
        assert im == ker == set(build_Vi(N, half).elements())


def test_lcs_examples():
    assert lcs_oracle(omega(2))[1].order == 2
    series = lcs_oracle(omega(3))
    for i, H in enumerate(series):
        e = max(1 - i, 0) + max(2 - i, 0) + max(4 - i, 0)
        assert H.order == 2 ** e
    assert series[1].order == 16
    M = lcs_oracle(ma_subgroup(3, {0}))
    assert M[1] == series[2] and M[1].order == 4


def test_lcs_oracle_matches_bruteforce():
    for G in (omega(2), omega(3), ma_subgroup(3, {0, 1}), ma_subgroup(3, {2})):
        assert lcs_oracle(G) == lcs_bruteforce(G)


def test_omega_series_is_layered_product():
    for N in (1, 2, 3):
        series = lcs_oracle(omega(N))
        for i in range(len(series) + 2):
            want = layered_series_term(N, i)
            got = series[i] if i < len(series) else None
            assert (got == want) if got is not None else want.order == 1


def test_omega4_series_generatorwise():
    series = lcs_oracle(omega(4))
    assert [H.order for H in series] == [32768, 2048, 256, 64, 16, 8, 4, 2, 1]
    for i, H in enumerate(series):
        assert all(g in layered_series_term(4, i).elements for g in H.generators)


def test_ma_series_formula_examples():
    assert ma_series_formula(3, (), 2) == layered_series_term(3, 2)
    T = ma_series_formula(3, {0, 1}, 1)
    assert T.order == 8 and T.elements < layered_series_term(3, 1).elements
    assert lcs_oracle(ma_subgroup(3, {0, 1}))[1] == T
    assert lcs_oracle(ma_subgroup(3, {0, 1}))[2] == layered_series_term(3, 2)


def _threshold(a):
    return 1 << (min(a) + 1) if len(a) > 1 else 1 << max(a)


def test_ma_series_measured_threshold():
    """Brute force: the index-2 formula holds exactly for i < 2^(min(a)+1)
    when a is not extremal; beyond it the series is the full Omega-series."""
    for N in (3, 4):
        for a in [frozenset(s) for r in range(2, N + 1)
                  for s in combinations(range(N), r)]:
            if N == 4 and len(a) > 2:
                continue
            series = lcs_oracle(ma_subgroup(N, a))
            for i in range(len(series)):
                if i < _threshold(a):
                    assert series[i] == ma_series_formula(N, a, i)
                else:
                    assert series[i] == layered_series_term(N, i)


def test_ma_series_bound_discrepancy_recorded():
    """With top(a) > min(a) + 1 the predicted bound 2^top overshoots."""
    bad = []
    for a in ALL_A:
        series = lcs_oracle(ma_subgroup(3, a))
        for i in range(min(len(series), 1 << max(a))):
            if series[i] != ma_series_formula(3, a, i):
                bad.append((tuple(sorted(a)), i))
    assert bad == [((0, 2), 2), ((0, 2), 3), ((0, 1, 2), 2), ((0, 1, 2), 3)]


def test_extremal_series_shift():
    for e in (0, 1, 2):
        series = lcs_oracle(ma_subgroup(3, {e}))
        for i in range(len(series)):
            assert series[i] == expected_ma_series(3, {e}, i)


def test_shifted_index():
    assert [shifted_index(0, i) for i in range(5)] == [0, 2, 4, 6, 8]
    assert shifted_index(1, 1) == 1 and shifted_index(1, 2) == 3


def test_extremal_filtration_shift():
    for e in (0, 1):
        for k in range(e + 1, 5):
            gens = ma_generators(k, {e})
            for i in range((1 << k) + 1):
                j = min(shifted_index(e, i), 1 << k)
                assert augmentation_oracle(gens, k, i).space == build_Vi(k, j).space


def test_beta_examples():
    # i = 0: the first-level lift commutes with sigma_e into level 1 only
    assert beta_pairing(4, 0, {0: 1}, {1: 1}) == {1: 1, 2: 0, 3: 0}
    for y in ({1: 1}, {2: 1}, {3: 1}, {1: 1, 3: 1}):
        assert not any(beta_pairing(4, 1, {0: 1}, y).values())
    assert beta_pairing(4, 1, {1: 1}, {2: 1}) == {2: 1, 3: 0}
    assert beta_pairing(4, 1, {1: 1}, {3: 1}) == {2: 0, 3: 1}


def test_beta_all_basis_inputs():
    for i in range(4):
        for x in range(4):
            for y in range(4):
                if i >= 1 << y:
                    continue
                out = beta_pairing(4, i, {x: 1}, {y: 1})
                assert out == beta_formula(4, i, {x: 1}, {y: 1})


def test_beta_truncation_guard():
    with pytest.raises(TruncationTooShallow):
        beta_pairing(2, 3, {0: 1}, {1: 1})


def test_fibered_identification():
    assert fibered_identification_check(3, {0, 1}, 0)
    assert fibered_identification_check(3, {0, 1}, 1)
    assert fibered_identification_check(3, {1}, 1)
    assert fibered_identification_check(3, {0, 2}, 1)


def test_one_index_in_advance():
    assert one_index_in_advance_check(0, 0, 3)


def test_closure_and_subgroup_sizes():
    assert omega(3).order == 128
    assert ma_subgroup(3, {0, 2}).order == 64
    assert len(closure(2, [sigma_w(2, "").bits])) == 2


def test_check_all_suite():
    for N in (1, 2, 3):
        assert all(check_all(N).values())
