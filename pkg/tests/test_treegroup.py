import random
from itertools import product

import pytest

from artifact.grouplab import lcs_bruteforce, omega
from artifact.treegroup import (LevelMismatch, LevelTooLarge, NotInSubgroup, SupportExceedsLevel,
                                TreeAutomorphism, WordTooLong, Z4Element, act_on_word,
                                characters, commutator, compose, compose_bits, enumerate_omega,
                                enumerate_omega_bits, get_layer, identity, index_vector, inverse,
                                inverse_bits, is_in_Ma, phi, phi_tilde, psi, psi_prime, sigma_w,
                                words)


def portrait(N, support):
    s = identity(N)
    for w in support:
        s = TreeAutomorphism(N, s.bits ^ sigma_w(N, w).bits)
    return s


def naive_act(s, w):
    """Direct recursion: letters processed from the root-nearest end outward."""
    out = ""
    for k in range(len(w)):
        src = w[len(w) - k:]
        bit = 1 if src in s.support() else 0
        letter = w[len(w) - k - 1]
        if bit:
            letter = "y" if letter == "x" else "x"
        out = letter + out
    return out


def test_act_on_word_examples():
    assert act_on_word(identity(2), "xy") == "xy"
    assert act_on_word(sigma_w(2, "y"), "xy") == "yy"
    assert act_on_word(sigma_w(1, ""), "x") == "y"
    with pytest.raises(WordTooLong):
        act_on_word(identity(1), "xy")


def test_action_matches_naive_recursion():
    rng = random.Random(3)
    for _ in range(200):
        s = TreeAutomorphism(4, rng.getrandbits(15))
        for n in range(5):
            for w in words(n):
                assert act_on_word(s, w) == naive_act(s, w)


def test_action_preserves_parent():
    for s in enumerate_omega(3):
        for w in words(3):
            assert act_on_word(s, w)[1:] == act_on_word(s, w[1:])


def test_compose_examples():
    sx, se = sigma_w(2, "x"), sigma_w(2, "")
    assert sorted(compose(sx, se).support()) == ["", "y"]
    assert sorted(compose(se, sx).support()) == ["", "x"]
    assert compose(sx, identity(2)) == sx
    with pytest.raises(LevelMismatch):
        compose(sx, identity(3))


def test_compose_is_tau_then_sigma():
    rng = random.Random(5)
    for _ in range(300):
        s, t = (TreeAutomorphism(4, rng.getrandbits(15)) for _ in range(2))
        st = compose(s, t)
        for w in words(4):
            assert act_on_word(st, w) == act_on_word(s, act_on_word(t, w))


def test_group_axioms_exhaustive_small():
    for N in (1, 2):
        G = list(enumerate_omega_bits(N))
        for a, b, c in product(G, repeat=3):
            assert compose_bits(N, compose_bits(N, a, b), c) == compose_bits(N, a, compose_bits(N, b, c))
        for a in G:
            assert compose_bits(N, a, inverse_bits(N, a)) == 0
            assert compose_bits(N, 0, a) == a


def test_group_axioms_random_level4():
    rng = random.Random(11)
    for _ in range(10**5):
        a, b, c = (rng.getrandbits(15) for _ in range(3))
        assert compose_bits(4, compose_bits(4, a, b), c) == compose_bits(4, a, compose_bits(4, b, c))
    for _ in range(2000):
        a = rng.getrandbits(15)
        assert compose_bits(4, inverse_bits(4, a), a) == 0


def test_characters_examples():
    ch = characters(identity(3))
    assert ch["phi"] == [0, 0, 0] and not any(ch["phi_x"].values())
    s = portrait(2, ["", "y"])
    ch = characters(s)
    assert ch["phi"] == [1, 1] and ch["phi_x"][1] == 0 and ch["phi_y"][1] == 1
    for w in words(2):
        assert characters(sigma_w(3, w))["phi"] == [0, 0, 1]


def test_phi_tilde_sum_is_phi():
    for s in enumerate_omega_bits(3):
        for i in (1, 2):
            assert phi_tilde(s, i, "x") ^ phi_tilde(s, i, "y") == phi(s, i)


def test_sigma_w_examples():
    assert sigma_w(2, "").support() == [""]
    assert compose(sigma_w(3, "x"), sigma_w(3, "y")) == compose(sigma_w(3, "y"), sigma_w(3, "x"))
    s = sigma_w(3, "xy")
    assert compose(s, s) == identity(3)
    with pytest.raises(WordTooLong):
        sigma_w(2, "xy")


def test_is_in_Ma_examples():
    assert is_in_Ma(identity(3), {0, 2})
    assert is_in_Ma(portrait(2, ["", "y"]), {0, 1})
    assert not is_in_Ma(sigma_w(2, ""), {0})
    with pytest.raises(SupportExceedsLevel):
        is_in_Ma(identity(2), {2})


def test_index_vector_csv():
    assert index_vector("1,1,0") == frozenset({0, 1})
    assert index_vector([2]) == frozenset({2})


def test_z4_law():
    g = Z4Element(0, 1)
    assert g * g == Z4Element(1, 0)
    assert Z4Element(1, 0) * Z4Element(1, 0) == Z4Element(0, 0)
    assert (g * g * g * g) == Z4Element()
    for a, b in product(range(4), repeat=2):
        x, y = Z4Element(a >> 1, a & 1), Z4Element(b >> 1, b & 1)
        assert (x * y).to_int() == (x.to_int() + y.to_int()) % 4


def test_psi_prime_examples():
    assert psi_prime(identity(3), {0, 1}) == Z4Element()
    assert psi_prime(portrait(2, ["", "y"]), {0, 1}) == Z4Element(0, 1)
    with pytest.raises(NotInSubgroup):
        psi_prime(sigma_w(2, ""), {0, 1})


def test_psi_examples():
    assert psi(identity(2), {1}) == 0
    assert phi_tilde(sigma_w(2, "x").bits, 1, "x") == 1
    # sigma_x itself has phi_1 = 1, so it is not in M_{e_1}; sigma_x sigma_y is
    assert psi(portrait(2, ["x", "y"]), {1}) == 1
    with pytest.raises(NotInSubgroup):
        psi(sigma_w(2, "x"), {1})


def test_psi_homomorphism_exhaustive():
    for a in ({1}, {2}, {1, 2}):
        M = [s for s in enumerate_omega_bits(3) if sum(phi(s, k) for k in a) % 2 == 0]
        val = {s: psi(TreeAutomorphism(3, s), a) for s in M}
        for s, t in product(M, repeat=2):
            assert val[compose_bits(3, s, t)] == val[s] ^ val[t]


def test_psi_prime_star_homomorphism_exhaustive():
    a = {0, 1}
    M = [s for s in enumerate_omega_bits(3) if (phi(s, 0) + phi(s, 1)) % 2 == 0]
    val = {s: psi_prime(TreeAutomorphism(3, s), a) for s in M}
    for s, t in product(M, repeat=2):
        # the target is abelian, so the composition order is immaterial
        assert val[compose_bits(3, s, t)] == val[s] * val[t]
    assert {v.to_int() for v in val.values()} == {0, 1, 2, 3}
    for s in M:
        assert (val[s] * val[s]).x == phi(s, 0)


def test_phi_homomorphisms_exhaustive():
    for N in (1, 2, 3):
        G = list(enumerate_omega_bits(N))
        for s, t in product(G, repeat=2):
            st = compose_bits(N, s, t)
            assert all(phi(st, i) == phi(s, i) ^ phi(t, i) for i in range(N))


def test_uncertain_additivity_exhaustive():
    """phi~_i(x)(s1 s2) where s1 s2 applies s1 first, then s2."""
    G = list(enumerate_omega_bits(3))
    for s1, s2 in product(G, repeat=2):
        prod = compose_bits(3, s2, s1)
        for i in (1, 2):
            p0 = phi(s1, 0)
            rhs = phi_tilde(s1, i, "x") ^ (phi_tilde(s2, i, "y") if p0 else phi_tilde(s2, i, "x"))
            assert phi_tilde(prod, i, "x") == rhs


def test_commutator_subgroup_is_joint_kernel():
    for N in (1, 2, 3):
        G = omega(N)
        D = lcs_bruteforce(G)[1].elements
        ker = {s for s in G.elements if not any(phi(s, i) for i in range(N))}
        assert D == ker


def test_no_involution_with_phi0_in_Ma_when_a0_set():
    for a in ({0, 1}, {0, 2}, {0, 1, 2}):
        for s in enumerate_omega_bits(3):
            if sum(phi(s, k) for k in a) % 2 == 0 and phi(s, 0):
                assert compose_bits(3, s, s) != 0


def test_conjugation_permutes_deepest_layer():
    for N in (2, 3):
        top = 1 << (N - 1)
        for g in enumerate_omega_bits(N):
            ginv = inverse_bits(N, g)
            for j in range(top):
                w = words(N - 1)[j]
                s = sigma_w(N, w).bits
                conj = compose_bits(N, compose_bits(N, g, s), ginv)
                target = act_on_word(TreeAutomorphism(N, g), w)
                assert conj == sigma_w(N, target).bits


def test_commutator_and_inverse_objects():
    s, t = sigma_w(2, ""), sigma_w(2, "x")
    c = commutator(s, t)
    assert c == compose(compose(s, t), compose(inverse(s), inverse(t)))
    assert get_layer(c.bits, 1) == 0b11


def test_enumerate_omega_sizes():
    assert sum(1 for _ in enumerate_omega(1)) == 2
    assert len(set(enumerate_omega(2))) == 8
    assert len(enumerate_omega_bits(4)) == 32768
    with pytest.raises(LevelTooLarge):
        enumerate_omega_bits(5)
