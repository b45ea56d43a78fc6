"""Gauss and hyper-Kloosterman sums: brute-force oracles and closed forms."""

import math

import numpy as np
import pytest

from voronoi_lab.characters import enumerate_characters, induce, primitive_characters, principal
from voronoi_lab.exponential_sums import (
    KloostermanSpec,
    additive_char,
    average_gauss_identity_check,
    average_kloosterman_closed_lemma34,
    clear_kloosterman_cache,
    divisor_sigma,
    gauss_sum,
    gauss_sum_closed_lemma22,
    gauss_sum_closed_lemma23,
    gauss_sum_vector,
    hyper_kloosterman,
    kloosterman_divisor_chains,
    kloosterman_vector,
    tau,
)
from voronoi_lab.numeric import roots_of_unity
from voronoi_lab.residues import divisors, unit_residues


def brute_gauss(chi_star, c, m):
    vv = induce(chi_star, c).value_vector
    roots = roots_of_unity(c)
    return complex(sum(vv[a] * roots[a * m % c] for a in range(c)))


def test_gauss_sum_matches_brute():
    for cstar in (1, 3, 4, 5, 8):
        for chi in primitive_characters(cstar):
            for c in range(cstar, 31, cstar):
                vec = gauss_sum_vector(chi, c)
                for m in range(0, 13):
                    want = brute_gauss(chi, c, m)
                    assert abs(vec[m % c] - want) < 1e-10 * math.sqrt(c)
                    assert abs(gauss_sum(chi, c, m).value - want) < 1e-10 * math.sqrt(c)


def test_tau_modulus():
    for cstar in (3, 4, 5, 7, 8, 9, 11):
        for chi in primitive_characters(cstar):
            assert abs(abs(tau(chi).value) - math.sqrt(cstar)) < 1e-10
    assert abs(tau(principal(1)).value - 1) < 1e-14


def test_closed_forms_match_direct_small_box():
    # the acceptance suite sweeps the full box; this is the unit-sized pin
    for cstar in (1, 3, 4, 5, 8):
        for chi in primitive_characters(cstar):
            for c in range(cstar, 25, cstar):
                scale = math.sqrt(c)
                for m in range(1, 13):
                    direct = brute_gauss(chi, c, m)
                    for closed in (gauss_sum_closed_lemma22, gauss_sum_closed_lemma23):
                        got = closed(chi, c, m).value
                        assert abs(got - direct) < 1e-10 * scale, (cstar, c, m)


def test_closed_form_zero_branch():
    chi = primitive_characters(5)[0]
    # m with (m, c) structure killing the sum: g vanishes unless c/(c,m) = c*
    hits = 0
    for c in (10, 15, 20, 25):
        for m in range(1, 13):
            want = gauss_sum_closed_lemma22(chi, c, m).value
            if want == 0:
                hits += 1
                assert abs(brute_gauss(chi, c, m)) < 1e-10 * math.sqrt(c)
    assert hits > 0


def test_average_gauss_identity():
    # both routes computed independently here: divisor sum of direct Gauss
    # sums against the tau closed form
    for cstar in (1, 3, 5):
        for chi in primitive_characters(cstar):
            tau_val = tau(chi).value
            for n in range(1, 9):
                for m in range(1, 17):
                    lhs, rhs = average_gauss_identity_check(n, m, chi)
                    direct = sum(
                        chi.value_vector[d % cstar] * brute_gauss(chi, (n // d) * cstar, m)
                        for d in divisors(n)
                    )
                    assert abs(lhs.value - direct) < 1e-10 * math.sqrt(cstar) * n
                    if m % n == 0:
                        want = tau_val * np.conj(chi.value_vector[(m // n) % cstar]) * n
                    else:
                        want = 0.0
                    assert abs(rhs.value - want) < 1e-12 * max(1.0, abs(want))
                    assert abs(lhs.value - rhs.value) < 1e-9 * math.sqrt(cstar) * n


def test_divisor_sigma():
    chi = primitive_characters(4)[0]
    for m in range(1, 40):
        for s in (0.0, 1.0, -0.5):
            want = sum(chi.value_vector[d % 4] * d**s for d in divisors(m))
            assert abs(divisor_sigma(s, m, chi) - want) < 1e-10 * max(1.0, abs(want))


def test_kloosterman_vector_matches_naive():
    clear_kloosterman_cache()
    for c, q in ((3, (2,)), (4, (2, 2)), (5, (1,)), (6, (3, 2))):
        for d in kloosterman_divisor_chains(c, q):
            for n in (1, 2, 5):
                vec, err = kloosterman_vector(n, c, q, d)
                assert err >= 0
                for a in unit_residues(c):
                    want = hyper_kloosterman(KloostermanSpec(int(a), n, c, q, d)).value
                    assert abs(vec[a] - want) < 1e-9, (c, q, d, n, int(a))


def test_kloosterman_negative_n():
    c, q = 5, (2,)
    for d in kloosterman_divisor_chains(c, q):
        vec_neg, _ = kloosterman_vector(-3, c, q, d)
        for a in unit_residues(c):
            want = hyper_kloosterman(KloostermanSpec(int(a), -3, c, q, d)).value
            assert abs(vec_neg[a] - want) < 1e-9


def test_kloosterman_spec_validation():
    with pytest.raises(ValueError):
        KloostermanSpec(2, 1, 4, (2,), (2,))  # gcd(a, c) != 1
    with pytest.raises(ValueError):
        KloostermanSpec(1, 1, 4, (2,), (3,))  # 3 does not divide q_1 c
    with pytest.raises(ValueError):
        KloostermanSpec(1, 1, 0, (2,), (1,))


def test_divisor_chains_count():
    # c = 4, q = (2, 2): d_1 | 8 (4 choices), then d_2 | 2*8/d_1
    chains = list(kloosterman_divisor_chains(4, (2, 2)))
    assert len(chains) == 14
    assert len(set(chains)) == 14
    for d1, d2 in chains:
        assert 8 % d1 == 0 and (2 * (8 // d1)) % d2 == 0


def test_average_kloosterman_closed_form_small():
    for c, q in ((3, (2,)), (4, (1, 2)), (5, (2,))):
        chars = enumerate_characters(c)
        units = unit_residues(c)
        for d in kloosterman_divisor_chains(c, q):
            mods = [c]
            for qi, di in zip(q, d):
                mods.append(qi * mods[-1] // di)
            scale = math.sqrt(math.prod(mods))
            for n in (1, 2):
                vec, _ = kloosterman_vector(n, c, q, d)
                for chi in chars:
                    avg = sum(chi.value_vector[a] * vec[a] for a in units)
                    closed = average_kloosterman_closed_lemma34(chi, n, c, q, d).value
                    assert abs(avg - closed) < 1e-9 * scale, (c, q, d, n, chi.label)


def test_cache_clear_keeps_values():
    vec1, _ = kloosterman_vector(2, 6, (3,), (2,))
    clear_kloosterman_cache()
    vec2, _ = kloosterman_vector(2, 6, (3,), (2,))
    assert np.array_equal(vec1, vec2)


def test_additive_char():
    assert abs(additive_char(0) - 1) < 1e-15
    from fractions import Fraction

    assert abs(additive_char(Fraction(1, 2)) + 1) < 1e-12
    assert abs(additive_char(Fraction(1, 4)) - 1j) < 1e-12
    assert abs(additive_char(Fraction(7, 3)) - additive_char(Fraction(1, 3))) < 1e-12
