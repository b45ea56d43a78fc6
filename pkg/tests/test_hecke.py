"""Schur evaluation and Hecke-multiplicative coefficient sources."""

import math

import numpy as np
import pytest

from voronoi_lab.hecke import (
    SatakeParams,
    export_coefficient_table,
    growth_exponent_estimate,
    import_coefficient_table,
    isobaric_params,
    isobaric_source,
    random_satake,
    random_satake_source,
    rankin_selberg_params,
    rankin_selberg_source,
    raw_table_source,
    schur,
    schur_bialternant,
    verify_hecke_relations,
)
from voronoi_lab.residues import divisor_count


def _unit_circle_points(rng, deg):
    angles = rng.uniform(0, 2 * np.pi, deg - 1)
    x = [complex(np.exp(1j * t)) for t in angles]
    x.append(1 / math.prod(x, start=1 + 0j))
    return tuple(x)


def test_schur_matches_bialternant():
    rng = np.random.default_rng(3)
    checked = 0
    for deg in (2, 3, 4, 5):
        for _ in range(40):
            x = _unit_circle_points(rng, deg)
            # the ratio-of-alternants oracle loses accuracy near coincident
            # parameters, so only well-separated draws are compared
            sep = min(
                abs(x[i] - x[j]) for i in range(deg) for j in range(i + 1, deg)
            )
            if sep < 0.25:
                continue
            k = tuple(int(e) for e in rng.integers(0, 4, deg - 1))
            a = schur(k, x)
            b = schur_bialternant(k, x)
            assert abs(a - b) <= 1e-10 * max(1.0, abs(a), abs(b)), (deg, k)
            checked += 1
    assert checked > 40


def test_schur_normalization():
    x = _unit_circle_points(np.random.default_rng(5), 3)
    assert abs(schur((0, 0), x) - 1) < 1e-14
    # lambda = (1,0,0): the determinant collapses to h_1 = x_1 + x_2 + x_3
    assert abs(schur((1, 0), x) - sum(x)) < 1e-12
    with pytest.raises(ValueError):
        schur((1, -1), x)


def test_satake_validation():
    with pytest.raises(ValueError):
        SatakeParams(2, {2: (2.0 + 0j, 1.0 + 0j)})  # product 2, not 1
    with pytest.raises(ValueError):
        SatakeParams(3, {2: (1.0 + 0j, 1.0 + 0j)})  # wrong arity
    params = random_satake(3, 20, 9)
    with pytest.raises(ValueError):
        params.alphas_at(23)  # beyond prime_bound


def test_random_satake_deterministic_and_unitary():
    a = random_satake(3, 50, 11)
    b = random_satake(3, 50, 11)
    c = random_satake(3, 50, 12)
    assert a.primes == b.primes
    assert all(a.alphas_at(p) == b.alphas_at(p) for p in a.primes)
    assert any(a.alphas_at(p) != c.alphas_at(p) for p in a.primes)
    for p in a.primes:
        assert abs(math.prod(a.alphas_at(p), start=1 + 0j) - 1) < 1e-10
        assert all(abs(abs(al) - 1) < 1e-12 for al in a.alphas_at(p))


def test_coefficient_multiplicative_across_primes():
    src = random_satake_source(3, 30, 4)
    # disjoint prime support splits multiplicatively
    for m1, m2 in (((2, 4), (3, 9)), ((8, 2), (5, 1)), ((4, 1), (27, 3))):
        joint = tuple(a * b for a, b in zip(m1, m2))
        got = src.coefficient(joint)
        want = src.coefficient(m1) * src.coefficient(m2)
        assert abs(got - want) < 1e-10 * max(1.0, abs(want))


def test_hecke_relations_unit_cases():
    for deg, seed in ((3, 1), (4, 2)):
        src = random_satake_source(deg, 10, seed)
        for p in (2, 3):
            for n in (p, p * p):
                m = (p,) + (1,) * (deg - 2)
                for lhs, rhs in verify_hecke_relations(src, n, m):
                    assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs), abs(rhs))


def test_dual_coefficient_conjugates_unitary():
    # reversing the index tuple realizes the contragredient, whose parameters
    # are the conjugates when every alpha sits on the unit circle
    src = random_satake_source(3, 20, 8)
    for m in ((2, 3), (4, 1), (5, 5)):
        assert abs(src.dual_coefficient(m) - np.conj(src.coefficient(m))) < 1e-10


def test_isobaric_zero_shifts_is_ternary_divisor():
    src = isobaric_source(3, (0j, 0j, 0j), 300)
    for n in range(1, 300):
        got = src.coefficient((n, 1))
        assert abs(got - divisor_count(3, n)) < 1e-9
        assert abs(got.imag) < 1e-12


def test_isobaric_shift_validation():
    with pytest.raises(ValueError):
        isobaric_params(3, (1j, 0j, 1j), 10)  # does not sum to zero
    with pytest.raises(ValueError):
        isobaric_params(3, (1j, -1j), 10)  # arity


def test_rankin_selberg_block():
    f1 = random_satake(2, 10, 21)
    f2 = random_satake(2, 10, 22)
    rs = rankin_selberg_params(f1, f2)
    assert rs.degree == 4
    for p in rs.primes:
        want = sorted(
            (a * b for a in f1.alphas_at(p) for b in f2.alphas_at(p)),
            key=lambda z: (z.real, z.imag),
        )
        got = sorted(rs.alphas_at(p), key=lambda z: (z.real, z.imag))
        assert np.allclose(got, want)
    src = rankin_selberg_source(f1, f2)
    assert src.degree == 4
    # A(1,1,p) is the degree-one Schur value, which factors through the pair
    for p in (2, 3):
        want = sum(f1.alphas_at(p)) * sum(f2.alphas_at(p))
        assert abs(src.coefficient((1, 1, p)) - want) < 1e-12
    with pytest.raises(ValueError):
        rankin_selberg_params(f1, random_satake(2, 5, 1))  # prime sets differ


def test_raw_table_deterministic_and_exportable():
    src = raw_table_source(3, seed=17)
    entries = [(1, 1), (2, 1), (2, 3), (7, 4)]
    doc = export_coefficient_table(src, entries)
    assert doc["version"] == 1 and doc["N"] == 3
    back = import_coefficient_table(doc)
    for m in entries:
        assert back.coefficient(m) == src.coefficient(m)
    with pytest.raises(ValueError):
        import_coefficient_table({**doc, "version": 99})
    again = raw_table_source(3, seed=17)
    assert again.coefficient((5, 9)) == src.coefficient((5, 9))
    with pytest.raises(ValueError):
        raw_table_source(3, table={(1, 1): 1 + 0j}).coefficient((2, 2))


def test_growth_exponent_regression():
    # for the ternary-divisor source the maximum of log A(m) / log(prod m)
    # over 1 < prod m <= bound lands exactly on m = (2,1): log2(3)
    src = isobaric_source(3, (0j, 0j, 0j), 4096)
    for bound in (512, 4096):
        assert abs(growth_exponent_estimate(src, bound) - math.log2(3)) < 1e-12
    with pytest.raises(ValueError):
        growth_exponent_estimate(src, 1)


def test_source_kinds_and_index_validation():
    assert random_satake_source(3, 10, 1).kind == "random-satake"
    assert isobaric_source(2, (1j, -1j), 10).kind == "isobaric"
    assert raw_table_source(3, seed=0).kind == "raw-table"
    with pytest.raises(ValueError):
        random_satake_source(3, 10, 1).coefficient((2,))  # arity
    with pytest.raises(ValueError):
        random_satake_source(3, 10, 1).coefficient((0, 1))  # nonpositive index
