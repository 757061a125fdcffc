"""Minimal modules, hom groups, restriction chains, slope recovery."""

from fractions import Fraction
from math import gcd

import numpy as np
import pytest

from newtonstrata import (
    a_number,
    brute_force_homs,
    direct_sum,
    enumerate_polygons,
    from_pairs,
    frobenius_newton_polygon,
    hom_group,
    minimal_module,
    minimal_of_polygon,
    restriction_image_chain,
)
from newtonstrata import zpa
from newtonstrata.dieudonne import exact_frobenius_matrix
from newtonstrata.errors import (
    BoundExceeded,
    MixedPrimeOrLevel,
    NonCoprimePair,
    SingularMatrix,
    WrongLevel,
)


def _polygons_of_height_up_to(hmax):
    out = []
    for h in range(1, hmax + 1):
        for d in range(0, h + 1):
            out.extend(enumerate_polygons(d, h - d))
    return out


# -- construction ---------------------------------------------------------------

def test_minimal_module_h11_level1():
    M = minimal_module(1, 1, 1, 2)
    shift = [[0, 0], [1, 0]]
    assert M.F.tolist() == shift and M.V.tolist() == shift


def test_minimal_module_h10():
    M = minimal_module(1, 0, 3, 5)
    assert M.h == 1 and M.F.tolist() == [[1]] and M.V.tolist() == [[5]]


def test_minimal_module_f_cubed_is_p():
    M = minimal_module(2, 1, 2, 3)
    F3 = np.linalg.matrix_power(M.F, 3) % 9
    assert np.array_equal(F3, (3 * np.eye(3, dtype=int)) % 9)


def test_minimal_module_identities_everywhere():
    for m in range(0, 4):
        for n in range(0, 4):
            if (m, n) == (0, 0) or gcd(m, n) != 1:
                continue
            for p in (2, 3):
                for a in (1, 2):
                    M = minimal_module(m, n, a, p)
                    q = p**a
                    pid = (p * np.eye(M.h, dtype=int)) % q
                    assert np.array_equal(M.F @ M.V % q, pid)
                    assert np.array_equal(M.V @ M.F % q, pid)
                    Fm = np.linalg.matrix_power(M.F, m) % q if m else np.eye(M.h, dtype=int)
                    Vn = np.linalg.matrix_power(M.V, n) % q if n else np.eye(M.h, dtype=int)
                    assert np.array_equal(Fm % q, Vn % q)


def test_minimal_module_rejects_bad_pairs():
    with pytest.raises(NonCoprimePair):
        minimal_module(2, 2, 1, 2)


def test_minimal_module_uniformizer_relations():
    # the index-shift uniformizer satisfies u^h = p, u^n = F, u^m = V
    for m, n in [(1, 0), (0, 1), (1, 1), (2, 1), (3, 2)]:
        p, a = 3, 2
        q = p**a
        M = minimal_module(m, n, a, p)
        h = M.h
        u = np.zeros((h, h), dtype=np.int64)
        for i in range(h):
            u[(i + 1) % h, i] = 1 if i + 1 < h else p
        def power(k):
            return np.linalg.matrix_power(u, k) % q if k else np.eye(h, dtype=np.int64)
        assert np.array_equal(power(h), (p * np.eye(h, dtype=np.int64)) % q)
        assert np.array_equal(power(n), M.F)
        assert np.array_equal(power(m), M.V)


def test_direct_sum():
    M = minimal_of_polygon(from_pairs([(1, 1, 2)]), 1, 2)
    assert M.h == 4
    empty = direct_sum([], p=2, a=1)
    assert empty.h == 0 and empty.label is None
    both = direct_sum([minimal_module(1, 0, 1, 2), minimal_module(0, 1, 1, 2)])
    assert both.label == from_pairs([(1, 0, 1), (0, 1, 1)])
    with pytest.raises(MixedPrimeOrLevel):
        direct_sum([minimal_module(1, 0, 1, 2), minimal_module(1, 0, 1, 3)])
    with pytest.raises(MixedPrimeOrLevel):
        direct_sum([])


# -- hom groups -------------------------------------------------------------------

def _group_size(exps, p):
    size = 1
    for e in exps:
        size *= p**e
    return size


@pytest.mark.parametrize("p", [2, 3])
def test_end_h11_level1_order_p2(p):
    M = minimal_module(1, 1, 1, p)
    H = hom_group(M, M)
    assert _group_size(H.elementary_divisor_exponents, p) == p**2
    # oracle: scan all p^4 candidate matrices
    sols = brute_force_homs(M, M)
    assert len(sols) == p**2


def test_hom_h10_h01_trivial():
    for p in (2, 3):
        for a in (1, 2):
            M1 = minimal_module(1, 0, a, p)
            M2 = minimal_module(0, 1, a, p)
            H = hom_group(M1, M2)
            assert H.elementary_divisor_exponents == ()
            assert len(brute_force_homs(M1, M2)) == 1  # the zero map only


def test_end_contains_identity_and_f():
    for triple in [(1, 1), (2, 1), (1, 0)]:
        M = minimal_module(triple[0], triple[1], 2, 3)
        H = hom_group(M, M)
        nun = M.h * M.h
        ident = np.eye(M.h, dtype=int).reshape(nun) % 9
        fvec = (M.F % 9).reshape(nun)
        assert zpa.span_contains(H.generators, ident, 3, 2)
        assert zpa.span_contains(H.generators, fvec, 3, 2)


def test_hom_group_against_oracle_small_sweep():
    # structured solver vs exhaustive scan on every pair with h1*h2 <= 4
    small = [(1, 0), (0, 1), (1, 1), (2, 1), (1, 2), (3, 1)]
    for p in (2, 3):
        for a in (1, 2):
            q = p**a
            for m1, n1 in small:
                for m2, n2 in small:
                    h1, h2 = m1 + n1, m2 + n2
                    if h1 * h2 > 4 or q ** (h1 * h2) > 1 << 16:
                        continue
                    M1 = minimal_module(m1, n1, a, p)
                    M2 = minimal_module(m2, n2, a, p)
                    H = hom_group(M1, M2)
                    sols = brute_force_homs(M1, M2)
                    assert len(sols) == _group_size(H.elementary_divisor_exponents, p)
                    hf = zpa.howell_form(sols, h1 * h2, p, a)
                    assert zpa.spans_equal(hf, H.generators)


def test_hom_exponents_independent_of_p():
    for m, n in [(1, 1), (2, 1), (1, 0)]:
        exps = {
            p: hom_group(
                minimal_module(m, n, 2, p), minimal_module(m, n, 2, p)
            ).elementary_divisor_exponents
            for p in (2, 3, 5)
        }
        assert exps[2] == exps[3] == exps[5]


def test_hom_mixed_levels_rejected():
    with pytest.raises(MixedPrimeOrLevel):
        hom_group(minimal_module(1, 1, 1, 2), minimal_module(1, 1, 2, 2))


def test_brute_force_cap():
    M = minimal_module(3, 1, 2, 2)
    with pytest.raises(BoundExceeded):
        brute_force_homs(M, M, cap=1 << 10)


# -- restriction chains -------------------------------------------------------------

def test_chain_stabilizes_by_n_plus_one_heights_up_to_4():
    for beta in _polygons_of_height_up_to(4):
        for p in (2, 3):
            for n in (1, 2):
                chain = restriction_image_chain(beta, n, n + 3, p=p)
                assert chain.stabilization_index <= n + 1
                orders = chain.image_order_exponents()
                assert orders == sorted(orders, reverse=True)  # descending chain


def test_chain_images_weakly_descending_and_stable_tail():
    beta = from_pairs([(2, 1, 1), (1, 2, 1)])
    chain = restriction_image_chain(beta, 1, 4, p=2)
    # strict drop at N = 2 and constant afterwards for this polygon
    assert chain.stabilization_index == 2
    exps = chain.image_order_exponents()
    assert exps[0] > exps[1] and exps[1] == exps[2] == exps[3]


def test_chain_etale_constant_from_n():
    for p in (2, 3):
        chain = restriction_image_chain(from_pairs([(0, 1, 1)]), 1, 4, p=p)
        assert chain.stabilization_index == 1
        exps = chain.image_order_exponents()
        assert len(set(exps)) == 1


def test_chain_image_matches_brute_force_oracle():
    # exhaustive level-(n+1) endomorphism scan, reduced to level n
    for beta in _polygons_of_height_up_to(3):
        for n in (1, 2):
            a = n + 1
            if 2 ** (a * beta.height**2) > 1 << 20:
                continue
            chain = restriction_image_chain(beta, n, n + 1, p=2)
            M = minimal_of_polygon(beta, a, 2)
            sols = brute_force_homs(M, M)
            reduced = np.unique(sols % 2**n, axis=0)
            oracle = zpa.howell_form(reduced, beta.height**2, 2, n)
            assert zpa.spans_equal(oracle, chain.images[-1])


def test_chain_bad_bounds():
    beta = from_pairs([(1, 1, 1)])
    with pytest.raises(BoundExceeded):
        restriction_image_chain(beta, 2, 2, p=2)
    with pytest.raises(BoundExceeded):
        restriction_image_chain(beta, 1, 99, p=2)


# -- frobenius newton polygon ---------------------------------------------------------

def test_frobnp_t2_minus_p():
    out = frobenius_newton_polygon([[0, 2], [1, 0]], 2)
    assert out == from_pairs([(1, 1, 1)])


def test_frobnp_diagonal_ordinary():
    out = frobenius_newton_polygon([[1, 0], [0, 2]], 2)
    assert out == from_pairs([(1, 0, 1), (0, 1, 1)])


def test_frobnp_h21():
    out = frobenius_newton_polygon(exact_frobenius_matrix(from_pairs([(2, 1, 1)]), 3), 3)
    assert out == from_pairs([(2, 1, 1)])
    assert out.slopes() == (Fraction(1, 3),) * 3


def test_frobnp_rational_entries():
    out = frobenius_newton_polygon([[Fraction(1, 1), Fraction(0)], [Fraction(0), Fraction(3)]], 3)
    assert out == from_pairs([(1, 0, 1), (0, 1, 1)])


def test_frobnp_singular():
    with pytest.raises(SingularMatrix):
        frobenius_newton_polygon([[0, 0], [0, 0]], 2)
    with pytest.raises(SingularMatrix):
        frobenius_newton_polygon([], 2)


def test_frobnp_roundtrip_all_heights_up_to_8():
    for p in (2, 3):
        for beta in _polygons_of_height_up_to(8 if p == 2 else 5):
            out = frobenius_newton_polygon(exact_frobenius_matrix(beta, p), p)
            assert out == beta


# -- a-number ---------------------------------------------------------------------------

def test_a_number_values():
    assert a_number(minimal_module(1, 1, 1, 2)) == 1
    assert a_number(minimal_module(1, 0, 1, 2)) == 0
    assert a_number(minimal_module(2, 1, 1, 2)) == 1
    assert a_number(minimal_of_polygon(from_pairs([(1, 1, 3)]), 1, 5)) == 3


def test_a_number_independent_of_p():
    for m, n in [(1, 1), (2, 1), (3, 1), (3, 2)]:
        vals = {a_number(minimal_module(m, n, 1, p)) for p in (2, 3, 5)}
        assert len(vals) == 1


def test_a_number_wrong_level():
    with pytest.raises(WrongLevel):
        a_number(minimal_module(1, 1, 2, 2))


def test_module_json_shape():
    M = minimal_module(1, 1, 2, 3)
    obj = M.to_json()
    assert obj["p"] == 3 and obj["a"] == 2 and obj["h"] == 2
    assert obj["label"] == "(1,1)"
    assert all(0 <= x < 9 for row in obj["F"] for x in row)
