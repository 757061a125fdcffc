"""Canonical filtrations and elementary sequences."""

import numpy as np
import pytest

from newtonstrata import (
    BT1Module,
    bt1_of_xi,
    canonical_filtration,
    elementary_sequence,
    enumerate_symmetric,
    from_pairs,
    ordinary,
    supersingular,
)
from newtonstrata.eo import ElementarySequence
from newtonstrata.errors import InputError, NotSelfDualShape, NotSymmetric

SIGMA4 = supersingular(4)
RHO4 = ordinary(4, 4)
NU = from_pairs([(2, 1, 1), (1, 1, 1), (1, 2, 1)])
DELTA = from_pairs([(3, 1, 1), (1, 3, 1)])


def test_bt1_of_xi_shapes():
    M = bt1_of_xi(SIGMA4, 2)
    assert M.dim == 8
    assert not (M.F @ M.V % 2).any()
    # one nilpotent 2x2 pair per summand
    assert np.count_nonzero(M.F) == 4 and np.count_nonzero(M.V) == 4

    Mnu = bt1_of_xi(NU, 3)
    assert Mnu.dim == 8
    # block sizes 3, 2, 3 along the diagonal
    blocks = [(0, 3), (3, 5), (5, 8)]
    for lo, hi in blocks:
        outside = Mnu.F.copy()
        outside[lo:hi, lo:hi] = 0
        assert not outside[lo:hi, :].any() and not outside[:, lo:hi].any()

    with pytest.raises(NotSymmetric):
        bt1_of_xi(from_pairs([(1, 0, 1)]), 2)


def test_bt1_ordinary_split():
    M = bt1_of_xi(RHO4, 2)
    # F invertible on four lines, zero on the other four
    ranks = np.linalg.matrix_rank(M.F.astype(float))
    assert int(ranks) == 4


def test_canonical_filtration_supersingular():
    for g in (1, 2, 4):
        M = bt1_of_xi(supersingular(g), 2)
        flag = canonical_filtration(M)
        assert [s.shape[0] for s in flag] == [0, g, 2 * g]
        # middle member is the image of F
        img = sorted(np.nonzero(M.F.sum(axis=1))[0])
        mid = flag[1]
        assert mid.shape[0] == g
        for row in mid:
            assert set(np.nonzero(row)[0]).issubset(img)


def test_canonical_filtration_ordinary():
    M = bt1_of_xi(ordinary(3, 3), 2)
    flag = canonical_filtration(M)
    assert [s.shape[0] for s in flag] == [0, 3, 6]


def test_canonical_filtration_zero_module():
    Z = BT1Module(p=2, dim=0, F=np.zeros((0, 0), int), V=np.zeros((0, 0), int))
    assert [s.shape[0] for s in canonical_filtration(Z)] == [0]
    assert elementary_sequence(Z).psi == ()


def test_es_reference_rows():
    assert elementary_sequence(bt1_of_xi(SIGMA4, 2)).psi == (0, 0, 0, 0)
    assert elementary_sequence(bt1_of_xi(RHO4, 2)).psi == (1, 2, 3, 4)
    assert elementary_sequence(bt1_of_xi(DELTA, 2)).psi == (0, 1, 2, 2)


def test_es_extremes_all_g():
    for g in range(1, 7):
        assert elementary_sequence(bt1_of_xi(ordinary(g, g), 2)).psi == tuple(range(1, g + 1))
        assert elementary_sequence(bt1_of_xi(supersingular(g), 2)).psi == (0,) * g


def test_es_constraints_all_symmetric_up_to_g6():
    for g in range(1, 7):
        for xi in enumerate_symmetric(g):
            psi = elementary_sequence(bt1_of_xi(xi, 2)).psi
            assert len(psi) == g
            assert 0 <= psi[0] <= 1
            for i in range(g):
                assert psi[i] <= i + 1
                if i:
                    assert psi[i - 1] <= psi[i] <= psi[i - 1] + 1


def test_es_independent_of_prime():
    for g in range(1, 6):
        for xi in enumerate_symmetric(g):
            seqs = {elementary_sequence(bt1_of_xi(xi, p)).psi for p in (2, 3, 5)}
            assert len(seqs) == 1


def test_es_rejects_bad_shapes():
    M = bt1_of_xi(supersingular(1), 2)
    odd = BT1Module(p=2, dim=1, F=np.zeros((1, 1), int), V=np.zeros((1, 1), int))
    assert M.dim == 2
    with pytest.raises(NotSelfDualShape):
        elementary_sequence(odd)
    lopsided = BT1Module(p=2, dim=2, F=np.zeros((2, 2), int), V=np.zeros((2, 2), int))
    with pytest.raises(NotSelfDualShape):
        elementary_sequence(lopsided)


def test_elementary_sequence_type_validation():
    with pytest.raises(InputError):
        ElementarySequence((2,))
    with pytest.raises(InputError):
        ElementarySequence((0, 2))
    with pytest.raises(InputError):
        ElementarySequence((1, 1, 3))
    assert ElementarySequence((0, 1, 1)).text() == "(0,1,1)"
