import pytest

from qschur.colours import all_perms, identity
from qschur.dilation import (Alphabet, beta_N, check_companion, check_dilated, check_final_part_equivalence,
                            check_k0_slices, check_subset_sum_comparison, check_matrices, check_schur,
                            check_transport_sequences, check_transport_tables, check_unrefined,
                            effective_gap, enumerate_dilated, minimal_difference, reference_matrix,
                            schur_A, schur_B)
from qschur.errors import AlphabetError, DomainError
from qschur.series import TruncationBox

ALPHABETS = [(3, (1, 2)), (4, (1, 3)), (7, (1, 2, 4))]


def small_box(N, r):
    return TruncationBox(r=r, qmax=3 * N, umax=2, dmax=2)


def test_alphabet_invariants():
    with pytest.raises(AlphabetError, match="smaller than"):
        Alphabet(2, (1, 2))
    with pytest.raises(AlphabetError, match="super-increasing"):
        Alphabet(9, (1, 2, 3))
    with pytest.raises(AlphabetError):
        Alphabet(5, (0, 2))
    A = Alphabet(7, (1, 2, 4))
    assert list(A.sums) == list(range(1, 8))
    assert (A.w_A(6), A.v_A(6), A.z_A(6)) == (2, 2, 4)


def test_beta_range():
    assert [beta_N(m, 3) for m in (-1, 1, 3, 5, -3)] == [2, 1, 3, 2, 3]
    with pytest.raises(DomainError):
        beta_N(0, 3)


@pytest.mark.parametrize("N,a", ALPHABETS)
def test_dilated_tables_every_sigma(N, a):
    alph = Alphabet(N, a)
    box = small_box(N, len(a))
    for sigma in all_perms(len(a)):
        t = enumerate_dilated(alph, sigma, box)
        assert all(r.passed for r in check_dilated(alph, sigma, box, t))
        assert all(r.passed for r in check_transport_tables(alph, sigma, box, t))


@pytest.mark.parametrize("N,a", ALPHABETS)
def test_sequence_level_transport(N, a):
    alph = Alphabet(N, a)
    assert all(r.passed for r in check_transport_sequences(alph, identity(len(a)), small_box(N, len(a))))


@pytest.mark.parametrize("N,a", ALPHABETS)
def test_unrefined_and_slices(N, a):
    alph = Alphabet(N, a)
    box = small_box(N, len(a))
    assert all(r.passed for r in check_unrefined(alph, box))
    assert all(r.passed for r in check_k0_slices(alph, box))
    assert check_subset_sum_comparison(alph).passed
    assert check_final_part_equivalence(alph).passed


def test_matrices_and_companion():
    assert check_matrices().passed
    assert check_companion().passed
    # one concrete entry: plus side, transposed permutation, N = 4
    assert minimal_difference(Alphabet(4, (1, 2)), (2, 1), "plus", 2, 1, 0) == reference_matrix("plus", 4, 2, 1, 0) == 5


def test_effective_gap():
    assert effective_gap(3, 1, 1, 3) == 3
    assert effective_gap(2, 1, 2, 3) == 2
    assert effective_gap(0, 1, 2, 3) == 2


def test_schur_counts():
    assert [schur_A(n) for n in range(8)] == [1, 1, 1, 1, 1, 2, 2, 3]
    assert [schur_B(n) for n in range(8)] == [schur_A(n) for n in range(8)]
    assert all(r.passed for r in check_schur(20))


def test_corrupted_dilated_table_detected():
    alph = Alphabet(3, (1, 2))
    box = small_box(3, 2)
    t = enumerate_dilated(alph, identity(2), box)
    key = sorted(t["G"])[4]
    t["G"][key] += 1
    reps = check_dilated(alph, identity(2), box, t)
    assert reps[0].passed and not reps[1].passed
    assert tuple(reps[1].mismatch.key) == key
