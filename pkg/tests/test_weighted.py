import pytest

from qschur.colours import all_perms, identity
from qschur.series import TruncationBox
from qschur.weighted import (Part, check_smallest_part_recurrences, check_overline_distinct, check_weighted, count_p,
                             enumerate_D, enumerate_E, format_overpartition, gap, is_valid_E, iter_E,
                             overpartitions, p_tables_brute)

SMALL = {1: TruncationBox(r=1, qmax=10, umax=3, dmax=3),
         2: TruncationBox(r=2, qmax=8, umax=2, dmax=2)}


def test_fourteen_overpartitions_of_four():
    ops = overpartitions(4)
    assert len(ops) == 14
    assert len({format_overpartition(op) for op in ops}) == 14
    assert [len(overpartitions(n)) for n in range(5)] == [1, 2, 4, 8, 14]


@pytest.mark.parametrize("r", [1, 2])
def test_d_equals_e_every_sigma(r):
    box = SMALL[r]
    d = enumerate_D(r, box)
    for sigma in all_perms(r):
        assert enumerate_E(r, sigma, box, method="brute") == d
        assert enumerate_E(r, sigma, box, method="transfer") == d


def test_part_count_column_agrees():
    box = TruncationBox(r=2, qmax=8, umax=2, dmax=2, xmax=4)
    assert enumerate_E(2, None, box, with_m=True, method="brute") == \
        enumerate_E(2, None, box, with_m=True, method="transfer")
    for key in enumerate_D(2, box, with_m=True):
        ells, m = key[:2], key[3]
        assert m <= sum(ells)


def test_gap_is_non_negative_so_sequences_decrease():
    box = SMALL[2]
    for sigma in all_perms(2):
        for parts in iter_E(2, sigma, box):
            assert all(a.value >= b.value for a, b in zip(parts, parts[1:]))
            assert is_valid_E(parts, sigma)


def test_gap_examples():
    # lower part u1*u2 non-overlined: w + chi - 1 = 1, and delta(u1, u1u2) = 0
    assert gap(Part(5, 1, False), Part(3, 3, False), (1, 2)) == 1
    # overlined u2 below u1: 1 + 1 - 1, plus delta(u1, u2) = 1 under the identity, 0 after swapping
    assert gap(Part(5, 1, True), Part(3, 2, True), (1, 2)) == 2
    assert gap(Part(5, 1, True), Part(3, 2, True), (2, 1)) == 1


def test_invalid_sequence_rejected():
    assert not is_valid_E((Part(3, 1, True), Part(3, 1, True)), (1,))


@pytest.mark.parametrize("r", [1, 2])
def test_overlined_parts_distinct(r):
    for sigma in all_perms(r):
        assert check_overline_distinct(r, sigma, SMALL[r]).passed


@pytest.mark.parametrize("r", [1, 2])
def test_smallest_part_recurrences(r):
    box = TruncationBox.for_counts(r, 2, 2, 8)
    assert check_smallest_part_recurrences(r, box).passed


def test_smallest_part_recurrence_detects_corruption():
    box = TruncationBox.for_counts(2, 2, 2, 8)
    tables = p_tables_brute(2, box)
    key = sorted(tables[(0, 2)])[5]
    tables[(0, 2)] = {**tables[(0, 2)], key: tables[(0, 2)][key] + 1}
    rep = check_smallest_part_recurrences(2, box, tables)
    assert not rep.passed and rep.mismatch is not None


def test_count_p_methods_agree():
    box = TruncationBox.for_counts(2, 2, 2, 8)
    for mask in (1, 2, 3):
        assert count_p(mask, 0, 2, box, "brute") == count_p(mask, 0, 2, box, "transfer")


def test_check_weighted_flags_corrupted_table():
    box = SMALL[2]
    e = enumerate_E(2, identity(2), box)
    key = sorted(e)[3]
    e[key] += 1
    rep = check_weighted(2, identity(2), box, e_table=e)
    assert not rep.passed
    assert tuple(rep.mismatch.key) == key
