import pytest

from qschur.errors import TruncationError
from qschur.qdiff import (Algebra, Kernel, build_family, calibrate_c_exponent, check_conj_chain, check_eq_r,
                          check_kernel_identities, check_first_order_relations, check_main, check_qbinomial_identities,
                          check_rec, kernel_box, run_pipeline, solve_rec, transform_F)
from qschur.series import TruncationBox, monomial_exponents

BOX1 = TruncationBox(r=1, qmax=12, umax=3, dmax=3, xmax=3)
BOX2 = TruncationBox(r=2, qmax=10, umax=3, dmax=3, xmax=6)


@pytest.fixture(scope="module")
def fam2():
    return build_family(2, BOX2)


def test_family_methods_agree(fam2):
    brute = build_family(2, BOX2, method="brute")
    assert brute.f0 == fam2.f0 and brute.f1 == fam2.f1


def test_box_must_hold_every_part():
    with pytest.raises(TruncationError, match="at least 6"):
        build_family(2, BOX2.with_(xmax=5))


@pytest.mark.parametrize("r,box", [(1, BOX1), (2, BOX2)])
def test_pipeline_passes(r, box):
    res = run_pipeline(r, box)
    assert [rep.check for rep in res.reports if not rep.passed] == []
    assert res.c_exponent == "k(k+1)/2"


def test_main_identity_r1():
    assert check_main(1, BOX1).passed


def test_exponent_calibration_is_decisive(fam2):
    F, _ = transform_F(fam2.f, 2)
    chosen, reps = calibrate_c_exponent(F, 2)
    assert chosen == "k(k+1)/2"
    assert [rep.passed for rep in reps] == [True, False]


def test_recurrence_solution_matches_coefficients(fam2):
    F, A = transform_F(fam2.f, 2)
    kern = Kernel(Algebra(BOX2))
    assert check_rec(A, "rec", kern).passed
    assert solve_rec(kern, "rec_prime", BOX2.xmax) == A


def test_perturbation_is_located(fam2):
    bad = fam2.perturbed(1, monomial_exponents(2, q=4, u={2: 1}, x=1))
    rep = check_eq_r(bad)
    assert not rep.passed
    assert rep.mismatch.key[0] <= 4 + 1
    assert not all(r.passed for r in check_first_order_relations(bad))
    assert not all(r.passed for r in check_conj_chain(bad, 2))
    assert not check_main(2, BOX2, bad).passed


@pytest.mark.parametrize("r", [1, 2, 3, 4])
def test_kernel_identities(r):
    assert all(rep.passed for rep in check_kernel_identities(r))
    assert kernel_box(r).r == r


def test_qbinomial_identities():
    assert all(rep.passed for rep in check_qbinomial_identities(8, 6))
