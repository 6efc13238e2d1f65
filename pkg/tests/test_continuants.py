import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fareylab import (
    SignedContinuantForm,
    continuant_eval,
    continuant_monomials,
    fibonacci,
    kronecker2,
    nu_k_from_nu2,
)
from fareylab.continuants import monomial_complement_pairs

import oracle


def test_continuant_examples():
    assert continuant_eval([]) == 1
    assert continuant_eval([2, 3]) == 7
    assert continuant_eval([1, 1, 1]) == 3


def test_monomial_examples():
    assert continuant_monomials(1) == ((1,),)
    assert continuant_monomials(2) == ((1, 2), ())
    assert continuant_monomials(3) == ((1, 2, 3), (1,), (3,))


def test_monomial_counts_follow_fibonacci():
    for n in range(12):
        assert len(continuant_monomials(n)) == fibonacci(n)
    assert fibonacci(0) == fibonacci(1) == 1
    assert [fibonacci(n) for n in range(7)] == [1, 1, 2, 3, 5, 8, 13]


def test_monomial_structure():
    for n in range(10):
        for m in continuant_monomials(n):
            assert monomial_complement_pairs(m, n) is not None
    assert monomial_complement_pairs((2,), 3) is None  # complement {1,3} not adjacent


@given(st.lists(st.integers(-9, 9), max_size=12))
@settings(max_examples=200, deadline=None)
def test_monomial_sum_equals_recurrence(args):
    n = len(args)
    total = 0
    for m in continuant_monomials(n):
        prod = 1
        for j in m:
            prod *= args[j - 1]
        total += prod
    assert total == continuant_eval(args)


@given(st.lists(st.integers(-50, 50), max_size=10))
@settings(max_examples=80, deadline=None)
def test_continuant_matches_brute_recursion(args):
    assert continuant_eval(args) == oracle.continuant_brute(args)


@given(st.lists(st.integers(-20, 20), max_size=10))
@settings(max_examples=60, deadline=None)
def test_continuant_symmetry(args):
    assert continuant_eval(args) == continuant_eval(args[::-1])


def test_kronecker_values():
    assert kronecker2(4) == 0
    assert kronecker2(7) == 1
    assert kronecker2(3) == -1
    assert kronecker2(-1) == 1
    assert kronecker2(-3) == -1
    assert kronecker2(0) == 0


@given(st.integers(-500, 500))
def test_kronecker_periodicity(n):
    assert kronecker2(n) == kronecker2(n + 8)


@given(st.integers(-200, 200))
def test_kronecker_sign_collapse(k):
    assert kronecker2(2 * k - 1) * kronecker2(4 * k - 3) == kronecker2(2 * k - 3)
    assert kronecker2(2 * k - 1) == -kronecker2(2 * k - 5)


def test_signed_form_examples():
    assert nu_k_from_nu2(1, []) == 1
    assert nu_k_from_nu2(2, [5]) == 5
    assert nu_k_from_nu2(3, [1, 3]) == 2


def test_signed_form_shape():
    form = SignedContinuantForm(4)
    assert form.sign_prefactor == kronecker2(7) == 1
    assert form.argument_signs == (-1, 1, -1)
    with pytest.raises(ValueError):
        form.evaluate([1, 2])


def test_signed_form_rejects_bad_k():
    with pytest.raises(ValueError):
        SignedContinuantForm(0)


@given(st.integers(1, 25), st.integers(1, 7))
@settings(max_examples=60, deadline=None)
def test_signed_form_reproduces_nu_k(Q, k):
    N = len(oracle.farey_list(Q))
    for i in (1, max(1, N // 2), N):
        nu2s = [oracle.nu(Q, 2, i + j) for j in range(k - 1)]
        assert nu_k_from_nu2(k, nu2s) == oracle.nu(Q, k, i)
