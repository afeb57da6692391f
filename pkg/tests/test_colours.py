import itertools

import pytest

from qschur.colours import (Colour, all_perms, compose, delta, identity, inverse, parse_perm, permute_mask, v, w, z)
from qschur.errors import DomainError, UsageError


@pytest.mark.parametrize("r", [1, 2, 3, 4, 5])
def test_permutation_action_is_functorial(r):
    perms = list(all_perms(r))
    if r == 5:
        perms = perms[::7]
    masks = range(1, 1 << r)
    for mask in masks:
        assert permute_mask(identity(r), mask) == mask
    for s, t in itertools.product(perms, repeat=2):
        st = compose(s, t)
        for mask in masks:
            assert permute_mask(st, mask) == permute_mask(s, permute_mask(t, mask))
            assert w(permute_mask(s, mask)) == w(mask)
    for s in perms:
        for mask in masks:
            assert permute_mask(inverse(s), permute_mask(s, mask)) == mask


def test_mask_statistics():
    assert (w(0b1011), v(0b1010), z(0b1010)) == (3, 2, 4)
    assert delta(0b0011, 0b0100) == 1
    assert delta(0b0101, 0b0010) == 0
    assert delta(0b0001, 0b0001) == 0


def test_colour_order_and_names():
    cs = [Colour(m, 3) for m in range(1, 8)]
    assert sorted(cs, reverse=True)[0].mask == 7
    assert str(Colour(0b101, 3)) == "u1*u3"
    assert Colour.parse("u1*u3", 3) == Colour(5, 3)
    with pytest.raises(DomainError):
        Colour.parse("u4", 3)
    with pytest.raises(DomainError):
        Colour(0, 3)


def test_parse_perm():
    assert parse_perm("2,1", 2) == (2, 1)
    with pytest.raises(UsageError):
        parse_perm("1,1", 2)
