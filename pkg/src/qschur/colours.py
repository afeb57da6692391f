"""Bitmask colours over r primary colours u_1..u_r and the symmetric-group action.

Colour ``mask`` stands for the product of the u_k whose bit k-1 is set, so the
natural colour order is integer order on masks.  Permutations are image tuples
with 1-based entries: ``sigma[k-1]`` is the image of k.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import total_ordering
from typing import Iterator, Sequence

from .errors import DomainError, UsageError

Perm = tuple[int, ...]


def _check_mask(mask: int, r: int) -> None:
    if not isinstance(mask, int) or not 1 <= mask < (1 << r):
        raise DomainError(f"colour mask must lie in [1, {(1 << r) - 1}] for r={r}, got {mask!r}")


def epsilon(k: int, mask: int, r: int | None = None) -> int:
    """1 if u_k divides colour ``mask``, else 0."""
    if k < 1 or (r is not None and k > r):
        raise DomainError(f"primary colour index {k} out of range")
    return (mask >> (k - 1)) & 1


def w(mask: int) -> int:
    return bin(mask).count("1")


def v(mask: int) -> int:
    """Index of the smallest primary colour in ``mask`` (1-based)."""
    return (mask & -mask).bit_length()


def z(mask: int) -> int:
    """Index of the largest primary colour in ``mask`` (1-based)."""
    return mask.bit_length()


def delta(ci: int, cj: int) -> int:
    return 1 if z(ci) < v(cj) else 0


def permute_mask(sigma: Sequence[int], mask: int) -> int:
    out = 0
    k = 0
    while mask:
        if mask & 1:
            out |= 1 << (sigma[k] - 1)
        mask >>= 1
        k += 1
    return out


@total_ordering
@dataclass(frozen=True)
class Colour:
    mask: int
    r: int

    def __post_init__(self) -> None:
        if not isinstance(self.r, int) or self.r < 1:
            raise UsageError(f"r must be >= 1, got {self.r!r}")
        _check_mask(self.mask, self.r)

    @property
    def w(self) -> int:
        return w(self.mask)

    @property
    def v(self) -> int:
        return v(self.mask)

    @property
    def z(self) -> int:
        return z(self.mask)

    def epsilon(self, k: int) -> int:
        return epsilon(k, self.mask, self.r)

    def primaries(self) -> list[int]:
        return [k for k in range(1, self.r + 1) if (self.mask >> (k - 1)) & 1]

    def __lt__(self, other: "Colour") -> bool:
        if not isinstance(other, Colour):
            return NotImplemented
        _same_r(self, other)
        return self.mask < other.mask

    def __str__(self) -> str:
        return colour_name(self.mask)

    @classmethod
    def parse(cls, text: str, r: int) -> "Colour":
        mask = 0
        for tok in text.replace(" ", "").split("*"):
            if not tok.startswith("u") or not tok[1:].isdigit():
                raise UsageError(f"cannot parse colour {text!r}")
            k = int(tok[1:])
            if not 1 <= k <= r:
                raise DomainError(f"u{k} does not exist for r={r}")
            mask |= 1 << (k - 1)
        return cls(mask, r)


def colour_name(mask: int) -> str:
    return "*".join(f"u{k}" for k in range(1, mask.bit_length() + 1) if (mask >> (k - 1)) & 1)


def _same_r(a: Colour, b: Colour) -> None:
    if a.r != b.r:
        raise UsageError(f"colours over r={a.r} and r={b.r} are not comparable")


def colour_delta(ci: Colour, cj: Colour) -> int:
    _same_r(ci, cj)
    return delta(ci.mask, cj.mask)


def permute_colour(sigma: Sequence[int], c: Colour) -> Colour:
    check_perm(sigma, c.r)
    return Colour(permute_mask(sigma, c.mask), c.r)


def all_colours(r: int) -> list[Colour]:
    return [Colour(m, r) for m in range(1, 1 << r)]


@total_ordering
@dataclass(frozen=True)
class ColouredInteger:
    """``value`` carrying colour ``colour``; ordered by (value, mask)."""

    value: int
    colour: Colour

    def __post_init__(self) -> None:
        if self.value < 0:
            raise DomainError("coloured integers are non-negative")

    def key(self) -> tuple[int, int]:
        return (self.value, self.colour.mask)

    def __lt__(self, other: "ColouredInteger") -> bool:
        if not isinstance(other, ColouredInteger):
            return NotImplemented
        _same_r(self.colour, other.colour)
        return self.key() < other.key()

    def __str__(self) -> str:
        return f"{self.value}_{self.colour}"


# -- permutations ---------------------------------------------------------------

def check_perm(sigma: Sequence[int], r: int) -> Perm:
    sigma = tuple(sigma)
    if sorted(sigma) != list(range(1, r + 1)):
        raise UsageError(f"{sigma} is not a permutation of 1..{r}")
    return sigma


def identity(r: int) -> Perm:
    return tuple(range(1, r + 1))


def reversal(r: int) -> Perm:
    return tuple(range(r, 0, -1))


def compose(sigma: Sequence[int], tau: Sequence[int]) -> Perm:
    """(sigma o tau)(k) = sigma(tau(k))."""
    return tuple(sigma[t - 1] for t in tau)


def inverse(sigma: Sequence[int]) -> Perm:
    inv = [0] * len(sigma)
    for k, s in enumerate(sigma, start=1):
        inv[s - 1] = k
    return tuple(inv)


def all_perms(r: int) -> Iterator[Perm]:
    return itertools.permutations(range(1, r + 1))


def parse_perm(text: str, r: int) -> Perm:
    try:
        sigma = tuple(int(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise UsageError(f"cannot parse permutation {text!r}") from None
    return check_perm(sigma, r)
