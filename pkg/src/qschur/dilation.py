"""Modulus-class versions of the coloured identity.

An :class:`Alphabet` is a super-increasing tuple a(1) < ... < a(r) with a
modulus N >= a(1) + ... + a(r).  Colour ``mask`` corresponds to the subset sum
alpha(mask); these sums are distinct and increase with the mask.

Plus side: a weighted part lam of colour j becomes N*lam + alpha(j).
Minus side: it becomes N*(w(j) + lam) - alpha(j).

Dilated sequences are enumerated directly on integers from their own
difference conditions, so comparing them with transported weighted-words
objects is a genuine cross-check.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterator, NamedTuple, Sequence

from .colours import check_perm, identity, permute_mask, reversal, v as v_idx, w as w_mask, z as z_idx
from .errors import AlphabetError, DomainError
from .report import Mismatch, VerificationReport, from_mismatch, table_mismatch
from .series import TruncationBox
from .weighted import Part, enumerate_D, enumerate_E, iter_E


def beta_N(m: int, N: int) -> int:
    """Least positive residue of m mod N, in [1, N]."""
    if m == 0:
        raise DomainError("beta_N(0) is undefined")
    return (m - 1) % N + 1


@dataclass(frozen=True)
class Alphabet:
    N: int
    a: tuple[int, ...]

    def __post_init__(self) -> None:
        a = tuple(int(x) for x in self.a)
        object.__setattr__(self, "a", a)
        if not a:
            raise AlphabetError("alphabet needs at least one element")
        if any(x <= 0 for x in a):
            raise AlphabetError(f"alphabet elements must be positive, got {a}")
        for k in range(1, len(a)):
            if sum(a[:k]) >= a[k]:
                raise AlphabetError(
                    f"super-increasing condition fails at a({k + 1})={a[k]}: "
                    f"a(1)+...+a({k}) = {sum(a[:k])} is not smaller")
        if self.N < sum(a):
            raise AlphabetError(f"modulus N={self.N} is smaller than a(1)+...+a(r) = {sum(a)}")
        sums = [self.alpha(m) for m in range(1, 1 << len(a))]
        if any(x >= y for x, y in zip(sums, sums[1:])):
            raise AlphabetError("subset sums are not strictly increasing in the colour mask")

    @property
    def r(self) -> int:
        return len(self.a)

    def alpha(self, mask: int) -> int:
        return sum(x for i, x in enumerate(self.a) if (mask >> i) & 1)

    @cached_property
    def sums(self) -> tuple[int, ...]:
        """alpha(1) < ... < alpha(2^r - 1)."""
        return tuple(self.alpha(m) for m in range(1, 1 << self.r))

    @cached_property
    def _mask_of(self) -> dict[int, int]:
        return {self.alpha(m): m for m in range(1, 1 << self.r)}

    def mask_of(self, alpha: int) -> int:
        try:
            return self._mask_of[alpha]
        except KeyError:
            raise DomainError(f"{alpha} is not a sum of distinct elements of {self.a}") from None

    def contains(self, alpha: int) -> bool:
        return alpha in self._mask_of

    def w_A(self, alpha: int) -> int:
        return w_mask(self.mask_of(alpha))

    def v_A(self, alpha: int) -> int:
        return self.a[v_idx(self.mask_of(alpha)) - 1]

    def z_A(self, alpha: int) -> int:
        return self.a[z_idx(self.mask_of(alpha)) - 1]

    def __str__(self) -> str:
        return f"N={self.N} A={{{','.join(map(str, self.a))}}}"


def alpha_stats(alph: Alphabet, alpha: int) -> tuple[int, int, int]:
    """(w_A, v_A, z_A) of a subset sum."""
    return alph.w_A(alpha), alph.v_A(alpha), alph.z_A(alpha)


def delta_A(alph: Alphabet, alpha: int, beta: int) -> int:
    return 1 if alph.z_A(alpha) < alph.v_A(beta) else 0


def permute_alpha(alph: Alphabet, sigma: Sequence[int], alpha: int) -> int:
    return alph.alpha(permute_mask(sigma, alph.mask_of(alpha)))


class DilatedPart(NamedTuple):
    value: int
    overlined: bool


def dilate_plus(alph: Alphabet, p: Part) -> DilatedPart:
    return DilatedPart(alph.N * p.value + alph.alpha(p.mask), p.overlined)


def dilate_minus(alph: Alphabet, p: Part) -> DilatedPart:
    return DilatedPart(alph.N * (w_mask(p.mask) + p.value) - alph.alpha(p.mask), p.overlined)


def plus_class(alph: Alphabet, value: int) -> int:
    return beta_N(value, alph.N)


def minus_class(alph: Alphabet, value: int) -> int:
    return beta_N(-value, alph.N)


# -- difference conditions ------------------------------------------------------
# Each gap function takes the classes (subset sums) of the upper and lower part
# and the lower part's overline flag, and returns the smallest allowed
# upper - lower.

GapFn = Callable[[int, int, bool], int]


def plus_gap(alph: Alphabet, sigma: Sequence[int]) -> GapFn:
    N = alph.N

    def g(bi: int, bj: int, ov: bool) -> int:
        d = delta_A(alph, permute_alpha(alph, sigma, bi), permute_alpha(alph, sigma, bj))
        return N * (alph.w_A(bj) - 1 + ov + d) + bi - bj
    return g


def minus_gap(alph: Alphabet, sigma: Sequence[int]) -> GapFn:
    N = alph.N

    def g(bi: int, bj: int, ov: bool) -> int:
        d = delta_A(alph, permute_alpha(alph, sigma, bi), permute_alpha(alph, sigma, bj))
        return N * (alph.w_A(bi) - 1 + ov + d) + bj - bi
    return g


def plus_gap_unrefined(alph: Alphabet) -> GapFn:
    """Condition with v_A(lower class) in place of the colour comparison."""
    N = alph.N

    def g(bi: int, bj: int, ov: bool) -> int:
        return N * (alph.w_A(bj) - 1 + ov) + alph.v_A(bj) - bj
    return g


def minus_gap_unrefined(alph: Alphabet) -> GapFn:
    N = alph.N

    def g(bi: int, bj: int, ov: bool) -> int:
        return N * (alph.w_A(bi) - 1 + ov) + alph.v_A(bi) - bi
    return g


def minus_final_ok(alph: Alphabet) -> Callable[[int, int], bool]:
    return lambda beta, value: value >= alph.N * alph.w_A(beta) - beta


def minus_final_ok_unrefined(alph: Alphabet) -> Callable[[int, int], bool]:
    return lambda beta, value: value >= alph.N * (alph.w_A(beta) - 1)


# -- enumeration ----------------------------------------------------------------

def _first_value(cls: int, N: int, side: str) -> int:
    """Smallest positive integer in the residue class of ``cls`` (plus) or ``-cls`` (minus)."""
    return beta_N(cls, N) if side == "plus" else beta_N(-cls, N)


def iter_dilated_sequences(alph: Alphabet, side: str, gap: GapFn, box: TruncationBox,
                           final_ok: Callable[[int, int], bool] | None = None
                           ) -> Iterator[tuple[DilatedPart, ...]]:
    """Sequences of positive parts in the A'_N (plus) or -A'_N (minus) classes.

    Consecutive parts must satisfy ``upper - lower >= gap(cls_upper, cls_lower, lower_overlined)``;
    ``final_ok(cls, value)`` filters the last part.  The empty sequence is included.
    """
    N, r = alph.N, alph.r
    umax, dmax, nmax = box.umax, box.dmax, box.qmax
    classes = list(alph.sums)
    bits = {c: [(alph.mask_of(c) >> i) & 1 for i in range(r)] for c in classes}
    start = {c: _first_value(c, N, side) for c in classes}
    cls_of = plus_class if side == "plus" else minus_class
    gaps = {(bi, bj, ov): gap(bi, bj, ov) for bi in classes for bj in classes for ov in (True, False)}

    seq: list[DilatedPart] = []
    ells = [0] * r

    def rec(prev_cls: int | None, prev_val: int, n_left: int, k: int):
        if not seq or final_ok is None or final_ok(prev_cls, prev_val):
            yield tuple(seq)
        for c in classes:
            b = bits[c]
            if any(ells[i] + b[i] > umax[i] for i in range(r)):
                continue
            for ov in (True, False):
                if not ov and k >= dmax:
                    continue
                top = n_left if prev_cls is None else min(n_left, prev_val - gaps[(prev_cls, c, ov)])
                for value in range(start[c], top + 1, N):
                    for i in range(r):
                        ells[i] += b[i]
                    seq.append(DilatedPart(value, ov))
                    yield from rec(c, value, n_left - value, k + (0 if ov else 1))
                    seq.pop()
                    for i in range(r):
                        ells[i] -= b[i]

    assert all(cls_of(alph, start[c]) == c for c in classes)
    yield from rec(None, 0, nmax, 0)


def dilated_stats(alph: Alphabet, side: str, parts: Sequence[DilatedPart]):
    cls_of = plus_class if side == "plus" else minus_class
    ells = [0] * alph.r
    k = n = 0
    for p in parts:
        mask = alph.mask_of(cls_of(alph, p.value))
        for i in range(alph.r):
            ells[i] += (mask >> i) & 1
        k += 0 if p.overlined else 1
        n += p.value
    return tuple(ells), k, n


def _tabulate_dilated(alph: Alphabet, side: str, seqs) -> dict:
    t: Counter = Counter()
    for parts in seqs:
        ells, k, n = dilated_stats(alph, side, parts)
        t[(*ells, k, n)] += 1
    return dict(t)


def _class_objects(values: Sequence[int], umax: int, dmax: int, nmax: int):
    for n_plain in range(0, min(umax, dmax) + 1):
        for plain in itertools.combinations_with_replacement(values, n_plain):
            sp = sum(plain)
            if sp > nmax:
                continue
            for n_over in range(0, umax - n_plain + 1):
                for over in itertools.combinations(values, n_over):
                    if sp + sum(over) <= nmax:
                        yield over, plain


def enumerate_single_classes(alph: Alphabet, side: str, box: TruncationBox) -> dict:
    """D (plus) or F (minus): overpartitions into parts from the r single classes +-a(i) mod N."""
    N, r = alph.N, alph.r
    umax, dmax, nmax = box.umax, box.dmax, box.qmax
    per = []
    for i in range(r):
        first = _first_value(alph.a[i], N, side)
        values = list(range(first, nmax + 1, N))
        t: Counter = Counter()
        for over, plain in _class_objects(values, umax[i], dmax, nmax):
            t[(len(over) + len(plain), len(plain), sum(over) + sum(plain))] += 1
        per.append(t)
    acc: dict = {((), 0, 0): 1}
    for t in per:
        nxt: Counter = Counter()
        for (ells, k, n), c in acc.items():
            for (l, kk, nn), cc in t.items():
                if k + kk <= dmax and n + nn <= nmax:
                    nxt[(ells + (l,), k + kk, n + nn)] += c * cc
        acc = nxt
    return {(*ells, k, n): c for (ells, k, n), c in acc.items()}


def enumerate_sequences(alph: Alphabet, side: str, sigma: Sequence[int], box: TruncationBox) -> dict:
    """E^sigma (plus) or G^sigma (minus) table."""
    sigma = check_perm(sigma, alph.r)
    if side == "plus":
        seqs = iter_dilated_sequences(alph, side, plus_gap(alph, sigma), box)
    elif side == "minus":
        seqs = iter_dilated_sequences(alph, side, minus_gap(alph, sigma), box, minus_final_ok(alph))
    else:
        raise DomainError(f"side must be plus or minus, got {side!r}")
    return _tabulate_dilated(alph, side, seqs)


def enumerate_unrefined(alph: Alphabet, side: str, box: TruncationBox) -> dict:
    """Sequences under the conditions phrased with v_A rather than a colour comparison."""
    if side == "plus":
        seqs = iter_dilated_sequences(alph, side, plus_gap_unrefined(alph), box)
    else:
        seqs = iter_dilated_sequences(alph, side, minus_gap_unrefined(alph), box,
                                      minus_final_ok_unrefined(alph))
    return _tabulate_dilated(alph, side, seqs)


def enumerate_dilated(alph: Alphabet, sigma: Sequence[int] | None, box: TruncationBox) -> dict[str, dict]:
    """The four tables D, E (plus side) and F, G (minus side) for one permutation."""
    sigma = identity(alph.r) if sigma is None else sigma
    return {
        "D": enumerate_single_classes(alph, "plus", box),
        "E": enumerate_sequences(alph, "plus", sigma, box),
        "F": enumerate_single_classes(alph, "minus", box),
        "G": enumerate_sequences(alph, "minus", sigma, box),
    }


def k_slice(table: dict, k: int = 0) -> dict:
    """Keys with exactly k non-overlined parts (k is the second-to-last key entry)."""
    return {key: c for key, c in table.items() if key[-2] == k}


def n_marginal(table: dict) -> dict[int, int]:
    out: Counter = Counter()
    for key, c in table.items():
        out[key[-1]] += c
    return dict(out)


# -- checks ---------------------------------------------------------------------

def _box_params(alph: Alphabet, sigma, box: TruncationBox) -> dict:
    return {"N": alph.N, "a": list(alph.a), "sigma": list(sigma), "nmax": box.qmax,
            "umax": list(box.umax), "dmax": box.dmax}


def check_dilated(alph: Alphabet, sigma: Sequence[int], box: TruncationBox,
                  tables: dict[str, dict] | None = None) -> list[VerificationReport]:
    sigma = check_perm(sigma, alph.r)
    t = tables if tables is not None else enumerate_dilated(alph, sigma, box)
    params = _box_params(alph, sigma, box)
    return [
        from_mismatch("dilated plus side D = E", table_mismatch(t["D"], t["E"]), params, box),
        from_mismatch("dilated minus side F = G", table_mismatch(t["F"], t["G"]), params, box),
    ]


def check_unrefined(alph: Alphabet, box: TruncationBox, tables: dict[str, dict] | None = None
                    ) -> list[VerificationReport]:
    """Unrefined conditions agree with the refined ones (identity on plus, reversal on minus)."""
    r = alph.r
    if tables is None:
        tables = {"E": enumerate_sequences(alph, "plus", identity(r), box),
                  "G": enumerate_sequences(alph, "minus", reversal(r), box)}
    e_un = enumerate_unrefined(alph, "plus", box)
    g_un = enumerate_unrefined(alph, "minus", box)
    params = {"N": alph.N, "a": list(alph.a), "nmax": box.qmax}
    return [
        from_mismatch("plus side, v_A condition = refined condition", table_mismatch(e_un, tables["E"]),
                      params, box),
        from_mismatch("minus side, v_A condition = refined condition", table_mismatch(g_un, tables["G"]),
                      params, box),
    ]


def check_k0_slices(alph: Alphabet, box: TruncationBox) -> list[VerificationReport]:
    """All-overlined slice of the unrefined identities (distinct parts)."""
    b = box.with_(dmax=0)
    d = enumerate_single_classes(alph, "plus", b)
    f = enumerate_single_classes(alph, "minus", b)
    e = enumerate_unrefined(alph, "plus", b)
    g = enumerate_unrefined(alph, "minus", b)
    params = {"N": alph.N, "a": list(alph.a), "nmax": box.qmax, "k": 0}
    return [
        from_mismatch("k=0 slice, plus side", table_mismatch(n_marginal(d), n_marginal(e)), params, b),
        from_mismatch("k=0 slice, minus side", table_mismatch(n_marginal(f), n_marginal(g)), params, b),
    ]


def check_subset_sum_comparison(alph: Alphabet) -> VerificationReport:
    """v_A(alpha) > beta  iff  v_A(alpha) > z_A(beta), over all pairs of subset sums."""
    pairs = 0
    for x in alph.sums:
        for y in alph.sums:
            pairs += 1
            lhs = alph.v_A(x) > y
            rhs = alph.v_A(x) > alph.z_A(y)
            if lhs != rhs:
                return from_mismatch("subset-sum comparison", Mismatch([x, y], lhs, rhs),
                                     {"N": alph.N, "a": list(alph.a)})
    return from_mismatch("subset-sum comparison", None, {"N": alph.N, "a": list(alph.a), "pairs": pairs})


def _rekey(table: dict, r: int, f: Callable[[tuple, int], int], nmax: int) -> dict:
    out: Counter = Counter()
    for key, c in table.items():
        ells, k, n = key[:r], key[r], key[r + 1]
        n2 = f(ells, n)
        if n2 <= nmax:
            out[(*ells, k, n2)] += c
    return dict(out)


def transport_maps(alph: Alphabet) -> dict[str, Callable[[tuple, int], int]]:
    N, a = alph.N, alph.a
    return {
        "plus": lambda ells, n: N * n + sum(l * x for l, x in zip(ells, a)),
        "minus": lambda ells, n: N * (n + sum(ells)) - sum(l * x for l, x in zip(ells, a)),
    }


def weighted_box_for(alph: Alphabet, box: TruncationBox) -> TruncationBox:
    """Weighted-words bounds whose images cover every dilated key up to box.qmax."""
    return TruncationBox(r=alph.r, qmax=box.qmax // alph.N, umax=box.umax, dmax=box.dmax, xmax=0)


def check_transport_tables(alph: Alphabet, sigma: Sequence[int], box: TruncationBox,
                           tables: dict[str, dict] | None = None) -> list[VerificationReport]:
    """Dilated tables equal weighted-words tables re-keyed by the dilation maps."""
    sigma = check_perm(sigma, alph.r)
    t = tables if tables is not None else enumerate_dilated(alph, sigma, box)
    wb = weighted_box_for(alph, box)
    wd = enumerate_D(alph.r, wb)
    we = enumerate_E(alph.r, sigma, wb)
    maps = transport_maps(alph)
    params = _box_params(alph, sigma, box)
    out = []
    for name, side, wt in (("D", "plus", wd), ("E", "plus", we), ("F", "minus", wd), ("G", "minus", we)):
        moved = _rekey(wt, alph.r, maps[side], box.qmax)
        notes = []
        if side == "minus" and alph.r == 1 and alph.a[0] == alph.N:
            notes.append("a(1) = N sends the weighted part 0 to the non-positive value 0, "
                         "so re-keyed minus-side tables are not expected to match")
        out.append(from_mismatch(f"transport of {name} table ({side} dilation)",
                                 table_mismatch(moved, t[name]), params, box, notes=notes))
    return out


def check_transport_sequences(alph: Alphabet, sigma: Sequence[int], box: TruncationBox
                              ) -> list[VerificationReport]:
    """Dilating every valid weighted sequence gives exactly the valid dilated sequences."""
    sigma = check_perm(sigma, alph.r)
    wb = weighted_box_for(alph, box)
    weighted = list(iter_E(alph.r, sigma, wb))
    params = _box_params(alph, sigma, box)
    out = []
    for side, dil, gapf, fin in (
            ("plus", dilate_plus, plus_gap(alph, sigma), None),
            ("minus", dilate_minus, minus_gap(alph, sigma), minus_final_ok(alph))):
        images = {tuple(dil(alph, p) for p in seq) for seq in weighted}
        images = {s for s in images if sum(p.value for p in s) <= box.qmax}
        direct = set(iter_dilated_sequences(alph, side, gapf, box, fin))
        mm = None
        if images != direct:
            extra = sorted(direct - images)
            missing = sorted(images - direct)
            key = extra[0] if extra else missing[0]
            mm = Mismatch([[p.value, p.overlined] for p in key],
                          "direct" if extra else "absent", "absent" if extra else "transported")
        out.append(from_mismatch(f"{side} dilation is a bijection on sequences", mm,
                                 {**params, "sequences": len(direct)}, box))
    return out


def check_final_part_equivalence(alph: Alphabet) -> VerificationReport:
    """On -A'_N, lam >= N w_A - beta  iff  lam >= N (w_A - 1), for values up to 5N."""
    for value in range(1, 5 * alph.N + 1):
        beta = minus_class(alph, value)
        if not alph.contains(beta):
            continue
        lhs = minus_final_ok(alph)(beta, value)
        rhs = minus_final_ok_unrefined(alph)(beta, value)
        if lhs != rhs:
            return from_mismatch("final-part bound equivalence", Mismatch([value], lhs, rhs),
                                 {"N": alph.N, "a": list(alph.a)})
    return from_mismatch("final-part bound equivalence", None, {"N": alph.N, "a": list(alph.a)})


# -- minimal differences ------------------------------------------------------------

def _residue_class(alph: Alphabet, side: str, x: int) -> int:
    beta = beta_N(x, alph.N) if side == "plus" else beta_N(-x, alph.N)
    if not alph.contains(beta):
        sign = "" if side == "plus" else "-"
        raise DomainError(f"residue {x} mod {alph.N} is not in {sign}A'_N for {alph}")
    return beta


def minimal_difference(alph: Alphabet, sigma: Sequence[int], side: str, x: int, y: int, chi: int) -> int:
    """Smallest allowed lam_i - lam_{i+1} for lam_i = x and lam_{i+1} = y mod N.

    On the minus side x and y are the (negative) residues -alpha, as in the
    usual matrix labelling.
    """
    sigma = check_perm(sigma, alph.r)
    bi, bj = _residue_class(alph, side, x), _residue_class(alph, side, y)
    g = plus_gap(alph, sigma) if side == "plus" else minus_gap(alph, sigma)
    return g(bi, bj, bool(chi))


def reference_matrix(kind: str, N: int, x: int, y: int, chi: int) -> int:
    """Tabulated minimal differences for r = 2, A = {1, 2}.

    ``kind="plus"`` is the transposed-permutation plus-side matrix with rows
    and columns 1, 2, 3; ``kind="minus"`` is the identity minus-side matrix
    indexed by -1, -2, -3.
    """
    c = chi
    plus = {
        (1, 1): N * c, (1, 2): N * c - 1, (1, 3): N * (c + 1) - 2,
        (2, 1): N * (c + 1) + 1, (2, 2): N * c, (2, 3): N * (c + 1) - 1,
        (3, 1): N * c + 2, (3, 2): N * c + 1, (3, 3): N * (c + 1),
    }
    minus = {
        (-1, -1): N * c, (-1, -2): N * (c + 1) + 1, (-1, -3): N * c + 2,
        (-2, -1): N * c - 1, (-2, -2): N * c, (-2, -3): N * c + 1,
        (-3, -1): N * (c + 1) - 2, (-3, -2): N * (c + 1) - 1, (-3, -3): N * (c + 1),
    }
    table = plus if kind == "plus" else minus
    return table[(x, y)]


def check_matrices(Ns: Sequence[int] = (3, 4, 5)) -> VerificationReport:
    entries = 0
    for N in Ns:
        alph = Alphabet(N, (1, 2))
        for chi in (0, 1):
            for x in (1, 2, 3):
                for y in (1, 2, 3):
                    for kind, sigma, side, xx, yy in (("plus", (2, 1), "plus", x, y),
                                                      ("minus", (1, 2), "minus", -x, -y)):
                        got = minimal_difference(alph, sigma, side, xx, yy, chi)
                        want = reference_matrix(kind, N, xx, yy, chi)
                        entries += 1
                        if got != want:
                            return from_mismatch("minimal-difference matrices",
                                                 Mismatch([kind, N, chi, xx, yy], got, want), {"N": list(Ns)})
    return from_mismatch("minimal-difference matrices", None, {"N": list(Ns), "entries": entries})


def effective_gap(bound: int, x: int, y: int, N: int) -> int:
    """Smallest d >= bound with d = x - y mod N (the difference of two parts in those classes)."""
    return bound + ((x - y - bound) % N)


COMPANION_NOTE = ("the mod 3 companion table lists the case lam_{i+1} = 2 mod 3 twice; "
                  "the entry 3chi+1 is read as the case lam_{i+1} = 0 mod 3")


def companion_bound(x: int, y: int, chi: int) -> int:
    """Mod-3 companion bound, with the duplicated case read as lam_{i+1} = 0 mod 3."""
    if y == 1:
        return 3 * chi + (4 if x == 2 else 0)
    if y == 2:
        return 3 * chi - 1
    return 3 * chi + 1


def check_companion() -> VerificationReport:
    """The mod-3 companion conditions give the same effective gaps as both N=3 matrices."""
    for chi in (0, 1):
        for x in (1, 2, 3):
            for y in (1, 2, 3):
                comp = effective_gap(companion_bound(x, y, chi), x, y, 3)
                plus = effective_gap(reference_matrix("plus", 3, x, y, chi), x, y, 3)
                minus = effective_gap(reference_matrix("minus", 3, -((-x) % 3 or 3), -((-y) % 3 or 3), chi),
                                      x, y, 3)
                if not comp == plus == minus:
                    return from_mismatch("mod 3 companion conditions",
                                         Mismatch([chi, x, y], comp, [plus, minus]), {"N": 3},
                                         notes=[COMPANION_NOTE])
    return from_mismatch("mod 3 companion conditions", None, {"N": 3}, notes=[COMPANION_NOTE])


# -- classical specialisation ---------------------------------------------------------

def _distinct_partitions(n: int, largest: int | None = None) -> Iterator[tuple[int, ...]]:
    if n == 0:
        yield ()
        return
    top = n if largest is None else min(n, largest - 1)
    for first in range(top, 0, -1):
        for rest in _distinct_partitions(n - first, first):
            yield (first,) + rest


def schur_A(n: int) -> int:
    """Partitions of n into distinct parts congruent to 1 or 2 mod 3."""
    return sum(1 for p in _distinct_partitions(n) if all(x % 3 for x in p))


def schur_B(n: int) -> int:
    """Partitions of n with gaps >= 3 and no two consecutive multiples of 3 both present."""
    count = 0
    for p in _distinct_partitions(n):
        if any(a - b < 3 for a, b in zip(p, p[1:])):
            continue
        s = set(p)
        if any(x % 3 == 0 and x + 3 in s for x in p):
            continue
        count += 1
    return count


def check_schur(nmax: int = 30) -> list[VerificationReport]:
    """Direct counts against the all-overlined slice of the N=3, A={1,2} tables."""
    alph = Alphabet(3, (1, 2))
    box = TruncationBox(r=2, qmax=nmax, umax=nmax, dmax=0)
    d = n_marginal(enumerate_single_classes(alph, "plus", box))
    e = n_marginal(enumerate_sequences(alph, "plus", identity(2), box))
    a = {n: schur_A(n) for n in range(nmax + 1)}
    b = {n: schur_B(n) for n in range(nmax + 1)}
    params = {"nmax": nmax}
    return [
        from_mismatch("direct A(n) = direct B(n)", table_mismatch(a, b), params),
        from_mismatch("direct A(n) = single-class count", table_mismatch(a, d), params),
        from_mismatch("direct B(n) = sequence count", table_mismatch(b, e), params),
    ]
