"""Both sides of the coloured overpartition identity at the undilated level.

D side: per primary colour u_i, an overlined set of distinct non-negative
values plus an arbitrary multiset of non-overlined values.

E side: sequences of coloured parts, largest first, where consecutive parts
satisfy  lam_i - lam_{i+1} >= w(c_{i+1}) + chi_{i+1} - 1 + delta(s c_i, s c_{i+1})
for a fixed permutation s of the primary colours.

Count tables are dicts keyed ``(l_1, ..., l_r, k, n)`` or, with part counts,
``(l_1, ..., l_r, k, m, n)``.  ``l_i`` counts parts whose colour contains
u_i, ``k`` counts non-overlined parts, ``m`` counts parts.
"""

from __future__ import annotations

import itertools
from collections import Counter, defaultdict
from typing import Iterator, NamedTuple, Sequence

from .colours import check_perm, colour_name, delta, identity, permute_mask, w
from .errors import UsageError
from .report import Mismatch, VerificationReport, from_mismatch, table_mismatch
from .series import MultiSeries, TruncationBox

CountTable = dict


class Part(NamedTuple):
    value: int
    mask: int
    overlined: bool

    @property
    def chi(self) -> int:
        return 1 if self.overlined else 0

    def __str__(self) -> str:
        return f"{self.value}({colour_name(self.mask)},{'o' if self.overlined else '-'})"


def gap(upper: Part, lower: Part, sigma: Sequence[int]) -> int:
    """Smallest allowed ``upper.value - lower.value`` for consecutive parts."""
    return (w(lower.mask) + lower.chi - 1
            + delta(permute_mask(sigma, upper.mask), permute_mask(sigma, lower.mask)))


def format_parts(parts: Sequence[Part]) -> str:
    return " ".join(str(p) for p in parts) if parts else "(empty)"


def stats(parts: Sequence[Part], r: int) -> tuple[tuple[int, ...], int, int, int]:
    """(l, k, m, n) for a list of parts."""
    ells = [0] * r
    k = n = 0
    for p in parts:
        for i in range(r):
            if (p.mask >> i) & 1:
                ells[i] += 1
        if not p.overlined:
            k += 1
        n += p.value
    return tuple(ells), k, len(parts), n


def table_key(ells, k, m, n, with_m: bool) -> tuple:
    return (*ells, k, m, n) if with_m else (*ells, k, n)


def _bounds(box: TruncationBox) -> tuple[tuple[int, ...], int, int]:
    return box.umax, box.dmax, box.qmax


# -- E side: brute force --------------------------------------------------------

def is_valid_E(parts: Sequence[Part], sigma: Sequence[int]) -> bool:
    if any(p.value < 0 for p in parts):
        return False
    return all(a.value - b.value >= gap(a, b, sigma) for a, b in zip(parts, parts[1:]))


def iter_E(r: int, sigma: Sequence[int], box: TruncationBox) -> Iterator[tuple[Part, ...]]:
    """Every valid E-side sequence (including the empty one) inside the bounds."""
    sigma = check_perm(sigma, r)
    umax, dmax, qmax = _bounds(box)
    kinds = [(mask, ov) for mask in range(1, 1 << r) for ov in (True, False)]
    bits = {mask: [(mask >> i) & 1 for i in range(r)] for mask in range(1, 1 << r)}

    seq: list[Part] = []
    ells = [0] * r

    def rec(prev: Part | None, n_left: int, k: int):
        yield tuple(seq)
        top = n_left if prev is None else min(prev.value, n_left)
        for value in range(top, -1, -1):
            for mask, ov in kinds:
                if not ov and k >= dmax:
                    continue
                b = bits[mask]
                if any(ells[i] + b[i] > umax[i] for i in range(r)):
                    continue
                p = Part(value, mask, ov)
                if prev is not None and prev.value - value < gap(prev, p, sigma):
                    continue
                for i in range(r):
                    ells[i] += b[i]
                seq.append(p)
                yield from rec(p, n_left - value, k + (0 if ov else 1))
                seq.pop()
                for i in range(r):
                    ells[i] -= b[i]

    yield from rec(None, qmax, 0)


def _tabulate(objects, r: int, with_m: bool) -> CountTable:
    table: Counter = Counter()
    for parts in objects:
        ells, k, m, n = stats(parts, r)
        table[table_key(ells, k, m, n, with_m)] += 1
    return dict(table)


# -- E side: transfer-matrix counting --------------------------------------------

class ESideSeries:
    """Generating functions of E-side sequences, organised by their smallest part.

    ``H[(v, mask, ov)]`` is the series of valid sequences whose last part is
    that part.  The part above a last part ``p`` must be at least
    ``v + base(p)`` with ``base = w + chi - 1``, and may equal it only when
    delta(sigma(c_above), sigma(c_p)) = 0.  Values are processed from the top
    down; within one value the non-overlined primary colours (base 0) come
    last, in decreasing order of their image under sigma, since each can sit
    under itself and under primaries with a larger image.
    """

    def __init__(self, r: int, sigma: Sequence[int], box: TruncationBox, track_m: bool = True):
        if box.r != r:
            raise UsageError(f"box has r={box.r}, expected {r}")
        self.r = r
        self.sigma = check_perm(sigma, r)
        self.box = box
        self.track_m = track_m
        self.layer: dict[tuple[int, int], MultiSeries] = {}
        self._suffix: dict[int, MultiSeries] = {}
        self._build()

    def _mono(self, value: int, mask: int, ov: bool) -> tuple[int, ...]:
        us = [(mask >> i) & 1 for i in range(self.r)]
        return (value, *us, 0 if ov else 1, 1 if self.track_m else 0)

    def suffix(self, t: int) -> MultiSeries:
        """Sum of H over all parts with value >= t."""
        if t > self.box.qmax:
            return MultiSeries.zero(self.box)
        return self._suffix[t]

    def _build(self) -> None:
        r, box, sigma = self.r, self.box, self.sigma
        zero = MultiSeries.zero(box)
        pm = [0] + [permute_mask(sigma, c) for c in range(1, 1 << r)]
        masks = range(1, 1 << r)
        # colours allowed at the same value directly above a part of colour c
        same_ok = {c: [a for a in masks if not delta(pm[a], pm[c])] for c in masks}
        layer = self.layer

        def above(v: int, base: int, c: int, exclude: int = 0) -> MultiSeries:
            acc = self.suffix(v + base + 1)
            t = v + base
            if t <= box.qmax:
                for a in same_ok[c]:
                    if a != exclude and (t, a) in layer:
                        acc = acc + layer[(t, a)]
            return acc

        primaries = sorted(range(1, r + 1), key=lambda k: -sigma[k - 1])
        for v in range(box.qmax, -1, -1):
            cur: dict[int, MultiSeries] = {}
            for c in masks:
                for ov in (True, False):
                    base = w(c) + (1 if ov else 0) - 1
                    if base == 0:
                        continue
                    h = (1 + above(v, base, c)).shift(self._mono(v, c, ov))
                    cur[c] = cur.get(c, zero) + h
            for c in cur:
                layer[(v, c)] = cur[c]
            for k in primaries:
                c = 1 << (k - 1)
                e = self._mono(v, c, False)
                # the overlined copy of c may sit directly above; the plain copy is the loop
                step = (1 + above(v, 0, c, exclude=c) + cur.get(c, zero)).shift(e)
                h = step
                while step:
                    step = step.shift(e)
                    h = h + step
                layer[(v, c)] = layer.get((v, c), zero) + h
            total = self.suffix(v + 1)
            for c in masks:
                if (v, c) in layer:
                    total = total + layer[(v, c)]
            self._suffix[v] = total

    def total(self) -> MultiSeries:
        """Series of all valid sequences, the empty one included."""
        return 1 + self.suffix(0)

    def at_least(self, value: int, mask: int) -> MultiSeries:
        """Sequences whose smallest part is >= value_mask in the coloured order (or empty)."""
        acc = 1 + self.suffix(value + 1)
        for c in range(mask, 1 << self.r):
            if (value, c) in self.layer:
                acc = acc + self.layer[(value, c)]
        return acc


def table_from_series(s: MultiSeries, with_m: bool) -> CountTable:
    r = s.box.r
    out: dict = {}
    for e, c in s.items():
        key = table_key(e[1:r + 1], e[r + 1], e[r + 2], e[0], with_m)
        out[key] = out.get(key, 0) + c
    return out


def series_from_table(table: CountTable, box: TruncationBox, with_m: bool) -> MultiSeries:
    r = box.r
    terms = {}
    for key, c in table.items():
        ells = key[:r]
        if with_m:
            k, m, n = key[r:]
        else:
            (k, n), m = key[r:], 0
        terms[(n, *ells, k, m)] = c
    return MultiSeries(box, terms)


def enumerate_E(r: int, sigma: Sequence[int] | None, box: TruncationBox, with_m: bool = False,
                method: str = "transfer") -> CountTable:
    """E-side counts; ``method`` is "transfer" (series recursion) or "brute" (explicit DFS)."""
    sigma = identity(r) if sigma is None else check_perm(sigma, r)
    if method == "brute":
        return _tabulate(iter_E(r, sigma, box), r, with_m)
    if method != "transfer":
        raise UsageError(f"unknown method {method!r}")
    b = box if with_m else box.with_(xmax=0)
    if with_m and box.xmax < sum(box.umax):
        b = box.with_(xmax=sum(box.umax))
    return table_from_series(ESideSeries(r, sigma, b, track_m=with_m).total(), with_m)


# -- D side -------------------------------------------------------------------

def _single_colour_objects(umax: int, dmax: int, qmax: int):
    """(overlined values, plain values) pairs for one primary colour."""
    for n_plain in range(0, min(umax, dmax) + 1):
        for plain in itertools.combinations_with_replacement(range(qmax + 1), n_plain):
            s_plain = sum(plain)
            if s_plain > qmax:
                continue
            for n_over in range(0, umax - n_plain + 1):
                for over in itertools.combinations(range(qmax + 1), n_over):
                    if s_plain + sum(over) <= qmax:
                        yield over, plain


def iter_D(r: int, box: TruncationBox) -> Iterator[tuple[Part, ...]]:
    """Every D-side object inside the bounds, as a list of parts (largest first)."""
    umax, dmax, qmax = _bounds(box)
    per = [list(_single_colour_objects(umax[i], dmax, qmax)) for i in range(r)]
    for combo in itertools.product(*per):
        if sum(len(pl) for _, pl in combo) > dmax:
            continue
        if sum(sum(o) + sum(pl) for o, pl in combo) > qmax:
            continue
        parts = []
        for i, (over, plain) in enumerate(combo):
            parts += [Part(v, 1 << i, True) for v in over]
            parts += [Part(v, 1 << i, False) for v in plain]
        parts.sort(key=lambda p: (p.value, p.mask, not p.overlined), reverse=True)
        yield tuple(parts)


def enumerate_D(r: int, box: TruncationBox, with_m: bool = False) -> CountTable:
    """D-side counts, built per primary colour and convolved."""
    umax, dmax, qmax = _bounds(box)
    tables = []
    for i in range(r):
        t: Counter = Counter()
        for over, plain in _single_colour_objects(umax[i], dmax, qmax):
            t[(len(over) + len(plain), len(plain), sum(over) + sum(plain))] += 1
        tables.append(t)
    acc: dict = {((), 0, 0): 1}
    for t in tables:
        nxt: Counter = Counter()
        for (ells, k, n), c in acc.items():
            for (l, kk, nn), cc in t.items():
                if k + kk <= dmax and n + nn <= qmax:
                    nxt[(ells + (l,), k + kk, n + nn)] += c * cc
        acc = nxt
    out = {}
    for (ells, k, n), c in acc.items():
        out[table_key(ells, k, sum(ells), n, with_m)] = c
    return out


# -- plain overpartitions ---------------------------------------------------------

def _partitions(n: int, largest: int | None = None) -> Iterator[tuple[int, ...]]:
    if n == 0:
        yield ()
        return
    top = n if largest is None else min(n, largest)
    for first in range(top, 0, -1):
        for rest in _partitions(n - first, first):
            yield (first,) + rest


def overpartitions(n: int) -> list[tuple[tuple[int, bool], ...]]:
    """All overpartitions of n as ((part, overlined), ...), largest part first.

    Only the first occurrence of a part size may carry the overline.
    """
    out = []
    for p in _partitions(n):
        sizes = sorted(set(p), reverse=True)
        for flags in itertools.product((False, True), repeat=len(sizes)):
            over = dict(zip(sizes, flags))
            parts, seen = [], set()
            for v in p:
                first = v not in seen
                seen.add(v)
                parts.append((v, over[v] and first))
            out.append(tuple(parts))
    return out


def format_overpartition(op) -> str:
    return "+".join(f"{v}̅" if ov else str(v) for v, ov in op)


# -- smallest-part restricted counts ---------------------------------------------

def p_tables_brute(r: int, box: TruncationBox) -> dict[tuple[int, int], CountTable]:
    """p_{i_j} tables (with m) for the starts 0_{c} (all colours c) and 1_{u1}, by exhaustive DFS."""
    by_last: dict = defaultdict(Counter)
    for parts in iter_E(r, identity(r), box):
        ells, k, m, n = stats(parts, r)
        last = (parts[-1].value, parts[-1].mask) if parts else None
        by_last[last][(*ells, k, m, n)] += 1
    starts = [(0, c) for c in range(1, 1 << r)] + [(1, 1)]
    out = {}
    for s in starts:
        t: Counter = Counter(by_last[None])
        for last, cnt in by_last.items():
            if last is not None and last >= s:
                t.update(cnt)
        out[s] = dict(t)
    return out


def count_p(mask: int, i: int, r: int, box: TruncationBox, method: str = "brute") -> CountTable:
    """Counts of E-side sequences (sigma = id) whose smallest part is >= i coloured ``mask``."""
    if method == "brute":
        start = (i, mask)
        t: Counter = Counter()
        for parts in iter_E(r, identity(r), box):
            if not parts or (parts[-1].value, parts[-1].mask) >= start:
                ells, k, m, n = stats(parts, r)
                t[(*ells, k, m, n)] += 1
        return dict(t)
    b = box.with_(xmax=max(box.xmax, sum(box.umax)))
    return table_from_series(ESideSeries(r, identity(r), b).at_least(i, mask), True)


def check_smallest_part_recurrences(r: int, box: TruncationBox,
                            tables: dict[tuple[int, int], CountTable] | None = None) -> VerificationReport:
    """The three count identities relating p_{0_j}, p_{0_{j+1}}, p_{1_{u1}} on every key in bounds."""
    if tables is None:
        tables = p_tables_brute(r, box)
    umax, dmax, qmax = _bounds(box)
    full = (1 << r) - 1

    def p(start, ells, k, m, n):
        if min(ells, default=0) < 0 or k < 0 or m < 0 or n < 0:
            return 0
        return tables[start].get((*ells, k, m, n), 0)

    def v_start(mask):
        return (0, 1 << ((mask & -mask).bit_length() - 1))

    keys = [(ells, k, m, n)
            for ells in itertools.product(*(range(u + 1) for u in umax))
            for k in range(dmax + 1)
            for m in range(sum(ells) + 1)
            for n in range(qmax + 1)]
    for j in range(1, full + 1):
        nxt = (0, j + 1) if j < full else (1, 1)
        eps = [(j >> i) & 1 for i in range(r)]
        wj = w(j)
        for ells, k, m, n in keys:
            red = tuple(l - e for l, e in zip(ells, eps))
            lhs = p((0, j), ells, k, m, n) - p(nxt, ells, k, m, n)
            rhs = (p(v_start(j), red, k, m - 1, n - (m - 1) * wj)
                   + p(v_start(j), red, k - 1, m - 1, n - (m - 1) * (wj - 1)))
            if lhs != rhs:
                name = "smallest-part recurrence" if j < full else "smallest-part recurrence, top colour"
                return from_mismatch(name, Mismatch(key=[j, *ells, k, m, n], lhs=lhs, rhs=rhs),
                                     {"r": r, "key": "j,l..,k,m,n"}, box)
    for ells, k, m, n in keys:
        lhs = p((1, 1), ells, k, m, n)
        rhs = p((0, 1), ells, k, m, n - m)
        if lhs != rhs:
            return from_mismatch("shift recurrence", Mismatch(key=[*ells, k, m, n], lhs=lhs, rhs=rhs),
                                 {"r": r}, box)
    return from_mismatch("smallest-part count identities", None, {"r": r, "keys": len(keys)}, box)



# -- top-level checks ----------------------------------------------------------------

def check_weighted(r: int, sigma: Sequence[int] | None, box: TruncationBox, method: str = "transfer",
                   d_table: CountTable | None = None, e_table: CountTable | None = None) -> VerificationReport:
    """D-side table against the E-side table for one permutation."""
    sigma = identity(r) if sigma is None else check_perm(sigma, r)
    d = enumerate_D(r, box) if d_table is None else d_table
    e = enumerate_E(r, sigma, box, method=method) if e_table is None else e_table
    params = {"r": r, "sigma": list(sigma), "method": method, "umax": list(box.umax),
              "dmax": box.dmax, "qmax": box.qmax, "keys": len(d)}
    return from_mismatch("D = E for the given permutation", table_mismatch(d, e), params,
                         box.with_(xmax=0))


def check_overline_distinct(r: int, sigma: Sequence[int], box: TruncationBox) -> VerificationReport:
    """No E-side sequence repeats an overlined coloured value, although the gap rule never says so directly."""
    sigma = check_perm(sigma, r)
    seen = 0
    for parts in iter_E(r, sigma, box):
        seen += 1
        over = [(p.value, p.mask) for p in parts if p.overlined]
        if len(over) != len(set(over)):
            return from_mismatch("overlined parts are distinct", Mismatch(format_parts(parts), "repeat", "none"),
                                 {"r": r, "sigma": list(sigma)}, box)
    return from_mismatch("overlined parts are distinct", None, {"r": r, "sigma": list(sigma), "sequences": seen}, box)
