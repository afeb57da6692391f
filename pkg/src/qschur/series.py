"""Exact truncated power series in q, u_1..u_r, d, x over the integers.

Exponent vectors are always ordered ``(q, u_1, ..., u_r, d, x)``.  A series
lives in a :class:`TruncationBox`; every operation discards monomials that
leave the box.  Since the monomials outside a box form an ideal, truncation is
a ring homomorphism, and the substitution ``x -> x q^i`` (which only raises
q-degrees) maps that ideal into itself.  Identities between truncated series
therefore hold on the whole box whenever they hold formally.

Internally an exponent vector is packed into one int, ``FIELD_BITS`` bits per
variable with q in the lowest field.  Adding packed keys adds exponent
vectors, and a sum is inside the box iff ``(key + box.add_mask) & box.top_mask``
is zero.
"""

from __future__ import annotations

import bisect
import re
from dataclasses import dataclass, replace
from functools import cached_property, lru_cache
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import DivergenceError, DomainError, TruncationError, UsageError

FIELD_BITS = 16
FIELD_MASK = (1 << FIELD_BITS) - 1
MAX_EXPONENT = (1 << (FIELD_BITS - 1)) - 1

Exponents = tuple[int, ...]


@dataclass(frozen=True)
class TruncationBox:
    """Per-variable exponent ceilings for q, each u_i, d and x."""

    r: int
    qmax: int
    umax: tuple[int, ...] | int = 0
    dmax: int = 0
    xmax: int = 0

    def __post_init__(self) -> None:
        if not isinstance(self.r, int) or self.r < 1:
            raise UsageError(f"number of colours r must be >= 1, got {self.r!r}")
        umax = self.umax
        if isinstance(umax, int):
            umax = (umax,) * self.r
        umax = tuple(int(e) for e in umax)
        if len(umax) != self.r:
            raise UsageError(f"umax has {len(umax)} entries, expected r={self.r}")
        object.__setattr__(self, "umax", umax)
        for name, value in zip(self.names, self.maxima):
            if value < 0 or value > MAX_EXPONENT:
                raise UsageError(f"bound for {name} must lie in [0, {MAX_EXPONENT}], got {value}")

    @classmethod
    def for_counts(cls, r: int, umax: int, dmax: int, qmax: int) -> "TruncationBox":
        """Box for enumeration tables; xmax is set so that the part count is never cut."""
        return cls(r=r, qmax=qmax, umax=umax, dmax=dmax, xmax=r * umax)

    @property
    def nvars(self) -> int:
        return self.r + 3

    @cached_property
    def names(self) -> tuple[str, ...]:
        return ("q",) + tuple(f"u{i}" for i in range(1, self.r + 1)) + ("d", "x")

    @cached_property
    def maxima(self) -> Exponents:
        return (self.qmax, *self.umax, self.dmax, self.xmax)

    @cached_property
    def add_mask(self) -> int:
        half = 1 << (FIELD_BITS - 1)
        return sum((half - 1 - m) << (FIELD_BITS * i) for i, m in enumerate(self.maxima))

    @cached_property
    def top_mask(self) -> int:
        half = 1 << (FIELD_BITS - 1)
        return sum(half << (FIELD_BITS * i) for i in range(self.nvars))

    @property
    def max_total_degree(self) -> int:
        return sum(self.maxima)

    def contains(self, exps: Sequence[int]) -> bool:
        return len(exps) == self.nvars and all(0 <= e <= m for e, m in zip(exps, self.maxima))

    def pack(self, exps: Sequence[int]) -> int:
        key = 0
        for i, e in enumerate(exps):
            key |= e << (FIELD_BITS * i)
        return key

    def unpack(self, key: int) -> Exponents:
        return tuple((key >> (FIELD_BITS * i)) & FIELD_MASK for i in range(self.nvars))

    def key_inside(self, key: int) -> bool:
        return not ((key + self.add_mask) & self.top_mask)

    def meet(self, other: "TruncationBox") -> "TruncationBox":
        if other.r != self.r:
            raise UsageError(f"series over r={self.r} and r={other.r} colours cannot be combined")
        if other == self:
            return self
        return TruncationBox(
            r=self.r,
            qmax=min(self.qmax, other.qmax),
            umax=tuple(map(min, self.umax, other.umax)),
            dmax=min(self.dmax, other.dmax),
            xmax=min(self.xmax, other.xmax),
        )

    def with_(self, **changes) -> "TruncationBox":
        return replace(self, **changes)

    def to_dict(self) -> dict:
        return {"r": self.r, "qmax": self.qmax, "umax": list(self.umax),
                "dmax": self.dmax, "xmax": self.xmax}

    @classmethod
    def from_dict(cls, data: Mapping) -> "TruncationBox":
        return cls(r=data["r"], qmax=data["qmax"], umax=tuple(data["umax"]),
                   dmax=data["dmax"], xmax=data["xmax"])


def _grade(key: int) -> int:
    g = 0
    while key:
        g += key & FIELD_MASK
        key >>= FIELD_BITS
    return g


class MultiSeries:
    """Immutable sparse truncated series; see the module docstring for layout."""

    __slots__ = ("box", "_t")

    def __init__(self, box: TruncationBox, terms: Mapping[Sequence[int], int] | Iterable | None = None):
        self.box = box
        t: dict[int, int] = {}
        if terms:
            items = terms.items() if isinstance(terms, Mapping) else terms
            for exps, c in items:
                if len(exps) != box.nvars:
                    raise UsageError(f"exponent vector {tuple(exps)} has wrong length for r={box.r}")
                if any(e < 0 for e in exps):
                    raise DomainError(f"negative exponent in {tuple(exps)}")
                if c and box.contains(exps):
                    k = box.pack(exps)
                    t[k] = t.get(k, 0) + int(c)
            t = {k: c for k, c in t.items() if c}
        self._t = t

    @classmethod
    def _wrap(cls, box: TruncationBox, t: dict[int, int]) -> "MultiSeries":
        obj = cls.__new__(cls)
        obj.box = box
        obj._t = t
        return obj

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, box: TruncationBox) -> "MultiSeries":
        return cls._wrap(box, {})

    @classmethod
    def constant(cls, box: TruncationBox, c: int) -> "MultiSeries":
        return cls._wrap(box, {0: int(c)} if c else {})

    @classmethod
    def one(cls, box: TruncationBox) -> "MultiSeries":
        return cls.constant(box, 1)

    @classmethod
    def monomial(cls, box: TruncationBox, q: int = 0, u: Sequence[int] | Mapping[int, int] | None = None,
                 d: int = 0, x: int = 0, coeff: int = 1) -> "MultiSeries":
        """``coeff * q^q * prod u_i^{u_i} * d^d * x^x``; ``u`` is a length-r sequence or {index: exp}."""
        return cls(box, {monomial_exponents(box.r, q=q, u=u, d=d, x=x): coeff})

    @classmethod
    def from_qpoly(cls, box: TruncationBox, coeffs: Sequence[int]) -> "MultiSeries":
        t = {}
        for e, c in enumerate(coeffs):
            if c and e <= box.qmax:
                t[e] = int(c)
        return cls._wrap(box, t)

    # -- inspection -------------------------------------------------------

    def __len__(self) -> int:
        return len(self._t)

    def __bool__(self) -> bool:
        return bool(self._t)

    @property
    def r(self) -> int:
        return self.box.r

    def coeff(self, exps: Sequence[int]) -> int:
        if not self.box.contains(exps):
            return 0
        return self._t.get(self.box.pack(exps), 0)

    def constant_term(self) -> int:
        return self._t.get(0, 0)

    def terms(self) -> list[tuple[Exponents, int]]:
        """All (exponent vector, coefficient) pairs in lexicographic order."""
        unpack = self.box.unpack
        return sorted((unpack(k), c) for k, c in self._t.items())

    def items(self) -> Iterator[tuple[Exponents, int]]:
        unpack = self.box.unpack
        for k, c in self._t.items():
            yield unpack(k), c

    def degree(self, var: int) -> int:
        """Largest exponent of variable index ``var`` (0 = q), or -1 for the zero series."""
        shift = FIELD_BITS * var
        return max(((k >> shift) & FIELD_MASK for k in self._t), default=-1)

    def __repr__(self) -> str:
        if not self._t:
            return "MultiSeries(0)"
        shown = " + ".join(format_term(self.box, e, c) for e, c in self.terms()[:12])
        more = "" if len(self._t) <= 12 else f" + ... ({len(self._t)} terms)"
        return f"MultiSeries({shown}{more})"

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other) -> tuple[TruncationBox, dict[int, int], dict[int, int]]:
        if isinstance(other, int):
            return self.box, self._t, ({0: other} if other else {})
        if not isinstance(other, MultiSeries):
            return NotImplemented
        if other.box.r != self.box.r:
            raise UsageError(f"series over r={self.box.r} and r={other.box.r} colours cannot be combined")
        if other.box == self.box:
            return self.box, self._t, other._t
        box = self.box.meet(other.box)
        return box, self.restrict(box)._t, other.restrict(box)._t

    def __add__(self, other) -> "MultiSeries":
        co = self._coerce(other)
        if co is NotImplemented:
            return NotImplemented
        box, a, b = co
        if len(a) < len(b):
            a, b = b, a
        out = dict(a)
        for k, c in b.items():
            v = out.get(k, 0) + c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return MultiSeries._wrap(box, out)

    __radd__ = __add__

    def __neg__(self) -> "MultiSeries":
        return MultiSeries._wrap(self.box, {k: -c for k, c in self._t.items()})

    def __sub__(self, other) -> "MultiSeries":
        if isinstance(other, (int, MultiSeries)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other) -> "MultiSeries":
        return (-self) + other

    def scale(self, c: int) -> "MultiSeries":
        if not c:
            return MultiSeries.zero(self.box)
        return MultiSeries._wrap(self.box, {k: c * v for k, v in self._t.items()})

    def __mul__(self, other) -> "MultiSeries":
        if isinstance(other, int):
            return self.scale(other)
        co = self._coerce(other)
        if co is NotImplemented:
            return NotImplemented
        box, a, b = co
        return MultiSeries._wrap(box, _mul_packed(a, b, box))

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "MultiSeries":
        if n < 0:
            raise DomainError("negative powers need invert_unit")
        result, base = MultiSeries.one(self.box), self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            return self._t == ({0: other} if other else {})
        if not isinstance(other, MultiSeries):
            return NotImplemented
        if other.box.r != self.box.r:
            return False
        if other.box == self.box:
            return self._t == other._t
        box = self.box.meet(other.box)
        return self.restrict(box)._t == other.restrict(box)._t

    __hash__ = None  # type: ignore[assignment]

    def shift(self, exps: Sequence[int], coeff: int = 1) -> "MultiSeries":
        """Multiply by the monomial ``coeff * m`` where ``m`` has exponent vector ``exps``."""
        box = self.box
        if not box.contains(exps) or not coeff:
            return MultiSeries.zero(box)
        s = box.pack(exps)
        add, top = box.add_mask, box.top_mask
        out = {}
        for k, c in self._t.items():
            kk = k + s
            if not ((kk + add) & top):
                out[kk] = c * coeff
        return MultiSeries._wrap(box, out)

    def restrict(self, box: TruncationBox) -> "MultiSeries":
        """Re-truncate into ``box`` (which must have the same r)."""
        if box.r != self.box.r:
            raise UsageError("restrict cannot change the number of colours; use embed")
        if box == self.box:
            return self
        add, top = box.add_mask, box.top_mask
        return MultiSeries._wrap(box, {k: c for k, c in self._t.items() if not ((k + add) & top)})

    def embed(self, box: TruncationBox) -> "MultiSeries":
        """Move into a box with r' >= r colours, u_{r+1}..u_{r'} getting exponent 0."""
        if box.r < self.box.r:
            raise UsageError("embed can only add colours")
        r, r2 = self.box.r, box.r
        terms = {}
        for e, c in self.items():
            terms[(e[0], *e[1:r + 1], *([0] * (r2 - r)), e[r + 1], e[r + 2])] = c
        return MultiSeries(box, terms)

    def subs_x(self, i: int) -> "MultiSeries":
        """The substitution x -> x q^i."""
        return substitute_x_power(self, i)

    def x_coefficient(self, n: int) -> "MultiSeries":
        """Coefficient of x^n, as a series with no x."""
        xs = FIELD_BITS * (self.box.r + 2)
        drop = n << xs
        return MultiSeries._wrap(self.box, {k - drop: c for k, c in self._t.items()
                                             if (k >> xs) & FIELD_MASK == n})

    def x_coefficients(self) -> list["MultiSeries"]:
        """[A_0, ..., A_xmax] with self = sum A_n x^n."""
        xs = FIELD_BITS * (self.box.r + 2)
        parts: list[dict[int, int]] = [{} for _ in range(self.box.xmax + 1)]
        for k, c in self._t.items():
            n = (k >> xs) & FIELD_MASK
            parts[n][k - (n << xs)] = c
        return [MultiSeries._wrap(self.box, p) for p in parts]

    @classmethod
    def from_x_coefficients(cls, box: TruncationBox, coeffs: Sequence["MultiSeries"]) -> "MultiSeries":
        xs = FIELD_BITS * (box.r + 2)
        out: dict[int, int] = {}
        for n, a in enumerate(coeffs):
            if n > box.xmax:
                break
            for k, c in a.restrict(box)._t.items():
                if (k >> xs) & FIELD_MASK:
                    raise UsageError("x-coefficients must be free of x")
                out[k + (n << xs)] = c
        return cls._wrap(box, out)

    # -- serialisation ----------------------------------------------------

    def to_text(self) -> str:
        """One term per line: ``e_q e_u1 ... e_ur e_d e_x coeff``, lexicographically sorted."""
        return "".join(" ".join(map(str, e)) + f" {c}\n" for e, c in self.terms())

    @classmethod
    def from_text(cls, box: TruncationBox, text: str) -> "MultiSeries":
        terms = {}
        for line in text.splitlines():
            line = line.strip()
            if not line:
                continue
            fields = [int(t) for t in line.split()]
            if len(fields) != box.nvars + 1:
                raise UsageError(f"malformed series line {line!r}")
            terms[tuple(fields[:-1])] = fields[-1]
        return cls(box, terms)


def _mul_packed(a: dict[int, int], b: dict[int, int], box: TruncationBox) -> dict[int, int]:
    if not a or not b:
        return {}
    if len(a) > len(b):
        a, b = b, a
    add, top, qmax = box.add_mask, box.top_mask, box.qmax
    items = sorted(b.items(), key=lambda kv: kv[0] & FIELD_MASK)
    qs = [k & FIELD_MASK for k, _ in items]
    out: dict[int, int] = {}
    get = out.get
    for ka, ca in a.items():
        lim = bisect.bisect_right(qs, qmax - (ka & FIELD_MASK))
        for kb, cb in items[:lim]:
            s = ka + kb
            if (s + add) & top:
                continue
            out[s] = get(s, 0) + ca * cb
    return {k: c for k, c in out.items() if c}


# -- monomials ------------------------------------------------------------------

def monomial_exponents(r: int, q: int = 0, u=None, d: int = 0, x: int = 0) -> Exponents:
    us = [0] * r
    if u is None:
        pass
    elif isinstance(u, Mapping):
        for i, e in u.items():
            if not 1 <= i <= r:
                raise UsageError(f"u{i} does not exist for r={r}")
            us[i - 1] += e
    else:
        if len(u) != r:
            raise UsageError(f"u exponents {tuple(u)} do not match r={r}")
        us = list(u)
    return (q, *us, d, x)


_FACTOR = re.compile(r"^(q|d|x|u(\d+))(?:\^(\d+))?$")


def parse_monomial(text: str, r: int) -> Exponents:
    """Parse ``"u1*d*q^2"`` style monomials; ``"1"`` is the constant monomial."""
    text = text.replace(" ", "")
    if text in ("", "1"):
        return monomial_exponents(r)
    exps = [0] * (r + 3)
    for factor in text.split("*"):
        m = _FACTOR.match(factor)
        if not m:
            raise UsageError(f"cannot parse monomial factor {factor!r}")
        power = int(m.group(3) or 1)
        if m.group(2):
            i = int(m.group(2))
            if not 1 <= i <= r:
                raise UsageError(f"u{i} does not exist for r={r}")
            exps[i] += power
        else:
            exps[{"q": 0, "d": r + 1, "x": r + 2}[m.group(1)]] += power
    return tuple(exps)


def format_term(box: TruncationBox, exps: Sequence[int], c: int) -> str:
    factors = [n if e == 1 else f"{n}^{e}" for n, e in zip(box.names, exps) if e]
    if not factors:
        return str(c)
    body = "*".join(factors)
    if c == 1:
        return body
    if c == -1:
        return "-" + body
    return f"{c}*{body}"


# -- ring operations (functional surface) ---------------------------------------

def add(a: MultiSeries, b: MultiSeries) -> MultiSeries:
    return a + b


def mul(a: MultiSeries, b: MultiSeries) -> MultiSeries:
    return a * b


def invert_unit(a: MultiSeries) -> MultiSeries:
    """Multiplicative inverse inside the box of a series with constant term +-1.

    Solved grade by grade in total degree: with ``a = c0 + h``, the degree-t part
    of the inverse is ``-c0 * sum_s h_s b_{t-s}``.
    """
    box = a.box
    c0 = a._t.get(0, 0)
    if c0 not in (1, -1):
        raise DomainError(f"constant term {c0} is not a unit of the integers")
    h_by_grade: dict[int, list[tuple[int, int]]] = {}
    for k, c in a._t.items():
        if k:
            h_by_grade.setdefault(_grade(k), []).append((k, c))
    add_mask, top = box.add_mask, box.top_mask
    b_by_grade: dict[int, dict[int, int]] = {0: {0: c0}}
    for t in range(1, box.max_total_degree + 1):
        acc: dict[int, int] = {}
        get = acc.get
        for s, hs in h_by_grade.items():
            prev = b_by_grade.get(t - s) if s <= t else None
            if not prev:
                continue
            for kh, ch in hs:
                for kb, cb in prev.items():
                    kk = kh + kb
                    if (kk + add_mask) & top:
                        continue
                    acc[kk] = get(kk, 0) + ch * cb
        layer = {k: -c0 * v for k, v in acc.items() if v}
        if layer:
            b_by_grade[t] = layer
    out: dict[int, int] = {}
    for layer in b_by_grade.values():
        out.update(layer)
    return MultiSeries._wrap(box, out)


def pochhammer(exps: Sequence[int], sign: int, n: int, box: TruncationBox) -> MultiSeries:
    """Finite ``(sign*M; q)_n = prod_{j<n} (1 - sign*M*q^j)`` for the monomial M with exponents ``exps``."""
    if sign not in (1, -1):
        raise UsageError("sign must be +1 or -1")
    result = MultiSeries.one(box)
    e = list(exps)
    for j in range(n):
        if not box.contains(e):
            break
        result = result - result.shift(e, sign)
        e[0] += 1
    return result


def pochhammer_inf(exps: Sequence[int], sign: int, box: TruncationBox) -> MultiSeries:
    """``(sign*M; q)_inf`` truncated to ``box``.

    Factor j contributes only discarded terms once ``M q^j`` leaves the box,
    and q-degrees only grow with j, so the product stops there.
    """
    if len(exps) != box.nvars:
        raise UsageError(f"exponent vector {tuple(exps)} has wrong length for r={box.r}")
    if not any(exps):
        raise DivergenceError("(c;q)_inf with a constant c has no truncated expansion here")
    return pochhammer(exps, sign, box.qmax - exps[0] + 1, box)


# -- q-binomials ----------------------------------------------------------------

def _pmul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _pdiv_exact(num: Sequence[int], den: Sequence[int]) -> list[int]:
    num = list(num)
    while len(den) > 1 and den[-1] == 0:
        den = den[:-1]
    lead = den[-1]
    if lead not in (1, -1):
        raise DomainError("exact division needs a monic divisor")
    dq = len(num) - len(den)
    if dq < 0:
        if any(num):
            raise ArithmeticError("non-zero remainder in exact polynomial division")
        return [0]
    quot = [0] * (dq + 1)
    for i in range(dq, -1, -1):
        c = num[i + len(den) - 1] * lead
        quot[i] = c
        if c:
            for j, dc in enumerate(den):
                num[i + j] -= c * dc
    if any(num):
        raise ArithmeticError("non-zero remainder in exact polynomial division")
    return quot


@lru_cache(maxsize=None)
def qbinomial_coeffs(m: int, k: int) -> tuple[int, ...]:
    """Coefficients of the Gaussian polynomial [m, k]_q; ``()`` when it vanishes."""
    if k < 0 or m < 0 or k > m:
        return ()
    num: list[int] = [1]
    den: list[int] = [1]
    for j in range(k):
        num = _pmul(num, [1] + [0] * (m - j - 1) + [-1])
        den = _pmul(den, [1] + [0] * j + [-1])
    quot = _pdiv_exact(num, den)
    while len(quot) > 1 and quot[-1] == 0:
        quot.pop()
    return tuple(quot)


def qbinomial(m: int, k: int, box: TruncationBox | None = None) -> MultiSeries:
    """The Gaussian polynomial [m, k]_q as a series; zero unless 0 <= k <= m."""
    coeffs = qbinomial_coeffs(m, k)
    if box is None:
        box = TruncationBox(r=1, qmax=max(len(coeffs) - 1, 0))
    return MultiSeries.from_qpoly(box, coeffs)


# -- generating functions -------------------------------------------------------

def product_side(r: int, box: TruncationBox) -> MultiSeries:
    """prod_{k=1}^r (-u_k; q)_inf / (d u_k; q)_inf."""
    if box.r != r:
        raise UsageError(f"box has r={box.r}, expected {r}")
    result = MultiSeries.one(box)
    for k in range(1, r + 1):
        num = pochhammer_inf(monomial_exponents(r, u={k: 1}), -1, box)
        den = pochhammer_inf(monomial_exponents(r, u={k: 1}, d=1), 1, box)
        result = result * num * invert_unit(den)
    return result


def substitute_x_power(s: MultiSeries, i: int) -> MultiSeries:
    """x^m -> x^m q^{i m}, re-truncated."""
    if i < 0:
        raise DomainError("x -> x q^i needs i >= 0")
    if i == 0:
        return s
    box = s.box
    xs = FIELD_BITS * (box.r + 2)
    qmax = box.qmax
    out = {}
    for k, c in s._t.items():
        m = (k >> xs) & FIELD_MASK
        if (k & FIELD_MASK) + i * m <= qmax:
            out[k + i * m] = c
    return MultiSeries._wrap(box, out)


def eval_x_one(s: MultiSeries, e_side: bool = False) -> MultiSeries:
    """Set x = 1.  With ``e_side`` the box must keep every part count: xmax >= r * umax."""
    box = s.box
    if e_side and box.xmax < sum(box.umax):
        raise TruncationError(
            f"x = 1 needs xmax >= u-budget {sum(box.umax)} (r*umax), box has xmax={box.xmax}")
    xs = FIELD_BITS * (box.r + 2)
    out: dict[int, int] = {}
    for k, c in s._t.items():
        kk = k & ((1 << xs) - 1)
        out[kk] = out.get(kk, 0) + c
    return MultiSeries._wrap(box, {k: c for k, c in out.items() if c})
