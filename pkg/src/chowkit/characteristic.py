"""K-theory classes stored by their Chern character, and the characteristic classes built on them.

Chern roots never appear as ring generators. Twists, duals and sums are
carried out on the Chern character, and conversions to Chern classes go
through Newton's identities.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

from .errors import PreconditionError
from .exact_ring import ChowClass, ChowRing, Monomial, bernoulli_numbers, exp_series
from .varieties import BundleData, free_ring, pullback


class KClass:
    """A virtual bundle ``[E] - [F]`` represented by ``ch`` (degree-0 part is the rank)."""

    __slots__ = ("ch",)

    def __init__(self, ch: ChowClass):
        rank = ch.constant()
        if rank.denominator != 1:
            raise PreconditionError(f"virtual rank must be an integer, got {rank}")
        self.ch = ch

    @property
    def base(self) -> ChowRing:
        return self.ch.ring

    @property
    def rank(self) -> int:
        return int(self.ch.constant())

    @classmethod
    def trivial(cls, ring: ChowRing, rank: int = 1) -> KClass:
        return cls(ring.scalar(rank))

    def ch_part(self, k: int) -> ChowClass:
        return self.ch.component(k)

    def __add__(self, other: KClass) -> KClass:
        return KClass(self.ch + other.ch)

    def __sub__(self, other: KClass) -> KClass:
        return KClass(self.ch - other.ch)

    def __neg__(self) -> KClass:
        return KClass(-self.ch)

    def __mul__(self, other: KClass | int) -> KClass:
        """Tensor product (or an integer multiple)."""
        if isinstance(other, int):
            return KClass(self.ch * other)
        return KClass(self.ch * other.ch)

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        return isinstance(other, KClass) and self.ch == other.ch

    def __hash__(self) -> int:
        return hash(self.ch)

    def __repr__(self) -> str:
        return f"KClass(ch={self.ch})"

    def pullback(self, target: ChowRing) -> KClass:
        return KClass(pullback(self.ch, target))

    def to_json(self) -> dict:
        return {"rank": self.rank, "ch": self.ch.to_json()}


def line_bundle(d: ChowClass) -> KClass:
    """The line bundle with first Chern class ``d``: ``ch = exp(d)``."""
    if not d.is_homogeneous(1):
        raise PreconditionError("line_bundle needs a homogeneous degree-1 class")
    return KClass(exp_series(d))


def power_sums_from_chern(b: BundleData, upto: int) -> list[ChowClass]:
    """Power sums ``p_1..p_upto`` of the Chern roots (index 0 unused)."""
    ring = b.ring
    p = [ring.zero] * (upto + 1)
    for k in range(1, upto + 1):
        acc = ring.zero
        for i in range(1, k):
            if (i - 1) % 2:
                acc = acc - b.c(i) * p[k - i]
            else:
                acc = acc + b.c(i) * p[k - i]
        acc = acc + b.c(k) * ((-1) ** (k - 1) * k)
        p[k] = acc
    return p


def chern_character_from_classes(b: BundleData) -> KClass:
    ring = b.ring
    n = ring.dimension
    p = power_sums_from_chern(b, n)
    ch = ring.scalar(b.rank)
    for k in range(1, n + 1):
        ch = ch + p[k] / math.factorial(k)
    return KClass(ch)


def chern_classes_from_character(k: KClass) -> BundleData:
    """Chern classes ``c_1..c_dim`` from the Chern character (inverse Newton identities).

    With ``p_j = j! ch_j`` this is ``c_m = (1/m) sum_{j=1}^m (-1)^(j-1) c_{m-j} p_j``,
    which for ``m <= 4`` reproduces

        c_1 = ch_1
        c_2 = c_1^2/2 - ch_2
        c_3 = 2 ch_3 - c_1^3/3 + c_1 c_2
        c_4 = c_1^4/4 - c_1^2 c_2 + c_2^2/2 + c_1 c_3 - 6 ch_4
    """
    ring = k.base
    n = ring.dimension
    p = [ring.zero] + [k.ch_part(j) * math.factorial(j) for j in range(1, n + 1)]
    c = [ring.one]
    for m in range(1, n + 1):
        acc = ring.zero
        for j in range(1, m + 1):
            term = c[m - j] * p[j]
            acc = acc + term if j % 2 else acc - term
        c.append(acc / m)
    cs = c[1:]
    while cs and cs[-1].is_zero():
        cs.pop()
    return BundleData(ring, k.rank, tuple(cs))


def total_chern_class(k: KClass) -> ChowClass:
    return chern_classes_from_character(k).total()


def dual(k: KClass) -> KClass:
    ch = k.ch
    out = ch.ring.zero
    for j, part in enumerate(ch.components()):
        out = out + (-part if j % 2 else part)
    return KClass(out)


def twist(k: KClass, d: ChowClass) -> KClass:
    """Tensor with the line bundle of first Chern class ``d`` (every root shifts by ``d``)."""
    if not d.is_homogeneous(1):
        raise PreconditionError("twist needs a homogeneous degree-1 class")
    return KClass(k.ch * exp_series(d))


# -- Todd classes -------------------------------------------------------------------------


def _log_todd(k: KClass) -> ChowClass:
    # log(x / (1 - e^{-x})) = x/2 - sum_{j>=2} B_j x^j / (j * j!), summed over roots
    n = k.base.dimension
    bern = bernoulli_numbers(max(n, 1))
    out = k.ch_part(1) / 2
    for j in range(2, n + 1):
        if bern[j]:
            out = out - k.ch_part(j) * (bern[j] / j)
    return out


def universal_chern_ring(n: int) -> ChowRing:
    """Free graded ring ``Q[c1, ..., cn]`` with ``deg ci = i``, truncated above degree ``n``."""
    return free_ring(tuple((f"c{i}", i) for i in range(1, n + 1)), n)


@lru_cache(maxsize=None)
def todd_polynomials(n: int) -> tuple[ChowClass, ...]:
    """Universal Todd polynomials ``T_0..T_n`` in the Chern classes ``c1..cn``.

    Generated from the Bernoulli numbers, not tabulated.
    """
    if n < 1:
        raise PreconditionError("need n >= 1")
    ring = universal_chern_ring(n)
    generic = BundleData(ring, n, ring.gens())
    td = exp_series(_log_todd(chern_character_from_classes(generic)))
    return tuple(td.component(j) for j in range(n + 1))


def _evaluate_universal(polys: tuple[ChowClass, ...], b: BundleData) -> ChowClass:
    """Substitute ``c_i(b)`` into polynomials over ``Q[c1..cn]``, sharing monomial values."""
    ring = b.ring
    values: dict[Monomial, ChowClass] = {Monomial(): ring.one}

    def value(m: Monomial) -> ChowClass:
        v = values.get(m)
        if v is None:
            name = m.names()[0]
            v = values[m] = value(m / Monomial({name: 1})) * b.c(int(name[1:]))
        return v

    out: dict[Monomial, Fraction] = {}
    for poly in polys:
        for m, coeff in poly.terms.items():
            for mono, c in value(m).terms.items():
                out[mono] = out.get(mono, Fraction(0)) + coeff * c
    return ring.element(out)


def todd_class(k: KClass) -> ChowClass:
    """Multiplicative Todd class, evaluated through the universal Todd polynomials."""
    n = k.base.dimension
    if n == 0:
        return k.base.one
    return _evaluate_universal(todd_polynomials(n), chern_classes_from_character(k))


def todd_inverse(k: KClass) -> ChowClass:
    return todd_class(k).inverse()
