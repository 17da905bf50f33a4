"""Graded polynomial rings over Q presented by monomial rewrite rules.

A :class:`ChowRing` is a quotient ``Q[x_1, ..., x_k] / I`` where every
relation is stored as a rewrite rule ``lead -> tail`` whose leading monomial
is strictly larger than every tail monomial in the lexicographic order of the
generator list. Monomials of degree above the ring dimension are dropped as
soon as they are produced.

Elements are :class:`ChowClass` instances. They are immutable, always kept in
normal form, and carry exact :class:`fractions.Fraction` coefficients.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Union

from .errors import PreconditionError, RingMismatchError

Scalar = Union[int, Fraction]

DEFAULT_MAX_DIM = 64


def max_dimension() -> int:
    """Largest ring dimension accepted, from ``CHOWKIT_MAX_DIM`` (default 64)."""
    raw = os.environ.get("CHOWKIT_MAX_DIM")
    if raw is None:
        return DEFAULT_MAX_DIM
    try:
        value = int(raw)
    except ValueError:
        raise PreconditionError(f"CHOWKIT_MAX_DIM must be an integer, got {raw!r}")
    if value < 0:
        raise PreconditionError("CHOWKIT_MAX_DIM must be non-negative")
    return value


class Monomial:
    """Sparse exponent map ``{generator name: exponent}`` with no zero entries."""

    __slots__ = ("_items", "_hash")

    def __init__(self, exponents: Mapping[str, int] | Iterable[tuple[str, int]] = ()):
        pairs = exponents.items() if isinstance(exponents, Mapping) else exponents
        items = []
        for name, e in pairs:
            if e < 0:
                raise PreconditionError(f"negative exponent {e} for {name!r}")
            if e:
                items.append((name, int(e)))
        items.sort()
        names = [n for n, _ in items]
        if len(set(names)) != len(names):
            raise PreconditionError(f"repeated generator in monomial: {names}")
        self._items = tuple(items)
        self._hash = hash(self._items)

    @classmethod
    def one(cls) -> Monomial:
        return _ONE

    @property
    def items(self) -> tuple[tuple[str, int], ...]:
        return self._items

    def exponent(self, name: str) -> int:
        for n, e in self._items:
            if n == name:
                return e
        return 0

    def names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self._items)

    def as_dict(self) -> dict[str, int]:
        return dict(self._items)

    def __mul__(self, other: Monomial) -> Monomial:
        merged = dict(self._items)
        for n, e in other._items:
            merged[n] = merged.get(n, 0) + e
        return Monomial(merged)

    def __pow__(self, k: int) -> Monomial:
        return Monomial({n: e * k for n, e in self._items})

    def divides(self, other: Monomial) -> bool:
        return all(other.exponent(n) >= e for n, e in self._items)

    def __truediv__(self, other: Monomial) -> Monomial:
        if not other.divides(self):
            raise PreconditionError(f"{other} does not divide {self}")
        merged = dict(self._items)
        for n, e in other._items:
            merged[n] -= e
        return Monomial(merged)

    def restrict(self, names: Iterable[str]) -> Monomial:
        keep = set(names)
        return Monomial((n, e) for n, e in self._items if n in keep)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Monomial) and self._items == other._items

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: Monomial) -> bool:
        return self._items < other._items

    def __bool__(self) -> bool:
        return bool(self._items)

    def render(self, order: Iterable[str] | None = None) -> str:
        if not self._items:
            return "1"
        exps = dict(self._items)
        names = [n for n in order if n in exps] if order is not None else list(exps)
        names += [n for n in sorted(exps) if n not in names]
        return "*".join(n if exps[n] == 1 else f"{n}^{exps[n]}" for n in names)

    def __repr__(self) -> str:
        return f"Monomial({self.render()})"


_ONE = Monomial()


@dataclass(frozen=True)
class Relation:
    """Rewrite rule ``lead -> sum(coeff * mono for mono, coeff in tail)``."""

    lead: Monomial
    tail: tuple[tuple[Monomial, Fraction], ...] = ()

    def tail_dict(self) -> dict[Monomial, Fraction]:
        return dict(self.tail)


def _freeze_terms(terms: Mapping[Monomial, Fraction]) -> tuple[tuple[Monomial, Fraction], ...]:
    return tuple(sorted(((m, Fraction(c)) for m, c in terms.items() if c), key=lambda mc: mc[0].items))


@dataclass(frozen=True)
class ChowRing:
    """Presentation of a graded ring: generators, rewrite rules, dimension, point.

    ``point`` is a top-degree monomial together with its declared integral,
    or ``None`` for formal rings that carry no integration.
    ``factors`` records the component rings of a product (or of a trivial
    projective bundle); it does not take part in equality. ``bounded`` lists
    further subrings (the base of a projective bundle) whose own dimension
    truncates monomials in their generators.
    """

    generators: tuple[tuple[str, int], ...]
    relations: tuple[Relation, ...]
    dimension: int
    point: tuple[Monomial, Fraction] | None = None
    factors: tuple["ChowRing", ...] = field(default=(), compare=False, repr=False)
    bounded: tuple["ChowRing", ...] = field(default=(), compare=False, repr=False)
    label: str = field(default="", compare=False)
    _cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    def __post_init__(self) -> None:
        names = [n for n, _ in self.generators]
        if len(set(names)) != len(names):
            raise PreconditionError(f"duplicate generator names {names}")
        for n, d in self.generators:
            if d < 1:
                raise PreconditionError(f"generator {n!r} must have positive degree, got {d}")
        if self.dimension < 0:
            raise PreconditionError("dimension must be non-negative")
        if self.dimension > max_dimension():
            raise PreconditionError(
                f"ring dimension {self.dimension} exceeds CHOWKIT_MAX_DIM={max_dimension()}"
            )
        order = {n: i for i, n in enumerate(names)}
        for rel in self.relations:
            unknown = set(rel.lead.names()) - set(order)
            for m, _ in rel.tail:
                unknown |= set(m.names()) - set(order)
            if unknown:
                raise PreconditionError(f"relation uses unknown generators {sorted(unknown)}")
            d = self.degree_of(rel.lead)
            for m, _ in rel.tail:
                if self.degree_of(m) != d:
                    raise PreconditionError(f"relation for {rel.lead.render()} is not homogeneous")
                if not self._lex_key(m) < self._lex_key(rel.lead):
                    raise PreconditionError(
                        f"tail monomial {m.render()} does not precede {rel.lead.render()}"
                    )
        if self.point is not None:
            mono, integral = self.point
            if self.degree_of(mono) != self.dimension:
                raise PreconditionError("point monomial must have degree equal to the dimension")
            if not integral:
                raise PreconditionError("point monomial must have nonzero integral")

    # -- structure -------------------------------------------------------------

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.generators)

    def degree_of(self, mono: Monomial) -> int:
        key = ("deg", mono)
        d = self._cache.get(key)
        if d is None:
            degs = dict(self.generators)
            d = self._cache[key] = sum(degs[n] * e for n, e in mono.items)
        return d

    def multiply_monomials(self, a: Monomial, b: Monomial) -> tuple[tuple[Monomial, Fraction | None], ...]:
        """Normal form of ``a * b`` as (monomial, coefficient) pairs; ``None`` stands for 1. Memoized."""
        key = ("mul", a, b)
        out = self._cache.get(key)
        if out is None:
            out = self._cache[key] = tuple(
                (m, None if c == 1 else c) for m, c in self.reduce_monomial(a * b).items()
            )
        return out

    def _lex_key(self, mono: Monomial) -> tuple[int, ...]:
        return tuple(mono.exponent(n) for n in self.names)

    def sort_key(self, mono: Monomial) -> tuple:
        """Render order: ascending degree, then descending lexicographic exponents."""
        return (self.degree_of(mono), tuple(-e for e in self._lex_key(mono)))

    # -- element constructors ----------------------------------------------------

    def element(self, terms: Mapping[Monomial, Scalar] | None = None) -> ChowClass:
        return ChowClass(self, terms or {})

    def gen(self, name: str) -> ChowClass:
        if name not in self.names:
            raise PreconditionError(f"{name!r} is not a generator of this ring")
        return ChowClass(self, {Monomial({name: 1}): 1})

    def gens(self) -> tuple[ChowClass, ...]:
        return tuple(self.gen(n) for n in self.names)

    def scalar(self, c: Scalar) -> ChowClass:
        return ChowClass(self, {_ONE: c}, normalized=True)

    @property
    def one(self) -> ChowClass:
        return self.scalar(1)

    @property
    def zero(self) -> ChowClass:
        return ChowClass(self, {})

    def monomial(self, **exponents: int) -> ChowClass:
        return ChowClass(self, {Monomial(exponents): 1})

    # -- reduction ---------------------------------------------------------------

    def reduce_monomial(self, mono: Monomial) -> Mapping[Monomial, Fraction]:
        """Normal form of a single monomial (memoized; the ring itself never changes)."""
        cached = self._cache.get(mono)
        if cached is not None:
            return cached
        if self._overflows(mono):
            result: dict[Monomial, Fraction] = {}
        else:
            for rel in self.relations:
                if rel.lead.divides(mono):
                    rest = mono / rel.lead
                    result = {}
                    for tm, tc in rel.tail:
                        for m, c in self.reduce_monomial(tm * rest).items():
                            result[m] = result.get(m, Fraction(0)) + tc * c
                    result = {m: c for m, c in result.items() if c}
                    break
            else:
                result = {mono: Fraction(1)}
        self._cache[mono] = result
        return result

    def normalize(self, terms: Mapping[Monomial, Scalar]) -> dict[Monomial, Fraction]:
        out: dict[Monomial, Fraction] = {}
        for mono, coeff in terms.items():
            if not coeff:
                continue
            for m, c in self.reduce_monomial(mono).items():
                out[m] = out.get(m, Fraction(0)) + Fraction(coeff) * c
        return {m: c for m, c in out.items() if c}

    def _overflows(self, mono: Monomial) -> bool:
        # above the dimension of the ring, or of one of its product factors
        if self.degree_of(mono) > self.dimension:
            return True
        return any(
            f.degree_of(mono.restrict(f.names)) > f.dimension for f in self.factors + self.bounded
        )

    def is_normal(self, mono: Monomial) -> bool:
        return not self._overflows(mono) and not any(
            rel.lead.divides(mono) for rel in self.relations
        )

    def normal_monomials(self, degree: int) -> list[Monomial]:
        """Standard monomials of the given degree, i.e. a basis of that graded piece."""
        key = ("basis", degree)
        if key in self._cache:
            return list(self._cache[key])
        out: list[Monomial] = []

        def extend(i: int, remaining: int, acc: dict[str, int]) -> None:
            if i == len(self.generators):
                if remaining == 0:
                    m = Monomial(acc)
                    if self.is_normal(m):
                        out.append(m)
                return
            name, deg = self.generators[i]
            for e in range(remaining // deg + 1):
                acc[name] = e
                extend(i + 1, remaining - e * deg, acc)
            acc.pop(name, None)

        if 0 <= degree <= self.dimension:
            extend(0, degree, {})
        self._cache[key] = tuple(sorted(out, key=self.sort_key))
        return list(self._cache[key])

    def graded_ranks(self) -> list[int]:
        return [len(self.normal_monomials(k)) for k in range(self.dimension + 1)]

    # -- serialization -------------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "generators": [{"name": n, "degree": d} for n, d in self.generators],
            "relations": [
                {
                    "lead": r.lead.as_dict(),
                    "tail": _terms_json(dict(r.tail)),
                }
                for r in self.relations
            ],
            "dimension": self.dimension,
            "point": None
            if self.point is None
            else {"mono": self.point[0].as_dict(), "integral": _frac_str(self.point[1])},
        }

    def __repr__(self) -> str:
        gens = ", ".join(f"{n}:{d}" for n, d in self.generators)
        return f"ChowRing({self.label or '?'}; [{gens}]; dim={self.dimension})"


def _frac_str(c: Fraction) -> str:
    return f"{c.numerator}/{c.denominator}"


def _terms_json(terms: Mapping[Monomial, Fraction]) -> list[dict]:
    return [
        {"mono": m.as_dict(), "coeff": _frac_str(Fraction(c))}
        for m, c in sorted(terms.items(), key=lambda mc: mc[0].items)
    ]


def format_scalar(c: Fraction) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


class ChowClass:
    """An element of a :class:`ChowRing`, stored in normal form."""

    __slots__ = ("ring", "_terms")

    def __init__(self, ring: ChowRing, terms: Mapping[Monomial, Scalar], *, normalized: bool = False):
        self.ring = ring
        if normalized:
            self._terms = {m: c if type(c) is Fraction else Fraction(c) for m, c in terms.items() if c}
        else:
            self._terms = ring.normalize(terms)

    @property
    def terms(self) -> dict[Monomial, Fraction]:
        return dict(self._terms)

    def _check(self, other: ChowClass) -> None:
        if other.ring is not self.ring and other.ring != self.ring:
            raise RingMismatchError(f"cannot combine classes of {self.ring!r} and {other.ring!r}")

    def _coerce(self, other: object) -> ChowClass:
        if isinstance(other, ChowClass):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.scalar(other)
        return NotImplemented  # type: ignore[return-value]

    # -- arithmetic ------------------------------------------------------------------

    def __add__(self, other: object) -> ChowClass:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self._terms)
        for m, c in other._terms.items():
            out[m] = out.get(m, Fraction(0)) + c
        return ChowClass(self.ring, out, normalized=True)

    __radd__ = __add__

    def __neg__(self) -> ChowClass:
        return ChowClass(self.ring, {m: -c for m, c in self._terms.items()}, normalized=True)

    def __sub__(self, other: object) -> ChowClass:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: object) -> ChowClass:
        return (-self) + other

    def __mul__(self, other: object) -> ChowClass:
        if isinstance(other, (int, Fraction)):
            return ChowClass(self.ring, {m: c * other for m, c in self._terms.items()}, normalized=True)
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        ring = self.ring
        dim = ring.dimension
        deg = ring.degree_of
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self._terms.items():
            d1 = deg(m1)
            for m2, c2 in other._terms.items():
                if d1 + deg(m2) > dim:
                    continue
                c12 = c1 * c2
                for m, c in ring.multiply_monomials(m1, m2):
                    v = c12 if c is None else c12 * c
                    if m in out:
                        out[m] += v
                    else:
                        out[m] = v
        return ChowClass(ring, out, normalized=True)

    __rmul__ = __mul__

    def __truediv__(self, other: Scalar) -> ChowClass:
        if not isinstance(other, (int, Fraction)):
            return NotImplemented
        return self * (Fraction(1) / Fraction(other))

    def __pow__(self, k: int) -> ChowClass:
        if k < 0:
            raise PreconditionError("negative powers: use inverse()")
        result = self.ring.one
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = self.ring.scalar(other)
        if not isinstance(other, ChowClass):
            return NotImplemented
        return (other.ring is self.ring or other.ring == self.ring) and self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    # -- graded structure --------------------------------------------------------------

    def component(self, degree: int) -> ChowClass:
        ring = self.ring
        return ChowClass(
            ring, {m: c for m, c in self._terms.items() if ring.degree_of(m) == degree}, normalized=True
        )

    def components(self) -> list[ChowClass]:
        return [self.component(k) for k in range(self.ring.dimension + 1)]

    def degrees(self) -> set[int]:
        return {self.ring.degree_of(m) for m in self._terms}

    def is_homogeneous(self, degree: int | None = None) -> bool:
        degs = self.degrees()
        if not degs:
            return True
        return len(degs) == 1 and (degree is None or degs == {degree})

    def constant(self) -> Fraction:
        return self._terms.get(_ONE, Fraction(0))

    def coefficient(self, mono: Monomial) -> Fraction:
        return self._terms.get(mono, Fraction(0))

    def inverse(self) -> ChowClass:
        """Multiplicative inverse; requires an invertible degree-0 part."""
        c0 = self.constant()
        if not c0:
            raise PreconditionError("class with zero constant term is not invertible")
        nil = self / c0 - 1
        return series(-nil, [1] * (self.ring.dimension + 1)) / c0

    # -- rendering ---------------------------------------------------------------------

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        return sorted(self._terms.items(), key=lambda mc: self.ring.sort_key(mc[0]))

    def __str__(self) -> str:
        return _render(self.sorted_terms(), self.ring.names)

    def content(self) -> Fraction:
        """Positive rational content: gcd of numerators over lcm of denominators."""
        if not self._terms:
            return Fraction(0)
        num = 0
        den = 1
        for c in self._terms.values():
            num = math.gcd(num, c.numerator)
            den = den * c.denominator // math.gcd(den, c.denominator)
        return Fraction(num, den)

    def factored_str(self) -> str:
        """Like ``str`` but with the content pulled out of multi-term classes."""
        terms = self.sorted_terms()
        if len(terms) < 2:
            return str(self)
        content = self.content()
        if content == 1:
            return str(self)
        inner = _render([(m, c / content) for m, c in terms], self.ring.names)
        return f"{format_scalar(content)}*({inner})"

    def __repr__(self) -> str:
        return f"ChowClass({self})"

    def to_json(self) -> dict:
        return {"terms": _terms_json(self._terms)}


def _render(terms: list[tuple[Monomial, Fraction]], order: Iterable[str]) -> str:
    if not terms:
        return "0"
    order = list(order)
    parts: list[str] = []
    for i, (m, c) in enumerate(terms):
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if not m:
            body = format_scalar(a)
        elif a == 1:
            body = m.render(order)
        else:
            body = f"{format_scalar(a)}*{m.render(order)}"
        if i == 0:
            parts.append(body if sign == "+" else f"-{body}")
        else:
            parts.append(f"{sign} {body}")
    return " ".join(parts)


def from_json(ring: ChowRing, payload: Mapping) -> ChowClass:
    terms: dict[Monomial, Fraction] = {}
    for entry in payload["terms"]:
        m = Monomial(entry["mono"])
        terms[m] = terms.get(m, Fraction(0)) + Fraction(entry["coeff"])
    return ChowClass(ring, terms)


# -- truncated power series ------------------------------------------------------------


@lru_cache(maxsize=None)
def bernoulli_numbers(n: int) -> tuple[Fraction, ...]:
    """B_0..B_n with B_1 = -1/2, from sum_{j<=m} C(m+1, j) B_j = 0."""
    if n < 0:
        raise PreconditionError("n must be >= 0")
    if n > 0:
        prev = bernoulli_numbers(n - 1)
        s = sum((math.comb(n + 1, j) * b for j, b in enumerate(prev)), Fraction(0))
        return prev + (-s / (n + 1),)
    return (Fraction(1),)


def series(x: ChowClass, coeffs: Iterable[Scalar]) -> ChowClass:
    """Evaluate ``sum a_k x^k`` for a nilpotent ``x``, truncating at the ring dimension."""
    if x.constant():
        raise PreconditionError("series argument must have zero degree-0 part")
    ring = x.ring
    result = ring.zero
    power = ring.one
    for k, a in enumerate(coeffs):
        if k > ring.dimension or power.is_zero():
            break
        if a:
            result = result + power * Fraction(a)
        power = power * x
    return result


def exp_series(x: ChowClass) -> ChowClass:
    """``exp(x)`` for a class with no degree-0 part."""
    if x.constant():
        raise PreconditionError("exp_series needs a nilpotent argument (zero degree-0 part)")
    n = x.ring.dimension
    return series(x, [Fraction(1, math.factorial(k)) for k in range(n + 1)])


def todd_series_coefficients(n: int) -> list[Fraction]:
    """Coefficients of ``x / (1 - e^{-x})`` up to ``x^n``."""
    bern = bernoulli_numbers(n)
    return [(-1) ** k * bern[k] / math.factorial(k) for k in range(n + 1)]


def todd_factor(x: ChowClass) -> ChowClass:
    """``x / (1 - e^{-x})`` for a degree-1 class ``x``."""
    if not x.is_homogeneous(1):
        raise PreconditionError("todd_factor needs a homogeneous degree-1 class")
    return series(x, todd_series_coefficients(x.ring.dimension))


def normal_form(a: ChowClass) -> ChowClass:
    """Re-reduce ``a``; classes are already normal, so this is the identity on values."""
    return ChowClass(a.ring, a.terms)
