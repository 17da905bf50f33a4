"""Chow rings of the varieties used in the computations, integration, projection pushforward."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import PreconditionError
from .exact_ring import ChowClass, ChowRing, Monomial, Relation, _freeze_terms


def point() -> ChowRing:
    """The Chow ring of a point: Q in degree 0, integral of 1 equal to 1."""
    return ChowRing((), (), 0, (Monomial(), Fraction(1)), label="pt")


def free_ring(generators: Sequence[tuple[str, int]], dimension: int, label: str = "") -> ChowRing:
    """Polynomial ring on graded generators with no relations, truncated above ``dimension``.

    Used for formal computations in Chern classes, before any relations of a
    particular variety are imposed. It has no integration.
    """
    gens = tuple((n, d) for n, d in generators)
    return ChowRing(gens, (), dimension, None, label=label or "Q[" + ",".join(n for n, _ in gens) + "]")


def projective_space(n: int, name: str = "t") -> ChowRing:
    """``Q[t]/(t^(n+1))`` with ``integral(t^n) = 1``."""
    if n < 1:
        raise PreconditionError(f"projective_space needs n >= 1, got {n}")
    top = Monomial({name: n})
    return ChowRing(
        ((name, 1),),
        (Relation(Monomial({name: n + 1})),),
        n,
        (top, Fraction(1)),
        label=f"P^{n}",
    )


def grassmannian_lines_in_p3(s1: str = "s1", s2: str = "s2") -> ChowRing:
    """Chow ring of Gr(2, 4), generated by the Chern classes of the rank-2 quotient bundle.

    The presentation ``Q[s1, s2]/(h3, h4)`` with ``h3 = s1^3 - 2 s1 s2`` and
    ``h4 = s1^4 - 3 s1^2 s2 + s2^2`` is stored as the rewrite rules

        s1^3      -> 2 s1 s2
        s1^2 s2   -> s2^2           (h4 - s1 * h3)

    so that the only top-degree standard monomial is ``s2^2``, the class of a point.
    """
    m = lambda **e: Monomial(e)  # noqa: E731
    rules = (
        Relation(m(**{s1: 3}), ((m(**{s1: 1, s2: 1}), Fraction(2)),)),
        Relation(m(**{s1: 2, s2: 1}), ((m(**{s2: 2}), Fraction(1)),)),
    )
    return ChowRing(((s1, 1), (s2, 2)), rules, 4, (m(**{s2: 2}), Fraction(1)), label="Gr(2,4)")


def _rename(ring: ChowRing, mapping: dict[str, str]) -> ChowRing:
    if not mapping:
        return ring

    def mono(m: Monomial) -> Monomial:
        return Monomial({mapping.get(n, n): e for n, e in m.items})

    rels = tuple(
        Relation(mono(r.lead), tuple((mono(tm), c) for tm, c in r.tail)) for r in ring.relations
    )
    factors = tuple(_rename(f, {k: v for k, v in mapping.items() if k in f.names}) for f in ring.factors)
    return ChowRing(
        tuple((mapping.get(n, n), d) for n, d in ring.generators),
        rels,
        ring.dimension,
        None if ring.point is None else (mono(ring.point[0]), ring.point[1]),
        factors=factors,
        bounded=tuple(_rename(f, {k: v for k, v in mapping.items() if k in f.names}) for f in ring.bounded),
        label=ring.label,
    )


def _fresh_name(name: str, taken: set[str]) -> str:
    k = 2
    while f"{name}_{k}" in taken:
        k += 1
    return f"{name}_{k}"


def factors_of(ring: ChowRing) -> tuple[ChowRing, ...]:
    return ring.factors if ring.factors else (ring,)


def product(x: ChowRing, y: ChowRing) -> ChowRing:
    """Künneth product of two cellular rings; clashing names in ``y`` get a ``_2`` suffix."""
    taken = set(x.names)
    mapping: dict[str, str] = {}
    for n in y.names:
        if n in taken:
            mapping[n] = _fresh_name(n, taken | set(y.names) | set(mapping.values()))
            taken.add(mapping[n])
        else:
            taken.add(n)
    y = _rename(y, mapping)
    pt = None
    if x.point is not None and y.point is not None:
        pt = (x.point[0] * y.point[0], x.point[1] * y.point[1])
    return ChowRing(
        x.generators + y.generators,
        x.relations + y.relations,
        x.dimension + y.dimension,
        pt,
        factors=factors_of(x) + factors_of(y),
        bounded=x.bounded + y.bounded,
        label=f"{x.label} x {y.label}",
    )


@dataclass(frozen=True)
class BundleData:
    """Rank and Chern classes ``c_1, c_2, ...`` of a vector bundle over ``ring``.

    Entries beyond ``len(chern_classes)`` are zero.
    """

    ring: ChowRing
    rank: int
    chern_classes: tuple[ChowClass, ...] = ()

    def __post_init__(self) -> None:
        for i, c in enumerate(self.chern_classes, start=1):
            if c.ring != self.ring:
                raise PreconditionError(f"c_{i} lives in a different ring")
            if not c.is_homogeneous(i):
                raise PreconditionError(f"c_{i} must be homogeneous of degree {i}")

    @classmethod
    def trivial(cls, ring: ChowRing, rank: int) -> BundleData:
        return cls(ring, rank, ())

    def c(self, i: int) -> ChowClass:
        if i == 0:
            return self.ring.one
        if 1 <= i <= len(self.chern_classes):
            return self.chern_classes[i - 1]
        return self.ring.zero

    def total(self) -> ChowClass:
        return sum((self.c(i) for i in range(1, len(self.chern_classes) + 1)), self.ring.one)

    def is_trivial(self) -> bool:
        return all(c.is_zero() for c in self.chern_classes)

    def pullback(self, target: ChowRing) -> BundleData:
        return BundleData(target, self.rank, tuple(pullback(c, target) for c in self.chern_classes))


def quotient_bundle(grass: ChowRing) -> BundleData:
    """Tautological rank-2 quotient bundle on Gr(2, 4): ``c = 1 + s1 + s2``."""
    s1, s2 = grass.gens()
    return BundleData(grass, 2, (s1, s2))


def tautological_subbundle(grass: ChowRing) -> BundleData:
    """Rank-2 subbundle ``T`` with ``c(T) c(S) = 1``: ``c(T) = 1 - s1 + (s1^2 - s2)``."""
    inv = quotient_bundle(grass).total().inverse()
    return BundleData(grass, 2, (inv.component(1), inv.component(2)))


def projective_bundle(base: ChowRing, e: BundleData, gen_name: str = "h") -> ChowRing:
    """Chow ring of the projective bundle of lines in ``e``.

    Adds a degree-1 generator ``h`` subject to ``sum_i c_i(E) h^(r-i) = 0``.
    The fibre integral sends ``h^(r-1)`` to 1.
    """
    if e.ring != base:
        raise PreconditionError("bundle is not defined over the given base")
    r = e.rank
    if r < 1:
        raise PreconditionError(f"projective_bundle needs rank >= 1, got {r}")
    if gen_name in base.names:
        raise PreconditionError(f"generator name {gen_name!r} already used by the base")
    tail: dict[Monomial, Fraction] = {}
    for i in range(1, r + 1):
        for m, c in e.c(i).terms.items():
            mono = m * Monomial({gen_name: r - i})
            tail[mono] = tail.get(mono, Fraction(0)) - c
    rule = Relation(Monomial({gen_name: r}), _freeze_terms(tail))
    pt = None
    if base.point is not None:
        pt = (Monomial({gen_name: r - 1}) * base.point[0], base.point[1])
    factors: tuple[ChowRing, ...] = ()
    if e.is_trivial() and r >= 2:
        factors = (projective_space(r - 1, gen_name),) + factors_of(base)
    return ChowRing(
        ((gen_name, 1),) + base.generators,
        (rule,) + base.relations,
        base.dimension + r - 1,
        pt,
        factors=factors,
        bounded=() if factors else factors_of(base) + base.bounded,
        label=f"P({base.label}, rank {r})",
    )


def pullback(a: ChowClass, target: ChowRing) -> ChowClass:
    """Image of ``a`` under the ring map sending each generator to the same-named one in ``target``.

    Covers pullback along a projection (``a.ring`` a factor or base of
    ``target``) and specialization of a formal ring onto a quotient of it.
    """
    src = a.ring
    tdeg = dict(target.generators)
    for n, d in src.generators:
        if tdeg.get(n) != d:
            raise PreconditionError(f"generator {n!r} of {src!r} is not a generator of {target!r}")
    return target.element(a.terms)


def integrate(a: ChowClass) -> Fraction:
    """Degree of the top-dimensional component of ``a``; lower components are ignored."""
    ring = a.ring
    if ring.point is None:
        raise PreconditionError(f"{ring!r} has no point class; integration is undefined")
    mono, integral = ring.point
    top = a.component(ring.dimension)
    for m in top.terms:
        if m != mono:
            raise PreconditionError(
                f"top-degree monomial {m.render()} is not the point monomial {mono.render()}"
            )
    return top.coefficient(mono) * integral


def _find_factor(ring: ChowRing, onto: ChowRing | int) -> int:
    facs = factors_of(ring)
    if isinstance(onto, int):
        if not 0 <= onto < len(facs):
            raise PreconditionError(f"factor index {onto} out of range")
        return onto
    for i, f in enumerate(facs):
        if f is onto or f == onto:
            return i
    raise PreconditionError(f"{onto!r} is not a factor of {ring!r}")


def pushforward_projection(a: ChowClass, onto: ChowRing | int) -> ChowClass:
    """Push ``a`` forward along the projection of a product onto one of its factors.

    Each monomial splits into its ``onto`` part and the parts in the discarded
    factors. A discarded part contributes its integral when it is that factor's
    point monomial and vanishes when its degree is below the factor dimension.
    """
    ring = a.ring
    facs = factors_of(ring)
    keep = _find_factor(ring, onto)
    target = facs[keep]
    out: dict[Monomial, Fraction] = {}
    for m, c in a.terms.items():
        weight = Fraction(c)
        for i, f in enumerate(facs):
            if i == keep:
                continue
            part = m.restrict(f.names)
            deg = f.degree_of(part)
            if deg < f.dimension:
                weight = Fraction(0)
                break
            if f.point is None or part != f.point[0]:
                raise PreconditionError(
                    f"monomial {m.render()} is not expressible in the product basis"
                )
            weight *= f.point[1]
        if weight:
            mono = m.restrict(target.names)
            out[mono] = out.get(mono, Fraction(0)) + weight
    return target.element(out)


def poincare_pairing(ring: ChowRing, degree: int) -> list[list[Fraction]]:
    """Matrix of ``integral(a * b)`` for standard monomials of complementary degrees."""
    left = ring.normal_monomials(degree)
    right = ring.normal_monomials(ring.dimension - degree)
    return [[integrate(ring.element({a: 1}) * ring.element({b: 1})) for b in right] for a in left]
