"""Divisor classes and Picard groups of stacks of complete intersections and of K3 moduli.

Everything here is assembled from the engine modules: the numbers that end up
in the K3 tables are recomputed on every call, never stored.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .characteristic import (
    KClass,
    chern_character_from_classes,
    chern_classes_from_character,
    line_bundle,
    twist,
)
from .errors import IntegrityError, PreconditionError
from .exact_ring import ChowClass, ChowRing
from .grr import embed_structure_sheaf, grr_project, subbundle_class
from .lattices import (
    IntegerLattice,
    compare_conventions,
    ff_picard_lattice,
    linearization_exponents,
    quotient_invariants,
)
from .varieties import (
    BundleData,
    free_ring,
    grassmannian_lines_in_p3,
    integrate,
    point,
    product,
    projective_bundle,
    projective_space,
    pullback,
    pushforward_projection,
    quotient_bundle,
)


@dataclass
class PicardPresentation:
    """Named generators, invariant factors (0 = free) and named classes as coordinate vectors."""

    basis: list[str]
    invariant_factors: list[int]
    named_classes: dict[str, list[int]] = field(default_factory=dict)
    relations: list[list[int]] = field(default_factory=list)
    axioms: list[str] = field(default_factory=list)
    notes: dict[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        n = len(self.basis)
        if len(self.invariant_factors) != n:
            raise PreconditionError("one invariant factor per basis element is required")
        for name, vec in self.named_classes.items():
            if len(vec) != n:
                raise PreconditionError(f"coordinates of {name} have the wrong length")

    def to_json(self) -> dict:
        return {
            "basis": list(self.basis),
            "invariant_factors": list(self.invariant_factors),
            "named_classes": {k: list(v) for k, v in self.named_classes.items()},
            "relations": [list(r) for r in self.relations],
            "axioms": list(self.axioms),
            "notes": dict(self.notes),
        }


@dataclass(frozen=True)
class DiscriminantClass:
    """``coeff_base * pi^*O_{P(W_a)}(1) + coeff_fiber * O_{P(V_{a,b})}(1)``."""

    coeff_base: int
    coeff_fiber: int
    A: int
    B: int
    C: int

    def to_json(self) -> dict:
        return {
            "coeff_base": self.coeff_base,
            "coeff_fiber": self.coeff_fiber,
            "A": self.A,
            "B": self.B,
            "C": self.C,
        }


def _check_dmn(d: int, m: int, n: int) -> None:
    if not (0 < m < n) or d < 1:
        raise PreconditionError(f"need 0 < m < n and d >= 1, got d={d}, m={m}, n={n}")


def equidegree_discriminant_degree(d: int, m: int, n: int) -> int:
    """Degree of the divisor of singular complete intersections of ``m`` degree-``d`` forms in ``P^n``.

    Measured against ``det(T)^vee`` on the Grassmannian of ``m``-planes of forms.
    """
    _check_dmn(d, m, n)
    return sum(
        (-1) ** i * math.comb(n + 1, i) * math.comb(n + 1 - i, m) * d ** (n - i)
        for i in range(n - m + 2)
    )


def bidegree_sums(a: int, b: int, n: int, reverse: bool = False) -> tuple[int, int, int]:
    """The three double sums ``A``, ``B``, ``C`` entering the bidegree discriminant."""

    def ordered(it):
        seq = list(it)
        return reversed(seq) if reverse else seq

    A = 0
    for i in ordered(range(n)):
        for k in ordered(range(n - i)):
            A += (-1) ** i * math.comb(n + 1, i) * a ** (n - 1 - i - k) * b**k
    B = 0
    for i in ordered(range(n - 1)):
        for k in ordered(range(n - 1 - i)):
            B += (-1) ** i * math.comb(n + 1, i) * (n - 1 - i - k) * a ** (n - 2 - i - k) * b**k
    C = 0
    for i in ordered(range(n - 1)):
        for k in ordered(range(1, n - i)):
            C += (-1) ** i * math.comb(n + 1, i) * k * a ** (n - 1 - i - k) * b ** (k - 1)
    return A, B, C


def bidegree_discriminant_class(a: int, b: int, n: int) -> DiscriminantClass:
    if not (0 < a < b) or n < 1:
        raise PreconditionError(f"need 0 < a < b and n > 0, got a={a}, b={b}, n={n}")
    A, B, C = bidegree_sums(a, b, n)
    return DiscriminantClass(a * b * B + b * A, a * b * C + a * A, A, B, C)


def gg_picard(d: int, m: int, n: int) -> PicardPresentation:
    """Equivariant Picard group of the Grassmannian of ``m``-planes of degree-``d`` forms."""
    k, p = linearization_exponents(d, m, n)
    return PicardPresentation(
        basis=["Phi"],
        invariant_factors=[0],
        named_classes={"det(T)^k": [-1], "det(T)^vee^k": [1]},
        notes={
            "generator": f"Phi descends from det(T)^(-{k}) with linearization det(A)^{p}",
            "k": str(k),
            "p": str(p),
        },
    )


def smooth_locus_picard(d: int, m: int, n: int) -> PicardPresentation:
    """Cyclic Picard group of the smooth locus: the discriminant degree divided by ``k``."""
    k, p = linearization_exponents(d, m, n)
    total = equidegree_discriminant_degree(d, m, n)
    if total % k:
        raise IntegrityError(f"k = {k} does not divide the discriminant degree {total}")
    order = total // k
    return PicardPresentation(
        basis=["Phi"],
        invariant_factors=[order],
        named_classes={"[sing]": [order]},
        relations=[[order]],
        notes={"k": str(k), "p": str(p), "discriminant_degree": str(total)},
    )


def ff_picard(a: int, b: int, n: int, convention: str = "proof") -> PicardPresentation:
    """Picard lattice of the stack of (a, b) complete intersections in Brauer-Severi P^n-bundles.

    Coordinates of the ambient ``Z^2`` are the exponents of ``O_{P(V)}(1)`` and
    ``pi^*O_{P(W_a)}(1)``; the basis vector ``(x, y)`` is named ``Phi_{x,y}``.
    """
    lattice = ff_picard_lattice(a, b, n, convention)
    names = [f"Phi_{{{x},{y}}}" for x, y in lattice.basis]
    disc = bidegree_discriminant_class(a, b, n)
    ambient = [disc.coeff_fiber, disc.coeff_base]
    out: dict[str, list[int]] = {}
    for label, vec in (("O_P(V)(1)", [1, 0]), ("pi^*O(1)", [0, 1])):
        if lattice.contains(vec):
            out[label] = lattice.coordinates(vec)
    if not lattice.contains(ambient):
        raise IntegrityError(f"discriminant class {ambient} does not admit a linearization")
    out["[sing]"] = lattice.coordinates(ambient)
    return PicardPresentation(
        basis=names,
        invariant_factors=[0, 0],
        named_classes=out,
        notes={
            "convention": convention,
            "ambient_basis": "(O_P(V)(1), pi^*O_P(W_a)(1))",
            "lattice_basis": str([list(r) for r in lattice.basis]),
        },
    )


def ff_smooth_locus_picard(a: int, b: int, n: int, convention: str = "proof") -> PicardPresentation:
    """Quotient of the rank-2 Picard lattice by the class of the singular locus."""
    pic = ff_picard(a, b, n, convention)
    rel = pic.named_classes["[sing]"]
    return PicardPresentation(
        basis=pic.basis,
        invariant_factors=quotient_invariants([rel], 2),
        named_classes={"[sing]": rel},
        relations=[rel],
        notes=pic.notes,
    )


def ff_convention_report(a: int, b: int, n: int) -> dict:
    report = compare_conventions(a, b, n)
    return {
        "proof": report["proof"].to_json(),
        "statement": report["statement"].to_json(),
        "agree": report["agree"],
    }


# -- lines on hypersurfaces of P^3 ----------------------------------------------------------------


@dataclass
class LinesComputation:
    """Intermediate and final data of the GRR computation for surfaces of degree ``d`` containing a line."""

    d: int
    incidence_class: ChowClass
    ch_formal: KClass
    chern_formal: BundleData
    chern: BundleData
    integral: Fraction
    divisor_class: ChowClass | None

    @property
    def rank(self) -> int:
        return self.ch_formal.rank


def formal_grassmannian_base() -> ChowRing:
    """``Q[s1, s2]`` truncated at degree 4: the Chern classes of the quotient bundle, no relations."""
    return free_ring((("s1", 1), ("s2", 2)), 4, label="Q[s1,s2]")


def sections_on_lines(d: int, base: ChowRing | None = None) -> KClass:
    """``Q_d = pr_{2*}(O_{P(T)} (x) O_{P^3}(d))`` on the space of lines, via GRR twice.

    ``P(T)`` is the incidence variety inside ``P^3 x Gr(2,4)``. Its normal bundle
    is ``S (x) O(1)`` and its class is ``t^2 + s1 t + s2``.
    """
    if base is None:
        base = formal_grassmannian_base()
    incidence = incidence_class(base)
    ambient = incidence.ring
    t = ambient.gen("t")
    S = quotient_bundle(base).pullback(ambient)
    normal = twist(chern_character_from_classes(S), t)
    structure = embed_structure_sheaf(incidence, normal)
    return grr_project(twist(structure, d * t), 3)


def incidence_class(base: ChowRing) -> ChowClass:
    """``[P(T)] = t^2 + s1 t + s2`` in ``CH(P^3 x base)``."""
    ambient = product(projective_space(3), base)
    return subbundle_class(quotient_bundle(base), ambient.gen("t"))


def lines_in_surfaces(d: int, with_divisor: bool = True) -> LinesComputation:
    """Run the full computation for degree-``d`` surfaces in ``P^3``.

    ``integral`` is the degree of ``c_4(Q_d)`` on Gr(2,4). It is the number of
    lines on a cubic surface for ``d = 3`` and the degree of the divisor of
    quartics containing a line for ``d = 4``.
    """
    if d < 2:
        raise PreconditionError(f"need d >= 2, got {d}")
    formal = formal_grassmannian_base()
    Q = sections_on_lines(d, formal)
    if Q.rank != d + 1:
        raise IntegrityError(f"rank of Q_{d} is {Q.rank}, expected {d + 1}")
    chern_formal = chern_classes_from_character(Q)
    G = grassmannian_lines_in_p3()
    chern = chern_formal.pullback(G)
    c4 = chern.c(4)
    integral = integrate(c4)
    incidence = incidence_class(formal)
    divisor = lines_divisor_class(d, chern) if with_divisor else None
    return LinesComputation(d, incidence, Q, chern_formal, chern, integral, divisor)


def lines_divisor_class(d: int, chern: BundleData | None = None) -> ChowClass:
    """``p_*[P(F)]`` in ``CH(P(W_d))``, where ``P(F) = {(X, L) : L in X}`` has class ``sum c_i(Q_d) h^(q-i)``."""
    if chern is None:
        chern = lines_in_surfaces(d, with_divisor=False).chern
    G = chern.ring
    rank_w = math.comb(d + 3, 3)
    pw = projective_space(rank_w - 1, "h")
    ambient = projective_bundle(G, BundleData.trivial(G, rank_w), "h")
    h = ambient.gen("h")
    cycle = subbundle_class(chern, h)
    return pushforward_projection(cycle, pw)


def lines_in_surfaces_divisor_degree(d: int) -> int:
    value = lines_in_surfaces(d, with_divisor=False).integral
    if value.denominator != 1:
        raise IntegrityError(f"non-integral degree {value}")
    return int(value)


# -- K3 surfaces ------------------------------------------------------------------------------------------


def quartic_k3_euler_characteristic(p: int) -> int:
    """``chi(X, O_X(p))`` for a quartic surface ``X`` in ``P^3``, by GRR along the embedding."""
    p3 = product(point(), projective_space(3))
    t = p3.gen("t")
    structure = embed_structure_sheaf(4 * t, line_bundle(4 * t))
    return grr_project(twist(structure, p * t), 3).rank


def k3_euler_characteristic(l: int, p: int) -> int:
    """``h^0(L^p) = p^2 l + 2`` for a quasi-polarization of degree ``2l``."""
    if l < 2:
        raise PreconditionError(f"need l >= 2, got {l}")
    if p < 0:
        raise PreconditionError(f"need p >= 0, got {p}")
    value = p * p * l + 2
    if l == 2:
        grr = quartic_k3_euler_characteristic(p)
        if grr != value:
            raise IntegrityError(f"GRR gives {grr} for the quartic, expected {value}")
    return value


RANK_AXIOM = {
    4: "rank of Pic_Q(K_4) is at least 3 (external rank bound, taken as an axiom)",
    6: "Noether-Lefschetz sublattice of Pic(K_6) has rank at least 4 (external rank bound, taken as an axiom)",
    8: "Noether-Lefschetz sublattice of Pic(K_8) has rank 4 (external rank bound, taken as an axiom)",
}


def k3_picard_table(two_l: int) -> PicardPresentation:
    """Picard group of quasi-polarized K3 surfaces of degree ``two_l`` in {4, 6, 8}.

    The restricted classes of ``D_{0,0}`` (and ``D_{3,1}`` in degree 4) are
    recomputed from the discriminant formulas and the lines computation.
    """
    if two_l == 4:
        basis = ["D_{1,1}", "D_{2,1}", "lambda_1"]
        order = smooth_locus_picard(4, 1, 3).invariant_factors[0]
        lines = lines_in_surfaces_divisor_degree(4)
        named = {"D_{0,0}|U_4": [0, 0, order], "D_{3,1}|U_4": [0, 0, lines]}
        notes = {
            "open_substack": "U_4 = K_4 minus (D_{1,1} u D_{2,1}), isomorphic to GG(4,1,3)^rat",
            "Pic(U_4)": "Z.lambda_1|U_4",
            "D_{0,0}|U_4": "discriminant of quartic surfaces; Phi = lambda_1",
            "D_{3,1}|U_4": "quartics containing a line, O_P(W_4)(1) = lambda_1",
        }
        axioms = [
            RANK_AXIOM[4],
            "generic quartic containing a line contains exactly one line (multiplicity 1 of the pushforward)",
        ]
    elif two_l == 6:
        basis = ["D_{1,1}", "D_{2,1}", "D_{3,1}", "lambda_1"]
        disc = bidegree_discriminant_class(2, 3, 4)
        named = {"D_{0,0}|U_6": [0, 0, disc.coeff_base, disc.coeff_fiber]}
        notes = {
            "open_substack": "U_6 = K_6 minus (D_{1,1} u D_{2,1}), isomorphic to FF(2,3,4)^rat",
            "Pic(U_6)": "Z.D_{3,1}|U_6 + Z.lambda_1|U_6",
            "D_{0,0}|U_6": "singular (2,3) complete intersections; pi^*O(1) coefficient read on D_{3,1}, "
            "O_P(V)(1) coefficient read on lambda_1",
        }
        axioms = [RANK_AXIOM[6]]
    elif two_l == 8:
        basis = ["D_{1,1}", "D_{2,1}", "D_{3,1}", "lambda_1"]
        order = smooth_locus_picard(2, 3, 5).invariant_factors[0]
        named = {"D_{0,0}|U_8-D_{3,1}": [0, 0, 0, order]}
        notes = {
            "open_substack": "U_8 minus D_{3,1}, isomorphic to GG(2,3,5)^rat",
            "Pic(U_8-D_{3,1})": "Z.lambda_1",
            "D_{0,0}|U_8-D_{3,1}": "discriminant of nets of quadrics in P^5; Phi = lambda_1",
        }
        axioms = [RANK_AXIOM[8]]
    else:
        raise PreconditionError(f"degree must be one of 4, 6, 8; got {two_l}")
    return PicardPresentation(
        basis=basis,
        invariant_factors=[0] * len(basis),
        named_classes=named,
        axioms=axioms,
        notes=notes,
    )
