"""Grothendieck-Riemann-Roch along projective-space projections and regular embeddings.

Vanishing of higher direct images is never checked: every result is the
K-theoretic pushforward, which agrees with the honest direct image only when
the caller knows the higher direct images vanish.
"""
from __future__ import annotations

from .characteristic import KClass, todd_inverse
from .errors import PreconditionError
from .exact_ring import ChowClass, ChowRing, todd_factor
from .varieties import (
    BundleData,
    factors_of,
    integrate,
    point,
    projective_space,
    pullback,
    pushforward_projection,
)


def _is_projective_space(ring: ChowRing, n: int) -> bool:
    if len(ring.generators) != 1 or ring.dimension != n:
        return False
    name, deg = ring.generators[0]
    return deg == 1 and ring == projective_space(n, name)


def _projective_factor(ring: ChowRing, n: int) -> int:
    facs = factors_of(ring)
    for i in range(len(facs) - 1, -1, -1):
        if _is_projective_space(facs[i], n):
            return i
    raise PreconditionError(f"no P^{n} factor found in {ring!r}")


def projective_todd(ring: ChowRing, n: int) -> ChowClass:
    """Pullback of ``Td(T_{P^n})`` from the ``P^n`` factor: ``(t / (1 - e^{-t}))^(n+1)``."""
    facs = factors_of(ring)
    fiber = facs[_projective_factor(ring, n)]
    t = ring.gen(fiber.names[0])
    return todd_factor(t) ** (n + 1)


def grr_project(f: KClass, n: int) -> KClass:
    """``ch(pr_* f) = pr_*(ch(f) . Td(T_{P^n}))`` for the projection forgetting a ``P^n`` factor.

    A bare ``P^n`` is treated as ``point x P^n``.
    """
    ring = f.base
    facs = factors_of(ring)
    idx = _projective_factor(ring, n)
    integrand = f.ch * projective_todd(ring, n)
    if len(facs) == 1:
        return KClass(point().scalar(integrate(integrand)))
    if len(facs) != 2:
        raise PreconditionError("grr_project supports products of exactly two factors")
    return KClass(pushforward_projection(integrand, 1 - idx))


def embed_structure_sheaf(fundamental_class: ChowClass, normal: KClass) -> KClass:
    """``ch(O_Z) = Td(N)^{-1} . [Z]`` for a regular embedding with normal bundle ``N``."""
    r = normal.rank
    if r < 0 or not fundamental_class.is_homogeneous(r):
        raise PreconditionError(
            f"fundamental class must be homogeneous of degree {r} (the codimension)"
        )
    if fundamental_class.ring != normal.base:
        raise PreconditionError("fundamental class and normal bundle live on different rings")
    return KClass(todd_inverse(normal) * fundamental_class)


def subbundle_class(q: BundleData, hyperplane: ChowClass) -> ChowClass:
    """Class of ``P(F)`` inside ``P(E)`` for ``0 -> F -> E -> Q -> 0``: ``sum_i c_i(Q) h^(q-i)``."""
    ring = hyperplane.ring
    if not hyperplane.is_homogeneous(1) or len(hyperplane.terms) != 1:
        raise PreconditionError("hyperplane must be a degree-1 generator")
    (mono,) = hyperplane.terms
    if len(mono.items) != 1 or hyperplane.terms[mono] != 1:
        raise PreconditionError("hyperplane must be a degree-1 generator")
    if mono.names()[0] in q.ring.names:
        raise PreconditionError("hyperplane generator belongs to the base of the bundle")
    out = ring.zero
    for i in range(q.rank + 1):
        out = out + pullback(q.c(i), ring) * hyperplane ** (q.rank - i)
    return out
