"""Sublattices of Z^n: Hermite and Smith normal forms, congruence sublattices."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Sequence

from .errors import IntegrityError, PreconditionError

Matrix = list[list[int]]


def hermite_normal_form(rows: Sequence[Sequence[int]], ncols: int | None = None) -> Matrix:
    """Row-style HNF: echelon form, positive pivots, entries above a pivot in ``[0, pivot)``.

    Zero rows are dropped, so the result is a basis of the row lattice.
    """
    A = [list(map(int, r)) for r in rows]
    if ncols is None:
        ncols = len(A[0]) if A else 0
    if any(len(r) != ncols for r in A):
        raise PreconditionError("rows must all have the same length")
    m = len(A)
    r = 0
    for col in range(ncols):
        if r == m:
            break
        while True:
            nonzero = [i for i in range(r, m) if A[i][col]]
            if not nonzero:
                break
            piv = min(nonzero, key=lambda i: abs(A[i][col]))
            A[r], A[piv] = A[piv], A[r]
            clean = True
            for i in range(r + 1, m):
                q = A[i][col] // A[r][col]
                if q:
                    A[i] = [a - q * b for a, b in zip(A[i], A[r])]
                if A[i][col]:
                    clean = False
            if clean:
                break
        if not A[r][col]:
            continue
        if A[r][col] < 0:
            A[r] = [-a for a in A[r]]
        for i in range(r):
            q = A[i][col] // A[r][col]
            if q:
                A[i] = [a - q * b for a, b in zip(A[i], A[r])]
        r += 1
    return [row for row in A[:r]]


def smith_diagonal(rows: Sequence[Sequence[int]]) -> list[int]:
    """Nonzero Smith invariants ``d_1 | d_2 | ...`` of an integer matrix."""
    A = [list(map(int, r)) for r in rows]
    m = len(A)
    n = len(A[0]) if A else 0
    diag: list[int] = []
    t = 0
    while t < min(m, n):
        entries = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]]
        if not entries:
            break
        _, pi, pj = min(entries)
        A[t], A[pi] = A[pi], A[t]
        for row in A:
            row[t], row[pj] = row[pj], row[t]
        p = A[t][t]
        dirty = False
        for i in range(t + 1, m):
            q = A[i][t] // p
            if q:
                A[i] = [a - q * b for a, b in zip(A[i], A[t])]
            dirty |= A[i][t] != 0
        for j in range(t + 1, n):
            q = A[t][j] // p
            if q:
                for row in A:
                    row[j] -= q * row[t]
            dirty |= A[t][j] != 0
        if dirty:
            continue
        bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % p), None)
        if bad is not None:
            A[t] = [a + b for a, b in zip(A[t], A[bad[0]])]
            continue
        diag.append(abs(p))
        t += 1
    return diag


def _row_kernel(v: Sequence[int]) -> Matrix:
    """Basis of ``{x in Z^k : v . x = 0}`` for a nonzero integer vector ``v``."""
    k = len(v)
    U = [[int(i == j) for j in range(k)] for i in range(k)]  # columns are the basis
    w = list(v)
    for j in range(k):
        if w[j]:
            break
    else:
        return [[int(i == j) for i in range(k)] for j in range(k)]
    # move the first nonzero entry to position 0
    w[0], w[j] = w[j], w[0]
    for row in U:
        row[0], row[j] = row[j], row[0]
    for j in range(1, k):
        a, b = w[0], w[j]
        if not b:
            continue
        g, x, y = _xgcd(a, b)
        for row in U:
            c0, cj = row[0], row[j]
            row[0], row[j] = x * c0 + y * cj, (-b // g) * c0 + (a // g) * cj
        w[0], w[j] = g, 0
    return [[U[i][j] for i in range(k)] for j in range(1, k)]


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


@dataclass(frozen=True)
class IntegerLattice:
    """Sublattice of ``Z^ambient_rank`` with basis rows kept in Hermite normal form."""

    ambient_rank: int
    basis: tuple[tuple[int, ...], ...]

    @classmethod
    def from_generators(cls, rows: Sequence[Sequence[int]], ambient_rank: int) -> IntegerLattice:
        if ambient_rank < 1:
            raise PreconditionError("ambient rank must be positive")
        hnf = hermite_normal_form(rows, ambient_rank)
        return cls(ambient_rank, tuple(tuple(r) for r in hnf))

    @classmethod
    def full(cls, ambient_rank: int) -> IntegerLattice:
        return cls.from_generators([[int(i == j) for j in range(ambient_rank)] for i in range(ambient_rank)], ambient_rank)

    @property
    def rank(self) -> int:
        return len(self.basis)

    def index(self) -> int | None:
        """``[Z^n : L]``, or ``None`` when ``L`` has lower rank."""
        if self.rank < self.ambient_rank:
            return None
        # full-rank HNF is upper triangular: the index is the product of the pivots
        return math.prod(self.basis[i][i] for i in range(self.rank))

    def contains(self, v: Sequence[int]) -> bool:
        if len(v) != self.ambient_rank:
            raise PreconditionError("vector has the wrong length")
        w = list(v)
        for row in self.basis:
            col = next(j for j, a in enumerate(row) if a)
            if w[col] % row[col]:
                return False
            q = w[col] // row[col]
            w = [a - q * b for a, b in zip(w, row)]
        return not any(w)

    def coordinates(self, v: Sequence[int]) -> list[int]:
        """Coordinates of ``v`` in the HNF basis."""
        w = list(v)
        out = []
        for row in self.basis:
            col = next(j for j, a in enumerate(row) if a)
            if w[col] % row[col]:
                raise PreconditionError(f"{list(v)} is not in the lattice")
            q = w[col] // row[col]
            out.append(q)
            w = [a - q * b for a, b in zip(w, row)]
        if any(w):
            raise PreconditionError(f"{list(v)} is not in the lattice")
        return out

    def to_json(self) -> dict:
        return {
            "ambient_rank": self.ambient_rank,
            "basis": [list(r) for r in self.basis],
            "index": self.index(),
        }


def smith_invariants(sub: IntegerLattice, ambient_rank: int) -> list[int]:
    """Invariant factors of ``Z^n / sub``; free directions are reported as 0."""
    if sub.ambient_rank != ambient_rank:
        raise PreconditionError("sublattice lives in a different ambient lattice")
    diag = smith_diagonal(sub.basis) if sub.basis else []
    return diag + [0] * (ambient_rank - len(diag))


def quotient_invariants(relations: Sequence[Sequence[int]], ambient_rank: int) -> list[int]:
    """Invariant factors of ``Z^n`` modulo the span of the given relation rows."""
    return smith_invariants(IntegerLattice.from_generators(relations, ambient_rank), ambient_rank)


def congruence_sublattice(coeffs: Sequence[int], modulus: int) -> IntegerLattice:
    """``{v in Z^n : coeffs . v = 0 mod modulus}``."""
    if not coeffs:
        raise PreconditionError("coeffs must be non-empty")
    if modulus < 1:
        raise PreconditionError("modulus must be positive")
    n = len(coeffs)
    kernel = _row_kernel(list(coeffs) + [modulus])
    gens = [col[:n] for col in kernel]
    lattice = IntegerLattice.from_generators(gens, n)
    expected = modulus // math.gcd(modulus, math.gcd(*coeffs))
    if lattice.index() != expected:
        raise IntegrityError(f"congruence lattice index {lattice.index()} != {expected}")
    return lattice


def linearization_exponents(d: int, m: int, n: int) -> tuple[int, int]:
    """Smallest ``k`` (and matching ``p``) with ``k m d = p (n + 1)``.

    ``k = lcm(n+1, m d) / (m d)`` is the least tensor power of the determinant
    of the tautological bundle that carries a linearization; ``p`` is the
    exponent of ``det(A)`` in it.
    """
    if not (0 < m < n) or d < 1:
        raise PreconditionError(f"need 0 < m < n and d >= 1, got d={d}, m={m}, n={n}")
    L = math.lcm(n + 1, m * d)
    k, p = L // (m * d), L // (n + 1)
    assert k * m * d == p * (n + 1)
    return k, p


CONVENTIONS = ("proof", "statement")


def ff_coefficients(a: int, b: int, convention: str = "proof") -> tuple[int, int]:
    """Weights of ``(O_{P(V)}(1), pi^*O_{P(W_a)}(1))`` under the scalar matrices.

    ``proof``: ``(n+1) | b x + a y``; ``statement``: ``(n+1) | a x + b y``, where
    ``x`` is the exponent on ``O_{P(V)}(1)`` and ``y`` the one on ``pi^*O(1)``.
    """
    if convention == "proof":
        return (b, a)
    if convention == "statement":
        return (a, b)
    raise PreconditionError(f"unknown convention {convention!r}; use one of {CONVENTIONS}")


def ff_picard_lattice(a: int, b: int, n: int, convention: str = "proof") -> IntegerLattice:
    """Line bundles ``O_{P(V)}(x) (x) pi^*O(y)`` on ``P(V_{a,b})`` admitting a PGL_{n+1}-linearization."""
    if not (0 < a < b) or n < 1:
        raise PreconditionError(f"need 0 < a < b and n > 0, got a={a}, b={b}, n={n}")
    return congruence_sublattice(ff_coefficients(a, b, convention), n + 1)


def compare_conventions(a: int, b: int, n: int) -> dict:
    """Build the lattice under both conventions and report whether they agree."""
    proof = ff_picard_lattice(a, b, n, "proof")
    statement = ff_picard_lattice(a, b, n, "statement")
    agree = proof == statement
    if not agree:
        warnings.warn(
            f"linearization conventions disagree for (a, b, n) = ({a}, {b}, {n})", stacklevel=2
        )
    return {"proof": proof, "statement": statement, "agree": agree}
