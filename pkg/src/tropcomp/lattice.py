"""Exact integer and rational linear algebra.

Everything here works on plain Python ints and :class:`fractions.Fraction`.
Vectors are tuples, matrices are tuples of row tuples.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Iterable, Sequence

QVector = tuple  # tuple[Fraction, ...]
ZMatrix = tuple  # tuple[tuple[int, ...], ...]


def qvec(entries: Iterable) -> QVector:
    """Coerce to a tuple of Fractions (ints, strings "p/q" and Fractions accepted)."""
    return tuple(Fraction(x) for x in entries)


def zmatrix(rows: Iterable[Iterable[int]]) -> ZMatrix:
    out = tuple(tuple(int(x) for x in row) for row in rows)
    if not out or not out[0]:
        raise ValueError("matrix must be nonempty")
    width = len(out[0])
    if any(len(row) != width for row in out):
        raise ValueError("ragged matrix")
    return out


def dot(u: Sequence, v: Sequence):
    return sum(a * b for a, b in zip(u, v))


def lcm(a: int, b: int) -> int:
    return abs(a * b) // gcd(a, b) if a and b else 0


def transpose(rows: Sequence[Sequence]) -> tuple:
    return tuple(zip(*rows))


def matmul(A: Sequence[Sequence], B: Sequence[Sequence]) -> tuple:
    Bt = transpose(B)
    return tuple(tuple(dot(row, col) for col in Bt) for row in A)


def identity(n: int) -> ZMatrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def primitive_integer(v: Sequence) -> tuple[int, ...]:
    """Positive rescaling of a rational vector to a primitive integer vector.

    The zero vector maps to the zero vector.
    """
    v = [Fraction(x) for x in v]
    den = reduce(lcm, (x.denominator for x in v), 1)
    ints = [int(x * den) for x in v]
    g = reduce(gcd, ints, 0)
    if g == 0:
        return tuple(ints)
    return tuple(x // g for x in ints)


def rref(rows: Sequence[Sequence]) -> tuple[tuple[tuple[Fraction, ...], ...], tuple[int, ...]]:
    """Reduced row echelon form over Q. Returns (nonzero rows, pivot columns)."""
    M = [[Fraction(x) for x in row] for row in rows]
    if not M:
        return (), ()
    ncols = len(M[0])
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        inv = 1 / M[r][c]
        M[r] = [x * inv for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return tuple(tuple(row) for row in M[:r]), tuple(pivots)


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[0])


def nullspace(rows: Sequence[Sequence], ncols: int) -> tuple[tuple[int, ...], ...]:
    """Basis of {x : rows . x = 0} as primitive integer vectors."""
    R, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for row, p in zip(R, pivots):
            x[p] = -row[f]
        basis.append(primitive_integer(x))
    return tuple(basis)


def reduce_modulo(v: Sequence, echelon: Sequence[Sequence], pivots: Sequence[int]) -> tuple:
    """Canonical representative of v modulo the row space of an RREF matrix."""
    v = [Fraction(x) for x in v]
    for row, p in zip(echelon, pivots):
        if v[p] != 0:
            f = v[p]
            v = [a - f * b for a, b in zip(v, row)]
    return tuple(v)


def canonical_basis(rows: Sequence[Sequence]) -> tuple[tuple[int, ...], ...]:
    """Primitive integer rows of the RREF; a canonical basis of the row space."""
    R, _ = rref(rows)
    return tuple(primitive_integer(row) for row in R)


@dataclass(frozen=True)
class SmithDecomposition:
    """U * A * V == D with U, V unimodular and D diagonal with d1 | d2 | ..."""

    U: ZMatrix
    D: ZMatrix
    V: ZMatrix

    @property
    def elementary_divisors(self) -> tuple[int, ...]:
        k = min(len(self.D), len(self.D[0]))
        return tuple(self.D[i][i] for i in range(k) if self.D[i][i] != 0)

    @property
    def rank(self) -> int:
        return len(self.elementary_divisors)


def smith_normal_form(A: Sequence[Sequence[int]]) -> SmithDecomposition:
    """Smith normal form with transforms.

    Pivot rule: smallest absolute nonzero entry of the active block, first in
    row-major order. The output is deterministic for a given input.
    """
    A = zmatrix(A)
    m, n = len(A), len(A[0])
    D = [list(row) for row in A]
    U = [list(row) for row in identity(m)]
    V = [list(row) for row in identity(n)]

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for M in (D, V):
            for row in M:
                row[i], row[j] = row[j], row[i]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    x = D[i][j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
            if best is None:
                return _finish(U, D, V)
            _, i, j = best
            swap_rows(t, i)
            swap_cols(t, j)
            p = D[t][t]
            clean = True
            for i in range(t + 1, m):
                q = D[i][t] // p
                if q:
                    D[i] = [a - q * b for a, b in zip(D[i], D[t])]
                    U[i] = [a - q * b for a, b in zip(U[i], U[t])]
                if D[i][t]:
                    clean = False
            for j in range(t + 1, n):
                q = D[t][j] // p
                if q:
                    for M in (D, V):
                        for row in M:
                            row[j] -= q * row[t]
                if D[t][j]:
                    clean = False
            if not clean:
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if D[i][j] % p),
                None,
            )
            if bad is None:
                break
            D[t] = [a + b for a, b in zip(D[t], D[bad])]
            U[t] = [a + b for a, b in zip(U[t], U[bad])]
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
    return _finish(U, D, V)


def _finish(U, D, V) -> SmithDecomposition:
    return SmithDecomposition(
        tuple(map(tuple, U)), tuple(map(tuple, D)), tuple(map(tuple, V))
    )


@dataclass(frozen=True)
class IntegerSolution:
    solution: tuple[int, ...]
    kernel_basis: tuple[tuple[int, ...], ...]


def solve_integer_linear(A: Sequence[Sequence[int]], b: Sequence[int]) -> IntegerSolution | None:
    """Solve A x = b over the integers; None when no integer solution exists.

    The kernel basis spans the full integer kernel of A.
    """
    A = zmatrix(A)
    if len(A) != len(b):
        raise ValueError("row count of A must equal len(b)")
    m, n = len(A), len(A[0])
    snf = smith_normal_form(A)
    c = [dot(row, b) for row in snf.U]
    r = snf.rank
    y = [0] * n
    for i in range(m):
        d = snf.D[i][i] if i < n else 0
        if d:
            if c[i] % d:
                return None
            y[i] = c[i] // d
        elif c[i]:
            return None
    x = tuple(dot(row, y) for row in snf.V)
    kernel = tuple(tuple(snf.V[i][j] for i in range(n)) for j in range(r, n))
    return IntegerSolution(x, kernel)


def is_lattice_basis_part(generators: Sequence[Sequence[int]]) -> bool:
    """True iff the integer vectors extend to a basis of Z^n.

    Equivalent to: full row rank with all elementary divisors equal to 1.
    """
    if not generators:
        return True
    snf = smith_normal_form(generators)
    return snf.rank == len(generators) and all(d == 1 for d in snf.elementary_divisors)


def quotient_map(generators: Sequence[Sequence], n: int) -> tuple[tuple[int, ...], ...]:
    """Integer matrix P (n x (n-r)) with x -> x.P the projection Z^n -> Z^n / (span ∩ Z^n).

    ``generators`` are rational vectors spanning the subspace; r is their rank.
    The kernel of the returned map on Z^n is exactly the saturated sublattice.
    """
    rows = [primitive_integer(g) for g in generators if any(g)]
    if not rows:
        return identity(n)
    snf = smith_normal_form(rows)
    r = snf.rank
    return tuple(tuple(snf.V[i][j] for j in range(r, n)) for i in range(n))


def sublattice_basis(generators: Sequence[Sequence], n: int) -> tuple[tuple[int, ...], ...]:
    """Basis of span(generators) ∩ Z^n (the saturation)."""
    rows = [primitive_integer(g) for g in generators if any(g)]
    if not rows:
        return ()
    snf = smith_normal_form(rows)
    r = snf.rank
    Vinv = _unimodular_inverse(snf.V)
    return tuple(Vinv[i] for i in range(r))


def _unimodular_inverse(V: ZMatrix) -> ZMatrix:
    n = len(V)
    aug = [list(map(Fraction, row)) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(V)]
    R, _ = rref(aug)
    return tuple(tuple(int(x) for x in row[n:]) for row in R)


@dataclass(frozen=True)
class LatticeContext:
    """Working lattice Z^(n-1) ⊕ dZ inside Z^n; the last coordinate is the t-direction."""

    rank: int
    scale: int = 1

    def __post_init__(self):
        if self.rank < 1:
            raise ValueError("rank must be >= 1")
        if int(self.scale) != self.scale or self.scale < 1:
            raise ValueError("scale must be a positive integer")

    def rescaled(self, d: int) -> "LatticeContext":
        if d < 1:
            raise ValueError("rescale factor must be positive")
        return LatticeContext(self.rank, self.scale * d)

    def contains(self, x: Sequence) -> bool:
        return all(Fraction(c).denominator == 1 for c in x) and Fraction(x[-1]) % self.scale == 0


def primitive_generator(v: Sequence, ctx: LatticeContext) -> tuple[int, ...]:
    """First point of the ray through v lying in the working lattice of ctx."""
    p = primitive_integer(v)
    if not any(p):
        raise ValueError("zero vector has no primitive generator")
    if len(p) != ctx.rank:
        raise ValueError("rank mismatch")
    k = ctx.scale // gcd(ctx.scale, p[-1])
    return tuple(k * x for x in p)
