"""Exact dense linear algebra over big integers and rationals.

Verification paths never touch floating point: ranks come from
fraction-free (Bareiss) elimination, solvability and nullspaces from an
integer row-echelon kernel that keeps rows primitive (gcd-reduced), and
large products go through numpy int64 only when a proven bound rules
out overflow, falling back to object (big-int) arithmetic otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

import numpy as np

MODULAR_PRIMES = (10**9 + 7, 10**9 + 9)


@dataclass(frozen=True)
class RationalMatrix:
    """Immutable dense matrix with exact rational entries."""

    entries: tuple[tuple[Fraction, ...], ...]

    @classmethod
    def from_rows(cls, rows) -> "RationalMatrix":
        return cls(tuple(tuple(Fraction(x) for x in row) for row in rows))

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls.from_rows([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @property
    def nrows(self) -> int:
        return len(self.entries)

    @property
    def ncols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.entries[i]

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix(tuple(zip(*self.entries))) if self.entries else self

    def trace(self) -> Fraction:
        return sum((self.entries[i][i] for i in range(min(self.nrows, self.ncols))),
                   Fraction(0))

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch")
        cols = other.transpose().entries
        return RationalMatrix(tuple(
            tuple(sum((a * b for a, b in zip(r, c)), Fraction(0)) for c in cols)
            for r in self.entries
        ))

    def scaled_integer(self) -> tuple[int, list[list[int]]]:
        """(denominator L, integer matrix) with self = intmat / L."""
        L = lcm(*(x.denominator for row in self.entries for x in row)) if self.entries else 1
        return L, [[int(x * L) for x in row] for row in self.entries]


def _int_rows(matrix) -> list[list[int]]:
    """Clear denominators row-wise (rank/solvability-preserving)."""
    if isinstance(matrix, RationalMatrix):
        rows = matrix.entries
    elif isinstance(matrix, np.ndarray):
        return [[int(x) for x in row] for row in matrix]
    else:
        rows = matrix
    out = []
    for row in rows:
        row = [Fraction(x) for x in row]
        mult = lcm(*(x.denominator for x in row)) if row else 1
        out.append([int(x * mult) for x in row])
    return out


def rank(matrix) -> int:
    """Exact rank by fraction-free Bareiss elimination.

    Pivots are chosen with smallest nonzero magnitude to limit the growth
    of the intermediate minors.
    """
    rows = _int_rows(matrix)
    if not rows or not rows[0]:
        return 0
    ncols = len(rows[0])
    r = 0
    prev = 1
    for c in range(ncols):
        pick = None
        for i in range(r, len(rows)):
            v = rows[i][c]
            if v and (pick is None or abs(v) < abs(rows[pick][c])):
                pick = i
        if pick is None:
            continue
        rows[r], rows[pick] = rows[pick], rows[r]
        pr = rows[r]
        pv = pr[c]
        # Bareiss update applies to every lower row; division by the
        # previous pivot is exact (entries are minors).
        for i in range(r + 1, len(rows)):
            ri = rows[i]
            f = ri[c]
            rows[i] = [(pv * a - f * b) // prev for a, b in zip(ri, pr)]
        prev = pv
        r += 1
        if r == len(rows):
            break
    return r


def modular_rank(matrix, p: int) -> int:
    """Rank over GF(p); a lower bound for (and usually equal to) the Q-rank."""
    rows = _int_rows(matrix)
    if not rows or not rows[0]:
        return 0
    A = np.array(rows, dtype=object) % p
    A = A.astype(np.int64)
    nrows, ncols = A.shape
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, nrows):
            if A[i, c] % p:
                piv = i
                break
        if piv is None:
            continue
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        inv = pow(int(A[r, c]), -1, p)
        A[r] = (A[r] * inv) % p
        below = A[r + 1:, c] % p
        mask = below != 0
        if mask.any():
            A[r + 1:][mask] = (A[r + 1:][mask] - np.outer(below[mask], A[r])) % p
        r += 1
        if r == nrows:
            break
    return r


def rank_certified(matrix, upper_bound: int | None = None) -> int:
    """Exact rank from modular lower bounds plus a structural upper bound.

    With no upper bound given, min(nrows, ncols) is used; the result is
    certified exact only when the bounds meet, otherwise a ValueError is
    raised and the caller should fall back to Bareiss.
    """
    rows = _int_rows(matrix)
    if not rows or not rows[0]:
        return 0
    ub = min(len(rows), len(rows[0])) if upper_bound is None else upper_bound
    lb = max(modular_rank(rows, p) for p in MODULAR_PRIMES)
    if lb == ub:
        return ub
    raise ValueError(f"rank not certified: modular lower bound {lb} < upper bound {ub}")


# ---------------------------------------------------------------------------
# integer echelon kernel (rows kept primitive; exact, denominator-free)

def int_echelon(rows: list[list[int]], track: bool = True):
    """Row echelon of an integer matrix with an optional transform.

    Returns (echelon_rows, transform_rows, pivot_cols): each echelon row
    is a primitive integer vector, transform @ input == echelon (up to
    the per-row scalings applied identically to both sides).
    """
    n = len(rows)
    work = [list(r) for r in rows]
    tr = [[1 if i == j else 0 for j in range(n)] for i in range(n)] if track else None
    ncols = len(work[0]) if work else 0
    r = 0
    pivots = []
    for c in range(ncols):
        pick = None
        for i in range(r, n):
            v = work[i][c]
            if v and (pick is None or abs(v) < abs(work[pick][c])):
                pick = i
        if pick is None:
            continue
        work[r], work[pick] = work[pick], work[r]
        if track:
            tr[r], tr[pick] = tr[pick], tr[r]
        pv = work[r][c]
        for i in range(r + 1, n):
            f = work[i][c]
            if f:
                work[i] = [pv * a - f * b for a, b in zip(work[i], work[r])]
                if track:
                    tr[i] = [pv * a - f * b for a, b in zip(tr[i], tr[r])]
                g = 0
                for x in work[i]:
                    g = gcd(g, x)
                for x in (tr[i] if track else ()):
                    g = gcd(g, x)
                if g > 1:
                    work[i] = [x // g for x in work[i]]
                    if track:
                        tr[i] = [x // g for x in tr[i]]
        pivots.append(c)
        r += 1
        if r == n:
            break
    return work[:r], (tr if track else None), pivots


class EchelonSolver:
    """Factored echelon form of A for repeated exact solves of A y = b."""

    def __init__(self, matrix):
        rows = _int_rows(matrix)
        self.nrows = len(rows)
        self.ncols = len(rows[0]) if rows else 0
        ech, tr, pivots = int_echelon(rows, track=True)
        self.echelon = ech
        self.pivots = pivots
        self.rank = len(pivots)
        self.transform = tr  # all nrows rows; rows beyond rank annihilate A
        self._null_rows = np.array(
            [tr[i] for i in range(self.rank, self.nrows)], dtype=object
        ) if self.nrows > self.rank else None

    def solvable(self, b) -> bool:
        """Whether A y = b has a solution (b over the rationals)."""
        b = [Fraction(x) for x in b]
        if self._null_rows is None:
            return True
        return all(
            sum(t * x for t, x in zip(row, b)) == 0 for row in self._null_rows
        )

    def solve(self, b):
        """Some exact solution of A y = b, or None."""
        b = [Fraction(x) for x in b]
        if not self.solvable(b):
            return None
        tb = [sum((Fraction(t) * x for t, x in zip(self.transform[i], b)), Fraction(0))
              for i in range(self.rank)]
        y = [Fraction(0)] * self.ncols
        for i in range(self.rank - 1, -1, -1):
            c = self.pivots[i]
            acc = tb[i]
            row = self.echelon[i]
            for j in range(i + 1, self.rank):
                cj = self.pivots[j]
                if row[cj]:
                    acc -= row[cj] * y[cj]
            y[c] = acc / row[c]
        return tuple(y)


def solve(matrix, b):
    """One-shot exact solve; returns a tuple of Fractions or None."""
    return EchelonSolver(matrix).solve(b)


def nullspace(matrix) -> list[tuple[Fraction, ...]]:
    """Basis of the right nullspace (one vector per free column)."""
    rows = _int_rows(matrix)
    ncols = len(rows[0]) if rows else 0
    ech, _, pivots = int_echelon(rows, track=False)
    # back-substitute to reduced form over Q
    red = [[Fraction(x) for x in row] for row in ech]
    for i in range(len(red) - 1, -1, -1):
        c = pivots[i]
        red[i] = [x / red[i][c] for x in red[i]]
        for j in range(i):
            f = red[j][c]
            if f:
                red[j] = [a - f * b for a, b in zip(red[j], red[i])]
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for row, pc in zip(red, pivots):
            v[pc] = -row[fc]
        basis.append(tuple(v))
    return basis


def nullspace_int(matrix) -> np.ndarray:
    """Nullspace basis scaled to integers, as an object-dtype array (rows)."""
    rows = _int_rows(matrix)
    basis = nullspace(rows)
    if not basis:
        return np.zeros((0, len(rows[0]) if rows else 0), dtype=object)
    out = []
    for v in basis:
        mult = lcm(*(x.denominator for x in v))
        out.append([int(x * mult) for x in v])
    return np.array(out, dtype=object)


# ---------------------------------------------------------------------------
# guarded integer products

def _max_abs(a: np.ndarray) -> int:
    if a.size == 0:
        return 0
    if a.dtype == object:
        return max(abs(int(x)) for x in a.flat)
    return int(np.abs(a).max())


def int_matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Exact integer product; int64 fast path under a proven bound."""
    inner = a.shape[-1]
    bound = _max_abs(a) * _max_abs(b) * max(inner, 1)
    if bound < 2**62 and a.dtype != object and b.dtype != object:
        return a.astype(np.int64) @ b.astype(np.int64)
    return np.dot(a.astype(object), b.astype(object))


def int_matvec(a: np.ndarray, v: np.ndarray) -> np.ndarray:
    return int_matmul(a, v.reshape(-1, 1)).reshape(-1)
