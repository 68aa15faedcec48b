"""Exact Gaussian-rational arithmetic and linear algebra.

All chart-level identities and all invariant-complex cohomology ranks are
polynomial statements over Q(i), so they are checked with no floating point
at all.  CRat is a thin immutable wrapper around a pair of Fractions; mixed
arithmetic with python complex degrades gracefully to complex (used at the
hodge/flow boundary where eigendecompositions take over).
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

Scalar = Union["CRat", complex, float, int]


class CRat:
    """A Gaussian rational: re + im*i with exact Fraction parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, *a):
        raise AttributeError("CRat is immutable")

    # -- arithmetic (exact with CRat/int/Fraction, complex otherwise) --

    def _coerce(self, other):
        if isinstance(other, CRat):
            return other
        if isinstance(other, (int, Fraction)):
            return CRat(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            if isinstance(other, (float, complex)):
                return complex(self) + other
            return NotImplemented
        return CRat(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            if isinstance(other, (float, complex)):
                return complex(self) - other
            return NotImplemented
        return CRat(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            if isinstance(other, (float, complex)):
                return other - complex(self)
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            if isinstance(other, (float, complex)):
                return complex(self) * other
            return NotImplemented
        return CRat(self.re * o.re - self.im * o.im,
                    self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            if isinstance(other, (float, complex)):
                return complex(self) / other
            return NotImplemented
        n = o.re * o.re + o.im * o.im
        if n == 0:
            raise ZeroDivisionError("division by zero CRat")
        return CRat((self.re * o.re + self.im * o.im) / n,
                    (self.im * o.re - self.re * o.im) / n)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            if isinstance(other, (float, complex)):
                return other / complex(self)
            return NotImplemented
        return o / self

    def __neg__(self):
        return CRat(-self.re, -self.im)

    def __pos__(self):
        return self

    def conjugate(self) -> "CRat":
        return CRat(self.re, -self.im)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            if isinstance(other, (float, complex)):
                return complex(self) == other
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return self.re != 0 or self.im != 0

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __abs__(self):
        return abs(complex(self))

    def __repr__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return "%si" % self.im
        sign = "+" if self.im > 0 else "-"
        return "%s%s%si" % (self.re, sign, abs(self.im))


ZERO = CRat(0)
ONE = CRat(1)
I = CRat(0, 1)


def ipow(k: int) -> CRat:
    """Exact i**k for any integer k."""
    return (ONE, I, CRat(-1), CRat(0, -1))[k % 4]


def as_crat(x: Scalar) -> CRat:
    if isinstance(x, CRat):
        return x
    if isinstance(x, (int, Fraction)):
        return CRat(x)
    raise TypeError("cannot coerce %r to CRat exactly" % (x,))


def is_exact(x) -> bool:
    return isinstance(x, (CRat, int, Fraction))


def conj_scalar(x: Scalar) -> Scalar:
    if isinstance(x, CRat):
        return x.conjugate()
    if isinstance(x, (int, Fraction)):
        return x
    return x.conjugate() if hasattr(x, "conjugate") else complex(x).conjugate()


# -- exact dense linear algebra over CRat ------------------------------------
#
# Matrices are lists of rows of CRat.  Sizes here never exceed a few hundred
# (wedge-basis dimensions of invariant complexes), so textbook Gaussian
# elimination with exact pivoting is plenty.


def exact_rank(rows: Sequence[Sequence[CRat]]) -> int:
    m = [list(r) for r in rows]
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    rank = 0
    row = 0
    for col in range(ncols):
        piv = None
        for r in range(row, nrows):
            if m[r][col]:
                piv = r
                break
        if piv is None:
            continue
        m[row], m[piv] = m[piv], m[row]
        inv = ONE / m[row][col]
        m[row] = [x * inv for x in m[row]]
        for r in range(nrows):
            if r != row and m[r][col]:
                f = m[r][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[row])]
        rank += 1
        row += 1
        if row == nrows:
            break
    return rank


def exact_solve(rows: Sequence[Sequence[CRat]],
                rhs: Sequence[CRat]) -> Optional[List[CRat]]:
    """One solution of A x = b over Q(i), or None if inconsistent."""
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    aug = [list(r) + [rhs[i]] for i, r in enumerate(rows)]
    pivots: List[Tuple[int, int]] = []
    row = 0
    for col in range(ncols):
        piv = None
        for r in range(row, nrows):
            if aug[r][col]:
                piv = r
                break
        if piv is None:
            continue
        aug[row], aug[piv] = aug[piv], aug[row]
        inv = ONE / aug[row][col]
        aug[row] = [x * inv for x in aug[row]]
        for r in range(nrows):
            if r != row and aug[r][col]:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[row])]
        pivots.append((row, col))
        row += 1
        if row == nrows:
            break
    for r in range(row, nrows):
        if aug[r][ncols]:
            return None
    x = [ZERO] * ncols
    for r, c in pivots:
        x[c] = aug[r][ncols]
    return x


def exact_nullspace(rows: Sequence[Sequence[CRat]]) -> List[List[CRat]]:
    """Basis of the right nullspace of A over Q(i)."""
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    m = [list(r) for r in rows]
    pivots: List[int] = []
    row = 0
    for col in range(ncols):
        piv = None
        for r in range(row, nrows):
            if m[r][col]:
                piv = r
                break
        if piv is None:
            continue
        m[row], m[piv] = m[piv], m[row]
        inv = ONE / m[row][col]
        m[row] = [x * inv for x in m[row]]
        for r in range(nrows):
            if r != row and m[r][col]:
                f = m[r][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[row])]
        pivots.append(col)
        row += 1
        if row == nrows:
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [ZERO] * ncols
        v[fc] = ONE
        for r, c in enumerate(pivots):
            v[c] = -m[r][fc]
        basis.append(v)
    return basis
