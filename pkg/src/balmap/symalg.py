"""Exact bigraded exterior calculus on a coordinate chart.

Forms have polynomial coefficients in z_1..z_d, zbar_1..zbar_d over the
Gaussian rationals, stored on the wedge basis dz_I ^ dzbar_J with both
multi-indices strictly increasing and all dz factors in front of all dzbar
factors.  Every operation normalizes back to this basis and tracks the
permutation sign, so identity checks reduce to exact dictionary equality.

Conventions pinned here and reused by the invariant backend:

* contraction is the degree -1 antiderivation with v . (a ^ b) =
  (v . a) ^ b + (-1)^deg(a) a ^ (v . b), and a (1,0) field pairs only
  with dz factors, a (0,1) field only with dzbar factors;
* evaluation u(v_1, ..., v_k) = v_k . (... (v_1 . u));
* graded commutator [A, B] = A B - (-1)^(ab) B A.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .exact import CRat, ONE, ZERO, I, ipow

Monomial = Tuple[Tuple[int, ...], Tuple[int, ...]]  # (z exponents, zbar exponents)
BasisKey = Tuple[Tuple[int, ...], Tuple[int, ...]]  # (I, J), strictly increasing


# -- polynomials --------------------------------------------------------------


class Poly:
    """Polynomial in z_1..z_d, zbar_1..zbar_d with CRat coefficients."""

    __slots__ = ("dim", "terms")

    def __init__(self, dim: int, terms: Optional[Dict[Monomial, CRat]] = None):
        self.dim = dim
        t = {}
        if terms:
            for mon, c in terms.items():
                if c:
                    t[mon] = c
        self.terms = t

    # constructors

    @staticmethod
    def const(dim: int, c) -> "Poly":
        c = c if isinstance(c, CRat) else CRat(c)
        zero = (0,) * dim
        return Poly(dim, {(zero, zero): c} if c else {})

    @staticmethod
    def z(dim: int, j: int) -> "Poly":
        a = [0] * dim
        a[j - 1] = 1
        return Poly(dim, {(tuple(a), (0,) * dim): ONE})

    @staticmethod
    def zbar(dim: int, j: int) -> "Poly":
        b = [0] * dim
        b[j - 1] = 1
        return Poly(dim, {((0,) * dim, tuple(b)): ONE})

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, (int, CRat, Fraction)):
            other = Poly.const(self.dim, other)
        return self.dim == other.dim and self.terms == other.terms

    def __hash__(self):
        return hash((self.dim, tuple(sorted(self.terms.items(), key=repr))))

    def __add__(self, other):
        if isinstance(other, (int, CRat, Fraction)):
            other = Poly.const(self.dim, other)
        out = dict(self.terms)
        for mon, c in other.terms.items():
            s = out.get(mon, ZERO) + c
            if s:
                out[mon] = s
            else:
                out.pop(mon, None)
        return Poly(self.dim, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.dim, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other if isinstance(other, Poly) else Poly.const(self.dim, other).__neg__())

    def __mul__(self, other):
        if isinstance(other, (int, CRat, Fraction)):
            other = Poly.const(self.dim, other)
        out: Dict[Monomial, CRat] = {}
        for (a1, b1), c1 in self.terms.items():
            for (a2, b2), c2 in other.terms.items():
                mon = (tuple(x + y for x, y in zip(a1, a2)),
                       tuple(x + y for x, y in zip(b1, b2)))
                s = out.get(mon, ZERO) + c1 * c2
                if s:
                    out[mon] = s
                else:
                    out.pop(mon, None)
        return Poly(self.dim, out)

    __rmul__ = __mul__

    def conj(self) -> "Poly":
        return Poly(self.dim, {(b, a): c.conjugate() for (a, b), c in self.terms.items()})

    def dz(self, j: int) -> "Poly":
        """Partial derivative with respect to z_j (1-based)."""
        out = {}
        for (a, b), c in self.terms.items():
            e = a[j - 1]
            if e:
                aa = list(a)
                aa[j - 1] = e - 1
                mon = (tuple(aa), b)
                s = out.get(mon, ZERO) + c * e
                if s:
                    out[mon] = s
                else:
                    out.pop(mon, None)
        return Poly(self.dim, out)

    def dzbar(self, j: int) -> "Poly":
        out = {}
        for (a, b), c in self.terms.items():
            e = b[j - 1]
            if e:
                bb = list(b)
                bb[j - 1] = e - 1
                mon = (a, tuple(bb))
                s = out.get(mon, ZERO) + c * e
                if s:
                    out[mon] = s
                else:
                    out.pop(mon, None)
        return Poly(self.dim, out)

    def antider_z(self, j: int) -> "Poly":
        """Antiderivative in z_j; exact on polynomials."""
        out = {}
        for (a, b), c in self.terms.items():
            aa = list(a)
            aa[j - 1] += 1
            out[(tuple(aa), b)] = c * CRat(Fraction(1, aa[j - 1]))
        return Poly(self.dim, out)

    def is_holomorphic(self) -> bool:
        return all(not any(b) for (_, b) in self.terms)

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for (a, b), c in sorted(self.terms.items()):
            mon = "".join("z%d^%d" % (i + 1, e) if e > 1 else "z%d" % (i + 1)
                          for i, e in enumerate(a) if e)
            mon += "".join("w%d^%d" % (i + 1, e) if e > 1 else "w%d" % (i + 1)
                           for i, e in enumerate(b) if e)
            bits.append("(%r)%s" % (c, mon))
        return " + ".join(bits)


# -- wedge-word normalization --------------------------------------------------


def merge_increasing(idx: Sequence[int], j: int) -> Optional[Tuple[int, Tuple[int, ...]]]:
    """Insert j into a strictly increasing tuple; returns (sign, new tuple)."""
    pos = 0
    for k, v in enumerate(idx):
        if v == j:
            return None
        if v < j:
            pos = k + 1
    return ((-1) ** pos, tuple(idx[:pos]) + (j,) + tuple(idx[pos:]))


def remove_index(idx: Sequence[int], j: int) -> Optional[Tuple[int, Tuple[int, ...]]]:
    for k, v in enumerate(idx):
        if v == j:
            return ((-1) ** k, tuple(idx[:k]) + tuple(idx[k + 1:]))
    return None


def merge_sorted(a: Sequence[int], b: Sequence[int]) -> Optional[Tuple[int, Tuple[int, ...]]]:
    """Sign and merge of the concatenation of two increasing index tuples."""
    if set(a) & set(b):
        return None
    inversions = sum(1 for x in a for y in b if y < x)
    return (-1) ** inversions, tuple(sorted(a + b))


# -- forms ---------------------------------------------------------------------


class ChartForm:
    """Element of the bigraded algebra; possibly inhomogeneous."""

    __slots__ = ("dim", "terms")

    def __init__(self, dim: int, terms: Optional[Dict[BasisKey, Poly]] = None):
        self.dim = dim
        t = {}
        if terms:
            for key, p in terms.items():
                if p:
                    t[key] = p
        self.terms = t

    @staticmethod
    def zero(dim: int) -> "ChartForm":
        return ChartForm(dim)

    @staticmethod
    def from_function(p: Poly) -> "ChartForm":
        return ChartForm(p.dim, {((), ()): p})

    @staticmethod
    def basis(dim: int, I: Sequence[int], J: Sequence[int], coeff=None) -> "ChartForm":
        p = coeff if isinstance(coeff, Poly) else Poly.const(dim, 1 if coeff is None else coeff)
        return ChartForm(dim, {(tuple(I), tuple(J)): p})

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return (isinstance(other, ChartForm) and self.dim == other.dim
                and self.terms == other.terms)

    def __add__(self, other):
        if not isinstance(other, ChartForm):
            return NotImplemented
        out = dict(self.terms)
        for key, p in other.terms.items():
            s = out.get(key)
            s = p if s is None else s + p
            if s:
                out[key] = s
            else:
                out.pop(key, None)
        return ChartForm(self.dim, out)

    def __neg__(self):
        return ChartForm(self.dim, {k: -p for k, p in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "ChartForm":
        cs = c if isinstance(c, (Poly,)) else Poly.const(self.dim, c)
        return ChartForm(self.dim, {k: p * cs for k, p in self.terms.items()})

    def bidegrees(self) -> set:
        return {(len(I), len(J)) for I, J in self.terms}

    def bidegree(self) -> Optional[Tuple[int, int]]:
        bs = self.bidegrees()
        return bs.pop() if len(bs) == 1 else None

    def homogeneous_part(self, p: int, q: int) -> "ChartForm":
        return ChartForm(self.dim, {k: v for k, v in self.terms.items()
                                    if len(k[0]) == p and len(k[1]) == q})

    def conj(self) -> "ChartForm":
        out = {}
        for (Iidx, Jidx), p in self.terms.items():
            # conj(dz_I ^ dzbar_J) = dzbar_I ^ dz_J = sign * dz_J ^ dzbar_I
            sign = (-1) ** (len(Iidx) * len(Jidx))
            key = (Jidx, Iidx)
            q = p.conj() * CRat(sign)
            s = out.get(key)
            out[key] = q if s is None else s + q
        return ChartForm(self.dim, out)

    def coefficient(self, I: Sequence[int], J: Sequence[int]) -> Poly:
        return self.terms.get((tuple(I), tuple(J)), Poly(self.dim))

    def __repr__(self):
        if not self.terms:
            return "ChartForm(0)"
        bits = []
        for (Iidx, Jidx), p in sorted(self.terms.items()):
            w = "".join("dz%d" % i for i in Iidx) + "".join("dw%d" % j for j in Jidx)
            bits.append("[%r] %s" % (p, w or "1"))
        return "ChartForm(" + " + ".join(bits) + ")"


def wedge(u: ChartForm, v: ChartForm) -> ChartForm:
    if u.dim != v.dim:
        raise ValueError("wedge: chart dimension mismatch (%d vs %d)" % (u.dim, v.dim))
    out: Dict[BasisKey, Poly] = {}
    for (I1, J1), p1 in u.terms.items():
        for (I2, J2), p2 in v.terms.items():
            mi = merge_sorted(I1, I2)
            if mi is None:
                continue
            mj = merge_sorted(J1, J2)
            if mj is None:
                continue
            # moving dz_I2 (len |I2|) across dzbar_J1 (len |J1|)
            sign = mi[0] * mj[0] * ((-1) ** (len(J1) * len(I2)))
            key = (mi[1], mj[1])
            q = p1 * p2 * CRat(sign)
            s = out.get(key)
            s = q if s is None else s + q
            if s:
                out[key] = s
            else:
                out.pop(key, None)
    return ChartForm(u.dim, out)


def wedge_all(forms: Sequence[ChartForm]) -> ChartForm:
    acc = forms[0]
    for f in forms[1:]:
        acc = wedge(acc, f)
    return acc


# -- vector fields --------------------------------------------------------------

HOLO = "1,0"
ANTI = "0,1"


class ChartVectorField:
    """Type (1,0) or (0,1) field with polynomial components."""

    __slots__ = ("dim", "kind", "comps")

    def __init__(self, dim: int, kind: str, comps: Sequence[Poly]):
        if kind not in (HOLO, ANTI):
            raise ValueError("kind must be %r or %r" % (HOLO, ANTI))
        if len(comps) != dim:
            raise ValueError("expected %d components" % dim)
        self.dim = dim
        self.kind = kind
        self.comps = tuple(comps)

    @staticmethod
    def frame(dim: int, j: int) -> "ChartVectorField":
        comps = [Poly.const(dim, 1 if k == j - 1 else 0) for k in range(dim)]
        return ChartVectorField(dim, HOLO, comps)

    @staticmethod
    def frame_bar(dim: int, j: int) -> "ChartVectorField":
        comps = [Poly.const(dim, 1 if k == j - 1 else 0) for k in range(dim)]
        return ChartVectorField(dim, ANTI, comps)

    def conj(self) -> "ChartVectorField":
        return ChartVectorField(self.dim, ANTI if self.kind == HOLO else HOLO,
                                [p.conj() for p in self.comps])

    def scale(self, c) -> "ChartVectorField":
        cs = c if isinstance(c, Poly) else Poly.const(self.dim, c)
        return ChartVectorField(self.dim, self.kind, [p * cs for p in self.comps])

    def __add__(self, other):
        if isinstance(other, ChartVectorField) and other.kind == self.kind:
            return ChartVectorField(self.dim, self.kind,
                                    [a + b for a, b in zip(self.comps, other.comps)])
        return MixedField.of(self) + MixedField.of(other)

    def apply(self, f: Poly) -> Poly:
        """Directional derivative of a function."""
        out = Poly(self.dim)
        for j, c in enumerate(self.comps, start=1):
            if c:
                out = out + c * (f.dz(j) if self.kind == HOLO else f.dzbar(j))
        return out

    def is_holomorphic(self) -> bool:
        return self.kind == HOLO and all(p.is_holomorphic() for p in self.comps)

    def divergence(self) -> Poly:
        out = Poly(self.dim)
        for j, c in enumerate(self.comps, start=1):
            out = out + (c.dz(j) if self.kind == HOLO else c.dzbar(j))
        return out

    def __repr__(self):
        sym = "Z" if self.kind == HOLO else "W"
        bits = ["(%r)%s%d" % (p, sym, j + 1) for j, p in enumerate(self.comps) if p]
        return "Field[" + (" + ".join(bits) or "0") + "]"


class MixedField:
    """Sum of a (1,0) part and a (0,1) part (mixed Lie brackets)."""

    __slots__ = ("dim", "holo", "anti")

    def __init__(self, dim: int, holo: Optional[ChartVectorField],
                 anti: Optional[ChartVectorField]):
        self.dim = dim
        self.holo = holo
        self.anti = anti

    @staticmethod
    def of(v) -> "MixedField":
        if isinstance(v, MixedField):
            return v
        if v.kind == HOLO:
            return MixedField(v.dim, v, None)
        return MixedField(v.dim, None, v)

    def __add__(self, other):
        o = MixedField.of(other)

        def plus(a, b):
            if a is None:
                return b
            if b is None:
                return a
            return ChartVectorField(a.dim, a.kind,
                                    [x + y for x, y in zip(a.comps, b.comps)])
        return MixedField(self.dim, plus(self.holo, o.holo), plus(self.anti, o.anti))

    def parts(self) -> List[ChartVectorField]:
        return [p for p in (self.holo, self.anti) if p is not None]

    def is_zero(self) -> bool:
        return all(not any(p.comps) for p in self.parts()) if self.parts() else True


FieldLike = Union[ChartVectorField, MixedField]


def contract(v: FieldLike, u: ChartForm) -> ChartForm:
    """Interior product; antiderivation of degree -1."""
    if isinstance(v, MixedField):
        out = ChartForm.zero(u.dim)
        for part in v.parts():
            out = out + contract(part, u)
        return out
    if v.dim != u.dim:
        raise ValueError("contract: chart dimension mismatch")
    out: Dict[BasisKey, Poly] = {}
    for (Iidx, Jidx), p in u.terms.items():
        for j, comp in enumerate(v.comps, start=1):
            if not comp:
                continue
            if v.kind == HOLO:
                r = remove_index(Iidx, j)
                if r is None:
                    continue
                sign, newI = r
                key = (newI, Jidx)
            else:
                r = remove_index(Jidx, j)
                if r is None:
                    continue
                sign, newJ = r
                sign *= (-1) ** len(Iidx)
                key = (Iidx, newJ)
            q = p * comp * CRat(sign)
            s = out.get(key)
            s = q if s is None else s + q
            if s:
                out[key] = s
            else:
                out.pop(key, None)
    return ChartForm(u.dim, out)


def contract_all(fields: Sequence[FieldLike], u: ChartForm) -> ChartForm:
    """fields[0] . fields[1] . ... . fields[-1] . u (rightmost first)."""
    acc = u
    for v in reversed(fields):
        acc = contract(v, acc)
    return acc


def evaluate(u: ChartForm, fields: Sequence[FieldLike]) -> Poly:
    """u(v_1, ..., v_k) = v_k . (... (v_1 . u))."""
    acc = u
    for v in fields:
        acc = contract(v, acc)
    return acc.coefficient((), ())


def chart_del(u: ChartForm) -> ChartForm:
    out: Dict[BasisKey, Poly] = {}
    for (Iidx, Jidx), p in u.terms.items():
        for j in range(1, u.dim + 1):
            dp = p.dz(j)
            if not dp:
                continue
            r = merge_increasing(Iidx, j)
            if r is None:
                continue
            sign, newI = r
            key = (newI, Jidx)
            q = dp * CRat(sign)
            s = out.get(key)
            s = q if s is None else s + q
            if s:
                out[key] = s
            else:
                out.pop(key, None)
    return ChartForm(u.dim, out)


def chart_delbar(u: ChartForm) -> ChartForm:
    out: Dict[BasisKey, Poly] = {}
    for (Iidx, Jidx), p in u.terms.items():
        for j in range(1, u.dim + 1):
            dp = p.dzbar(j)
            if not dp:
                continue
            r = merge_increasing(Jidx, j)
            if r is None:
                continue
            sign, newJ = r
            sign *= (-1) ** len(Iidx)  # dzbar_j passes the dz_I block
            key = (Iidx, newJ)
            q = dp * CRat(sign)
            s = out.get(key)
            s = q if s is None else s + q
            if s:
                out[key] = s
            else:
                out.pop(key, None)
    return ChartForm(u.dim, out)


def chart_d(u: ChartForm) -> ChartForm:
    return chart_del(u) + chart_delbar(u)


def lie_bracket(a: FieldLike, b: FieldLike) -> FieldLike:
    """Lie bracket of fields; mixed-kind results carry both parts."""
    if isinstance(a, MixedField) or isinstance(b, MixedField):
        am, bm = MixedField.of(a), MixedField.of(b)
        out = MixedField(am.dim, None, None)
        for pa in am.parts():
            for pb in bm.parts():
                out = out + lie_bracket(pa, pb)
        return out
    dim = a.dim
    if a.kind == b.kind:
        comps = [a.apply(b.comps[j]) - b.apply(a.comps[j]) for j in range(dim)]
        return ChartVectorField(dim, a.kind, comps)
    holo_comps = [a.apply(b.comps[j]) if b.kind == HOLO else -b.apply(a.comps[j])
                  for j in range(dim)]
    anti_comps = [a.apply(b.comps[j]) if b.kind == ANTI else -b.apply(a.comps[j])
                  for j in range(dim)]
    holo = ChartVectorField(dim, HOLO, holo_comps)
    anti = ChartVectorField(dim, ANTI, anti_comps)
    m = MixedField(dim, holo if any(holo.comps) else None,
                   anti if any(anti.comps) else None)
    return m


def lie10(xi: ChartVectorField, u: ChartForm) -> ChartForm:
    """xi . (del u) + del (xi . u) for a (1,0) field."""
    if xi.kind != HOLO:
        raise ValueError("lie10 expects a (1,0) field")
    return contract(xi, chart_del(u)) + chart_del(contract(xi, u))


def lie01(eta_bar: ChartVectorField, u: ChartForm) -> ChartForm:
    if eta_bar.kind != ANTI:
        raise ValueError("lie01 expects a (0,1) field")
    return contract(eta_bar, chart_delbar(u)) + chart_delbar(contract(eta_bar, u))


def lie_std(a: FieldLike, u: ChartForm) -> ChartForm:
    """Standard Lie derivative a . (d u) + d (a . u)."""
    return contract(a, chart_d(u)) + chart_d(contract(a, u))


def dbar_field_contract(xi: ChartVectorField, u: ChartForm) -> ChartForm:
    """(dbar xi) . u for a (1,0) field: sum_jk (d xi_j / d zbar_k) dzbar_k ^ (Z_j . u)."""
    if xi.kind != HOLO:
        raise ValueError("expects a (1,0) field")
    out = ChartForm.zero(u.dim)
    for j in range(1, u.dim + 1):
        inner = contract(ChartVectorField.frame(u.dim, j), u)
        if not inner:
            continue
        for k in range(1, u.dim + 1):
            dc = xi.comps[j - 1].dzbar(k)
            if dc:
                out = out + wedge(ChartForm.basis(u.dim, (), (k,)), inner).scale(dc)
    return out


def del_field_contract(eta_bar: ChartVectorField, u: ChartForm) -> ChartForm:
    """(del eta_bar) . u for a (0,1) field."""
    if eta_bar.kind != ANTI:
        raise ValueError("expects a (0,1) field")
    out = ChartForm.zero(u.dim)
    for j in range(1, u.dim + 1):
        inner = contract(ChartVectorField.frame_bar(u.dim, j), u)
        if not inner:
            continue
        for k in range(1, u.dim + 1):
            dc = eta_bar.comps[j - 1].dz(k)
            if dc:
                out = out + wedge(ChartForm.basis(u.dim, (k,), ()), inner).scale(dc)
    return out


def standard_volume(dim: int) -> ChartForm:
    """i^(d^2) dz_1..d ^ dzbar_1..d, the positive Euclidean volume form."""
    idx = tuple(range(1, dim + 1))
    return ChartForm.basis(dim, idx, idx, ipow(dim * dim))


# -- random data for the identity suite ----------------------------------------


def _rand_crat(rng: random.Random) -> CRat:
    num = rng.randint(-2, 2)
    den = rng.randint(1, 2)
    if rng.random() < 0.4:
        return CRat(Fraction(num, den), Fraction(rng.randint(-1, 1)))
    return CRat(Fraction(num, den))


def random_poly(rng: random.Random, dim: int, deg: int = 2, nterms: int = 2,
                holomorphic: bool = False) -> Poly:
    terms: Dict[Monomial, CRat] = {}
    for _ in range(nterms):
        a = [0] * dim
        b = [0] * dim
        for _ in range(rng.randint(0, deg)):
            if holomorphic or rng.random() < 0.5:
                a[rng.randrange(dim)] += 1
            else:
                b[rng.randrange(dim)] += 1
        c = _rand_crat(rng)
        if c:
            terms[(tuple(a), tuple(b))] = terms.get((tuple(a), tuple(b)), ZERO) + c
    return Poly(dim, {m: c for m, c in terms.items() if c})


def random_form(rng: random.Random, dim: int, p: int, q: int,
                nterms: int = 2) -> ChartForm:
    from itertools import combinations
    Is = list(combinations(range(1, dim + 1), p))
    Js = list(combinations(range(1, dim + 1), q))
    out = ChartForm.zero(dim)
    for _ in range(nterms):
        key = (rng.choice(Is), rng.choice(Js))
        out = out + ChartForm.basis(dim, key[0], key[1], random_poly(rng, dim))
    return out


def random_field(rng: random.Random, dim: int, kind: str = HOLO,
                 holomorphic: bool = False) -> ChartVectorField:
    comps = [random_poly(rng, dim, nterms=1, holomorphic=holomorphic)
             for _ in range(dim)]
    if not any(comps):
        comps[rng.randrange(dim)] = Poly.const(dim, 1)
    if kind == ANTI:
        # a (0,1) field with anti-holomorphic coefficients is the conjugate
        # of a holomorphic one; for general smooth fields keep mixed coeffs
        return ChartVectorField(dim, ANTI, comps)
    return ChartVectorField(dim, HOLO, comps)


def random_holomorphic_field(rng: random.Random, dim: int) -> ChartVectorField:
    return random_field(rng, dim, HOLO, holomorphic=True)


def random_divergence_free_holomorphic_field(rng: random.Random,
                                             dim: int) -> ChartVectorField:
    """Holomorphic polynomial field with zero divergence (volume preserving)."""
    comps = [random_poly(rng, dim, nterms=1, holomorphic=True) for _ in range(dim)]
    rest = Poly(dim)
    for j in range(2, dim + 1):
        rest = rest + comps[j - 1].dz(j)
    comps[0] = -rest.antider_z(1)
    return ChartVectorField(dim, HOLO, comps)


# -- the identity suite ----------------------------------------------------------


@dataclass
class IdentityRecord:
    name: str
    law: str
    trials: int
    failures: int
    expected_failure: bool = False
    counterexample: Optional[str] = None

    @property
    def ok(self) -> bool:
        if self.expected_failure:
            return self.failures > 0
        return self.failures == 0


@dataclass
class SuiteReport:
    seed: int
    trials: int
    records: List[IdentityRecord] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.records)

    def add(self, rec: IdentityRecord):
        self.records.append(rec)


def _check(report, rng, name, law, trials, gen, lhs_rhs, expected_failure=False):
    failures = 0
    example = None
    for _ in range(trials):
        data = gen(rng)
        lhs, rhs = lhs_rhs(*data)
        if lhs != rhs:
            failures += 1
            if example is None:
                example = "inputs=%r lhs=%r rhs=%r" % (data, lhs, rhs)
    report.add(IdentityRecord(name, law, trials, failures,
                              expected_failure=expected_failure,
                              counterexample=example))


def identity_suite(seed: int = 0, trials: int = 50) -> SuiteReport:
    """Exercise the (1,0)/(0,1) Lie-derivative laws over random exact data.

    Every check is exact rational equality of canonical forms; a failing
    identity is reported with a serialized counterexample.  The two
    expected-failure probes document scope restrictions (function-linearity
    only on (0,q) resp. (p,0) forms, and the mixed second-derivative law
    needing one holomorphic argument).
    """
    rng = random.Random(seed)
    rep = SuiteReport(seed=seed, trials=trials)

    def dims(r):
        return r.choice((2, 3, 4))

    def any_form(r, d):
        p = r.randint(0, min(2, d))
        q = r.randint(0, min(2, d))
        return random_form(r, d, p, q, nterms=1)

    # decomposition of the full Lie derivative by type
    def gen_i(r):
        d = dims(r)
        return random_field(r, d), any_form(r, d)
    _check(rep, rng, "lie-decomposition-10", "lie10-plus-dbar-contraction", trials,
           gen_i, lambda xi, u: (lie_std(xi, u),
                                 lie10(xi, u) + dbar_field_contract(xi, u)))

    def gen_i_bar(r):
        d = dims(r)
        return random_field(r, d, ANTI), any_form(r, d)
    _check(rep, rng, "lie-decomposition-01", "lie01-plus-del-contraction", trials,
           gen_i_bar, lambda eb, u: (lie_std(eb, u),
                                     lie01(eb, u) + del_field_contract(eb, u)))

    # on functions: L10_xi f = xi . f
    def gen_ii(r):
        d = dims(r)
        return random_field(r, d), random_poly(r, d)
    _check(rep, rng, "lie10-on-functions", "lie10-directional-derivative", trials,
           gen_ii, lambda xi, f: (lie10(xi, ChartForm.from_function(f)),
                                  ChartForm.from_function(xi.apply(f))))
    _check(rep, rng, "lie01-on-functions", "lie01-directional-derivative", trials,
           lambda r: (lambda d: (random_field(r, d, ANTI), random_poly(r, d)))(dims(r)),
           lambda eb, f: (lie01(eb, ChartForm.from_function(f)),
                          ChartForm.from_function(eb.apply(f))))

    # commutators with del/delbar
    _check(rep, rng, "lie10-del-commutes", "lie10-del-commutator-zero", trials,
           gen_i, lambda xi, u: (lie10(xi, chart_del(u)), chart_del(lie10(xi, u))))
    _check(rep, rng, "lie10-delbar-commutator", "lie10-delbar-equals-del-dbarxi", trials,
           gen_i, lambda xi, u: (lie10(xi, chart_delbar(u)) - chart_delbar(lie10(xi, u)),
                                 chart_del(dbar_field_contract(xi, u))
                                 - dbar_field_contract(xi, chart_del(u))))
    _check(rep, rng, "lie01-delbar-commutes", "lie01-delbar-commutator-zero", trials,
           gen_i_bar, lambda eb, u: (lie01(eb, chart_delbar(u)),
                                     chart_delbar(lie01(eb, u))))
    _check(rep, rng, "lie01-del-commutator", "lie01-del-equals-delbar-deleta", trials,
           gen_i_bar, lambda eb, u: (lie01(eb, chart_del(u)) - chart_del(lie01(eb, u)),
                                     chart_delbar(del_field_contract(eb, u))
                                     - del_field_contract(eb, chart_delbar(u))))

    # contraction / Lie-derivative commutators
    def gen_iv(r):
        d = dims(r)
        return random_field(r, d), random_field(r, d), any_form(r, d)
    _check(rep, rng, "contract-lie10-commutator", "bracket-contraction", trials,
           gen_iv, lambda xi, eta, u: (contract(xi, lie10(eta, u))
                                       - lie10(eta, contract(xi, u)),
                                       contract(lie_bracket(xi, eta), u)))
    _check(rep, rng, "lie10-lie10-commutator", "lie10-of-bracket", trials,
           gen_iv, lambda xi, eta, u: (lie10(xi, lie10(eta, u)) - lie10(eta, lie10(xi, u)),
                                       lie10(lie_bracket(xi, eta), u)))

    def gen_iv_bar(r):
        d = dims(r)
        return random_field(r, d, ANTI), random_field(r, d, ANTI), any_form(r, d)
    _check(rep, rng, "contract-lie01-commutator", "bracket-contraction-conj", trials,
           gen_iv_bar, lambda xb, eb, u: (contract(xb, lie01(eb, u))
                                          - lie01(eb, contract(xb, u)),
                                          contract(lie_bracket(xb, eb), u)))
    _check(rep, rng, "lie01-lie01-commutator", "lie01-of-bracket", trials,
           gen_iv_bar, lambda xb, eb, u: (lie01(xb, lie01(eb, u)) - lie01(eb, lie01(xb, u)),
                                          lie01(lie_bracket(xb, eb), u)))

    # Leibniz over wedge
    def gen_v(r):
        d = dims(r)
        return random_field(r, d), any_form(r, d), any_form(r, d)
    _check(rep, rng, "lie10-leibniz", "lie10-wedge-derivation", trials,
           gen_v, lambda xi, u, v: (lie10(xi, wedge(u, v)),
                                    wedge(lie10(xi, u), v) + wedge(u, lie10(xi, v))))
    _check(rep, rng, "lie01-leibniz", "lie01-wedge-derivation", trials,
           lambda r: (lambda d: (random_field(r, d, ANTI), any_form(r, d),
                                 any_form(r, d)))(dims(r)),
           lambda eb, u, v: (lie01(eb, wedge(u, v)),
                             wedge(lie01(eb, u), v) + wedge(u, lie01(eb, v))))

    # holomorphic field through an opposite-type contraction
    def gen_vi(r):
        d = dims(r)
        return (random_holomorphic_field(r, d), random_field(r, d, ANTI),
                any_form(r, d))
    _check(rep, rng, "lie10-through-anti-contraction", "holomorphic-pushthrough", trials,
           gen_vi, lambda xi, eb, a: (lie10(xi, contract(eb, a)),
                                      contract(eb, lie10(xi, a))
                                      + contract(lie_bracket(xi, eb), a)))

    def gen_vi_bar(r):
        d = dims(r)
        eta = random_holomorphic_field(r, d)
        return (eta.conj(), random_field(r, d), any_form(r, d))
    _check(rep, rng, "lie01-through-holo-contraction", "holomorphic-pushthrough-conj",
           trials, gen_vi_bar,
           lambda eb, xi, a: (lie01(eb, contract(xi, a)),
                              contract(xi, lie01(eb, a))
                              + contract(lie_bracket(eb, xi), a)))

    # function-linearity on (0,q) forms
    def gen_vii(r):
        d = dims(r)
        q = r.randint(0, min(2, d))
        return (random_poly(r, d), random_poly(r, d), random_field(r, d),
                random_field(r, d), random_form(r, d, 0, q, nterms=1))
    _check(rep, rng, "lie10-function-linear-0q", "function-linearity-0q", trials,
           gen_vii, lambda f, g, xi, eta, a:
           (lie10(xi.scale(f) + eta.scale(g), a),
            lie10(xi, a).scale(f) + lie10(eta, a).scale(g)))

    def gen_vii_bar(r):
        d = dims(r)
        p = r.randint(0, min(2, d))
        return (random_poly(r, d), random_poly(r, d), random_field(r, d, ANTI),
                random_field(r, d, ANTI), random_form(r, d, p, 0, nterms=1))
    _check(rep, rng, "lie01-function-linear-p0", "function-linearity-p0", trials,
           gen_vii_bar, lambda f, g, xb, eb, a:
           (lie01(xb.scale(f) + eb.scale(g), a),
            lie01(xb, a).scale(f) + lie01(eb, a).scale(g)))

    # documented restriction: function-linearity fails off (0,q) forms
    def gen_vii_fail(r):
        d = dims(r)
        return (Poly.z(d, 1), random_field(r, d),
                random_form(r, d, 1, 0, nterms=1))
    _check(rep, rng, "lie10-function-linear-10-restricted",
           "function-linearity-outside-0q", trials, gen_vii_fail,
           lambda f, xi, a: (lie10(xi.scale(f), a), lie10(xi, a).scale(f)),
           expected_failure=True)

    # intrinsic formula for del on (k,0)-forms
    def cartan_rhs(alpha, fields):
        k = len(fields) - 1
        rhs = Poly(alpha.dim)
        for j, xj in enumerate(fields):
            rest = fields[:j] + fields[j + 1:]
            rhs = rhs + CRat((-1) ** j) * xj.apply(evaluate(alpha, rest))
        for j in range(k + 1):
            for l in range(j + 1, k + 1):
                br = lie_bracket(fields[j], fields[l])
                rest = [br] + [fields[m] for m in range(k + 1) if m not in (j, l)]
                rhs = rhs + CRat((-1) ** (j + l)) * evaluate(alpha, rest)
        return rhs

    for k in (0, 1, 2):
        def gen_cartan(r, k=k):
            d = dims(r)
            alpha = random_form(r, d, k, 0, nterms=1)
            fields = [random_field(r, d) for _ in range(k + 1)]
            return (alpha, fields)
        _check(rep, rng, "del-intrinsic-k%d" % k, "cartan-formula-del", trials,
               gen_cartan, lambda alpha, fields:
               (evaluate(chart_del(alpha), fields), cartan_rhs(alpha, fields)))

    # conjugation symmetry
    _check(rep, rng, "conjugation-symmetry", "conj-swaps-lie10-lie01", trials,
           gen_i, lambda xi, u: (lie10(xi, u).conj(), lie01(xi.conj(), u.conj())))

    # graded-operator sanity on concrete forms
    def gen_sq(r):
        d = dims(r)
        return (any_form(r, d),)
    _check(rep, rng, "del-squared", "del-del-zero", trials, gen_sq,
           lambda u: (chart_del(chart_del(u)), ChartForm.zero(u.dim)))
    _check(rep, rng, "delbar-squared", "delbar-delbar-zero", trials, gen_sq,
           lambda u: (chart_delbar(chart_delbar(u)), ChartForm.zero(u.dim)))
    _check(rep, rng, "del-delbar-anticommute", "del-delbar-anticommutator-zero",
           trials, gen_sq,
           lambda u: (chart_del(chart_delbar(u)) + chart_delbar(chart_del(u)),
                      ChartForm.zero(u.dim)))
    _check(rep, rng, "d-squared", "d-d-zero", trials, gen_sq,
           lambda u: (chart_d(chart_d(u)), ChartForm.zero(u.dim)))

    # mixed second derivative of a function against the two Lie derivatives
    for rec in mixed_second_derivative_check(seed=seed + 1, trials=trials).records:
        rep.add(rec)
    return rep


def mixed_second_derivative_check(seed: int = 0, trials: int = 50) -> SuiteReport:
    """(i del delbar f)(v, wbar) against the iterated Lie derivatives.

    Exact over random polynomial data: equality holds when the second
    argument (resp. first, in the mirrored statement) is holomorphic, and the
    frame-field coordinate identity holds unconditionally.  A non-holomorphic
    probe documents the extra term as an expected failure.
    """
    rng = random.Random(seed)
    rep = SuiteReport(seed=seed, trials=trials)

    def iddbar(f: Poly) -> ChartForm:
        return chart_del(chart_delbar(ChartForm.from_function(f))).scale(I)

    def pair(u: ChartForm, v, w) -> Poly:
        return evaluate(u, [v, w.conj()])

    def gen_holo_w(r):
        d = r.choice((2, 3))
        return (random_poly(r, d), random_field(r, d),
                random_holomorphic_field(r, d))
    _check(rep, rng, "mixed-hessian-holo-second", "iddbar-vs-lie10-lie01", trials,
           gen_holo_w, lambda f, v, w:
           (pair(iddbar(f), v, w),
            I * evaluate(lie10(v, lie01(w.conj(), ChartForm.from_function(f))), [])))

    def gen_holo_v(r):
        d = r.choice((2, 3))
        return (random_poly(r, d), random_holomorphic_field(r, d),
                random_field(r, d))
    _check(rep, rng, "mixed-hessian-holo-first", "iddbar-vs-lie01-lie10", trials,
           gen_holo_v, lambda f, v, w:
           (pair(iddbar(f), v, w),
            I * evaluate(lie01(w.conj(), lie10(v, ChartForm.from_function(f))), [])))

    def gen_frames(r):
        d = r.choice((2, 3))
        l = r.randint(1, d)
        k = r.randint(1, d)
        return (random_poly(r, d), ChartVectorField.frame(d, l),
                ChartVectorField.frame(d, k))
    _check(rep, rng, "mixed-hessian-frames", "iddbar-coordinate-identity", trials,
           gen_frames, lambda f, v, w:
           (pair(iddbar(f), v, w),
            I * evaluate(lie10(v, lie01(w.conj(), ChartForm.from_function(f))), [])))

    def gen_nonholo(r):
        d = 2
        f = Poly.z(d, 1) * Poly.zbar(d, 1) + random_poly(r, d, nterms=1)
        v = ChartVectorField.frame(d, 1)
        w = ChartVectorField(d, HOLO, [Poly.zbar(d, 1), Poly(d)])
        return (f, v, w)
    _check(rep, rng, "mixed-hessian-nonholo-probe", "iddbar-needs-holomorphic-argument",
           trials, gen_nonholo, lambda f, v, w:
           (pair(iddbar(f), v, w),
            I * evaluate(lie10(v, lie01(w.conj(), ChartForm.from_function(f))), [])),
           expected_failure=True)
    return rep
