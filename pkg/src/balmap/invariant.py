"""Invariant calculus on compact models given by structure constants.

A LieModel fixes a (1,0)-coframe phi^1..phi^d and the expansion of each
d(phi^k) over the basis {phi^i^phi^j (i<j), phi^i^phibar^j, phibar^i^phibar^j
(i<j)}.  The conjugate relations d(phibar^k) = conj(d phi^k) are derived, not
stored.  Everything downstream (cohomology, Hodge theory, the moment-map
checks) is finite-dimensional linear algebra over this complex.

Sign conventions are inherited verbatim from the chart backend; the volume
form is dV = i^(d^2) phi^{1..d} ^ phibar^{1..d} and integrate is the linear
functional with integrate(dV) = volume_scale.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .exact import CRat, ONE, ZERO, ipow, is_exact, conj_scalar
from .symalg import merge_sorted, remove_index

BasisKey = Tuple[Tuple[int, ...], Tuple[int, ...]]
HOLO = "1,0"
ANTI = "0,1"

# labels for the three families of basis 2-forms in d(phi^k)
HH = "hh"   # phi^i ^ phi^j, i < j
MIX = "mx"  # phi^i ^ phibar^j
AA = "aa"   # phibar^i ^ phibar^j, i < j


class ModelError(ValueError):
    pass


@dataclass(frozen=True)
class DiffTerm:
    family: str
    i: int
    j: int
    coeff: CRat


class LieModel:
    """Compact model manifold described by invariant structure constants."""

    def __init__(self, name: str, dim: int,
                 diff: Dict[int, Sequence[DiffTerm]],
                 volume_scale: Fraction = Fraction(1)):
        self.name = name
        self.dim = dim
        self.volume_scale = Fraction(volume_scale)
        if self.volume_scale <= 0:
            raise ModelError("volume_scale must be positive")
        norm: Dict[int, Tuple[DiffTerm, ...]] = {}
        for k, terms in diff.items():
            if not 1 <= k <= dim:
                raise ModelError("diff target index %d out of range" % k)
            kept = []
            for t in terms:
                if t.family not in (HH, MIX, AA):
                    raise ModelError("unknown basis family %r" % t.family)
                if t.family in (HH, AA) and not t.i < t.j:
                    raise ModelError("indices must be increasing in %r" % (t,))
                if not (1 <= t.i <= dim and 1 <= t.j <= dim):
                    raise ModelError("index out of range in %r" % (t,))
                if t.family == AA and t.coeff:
                    raise ModelError(
                        "model %s: d(phi^%d) has a (0,2)-component; "
                        "the complex structure is not integrable" % (name, k))
                if t.coeff:
                    kept.append(t)
            if kept:
                norm[k] = tuple(kept)
        self.diff = norm
        self._check_d_squared()

    # -- construction helpers --

    @staticmethod
    def torus(dim: int, name: Optional[str] = None) -> "LieModel":
        return LieModel(name or ("torus%d" % dim), dim, {})

    def _check_d_squared(self):
        for k in range(1, self.dim + 1):
            for gen in (self.form_basis(1, 0, ((k,), ())),
                        self.form_basis(0, 1, ((), (k,)))):
                dd = self.d(self.d(gen))
                if dd:
                    raise ModelError(
                        "model %s: d(d(generator %d)) != 0" % (self.name, k))

    # -- forms --

    def zero(self) -> "InvForm":
        return InvForm(self, {})

    def form_basis(self, p: int, q: int, key: BasisKey, coeff=ONE) -> "InvForm":
        I_, J_ = key
        assert len(I_) == p and len(J_) == q
        return InvForm(self, {(tuple(I_), tuple(J_)): coeff})

    def basis_keys(self, p: int, q: int) -> List[BasisKey]:
        Is = list(combinations(range(1, self.dim + 1), p))
        Js = list(combinations(range(1, self.dim + 1), q))
        return [(Iidx, Jidx) for Iidx in Is for Jidx in Js]

    def phi(self, k: int) -> "InvForm":
        return self.form_basis(1, 0, ((k,), ()))

    def phibar(self, k: int) -> "InvForm":
        return self.form_basis(0, 1, ((), (k,)))

    def volume_form(self) -> "InvForm":
        idx = tuple(range(1, self.dim + 1))
        return self.form_basis(self.dim, self.dim, (idx, idx), ipow(self.dim ** 2))

    def frame(self, k: int, coeff=ONE) -> "InvVectorField":
        c = [ZERO] * self.dim
        c[k - 1] = coeff
        return InvVectorField(self, HOLO, c)

    def frame_bar(self, k: int, coeff=ONE) -> "InvVectorField":
        c = [ZERO] * self.dim
        c[k - 1] = coeff
        return InvVectorField(self, ANTI, c)

    # d of a single coframe letter, as expansion over basis keys
    def _d_letter(self, bar: bool, k: int) -> List[Tuple[BasisKey, CRat]]:
        out = []
        for t in self.diff.get(k, ()):
            c = t.coeff
            if not bar:
                if t.family == HH:
                    out.append((((t.i, t.j), ()), c))
                elif t.family == MIX:
                    out.append((((t.i,), (t.j,)), c))
            else:
                # d(phibar^k) = conj(d phi^k)
                if t.family == HH:
                    out.append((((), (t.i, t.j)), conj_scalar(c)))
                elif t.family == MIX:
                    # conj(phi^i ^ phibar^j) = -phi^j ^ phibar^i
                    out.append((((t.j,), (t.i,)), -conj_scalar(c)))
        return out

    def d(self, u: "InvForm") -> "InvForm":
        return self.ce_d(u)

    def _derive(self, u: "InvForm", keep: str) -> "InvForm":
        """Antiderivation extension of d, restricted to a bidegree shift."""
        out: Dict[BasisKey, object] = {}
        for (Iidx, Jidx), c in u.coeffs.items():
            letters = [(False, i) for i in Iidx] + [(True, j) for j in Jidx]
            for pos, (bar, k) in enumerate(letters):
                sign0 = (-1) ** pos
                for (dI, dJ), dc in self._d_letter(bar, k):
                    rest = letters[:pos] + letters[pos + 1:]
                    restI = tuple(i for b, i in rest if not b)
                    restJ = tuple(j for b, j in rest if b)
                    mi = merge_sorted(dI, restI)
                    if mi is None:
                        continue
                    mj = merge_sorted(dJ, restJ)
                    if mj is None:
                        continue
                    sign = sign0 * mi[0] * mj[0] * ((-1) ** (len(dJ) * len(restI)))
                    p_new, q_new = len(mi[1]), len(mj[1])
                    if keep == "del" and (p_new, q_new) != (len(Iidx) + 1, len(Jidx)):
                        continue
                    if keep == "delbar" and (p_new, q_new) != (len(Iidx), len(Jidx) + 1):
                        continue
                    key = (mi[1], mj[1])
                    val = c * dc * sign
                    s = out.get(key)
                    s = val if s is None else s + val
                    if _nonzero(s):
                        out[key] = s
                    else:
                        out.pop(key, None)
        return InvForm(self, out)

    def ce_del(self, u: "InvForm") -> "InvForm":
        return self._derive(u, "del")

    def ce_delbar(self, u: "InvForm") -> "InvForm":
        return self._derive(u, "delbar")

    def ce_d(self, u: "InvForm") -> "InvForm":
        return self._derive(u, "both")

    # -- frame bracket table -------------------------------------------------
    #
    # For invariant 1-forms and frame fields, d(alpha)(X, Y) = -alpha([X, Y]).

    def bracket(self, a: "InvVectorField", b: "InvVectorField") -> "MixedInvField":
        holo = [ZERO] * self.dim
        anti = [ZERO] * self.dim
        for k in range(1, self.dim + 1):
            dphi = InvForm(self, dict(self._d_letter(False, k)))
            holo[k - 1] = -_pair2(dphi, a, b)
            dphibar = InvForm(self, dict(self._d_letter(True, k)))
            anti[k - 1] = -_pair2(dphibar, a, b)
        h = InvVectorField(self, HOLO, holo) if any(_nonzero(c) for c in holo) else None
        t = InvVectorField(self, ANTI, anti) if any(_nonzero(c) for c in anti) else None
        return MixedInvField(self, h, t)

    def dbar_field(self, xi: "InvVectorField") -> List[List[CRat]]:
        """Components of dbar(xi) for an invariant (1,0) field.

        Returns a d x d table t[b][k]: the phi^k-frame coefficient of the
        (1,0)-part of [Zbar_b, xi]; xi is holomorphic iff all entries vanish.
        """
        assert xi.kind == HOLO
        out = []
        for b in range(1, self.dim + 1):
            br = self.bracket(self.frame_bar(b), xi)
            row = list(br.holo.coeffs) if br.holo else [ZERO] * self.dim
            out.append(row)
        return out

    def __repr__(self):
        return "LieModel(%r, dim=%d)" % (self.name, self.dim)


def _nonzero(c) -> bool:
    if isinstance(c, CRat):
        return bool(c)
    return abs(c) > 0


def _pair2(u: "InvForm", a: "InvVectorField", b: "InvVectorField"):
    """u(a, b) = b . a . u for a 2-form u."""
    return contract_inv(b, contract_inv(a, u)).scalar()


class InvForm:
    """Invariant form: coefficients over the wedge basis phi_I ^ phibar_J.

    Coefficients are CRat in exact mode; python complex is accepted and
    propagates (float mode), which is what the Hodge/flow layer produces.
    """

    __slots__ = ("model", "coeffs")

    def __init__(self, model: LieModel, coeffs: Dict[BasisKey, object]):
        self.model = model
        self.coeffs = {k: c for k, c in coeffs.items() if _nonzero(c)}

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        return (isinstance(other, InvForm) and self.model is other.model
                and self.coeffs == other.coeffs)

    def __add__(self, other):
        if not isinstance(other, InvForm):
            return NotImplemented
        if other.model is not self.model:
            raise ValueError("forms live on different models")
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            s = out.get(k)
            s = c if s is None else s + c
            if _nonzero(s):
                out[k] = s
            else:
                out.pop(k, None)
        return InvForm(self.model, out)

    def __neg__(self):
        return InvForm(self.model, {k: -c for k, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "InvForm":
        return InvForm(self.model, {k: v * c for k, v in self.coeffs.items()})

    def conj(self) -> "InvForm":
        out = {}
        for (Iidx, Jidx), c in self.coeffs.items():
            sign = (-1) ** (len(Iidx) * len(Jidx))
            val = conj_scalar(c) * sign
            key = (Jidx, Iidx)
            s = out.get(key)
            out[key] = val if s is None else s + val
        return InvForm(self.model, out)

    def bidegrees(self) -> set:
        return {(len(I_), len(J_)) for I_, J_ in self.coeffs}

    def bidegree(self) -> Optional[Tuple[int, int]]:
        bs = self.bidegrees()
        return bs.pop() if len(bs) == 1 else None

    def is_real(self) -> bool:
        diff = self - self.conj()
        return all(abs(complex(c)) < 1e-12 for c in diff.coeffs.values())

    def is_exact_coeffs(self) -> bool:
        return all(is_exact(c) for c in self.coeffs.values())

    def scalar(self):
        """Coefficient of the empty wedge word (a constant function)."""
        return self.coeffs.get(((), ()), ZERO)

    def to_vector(self, p: int, q: int) -> np.ndarray:
        keys = self.model.basis_keys(p, q)
        return np.array([complex(self.coeffs.get(k, ZERO)) for k in keys],
                        dtype=complex)

    @staticmethod
    def from_vector(model: LieModel, p: int, q: int, vec) -> "InvForm":
        keys = model.basis_keys(p, q)
        return InvForm(model, {k: complex(v) for k, v in zip(keys, vec)})

    def norm(self) -> float:
        return float(np.sqrt(sum(abs(complex(c)) ** 2
                                 for c in self.coeffs.values()))) if self.coeffs else 0.0

    def __repr__(self):
        if not self.coeffs:
            return "InvForm(0)"
        bits = []
        for (Iidx, Jidx), c in sorted(self.coeffs.items()):
            w = "".join("f%d" % i for i in Iidx) + "".join("b%d" % j for j in Jidx)
            bits.append("(%r)%s" % (c, w or "1"))
        return "InvForm[%s](%s)" % (self.model.name, " + ".join(bits))


def wedge_inv(u: InvForm, v: InvForm) -> InvForm:
    if u.model is not v.model:
        raise ValueError("forms live on different models")
    out: Dict[BasisKey, object] = {}
    for (I1, J1), c1 in u.coeffs.items():
        for (I2, J2), c2 in v.coeffs.items():
            mi = merge_sorted(I1, I2)
            if mi is None:
                continue
            mj = merge_sorted(J1, J2)
            if mj is None:
                continue
            sign = mi[0] * mj[0] * ((-1) ** (len(J1) * len(I2)))
            key = (mi[1], mj[1])
            val = c1 * c2 * sign
            s = out.get(key)
            s = val if s is None else s + val
            if _nonzero(s):
                out[key] = s
            else:
                out.pop(key, None)
    return InvForm(u.model, out)


def wedge_power(u: InvForm, k: int) -> InvForm:
    acc = u
    for _ in range(k - 1):
        acc = wedge_inv(acc, u)
    return acc


class InvVectorField:
    """Frame-constant (1,0) or (0,1) field on a LieModel."""

    __slots__ = ("model", "kind", "coeffs")

    def __init__(self, model: LieModel, kind: str, coeffs: Sequence):
        if kind not in (HOLO, ANTI):
            raise ValueError("kind must be %r or %r" % (HOLO, ANTI))
        if len(coeffs) != model.dim:
            raise ValueError("expected %d coefficients" % model.dim)
        self.model = model
        self.kind = kind
        self.coeffs = tuple(coeffs)

    def conj(self) -> "InvVectorField":
        return InvVectorField(self.model, ANTI if self.kind == HOLO else HOLO,
                              [conj_scalar(c) for c in self.coeffs])

    def scale(self, c) -> "InvVectorField":
        return InvVectorField(self.model, self.kind, [x * c for x in self.coeffs])

    def __add__(self, other):
        if isinstance(other, InvVectorField) and other.kind == self.kind:
            return InvVectorField(self.model, self.kind,
                                  [a + b for a, b in zip(self.coeffs, other.coeffs)])
        return MixedInvField.of(self) + MixedInvField.of(other)

    def __repr__(self):
        sym = "Z" if self.kind == HOLO else "Zbar"
        bits = ["(%r)%s%d" % (c, sym, j + 1)
                for j, c in enumerate(self.coeffs) if _nonzero(c)]
        return "InvField[" + (" + ".join(bits) or "0") + "]"


class MixedInvField:
    """Sum of a (1,0) and a (0,1) invariant field (mixed brackets)."""

    __slots__ = ("model", "holo", "anti")

    def __init__(self, model, holo: Optional[InvVectorField],
                 anti: Optional[InvVectorField]):
        self.model = model
        self.holo = holo
        self.anti = anti

    @staticmethod
    def of(v) -> "MixedInvField":
        if isinstance(v, MixedInvField):
            return v
        if v.kind == HOLO:
            return MixedInvField(v.model, v, None)
        return MixedInvField(v.model, None, v)

    def __add__(self, other):
        o = MixedInvField.of(other)

        def plus(a, b):
            if a is None:
                return b
            if b is None:
                return a
            return InvVectorField(a.model, a.kind,
                                  [x + y for x, y in zip(a.coeffs, b.coeffs)])
        return MixedInvField(self.model, plus(self.holo, o.holo),
                             plus(self.anti, o.anti))

    def parts(self) -> List[InvVectorField]:
        return [p for p in (self.holo, self.anti) if p is not None]

    def is_zero(self) -> bool:
        return all(not any(_nonzero(c) for c in p.coeffs) for p in self.parts())

    def norm(self) -> float:
        return float(np.sqrt(sum(abs(complex(c)) ** 2
                                 for p in self.parts() for c in p.coeffs)))

    def __repr__(self):
        return "Mixed(%r, %r)" % (self.holo, self.anti)


InvFieldLike = Union[InvVectorField, MixedInvField]


def contract_inv(v: InvFieldLike, u: InvForm) -> InvForm:
    if isinstance(v, MixedInvField):
        out = u.model.zero()
        for part in v.parts():
            out = out + contract_inv(part, u)
        return out
    out: Dict[BasisKey, object] = {}
    for (Iidx, Jidx), c in u.coeffs.items():
        for j, comp in enumerate(v.coeffs, start=1):
            if not _nonzero(comp):
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
            val = c * comp * sign
            s = out.get(key)
            s = val if s is None else s + val
            if _nonzero(s):
                out[key] = s
            else:
                out.pop(key, None)
    return InvForm(u.model, out)


def contract_seq(fields: Sequence[InvFieldLike], u: InvForm) -> InvForm:
    """fields[0] . fields[1] . ... . u, rightmost contraction first."""
    acc = u
    for v in reversed(fields):
        acc = contract_inv(v, acc)
    return acc


def evaluate_inv(u: InvForm, fields: Sequence[InvFieldLike]):
    """u(v_1, ..., v_k) = v_k . (... (v_1 . u))."""
    acc = u
    for v in fields:
        acc = contract_inv(v, acc)
    return acc.scalar()


def lie10_inv(xi: InvVectorField, u: InvForm) -> InvForm:
    if xi.kind != HOLO:
        raise ValueError("lie10_inv expects a (1,0) field")
    m = u.model
    return contract_inv(xi, m.ce_del(u)) + m.ce_del(contract_inv(xi, u))


def lie01_inv(eta_bar: InvVectorField, u: InvForm) -> InvForm:
    if eta_bar.kind != ANTI:
        raise ValueError("lie01_inv expects a (0,1) field")
    m = u.model
    return contract_inv(eta_bar, m.ce_delbar(u)) + m.ce_delbar(contract_inv(eta_bar, u))


def lie_inv(v: InvFieldLike, u: InvForm) -> InvForm:
    """Standard Lie derivative v . d u + d (v . u)."""
    m = u.model
    return contract_inv(v, m.ce_d(u)) + m.ce_d(contract_inv(v, u))


def integrate(u: InvForm):
    """Integral of a top-bidegree invariant form.

    Normalized so that integrate(dV) = volume_scale for
    dV = i^(d^2) phi^{1..d} ^ phibar^{1..d}; exact CRat in, exact CRat out,
    complex in float mode.
    """
    m = u.model
    d = m.dim
    bad = [b for b in u.bidegrees() if b != (d, d)]
    if bad:
        raise ValueError("integrate needs a (%d,%d)-form, found bidegrees %s"
                         % (d, d, sorted(bad)))
    idx = tuple(range(1, d + 1))
    c = u.coeffs.get((idx, idx), ZERO)
    factor = ipow(-(d * d)) * CRat(m.volume_scale)
    out = c * factor
    return out


# -- operator matrices over the wedge bases -----------------------------------


def operator_matrix(model: LieModel, op, p: int, q: int,
                    p_out: int, q_out: int) -> np.ndarray:
    """Dense complex matrix of a linear operator between wedge bases."""
    dom = model.basis_keys(p, q)
    cod = model.basis_keys(p_out, q_out)
    index = {k: i for i, k in enumerate(cod)}
    A = np.zeros((len(cod), len(dom)), dtype=complex)
    for col, key in enumerate(dom):
        img = op(model.form_basis(p, q, key))
        for k2, c in img.coeffs.items():
            A[index[k2], col] = complex(c)
    return A


def operator_rows_exact(model: LieModel, op, p: int, q: int,
                        p_out: int, q_out: int) -> List[List[CRat]]:
    """Exact CRat matrix of an operator between wedge bases (rows)."""
    dom = model.basis_keys(p, q)
    cod = model.basis_keys(p_out, q_out)
    index = {k: i for i, k in enumerate(cod)}
    rows = [[ZERO] * len(dom) for _ in cod]
    for col, key in enumerate(dom):
        img = op(model.form_basis(p, q, key))
        for k2, c in img.coeffs.items():
            rows[index[k2]][col] = c
    return rows


def lie_operator_matrix(model: LieModel, field: InvVectorField,
                        p: int, q: int) -> np.ndarray:
    op = (lambda u: lie10_inv(field, u)) if field.kind == HOLO \
        else (lambda u: lie01_inv(field, u))
    return operator_matrix(model, op, p, q, p, q)


def flow_pullback(field: InvVectorField, s: float, u: InvForm) -> InvForm:
    """exp(s * L) applied on the invariant space of u's bidegree."""
    from scipy.linalg import expm
    bid = u.bidegree()
    if bid is None:
        out = u.model.zero()
        for (p, q) in sorted(u.bidegrees()):
            part = InvForm(u.model, {k: c for k, c in u.coeffs.items()
                                     if (len(k[0]), len(k[1])) == (p, q)})
            out = out + flow_pullback(field, s, part)
        return out
    p, q = bid
    L = lie_operator_matrix(u.model, field, p, q)
    vec = u.to_vector(p, q)
    res = expm(s * L) @ vec
    return InvForm.from_vector(u.model, p, q, res)


# -- model file format ---------------------------------------------------------
#
# Plain text, one field per line:
#
#   name iwasawa
#   dim 3
#   volume_scale 1
#   diff 3 12 -1 0
#   diff 3 1~2 0/1 1/2
#
# A diff line is: target index k, basis label, re, im with exact Fraction
# syntax for the two rational parts.  Labels: "ij" for phi^i^phi^j,
# "i~j" for phi^i^phibar^j, "~i~j" for phibar^i^phibar^j.


class ParseError(ValueError):
    def __init__(self, path: str, lineno: int, msg: str):
        super().__init__("%s:%d: %s" % (path, lineno, msg))
        self.path = path
        self.lineno = lineno


def _parse_label(label: str) -> Tuple[str, int, int]:
    if label.startswith("~"):
        body = label[1:]
        if "~" not in body:
            raise ValueError("bad label %r" % label)
        i, j = body.split("~")
        return (AA, int(i), int(j))
    if "~" in label:
        i, j = label.split("~")
        return (MIX, int(i), int(j))
    if len(label) == 2 and label.isdigit():
        return (HH, int(label[0]), int(label[1]))
    raise ValueError("bad label %r" % label)


def _format_label(t: DiffTerm) -> str:
    if t.family == HH:
        return "%d%d" % (t.i, t.j)
    if t.family == MIX:
        return "%d~%d" % (t.i, t.j)
    return "~%d~%d" % (t.i, t.j)


def parse_model(text: str, path: str = "<model>") -> LieModel:
    name = None
    dim = None
    vol = Fraction(1)
    diff: Dict[int, List[DiffTerm]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0] == "name" and len(parts) == 2:
                name = parts[1]
            elif parts[0] == "dim" and len(parts) == 2:
                dim = int(parts[1])
            elif parts[0] == "volume_scale" and len(parts) == 2:
                vol = Fraction(parts[1])
            elif parts[0] == "diff" and len(parts) == 5:
                k = int(parts[1])
                fam, i, j = _parse_label(parts[2])
                coeff = CRat(Fraction(parts[3]), Fraction(parts[4]))
                diff.setdefault(k, []).append(DiffTerm(fam, i, j, coeff))
            else:
                raise ValueError("unrecognized line %r" % line)
        except (ValueError, IndexError) as e:
            raise ParseError(path, lineno, str(e)) from None
    if name is None or dim is None:
        raise ParseError(path, 0, "model file must define 'name' and 'dim'")
    try:
        return LieModel(name, dim, diff, vol)
    except ModelError as e:
        raise ParseError(path, 0, str(e)) from None


def format_model(m: LieModel) -> str:
    lines = ["name %s" % m.name, "dim %d" % m.dim,
             "volume_scale %s" % m.volume_scale]
    for k in sorted(m.diff):
        for t in m.diff[k]:
            lines.append("diff %d %s %s %s" % (k, _format_label(t),
                                               t.coeff.re, t.coeff.im))
    return "\n".join(lines) + "\n"


def load_model(path) -> LieModel:
    with open(path) as fh:
        return parse_model(fh.read(), str(path))


def save_model(m: LieModel, path) -> None:
    with open(path, "w") as fh:
        fh.write(format_model(m))
