"""Membership checks and the pairing machinery for map spaces.

Objects: a balanced target (positive (1,1)-form with closed top-minus-one
power), coframe-compatible maps into it, and tuples of volume-preserving
holomorphic fields paired through a potential of the pulled-back power.

The two double-sum residuals defining the admissible tuple space, the
reversal-sign identities used to move a pairing under the integral, and the
derivative-of-contraction closed formulas are implemented once over an
abstract backend so they can be exercised exactly on the polynomial chart
and to float tolerance (exactly, for rational data) on invariant models.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .exact import CRat, ONE, I
from . import symalg
from .invariant import (ANTI, HOLO, InvForm, InvVectorField, LieModel,
                        contract_inv, evaluate_inv, flow_pullback, integrate,
                        lie10_inv, lie01_inv, wedge_inv, wedge_power,
                        ParseError)
from .hodge import (ClassObstructionError, HermitianMetricSpec,
                    exact_ddbar_solve, neumann_gamma)


# -- backends for the sign-critical identities -----------------------------------


class ChartBackend:
    """Polynomial chart backend (exact)."""

    def __init__(self, dim: int):
        self.dim = dim

    def contract(self, v, u):
        return symalg.contract(v, u)

    def del_(self, u):
        return symalg.chart_del(u)

    def delbar(self, u):
        return symalg.chart_delbar(u)

    def bracket(self, a, b):
        return symalg.lie_bracket(a, b)

    def wedge(self, a, b):
        return symalg.wedge(a, b)

    def zero_form(self):
        return symalg.ChartForm.zero(self.dim)

    def volume(self):
        return symalg.standard_volume(self.dim)

    def scalar_of(self, u):
        return u.coefficient((), ())


class InvariantBackend:
    """Structure-constant backend (exact for rational data)."""

    def __init__(self, model: LieModel):
        self.model = model
        self.dim = model.dim

    def contract(self, v, u):
        return contract_inv(v, u)

    def del_(self, u):
        return self.model.ce_del(u)

    def delbar(self, u):
        return self.model.ce_delbar(u)

    def bracket(self, a, b):
        return self.model.bracket(a, b)

    def wedge(self, a, b):
        return wedge_inv(a, b)

    def zero_form(self):
        return self.model.zero()

    def volume(self):
        return self.model.volume_form()

    def scalar_of(self, u):
        return u.scalar()


def iterated_contraction(backend, xis: Sequence, etabars: Sequence, dV):
    """xi_1 . ... . xi_m . etabar_1 . ... . etabar_m . dV (rightmost first)."""
    fields = list(xis) + list(etabars)
    acc = dV
    for v in reversed(fields):
        acc = backend.contract(v, acc)
    return acc


def tuple_residual_forms(backend, xis: Sequence, etabars: Sequence, dV):
    """The two double-sum residual forms on a candidate tuple.

    Returns (res_bar, res_del): res_bar is the bracket sum built from the
    antiholomorphic slots (it must annihilate dV for the delbar half), and
    res_del the mirrored sum from the holomorphic slots.  Membership of the
    tuple is the vanishing of both.
    """
    m = len(xis)
    n = m + 2

    def half(primary: Sequence, secondary: Sequence):
        # primary plays the role of the slots whose like-type brackets appear
        acc = backend.zero_form()
        for l in range(2, n):
            a = n - l  # index of the distinguished primary slot, 1-based
            for r in range(1, n - l):
                sign = (-1) ** (n + 1 - l - r)
                br = backend.bracket(primary[a - 1], primary[r - 1])
                rest = [primary[k - 1] for k in range(m, 0, -1) if k not in (a, r)]
                others = [secondary[k - 1] for k in range(m, 0, -1)]
                term = iterated_contraction(backend, [], [br] + rest + others, dV)
                acc = acc + _scale(term, sign)
            for r in range(1, n - 1):
                sign = (-1) ** (l + r + 1)
                br = backend.bracket(primary[a - 1], secondary[r - 1])
                rest = [primary[k - 1] for k in range(m, 0, -1) if k != a]
                others = [secondary[k - 1] for k in range(m, 0, -1) if k != r]
                term = iterated_contraction(backend, [], [br] + rest + others, dV)
                acc = acc + _scale(term, sign)
        return acc

    res_bar = half(list(etabars), list(xis))
    res_del = half(list(xis), list(etabars))
    return res_bar, res_del


def _scale(form, c: int):
    return form.scale(CRat(c)) if c != 1 else form


def contraction_derivative_check(backend, xis, etabars, dV):
    """Derivative of the iterated contraction against the closed double sums.

    Returns (ok_del, ok_delbar, lhs_del, rhs_del, lhs_delbar, rhs_delbar):
    the del of xi_1 . ... . etabar_m . dV must equal the holomorphic-slot
    sum, the delbar the antiholomorphic-slot sum.  Exact comparison.
    """
    C = iterated_contraction(backend, xis, etabars, dV)
    lhs_del = backend.del_(C)
    lhs_delbar = backend.delbar(C)
    res_bar, res_del = tuple_residual_forms(backend, xis, etabars, dV)
    return (lhs_del == res_del, lhs_delbar == res_bar,
            lhs_del, res_del, lhs_delbar, res_bar)


def reversal_sign_check(backend, form, xis, etabars, dV) -> bool:
    """(form)(xi_1..xi_m, etabar_1..etabar_m) dV against the wedge reversal.

    The pointwise identity: evaluating a (m,m)-form on the tuple and
    multiplying dV equals (-1)^m times the form wedged with the iterated
    contraction of dV.  Holds for arbitrary smooth fields; exact here.
    """
    m = len(xis)
    fields = list(xis) + list(etabars)
    value = form
    for v in fields:
        value = backend.contract(v, value)
    c = backend.scalar_of(value)
    lhs = _scale_by(dV, c)
    rhs = _scale(backend.wedge(form, iterated_contraction(backend, xis, etabars, dV)),
                 (-1) ** m)
    return lhs == rhs


def _scale_by(form, c):
    return form.scale(c)


# -- balanced targets and map specs ----------------------------------------------


class ValidationError(ValueError):
    pass


class BalancedTarget:
    """Model with a positive (1,1)-form whose (n-1) power is closed."""

    def __init__(self, model: LieModel, omega: InvForm):
        if omega.bidegree() != (1, 1):
            raise ValidationError("omega must be a (1,1)-form")
        if not omega.is_exact_coeffs():
            raise ValidationError("omega must have exact coefficients")
        self.model = model
        self.omega = omega
        n = model.dim
        self.n = n
        gram = self.hermitian_matrix()
        eig = np.linalg.eigvalsh(gram)
        if eig.min() <= 0:
            raise ValidationError(
                "omega is not positive definite (min eigenvalue %.3e)" % eig.min())
        power = wedge_power(omega, n - 1) if n > 1 else _one_form(model)
        self.omega_top_minus_one = power.scale(CRat(Fraction(1, math.factorial(n - 1))))
        if model.ce_d(self.omega_top_minus_one):
            raise ValidationError("d(omega^(n-1)) != 0: the form is not balanced")

    def hermitian_matrix(self) -> np.ndarray:
        n = self.model.dim
        h = np.zeros((n, n), dtype=complex)
        for (I_, J_), c in self.omega.coeffs.items():
            h[I_[0] - 1, J_[0] - 1] = complex(c / I)
        if np.linalg.norm(h - h.conj().T) > 1e-12:
            raise ValidationError("omega coefficient matrix is not Hermitian")
        return h


def _one_form(model: LieModel) -> InvForm:
    return InvForm(model, {((), ()): ONE})


def check_balanced(omega: InvForm, model: LieModel) -> BalancedTarget:
    """Positivity and closedness certificate; raises on failure."""
    return BalancedTarget(model, omega)


class MapSpec:
    """Coframe-compatible map between models, given by an n x d matrix."""

    def __init__(self, name: str, source: LieModel, target: BalancedTarget,
                 matrix: Sequence[Sequence[CRat]]):
        self.name = name
        self.source = source
        self.target = target
        n, d = target.model.dim, source.dim
        if d < n - 1:
            raise ValidationError(
                "source dimension %d must be at least %d" % (d, n - 1))
        if len(matrix) != n or any(len(row) != d for row in matrix):
            raise ValidationError("matrix must be %d x %d" % (n, d))
        self.matrix = [[c if isinstance(c, CRat) else CRat(c) for c in row]
                       for row in matrix]
        self._check_compatibility()

    def _pull_letter(self, bar: bool, k: int) -> InvForm:
        row = self.matrix[k - 1]
        out = self.source.zero()
        for j, c in enumerate(row, start=1):
            if not c:
                continue
            if bar:
                out = out + self.source.phibar(j).scale(c.conjugate())
            else:
                out = out + self.source.phi(j).scale(c)
        return out

    def pullback(self, u: InvForm) -> InvForm:
        if u.model is not self.target.model:
            raise ValidationError("form does not live on the target model")
        out = self.source.zero()
        for (Iidx, Jidx), c in u.coeffs.items():
            term = InvForm(self.source, {((), ()): c})
            for i in Iidx:
                term = wedge_inv(term, self._pull_letter(False, i))
            for j in Jidx:
                term = wedge_inv(term, self._pull_letter(True, j))
            out = out + term
        return out

    def _check_compatibility(self):
        X = self.target.model
        for k in range(1, X.dim + 1):
            lhs = self.pullback(X.ce_d(X.phi(k)))
            rhs = self.source.ce_d(self._pull_letter(False, k))
            if lhs != rhs:
                raise ValidationError(
                    "map %s: pullback does not commute with d on generator %d "
                    "(holomorphy/compatibility failure)" % (self.name, k))

    def pulled_power(self) -> InvForm:
        """f* of omega^(n-1)/(n-1)! on the source."""
        return self.pullback(self.target.omega_top_minus_one)

    def __repr__(self):
        return "MapSpec(%r: %s -> %s)" % (self.name, self.source.name,
                                          self.target.model.name)


# -- membership checks ------------------------------------------------------------


@dataclass
class MembershipReport:
    member: bool
    gamma: Optional[InvForm] = None
    obstruction: Optional[str] = None
    impossibility: Optional[str] = None
    pulled_norm: float = 0.0
    scope_note: str = ("membership certified within the invariant complex "
                       "of the source model")


def x_membership(f: MapSpec) -> MembershipReport:
    """Does the pulled-back power admit an invariant potential?"""
    P = f.pulled_power()
    d, n = f.source.dim, f.target.n
    if not P:
        return MembershipReport(member=True, gamma=f.source.zero())
    gamma = exact_ddbar_solve(f.source, P)
    if gamma is not None:
        return MembershipReport(member=True, gamma=gamma, pulled_norm=P.norm())
    msg = "pulled-back power is not ddbar-exact on the invariant complex"
    imp = None
    if d == n - 1:
        total = integrate(P)
        imp = ("source dimension equals target dimension minus one and the "
               "pulled-back power integrates to %r > 0; by Stokes a "
               "ddbar-exact top form would integrate to zero, so membership "
               "is impossible for a somewhere non-degenerate map" % (total,))
    return MembershipReport(member=False, obstruction=msg, impossibility=imp,
                            pulled_norm=P.norm())


@dataclass
class FieldCertificate:
    holomorphic: bool
    volume_preserving: bool
    dbar_norm: float
    lie_volume_norm: float

    @property
    def member(self) -> bool:
        return self.holomorphic and self.volume_preserving


def lie_g_membership(xi: InvVectorField) -> FieldCertificate:
    """Holomorphy and volume preservation of an invariant (1,0)-field."""
    if xi.kind != HOLO:
        raise ValidationError("membership applies to (1,0)-fields")
    model = xi.model
    table = model.dbar_field(xi)
    dbar_norm = float(np.sqrt(sum(abs(complex(c)) ** 2 for row in table for c in row)))
    lv = lie10_inv(xi, model.volume_form())
    return FieldCertificate(holomorphic=dbar_norm == 0.0,
                            volume_preserving=not lv,
                            dbar_norm=dbar_norm,
                            lie_volume_norm=lv.norm())


class MomentTuple:
    """Candidate tuple (xi_1..xi_m, etabar_1..etabar_m) with certificates."""

    def __init__(self, xis: Sequence[InvVectorField],
                 etabars: Sequence[InvVectorField],
                 gamma_policy: str = "neumann"):
        if len(xis) != len(etabars):
            raise ValidationError("tuple needs equally many xi and etabar slots")
        if any(v.kind != HOLO for v in xis) or any(v.kind != ANTI for v in etabars):
            raise ValidationError("xi slots must be (1,0), etabar slots (0,1)")
        if gamma_policy not in ("neumann", "any-solution"):
            raise ValidationError("gamma_policy must be neumann or any-solution")
        self.xis = list(xis)
        self.etabars = list(etabars)
        self.gamma_policy = gamma_policy

    @property
    def arity(self) -> int:
        return len(self.xis)

    def model(self) -> LieModel:
        return self.xis[0].model if self.xis else None

    def field_certificates(self) -> List[FieldCertificate]:
        certs = [lie_g_membership(xi) for xi in self.xis]
        certs += [lie_g_membership(eb.conj()) for eb in self.etabars]
        return certs


@dataclass
class PgReport:
    member: bool
    residual_bar: float
    residual_del: float
    lie_g_ok: bool
    swap_member: bool
    swap_symmetric: bool


def pg_membership(t: MomentTuple, model: Optional[LieModel] = None,
                  tol: float = 1e-12) -> PgReport:
    """Vanishing of the two bracket-contraction sums against the volume form.

    Both slot orientations are tested; an asymmetry between the tuple and
    its conjugate-swapped partner is reported rather than assumed away.
    """
    model = model or t.model()
    backend = InvariantBackend(model)
    dV = model.volume_form()

    def residuals(xis, etabars):
        rb, rd = tuple_residual_forms(backend, xis, etabars, dV)
        return rb.norm(), rd.norm()

    rb, rd = residuals(t.xis, t.etabars)
    member = rb <= tol and rd <= tol
    sw_xis = [eb.conj() for eb in t.etabars]
    sw_etas = [xi.conj() for xi in t.xis]
    srb, srd = residuals(sw_xis, sw_etas)
    swap_member = srb <= tol and srd <= tol
    lie_ok = all(c.member for c in t.field_certificates())
    return PgReport(member=member, residual_bar=rb, residual_del=rd,
                    lie_g_ok=lie_ok, swap_member=swap_member,
                    swap_symmetric=member == swap_member)


# -- the pairing and its invariances ----------------------------------------------


def omega_eval(f: MapSpec, fields: Sequence[InvVectorField]) -> complex:
    """Integral pairing of the pulled-back power against 2(n-1) fields."""
    n = f.target.n
    if len(fields) != 2 * (n - 1):
        raise ValidationError("need %d field arguments" % (2 * (n - 1)))
    P = f.pulled_power()
    c = evaluate_inv(P, fields)
    return complex(c * CRat(f.source.volume_scale))


def _gamma_for(f: MapSpec, metric: HermitianMetricSpec, policy: str) -> InvForm:
    if policy == "neumann":
        P = f.pulled_power()
        Pf = InvForm(f.source, {k: complex(c) for k, c in P.coeffs.items()})
        return neumann_gamma(Pf, metric)
    rep = x_membership(f)
    if not rep.member:
        raise ClassObstructionError(rep.pulled_norm, rep.obstruction)
    return rep.gamma


def pairing_value(gamma: InvForm, t: MomentTuple, model: LieModel) -> complex:
    c = evaluate_inv(gamma, t.xis + t.etabars)
    return 1j * complex(c) * float(model.volume_scale)


def mu_eval(f: MapSpec, t: MomentTuple,
            metric: Optional[HermitianMetricSpec] = None,
            gamma_policy: Optional[str] = None,
            enforce_membership: bool = True) -> complex:
    """i * integral of Gamma(tuple) dV with Gamma under the chosen policy."""
    n = f.target.n
    if t.arity != n - 2:
        raise ValidationError("tuple arity %d does not match target dimension %d"
                              % (t.arity, n))
    policy = gamma_policy or t.gamma_policy
    metric = metric or HermitianMetricSpec.flat(f.source)
    if enforce_membership:
        pg = pg_membership(t, f.source)
        if not pg.member:
            raise ValidationError(
                "tuple is not admissible: residuals (%.3e, %.3e)"
                % (pg.residual_bar, pg.residual_del))
    gamma = _gamma_for(f, metric, policy)
    return pairing_value(gamma, t, f.source)


@dataclass
class GaugeReport:
    base_value: complex
    max_deviation: float
    deviations: List[float]
    reversal_ok: bool
    closure_del_norm: float
    closure_delbar_norm: float


def well_definedness_check(f: MapSpec, t: MomentTuple,
                           metric: Optional[HermitianMetricSpec] = None,
                           trials: int = 20, seed: int = 0,
                           enforce_membership: bool = True) -> GaugeReport:
    """Pairing invariance under potential shifts by del/delbar images.

    Samples random invariant (n-2, n-3)-forms beta and shifts Gamma by
    del(conj beta) + delbar(beta); for admissible tuples the pairing is
    unchanged.  Also asserts the two reversal-sign identities and the
    closure consequence (derivatives of the iterated contraction vanish).
    """
    model = f.source
    n = f.target.n
    metric = metric or HermitianMetricSpec.flat(model)
    gamma = _gamma_for(f, metric, t.gamma_policy)
    base = pairing_value(gamma, t, model)
    rng = random.Random(seed)
    p, q = n - 2, n - 3
    keys = model.basis_keys(p, q) if q >= 0 else []
    devs = []
    backend = InvariantBackend(model)
    dV = model.volume_form()
    reversal_ok = True
    for _ in range(trials):
        beta = model.zero()
        for k in keys:
            c = CRat(Fraction(rng.randint(-2, 2), rng.randint(1, 2)),
                     Fraction(rng.randint(-2, 2), rng.randint(1, 2)))
            if c:
                beta = beta + model.form_basis(p, q, k, c)
        shift = model.ce_del(beta.conj()) + model.ce_delbar(beta)
        if shift.is_exact_coeffs():
            for piece in (model.ce_del(beta.conj()), model.ce_delbar(beta)):
                if not reversal_sign_check(backend, piece, t.xis, t.etabars, dV):
                    reversal_ok = False
        shifted = gamma + InvForm(model, {k: complex(c)
                                          for k, c in shift.coeffs.items()})
        val = pairing_value(shifted, t, model)
        devs.append(abs(val - base))
    C = iterated_contraction(backend, t.xis, t.etabars, dV)
    closure_del = backend.del_(C).norm()
    closure_delbar = backend.delbar(C).norm()
    return GaugeReport(base_value=base, max_deviation=max(devs) if devs else 0.0,
                       deviations=devs, reversal_ok=reversal_ok,
                       closure_del_norm=closure_del,
                       closure_delbar_norm=closure_delbar)


# -- flow-derivative confirmation ---------------------------------------------------


@dataclass
class FlowStepRecord:
    h: float
    error: float
    rel_error: float
    obstruction: Optional[str] = None


@dataclass
class FlowReport:
    target_norm: float
    steps: List[FlowStepRecord]
    orders: List[float]
    trivial: bool

    @property
    def observed_order(self) -> float:
        return min(self.orders) if self.orders else float("inf")

    @property
    def ok(self) -> bool:
        return all(s.obstruction is None for s in self.steps)


def flow_derivative_check(f: MapSpec, xi: InvVectorField, eta: InvVectorField,
                          metric: Optional[HermitianMetricSpec] = None,
                          steps: Sequence[float] = (1e-1, 5e-2, 2.5e-2)) -> FlowReport:
    """Mixed finite difference of the potential family against the contraction.

    The family precomposes the map with the holomorphic flow of xi in the
    first parameter and the conjugate flow of eta in the second; for each
    stencil point the pulled-back power must stay solvable (each failure is
    recorded as a per-step obstruction).  The centered 3x3 product stencil
    (corner weights; center row and column drop out) approximates the mixed
    second derivative of the potential at the origin, which is compared
    componentwise with etabar . xi . (pulled power).
    """
    model = f.source
    metric = metric or HermitianMetricSpec.flat(model)
    if xi.kind != HOLO or eta.kind != HOLO:
        raise ValidationError("flow fields must be (1,0)")
    for v in (xi, eta):
        cert = lie_g_membership(v)
        if not cert.member:
            raise ValidationError("flow field is not holomorphic volume "
                                  "preserving: %r" % (cert,))
    P = f.pulled_power()
    Pf = InvForm(model, {k: complex(c) for k, c in P.coeffs.items()})
    etabar = eta.conj()
    A = contract_inv(etabar, contract_inv(xi, Pf))
    a_norm = A.norm()
    trivial = a_norm == 0.0 and not lie10_inv(xi, Pf) and not lie01_inv(etabar, Pf)

    def gamma_at(s: float, tt: float) -> InvForm:
        G = flow_pullback(etabar, tt, flow_pullback(xi, s, Pf))
        return neumann_gamma(G, metric)

    records: List[FlowStepRecord] = []
    for h in steps:
        try:
            corners = {(es, et): gamma_at(es * h, et * h)
                       for es in (+1, -1) for et in (+1, -1)}
        except ClassObstructionError as e:
            records.append(FlowStepRecord(h=h, error=float("nan"),
                                          rel_error=float("nan"),
                                          obstruction=str(e)))
            continue
        fd = model.zero()
        for (es, et), g in corners.items():
            fd = fd + g.scale(es * et / (4.0 * h * h))
        approx = fd.scale(1j)
        err_form = approx - A
        err = max((abs(complex(c)) for c in err_form.coeffs.values()), default=0.0)
        rel = err / a_norm if a_norm else err
        records.append(FlowStepRecord(h=h, error=err, rel_error=rel))
    orders = []
    for a, b in zip(records, records[1:]):
        if a.obstruction or b.obstruction:
            continue
        if a.error > 0 and b.error > 0:
            orders.append(math.log(a.error / b.error) / math.log(a.h / b.h))
    return FlowReport(target_norm=a_norm, steps=records, orders=orders,
                      trivial=trivial)


# conjugation-swap convention: swapping the two blocks and conjugating maps
# the pairing to (-1)^(n+1) times its complex conjugate.


def conjugation_swap_value(f: MapSpec, t: MomentTuple,
                           metric: Optional[HermitianMetricSpec] = None) -> Tuple[complex, complex]:
    """(mu of swapped-conjugated tuple, expected value from conjugation)."""
    n = f.target.n
    swapped = MomentTuple([eb.conj() for eb in t.etabars],
                          [xi.conj() for xi in t.xis],
                          gamma_policy=t.gamma_policy)
    mu = mu_eval(f, t, metric)
    mu_swapped = mu_eval(f, swapped, metric)
    expected = ((-1) ** (n + 1)) * mu.conjugate()
    return mu_swapped, expected


# -- chart-backend randomized laws ---------------------------------------------------


def chart_tuple_fields(rng: random.Random, dim: int, m: int):
    """m volume-preserving holomorphic fields and their conjugates."""
    xis = [symalg.random_divergence_free_holomorphic_field(rng, dim)
           for _ in range(m)]
    etas = [symalg.random_divergence_free_holomorphic_field(rng, dim)
            for _ in range(m)]
    return xis, [e.conj() for e in etas]


def chart_contraction_derivative_trials(n: int, dim: int, seed: int = 0,
                                        trials: int = 5) -> bool:
    """Exact check of the closed double-sum formulas on the chart."""
    rng = random.Random(seed)
    backend = ChartBackend(dim)
    dV = backend.volume()
    m = n - 2
    for _ in range(trials):
        xis, etabars = chart_tuple_fields(rng, dim, m)
        okd, okdb, *_ = contraction_derivative_check(backend, xis, etabars, dV)
        if not (okd and okdb):
            return False
    return True


def chart_reversal_trials(n: int, dim: int, seed: int = 0,
                          trials: int = 5) -> bool:
    """Exact reversal-sign identities for arbitrary smooth fields."""
    rng = random.Random(seed)
    backend = ChartBackend(dim)
    dV = backend.volume()
    m = n - 2
    for _ in range(trials):
        xis = [symalg.random_field(rng, dim) for _ in range(m)]
        etabars = [symalg.random_field(rng, dim, symalg.ANTI) for _ in range(m)]
        beta = symalg.random_form(rng, dim, m, max(m - 1, 0), nterms=1)
        for piece in (symalg.chart_del(beta.conj()), symalg.chart_delbar(beta)):
            if not reversal_sign_check(backend, piece, xis, etabars, dV):
                return False
    return True


def invariant_contraction_derivative_check(model: LieModel,
                                           xis, etabars) -> bool:
    backend = InvariantBackend(model)
    dV = model.volume_form()
    okd, okdb, *_ = contraction_derivative_check(backend, xis, etabars, dV)
    return okd and okdb


mixed_second_derivative_check = symalg.mixed_second_derivative_check


# -- map / tuple file formats ---------------------------------------------------------
#
#   map iwasawa_to_t3
#   source iwasawa
#   target torus3
#   row 1  1 0  0 0  0 0      # k then d pairs "re im" (Fraction syntax)
#
#   tuple z3_pair
#   model iwasawa
#   gamma_policy neumann
#   xi     0 0  0 0  1 0
#   etabar 0 0  0 0  1 0


def parse_mapspec(text: str, models: Dict[str, LieModel],
                  path: str = "<map>") -> MapSpec:
    from .catalog import standard_metric_form
    name = source = target = None
    rows: Dict[int, List[CRat]] = {}
    omega_terms: List[Tuple[int, int, CRat]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0] == "map":
                name = parts[1]
            elif parts[0] == "source":
                source = parts[1]
            elif parts[0] == "target":
                target = parts[1]
            elif parts[0] == "row":
                k = int(parts[1])
                vals = parts[2:]
                if len(vals) % 2:
                    raise ValueError("row needs re/im pairs")
                rows[k] = [CRat(Fraction(vals[2 * j]), Fraction(vals[2 * j + 1]))
                           for j in range(len(vals) // 2)]
            elif parts[0] == "omega":
                j, k = int(parts[1]), int(parts[2])
                omega_terms.append((j, k, CRat(Fraction(parts[3]), Fraction(parts[4]))))
            else:
                raise ValueError("unrecognized line %r" % line)
        except (ValueError, IndexError) as e:
            raise ParseError(path, lineno, str(e)) from None
    if not (name and source and target):
        raise ParseError(path, 0, "map file needs 'map', 'source', 'target'")
    if source not in models:
        raise ParseError(path, 0, "unknown source model %r" % source)
    if target not in models:
        raise ParseError(path, 0, "unknown target model %r" % target)
    src, tgt = models[source], models[target]
    if omega_terms:
        omega = InvForm(tgt, {((j,), (k,)): c for j, k, c in omega_terms})
    else:
        omega = standard_metric_form(tgt)
    bt = BalancedTarget(tgt, omega)
    n = tgt.dim
    matrix = []
    for k in range(1, n + 1):
        if k not in rows:
            raise ParseError(path, 0, "missing row %d" % k)
        if len(rows[k]) != src.dim:
            raise ParseError(path, 0, "row %d needs %d entries" % (k, src.dim))
        matrix.append(rows[k])
    try:
        return MapSpec(name, src, bt, matrix)
    except ValidationError as e:
        raise ParseError(path, 0, str(e)) from None


def parse_tuple(text: str, models: Dict[str, LieModel],
                path: str = "<tuple>") -> Tuple[str, MomentTuple]:
    name = None
    model = None
    policy = "neumann"
    xis: List[InvVectorField] = []
    etabars: List[InvVectorField] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0] == "tuple":
                name = parts[1]
            elif parts[0] == "model":
                model = models[parts[1]]
            elif parts[0] == "gamma_policy":
                policy = parts[1]
            elif parts[0] in ("xi", "etabar"):
                if model is None:
                    raise ValueError("'model' must come before field lines")
                vals = parts[1:]
                if len(vals) != 2 * model.dim:
                    raise ValueError("need %d re/im pairs" % model.dim)
                coeffs = [CRat(Fraction(vals[2 * j]), Fraction(vals[2 * j + 1]))
                          for j in range(model.dim)]
                if parts[0] == "xi":
                    xis.append(InvVectorField(model, HOLO, coeffs))
                else:
                    etabars.append(InvVectorField(model, ANTI, coeffs))
            else:
                raise ValueError("unrecognized line %r" % line)
        except KeyError:
            raise ParseError(path, lineno, "unknown model %r" % parts[1]) from None
        except (ValueError, IndexError) as e:
            raise ParseError(path, lineno, str(e)) from None
    if name is None or model is None:
        raise ParseError(path, 0, "tuple file needs 'tuple' and 'model'")
    try:
        return name, MomentTuple(xis, etabars, policy)
    except ValidationError as e:
        raise ParseError(path, 0, str(e)) from None


def load_mapspec(path, models) -> MapSpec:
    with open(path) as fh:
        return parse_mapspec(fh.read(), models, str(path))


def load_tuple(path, models):
    with open(path) as fh:
        return parse_tuple(fh.read(), models, str(path))
