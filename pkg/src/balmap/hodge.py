"""Metric-dependent operators on the invariant complex.

The coframe Gram matrix induces inner products on every wedge space by
minors; operators are assembled as dense matrices over the wedge bases and
orthonormalized through the Cholesky factor of the Gram, so adjoints are
plain conjugate transposes and the Laplacian is an honest Hermitian matrix.

Cohomology dimensions never touch the metric: they are exact ranks over the
Gaussian rationals.  The Green operator and the minimal-solution formula for
the ddbar-equation are floating point with pinned tolerances; outputs are
labeled invariant representatives since membership and minimality are
certified inside the invariant complex only.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from .exact import CRat, ZERO, exact_rank
from .invariant import (InvForm, LieModel, operator_matrix, operator_rows_exact)

ADJOINT_TOL = 1e-12
PSD_TOL = 1e-10
RANK_CUTOFF = 1e-9


class ClassObstructionError(ValueError):
    """The given form is not in the image of ddbar on the invariant complex."""

    def __init__(self, residual: float, msg: Optional[str] = None):
        super().__init__(msg or "form is not ddbar-exact on the invariant "
                                "complex (projection residual %.3e)" % residual)
        self.residual = residual


@dataclass
class HermitianMetricSpec:
    """Positive-definite Hermitian Gram matrix on the (1,0)-coframe."""

    model: LieModel
    gram: np.ndarray

    def __post_init__(self):
        g = np.asarray(self.gram, dtype=complex)
        if g.shape != (self.model.dim, self.model.dim):
            raise ValueError("gram must be %d x %d"
                             % (self.model.dim, self.model.dim))
        if np.linalg.norm(g - g.conj().T) > 1e-12:
            raise ValueError("gram must be Hermitian")
        if np.linalg.eigvalsh(g).min() <= 0:
            raise ValueError("gram must be positive definite")
        self.gram = g

    @staticmethod
    def flat(model: LieModel) -> "HermitianMetricSpec":
        return HermitianMetricSpec(model, np.eye(model.dim, dtype=complex))


def _minor_gram(g: np.ndarray, keys, vol: float) -> np.ndarray:
    """Gram of the wedge basis phi_I ^ phibar_J by determinant minors."""
    n = len(keys)
    H = np.zeros((n, n), dtype=complex)

    def det_sub(rows, cols):
        if not rows:
            return 1.0 + 0j
        sub = g[np.ix_([r - 1 for r in rows], [c - 1 for c in cols])]
        return np.linalg.det(sub)

    for a, (Ia, Ja) in enumerate(keys):
        for b, (Ib, Jb) in enumerate(keys):
            H[a, b] = det_sub(Ia, Ib) * np.conj(det_sub(Ja, Jb)) * vol
    return H


class MetricContext:
    """Caches Grams, Cholesky factors and orthonormalized operators."""

    def __init__(self, metric: HermitianMetricSpec):
        self.metric = metric
        self.model = metric.model
        self._gram: Dict[Tuple[int, int], np.ndarray] = {}
        self._chol: Dict[Tuple[int, int], np.ndarray] = {}

    def dim(self, p: int, q: int) -> int:
        return len(self.model.basis_keys(p, q))

    def gram(self, p: int, q: int) -> np.ndarray:
        key = (p, q)
        if key not in self._gram:
            keys = self.model.basis_keys(p, q)
            self._gram[key] = _minor_gram(self.metric.gram, keys,
                                          float(self.model.volume_scale))
        return self._gram[key]

    def chol(self, p: int, q: int) -> np.ndarray:
        """Lower factor L with H = L L^H; x -> L^H x is an isometry."""
        key = (p, q)
        if key not in self._chol:
            self._chol[key] = np.linalg.cholesky(self.gram(p, q))
        return self._chol[key]

    def to_ortho(self, p: int, q: int, vec: np.ndarray) -> np.ndarray:
        return self.chol(p, q).conj().T @ vec

    def from_ortho(self, p: int, q: int, vec: np.ndarray) -> np.ndarray:
        return np.linalg.solve(self.chol(p, q).conj().T, vec)

    def inner(self, u: InvForm, v: InvForm) -> complex:
        bid = u.bidegree() or v.bidegree()
        if bid is None:
            return 0j
        if u and v and u.bidegree() != v.bidegree():
            raise ValueError("inner product needs matching homogeneous forms")
        p, q = bid
        H = self.gram(p, q)
        return complex(v.to_vector(p, q).conj() @ H @ u.to_vector(p, q))

    # raw operator matrices (wedge-basis coordinates)

    def op_del(self, p: int, q: int) -> np.ndarray:
        return operator_matrix(self.model, self.model.ce_del, p, q, p + 1, q)

    def op_delbar(self, p: int, q: int) -> np.ndarray:
        return operator_matrix(self.model, self.model.ce_delbar, p, q, p, q + 1)

    def op_deldelbar(self, p: int, q: int) -> np.ndarray:
        return operator_matrix(self.model,
                               lambda u: self.model.ce_del(self.model.ce_delbar(u)),
                               p, q, p + 1, q + 1)

    # orthonormalized operators: adjoint = conjugate transpose

    def ortho_op(self, A: np.ndarray, dom: Tuple[int, int],
                 cod: Tuple[int, int]) -> np.ndarray:
        Ld = self.chol(*dom)
        Lc = self.chol(*cod)
        if A.size == 0:
            return A
        return Lc.conj().T @ A @ np.linalg.inv(Ld.conj().T)


def adjoint(ctx: MetricContext, A: np.ndarray, dom: Tuple[int, int],
            cod: Tuple[int, int]) -> np.ndarray:
    """Adjoint of A: dom -> cod with respect to the induced inner products."""
    Hd = ctx.gram(*dom)
    Hc = ctx.gram(*cod)
    return np.linalg.solve(Hd, A.conj().T @ Hc)


def delta_bc_ortho(ctx: MetricContext, p: int, q: int) -> np.ndarray:
    """Bott-Chern Laplacian at bidegree (p,q) in orthonormal coordinates.

    Six nonnegative terms; Hermitian positive semi-definite by construction.
    """
    n = ctx.dim(p, q)
    Z = np.zeros((n, n), dtype=complex)

    def O(A, dom, cod):
        return ctx.ortho_op(A, dom, cod)

    out = Z.copy()
    d = ctx.model.dim
    # del : (p,q) -> (p+1,q)
    if p + 1 <= d:
        D = O(ctx.op_del(p, q), (p, q), (p + 1, q))
        out += D.conj().T @ D
    # delbar : (p,q) -> (p,q+1)
    if q + 1 <= d:
        Db = O(ctx.op_delbar(p, q), (p, q), (p, q + 1))
        out += Db.conj().T @ Db
    # (del delbar) : (p,q) -> (p+1,q+1)
    if p + 1 <= d and q + 1 <= d:
        P = O(ctx.op_deldelbar(p, q), (p, q), (p + 1, q + 1))
        out += P.conj().T @ P
    # (del delbar)* : (p,q) -> (p-1,q-1)
    if p >= 1 and q >= 1:
        P2 = O(ctx.op_deldelbar(p - 1, q - 1), (p - 1, q - 1), (p, q))
        out += P2 @ P2.conj().T
    # del* delbar : (p,q) -> (p-1,q+1)
    if p >= 1 and q + 1 <= d:
        Db = O(ctx.op_delbar(p, q), (p, q), (p, q + 1))
        D2 = O(ctx.op_del(p - 1, q + 1), (p - 1, q + 1), (p, q + 1))
        S = D2.conj().T @ Db
        out += S.conj().T @ S
    # (del* delbar)* = delbar* del : (p,q) -> (p+1,q-1)
    if q >= 1 and p + 1 <= d:
        D = O(ctx.op_del(p, q), (p, q), (p + 1, q))
        Db2 = O(ctx.op_delbar(p + 1, q - 1), (p + 1, q - 1), (p + 1, q))
        T = Db2.conj().T @ D
        out += T.conj().T @ T
    return out


def delta_bc(ctx: MetricContext, p: int, q: int) -> np.ndarray:
    """Bott-Chern Laplacian in raw wedge-basis coordinates."""
    A = delta_bc_ortho(ctx, p, q)
    L = ctx.chol(p, q)
    return np.linalg.solve(L.conj().T, A @ L.conj().T)


def _pinv_psd(A: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Pseudo-inverse and kernel projector of a Hermitian PSD matrix."""
    if A.size == 0:
        return A, A
    w, V = np.linalg.eigh((A + A.conj().T) / 2)
    cut = RANK_CUTOFF * max(w.max(initial=0.0), 1e-300)
    inv = np.where(w > cut, 1.0 / np.where(w > cut, w, 1.0), 0.0)
    pinv = (V * inv) @ V.conj().T
    kerp = (V * (w <= cut)) @ V.conj().T
    return pinv, kerp


def green_apply(ctx: MetricContext, p: int, q: int, u: InvForm,
                laplacian: Optional[np.ndarray] = None) -> Tuple[InvForm, float]:
    """Green operator of the Bott-Chern Laplacian (pseudo-inverse semantics).

    Returns (G u, harmonic projection norm of u).  G vanishes on the kernel.
    """
    A = delta_bc_ortho(ctx, p, q) if laplacian is None else laplacian
    pinv, kerp = _pinv_psd(A)
    vec = ctx.to_ortho(p, q, u.to_vector(p, q))
    harm = kerp @ vec
    res = pinv @ vec
    out = ctx.from_ortho(p, q, res)
    return InvForm.from_vector(ctx.model, p, q, out), float(np.linalg.norm(harm))


def neumann_gamma(fpull: InvForm, metric: HermitianMetricSpec,
                  tol: float = 1e-8) -> InvForm:
    """Minimal solution of i ddbar Gamma = fpull on the invariant complex.

    Gamma = -i (ddbar)* applied to the Green-operator image of fpull; raises
    ClassObstructionError when fpull has no invariant potential.  The output
    is the invariant Neumann representative for this metric.
    """
    model = metric.model
    bid = fpull.bidegree()
    if not fpull:
        d = model.dim
        bid = (d - 1, d - 1)
    if bid is None:
        raise ValueError("need a homogeneous form")
    p, q = bid
    if p < 1 or q < 1:
        raise ValueError("need a form of bidegree at least (1,1)")
    ctx = MetricContext(metric)
    vec = fpull.to_vector(p, q)
    P = ctx.op_deldelbar(p - 1, q - 1)
    # solvability: least squares residual against Im(ddbar)
    if P.size:
        sol, *_ = np.linalg.lstsq(P, vec, rcond=None)
        resid = float(np.linalg.norm(P @ sol - vec))
    else:
        resid = float(np.linalg.norm(vec))
    scale = max(float(np.linalg.norm(vec)), 1.0)
    if resid > tol * scale:
        raise ClassObstructionError(resid)

    A = delta_bc_ortho(ctx, p, q)
    pinv, _ = _pinv_psd(A)
    w = pinv @ ctx.to_ortho(p, q, vec)
    Po = ctx.ortho_op(P, (p - 1, q - 1), (p, q))
    igamma = Po.conj().T @ w
    gamma_vec = ctx.from_ortho(p - 1, q - 1, -1j * igamma)
    gamma = InvForm.from_vector(model, p - 1, q - 1, gamma_vec)

    # reproduction and minimality certificates
    back = model.ce_del(model.ce_delbar(gamma)).scale(1j)
    err = (back - fpull).norm()
    if err > 1e-10 * max(fpull.norm(), 1.0):
        raise ArithmeticError("ddbar reproduction failed: %.3e" % err)
    return gamma


def minimality_residual(gamma: InvForm, metric: HermitianMetricSpec) -> float:
    """Distance of gamma from Im((ddbar)*) relative to its norm."""
    model = metric.model
    bid = gamma.bidegree()
    if bid is None:
        return 0.0
    p, q = bid
    ctx = MetricContext(metric)
    P = ctx.op_deldelbar(p, q)
    if not P.size:
        return float(np.linalg.norm(ctx.to_ortho(p, q, gamma.to_vector(p, q))))
    Po = ctx.ortho_op(P, (p, q), (p + 1, q + 1))
    v = ctx.to_ortho(p, q, gamma.to_vector(p, q))
    # Im((ddbar)*) = row space of Po; remove the orthogonal projection
    U, s, Vh = np.linalg.svd(Po)
    rank = int((s > RANK_CUTOFF * s.max()).sum()) if s.size else 0
    rows = Vh[:rank].conj().T  # orthonormal basis of Im(Po^H)
    proj = rows @ (rows.conj().T @ v)
    return float(np.linalg.norm(v - proj) / max(np.linalg.norm(v), 1e-300))


def three_space_decompose(u: InvForm, metric: HermitianMetricSpec,
                          p: int = 1, q: int = 1):
    """Split u into harmonic + ddbar-image + (del*-image + delbar*-image)."""
    bid = u.bidegree()
    if bid is not None:
        p, q = bid
    ctx = MetricContext(metric)
    A = delta_bc_ortho(ctx, p, q)
    _, kerp = _pinv_psd(A)
    v = ctx.to_ortho(p, q, u.to_vector(p, q))
    h = kerp @ v
    if p >= 1 and q >= 1:
        Po = ctx.ortho_op(ctx.op_deldelbar(p - 1, q - 1), (p - 1, q - 1), (p, q))
    else:
        Po = np.zeros((ctx.dim(p, q), 0), dtype=complex)
    if Po.size:
        U, s, Vh = np.linalg.svd(Po)
        rank = int((s > RANK_CUTOFF * s.max()).sum()) if s.size else 0
        cols = U[:, :rank]
        mid = cols @ (cols.conj().T @ v)
    else:
        mid = np.zeros_like(v)
    rest = v - h - mid

    def back(w):
        return InvForm.from_vector(ctx.model, p, q, ctx.from_ortho(p, q, w))
    return back(h), back(mid), back(rest)


# -- exact cohomology dimensions -------------------------------------------------


def _rank_exact(model: LieModel, op, p, q, p2, q2) -> int:
    if p2 > model.dim or q2 > model.dim or p2 < 0 or q2 < 0:
        return 0
    rows = operator_rows_exact(model, op, p, q, p2, q2)
    if not rows or not rows[0]:
        return 0
    return exact_rank(rows)


def aeppli_dim(model: LieModel, p: int, q: int,
               metric: Optional[HermitianMetricSpec] = None) -> int:
    """dim ker(ddbar) - dim(Im del + Im delbar) at bidegree (p,q), exact.

    The metric argument is accepted for interface symmetry and ignored:
    dimensions are metric independent.
    """
    n = len(model.basis_keys(p, q))
    ddbar = lambda u: model.ce_del(model.ce_delbar(u))
    r_ddbar = _rank_exact(model, ddbar, p, q, p + 1, q + 1)
    ker = n - r_ddbar
    # stack the two image maps side by side (as columns, i.e. rank of rows^T)
    cols: List[List[CRat]] = []
    if p >= 1:
        rows = operator_rows_exact(model, model.ce_del, p - 1, q, p, q)
        if rows and rows[0]:
            cols.extend(list(col) for col in zip(*rows))
    if q >= 1:
        rows = operator_rows_exact(model, model.ce_delbar, p, q - 1, p, q)
        if rows and rows[0]:
            cols.extend(list(col) for col in zip(*rows))
    r_img = exact_rank(cols) if cols else 0
    return ker - r_img


def bc_dim(model: LieModel, p: int, q: int) -> int:
    """dim(ker del ∩ ker delbar) - rank(ddbar into (p,q)), exact."""
    n = len(model.basis_keys(p, q))
    rows: List[List[CRat]] = []
    rd = operator_rows_exact(model, model.ce_del, p, q, p + 1, q)
    if rd and rd[0]:
        rows.extend(rd)
    rdb = operator_rows_exact(model, model.ce_delbar, p, q, p, q + 1)
    if rdb and rdb[0]:
        rows.extend(rdb)
    ker = n - (exact_rank(rows) if rows else 0)
    ddbar = lambda u: model.ce_del(model.ce_delbar(u))
    r_im = _rank_exact(model, ddbar, p - 1, q - 1, p, q) if (p >= 1 and q >= 1) else 0
    return ker - r_im


def exact_ddbar_solve(model: LieModel, target: InvForm):
    """Exact solution of i ddbar Gamma = target over the invariant complex.

    Returns an InvForm with CRat coefficients, or None when unsolvable.
    Requires exact coefficients on the target.
    """
    bid = target.bidegree()
    if target and bid is None:
        raise ValueError("target must be homogeneous")
    d = model.dim
    if not target:
        bid = (d, d)
    p, q = bid
    if p < 1 or q < 1:
        return None if target else model.zero()
    from .exact import exact_solve, I as Iunit
    op = lambda u: model.ce_del(model.ce_delbar(u)).scale(Iunit)
    rows = operator_rows_exact(model, op, p - 1, q - 1, p, q)
    keys_cod = model.basis_keys(p, q)
    rhs = [target.coeffs.get(k, ZERO) for k in keys_cod]
    rhs = [c if isinstance(c, CRat) else None for c in rhs]
    if any(c is None for c in rhs):
        raise ValueError("exact solve needs exact coefficients")
    sol = exact_solve(rows, rhs)
    if sol is None:
        return None
    keys_dom = model.basis_keys(p - 1, q - 1)
    return InvForm(model, dict(zip(keys_dom, sol)))
