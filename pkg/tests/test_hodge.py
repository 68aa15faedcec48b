"""Metric operators: adjoints, Laplacian, Green operator, minimal potentials."""

import json
import pathlib
import random

import numpy as np
import pytest

from balmap.catalog import MODELS
from balmap.exact import CRat, I
from balmap.hodge import (ClassObstructionError, HermitianMetricSpec,
                          MetricContext, adjoint, aeppli_dim, bc_dim,
                          delta_bc, delta_bc_ortho, exact_ddbar_solve,
                          green_apply, minimality_residual, neumann_gamma,
                          three_space_decompose)
from balmap.invariant import InvForm, wedge_inv

IW = MODELS["iwasawa"]
T3 = MODELS["torus3"]
NK = MODELS["nakamura"]
HM = MODELS["heis_mixed"]

FIXTURE = pathlib.Path(__file__).parent / "fixtures" / "cohomology_golden.json"


def rand_metric(rng, model):
    d = model.dim
    A = np.array([[complex(rng.gauss(0, 1), rng.gauss(0, 1)) for _ in range(d)]
                  for _ in range(d)])
    return HermitianMetricSpec(model, A @ A.conj().T + 2 * np.eye(d))


def rand_form(rng, model, p, q):
    keys = model.basis_keys(p, q)
    vec = np.array([complex(rng.gauss(0, 1), rng.gauss(0, 1)) for _ in keys])
    return InvForm.from_vector(model, p, q, vec)


def test_metric_validation():
    with pytest.raises(ValueError):
        HermitianMetricSpec(IW, np.array([[1, 2], [3, 4]]))
    with pytest.raises(ValueError):
        HermitianMetricSpec(IW, -np.eye(3))
    with pytest.raises(ValueError):
        HermitianMetricSpec(IW, np.array([[1, 1j, 0], [1j, 1, 0], [0, 0, 1]]))


def test_adjointness_random_metrics():
    rng = random.Random(0)
    for model in (IW, HM):
        for _ in range(3):
            m = rand_metric(rng, model)
            ctx = MetricContext(m)
            D = ctx.op_del(1, 1)
            Ds = adjoint(ctx, D, (1, 1), (2, 1))
            for _ in range(5):
                u = rand_form(rng, model, 1, 1)
                v = rand_form(rng, model, 2, 1)
                lhs = ctx.inner(InvForm.from_vector(model, 2, 1,
                                                    D @ u.to_vector(1, 1)), v)
                rhs = ctx.inner(u, InvForm.from_vector(model, 1, 1,
                                                       Ds @ v.to_vector(2, 1)))
                assert abs(lhs - rhs) < 1e-12 * (1 + abs(lhs))
            # involution
            assert np.linalg.norm(adjoint(ctx, Ds, (2, 1), (1, 1)) - D) < 1e-10


def test_torus_laplacian_vanishes():
    ctx = MetricContext(HermitianMetricSpec.flat(T3))
    A = delta_bc_ortho(ctx, 1, 1)
    assert np.linalg.norm(A) < 1e-14
    assert int(np.linalg.matrix_rank(A)) == 0  # kernel is everything


def test_laplacian_selfadjoint_psd_and_kernel():
    rng = random.Random(1)
    for model in (IW, NK, HM):
        m = rand_metric(rng, model)
        ctx = MetricContext(m)
        for (p, q) in [(1, 1), (2, 2)]:
            A = delta_bc_ortho(ctx, p, q)
            assert np.linalg.norm(A - A.conj().T) < 1e-12
            w = np.linalg.eigvalsh(A)
            assert w.min() > -1e-10
            kdim = int((w <= 1e-9 * max(w.max(), 1.0)).sum())
            assert kdim == bc_dim(model, p, q)


def test_green_pseudo_inverse_property():
    rng = random.Random(2)
    m = HermitianMetricSpec.flat(IW)
    ctx = MetricContext(m)
    A = delta_bc_ortho(ctx, 1, 1)
    for _ in range(10):
        u = rand_form(rng, IW, 1, 1)
        gu, hnorm = green_apply(ctx, 1, 1, u)
        vec = ctx.to_ortho(1, 1, u.to_vector(1, 1))
        gvec = ctx.to_ortho(1, 1, gu.to_vector(1, 1))
        assert np.linalg.norm(A @ A @ gvec - A @ vec) < 1e-9
        # G vanishes on the kernel
        w, V = np.linalg.eigh(A)
        kvec = V[:, 0]
        if w[0] < 1e-12:
            ku = InvForm.from_vector(IW, 1, 1, ctx.from_ortho(1, 1, kvec))
            gk, hn = green_apply(ctx, 1, 1, ku)
            assert gk.norm() < 1e-10 and hn > 0.9


def test_neumann_reproduction_and_minimality():
    fpull = wedge_inv(wedge_inv(IW.phi(1), IW.phi(2)),
                      wedge_inv(IW.phibar(1), IW.phibar(2)))
    for seed in range(3):
        rng = random.Random(seed)
        m = HermitianMetricSpec.flat(IW) if seed == 0 else rand_metric(rng, IW)
        gam = neumann_gamma(fpull, m)
        back = IW.ce_del(IW.ce_delbar(gam)).scale(1j)
        assert (back - fpull).norm() < 1e-10 * fpull.norm()
        assert minimality_residual(gam, m) < 1e-10


def test_neumann_agrees_with_hand_potential_flat():
    fpull = wedge_inv(wedge_inv(IW.phi(1), IW.phi(2)),
                      wedge_inv(IW.phibar(1), IW.phibar(2)))
    gam = neumann_gamma(fpull, HermitianMetricSpec.flat(IW))
    hand = wedge_inv(IW.phi(3), IW.phibar(3)).scale(I)
    handf = InvForm(IW, {k: complex(c) for k, c in hand.coeffs.items()})
    diff = gam - handf
    assert IW.ce_del(IW.ce_delbar(diff)).norm() < 1e-12
    assert diff.norm() < 1e-10  # flat metric: the hand potential is minimal


def test_neumann_zero_input():
    gam = neumann_gamma(IW.zero(), HermitianMetricSpec.flat(IW))
    assert gam.norm() == 0.0


def test_neumann_obstruction_on_torus():
    fpull = wedge_inv(wedge_inv(T3.phi(1), T3.phi(2)),
                      wedge_inv(T3.phibar(1), T3.phibar(2)))
    with pytest.raises(ClassObstructionError) as e:
        neumann_gamma(fpull, HermitianMetricSpec.flat(T3))
    assert e.value.residual > 0.5


def test_exact_solver_matches_float_solvability():
    fpull = wedge_inv(wedge_inv(IW.phi(1), IW.phi(2)),
                      wedge_inv(IW.phibar(1), IW.phibar(2)))
    gam = exact_ddbar_solve(IW, fpull)
    assert gam is not None
    assert IW.ce_del(IW.ce_delbar(gam)).scale(I) == fpull
    bad = wedge_inv(wedge_inv(T3.phi(1), T3.phi(2)),
                    wedge_inv(T3.phibar(1), T3.phibar(2)))
    assert exact_ddbar_solve(T3, bad) is None


def test_three_space_decomposition():
    rng = random.Random(3)
    m = HermitianMetricSpec.flat(IW)
    ctx = MetricContext(m)
    for _ in range(8):
        u = rand_form(rng, IW, 1, 1)
        h, mid, rest = three_space_decompose(u, m)
        assert (h + mid + rest - u).norm() < 1e-12
        for a, b in [(h, mid), (h, rest), (mid, rest)]:
            assert abs(ctx.inner(a, b)) < 1e-10
        # harmonic part is killed by the Laplacian
        A = delta_bc(ctx, 1, 1)
        assert np.linalg.norm(A @ h.to_vector(1, 1)) < 1e-9


def test_three_space_reproduces_exact_input():
    ex = IW.ce_del(IW.ce_delbar(wedge_inv(IW.phi(3), IW.phibar(3)))).scale(I)
    exf = InvForm(IW, {k: complex(c) for k, c in ex.coeffs.items()})
    h, mid, rest = three_space_decompose(exf, HermitianMetricSpec.flat(IW))
    assert h.norm() < 1e-10 and rest.norm() < 1e-10
    assert (mid - exf).norm() < 1e-10


def test_dimensions_match_frozen_oracle_goldens():
    golden = json.loads(FIXTURE.read_text())
    for name, table in golden["models"].items():
        model = MODELS[name]
        for key, dims in table.items():
            p, q = (int(x) for x in key.split(","))
            assert bc_dim(model, p, q) == dims["bottchern"], (name, p, q)
            assert aeppli_dim(model, p, q) == dims["aeppli"], (name, p, q)


def test_torus_closed_form_counts():
    from math import comb
    for d in (1, 2, 3):
        model = MODELS["torus%d" % d]
        for p in range(d + 1):
            for q in range(d + 1):
                n = comb(d, p) * comb(d, q)
                assert aeppli_dim(model, p, q) == n
                assert bc_dim(model, p, q) == n


def test_torus_adjoint_of_derivative_vanishes():
    ctx = MetricContext(HermitianMetricSpec.flat(T3))
    D = ctx.op_del(1, 1)
    assert np.linalg.norm(D) == 0.0
    assert np.linalg.norm(adjoint(ctx, D, (1, 1), (2, 1))) == 0.0
