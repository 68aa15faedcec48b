"""Structure-constant models: validation, calculus, integration, flows."""

import random
from fractions import Fraction

import numpy as np
import pytest

from balmap.catalog import MODELS, standard_metric_form
from balmap.exact import CRat, I, ONE
from balmap.invariant import (AA, HH, MIX, ANTI, HOLO, DiffTerm, InvForm,
                              InvVectorField, LieModel, ModelError,
                              contract_inv, evaluate_inv, flow_pullback,
                              format_model, integrate, lie01_inv, lie10_inv,
                              lie_inv, parse_model, wedge_inv, wedge_power,
                              ParseError)

IW = MODELS["iwasawa"]
T3 = MODELS["torus3"]
NK = MODELS["nakamura"]
HM = MODELS["heis_mixed"]


def test_model_rejects_non_integrable():
    with pytest.raises(ModelError):
        LieModel("bad", 2, {2: [DiffTerm(AA, 1, 2, ONE)]})


def test_model_rejects_d_squared_violation():
    # d(phi1) = phi2^phibar2 and d(phi2) = phi1^phibar1 break d^2 = 0
    with pytest.raises(ModelError):
        LieModel("bad2", 2, {1: [DiffTerm(MIX, 2, 2, ONE)],
                             2: [DiffTerm(MIX, 1, 1, ONE)]})


def test_model_rejects_bad_volume():
    with pytest.raises(ModelError):
        LieModel("bad3", 2, {}, Fraction(-1))


def test_torus_differential_vanishes():
    u = wedge_inv(T3.phi(1), T3.phibar(2))
    assert not T3.ce_d(u)


def test_iwasawa_delbar_example():
    got = IW.ce_delbar(wedge_inv(IW.phi(3), IW.phibar(3)))
    want = wedge_inv(IW.phi(3), wedge_inv(IW.phibar(1), IW.phibar(2)))
    assert got == want


def test_iwasawa_d_squared_on_forms():
    rng = random.Random(0)
    for _ in range(25):
        p, q = rng.randint(0, 3), rng.randint(0, 3)
        keys = IW.basis_keys(p, q)
        u = IW.zero()
        for k in keys:
            if rng.random() < 0.5:
                u = u + IW.form_basis(p, q, k,
                                      CRat(rng.randint(-2, 2), rng.randint(-2, 2)))
        assert not IW.ce_d(IW.ce_d(u))
        assert not IW.ce_del(IW.ce_del(u))
        assert not IW.ce_delbar(IW.ce_delbar(u))
        anti = IW.ce_del(IW.ce_delbar(u)) + IW.ce_delbar(IW.ce_del(u))
        assert not anti


def test_frame_duality_contraction():
    assert contract_inv(IW.frame(3), wedge_inv(IW.phi(3), IW.phibar(3))) \
        == IW.phibar(3)


def test_lie10_examples():
    assert lie10_inv(IW.frame(1), IW.phi(3)) == IW.phi(2).scale(CRat(-1))
    assert not lie10_inv(IW.frame(1), IW.volume_form())
    for k in (1, 2, 3):
        assert not lie10_inv(IW.frame(k), IW.volume_form())


def test_integrate_conventions():
    for model in (T3, IW, NK, HM):
        assert integrate(model.volume_form()) == CRat(1)
        prod = None
        for k in range(1, model.dim + 1):
            f = wedge_inv(model.phi(k), model.phibar(k)).scale(I)
            prod = f if prod is None else wedge_inv(prod, f)
        assert integrate(prod) == CRat(1)
    with pytest.raises(ValueError):
        integrate(IW.phi(1))


def test_stokes_exact():
    rng = random.Random(1)
    for model in (IW, HM, NK):
        keys = model.basis_keys(3, 2) + model.basis_keys(2, 3)
        for _ in range(15):
            w = model.zero()
            for k in keys:
                if rng.random() < 0.5:
                    p, q = len(k[0]), len(k[1])
                    w = w + model.form_basis(p, q, k,
                                             CRat(rng.randint(-2, 2),
                                                  rng.randint(-2, 2)))
            assert integrate(model.ce_d(w)) == CRat(0)


def test_conjugation_and_reality():
    om = standard_metric_form(IW)
    assert om.is_real()
    assert om.conj() == om
    u = wedge_inv(IW.phi(1), IW.phibar(2))
    assert u.conj() == wedge_inv(IW.phi(2), IW.phibar(1)).scale(CRat(-1))


def test_conjugation_swaps_lie_types():
    rng = random.Random(2)
    for _ in range(20):
        model = rng.choice((IW, HM, NK))
        xi = InvVectorField(model, HOLO,
                            [CRat(rng.randint(-2, 2), rng.randint(-2, 2))
                             for _ in range(model.dim)])
        p, q = rng.randint(0, 2), rng.randint(0, 2)
        keys = model.basis_keys(p, q)
        u = model.form_basis(p, q, keys[rng.randrange(len(keys))],
                             CRat(rng.randint(-2, 2), 1))
        assert lie10_inv(xi, u).conj() == lie01_inv(xi.conj(), u.conj())


def test_mixed_bracket_tables():
    assert IW.bracket(IW.frame(1), IW.frame_bar(1)).is_zero()
    b = IW.bracket(IW.frame(1), IW.frame(2))
    assert b.holo is not None and list(b.holo.coeffs) == [CRat(0), CRat(0), ONE]
    bm = HM.bracket(HM.frame(1), HM.frame_bar(1))
    assert not bm.is_zero()
    assert bm.holo is not None and bm.anti is not None


def test_lie_standard_vs_typed_for_invariant_holomorphic():
    # on complex-parallelizable models all frame fields are holomorphic
    rng = random.Random(3)
    for model in (IW, NK):
        for _ in range(10):
            k = rng.randint(1, 3)
            p, q = rng.randint(0, 2), rng.randint(0, 2)
            keys = model.basis_keys(p, q)
            u = model.form_basis(p, q, keys[rng.randrange(len(keys))])
            assert lie_inv(model.frame(k), u) == lie10_inv(model.frame(k), u)


def test_flow_pullback_properties():
    # s = 0 is the identity; torus flows are trivial
    u = IW.phi(3)
    assert (flow_pullback(IW.frame(1), 0.0, u) - InvForm(
        IW, {k: complex(c) for k, c in u.coeffs.items()})).norm() < 1e-15
    ut = T3.phi(2)
    out = flow_pullback(T3.frame(1), 0.7, ut)
    assert (out - InvForm(T3, {k: complex(c) for k, c in ut.coeffs.items()})).norm() < 1e-14

    # first-order Taylor matches the Lie derivative
    s = 1e-6
    moved = flow_pullback(IW.frame(1), s, u)
    lin = lie10_inv(IW.frame(1), u)
    base = InvForm(IW, {k: complex(c) for k, c in u.coeffs.items()})
    diff = (moved - base).scale(1.0 / s) - InvForm(
        IW, {k: complex(c) for k, c in lin.coeffs.items()})
    assert diff.norm() < 1e-5

    # semigroup property to 1e-12
    a = flow_pullback(IW.frame(1), 0.3, flow_pullback(IW.frame(1), 0.4, u))
    b = flow_pullback(IW.frame(1), 0.7, u)
    assert (a - b).norm() < 1e-12

    # nakamura eigen-flow
    out = flow_pullback(NK.frame(1), 0.25, NK.phi(3))
    assert abs(out.coeffs[((3,), ())] - np.exp(0.25)) < 1e-13


def test_model_file_round_trip_bit_exact():
    for model in (IW, HM, NK, T3):
        text = format_model(model)
        again = parse_model(text)
        assert format_model(again) == text
        assert again.dim == model.dim and again.diff == model.diff


def test_model_parse_errors_are_located():
    with pytest.raises(ParseError) as e:
        parse_model("name x\ndim 2\ndiff 1 zz 1 0\n", "f.model")
    assert "f.model:3" in str(e.value)
    with pytest.raises(ParseError):
        parse_model("dim 2\n")


def test_custom_model_parse_and_validate():
    text = "name h\ndim 3\nvolume_scale 2\ndiff 3 12 -1 0\ndiff 3 1~1 1 0\n"
    m = parse_model(text)
    assert m.volume_scale == Fraction(2)
    assert integrate(m.volume_form()) == CRat(2)


def test_wedge_inv_graded_commutativity_and_associativity():
    rng = random.Random(9)
    for model in (IW, HM, NK):
        for _ in range(10):
            def rnd(p, q):
                keys = model.basis_keys(p, q)
                u = model.zero()
                for k in keys:
                    if rng.random() < 0.4:
                        u = u + model.form_basis(p, q, k,
                                                 CRat(rng.randint(-2, 2),
                                                      rng.randint(-2, 2)))
                return u
            p1, q1 = rng.randint(0, 2), rng.randint(0, 2)
            p2, q2 = rng.randint(0, 2), rng.randint(0, 2)
            u, v = rnd(p1, q1), rnd(p2, q2)
            sign = (-1) ** ((p1 + q1) * (p2 + q2))
            assert wedge_inv(u, v) == wedge_inv(v, u).scale(CRat(sign))
            w = rnd(1, 0)
            assert wedge_inv(wedge_inv(u, v), w) == wedge_inv(u, wedge_inv(v, w))


def test_contraction_antiderivation_invariant():
    rng = random.Random(10)
    for model in (IW, HM):
        for _ in range(12):
            kind = rng.choice((HOLO, ANTI))
            v = InvVectorField(model, kind,
                               [CRat(rng.randint(-2, 2), rng.randint(-2, 2))
                                for _ in range(model.dim)])
            def rnd(p, q):
                keys = model.basis_keys(p, q)
                k = keys[rng.randrange(len(keys))]
                return model.form_basis(p, q, k, CRat(rng.randint(-2, 2), 1))
            p1, q1 = rng.randint(0, 2), rng.randint(0, 2)
            u = rnd(p1, q1)
            w = rnd(rng.randint(0, 1), rng.randint(0, 1))
            lhs = contract_inv(v, wedge_inv(u, w))
            rhs = (wedge_inv(contract_inv(v, u), w)
                   + wedge_inv(u, contract_inv(v, w)).scale(CRat((-1) ** (p1 + q1))))
            assert lhs == rhs
