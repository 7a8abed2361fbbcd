import pytest

from hallforge.backend import QuiverBackend
from hallforge.morphisms import (GenMap, SOURCE_RELATIONS, apply_hom,
                                 build_hom, check_relation, double_monomials,
                                 rank_independence, tensor_apply)
from hallforge.presented import (E, FreeElt, Kc, KPlus, KdMinus, KdPlus, Kz,
                                 MuPlus, NuPlus, OmMinus, OmPlus, Zg, algebra,
                                 normal_form, tensor_word)
from hallforge.quiver import preset
from hallforge.scalars import vpow

BE = QuiverBackend(preset("a2"), 2)
S1 = BE.class_by_name("S1")
S2 = BE.class_by_name("S2")
SPLIT = BE.class_by_name("X{1,1}#0")
P = BE.class_by_name("X{1,1}#1")
WINDOW = [c for c in BE.classes_within((2, 2))
          if sum(BE.class_dim(c)) <= 2]
ALPHAS = [(0, 0), (1, 0), (-1, 0), (0, 1), (0, -1)]


def w(*letters):
    return FreeElt.word(2, letters)


def test_build_hom_validation():
    with pytest.raises(ValueError):
        build_hom(BE, "kappa", m=2, i=0)
    with pytest.raises(ValueError):
        build_hom(BE, "kappa")  # missing i
    with pytest.raises(ValueError):
        build_hom(BE, "varphi")
    with pytest.raises(ValueError):
        build_hom(BE, "frobenius")


def test_I_frozen_image():
    I = build_hom(BE, "I")
    img = I.image(OmPlus(S1))
    expected = tensor_word(I.target, (MuPlus(S1),), ()) + \
        tensor_word(I.target, (KPlus((1, 0)),), (NuPlus(S1),))
    assert img == expected
    # unit goes to unit
    assert apply_hom(I, w()) == I.target_unit()


def test_apply_hom_rejects_foreign_symbols():
    I = build_hom(BE, "I")
    with pytest.raises(ValueError):
        apply_hom(I, w(MuPlus(S1)))


def test_psi_frozen_image():
    psi = build_hom(BE, "psi", m=0, i=0)
    assert psi.image(KdPlus((1, 0))) == \
        tensor_word(psi.target, (Kc((1, 0), 1),), (Kc((1, 0), 0),))


def test_phi_frozen_images():
    phi = build_hom(BE, "phi")
    tgt = phi.target
    assert phi.image(Zg(S1, 0)) == normal_form(tgt, w(E(S1, 0)))
    assert phi.image(Kz((1, 0), -2)) == normal_form(tgt, w(Kc((1, 0), -2)))
    mm = BE.euler_form((1, 0), (1, 0))
    assert phi.image(Zg(S1, 1)) == normal_form(
        tgt, FreeElt.word(2, (E(S1, 1), Kc((-1, 0), 0)), vpow(mm, 2)))
    assert phi.image(Zg(S1, -2)) == normal_form(
        tgt, FreeElt.word(2, (E(S1, -2), Kc((-1, 0), -2), Kc((1, 0), -1)),
                          vpow(-2 * mm, 2)))


def test_phi_round_trip_window():
    phi = build_hom(BE, "phi")
    phi_inv = build_hom(BE, "phiInv")
    dh0 = algebra("dhm:0", BE)
    ce = algebra("dhce", BE)
    for n in range(-3, 4):
        for M in (S1, S2, P):
            x = w(E(M, n))
            assert apply_hom(phi, apply_hom(phi_inv, x)) == \
                normal_form(dh0, x)
            y = w(Zg(M, n))
            assert apply_hom(phi_inv, apply_hom(phi, y)) == \
                normal_form(ce, y)
        z = w(Kz((1, -1), n))
        assert apply_hom(phi_inv, apply_hom(phi, z)) == normal_form(ce, z)


def test_phi_preserves_sample_relations():
    phi = build_hom(BE, "phi")
    cases = [
        ("4.10", {"alpha": (1, 0), "M": S2, "i": 0, "j": 0}),
        ("4.11", {"alpha": (1, 0), "beta": (0, 1), "i": 1, "j": 0}),
        ("4.12", {"alpha": (0, 1), "M": S1, "i": -1}),
        ("4.14", {"alpha": (1, 0), "M": P, "i": 0, "j": 2}),
        ("4.15", {"M": S1, "N": S2, "i": 1}),
        ("4.16", {"M": P, "N": S1, "i": -2}),
        ("4.17", {"M": S1, "N": P, "i": 2, "j": 0}),
    ]
    for rel, params in cases:
        rep = check_relation(phi, rel, params)
        assert rep.passed, (rel, params, rep.lhs, rep.rhs)


def test_kappa_preserves_relations_spot():
    for m, i in ((0, 0), (0, -1), (4, 3)):
        kap = build_hom(BE, "kappa", m=m, i=i)
        chk = build_hom(BE, "kappaCheck", m=m, i=i)
        for rel in SOURCE_RELATIONS["hd"]:
            rep = check_relation(kap, rel, {
                "M": S1, "N": P, "alpha": (1, 0), "beta": (0, 1), "sign": 1})
            assert rep.passed, (m, i, rel, rep.lhs, rep.rhs)
        for rel in SOURCE_RELATIONS["hhd"]:
            rep = check_relation(chk, rel, {
                "M": P, "N": S2, "alpha": (0, 1), "beta": (1, 0), "sign": -1})
            assert rep.passed, (m, i, rel, rep.lhs, rep.rhs)


def test_I_preserves_double_relations_spot():
    I = build_hom(BE, "I")
    for rel in SOURCE_RELATIONS["d"]:
        rep = check_relation(I, rel, {
            "M": S1, "N": S2, "alpha": (1, 0), "beta": (0, -1), "sign": 1})
        assert rep.passed, (rel, rep.lhs, rep.rhs)
    rep = check_relation(I, "2.18", {"M": P, "N": P})
    assert rep.passed


def test_varphi_triangle():
    phi_inv = build_hom(BE, "phiInv")
    letters = (OmPlus(S1), OmPlus(P), OmMinus(S2), OmMinus(P),
               KdPlus((1, 0)), KdMinus((0, 1)))
    for i in (-2, -1, 0, 1):
        vp = build_hom(BE, "varphi", i=i)
        psi = build_hom(BE, "psi", m=0, i=i)
        for letter in letters:
            direct = apply_hom(vp, w(letter))
            via = tensor_apply(phi_inv, phi_inv, apply_hom(psi, w(letter)))
            assert direct == via, (i, letter)


def test_varphi_preserves_relations_spot():
    for i in (-2, -1, 0, 1):
        vp = build_hom(BE, "varphi", i=i)
        rep = check_relation(vp, "2.18", {"M": S1, "N": S1})
        assert rep.passed, (i, rep.lhs, rep.rhs)
        rep = check_relation(vp, "2.15", {"alpha": (0, 1), "M": P, "sign": -1})
        assert rep.passed, i


def test_check_relation_reports_failure():
    # a deliberately wrong map: kappa with mismatched indices on the K side
    kap = build_hom(BE, "kappa", m=0, i=0)
    broken = build_hom(BE, "kappa", m=0, i=1)
    bad = GenMap("bad", kap.source, kap.target,
                 lambda letter: (kap.image(letter)
                                 if letter[0] == "mu"
                                 else broken.image(letter)))
    rep = check_relation(bad, "2.4", {"alpha": (1, 0), "M": S1, "sign": 1})
    assert not rep.passed
    assert rep.lhs and rep.rhs and rep.lhs != rep.rhs


def test_rank_independence():
    I = build_hom(BE, "I")
    a = I.image(OmPlus(S1))
    b = I.image(OmPlus(S2))
    assert rank_independence([a, b]) == 2
    assert rank_independence([a, a]) == 1
    assert rank_independence([]) == 0
    assert rank_independence([a, b, a + b]) == 2
    # scalar multiples are dependent over the field (not just over Q)
    assert rank_independence([a, a.scale(vpow(1, 2))]) == 1


def test_double_monomials_rank():
    I = build_hom(BE, "I")
    monos = double_monomials(BE, ALPHAS, WINDOW, 8)
    assert len(monos) == 8
    assert len({tuple(m.terms) for m in monos}) == 8
    images = [apply_hom(I, m) for m in monos]
    assert rank_independence(images) == 8
