import random
from fractions import Fraction

import pytest

import flatcurve as fc
from flatcurve.veech import Mat2, StabilizerSearchConfig
from flatcurve.zseq import zreciprocal

from conftest import zp


# ---------------------------------------------------------------------------
# translation equivalence


def test_shifted_integer_runs_match():
    w1 = fc.ZeroWindow.from_points([zp(k) for k in range(1, 11)], radius=11)
    w2 = fc.ZeroWindow.from_points([zp(k) for k in range(0, 10)], radius=11)
    res = fc.translation_equiv(w1, w2)
    assert res.equivalent
    assert res.translation == zp(-1)
    assert res.matched_fraction == 1.0
    assert res.overlap_radius == pytest.approx(10.0)


def test_planted_translation_recovered_on_aperiodic_cloud():
    rng = random.Random(202)
    for _ in range(50):
        pts = {zp(0)}
        while len(pts) < 40:
            p = zp(Fraction(rng.randint(-80, 80), 11),
                   Fraction(rng.randint(-80, 80), 13))
            if float(p.norm2()) <= 49:
                pts.add(p)
        w = fc.ZeroWindow.from_points(
            sorted(pts, key=lambda p: (float(p.re), float(p.im))), radius=7)
        b = zp(Fraction(rng.randint(-12, 12), 5), Fraction(rng.randint(-12, 12), 7))
        res = fc.translation_equiv(w, w.translate(b))
        assert res.equivalent
        assert res.translation == b
        assert res.matched_fraction == 1.0


def test_planted_translation_on_self_similar_trace():
    # the integer trace is invariant under integer shifts, so the offset is
    # only determined up to one; the imaginary part has no such freedom
    rng = random.Random(31)
    for _ in range(40):
        w = fc.generate(fc.GeneratorSpec("all-integers"), 12)
        b = zp(Fraction(rng.randint(-40, 40), rng.randint(1, 9)),
               Fraction(rng.randint(-40, 40), rng.randint(1, 9)))
        res = fc.translation_equiv(w, w.translate(b))
        assert res.equivalent and res.matched_fraction == 1.0
        d = res.translation - b
        assert d.im == 0 and Fraction(d.re).denominator == 1


def test_inequivalent_windows_report_partial_match():
    evens = fc.ZeroWindow.from_points([zp(2 * k) for k in range(-5, 6)], radius=10.5)
    ints = fc.ZeroWindow.from_points([zp(k) for k in range(-10, 11)], radius=10.5)
    res = fc.translation_equiv(ints, evens)
    assert not res.equivalent
    assert 0.0 < res.matched_fraction < 1.0
    assert res.translation is not None  # best diagnostic offset is reported


def test_mode_mismatch_rejected():
    w1 = fc.generate(fc.GeneratorSpec("all-integers"), 5)
    w2 = fc.generate(fc.GeneratorSpec("all-integers"), 5, mode=fc.float_mode(1e-9))
    with pytest.raises(fc.ModeMismatch):
        fc.translation_equiv(w1, w2)


# ---------------------------------------------------------------------------
# affine automorphisms


def test_integer_window_automorphisms():
    w = fc.generate(fc.GeneratorSpec("all-integers"), 6)
    autos = fc.affine_automorphisms(w)
    # {id, -id} x horizontal shifts that keep the probe ball inside
    assert len(autos) == 18
    keys = {(a.entries(), (t.re, t.im)) for a, t in autos}
    ident = Mat2.identity().entries()
    assert (ident, (Fraction(0), Fraction(0))) in keys
    assert ((-Mat2.identity()).entries(), (Fraction(0), Fraction(0))) in keys
    for a, t in autos:
        assert t.im == 0
        assert a.entries() in (ident, (-Mat2.identity()).entries())


def test_lattice_window_automorphisms_include_quarter_turn():
    w = fc.generate(fc.GeneratorSpec("gaussian-lattice"), 6)
    autos = fc.affine_automorphisms(w, StabilizerSearchConfig(inner_radius=2.5))
    assert len(autos) == 452
    rot = Mat2.of(0, -1, 1, 0).entries()
    assert any(a.entries() == rot and t.is_zero() for a, t in autos)
    assert any(a.entries() == Mat2.identity().entries() and t.is_zero()
               for a, t in autos)


def test_perturbed_lattice_is_rigid():
    pts = [zp(a, b) for a in range(-6, 7) for b in range(-6, 7)
           if a * a + b * b <= Fraction(31, 5) ** 2]
    pts[pts.index(zp(1, 0))] = zp(Fraction(8, 7), Fraction(1, 11))
    w = fc.ZeroWindow.from_points(pts, radius=Fraction(31, 5))
    autos = fc.affine_automorphisms(w, StabilizerSearchConfig(inner_radius=2.5))
    assert len(autos) == 1
    a, t = autos[0]
    assert a.entries() == Mat2.identity().entries()
    assert t.is_zero()


def test_automorphisms_need_three_points():
    w = fc.ZeroWindow.from_points([zp(0), zp(1)], radius=2)
    with pytest.raises(fc.TooFewPoints):
        fc.affine_automorphisms(w)


# ---------------------------------------------------------------------------
# moduli coordinates


def test_moduli_canonical_integer_run():
    w = fc.ZeroWindow.from_points([zp(k) for k in (1, 2, 3, 4)], radius=5)
    m = fc.moduli_canonical(w)
    assert m.canonical_points[0].is_zero()
    assert m.c0_coords == (zp(1), zp(Fraction(1, 2)), zp(Fraction(1, 3)))
    assert m.sup_norm == 1.0
    assert m.origin_excluded
    assert not m.c0_empty


def test_moduli_canonical_vertical_run():
    w = fc.ZeroWindow.from_points([zp(0), zp(0, 1), zp(0, 2)], radius=3)
    m = fc.moduli_canonical(w)
    assert m.c0_coords == (zp(0, -1), zp(0, Fraction(-1, 2)))


def test_moduli_singleton_is_empty():
    m = fc.moduli_canonical(fc.ZeroWindow.from_points([zp(7)], radius=8))
    assert m.c0_empty
    assert m.sup_norm == 0.0
    assert m.canonical_points == (zp(0),)


def test_moduli_to_dict_round_trips_strings():
    w = fc.ZeroWindow.from_points([zp(k) for k in (1, 2, 3)], radius=4)
    d = fc.moduli_canonical(w).to_dict()
    assert d["c0_coords"] == [["1", "0"], ["1/2", "0"]]
    assert d["origin_excluded"] is True


def test_moduli_action_matches_reciprocal_of_shift():
    rng = random.Random(5)
    checked = 0
    while checked < 200:
        zs = [zp(Fraction(rng.randint(-30, 30), rng.randint(1, 7)),
                 Fraction(rng.randint(-30, 30), rng.randint(1, 7)))
              for _ in range(6)]
        zs = [z for z in zs if not z.is_zero()]
        b = zp(Fraction(rng.randint(-9, 9), rng.randint(1, 5)),
               Fraction(rng.randint(-9, 9), rng.randint(1, 5)))
        if any((z + b).is_zero() for z in zs):
            continue
        got = fc.moduli_action([zreciprocal(z) for z in zs], b)
        assert got == [zreciprocal(z + b) for z in zs]
        checked += 1


def test_moduli_action_composes():
    rng = random.Random(77)
    checked = 0
    while checked < 200:
        us = [zp(Fraction(rng.randint(-20, 20), rng.randint(1, 6)),
                 Fraction(rng.randint(-20, 20), rng.randint(1, 6)))
              for _ in range(5)]
        b1 = zp(Fraction(rng.randint(-6, 6), rng.randint(1, 4)),
                Fraction(rng.randint(-6, 6), rng.randint(1, 4)))
        b2 = zp(Fraction(rng.randint(-6, 6), rng.randint(1, 4)),
                Fraction(rng.randint(-6, 6), rng.randint(1, 4)))
        try:
            two_steps = fc.moduli_action(fc.moduli_action(us, b1), b2)
            one_step = fc.moduli_action(us, b1 + b2)
        except fc.PoleInAction:
            continue
        assert two_steps == one_step
        checked += 1


def test_moduli_action_pole_reports_index():
    with pytest.raises(fc.PoleInAction) as exc:
        fc.moduli_action([zp(Fraction(1, 2)), zp(1)], zp(-1))
    assert exc.value.index == 1
    assert exc.value.code == "PoleInAction"
