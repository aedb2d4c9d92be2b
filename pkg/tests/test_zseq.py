import json
import math
import random
from fractions import Fraction

import pytest

import flatcurve as fc
from flatcurve.zseq import compare_canonical

from conftest import zp


# ---------------------------------------------------------------------------
# canonical order


def test_canonical_order_norm_then_argument():
    # ties in norm break by upper-half-plane first, then by angle
    pts = [zp(0, 1), zp(1), zp(-1)]
    assert fc.canonical_order(pts, fc.EXACT) == [zp(1), zp(0, 1), zp(-1)]


def test_canonical_order_origin_first():
    assert fc.canonical_order([zp(0), zp(3), zp(-2)], fc.EXACT) == [
        zp(0), zp(-2), zp(3)]


def test_canonical_order_mixed_complex():
    assert fc.canonical_order([zp(1, 1), zp(2), zp(0, 1)], fc.EXACT) == [
        zp(0, 1), zp(1, 1), zp(2)]


def test_canonical_order_rejects_duplicates():
    with pytest.raises(fc.DuplicatePoint):
        fc.canonical_order([zp(1), zp(1)], fc.EXACT)


def test_compare_canonical_is_a_total_order():
    rng = random.Random(11)
    pts = [zp(Fraction(rng.randint(-9, 9), rng.randint(1, 5)),
              Fraction(rng.randint(-9, 9), rng.randint(1, 5)))
           for _ in range(60)]
    # antisymmetry + transitivity spot check through sorted consistency
    ordered = fc.canonical_order(list({(p.re, p.im): p for p in pts}.values()),
                                 fc.EXACT)
    for a, b in zip(ordered, ordered[1:]):
        assert compare_canonical(a, b) < 0
        assert compare_canonical(b, a) > 0


# ---------------------------------------------------------------------------
# generation


def test_positive_integers_window():
    w = fc.generate(fc.GeneratorSpec("positive-integers"), 4.5)
    assert [p for p in w.points] == [zp(0), zp(1), zp(2), zp(3)]
    assert w.translation == zp(-1)
    assert w.center == zp(-1)


def test_all_integers_window_keeps_origin_shift_free():
    w = fc.generate(fc.GeneratorSpec("all-integers"), 3)
    assert w.translation == zp(0)
    assert set(w.points) == {zp(k) for k in range(-3, 4)}


def test_gaussian_lattice_small():
    w = fc.generate(fc.GeneratorSpec("gaussian-lattice"), 1.5)
    assert len(w.points) == 9
    assert zp(1, 1) in w.index()
    assert zp(-1, -1) in w.index()


def test_odd_families():
    # positive variant starts at 5 (4n+1, 4n+3 with n >= 1)
    wp = fc.generate(fc.GeneratorSpec("odd4n13-positive"), 12)
    raw = sorted(int(p.re - p.im) for p in wp.raw_points())
    assert raw == [5, 7, 9, 11]
    # two-sided variant covers every odd integer
    wa = fc.generate(fc.GeneratorSpec("odd4n13-all"), 6)
    raw = sorted(int(p.re) for p in wa.raw_points())
    assert raw == [-5, -3, -1, 1, 3, 5]


def test_integers_plus_minus_i():
    w = fc.generate(fc.GeneratorSpec("integers-plus-minus-i"), 2.5)
    assert zp(0, -1) in w.index()
    assert len(w.points) == 6


def test_hard_radius_cutoff_is_exact():
    # norm exactly R stays, epsilon over goes
    w = fc.generate(fc.GeneratorSpec("positive-integers"), 3)
    assert len(w.raw_points()) == 3
    w = fc.generate(fc.GeneratorSpec("positive-integers"), Fraction(299, 100))
    assert len(w.raw_points()) == 2


def test_empty_window_raises():
    with pytest.raises(fc.EmptyWindow):
        fc.generate(fc.GeneratorSpec("positive-integers"), 0.5)


def test_explicit_spec():
    spec = fc.GeneratorSpec.explicit([zp(2), zp(-1, 1)])
    w = fc.generate(spec, 5)
    assert len(w.points) == 2
    assert w.points[0].is_zero()


def test_orbit_spec_small():
    # one rotation sweeping a seed point; orbit stays in the ball
    spec = fc.GeneratorSpec.orbit(
        k_points=[zp(1)],
        generators=[(Fraction(0), Fraction(-1), Fraction(1), Fraction(0))],
        max_word_length=6)
    w = fc.generate(spec, 2)
    raw = {(p.re, p.im) for p in w.raw_points()}
    assert {(Fraction(1), Fraction(0)), (Fraction(0), Fraction(1)),
            (Fraction(-1), Fraction(0)), (Fraction(0), Fraction(-1))} <= raw


def test_orbit_rejects_contracting_generator():
    spec = fc.GeneratorSpec.orbit(
        k_points=[zp(1)],
        generators=[(Fraction(1, 2), Fraction(0), Fraction(0), Fraction(1, 2))],
        max_word_length=3)
    with pytest.raises(fc.ContractingGenerator):
        fc.generate(spec, 2)


# ---------------------------------------------------------------------------
# window methods


def test_head_prefix(integers10):
    h = integers10.head(5)
    assert h.points == integers10.points[:5]
    assert h.radius == integers10.radius
    with pytest.raises(ValueError):
        integers10.head(0)


def test_translate_moves_points_and_region_together(integers10):
    rng = random.Random(5)
    for _ in range(20):
        b = zp(rng.randint(-4, 4), rng.randint(-4, 4))
        moved = integers10.translate(b)
        assert set(moved.points) == {p + b for p in integers10.points}
        assert moved.center == integers10.center + b
        assert fc.validate(moved).valid
        assert moved.canonicalize().points[0].is_zero()


def test_min_gap(lattice5):
    assert lattice5.min_gap() == pytest.approx(1.0)


def test_in_region_checks_against_center():
    w = fc.generate(fc.GeneratorSpec("positive-integers"), 4.5)
    # stored coords live in a ball around the recorded center
    assert w.in_region(zp(3))
    assert not w.in_region(zp(4))


# ---------------------------------------------------------------------------
# validation


def test_validate_clean_window(lattice5):
    rep = fc.validate(lattice5)
    assert rep.valid
    assert rep.to_dict()["violations"] == []


def test_validate_flags_out_of_order():
    w = fc.ZeroWindow([zp(2), zp(1)], 5, check=False)
    rep = fc.validate(w)
    assert any(code == "OrderingViolation" for code, _ in rep.violations)


def test_validate_flags_radius():
    w = fc.ZeroWindow([zp(1), zp(40)], 5, check=False)
    rep = fc.validate(w)
    assert any(code == "RadiusViolation" for code, _ in rep.violations)


def test_validate_flags_duplicates():
    w = fc.ZeroWindow([zp(1), zp(1)], 5, check=False)
    rep = fc.validate(w)
    assert any(code == "DuplicatePoint" for code, _ in rep.violations)


# ---------------------------------------------------------------------------
# point index


def test_point_index_exact(lattice5):
    idx = lattice5.index()
    assert idx.find(zp(1, 1)) is not None
    assert idx.find(zp(1, 2)) is not None
    assert idx.find(zp(Fraction(1, 2), 0)) is None


def test_point_index_float_probes_neighbor_cells():
    mode = fc.float_mode(1e-6)
    pts = [fc.ZPoint(0.0, 0.0), fc.ZPoint(1.0, 0.0)]
    idx = fc.PointIndex(pts, mode)
    # hit within eps across a grid-cell boundary
    assert fc.ZPoint(1.0 + 4e-7, -3e-7) in idx
    assert fc.ZPoint(1.0 + 5e-6, 0.0) not in idx


def test_sup_norm_exact_argmax():
    assert fc.sup_norm([zp(1), zp(-3), zp(2, 2)]) == pytest.approx(3.0)


# ---------------------------------------------------------------------------
# serialization


def test_json_round_trip(integers10):
    blob = json.dumps(fc.window_to_json(integers10))
    back = fc.window_from_json(json.loads(blob))
    assert back.points == integers10.points
    assert back.translation == integers10.translation
    assert back.radius == integers10.radius


def test_json_rationals_survive():
    w = fc.ZeroWindow.from_points([zp(0), zp(Fraction(1, 3), Fraction(-2, 7))], 2)
    data = fc.window_to_json(w)
    assert ["1/3", "-2/7"] in data["points"]
    back = fc.window_from_json(data)
    assert back.points[1] == zp(Fraction(1, 3), Fraction(-2, 7))


def test_json_raw_window_has_null_translation():
    w = fc.ZeroWindow.from_points([zp(1), zp(2)], 3)
    assert fc.window_to_json(w)["translation"] is None


def test_float_mode_ordering_respects_eps():
    mode = fc.float_mode(1e-6)
    pts = [fc.ZPoint(1.0, 0.0), fc.ZPoint(0.5, 0.5)]
    out = fc.canonical_order(pts, mode)
    assert math.hypot(out[0].re, out[0].im) <= math.hypot(out[1].re, out[1].im)
