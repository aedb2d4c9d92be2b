import math
import random
from fractions import Fraction

import pytest

import flatcurve as fc
from flatcurve.veech import Mat2, StabilizerSearchConfig

from conftest import zp


# ---------------------------------------------------------------------------
# matrices


def test_mat2_algebra():
    a = Mat2.of(1, 1, 0, 1)
    b = Mat2.of(0, -1, 1, 0)
    assert (a @ b).entries() == (1, -1, 1, 0)
    assert a.det == 1
    assert a.inverse().entries() == (1, -1, 0, 1)
    assert (a @ a.inverse()).entries() == Mat2.identity().entries()
    assert a.apply(zp(2, 3)) == zp(5, 3)
    assert (-a).entries() == (-1, -1, 0, -1)


def test_mat2_singular_inverse():
    with pytest.raises(fc.SingularMatrix):
        Mat2.of(1, 2, 2, 4).inverse()


def test_is_contracting_basic():
    assert fc.is_contracting(Mat2.of(Fraction(1, 2), 0, 0, Fraction(1, 2)))
    assert not fc.is_contracting(Mat2.identity())
    assert not fc.is_contracting(Mat2.of(1, 1, 0, 1))  # shear preserves norm 1
    assert not fc.is_contracting(Mat2.of(0, -1, 1, 0))  # rotation
    assert not fc.is_contracting(Mat2.of(2, 0, 0, Fraction(1, 3)))
    with pytest.raises(fc.SingularMatrix):
        fc.is_contracting(Mat2.of(0, 0, 0, 0))


def test_is_contracting_matches_direction_sweep():
    # oracle: max |Mv| over many unit directions, for matrices whose
    # singular values sit safely away from 1
    rng = random.Random(97)
    checked = 0
    while checked < 1000:
        m = Mat2.of(*(Fraction(rng.randint(-20, 20), 8) for _ in range(4)))
        try:
            got = fc.is_contracting(m)
        except fc.SingularMatrix:
            continue
        worst = 0.0
        for k in range(720):
            t = math.pi * k / 720
            v = fc.ZPoint(math.cos(t), math.sin(t))
            img = Mat2.of(*(float(e) for e in m.entries()),
                          mode=fc.float_mode(1e-9)).apply(v)
            worst = max(worst, math.hypot(float(img.re), float(img.im)))
        if abs(worst - 1) < 1e-3:
            continue  # too close to the boundary for the sampled oracle
        assert got == (worst < 1)
        checked += 1


# ---------------------------------------------------------------------------
# stabilizer search


def _toy_hol():
    # holonomy set {+-1, +-i} with no window behind it
    vecs = [zp(1), zp(-1), zp(0, 1), zp(0, -1)]
    return fc.HolonomySet(vecs, window_radius=1.5, mode=fc.EXACT)


def test_hol_stabilizer_toy_square():
    cands = fc.hol_stabilizer(_toy_hol(), StabilizerSearchConfig(
        inner_radius=1.2, entry_bound=2))
    ints = {tuple(int(e) for e in m.entries()) for m in cands}
    assert ints == {(1, 0, 0, 1), (0, -1, 1, 0), (-1, 0, 0, -1), (0, 1, -1, 0)}


def test_stabilizer_candidates_lattice_shears(lattice5):
    cands = fc.stabilizer_candidates(lattice5, StabilizerSearchConfig(
        inner_radius=2, entry_bound=2))
    ints = {tuple(int(e) for e in m.entries()) for m in cands}
    assert (1, 1, 0, 1) in ints
    assert (1, 0, 1, 1) in ints
    assert (0, -1, 1, 0) in ints
    for m in cands:
        assert m.det > 0
        assert not fc.is_contracting(m)


def test_stabilizer_candidates_identity_always_present(integers10, lattice5):
    cands = fc.stabilizer_candidates(lattice5, StabilizerSearchConfig(
        inner_radius=2, entry_bound=1))
    assert any(m.entries() == (1, 0, 0, 1) for m in cands)


def test_hol_stabilizer_rejects_parallel_vectors():
    h = fc.HolonomySet([zp(1), zp(-1), zp(2), zp(-2)],
                       window_radius=3, mode=fc.EXACT)
    with pytest.raises(fc.DegenerateWindow):
        fc.hol_stabilizer(h, StabilizerSearchConfig(inner_radius=1.5))


def test_search_config_validation(lattice5):
    with pytest.raises(ValueError):
        fc.stabilizer_candidates(lattice5, StabilizerSearchConfig(inner_radius=9))


# ---------------------------------------------------------------------------
# classification


def test_classify_positive_integers_P():
    vc = fc.classify(fc.generate(fc.GeneratorSpec("positive-integers"), 12))
    assert vc.kind == "P"
    assert vc.theta == pytest.approx(0.0)
    assert vc.symmetry_center is None
    assert vc.window_consistent


def test_classify_all_integers_Pprime():
    vc = fc.classify(fc.generate(fc.GeneratorSpec("all-integers"), 12))
    assert vc.kind == "Pprime"
    assert vc.symmetry_center == zp(0)


def test_classify_odd_families():
    assert fc.classify(fc.generate(
        fc.GeneratorSpec("odd4n13-positive"), 14)).kind == "P"
    vc = fc.classify(fc.generate(fc.GeneratorSpec("odd4n13-all"), 14))
    assert vc.kind == "Pprime"
    # stored coordinates put the symmetry center one step left of 0
    assert vc.symmetry_center == zp(-1)


def test_classify_vertical_line_theta():
    pts = [zp(0, k) for k in range(-4, 5)]
    vc = fc.classify(fc.ZeroWindow.from_points(pts, 5))
    assert vc.kind == "Pprime"
    assert vc.theta == pytest.approx(math.pi / 2)


def test_classify_lattice_sandwich(lattice5):
    vc = fc.classify(lattice5, StabilizerSearchConfig(inner_radius=2))
    assert vc.kind == "Countable"
    assert vc.containment_ok
    assert len(vc.lower) >= 4
    lower = {tuple(int(e) for e in m.entries()) for m in vc.lower}
    upper = {tuple(int(e) for e in m.entries()) for m in vc.upper}
    assert lower <= upper


def test_classify_needs_two_points():
    with pytest.raises(fc.TooFewPoints):
        fc.classify(fc.ZeroWindow.from_points([zp(1)], 2))


def test_classify_translation_invariant_kind():
    rng = random.Random(41)
    w = fc.generate(fc.GeneratorSpec("all-integers"), 9)
    base = fc.classify(w).kind
    for _ in range(10):
        b = zp(rng.randint(-3, 3))
        moved = w.translate(b)  # still collinear, same family
        assert fc.classify(moved).kind == base


def test_half_line_never_reports_symmetry():
    # a one-sided window always carries a huge margin on the empty side
    for r in (6, 9, 13.5):
        w = fc.generate(fc.GeneratorSpec("positive-integers"), r)
        assert fc.pprime_symmetry(w) is None


def test_pprime_symmetry_requires_collinear(lattice5):
    with pytest.raises(ValueError):
        fc.pprime_symmetry(lattice5)


def test_pprime_symmetry_half_gap_center():
    # {-2,-1,0,1,2,3} sampled off-center: symmetric about 1/2
    pts = [zp(k) for k in range(-2, 4)]
    w = fc.ZeroWindow.from_points(pts, Fraction(7, 2))
    c = fc.pprime_symmetry(w)
    assert c == zp(Fraction(1, 2))


# ---------------------------------------------------------------------------
# sandwich and closure


def test_sandwich_report_containment(lattice5):
    lower, upper, ok = fc.sandwich_report(lattice5, StabilizerSearchConfig(
        inner_radius=2))
    assert ok
    assert len(lower) <= len(upper)


def test_group_closure_no_violations(lattice5):
    cands = fc.stabilizer_candidates(lattice5, StabilizerSearchConfig(
        inner_radius=2, entry_bound=2))
    rep = fc.group_closure_check(cands, lattice5, StabilizerSearchConfig(
        inner_radius=2, entry_bound=2))
    assert rep.ok
    assert rep.checked > 0
    assert rep.violations == []


def test_closure_report_serializable(lattice5):
    cands = fc.stabilizer_candidates(lattice5, StabilizerSearchConfig(
        inner_radius=2, entry_bound=2))
    rep = fc.group_closure_check(cands, lattice5, StabilizerSearchConfig(
        inner_radius=2, entry_bound=2))
    d = rep.to_dict()
    assert d["ok"] is True
    assert d["checked"] + d["skipped"] == len(cands) ** 2
