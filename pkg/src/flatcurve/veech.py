"""Veech-group classification of a zero window.

Collinear windows fall in the uncountable branch: the group is the
upper-triangular family fixing the line direction, extended by the point
reflection exactly when the window is (window-consistently) symmetric about
some center on the line.  Non-collinear windows fall in the countable
branch, reported as a sandwich: candidate matrices that permute the window
points (lower bound) and candidates that permute the holonomy vectors
(upper bound).

Everything here is window-consistent by construction: a candidate is only
required to act correctly on the part of the data that stays inside the
sampled region, with an inner/outer two-radius scheme controlling boundary
effects.
"""

from __future__ import annotations

import math
from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction

from .errors import DegenerateWindow, SingularMatrix, TooFewPoints
from .flatgeom import HolonomySet, holonomy, vectors_parallel, window_collinear
from .zseq import (
    EXACT,
    Mode,
    ZPoint,
    ZeroWindow,
    as_scalar,
    cross,
    dot,
    scalar_repr,
)

# --------------------------------------------------------------------------
# 2x2 matrices


@dataclass(frozen=True)
class Mat2:
    """Row-major [[a, b], [c, d]] acting on the plane as column vectors."""

    a: object
    b: object
    c: object
    d: object

    @staticmethod
    def of(a, b, c, d, mode: Mode = EXACT) -> "Mat2":
        return Mat2(as_scalar(a, mode), as_scalar(b, mode),
                    as_scalar(c, mode), as_scalar(d, mode))

    @staticmethod
    def identity(mode: Mode = EXACT) -> "Mat2":
        return Mat2.of(1, 0, 0, 1, mode)

    def rows(self):
        return ((self.a, self.b), (self.c, self.d))

    def entries(self):
        return (self.a, self.b, self.c, self.d)

    @property
    def det(self):
        return self.a * self.d - self.b * self.c

    def mul(self, o: "Mat2") -> "Mat2":
        return Mat2(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )

    __matmul__ = mul

    def inverse(self) -> "Mat2":
        det = self.det
        if det == 0:
            raise SingularMatrix(f"matrix {self.rows()} is singular")
        return Mat2(self.d / det, -self.b / det, -self.c / det, self.a / det)

    def apply(self, p: ZPoint) -> ZPoint:
        return ZPoint(self.a * p.re + self.b * p.im,
                      self.c * p.re + self.d * p.im)

    def __neg__(self) -> "Mat2":
        return Mat2(-self.a, -self.b, -self.c, -self.d)

    def max_abs_entry(self):
        return max(abs(self.a), abs(self.b), abs(self.c), abs(self.d))

    def to_rows_repr(self) -> list:
        return [[scalar_repr(self.a), scalar_repr(self.b)],
                [scalar_repr(self.c), scalar_repr(self.d)]]


def is_contracting(m: Mat2) -> bool:
    """Largest singular value < 1, decided without square roots.

    With F = sum of squared entries and D = det: the squared singular values
    s1 >= s2 satisfy s1 + s2 = F, s1*s2 = D^2, so both sit below 1 exactly
    when F < 2 and F - 1 < D^2.  Stays exact on rational entries.
    """
    det = m.det
    if det == 0:
        raise SingularMatrix("contraction test needs an invertible matrix")
    f = m.a * m.a + m.b * m.b + m.c * m.c + m.d * m.d
    return f < 2 and f - 1 < det * det


def _matrix_key(m: Mat2, mode: Mode):
    if mode.is_exact:
        return m.entries()
    return tuple(round(float(v), 12) for v in m.entries())


def same_matrix(x: Mat2, y: Mat2, mode: Mode) -> bool:
    if mode.is_exact:
        return x.entries() == y.entries()
    return all(abs(float(a) - float(b)) <= mode.eps
               for a, b in zip(x.entries(), y.entries()))


# --------------------------------------------------------------------------
# search configuration


@dataclass(frozen=True)
class StabilizerSearchConfig:
    """Two-radius search parameters.

    ``inner_radius`` defaults to a third of the window radius and
    ``entry_bound`` to outer/inner: a candidate with a larger entry would
    move some inner point outside the sampled ball, so nothing is lost.
    """

    inner_radius: float | None = None
    entry_bound: float | None = None
    require_non_contracting: bool = True


def _resolve(cfg: StabilizerSearchConfig | None, outer_radius: float):
    if cfg is None:
        cfg = StabilizerSearchConfig()
    r = cfg.inner_radius if cfg.inner_radius is not None else outer_radius / 3
    if not 0 < r < outer_radius:
        raise ValueError(f"need 0 < inner radius < {outer_radius}, got {r}")
    e = cfg.entry_bound if cfg.entry_bound is not None else outer_radius / r
    if e <= 0:
        raise ValueError("entry bound must be positive")
    return float(r), float(e), cfg.require_non_contracting


# --------------------------------------------------------------------------
# pair-image stabilizer search


def _first_independent_pair(points):
    n = len(points)
    for i in range(n):
        p = points[i]
        if p.is_zero():
            continue
        for j in range(i + 1, n):
            if cross(p, points[j]) != 0:
                return p, points[j]
    return None


def _image_pool(pool, anchor: ZPoint, entry_bound: float) -> list:
    # |A| entrywise <= E forces |(A p)_x|, |(A p)_y| <= E(|px| + |py|)
    reach = entry_bound * (abs(float(anchor.re)) + abs(float(anchor.im)))
    lim2 = 2 * reach * reach * (1 + 1e-9)
    return [v for v in pool if float(v.norm2()) <= lim2]


def _action_ok(a: Mat2, a_inv: Mat2, probes, contains) -> bool:
    for p in probes:
        if not contains(a.apply(p)):
            return False
    for p in probes:
        if not contains(a_inv.apply(p)):
            return False
    return True


def _search(inner_pts, full_pts, contains, entry_bound, require_nc, mode: Mode) -> list:
    pair = _first_independent_pair(inner_pts)
    if pair is None:
        raise DegenerateWindow(
            "no two independent points inside the inner radius")
    p, q = pair
    base_inv = Mat2(p.re, q.re, p.im, q.im).inverse()  # columns p, q
    cand_p = _image_pool(full_pts, p, entry_bound)
    cand_q = _image_pool(full_pts, q, entry_bound)
    probes = sorted(inner_pts, key=lambda v: float(v.norm2()), reverse=True)
    found = {}
    for ip in cand_p:
        for iq in cand_q:
            a = Mat2(ip.re, iq.re, ip.im, iq.im).mul(base_inv)
            if a.det <= 0:
                continue
            if a.max_abs_entry() > entry_bound:
                continue
            if require_nc and is_contracting(a):
                continue
            key = _matrix_key(a, mode)
            if key in found:
                continue
            if _action_ok(a, a.inverse(), probes, contains):
                found[key] = a
    ident = Mat2.identity(mode)
    found.setdefault(_matrix_key(ident, mode), ident)
    return sorted(found.values(), key=lambda m: _matrix_key(m, mode))


def stabilizer_candidates(w: ZeroWindow, cfg: StabilizerSearchConfig | None = None) -> list:
    """Matrices that window-consistently permute the point set.

    Anchored at the first independent pair of inner points; each candidate
    and its inverse must map every inner point onto a window point.
    """
    r, e, req = _resolve(cfg, w.radius)
    inner = _inner_points(w.points, r, w.mode)
    idx = w.index()
    return _search(inner, list(w.points), lambda v: v in idx, e, req, w.mode)


def _inner_points(points, r: float, mode: Mode) -> list:
    if mode.is_exact:
        r2 = Fraction(r) ** 2
        return [p for p in points if p.norm2() <= r2]
    lim = r * r * (1 + 1e-12)
    return [p for p in points if float(p.norm2()) <= lim]


def hol_stabilizer(h: HolonomySet, cfg: StabilizerSearchConfig | None = None) -> list:
    """Matrices that window-consistently permute the holonomy vectors.

    The inner test set is the certified part of the enumeration; membership
    of images beyond it falls back to the on-demand witness oracle.  When
    the anchors can reach past a length-restricted enumeration, the image
    pool is re-enumerated out to that reach, so no candidate with admissible
    entries is missed merely because the pool stopped early.
    """
    r, e, req = _resolve(cfg, h.window_radius)
    vecs = list(h.vectors)
    if vectors_parallel(vecs, h.mode):
        raise DegenerateWindow(
            "all holonomy vectors are parallel; this is the uncountable branch")
    inner = _inner_points(vecs, r, h.mode)
    pair = _first_independent_pair(inner)
    pool = vecs
    if pair is not None and h.window is not None and h.restricted_to is not None:
        reach = e * math.sqrt(2) * max(p.norm() for p in pair) * (1 + 1e-9)
        if reach > h.restricted_to:
            pool = list(holonomy(h.window, max_length=reach).vectors)
    return _search(inner, pool, h.contains, e, req, h.mode)


# --------------------------------------------------------------------------
# collinear branch: point-symmetry search

_MARGIN_FACTOR = 1.5


def pprime_symmetry(w: ZeroWindow):
    """Center c with z -> 2c - z permuting the window, or None.

    Candidate centers are the points and all pair midpoints, tried nearest
    the sampled region's middle first.  Before any candidate is considered,
    the occupied extent must reach both ends of the region-line chord up to
    1.5x the largest internal gap: a divergent sequence symmetric about a
    center fills its line in both directions, so a skewed truncation (e.g. a
    half-line) is rejected outright.
    """
    pts = w.points
    if len(pts) < 2:
        return None
    if not window_collinear(w):
        raise ValueError("symmetry center search expects a collinear window")
    base = pts[0]
    u = None
    for p in pts[1:]:
        d = p - base
        if not d.is_zero():
            u = d
            break
    if u is None:
        return None
    u2 = dot(u, u)
    ulen = u.norm()
    svals = [dot(p - base, u) for p in pts]
    ell = sorted(float(s) / ulen for s in svals)
    gap = max(b - a for a, b in zip(ell, ell[1:])) if len(ell) > 1 else 0.0
    qv = base - w.center
    alpha = (float(qv.re) * float(u.re) + float(qv.im) * float(u.im)) / ulen
    perp2 = max(float(qv.norm2()) - alpha * alpha, 0.0)
    half = math.sqrt(max(w.radius * w.radius - perp2, 0.0))
    lo_chord, hi_chord = -alpha - half, -alpha + half
    slack = 1e-9 * (1 + w.radius)
    if ell[0] - lo_chord > _MARGIN_FACTOR * gap + slack:
        return None
    if hi_chord - ell[-1] > _MARGIN_FACTOR * gap + slack:
        return None
    if w.mode.is_exact:
        sset = set(svals)
        present = lambda s: s in sset
    else:
        ssorted = sorted(svals)
        tol = w.mode.eps * ulen

        def present(s):
            k = bisect_left(ssorted, s - tol)
            return k < len(ssorted) and ssorted[k] <= s + tol

    doubled = sorted({si + sj for i, si in enumerate(svals)
                      for sj in svals[i:]},
                     key=lambda c2: (abs(float(c2) / (2 * ulen) + alpha), float(c2)))
    band = slack
    for c2 in doubled:
        c_ell = float(c2) / (2 * ulen)
        lo = max(lo_chord, 2 * c_ell - hi_chord)
        hi = min(hi_chord, 2 * c_ell - lo_chord)
        if hi - lo <= 0:
            continue
        matched = 0
        ok = True
        for s in svals:
            l = float(s) / ulen
            if l < lo + band or l > hi - band:
                continue
            if not present(c2 - s):
                ok = False
                break
            matched += 1
        if ok and matched >= 1:
            t = c2 / (2 * u2)
            return ZPoint(base.re + u.re * t, base.im + u.im * t)
    return None


# --------------------------------------------------------------------------
# sandwich and closure reports


def sandwich_report(w: ZeroWindow, cfg: StabilizerSearchConfig | None = None):
    """(lower, upper, containment_ok) stabilizer bounds for the countable branch."""
    r, e, req = _resolve(cfg, w.radius)
    resolved = StabilizerSearchConfig(r, e, req)
    lower = stabilizer_candidates(w, resolved)
    h = holonomy(w, max_length=r)
    upper = hol_stabilizer(h, resolved)
    upper_keys = {_matrix_key(m, w.mode) for m in upper}
    ok = all(_matrix_key(m, w.mode) in upper_keys for m in lower)
    return lower, upper, ok


@dataclass
class ClosureReport:
    checked: int = 0
    skipped: int = 0
    violations: list = None

    def __post_init__(self):
        if self.violations is None:
            self.violations = []

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            "checked": self.checked,
            "skipped": self.skipped,
            "ok": self.ok,
            "violations": [
                [a.to_rows_repr(), b.to_rows_repr(), c.to_rows_repr()]
                for a, b, c in self.violations
            ],
        }


def group_closure_check(cands: list, w: ZeroWindow,
                        cfg: StabilizerSearchConfig | None = None) -> ClosureReport:
    """Do pairwise products of candidates stay candidates?

    Products whose entries leave the certified bound, or whose action walks
    inner points out of the window, are boundary effects and only counted as
    skipped.  A product that passes the full action test yet is missing from
    the candidate list is a genuine violation.
    """
    if not cands:
        raise ValueError("closure check needs at least one candidate")
    r, e, req = _resolve(cfg, w.radius)
    inner = _inner_points(w.points, r, w.mode)
    probes = sorted(inner, key=lambda v: float(v.norm2()), reverse=True)
    idx = w.index()
    contains = lambda v: v in idx
    keys = {_matrix_key(m, w.mode) for m in cands}
    rep = ClosureReport()
    for a in cands:
        for b in cands:
            c = a.mul(b)
            if _matrix_key(c, w.mode) in keys:
                rep.checked += 1
                continue
            if c.max_abs_entry() > e:
                rep.skipped += 1
                continue
            if req and is_contracting(c):
                rep.skipped += 1
                continue
            if _action_ok(c, c.inverse(), probes, contains):
                rep.violations.append((a, b, c))
            else:
                rep.skipped += 1
    return rep


# --------------------------------------------------------------------------
# classification


@dataclass(frozen=True)
class VeechClass:
    """Classification outcome, always window-consistent.

    kind "P": collinear without a point symmetry; "Pprime": collinear with
    one (center recorded); "Countable": independent directions present, with
    lower/upper stabilizer bounds.
    """

    kind: str
    theta: float | None = None
    lower: tuple = ()
    upper: tuple = ()
    containment_ok: bool | None = None
    symmetry_center: ZPoint | None = None
    window_consistent: bool = True

    def to_dict(self) -> dict:
        center = None
        if self.symmetry_center is not None:
            center = [scalar_repr(self.symmetry_center.re),
                      scalar_repr(self.symmetry_center.im)]
        return {
            "kind": self.kind,
            "theta": self.theta,
            "lower": [m.to_rows_repr() for m in self.lower],
            "upper": [m.to_rows_repr() for m in self.upper],
            "containment_ok": self.containment_ok,
            "symmetry_center": center,
            "window_consistent": self.window_consistent,
        }


def classify(w: ZeroWindow, cfg: StabilizerSearchConfig | None = None) -> VeechClass:
    """Trichotomy of the window's symmetry group.

    Collinear windows report the line angle theta in [0, pi); the countable
    branch carries the sandwich bounds instead.
    """
    if len(w.points) < 2:
        raise TooFewPoints("classification needs at least two points")
    wc = w if w.is_canonical else w.canonicalize()
    if window_collinear(wc):
        u = None
        for p in wc.points[1:]:
            if not p.is_zero():
                u = p
                break
        theta = math.atan2(float(u.im), float(u.re)) % math.pi
        center = pprime_symmetry(wc)
        if center is not None:
            return VeechClass("Pprime", theta=theta, symmetry_center=center)
        return VeechClass("P", theta=theta)
    lower, upper, ok = sandwich_report(wc, cfg)
    return VeechClass("Countable", lower=tuple(lower), upper=tuple(upper),
                      containment_ok=ok)
