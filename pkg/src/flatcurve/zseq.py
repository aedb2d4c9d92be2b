"""Finite windows of infinite zero sequences.

The objects under study are infinite sets of distinct complex numbers whose
norms diverge.  All computations operate on *windows*: the finite trace of
such a set inside a closed sampling ball.  A window records its sampling
radius, an arithmetic mode (exact rationals, or floats with a tolerance),
the generator it came from, and the canonicalizing translation that moved
the norm-smallest term to the origin.

Ordering convention: points are sorted by norm, ties broken by argument in
``[0, 2*pi)``.  In exact mode the tie-break is decided with integer cross
products, never with floating point.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (
    ContractingGenerator,
    DuplicatePoint,
    EmptyWindow,
    ModeMismatch,
)

# --------------------------------------------------------------------------
# arithmetic modes


@dataclass(frozen=True)
class Mode:
    """Arithmetic mode: ``exact`` (rational) or ``float`` (with tolerance)."""

    kind: str = "exact"
    eps: float = 1e-9

    @property
    def is_exact(self) -> bool:
        return self.kind == "exact"


EXACT = Mode("exact")


def float_mode(eps: float = 1e-9) -> Mode:
    return Mode("float", eps)


def as_scalar(value, mode: Mode):
    """Coerce a number or ``p/q`` string to the mode's scalar type."""
    if mode.is_exact:
        if isinstance(value, Fraction):
            return value
        if isinstance(value, str):
            return Fraction(value)
        return Fraction(value)
    return float(Fraction(value)) if isinstance(value, str) else float(value)


def scalar_repr(value):
    """Serialize a coordinate: rationals as ``p/q`` strings, floats as-is."""
    if isinstance(value, Fraction):
        return str(value)
    return value


# --------------------------------------------------------------------------
# points


@dataclass(frozen=True, slots=True)
class ZPoint:
    """A complex number with mode-typed coordinates (Fraction or float)."""

    re: object
    im: object

    def __add__(self, other: "ZPoint") -> "ZPoint":
        return ZPoint(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "ZPoint") -> "ZPoint":
        return ZPoint(self.re - other.re, self.im - other.im)

    def __neg__(self) -> "ZPoint":
        return ZPoint(-self.re, -self.im)

    def scale(self, c) -> "ZPoint":
        return ZPoint(self.re * c, self.im * c)

    def norm2(self):
        return self.re * self.re + self.im * self.im

    def norm(self) -> float:
        return math.sqrt(float(self.norm2()))

    def to_complex(self) -> complex:
        return complex(float(self.re), float(self.im))

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    @staticmethod
    def of(re, im, mode: Mode = EXACT) -> "ZPoint":
        return ZPoint(as_scalar(re, mode), as_scalar(im, mode))

    @staticmethod
    def zero(mode: Mode = EXACT) -> "ZPoint":
        return ZPoint.of(0, 0, mode)


def cross(p: ZPoint, q: ZPoint):
    return p.re * q.im - p.im * q.re


def dot(p: ZPoint, q: ZPoint):
    return p.re * q.re + p.im * q.im


def zmul(p: ZPoint, q: ZPoint) -> ZPoint:
    return ZPoint(p.re * q.re - p.im * q.im, p.re * q.im + p.im * q.re)


def zreciprocal(p: ZPoint) -> ZPoint:
    n2 = p.norm2()
    if n2 == 0:
        raise ZeroDivisionError("reciprocal of zero")
    return ZPoint(p.re / n2, -p.im / n2)


def zdiv(p: ZPoint, q: ZPoint) -> ZPoint:
    return zmul(p, zreciprocal(q))


def same_point(p: ZPoint, q: ZPoint, mode: Mode) -> bool:
    if mode.is_exact:
        return p.re == q.re and p.im == q.im
    return (p - q).norm2() <= mode.eps * mode.eps


# --------------------------------------------------------------------------
# canonical ordering

# Argument half-planes for args in [0, 2*pi): half 0 covers [0, pi),
# half 1 covers [pi, 2*pi).  Within one half, arg(u) < arg(v) iff
# cross(u, v) > 0; this stays exact for rational coordinates.


def _arg_half(p: ZPoint) -> int:
    if p.im > 0 or (p.im == 0 and p.re > 0):
        return 0
    return 1


def compare_canonical(p: ZPoint, q: ZPoint) -> int:
    np_, nq = p.norm2(), q.norm2()
    if np_ != nq:
        return -1 if np_ < nq else 1
    if np_ == 0:
        return 0
    hp, hq = _arg_half(p), _arg_half(q)
    if hp != hq:
        return -1 if hp < hq else 1
    c = cross(p, q)
    if c != 0:
        return -1 if c > 0 else 1
    return 0


_canonical_key = functools.cmp_to_key(compare_canonical)


def canonical_order(points, mode: Mode = EXACT) -> list:
    """Sort points by (norm, argument); duplicates raise ``DuplicatePoint``."""
    ordered = sorted(points, key=_canonical_key)
    for a, b in zip(ordered, ordered[1:]):
        if same_point(a, b, mode):
            raise DuplicatePoint(f"repeated point {a!r}")
    return ordered


# --------------------------------------------------------------------------
# generators


@dataclass(frozen=True)
class GeneratorSpec:
    """Description of how a window's raw points are produced.

    Kinds: ``positive-integers``, ``all-integers``, ``odd4n13-positive``
    (the family 4n+1, 4n+3 for n >= 1), ``odd4n13-all`` (same with n
    ranging over all integers), ``gaussian-lattice``,
    ``integers-plus-minus-i``, ``orbit`` (a seed set swept by a matrix
    group), and ``explicit``.
    """

    kind: str
    params: dict = field(default_factory=dict)

    KINDS = (
        "positive-integers",
        "all-integers",
        "odd4n13-positive",
        "odd4n13-all",
        "gaussian-lattice",
        "integers-plus-minus-i",
        "orbit",
        "explicit",
    )

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown generator kind {self.kind!r}")

    @staticmethod
    def explicit(points) -> "GeneratorSpec":
        return GeneratorSpec("explicit", {"points": tuple(points)})

    @staticmethod
    def orbit(k_points, generators, max_word_length: int) -> "GeneratorSpec":
        return GeneratorSpec(
            "orbit",
            {
                "k_points": tuple(k_points),
                "generators": tuple(tuple(g) for g in generators),
                "max_word_length": int(max_word_length),
            },
        )


# --------------------------------------------------------------------------
# point index (mode-aware membership)


class PointIndex:
    """Exact dict lookup, or an eps-grid with neighbor probing for floats."""

    def __init__(self, points, mode: Mode):
        self.mode = mode
        self._by_key = {}
        if mode.is_exact:
            for i, p in enumerate(points):
                self._by_key[(p.re, p.im)] = i
        else:
            self._cell = max(mode.eps, 1e-300)
            for i, p in enumerate(points):
                key = self._grid_key(p)
                self._by_key.setdefault(key, []).append((p, i))

    def _grid_key(self, p: ZPoint):
        return (math.floor(p.re / self._cell), math.floor(p.im / self._cell))

    def find(self, p: ZPoint):
        """Index of the window point equal to ``p`` (mode-aware), or None."""
        if self.mode.is_exact:
            return self._by_key.get((p.re, p.im))
        kx, ky = self._grid_key(p)
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                for q, i in self._by_key.get((kx + dx, ky + dy), ()):
                    if same_point(p, q, self.mode):
                        return i
        return None

    def __contains__(self, p: ZPoint) -> bool:
        return self.find(p) is not None


# --------------------------------------------------------------------------
# windows


class ZeroWindow:
    """A canonically ordered finite trace of a zero sequence in a ball.

    ``points`` are the stored coordinates.  The sampling region is the closed
    ball of radius ``radius`` centered at ``center``; for freshly generated
    windows the center equals ``translation``, the offset that moved the raw
    norm-smallest term to the origin (so raw coordinates are
    ``point - translation``).  Windows built from explicit raw coordinates
    have ``translation = None`` and are centered at the origin.
    """

    def __init__(self, points, radius, mode: Mode = EXACT, source=None,
                 translation=None, center=None, check=True):
        self.points = tuple(points)
        self.radius = float(radius)
        self.mode = mode
        self.source = source
        self.translation = translation
        if center is None:
            center = translation if translation is not None else ZPoint.zero(mode)
        self.center = center
        self._cache = {}
        if check:
            ordered = sorted(self.points, key=_canonical_key)
            if list(self.points) != ordered:
                raise ValueError("points not in canonical order")
            for a, b in zip(self.points, self.points[1:]):
                if same_point(a, b, self.mode):
                    raise DuplicatePoint(f"repeated point {a!r}")

    # -- construction -----------------------------------------------------

    @staticmethod
    def from_points(points, radius, mode: Mode = EXACT, source=None) -> "ZeroWindow":
        """Window over explicit raw coordinates (no canonicalizing shift)."""
        pts = canonical_order(points, mode)
        if not pts:
            raise EmptyWindow("no points")
        w = ZeroWindow(pts, radius, mode, source=source, translation=None,
                       center=ZPoint.zero(mode), check=False)
        rad2 = _radius2(radius, mode)
        for p in pts:
            if _norm2_exceeds(p.norm2(), rad2, mode):
                raise ValueError(f"point {p!r} outside sampling radius {radius}")
        return w

    def translate(self, b: ZPoint) -> "ZeroWindow":
        """The same trace moved by ``b`` (sampling region moves along)."""
        pts = canonical_order([p + b for p in self.points], self.mode)
        return ZeroWindow(pts, self.radius, self.mode, source=self.source,
                          translation=None, center=self.center + b, check=False)

    def canonicalize(self) -> "ZeroWindow":
        """Translate so the first (norm-smallest) point sits at the origin."""
        if self.points and self.points[0].is_zero() and self.translation is not None:
            return self
        shift = -self.points[0]
        pts = canonical_order([p + shift for p in self.points], self.mode)
        return ZeroWindow(pts, self.radius, self.mode, source=self.source,
                          translation=self.center + shift,
                          center=self.center + shift, check=False)

    # -- basic properties ---------------------------------------------------

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    @property
    def is_canonical(self) -> bool:
        return bool(self.points) and self.points[0].is_zero()

    def raw_points(self) -> list:
        off = self.translation if self.translation is not None else ZPoint.zero(self.mode)
        return [p - off for p in self.points]

    def head(self, n: int) -> "ZeroWindow":
        """The first ``n`` points in canonical order, same sampling region."""
        if not 1 <= n <= len(self.points):
            raise ValueError(f"need 1 <= n <= {len(self.points)}, got {n}")
        if n == len(self.points):
            return self
        return ZeroWindow(self.points[:n], self.radius, self.mode,
                          source=self.source, translation=self.translation,
                          center=self.center, check=False)

    def index(self) -> PointIndex:
        idx = self._cache.get("index")
        if idx is None:
            idx = PointIndex(self.points, self.mode)
            self._cache["index"] = idx
        return idx

    def min_gap(self) -> float:
        """Smallest pairwise distance (float)."""
        g = self._cache.get("min_gap")
        if g is None:
            g = math.inf
            pts = self.points
            for i in range(len(pts)):
                for j in range(i + 1, len(pts)):
                    d = (pts[i] - pts[j]).norm()
                    if d < g:
                        g = d
            self._cache["min_gap"] = g
        return g

    def in_region(self, p: ZPoint, slack: float = 0.0) -> bool:
        """Is ``p`` inside the sampled ball?  Exact when slack == 0."""
        d2 = (p - self.center).norm2()
        rad2 = _radius2(self.radius, self.mode)
        if slack == 0.0 and self.mode.is_exact:
            return d2 <= rad2
        return float(d2) <= (self.radius + slack) ** 2


def _radius2(radius, mode: Mode):
    if mode.is_exact:
        r = Fraction(radius)
        return r * r
    return float(radius) ** 2


def _norm2_exceeds(n2, rad2, mode: Mode) -> bool:
    if mode.is_exact:
        return n2 > rad2
    return float(n2) > rad2 + 1e-12 * (1.0 + float(rad2))


# --------------------------------------------------------------------------
# generation


def _int_range(limit: float):
    n = math.floor(limit + 1e-12)
    return range(-n, n + 1)


def _raw_points(spec: GeneratorSpec, radius: float, mode: Mode) -> list:
    mk = lambda re, im=0: ZPoint.of(re, im, mode)
    r = float(radius)
    kind = spec.kind
    if kind == "positive-integers":
        return [mk(k) for k in range(1, math.floor(r + 1e-12) + 1)]
    if kind == "all-integers":
        return [mk(k) for k in _int_range(r)]
    if kind == "odd4n13-positive":
        # {4n+1, 4n+3 : n >= 1} is every odd integer from 5 upward.
        return [mk(k) for k in range(5, math.floor(r + 1e-12) + 1, 2)]
    if kind == "odd4n13-all":
        # With n ranging over all integers the family covers every odd integer.
        return [mk(k) for k in _int_range(r) if k % 2 != 0]
    if kind == "gaussian-lattice":
        pts = []
        rad2 = _radius2(radius, mode)
        for a in _int_range(r):
            for b in _int_range(r):
                p = mk(a, b)
                if not _norm2_exceeds(p.norm2(), rad2, mode):
                    pts.append(p)
        return pts
    if kind == "integers-plus-minus-i":
        pts = [mk(k) for k in _int_range(r)]
        if r >= 1.0:
            pts.append(mk(0, -1))
        return pts
    if kind == "orbit":
        return _orbit_points(spec, radius, mode)
    if kind == "explicit":
        return [p if isinstance(p, ZPoint) else ZPoint.of(p[0], p[1], mode)
                for p in spec.params["points"]]
    raise ValueError(f"unknown generator kind {kind!r}")


def _orbit_points(spec: GeneratorSpec, radius: float, mode: Mode) -> list:
    from .veech import Mat2, is_contracting  # local import: veech sits above zseq

    gens = [Mat2.of(*g, mode=mode) for g in spec.params["generators"]]
    for g in gens:
        if is_contracting(g):
            raise ContractingGenerator(f"generator {g.rows()} is contracting")
    # Sweep by the generated group, so inverses join the alphabet.
    alphabet = []
    for g in gens:
        alphabet.append(g)
        inv = g.inverse()
        if inv.entries() != g.entries():
            alphabet.append(inv)
    seeds = [p if isinstance(p, ZPoint) else ZPoint.of(p[0], p[1], mode)
             for p in spec.params["k_points"]]
    rad2 = _radius2(radius, mode)
    max_len = spec.params["max_word_length"]
    seen = {}
    frontier = []
    for p in seeds:
        if _norm2_exceeds(p.norm2(), rad2, mode):
            continue
        key = (p.re, p.im)
        if key not in seen:
            seen[key] = p
            frontier.append(p)
    depth = 0
    while frontier and depth < max_len:
        depth += 1
        nxt = []
        for p in frontier:
            for g in alphabet:
                q = g.apply(p)
                if _norm2_exceeds(q.norm2(), rad2, mode):
                    continue
                key = (q.re, q.im)
                if key not in seen:
                    seen[key] = q
                    nxt.append(q)
        frontier = nxt
    return list(seen.values())


def generate(spec: GeneratorSpec, radius: float, mode: Mode = EXACT) -> ZeroWindow:
    """Build the canonical window: raw trace in the ball, shifted to 0.

    Raw points of norm <= radius survive the hard cutoff; the whole set is
    then translated so the canonically first term lands at the origin, and
    re-sorted.  The translation is recorded on the window.
    """
    raw = _raw_points(spec, radius, mode)
    rad2 = _radius2(radius, mode)
    raw = [p for p in raw if not _norm2_exceeds(p.norm2(), rad2, mode)]
    if not raw:
        raise EmptyWindow(f"{spec.kind} has no points of norm <= {radius}")
    raw = canonical_order(raw, mode)
    shift = -raw[0]
    stored = canonical_order([p + shift for p in raw], mode)
    return ZeroWindow(stored, radius, mode, source=spec,
                      translation=shift, center=shift, check=False)


# --------------------------------------------------------------------------
# validation


@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            "valid": self.valid,
            "violations": [{"code": c, "detail": d} for c, d in self.violations],
            "notes": list(self.notes),
        }


def validate(w: ZeroWindow) -> ValidationReport:
    """Check window invariants; the report is empty iff they all hold."""
    rep = ValidationReport()
    pts = w.points
    if not pts:
        rep.violations.append(("EmptyWindow", "window has no points"))
        return rep
    for i, (a, b) in enumerate(zip(pts, pts[1:])):
        if same_point(a, b, w.mode):
            rep.violations.append(("DuplicatePoint", f"points {i} and {i + 1} coincide"))
        elif compare_canonical(a, b) > 0:
            rep.violations.append(
                ("OrderingViolation", f"points {i} and {i + 1} out of canonical order"))
    rad2 = _radius2(w.radius, w.mode)
    for i, p in enumerate(pts):
        d2 = (p - w.center).norm2()
        if _norm2_exceeds(d2, rad2, w.mode):
            rep.violations.append(
                ("RadiusViolation", f"point {i} lies outside the sampled ball"))
    if w.translation is not None and not pts[0].is_zero():
        rep.violations.append(
            ("FirstPointNonzero", "canonicalized window must start at 0"))
    if not w.mode.is_exact:
        for i, p in enumerate(pts):
            if not (math.isfinite(p.re) and math.isfinite(p.im)):
                rep.violations.append(("NonFinite", f"point {i} is not finite"))
    if w.mode.is_exact:
        dmax = max(max(p.re.denominator, p.im.denominator) for p in pts)
        rep.notes.append(f"max coordinate denominator {dmax}")
    kind = w.source.kind if w.source is not None else None
    if kind in (None, "explicit"):
        rep.notes.append("divergence of the underlying sequence not verifiable "
                         "from an explicit point list")
    return rep


# --------------------------------------------------------------------------
# sup norm


def sup_norm(points) -> float:
    """Supremum of point norms; the argmax is located exactly first."""
    pts = list(points)
    if not pts:
        raise EmptyWindow("sup_norm of an empty point list")
    best = pts[0]
    for p in pts[1:]:
        if p.norm2() > best.norm2():
            best = p
    return best.norm()


# --------------------------------------------------------------------------
# JSON form


def window_to_json(w: ZeroWindow) -> dict:
    t = None
    if w.translation is not None:
        t = [scalar_repr(w.translation.re), scalar_repr(w.translation.im)]
    return {
        "mode": w.mode.kind,
        "radius": w.radius,
        "translation": t,
        "points": [[scalar_repr(p.re), scalar_repr(p.im)] for p in w.points],
    }


def window_from_json(data: dict, eps: float = 1e-9) -> ZeroWindow:
    kind = data.get("mode", "exact")
    if kind not in ("exact", "float"):
        raise ModeMismatch(f"unknown mode {kind!r}")
    mode = EXACT if kind == "exact" else float_mode(eps)
    pts = [ZPoint.of(re, im, mode) for re, im in data["points"]]
    t = data.get("translation")
    translation = ZPoint.of(t[0], t[1], mode) if t is not None else None
    pts = canonical_order(pts, mode)
    return ZeroWindow(pts, data["radius"], mode, source=None,
                      translation=translation, check=False)
