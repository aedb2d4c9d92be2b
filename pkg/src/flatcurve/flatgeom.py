"""Saddle connections and holonomy vectors of a zero window.

Two window points see each other when no third window point lies on the
open segment between them.  Each visible (unordered) pair contributes one
saddle connection; its holonomy vector, taken with both signs, populates
the window's holonomy set.

Exact mode decides blocking with integer cross/dot products (coordinates
are rescaled by the common denominator); float mode uses an eps-tube around
the segment with a (1-eps)-shrunk parameter range.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import EmptyWindow
from .zseq import Mode, PointIndex, ZPoint, ZeroWindow, cross, dot

_INT_COORD_LIMIT = 1 << 28  # keeps every cross/dot product inside int64


# --------------------------------------------------------------------------
# coordinate arrays


def _lcm(a: int, b: int) -> int:
    return a // math.gcd(a, b) * b


def _coord_arrays(w: ZeroWindow):
    """(xs, ys, exact_ints) arrays for batched predicates.

    Exact windows are rescaled by the common denominator so every cross and
    dot product below is an exact int64.  When coordinates are too large to
    scale safely, exact_ints is False and exact windows must use the
    per-pair Fraction path instead.
    """
    got = w._cache.get("coords")
    if got is not None:
        return got
    if w.mode.is_exact:
        den = 1
        for p in w.points:
            den = _lcm(den, _lcm(p.re.denominator, p.im.denominator))
            if den > _INT_COORD_LIMIT:
                break
        if den <= _INT_COORD_LIMIT:
            xs = [int(p.re * den) for p in w.points]
            ys = [int(p.im * den) for p in w.points]
            if max((max(map(abs, xs), default=0), max(map(abs, ys), default=0))) <= _INT_COORD_LIMIT:
                got = (np.array(xs, dtype=np.int64), np.array(ys, dtype=np.int64), True)
    if got is None:
        xs = np.array([float(p.re) for p in w.points])
        ys = np.array([float(p.im) for p in w.points])
        got = (xs, ys, False)
    w._cache["coords"] = got
    return got


def _visible_pairs_python(w: ZeroWindow, max_length: float | None) -> list:
    bound2 = None if max_length is None else Fraction(max_length) ** 2
    pairs = []
    n = len(w.points)
    for i in range(n - 1):
        for j in range(i + 1, n):
            if bound2 is not None and (w.points[j] - w.points[i]).norm2() > bound2:
                continue
            if is_visible(w, i, j):
                pairs.append((i, j))
    return pairs


# --------------------------------------------------------------------------
# single-pair predicates


def _blocks_exact(a: ZPoint, b: ZPoint, c: ZPoint) -> bool:
    u = b - a
    v = c - a
    if cross(u, v) != 0:
        return False
    s = dot(v, u)
    return 0 < s < u.norm2()


def _blocks_float(a: ZPoint, b: ZPoint, c: ZPoint, eps: float) -> bool:
    ux, uy = float(b.re - a.re), float(b.im - a.im)
    vx, vy = float(c.re - a.re), float(c.im - a.im)
    len2 = ux * ux + uy * uy
    if len2 == 0.0:
        return False
    if abs(ux * vy - uy * vx) > eps * math.sqrt(len2):
        return False
    s = vx * ux + vy * uy
    return eps / 2 * len2 < s < (1 - eps / 2) * len2


def point_blocks(a: ZPoint, b: ZPoint, c: ZPoint, mode: Mode) -> bool:
    """Does ``c`` lie on the open segment from ``a`` to ``b``?"""
    if mode.is_exact:
        return _blocks_exact(a, b, c)
    return _blocks_float(a, b, c, mode.eps)


def is_visible(w: ZeroWindow, r: int, l: int) -> bool:
    """No third window point lies strictly inside segment (r, l)."""
    pts = w.points
    a, b = pts[r], pts[l]
    if r == l:
        raise ValueError("a point does not see itself")
    for k, c in enumerate(pts):
        if k in (r, l):
            continue
        if point_blocks(a, b, c, w.mode):
            return False
    return True


# --------------------------------------------------------------------------
# batched enumeration

_GRID_CACHE = "nbr_grid"


def _neighbor_grid(w: ZeroWindow, cell: float):
    key = (_GRID_CACHE, cell)
    grid = w._cache.get(key)
    if grid is None:
        grid = {}
        for i, p in enumerate(w.points):
            gk = (math.floor(float(p.re) / cell), math.floor(float(p.im) / cell))
            grid.setdefault(gk, []).append(i)
        w._cache[key] = grid
    return grid


def _near_indices(w: ZeroWindow, i: int, cell: float, grid) -> list:
    p = w.points[i]
    cx = math.floor(float(p.re) / cell)
    cy = math.floor(float(p.im) / cell)
    out = []
    for dx in (-1, 0, 1):
        for dy in (-1, 0, 1):
            out.extend(grid.get((cx + dx, cy + dy), ()))
    return out


def visible_pairs(w: ZeroWindow, max_length: float | None = None) -> list:
    """All visible index pairs (i < j), batched per anchor.

    ``max_length`` restricts enumeration to pairs at distance <= max_length;
    any blocker of such a pair lies within that distance of the anchor, so
    the restriction loses nothing.
    """
    n = len(w.points)
    if n < 2:
        return []
    xs, ys, exact = _coord_arrays(w)
    if w.mode.is_exact and not exact:
        return _visible_pairs_python(w, max_length)
    eps = w.mode.eps
    pairs = []
    if max_length is not None:
        cell = max(float(max_length), 1e-300) * (1 + 1e-9)
        grid = _neighbor_grid(w, cell)
        if exact:
            bound2 = (Fraction(max_length) * _int_scale(w)) ** 2
            # squared distances are integers after scaling, so flooring the
            # rational bound loses nothing
            limit2 = int(bound2.numerator // bound2.denominator)
        else:
            limit2 = float(max_length) ** 2
    for i in range(n - 1):
        if max_length is None:
            js = np.arange(i + 1, n)
            cand = None  # all points
        else:
            near = [j for j in _near_indices(w, i, cell, grid) if j != i]
            if not near:
                continue
            near = np.array(sorted(near), dtype=np.int64)
            dx = xs[near] - xs[i]
            dy = ys[near] - ys[i]
            d2 = dx * dx + dy * dy
            if exact:
                keep = d2 <= limit2
            else:
                keep = d2 <= limit2 * (1 + 1e-12)
            near = near[keep]
            js = near[near > i]
            cand = near
        if len(js) == 0:
            continue
        ax, ay = xs[i], ys[i]
        bx = xs[js] - ax
        by = ys[js] - ay
        if cand is None:
            cx = xs - ax
            cy = ys - ay
        else:
            cx = xs[cand] - ax
            cy = ys[cand] - ay
        crs = bx[:, None] * cy[None, :] - by[:, None] * cx[None, :]
        s = bx[:, None] * cx[None, :] + by[:, None] * cy[None, :]
        len2 = bx * bx + by * by
        if exact:
            blocked = (crs == 0) & (s > 0) & (s < len2[:, None])
        else:
            ln = np.sqrt(len2)
            blocked = (np.abs(crs) <= eps * ln[:, None]) \
                & (s > eps / 2 * len2[:, None]) & (s < (1 - eps / 2) * len2[:, None])
        vis = ~blocked.any(axis=1)
        pairs.extend((i, int(j)) for j, ok in zip(js, vis) if ok)
    return pairs


def _int_scale(w: ZeroWindow) -> int:
    scale = w._cache.get("int_scale")
    if scale is None:
        den = 1
        for p in w.points:
            den = _lcm(den, _lcm(p.re.denominator, p.im.denominator))
        scale = den
        w._cache["int_scale"] = scale
    return scale


def visible_pairs_bruteforce(w: ZeroWindow) -> list:
    """Oracle: every pair against every potential blocker, no shortcuts."""
    n = len(w.points)
    xs, ys, exact = _coord_arrays(w)
    if w.mode.is_exact and not exact:
        return _visible_pairs_python(w, None)
    eps = w.mode.eps
    pairs = []
    for i in range(n - 1):
        for j in range(i + 1, n):
            ux, uy = xs[j] - xs[i], ys[j] - ys[i]
            vx = xs - xs[i]
            vy = ys - ys[i]
            crs = ux * vy - uy * vx
            s = ux * vx + uy * vy
            len2 = ux * ux + uy * uy
            if exact:
                blocked = (crs == 0) & (s > 0) & (s < len2)
            else:
                ln = math.sqrt(float(len2))
                blocked = (np.abs(crs) <= eps * ln) \
                    & (s > eps / 2 * len2) & (s < (1 - eps / 2) * len2)
            if not blocked.any():
                pairs.append((i, j))
    return pairs


# --------------------------------------------------------------------------
# saddle connections


def _upper_half(v: ZPoint) -> bool:
    return v.im > 0 or (v.im == 0 and v.re > 0)


@dataclass(frozen=True)
class SaddleSegment:
    """A visible pair with canonical orientation (holonomy argument in
    [0, pi)) and the covering multiplicity it lifts with."""

    from_idx: int
    to_idx: int
    holonomy: ZPoint
    length: float
    direction: float
    multiplicity: int
    provisional: bool


def _make_segment(w: ZeroWindow, i: int, j: int, m: int) -> SaddleSegment:
    v = w.points[j] - w.points[i]
    if not _upper_half(v):
        i, j = j, i
        v = -v
    length = v.norm()
    # canonical orientation puts the argument in [0, pi)
    direction = math.atan2(float(v.im), float(v.re))
    ra = (w.points[i] - w.center).norm()
    rb = (w.points[j] - w.center).norm()
    provisional = max(ra, rb) + length > w.radius * (1 + 1e-12)
    return SaddleSegment(i, j, v, length, direction, m, provisional)


def saddle_connections(w: ZeroWindow, m: int, max_length: float | None = None) -> list:
    """One canonical segment per visible pair; multiplicity m on the cover."""
    if m < 2:
        raise ValueError("covering degree m must be >= 2")
    if len(w.points) == 0:
        raise EmptyWindow("no points")
    return [_make_segment(w, i, j, m) for i, j in visible_pairs(w, max_length)]


# --------------------------------------------------------------------------
# holonomy


class HolonomySet:
    """Holonomy vectors of a window, closed under negation, 0 excluded.

    ``complete_radius`` is the heuristic certification radius
    ``max(0, window_radius - L)`` where L is the longest length the
    enumeration tested.  When the set was enumerated with a length
    restriction, membership of longer vectors is decided on demand against
    the source window (and cached).
    """

    def __init__(self, vectors, window_radius: float, mode: Mode,
                 restricted_to: float | None = None, window: ZeroWindow | None = None,
                 complete_radius: float | None = None):
        from .zseq import _canonical_key, same_point

        vecs = []
        seen = set()
        for v in vectors:
            for s in (v, -v):
                key = (s.re, s.im)
                if key not in seen:
                    seen.add(key)
                    vecs.append(s)
        vecs.sort(key=_canonical_key)
        deduped = []
        for v in vecs:
            if v.is_zero():
                raise ValueError("holonomy set cannot contain 0")
            if deduped and same_point(deduped[-1], v, mode):
                continue
            deduped.append(v)
        self.vectors = tuple(deduped)
        self.window_radius = float(window_radius)
        self.mode = mode
        self.restricted_to = restricted_to
        self.window = window
        if complete_radius is None:
            lmax = restricted_to
            if lmax is None:
                lmax = max((v.norm() for v in self.vectors), default=0.0)
            complete_radius = max(0.0, float(window_radius) - float(lmax))
        self.complete_radius = complete_radius
        self._index = PointIndex(self.vectors, mode)
        self._query_cache = {}

    def __len__(self):
        return len(self.vectors)

    def __iter__(self):
        return iter(self.vectors)

    def contains(self, v: ZPoint) -> bool:
        if v.is_zero():
            return False
        if v in self._index:
            return True
        if self.restricted_to is None or self.window is None:
            return False
        if v.norm() <= self.restricted_to * (1 - 1e-12):
            return False  # enumeration was complete up to the restriction
        key = (v.re, v.im)
        got = self._query_cache.get(key)
        if got is None:
            got = has_holonomy_vector(self.window, v)
            self._query_cache[key] = got
            self._query_cache[(-v.re, -v.im)] = got
        return got


def holonomy(w: ZeroWindow, max_length: float | None = None) -> HolonomySet:
    """Signed difference vectors of all visible pairs."""
    segs = visible_pairs(w, max_length)
    xs, ys, exact_ints = _coord_arrays(w)
    if w.mode.is_exact and exact_ints and segs:
        scale = _int_scale(w)
        ii = np.fromiter((i for i, _ in segs), dtype=np.int64, count=len(segs))
        jj = np.fromiter((j for _, j in segs), dtype=np.int64, count=len(segs))
        distinct = set(zip((xs[jj] - xs[ii]).tolist(), (ys[jj] - ys[ii]).tolist()))
        vecs = [ZPoint(Fraction(a, scale), Fraction(b, scale)) for a, b in distinct]
    else:
        vecs = [w.points[j] - w.points[i] for i, j in segs]
    if max_length is None:
        lmax = max((v.norm() for v in vecs), default=0.0)
    else:
        lmax = float(max_length)
    return HolonomySet(vecs, w.radius, w.mode, restricted_to=max_length,
                       window=w, complete_radius=max(0.0, w.radius - lmax))


_KEY_SHIFT = 32  # coordinate pairs packed as x * 2**32 + y, injective below 2**31


def _encoded_keys(w: ZeroWindow):
    got = w._cache.get("enc_keys")
    if got is None:
        xs, ys, exact_ints = _coord_arrays(w)
        if not exact_ints:
            got = (None, None)
        else:
            keys = (xs << _KEY_SHIFT) + ys
            got = (keys, np.sort(keys))
        w._cache["enc_keys"] = got
    return got


def has_holonomy_vector(w: ZeroWindow, v: ZPoint) -> bool:
    """Is ``v`` (or ``-v``) the difference of some visible window pair?

    Witness endpoints are matched through packed integer keys; a witness
    survives when no window point on its line falls strictly between the
    endpoints.
    """
    if v.is_zero():
        return False
    idx = w.index()
    if w.mode.is_exact:
        keys, sorted_keys = _encoded_keys(w)
        if keys is not None:
            scale = _int_scale(w)
            sx, sy = Fraction(v.re) * scale, Fraction(v.im) * scale
            if sx.denominator != 1 or sy.denominator != 1:
                return False  # finer than the window grid: no pair differs by it
            vx, vy = int(sx), int(sy)
            if max(abs(vx), abs(vy)) > 2 * _INT_COORD_LIMIT:
                return False
            target = keys + ((vx << _KEY_SHIFT) + vy)
            pos = np.searchsorted(sorted_keys, target)
            pos[pos == len(sorted_keys)] = 0
            witnesses = np.nonzero(sorted_keys[pos] == target)[0]
            if witnesses.size == 0:
                return False
            g = math.gcd(abs(vx), abs(vy))
            if g == 1:
                return True  # no lattice point strictly inside a primitive step
            step = ((vx // g) << _KEY_SHIFT) + (vy // g)
            alive_keys = keys[witnesses]
            alive = np.ones(alive_keys.shape, dtype=bool)
            for k in range(1, g):
                t = alive_keys + k * step
                p2 = np.searchsorted(sorted_keys, t)
                p2[p2 == len(sorted_keys)] = 0
                alive &= sorted_keys[p2] != t
                if not alive.any():
                    return False
            return True
        buckets = {}
        for p in w.points:
            buckets.setdefault(cross(p, v), []).append(dot(p, v))
        for vals in buckets.values():
            vals.sort()
        v2 = v.norm2()
        for p in w.points:
            if (p + v) not in idx:
                continue
            vals = buckets[cross(p, v)]
            lo = dot(p, v)
            k = bisect_right(vals, lo)
            if k >= len(vals) or vals[k] >= lo + v2:
                return True
        return False
    eps = w.mode.eps
    vx, vy = float(v.re), float(v.im)
    ln = math.hypot(vx, vy)
    xs = np.array([float(p.re) for p in w.points])
    ys = np.array([float(p.im) for p in w.points])
    len2 = ln * ln
    for p in w.points:
        if (p + v) not in idx:
            continue
        cx = xs - float(p.re)
        cy = ys - float(p.im)
        crs = vx * cy - vy * cx
        s = vx * cx + vy * cy
        blocked = (np.abs(crs) <= eps * ln) & (s > eps / 2 * len2) & (s < (1 - eps / 2) * len2)
        if not blocked.any():
            return True
    return False


# --------------------------------------------------------------------------
# direction statistics

_MIN_RUN_POINTS = 5
_RUN_GAP_RATIO = 4.0


@dataclass
class DirectionProfile:
    directions: list = field(default_factory=list)
    max_gap: float = 0.0
    min_gap: float = 0.0
    mean_gap: float = 0.0
    accumulation: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "directions": self.directions,
            "max_gap": self.max_gap,
            "min_gap": self.min_gap,
            "mean_gap": self.mean_gap,
            "accumulation": self.accumulation,
        }


def _direction_key(v: ZPoint, mode: Mode):
    if mode.is_exact:
        den = _lcm(v.re.denominator, v.im.denominator)
        a, b = int(v.re * den), int(v.im * den)
        g = math.gcd(abs(a), abs(b))
        return (a // g, b // g)
    theta = math.atan2(float(v.im), float(v.re)) % (2 * math.pi)
    return round(theta, 12)


def direction_profile(h: HolonomySet) -> DirectionProfile:
    """Sorted directions, circular gap statistics, and accumulation
    candidates: ends of monotone runs (>= 5 directions) whose gaps shrink
    by at least a factor of 4, extrapolated to the neighbouring direction
    when it lies within the run's own span."""
    keys = {}
    for v in h.vectors:
        keys.setdefault(_direction_key(v, h.mode), v)
    dirs = sorted(math.atan2(float(v.im), float(v.re)) % (2 * math.pi)
                  for v in keys.values())
    prof = DirectionProfile(directions=dirs)
    k = len(dirs)
    if k >= 2:
        gaps = [dirs[i + 1] - dirs[i] for i in range(k - 1)]
        gaps.append(dirs[0] + 2 * math.pi - dirs[-1])
        prof.max_gap = max(gaps)
        prof.min_gap = min(gaps)
        prof.mean_gap = 2 * math.pi / k
        prof.accumulation = _accumulation_candidates(dirs, gaps)
    elif k == 1:
        prof.max_gap = prof.min_gap = prof.mean_gap = 2 * math.pi
    return prof


def _run_candidate(dirs, gaps, s, e, descending):
    k = len(dirs)
    run = gaps[s:e + 1]
    if min(run) <= 0 or max(run) / min(run) < _RUN_GAP_RATIO:
        return None
    span = sum(run)
    if descending:
        # gaps shrink with increasing index: accumulates at dirs[e + 1]
        nxt = gaps[(e + 1) % k]
        if nxt <= span:
            val = dirs[(e + 2) % k]
        else:
            val = dirs[e + 1]
    else:
        # gaps grow with increasing index: accumulates at dirs[s]
        prv = gaps[(s - 1) % k]
        if prv <= span:
            val = dirs[(s - 1) % k]
        else:
            val = dirs[s]
    return val % (2 * math.pi)


def _accumulation_candidates(dirs, gaps) -> list:
    k = len(dirs)
    need = _MIN_RUN_POINTS - 1  # gaps per qualifying run
    out = []
    for descending in (True, False):
        i = 0
        while i < k - 1:
            j = i
            while j + 1 <= k - 2 and (
                gaps[j + 1] < gaps[j] if descending else gaps[j + 1] > gaps[j]
            ):
                j += 1
            if j - i + 1 >= need:
                val = _run_candidate(dirs, gaps, i, j, descending)
                if val is not None:
                    out.append(val)
            i = max(j, i + 1)
    uniq = []
    for val in sorted(out):
        if not uniq or val - uniq[-1] > 1e-9:
            uniq.append(val)
    if len(uniq) >= 2 and uniq[0] + 2 * math.pi - uniq[-1] <= 1e-9:
        uniq.pop()  # wraparound duplicate of the first candidate
    return uniq


# --------------------------------------------------------------------------
# collinearity helpers


def window_collinear(w: ZeroWindow) -> bool:
    pts = w.points
    if len(pts) < 3:
        return True
    base = pts[0]
    u = None
    for p in pts[1:]:
        d = p - base
        if not d.is_zero():
            u = d
            break
    if u is None:
        return True
    for p in pts[1:]:
        d = p - base
        c = cross(u, d)
        if w.mode.is_exact:
            if c != 0:
                return False
        else:
            if abs(float(c)) > w.mode.eps * u.norm() * max(d.norm(), 1.0):
                return False
    return True


def vectors_parallel(vectors, mode: Mode) -> bool:
    vecs = [v for v in vectors if not v.is_zero()]
    if len(vecs) < 2:
        return True
    u = vecs[0]
    for v in vecs[1:]:
        c = cross(u, v)
        if mode.is_exact:
            if c != 0:
                return False
        else:
            if abs(float(c)) > mode.eps * u.norm() * v.norm():
                return False
    return True
