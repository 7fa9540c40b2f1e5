"""Pareto dominance (maximisation) and the hypervolume indicator."""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from fractions import Fraction

import numpy as np

from .errors import DimensionMismatch, PointBelowReference


def dominates(a, b) -> bool:
    """True iff ``a`` is at least as good as ``b`` everywhere and better somewhere."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise DimensionMismatch(f"cannot compare shapes {a.shape} and {b.shape}")
    return bool(np.all(a >= b) and np.any(a > b))


def _as_points(points) -> np.ndarray:
    arr = np.asarray(points, dtype=float)
    if arr.size == 0:
        return arr.reshape(0, arr.shape[-1] if arr.ndim == 2 else 0)
    if arr.ndim != 2:
        raise DimensionMismatch("points must form a (count, m) array")
    return arr


def _filter_tuples(pts: list[tuple]) -> list[tuple]:
    """Non-dominated, duplicate-free subset, sorted lexicographically descending.

    A point that dominates another is lexicographically larger, so after the
    sort a point can only be dominated by something already kept.
    """
    kept: list[tuple] = []
    for p in sorted(set(pts), reverse=True):
        for q in kept:
            if all(qi >= pi for qi, pi in zip(q, p)):
                break
        else:
            kept.append(p)
    return kept


def nondominated_filter(points) -> np.ndarray:
    """Points not dominated by any other input point, duplicates collapsed.

    Rows of the result are in lexicographically descending order.
    """
    arr = _as_points(points)
    if arr.shape[0] == 0:
        return arr
    kept = _filter_tuples([tuple(row) for row in arr.tolist()])
    return np.array(kept, dtype=float)


def _hv2(front: list[tuple]):
    # front: mutually non-dominated, sorted by first coordinate descending,
    # hence second coordinate ascending
    total = 0
    prev_y = 0
    for x, y in front:
        total += x * (y - prev_y)
        prev_y = y
    return total


def _hv3(points: list[tuple]):
    """3-D volume by a sweep on z over an incrementally maintained 2-D staircase.

    The staircase is kept as ``negx`` (ascending, i.e. x descending) and
    ``ys`` (ascending); ``area`` is its 2-D measure. Each point is inserted
    once and removed at most once, so the sweep costs O(n log n) lookups.
    """
    order = sorted(points, key=lambda p: p[2], reverse=True)
    negx: list = []
    ys: list = []
    area = 0
    total = 0

    def term(i):
        # staircase area is the sum of these strips
        return -negx[i] * (ys[i] - (ys[i - 1] if i else 0))

    i = 0
    while i < len(order):
        level = order[i][2]
        while i < len(order) and order[i][2] == level:
            x, y = order[i][0], order[i][1]
            i += 1
            j = bisect_right(negx, -x) - 1  # last step with x' >= x
            if j >= 0 and ys[j] >= y:
                continue  # weakly dominated in the projection
            k = bisect_left(negx, -x)  # first step with x' <= x
            end = k
            while end < len(ys) and ys[end] <= y:
                end += 1
            stop = min(end + 1, len(ys))
            area -= sum(term(t) for t in range(k, stop))
            negx[k:end] = [-x]
            ys[k:end] = [y]
            area += sum(term(t) for t in range(k, min(k + 2, len(ys))))
        nxt = order[i][2] if i < len(order) else 0
        total += area * (level - nxt)
    return total


def _hv_sweep(points: list[tuple], base_dim: int = 2):
    """Volume dominated by ``points`` above the origin.

    Slices on the last coordinate and recurses on the remaining ones; the
    recursion bottoms out in the 3-D staircase sweep (2-D sum for m=2), or in
    a max at 1-D when ``base_dim`` is 1. Works on any exact or inexact
    number type.
    """
    if not points:
        return 0
    d = len(points[0])
    if d == 1:
        return max(p[0] for p in points)
    if d == 2 and base_dim == 2:
        return _hv2(_filter_tuples(points))
    if d == 3 and base_dim == 2:
        return _hv3(points)
    order = sorted(points, key=lambda p: p[-1], reverse=True)
    total = 0
    projected: list[tuple] = []
    i = 0
    while i < len(order):
        level = order[i][-1]
        while i < len(order) and order[i][-1] == level:
            projected.append(order[i][:-1])
            i += 1
        nxt = order[i][-1] if i < len(order) else 0
        projected = _filter_tuples(projected)
        total += (level - nxt) * _hv_sweep(projected, base_dim)
    return total


def _volume(pts: list[tuple], ref: tuple | None = None, base_dim: int = 2) -> float:
    """Hypervolume of float tuples, computed exactly and rounded once.

    Every finite double is an integer multiple of a power of two, so the
    front and ``ref`` are scaled to integers over a common denominator and
    the sweep runs in integer arithmetic. The single correctly rounded
    division at the end keeps monotonicity under insertion and dominance
    exact in floating point, not only up to rounding.
    """
    front = _filter_tuples(pts)
    if not front:
        return 0.0
    m = len(front[0])
    if ref is None:
        ref = (0.0,) * m
    shift = max(_shift_of(p) for p in front + [ref])
    origin = _scaled(ref, shift)
    exact = [tuple(c - o for c, o in zip(_scaled(p, shift), origin)) for p in front]
    return _hv_sweep(exact, base_dim) / (1 << (m * shift))


def _shift_of(point) -> int:
    """Exponent ``e`` such that every coordinate is an integer multiple of ``2**-e``."""
    return max(c.as_integer_ratio()[1].bit_length() - 1 for c in point)


def _scaled(point, shift: int) -> tuple:
    """Coordinates as integers in units of ``2**-shift`` (exact when shift is large enough)."""
    out = []
    for c in point:
        num, den = c.as_integer_ratio()
        out.append(num << (shift - den.bit_length() + 1))
    return tuple(out)


def _contribution(p: tuple, others: list[tuple]):
    """Volume dominated by ``p`` and by no point of ``others``, in exact arithmetic."""
    for q in others:
        if all(qi >= pi for qi, pi in zip(q, p)):
            return 0
    limited = _filter_tuples([tuple(map(min, p, q)) for q in others])
    box = 1
    for c in p:
        box *= c
    return box - _hv_sweep(limited)


def _checked_tuples(points, ref) -> tuple[list[tuple], tuple | None]:
    arr = _as_points(points)
    if arr.shape[0] == 0:
        return [], None
    m = arr.shape[1]
    if ref is None:
        ref = np.zeros(m)
    ref = np.asarray(ref, dtype=float)
    if ref.shape != (m,):
        raise DimensionMismatch(f"reference point has shape {ref.shape}, points have m={m}")
    if not (np.all(np.isfinite(arr)) and np.all(np.isfinite(ref))):
        raise ValueError("points and reference must be finite")
    if np.any(arr < ref):
        raise PointBelowReference("every point must be >= the reference point")
    return [tuple(row) for row in arr.tolist()], tuple(ref.tolist())


def hypervolume(points, ref=None) -> float:
    """Lebesgue measure of the union of boxes ``[ref, p]`` over ``points``.

    ``ref`` defaults to the origin. Dominated and duplicate points add
    nothing; an empty input has volume 0. The value is the exact volume
    rounded to the nearest double.
    """
    pts, ref = _checked_tuples(points, ref)
    return _volume(pts, ref)


def hypervolume_sliced(points, ref=None) -> float:
    """Same measure as :func:`hypervolume`, slicing all the way down to 1-D.

    Slower; kept as a cross-check of the 2-D base case.
    """
    pts, ref = _checked_tuples(points, ref)
    return _volume(pts, ref, base_dim=1)


def hypervolume_mc(points, ref=None, sample_count=100_000, rng=None, chunk=200_000):
    """Monte-Carlo estimate of :func:`hypervolume`.

    Samples uniformly in the box spanned by ``ref`` and the coordinate-wise
    maximum of ``points``. Returns ``(estimate, std_error)`` where the
    standard error is the binomial one scaled by the box volume.
    """
    rng = np.random.default_rng(rng)
    arr = _as_points(points)
    if arr.shape[0] == 0:
        return 0.0, 0.0
    m = arr.shape[1]
    ref = np.zeros(m) if ref is None else np.asarray(ref, dtype=float)
    if ref.shape != (m,):
        raise DimensionMismatch(f"reference point has shape {ref.shape}, points have m={m}")
    if np.any(arr < ref):
        raise PointBelowReference("every point must be >= the reference point")
    front = nondominated_filter(arr)
    upper = front.max(axis=0)
    # exact box volume, rounded once, so a full hit rate reproduces it exactly
    box = float(math.prod(Fraction(u) - Fraction(r) for u, r in zip(upper.tolist(), ref.tolist())))
    if box == 0.0:
        return 0.0, 0.0

    hits = 0
    remaining = int(sample_count)
    while remaining > 0:
        size = min(chunk, remaining)
        u = ref + (upper - ref) * rng.random((size, m))
        inside = np.zeros(size, dtype=bool)
        for p in front:
            inside |= np.all(u <= p, axis=1)
        hits += int(inside.sum())
        remaining -= size
    frac = hits / sample_count
    return box * frac, box * float(np.sqrt(frac * (1.0 - frac) / sample_count))
