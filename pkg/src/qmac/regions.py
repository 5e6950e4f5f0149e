"""Convex 2D rate-region geometry: halfspace intersection, Minkowski sums, inclusion.

Regions live in the nonnegative quadrant of the (R_A, R_B) plane, in bits per
use.  Vertices are stored canonically: counter-clockwise, starting from the
lexicographically smallest vertex, duplicates and collinear points removed, so
region equality is a vertex-list comparison.  Points and segments are valid
degenerate regions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from qmac.channels import KrausChannel
from qmac.infoq import (
    Ensemble,
    basis_ensemble,
    mac_mutual_informations,
    random_pure_ensemble,
)

__all__ = [
    "GEOM_TOL",
    "Halfspace",
    "RateRegion2D",
    "SamplingConfig",
    "convex_hull",
    "region_from_halfspaces",
    "minkowski_sum",
    "contains",
    "subset",
    "strict_subset",
    "hausdorff_distance",
    "pentagon_from_ensembles",
    "achievable_region",
    "known_region",
    "region_record",
]

GEOM_TOL = 1e-9
# Rates never approach this in any in-scope scenario; used to detect unboundedness.
_BOX = 64.0


@dataclass(frozen=True)
class Halfspace:
    """Constraint a*R_A + b*R_B <= c."""

    a: float
    b: float
    c: float

    def __post_init__(self):
        if self.a == 0.0 and self.b == 0.0:
            raise ValueError("halfspace normal must be nonzero")


def _dedup(points: np.ndarray) -> np.ndarray:
    order = np.lexsort((points[:, 1], points[:, 0]))
    pts = points[order]
    out = [pts[0]]
    for p in pts[1:]:
        if abs(p[0] - out[-1][0]) > GEOM_TOL or abs(p[1] - out[-1][1]) > GEOM_TOL:
            out.append(p)
    return np.array(out)


def _cross(o, a, b) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _line_distance(p, a, b) -> float:
    # Perpendicular distance of p from the line through a and b.
    base = math.hypot(b[0] - a[0], b[1] - a[1])
    if base < 1e-30:
        return math.hypot(p[0] - a[0], p[1] - a[1])
    return abs(_cross(a, b, p)) / base

def _hull_ccw(points: np.ndarray) -> np.ndarray:
    """Monotone-chain hull; CCW order starting at the lexicographically smallest point.

    The chain runs with exact sign tests so no genuinely extreme vertex is
    lost; vertices within GEOM_TOL of the line through their neighbours are
    then pruned, which makes region equality a vertex-list comparison.
    """
    pts = _dedup(points)
    if len(pts) <= 2:
        return pts
    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0.0:
            lower.pop()
        lower.append(p)
    for p in pts[::-1]:
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0.0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    # Tolerance cleanup: drop near-collinear vertices (distance, not raw cross,
    # so short edges cannot mask a genuine corner).
    changed = True
    while changed and len(hull) > 2:
        changed = False
        for i in range(len(hull)):
            prev_v = hull[i - 1]
            next_v = hull[(i + 1) % len(hull)]
            if _line_distance(hull[i], prev_v, next_v) <= GEOM_TOL:
                del hull[i]
                changed = True
                break
    hull = np.array(hull)
    if len(hull) == 2 and np.allclose(hull[0], hull[1], atol=GEOM_TOL):
        hull = hull[:1]
    if len(hull) > 2:
        start = int(np.lexsort((hull[:, 1], hull[:, 0]))[0])
        hull = np.roll(hull, -start, axis=0)
    return hull


@dataclass(frozen=True, eq=False)
class RateRegion2D:
    """Convex polygon of achievable rate pairs; construction canonicalizes."""

    vertices: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=float).reshape(-1, 2)
        if v.size == 0:
            raise ValueError("region needs at least one point")
        if v.min() < -GEOM_TOL:
            raise ValueError(f"rate point outside the nonnegative quadrant: {v.min():.3g}")
        v = np.maximum(v, 0.0)
        hull = _hull_ccw(v)
        hull.setflags(write=False)
        object.__setattr__(self, "vertices", hull)

    def area(self) -> float:
        """Shoelace area in bits^2 (zero for points and segments)."""
        v = self.vertices
        if len(v) < 3:
            return 0.0
        x, y = v[:, 0], v[:, 1]
        return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))

    def allclose(self, other: "RateRegion2D", atol: float = GEOM_TOL) -> bool:
        a, b = self.vertices, other.vertices
        return a.shape == b.shape and bool(np.allclose(a, b, atol=atol))


def convex_hull(points) -> RateRegion2D:
    """Canonical hull of a point collection (degenerate hulls allowed)."""
    return RateRegion2D(np.asarray(points, dtype=float))


def _clip(poly: list, a: float, b: float, c: float) -> list:
    # Sutherland-Hodgman clip of a polygon against a*x + b*y <= c.
    if not poly:
        return []
    out = []
    n = len(poly)
    vals = [a * p[0] + b * p[1] - c for p in poly]
    for i in range(n):
        p, q = poly[i], poly[(i + 1) % n]
        fp, fq = vals[i], vals[(i + 1) % n]
        inside_p, inside_q = fp <= 1e-12, fq <= 1e-12
        if inside_p:
            out.append(p)
        if inside_p != inside_q:
            t = fp / (fp - fq)
            out.append((p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])))
    return out


def region_from_halfspaces(halfspaces) -> RateRegion2D:
    """Intersection of halfspaces with the nonnegative quadrant.

    Raises if the intersection is empty or unbounded.
    """
    poly = [(0.0, 0.0), (_BOX, 0.0), (_BOX, _BOX), (0.0, _BOX)]
    for hs in halfspaces:
        if not isinstance(hs, Halfspace):
            hs = Halfspace(*hs)
        poly = _clip(poly, hs.a, hs.b, hs.c)
        if not poly:
            raise ValueError("halfspace intersection is empty")
    region = RateRegion2D(np.array(poly))
    if region.vertices.max() > _BOX - 1e-6:
        raise ValueError("halfspace intersection is unbounded")
    return region


def _edge_chain(region: RateRegion2D):
    # Start point and CCW edge vectors, starting from the bottommost-then-leftmost
    # vertex so edge angles increase monotonically within [0, 2*pi).
    v = region.vertices
    if len(v) == 1:
        return v[0], []
    start = int(np.lexsort((v[:, 0], v[:, 1]))[0])
    rot = np.roll(v, -start, axis=0)
    edges = np.diff(np.vstack([rot, rot[:1]]), axis=0)
    return rot[0], [e for e in edges]


def minkowski_sum(p: RateRegion2D, q: RateRegion2D) -> RateRegion2D:
    """Pointwise sum {u + v}: merge the CCW edge vectors of both polygons by angle."""
    start_p, edges_p = _edge_chain(p)
    start_q, edges_q = _edge_chain(q)

    def angle(e) -> float:
        a = math.atan2(e[1], e[0])
        return a + 2.0 * math.pi if a < 0 else a

    merged = []
    i = j = 0
    while i < len(edges_p) or j < len(edges_q):
        if i == len(edges_p):
            merged.append(edges_q[j]); j += 1
        elif j == len(edges_q):
            merged.append(edges_p[i]); i += 1
        else:
            ai, aj = angle(edges_p[i]), angle(edges_q[j])
            if abs(ai - aj) < 1e-12:
                merged.append(edges_p[i] + edges_q[j]); i += 1; j += 1
            elif ai < aj:
                merged.append(edges_p[i]); i += 1
            else:
                merged.append(edges_q[j]); j += 1

    point = np.asarray(start_p) + np.asarray(start_q)
    verts = [point.copy()]
    for e in merged[:-1]:
        point = point + e
        verts.append(point.copy())
    return RateRegion2D(np.array(verts))


def _segment_distance(pt, a, b) -> float:
    ab = b - a
    denom = float(ab @ ab)
    if denom < 1e-30:
        return float(np.linalg.norm(pt - a))
    t = float(np.clip((pt - a) @ ab / denom, 0.0, 1.0))
    return float(np.linalg.norm(pt - (a + t * ab)))


def _distance_to_region(pt: np.ndarray, r: RateRegion2D) -> float:
    v = r.vertices
    if len(v) == 1:
        return float(np.linalg.norm(pt - v[0]))
    if len(v) == 2:
        return _segment_distance(pt, v[0], v[1])
    inside = True
    best = np.inf
    for i in range(len(v)):
        a, b = v[i], v[(i + 1) % len(v)]
        if _cross(a, b, pt) < 0:
            inside = False
        best = min(best, _segment_distance(pt, a, b))
    return 0.0 if inside else best


def contains(r: RateRegion2D, pt, tol: float = GEOM_TOL) -> bool:
    """Point membership within tolerance ``tol`` (Euclidean, for degenerate regions too)."""
    return _distance_to_region(np.asarray(pt, dtype=float), r) <= tol


def subset(p: RateRegion2D, q: RateRegion2D, tol: float = GEOM_TOL) -> bool:
    """p is contained in q (within tolerance); vertices suffice by convexity."""
    return all(_distance_to_region(v, q) <= tol for v in p.vertices)


def strict_subset(
    p: RateRegion2D, q: RateRegion2D, tol: float = GEOM_TOL, margin: float = 1e-6
) -> bool:
    """p is contained in q and some vertex of q lies outside p by at least ``margin``."""
    if not subset(p, q, tol):
        return False
    return max(_distance_to_region(v, p) for v in q.vertices) >= margin


def hausdorff_distance(p: RateRegion2D, q: RateRegion2D) -> float:
    """Hausdorff distance between convex regions (attained at vertices)."""
    d_pq = max(_distance_to_region(v, q) for v in p.vertices)
    d_qp = max(_distance_to_region(v, p) for v in q.vertices)
    return max(d_pq, d_qp)


def pentagon_from_ensembles(
    ch: KrausChannel, alice: Ensemble, bob: Ensemble
) -> RateRegion2D:
    """Achievable region of one fixed ensemble pair (three rate bounds plus positivity)."""
    triple = mac_mutual_informations(ch, alice, bob)
    return region_from_halfspaces(
        [
            Halfspace(1.0, 0.0, max(triple.i_a_c_given_b, 0.0)),
            Halfspace(0.0, 1.0, max(triple.i_b_c_given_a, 0.0)),
            Halfspace(1.0, 1.0, max(triple.i_ab_c, 0.0)),
        ]
    )


@dataclass(frozen=True)
class SamplingConfig:
    """Ensemble-sampling budget for inner-bound region estimates."""

    samples: int = 64
    seed: int = 0

    def __post_init__(self):
        if self.samples < 0:
            raise ValueError("sample count must be nonnegative")
        if self.samples > 0 and self.seed is None:
            raise ValueError("seed required when sampling")


def _basis_subsets(dim: int):
    import itertools

    for size in range(1, dim + 1):
        yield from itertools.combinations(range(dim), size)


def achievable_region(ch: KrausChannel, cfg: SamplingConfig | None = None) -> RateRegion2D:
    """Sampled inner bound on the one-use region of a two-sender channel.

    Convex hull (time sharing) of the ensemble-pair regions over all uniform
    standard-basis sub-ensembles plus ``cfg.samples`` random ensemble pairs;
    always contains (0, 0).  The estimate grows monotonically with the sample
    count; whether it is tight for a given channel is not asserted.
    """
    cfg = cfg if cfg is not None else SamplingConfig()
    if len(ch.in_dims) != 2:
        raise ValueError("achievable_region expects a two-sender channel")
    da, db = ch.in_dims
    points = [(0.0, 0.0)]
    for sa in _basis_subsets(da):
        ens_a = basis_ensemble(da, sa)
        for sb in _basis_subsets(db):
            reg = pentagon_from_ensembles(ch, ens_a, basis_ensemble(db, sb))
            points.extend(reg.vertices)
    for k in range(cfg.samples):
        rng = np.random.default_rng(np.random.SeedSequence(entropy=cfg.seed, spawn_key=(k,)))
        reg = pentagon_from_ensembles(
            ch, random_pure_ensemble(da, da, rng), random_pure_ensemble(db, db, rng)
        )
        points.extend(reg.vertices)
    return convex_hull(points)


_KNOWN = {
    "phi1": [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)],
    "psi_id": [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)],
    "phi1_x_psi_id": [(0.0, 0.0), (3.0, 0.0), (1.0, 2.0), (0.0, 2.0)],
    "minkowski_phi1_psi_id": [(0.0, 0.0), (2.0, 0.0), (2.0, 1.0), (1.0, 2.0), (0.0, 2.0)],
}


def known_region(name: str) -> RateRegion2D:
    """Analytic region by name.

    ``phi1``: the fully noisy channel's triangle R_A + R_B <= 1.
    ``psi_id``: the ideal two-qubit channel's unit square.
    ``phi1_x_psi_id``: the joint-use region {R_A + R_B <= 3, R_B <= 2}.
    ``minkowski_phi1_psi_id``: the separate-use (Minkowski) sum of the first two.
    """
    try:
        verts = _KNOWN[name]
    except KeyError:
        raise ValueError(f"unknown region name {name!r}; expected one of {sorted(_KNOWN)}")
    return RateRegion2D(np.array(verts))


def region_record(name: str, region: RateRegion2D) -> dict:
    """JSON-friendly region record: {name, vertices, units}."""
    return {
        "name": name,
        "vertices": [[float(x), float(y)] for x, y in region.vertices],
        "units": "bits/use",
    }
