"""Geometric intersection numbers via axis linking over double cosets.

All computations happen in the frame of the first curve's axis (conjugate
the whole group so that axis becomes the imaginary axis, oriented upward).
A conjugate g.axis(v) links it iff its endpoints straddle 0, the crossing
height is sqrt(-x1*x2), and sliding by powers of u reduces the crossing
parameter mod the period length(u). Distinct double cosets <u>g<v>
correspond to distinct slid geodesics, so i(u, v) is the number of
distinct (parameter, endpoints) classes; self-intersections identify the
two branches through each double point by their unordered parameter pair.

Enumeration walks the Cayley ball breadth-first with a geometric prune:
every crossing lift has a representative whose orbit point lies within
d(o, axis v) + length(v)/2 of the axis segment, so nodes outside that tube
are dropped and the walk stops when the tube saturates. Counts are
compared at ball_radius and ball_radius + 1; disagreement raises
CutoffUnstable instead of returning a guess.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import CutoffUnstable, DegenerateConfiguration
from .holonomy import Representation, evaluate, geodesic_length
from .hypcore import (
    Isometry,
    axis,
    axis_frame,
    compose,
    mobius_sending_0inf,
    sinh_dist_to_geodesic,
    translation_length,
)
from .words import Word, canonical_class

_QUANT = 1e-9          # relative grid for matrix dedup keys
_SHARED_AXIS_TOL = 1e-8


@dataclass
class IntersectionConfig:
    """Enumeration parameters; the representation supplies the geometry but
    the resulting counts are topological (structure independence is part of
    the test suite, not an assumption)."""

    representation: Representation
    ball_radius: int | None = None
    tube_pad: float = 1.0       # widening of the collection tube
    bfs_slack: float = 2.0      # extra keep-width for BFS connectivity
    cluster_tol: float = 1e-6   # crossing records closer than this merge
    max_nodes: int = 2_000_000
    cache: dict = field(default_factory=dict)
    _enum_cache: dict = field(default_factory=dict)


@dataclass(frozen=True, slots=True)
class CrossingRecord:
    """One transverse crossing: parameters along each curve (mod the curve
    lengths) and the sign of the frame (tangent_u, tangent_v)."""

    s_u: float
    s_v: float
    sign: int


def _np_mul(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Row-wise 2x2 products of [N,4] (a,b,c,d) arrays."""
    a = A[:, 0] * B[:, 0] + A[:, 1] * B[:, 2]
    b = A[:, 0] * B[:, 1] + A[:, 1] * B[:, 3]
    c = A[:, 2] * B[:, 0] + A[:, 3] * B[:, 2]
    d = A[:, 2] * B[:, 1] + A[:, 3] * B[:, 3]
    return np.stack([a, b, c, d], axis=1)


def _np_keys(M: np.ndarray) -> np.ndarray:
    """Sign-normalized quantized integer keys for PSL dedup."""
    tr = M[:, 0] + M[:, 3]
    flip = (tr < 0) | ((tr == 0) & ((M[:, 0] < 0) |
                                    ((M[:, 0] == 0) & (M[:, 1] < 0))))
    N = np.where(flip[:, None], -M, M)
    scale = np.maximum(1.0, np.abs(N).max(axis=1))
    return np.round(N / (scale[:, None] * _QUANT)).astype(np.int64)


def _framed_images(R: Representation, frame: Isometry) -> np.ndarray:
    """Generator images and inverses conjugated into the frame, [2n, 4];
    row 2k is generator k+1, row 2k+1 its inverse."""
    inv = frame.inverse()
    rows = []
    n = R.presentation.generator_count
    for i in range(1, n + 1):
        m = compose(compose(inv, R.images[i]), frame)
        rows.append([m.a, m.b, m.c, m.d])
        rows.append([m.d, -m.b, -m.c, m.a])
    return np.array(rows, dtype=np.float64)


def _orbit_xy(M: np.ndarray):
    den = M[:, 2] ** 2 + M[:, 3] ** 2
    x = (M[:, 0] * M[:, 2] + M[:, 1] * M[:, 3]) / den
    y = 1.0 / den
    return x, y


def _enumerate_tube(gens: np.ndarray, depth: int, param_lo: float,
                    param_hi: float, keep_sinh: float, max_nodes: int):
    """Group elements of word length <= depth whose orbit point lies in the
    tube {sinh(dist to imaginary axis) <= keep_sinh, foot parameter within
    [param_lo, param_hi]}. Returns ([N,4] matrices, [N] first levels,
    saturated flag)."""
    start = np.array([[1.0, 0.0, 0.0, 1.0]])
    mats = [start]
    levels = [np.array([0])]
    seen = {tuple(k) for k in _np_keys(start)}
    frontier = start
    last = np.array([-1], dtype=np.int16)
    n_rows = gens.shape[0]
    total = 1
    saturated = True
    for level in range(1, depth + 1):
        if frontier.shape[0] == 0:
            break
        cand = []
        cand_last = []
        for j in range(n_rows):
            mask = last != (j ^ 1)  # no immediate backtracking
            if not mask.any():
                continue
            prod = _np_mul(frontier[mask],
                           np.broadcast_to(gens[j], (int(mask.sum()), 4)))
            cand.append(prod)
            cand_last.append(np.full(prod.shape[0], j, dtype=np.int16))
        if not cand:
            break
        M = np.concatenate(cand)
        L = np.concatenate(cand_last)
        x, y = _orbit_xy(M)
        r = 0.5 * np.log(x * x + y * y)
        keep = (np.abs(x) / y <= keep_sinh) & (r >= param_lo) & (r <= param_hi)
        M, L = M[keep], L[keep]
        if M.shape[0] == 0:
            break
        keys = _np_keys(M)
        fresh = np.ones(M.shape[0], dtype=bool)
        local: set = set()
        for i in range(M.shape[0]):
            k = tuple(keys[i])
            if k in seen or k in local:
                fresh[i] = False
            else:
                local.add(k)
        seen.update(local)
        M, L = M[fresh], L[fresh]
        if M.shape[0] == 0:
            break
        total += M.shape[0]
        if total > max_nodes:
            raise CutoffUnstable(
                f"enumeration exceeded {max_nodes} nodes at level {level}")
        mats.append(M)
        levels.append(np.full(M.shape[0], level))
        frontier = M
        last = L
        if level == depth:
            saturated = False  # frontier still alive at the cutoff
    return np.concatenate(mats), np.concatenate(levels), saturated


def _min_displacement(gens: np.ndarray) -> float:
    x, y = _orbit_xy(gens)
    d = np.arccosh(1.0 + (x * x + (y - 1.0) ** 2) / (2.0 * y))
    return float(max(1e-3, d.min()))


class _PairData:
    """Crossing lifts of v against the framed axis of u, deduplicated into
    double-coset clusters."""

    def __init__(self, cfg: IntersectionConfig, u: Word, v: Word,
                 radius: int | None = None):
        R = cfg.representation
        self.cfg = cfg
        U = evaluate(R, u)
        V = evaluate(R, v)
        self.ell_u = translation_length(U)
        self.ell_v = translation_length(V)
        F = axis_frame(U)
        self.F = F
        self.Vf = compose(compose(F.inverse(), V), F)
        av = axis(self.Vf)
        dv = math.asinh(sinh_dist_to_geodesic(1j, av.p, av.q))
        tube = math.ceil(dv + 0.5 * self.ell_v + cfg.tube_pad)
        gens = _framed_images(R, F)
        if radius is None:
            delta = _min_displacement(gens)
            geom = int(math.ceil(
                (self.ell_u + tube + cfg.bfs_slack) / delta)) + 2
            radius = max(2 * max(len(u.letters), len(v.letters)) + 2, geom)
        self.radius = radius
        ckey = (u.letters, tube)
        hit = cfg._enum_cache.get(ckey)
        if hit is not None and (hit[3] or hit[0] >= radius + 1):
            _, mats, levels, _ = hit
            sel = levels <= radius + 1
            mats, levels = mats[sel], levels[sel]
        else:
            lo = -(tube + cfg.bfs_slack)
            hi = self.ell_u + tube + cfg.bfs_slack
            keep_sinh = math.sinh(tube + cfg.bfs_slack)
            mats, levels, saturated = _enumerate_tube(
                gens, radius + 1, lo, hi, keep_sinh, cfg.max_nodes)
            cfg._enum_cache[ckey] = (radius + 1, mats, levels, saturated)
        Vrow = np.array([self.Vf.a, self.Vf.b, self.Vf.c, self.Vf.d])
        inv = np.stack([mats[:, 3], -mats[:, 1], -mats[:, 2], mats[:, 0]],
                       axis=1)
        W = _np_mul(_np_mul(mats, np.broadcast_to(Vrow, mats.shape)), inv)
        scale = np.abs(W).max(axis=1)
        b, c = W[:, 1], W[:, 2]
        shared = (np.abs(b) <= _SHARED_AXIS_TOL * scale) & \
                 (np.abs(c) <= _SHARED_AXIS_TOL * scale)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(shared | (c == 0.0), -1.0, b / c)
        linking = (ratio > 0.0) & ~shared
        self.shared_axis_found = bool(shared.any())
        idx = np.nonzero(linking)[0]
        s = 0.5 * np.log(ratio[idx])
        m = np.floor(s / self.ell_u)
        self.smod = s - m * self.ell_u
        x1, x2 = _axis_endpoints_np(W[idx])
        slide = np.exp(-m * self.ell_u)
        self.keys = np.stack([_bounded(x1 * slide), _bounded(x2 * slide)],
                             axis=1)
        self.levels = levels[idx]
        self.mats = mats[idx]
        self.slide_m = m

    def clusters(self, max_level: int):
        """Distinct crossing double cosets using lifts of word length up to
        max_level, as (parameter, endpoint keys, row index) tuples."""
        tol = self.cfg.cluster_tol
        sel = np.nonzero(self.levels <= max_level)[0]
        vals = sorted((self.smod[i], self.keys[i, 0], self.keys[i, 1], int(i))
                      for i in sel)
        reps: list = []
        for (s, k1, k2, i) in vals:
            dup = False
            for (s2, k12, k22, _) in reps:
                ds = abs(s - s2)
                ds = min(ds, self.ell_u - ds)
                if ds < tol and abs(k1 - k12) < tol and abs(k2 - k22) < tol:
                    dup = True
                    break
            if not dup:
                reps.append((s, k1, k2, i))
        return reps

    def stable_clusters(self):
        at_r = self.clusters(self.radius)
        at_r1 = self.clusters(self.radius + 1)
        if len(at_r) != len(at_r1):
            raise CutoffUnstable(
                f"{len(at_r)} crossings at radius {self.radius} but "
                f"{len(at_r1)} at {self.radius + 1}; increase ball_radius")
        return at_r1

    def record_for(self, cluster) -> CrossingRecord:
        """Parameters on both curves and the crossing sign for a cluster."""
        s, _, _, i = cluster
        M = Isometry.from_entries(*self.mats[i])
        z = complex(0.0, math.exp(s + self.slide_m[i] * self.ell_u))
        av = axis(self.Vf)
        frame_v = mobius_sending_0inf(av.q, av.p)
        w = frame_v.inverse().apply_interior(M.inverse().apply_interior(z))
        s_v = math.log(abs(w)) % self.ell_v
        Wm = compose(compose(M, self.Vf), M.inverse())
        aw = axis(Wm)
        center = 0.5 * (aw.p + aw.q)
        t = -1j * (z - center)
        if aw.p < center:
            t = -t
        sign = 1 if t.real < 0 else -1
        return CrossingRecord(s % self.ell_u, s_v, sign)


def _axis_endpoints_np(W: np.ndarray):
    """Stable fixed points of framed conjugates (vectorized); linking rows
    always have c != 0 and positive discriminant."""
    a, b, c, d = W[:, 0], W[:, 1], W[:, 2], W[:, 3]
    B = d - a
    disc = (a + d) ** 2 - 4.0
    root = np.sqrt(np.maximum(disc, 0.0))
    with np.errstate(divide="ignore", invalid="ignore"):
        qq = np.where(B != 0.0, -0.5 * (B + np.copysign(root, B)), 0.5 * root)
        x1 = qq / c
        x2 = -b / qq
    return x1, x2


def _bounded(x):
    return x / (1.0 + np.abs(x))


def intersection_number(cfg: IntersectionConfig, u: Word, v: Word) -> int:
    """Geometric intersection number of two primitive unoriented classes.

    Words that are conjugate in the surface group (possibly via the
    relation) share an axis; such pairs count as parallel copies of one
    curve, i.e. zero crossings, matching the weighted-multicurve model.
    """
    u = canonical_class(u)
    v = canonical_class(v)
    if u == v:
        return self_intersection(cfg, u)
    key = ("pair", u.letters, v.letters)
    if key in cfg.cache:
        return cfg.cache[key]
    data = _PairData(cfg, u, v, cfg.ball_radius)
    reps = data.stable_clusters()
    result = 0 if data.shared_axis_found else len(reps)
    cfg.cache[key] = result
    cfg.cache[("pair", v.letters, u.letters)] = result
    return result


def _self_pairs(cfg: IntersectionConfig, u: Word):
    """Clusters of self-crossing branches grouped into unordered parameter
    pairs; each double point appears once, whichever branch was found."""
    data = _PairData(cfg, u, u, cfg.ball_radius)
    reps = data.stable_clusters()
    tol = cfg.cluster_tol
    pairs: list[tuple[float, float, CrossingRecord]] = []
    for cl in reps:
        rec = data.record_for(cl)
        a, b = sorted((rec.s_u, rec.s_v))
        if abs(a - b) < tol or data.ell_u - abs(a - b) < tol:
            raise DegenerateConfiguration(
                f"self-crossing of {u} with coincident branch parameters")
        for (a2, b2, _) in pairs:
            if abs(a - a2) < tol and abs(b - b2) < tol:
                break
        else:
            pairs.append((a, b, rec))
    return pairs, data


def self_intersection(cfg: IntersectionConfig, u: Word) -> int:
    """Number of transverse double points of the primitive class u."""
    u = canonical_class(u)
    key = ("self", u.letters)
    if key in cfg.cache:
        return cfg.cache[key]
    pairs, _ = _self_pairs(cfg, u)
    result = len(pairs)
    cfg.cache[key] = result
    return result


def crossing_records(cfg: IntersectionConfig, u: Word, v: Word):
    """Crossings of distinct classes with parameters on both curves and
    signs (for the filling graph); raises on shared axes."""
    u_c = canonical_class(u)
    v_c = canonical_class(v)
    data = _PairData(cfg, u_c, v_c, cfg.ball_radius)
    reps = data.stable_clusters()
    if data.shared_axis_found:
        raise DegenerateConfiguration(
            f"{u_c} and {v_c} share a geodesic; merge the components")
    return [data.record_for(cl) for cl in reps]


def self_crossing_records(cfg: IntersectionConfig, u: Word):
    """Self-crossings as unordered parameter pairs along u with signs."""
    u_c = canonical_class(u)
    pairs, _ = _self_pairs(cfg, u_c)
    return [CrossingRecord(a, b, rec.sign) for (a, b, rec) in pairs]


def has_self_crossing(cfg: IntersectionConfig, u: Word,
                      quick_radius: int = 5) -> bool:
    """Sound fast rejector for the simple-class pool: any linking lift found
    at a shallow radius is a genuine crossing, so True is definitive; False
    only means "none found yet" and the caller must confirm with
    self_intersection."""
    u_c = canonical_class(u)
    data = _PairData(cfg, u_c, u_c, quick_radius)
    return len(data.smod) > 0


def are_geometrically_equal(cfg: IntersectionConfig, u: Word, v: Word) -> bool:
    """True when two canonical classes are conjugate through the surface
    relation: their holonomies share a translation length and some lift of
    v has the same axis as u (detected during enumeration)."""
    u_c = canonical_class(u)
    v_c = canonical_class(v)
    if u_c == v_c:
        return True
    R = cfg.representation
    lu = geodesic_length(R, u_c)
    lv = geodesic_length(R, v_c)
    if abs(lu - lv) > 1e-6 * max(1.0, lu):
        return False
    data = _PairData(cfg, u_c, v_c, cfg.ball_radius)
    return data.shared_axis_found


def flag_duplicate_classes(cfg: IntersectionConfig, classes):
    """Groups of classes that are geometrically identical (conjugate via
    the surface relation); free-group canonical forms cannot merge these,
    so they are reported for the caller to handle, never merged silently."""
    by_len: dict[int, list] = {}
    for w in classes:
        key = round(geodesic_length(cfg.representation, w) / 1e-7)
        by_len.setdefault(key, []).append(w)
    groups = []
    for key, ws in sorted(by_len.items()):
        if len(ws) < 2:
            continue
        rest = list(ws)
        while rest:
            head = rest.pop(0)
            group = [head]
            keep = []
            for w in rest:
                if are_geometrically_equal(cfg, head, w):
                    group.append(w)
                else:
                    keep.append(w)
            rest = keep
            if len(group) > 1:
                groups.append(group)
    return groups
