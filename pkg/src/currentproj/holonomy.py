"""Fuchsian representations from Fenchel-Nielsen coordinates.

A genus-g surface is assembled from one-holed-torus groups (one per
handle) glued along a chain of planar pants (for genus 2 the two tori are
glued directly). Each pair of pants is realized by two generators with
prescribed boundary traces -2cosh(l/2); gluings are axis-to-axis
conjugations composed with a translation along the gluing axis, whose
signed distance is the twist coordinate. A full twist (t increased by the
curve length) reproduces the Dehn twist on the marking, which pins the
twist normalization used throughout.

Coordinate order: lengths/twists are indexed by the pants curves of the
presentation: handle cores a_1..a_g first, then handle boundaries (for
genus 2 the single separating curve), then chain curves for genus >= 4.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConstructionFailure, NotHyperbolic, OutOfRange
from .hypcore import (
    IDENTITY,
    Isometry,
    axis_frame,
    compose,
    conjugate_to_match,
    translate_along,
    translation_length,
)
from .words import SurfacePresentation, Word

LENGTH_MIN = 1e-4
LENGTH_MAX = 50.0
RELATOR_TOL = 1e-8
ROUNDTRIP_TOL = 1e-8

# Side conventions for the pants assemblies, fixed once by the discreteness
# diagnostics (no elliptic short words, fundamental domain area 2*pi*|chi|).
_TORUS_SIDE = 1.0
_PLANAR_SIDE = 1.0


@dataclass(frozen=True, slots=True)
class FNCoordinates:
    """Fenchel-Nielsen coordinates: 3g-3 lengths (positive) and twists."""

    lengths: tuple[float, ...]
    twists: tuple[float, ...]

    def __post_init__(self):
        if len(self.lengths) != len(self.twists):
            raise ValueError("lengths and twists must have equal size")

    @property
    def size(self) -> int:
        return len(self.lengths)

    def validate(self):
        for l in self.lengths:
            if not (LENGTH_MIN < l < LENGTH_MAX):
                raise OutOfRange(
                    f"length {l} outside ({LENGTH_MIN}, {LENGTH_MAX})")
        for t in self.twists:
            if not math.isfinite(t):
                raise OutOfRange(f"twist {t} is not finite")

    def flat(self) -> list[float]:
        """Serialized form [l1..ln, t1..tn]."""
        return list(self.lengths) + list(self.twists)

    @staticmethod
    def from_flat(values) -> "FNCoordinates":
        values = list(values)
        if len(values) % 2 != 0:
            raise ValueError("flat FN array must have even length")
        n = len(values) // 2
        return FNCoordinates(tuple(values[:n]), tuple(values[n:]))

    def shifted_twist(self, index: int, delta: float) -> "FNCoordinates":
        twists = list(self.twists)
        twists[index] += delta
        return FNCoordinates(self.lengths, tuple(twists))


def _pants_pair(l1: float, l2: float, l3: float, side: float):
    """Generators (U, V) of a pants group with boundary classes U, V and
    (UV)^-1 of lengths l1, l2, l3 (traces -2cosh(l/2) before projective
    normalization). side flips which half-plane the V-axis occupies."""
    lam = math.exp(l1 / 2.0)
    c2 = math.cosh(l2 / 2.0)
    c3 = math.cosh(l3 / 2.0)
    a = 2.0 * (c3 * lam + c2) / (lam * lam - 1.0)
    d = -2.0 * c2 - a
    w = math.sqrt(1.0 - a * d)
    U = Isometry.from_entries(-lam, 0.0, 0.0, -1.0 / lam)
    V = Isometry.from_entries(a, side * w, -side * w, d)
    return U, V


def _torus_handle(l_core: float, l_boundary: float, twist: float, side: float):
    """One-holed torus group: (A, B, K) with K = [A, B] of length
    l_boundary, A the handle core of length l_core; twist slides B along
    the axis of A."""
    U, V = _pants_pair(l_core, l_core, l_boundary, side)
    A = U
    B = compose(conjugate_to_match(U.inverse(), V), translate_along(U, twist))
    K = compose(compose(A, B), compose(A.inverse(), B.inverse()))
    return A, B, K


def _glue(target: Isometry, source: Isometry, twist: float) -> Isometry:
    """Conjugator G with G source G^-1 = target (equal lengths), composed
    with the twist translation along the target's axis."""
    return compose(translate_along(target, twist), conjugate_to_match(source, target))


def _build_images(P: SurfacePresentation, X: FNCoordinates) -> dict[int, Isometry]:
    g = P.genus
    la = X.lengths[:g]
    ta = X.twists[:g]
    if g == 2:
        lh = (X.lengths[2], X.lengths[2])
        th = (0.0, X.twists[2])
    else:
        lh = X.lengths[g:2 * g]
        th = X.twists[g:2 * g]
        ls = X.lengths[2 * g:]
        ts = X.twists[2 * g:]

    tori = [
        _torus_handle(la[i], lh[i], ta[i], _TORUS_SIDE) for i in range(g)
    ]

    images: dict[int, Isometry] = {}
    if g == 2:
        A1, B1, K1 = tori[0]
        images[1], images[2] = A1, B1
        G = _glue(K1.inverse(), tori[1][2], th[1])
        images[3] = compose(compose(G, tori[1][0]), G.inverse())
        images[4] = compose(compose(G, tori[1][1]), G.inverse())
        # recenter on the separating curve: both handles then sit at
        # comparable distance from the basepoint, which keeps entry norms
        # (and the relator's cancellation floor) small
        F = axis_frame(K1).inverse()
        Fi = F.inverse()
        return {k: compose(compose(F, m), Fi) for k, m in images.items()}

    # planar chain: boundary holonomies C_1..C_g with product identity
    C: list[Isometry] = []
    if g == 3:
        X1, Y1 = _pants_pair(lh[0], lh[1], lh[2], _PLANAR_SIDE)
        C = [X1, Y1, compose(X1, Y1).inverse()]
    else:
        X1, Y1 = _pants_pair(lh[0], lh[1], ls[0], _PLANAR_SIDE)
        C = [X1, Y1]
        partial = compose(X1, Y1)  # holonomy of the chain curve s_2
        for j in range(2, g - 1):
            third = ls[j - 1] if j < g - 2 else lh[g - 1]
            Xj, Yj = _pants_pair(ls[j - 2], lh[j], third, _PLANAR_SIDE)
            W = _glue(partial, Xj, ts[j - 2])
            Cj = compose(compose(W, Yj), W.inverse())
            C.append(Cj)
            partial = compose(partial, Cj)
        C.append(partial.inverse())

    for i in range(g):
        A0, B0, K0 = tori[i]
        G = _glue(C[i], K0, th[i])
        images[2 * i + 1] = compose(compose(G, A0), G.inverse())
        images[2 * i + 2] = compose(compose(G, B0), G.inverse())
    return images


@dataclass(frozen=True)
class Representation:
    """Holonomy of a marked hyperbolic structure: generator images of the
    surface group presentation at a Fenchel-Nielsen point."""

    images: dict[int, Isometry]
    presentation: SurfacePresentation
    source_fn: FNCoordinates

    def __call__(self, w: Word) -> Isometry:
        return evaluate(self, w)


def evaluate(R: Representation, w: Word) -> Isometry:
    """Image of a (reduced) word: product of generator images."""
    out = IDENTITY
    for x in w.letters:
        m = R.images[abs(x)]
        out = compose(out, m if x > 0 else m.inverse())
    return out


def geodesic_length(R: Representation, w: Word) -> float:
    """Length of the closed geodesic in the class of w."""
    if len(w.letters) == 0:
        raise NotHyperbolic("empty word has no geodesic representative")
    return translation_length(evaluate(R, w))


def _norm(m: Isometry) -> float:
    return max(abs(m.a), abs(m.b), abs(m.c), abs(m.d))


def _word_floor(R: Representation, w: Word):
    """Evaluate a word together with the conditioning floor of the product:
    rounding exact factors to doubles perturbs the result by about
    eps * max_k |prefix_k| * |factor_k ... factor_n|, which bounds what any
    double-precision residual check can certify."""
    mats = [R.images[abs(x)] if x > 0 else R.images[abs(x)].inverse()
            for x in w.letters]
    n = len(mats)
    suffix_norms = [1.0] * (n + 1)
    acc = IDENTITY
    for k in range(n - 1, -1, -1):
        acc = compose(mats[k], acc)
        suffix_norms[k] = _norm(acc)
    out = IDENTITY
    floor = 1.0
    for k, m in enumerate(mats):
        floor = max(floor, _norm(out) * _norm(m) * suffix_norms[k + 1])
        out = compose(out, m)
    return out, floor


def _validate(R: Representation, use_floor: bool = True):
    """Check the relator and pants-length invariants.

    With use_floor=False the hard desk-scale tolerances apply; otherwise
    they relax to the conditioning floor of the double-precision product,
    which is all a float residual can certify once entries grow.
    """
    M, floor = _word_floor(R, R.presentation.relator)
    tol = max(RELATOR_TOL, 5e-15 * floor) if use_floor else RELATOR_TOL
    res = max(abs(M.a - 1.0), abs(M.b), abs(M.c), abs(M.d - 1.0))
    if res > tol:
        raise ConstructionFailure(f"relator residual {res:.3e} exceeds {tol:.3e}")
    for i, curve in enumerate(R.presentation.pants_curves):
        want = R.source_fn.lengths[i]
        Mi, floor_i = _word_floor(R, curve)
        got = translation_length(Mi)
        sens = 2.0 / max(1e-3, math.sinh(want / 2.0))  # d length / d trace
        base = ROUNDTRIP_TOL * max(1.0, want)
        tol_i = max(base, 5e-15 * floor_i * sens) if use_floor else base
        if abs(got - want) > tol_i:
            raise ConstructionFailure(
                f"pants curve {i} length {got} != coordinate {want}")


def build_representation(P: SurfacePresentation, X: FNCoordinates,
                         strict: bool = True) -> Representation:
    """Discrete faithful representation at X; deterministic in X.

    The double-precision assembly is used when it meets the validation
    tolerances; otherwise (ill-conditioned frames at short curves or large
    twists) the images are reassembled in extended precision and rounded.
    With strict=False the fallback is skipped and only the evaluation-floor
    tolerance is enforced, for optimizer iterates that deliberately walk
    toward degenerate coordinates.

    Raises OutOfRange for coordinates outside the supported box and
    ConstructionFailure if even the reassembled matrices fail the relator
    or pants-length checks (which indicates a bug, not bad input).
    """
    if X.size != 3 * P.genus - 3:
        raise OutOfRange(
            f"expected {3 * P.genus - 3} length/twist pairs, got {X.size}")
    X.validate()
    images = _build_images(P, X)
    R = Representation(images, P, X)
    if not strict:
        _validate(R)  # floor tolerance: catches bugs, tolerates conditioning
        return R
    try:
        _validate(R, use_floor=False)
        return R
    except ConstructionFailure:
        pass
    from . import _mpassembly

    raw = _mpassembly.assemble_floats(P.genus, X.lengths, X.twists,
                                      _TORUS_SIDE, _PLANAR_SIDE)
    images = {k: Isometry.from_entries(*v) for k, v in raw.items()}
    R = Representation(images, P, X)
    _validate(R)
    return R
