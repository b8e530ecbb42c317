"""2x2 real matrix kernel for PSL(2,R) acting on the upper half-plane.

Matrices are kept in SL(2,R) with determinant renormalized after every
product, and stored with nonnegative trace so that projective classes
have one representative. Boundary points of H live on R u {inf}; math.inf
is the tagged point at infinity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DegenerateConfiguration, NonPositiveLength, NotHyperbolic

EPS_DET = 1e-12
EPS_ELL = 1e-10      # hyperbolicity margin on |trace| - 2
EPS_SEP = 1e-9       # chordal separation below which endpoints coincide

INF = math.inf


@dataclass(frozen=True, slots=True)
class Isometry:
    """An element of PSL(2,R), normalized to det 1 and trace >= 0."""

    a: float
    b: float
    c: float
    d: float

    @staticmethod
    def _signed(a, b, c, d) -> "Isometry":
        # projective sign normalization only; det is trusted to be ~1
        tr = a + d
        if tr < 0.0 or (tr == 0.0 and (a < 0.0 or (a == 0.0 and b < 0.0))):
            a, b, c, d = -a, -b, -c, -d
        return Isometry(a, b, c, d)

    @staticmethod
    def from_entries(a, b, c, d):
        det = a * d - b * c
        if det <= 0.0 or not math.isfinite(det):
            raise ValueError(f"matrix determinant {det} is not positive")
        s = 1.0 / math.sqrt(det)
        return Isometry._signed(a * s, b * s, c * s, d * s)

    @property
    def trace(self):
        return self.a + self.d

    def inverse(self):
        # adjugate; det is 1 so no division needed
        return Isometry._signed(self.d, -self.b, -self.c, self.a)

    def __matmul__(self, other):
        return compose(self, other)

    def apply(self, x):
        """Mobius action on a boundary point of H (float or math.inf)."""
        if x is INF or x == INF or x == -INF:
            return self.a / self.c if self.c != 0.0 else INF
        num = self.a * x + self.b
        den = self.c * x + self.d
        if den == 0.0:
            return INF
        return num / den

    def apply_interior(self, z: complex) -> complex:
        """Mobius action on an interior point (Im z > 0)."""
        return (self.a * z + self.b) / (self.c * z + self.d)


IDENTITY = Isometry(1.0, 0.0, 0.0, 1.0)


@dataclass(frozen=True, slots=True)
class AxisEndpoints:
    """Attracting/repelling fixed points of a hyperbolic isometry."""

    p: float  # attracting
    q: float  # repelling


_RENORM_SCALE = 3e3  # below this entry scale a*d - b*c still carries ~7 digits


def compose(f: Isometry, g: Isometry) -> Isometry:
    a = f.a * g.a + f.b * g.c
    b = f.a * g.b + f.b * g.d
    c = f.c * g.a + f.d * g.c
    d = f.c * g.b + f.d * g.d
    # renormalize the determinant only while it is numerically observable;
    # for large entries the product determinant is exactly 1 up to relative
    # entry error and recomputing it would only inject cancellation noise
    if max(abs(a), abs(b), abs(c), abs(d)) < _RENORM_SCALE:
        det = a * d - b * c
        s = 1.0 / math.sqrt(det)
        a, b, c, d = a * s, b * s, c * s, d * s
    return Isometry._signed(a, b, c, d)


def is_hyperbolic(f: Isometry) -> bool:
    return abs(f.trace) > 2.0 + EPS_ELL


def translation_length(f: Isometry) -> float:
    """Length of the closed geodesic with holonomy f: 2*arccosh(|tr|/2)."""
    t = abs(f.trace)
    if t <= 2.0 + EPS_ELL:
        raise NotHyperbolic(f"|trace| = {t} is not > 2 + {EPS_ELL}")
    return 2.0 * math.acosh(t / 2.0)


def axis(f: Isometry) -> AxisEndpoints:
    """Fixed points on the boundary, ordered (attracting, repelling).

    Roots of c*x^2 + (d-a)*x - b = 0; when c = 0 one fixed point is inf.
    """
    if not is_hyperbolic(f):
        raise NotHyperbolic(f"|trace| = {abs(f.trace)} is not > 2 + {EPS_ELL}")
    a, b, c, d = f.a, f.b, f.c, f.d
    if c == 0.0:
        finite = b / (d - a)  # a != d since |a + d| > 2 and ad = 1
        # derivative at the finite point is (a/d) = a^2; |a| > 1 means inf attracts
        if abs(a) > abs(d):
            return AxisEndpoints(INF, finite)
        return AxisEndpoints(finite, INF)
    # stable roots of c*x^2 + (d-a)*x - b = 0 (avoid cancellation in the
    # classic formula when |a - d| ~ sqrt(disc))
    B = d - a
    disc = (a + d) ** 2 - 4.0
    root = math.sqrt(disc)
    qq = -0.5 * (B + math.copysign(root, B)) if B != 0.0 else 0.5 * root
    x1 = qq / c
    x2 = -b / qq
    # attracting fixed point has |f'(x)| = 1/(cx+d)^2 < 1
    if (c * x1 + d) ** 2 > 1.0:
        return AxisEndpoints(x1, x2)
    return AxisEndpoints(x2, x1)


def chordal(x, y) -> float:
    """Chordal distance on the boundary circle (stereographic chord length)."""
    xinf = x is INF or x == INF or x == -INF
    yinf = y is INF or y == INF or y == -INF
    if xinf and yinf:
        return 0.0
    if xinf:
        return 2.0 / math.sqrt(1.0 + y * y)
    if yinf:
        return 2.0 / math.sqrt(1.0 + x * x)
    return 2.0 * abs(x - y) / (math.sqrt(1.0 + x * x) * math.sqrt(1.0 + y * y))


def _circ_key(x) -> float:
    # order points along R with the point at infinity greatest (either sign)
    return INF if (x is INF or x == INF or x == -INF) else x


def axes_link(A: AxisEndpoints, B: AxisEndpoints) -> bool:
    """True iff the two geodesics cross, i.e. endpoint pairs alternate on dH."""
    pts = [(A.p, 0), (A.q, 0), (B.p, 1), (B.q, 1)]
    for i in range(4):
        for j in range(i + 1, 4):
            if chordal(pts[i][0], pts[j][0]) < EPS_SEP:
                raise DegenerateConfiguration(
                    f"endpoints {pts[i][0]} and {pts[j][0]} coincide within {EPS_SEP}"
                )
    order = sorted(pts, key=lambda t: _circ_key(t[0]))
    labels = [lab for _, lab in order]
    # alternation (ABAB/BABA in circular order) survives the linear cut
    return labels[0] != labels[1] and labels[1] != labels[2]


def collar_width(length: float) -> float:
    """Half-width of the embedded collar around a geodesic of this length."""
    if length <= 0.0:
        raise NonPositiveLength(f"length {length} must be positive")
    return math.asinh(1.0 / math.sinh(length / 2.0))


# ---------------------------------------------------------------------------
# Frames and flows along axes (plumbing for holonomy construction and
# crossing-parameter bookkeeping).
# ---------------------------------------------------------------------------


def mobius_sending_0inf(p, q) -> Isometry:
    """Isometry sending 0 -> p and inf -> q (p, q distinct boundary points)."""
    pinf = p is INF or p == INF
    qinf = q is INF or q == INF
    if pinf and qinf:
        raise ValueError("p and q must be distinct")
    if qinf:
        return Isometry.from_entries(1.0, p, 0.0, 1.0)
    if pinf:
        return Isometry.from_entries(q, -1.0, 1.0, 0.0)
    return Isometry.from_entries(q, p * (q - p), 1.0, (q - p))


def axis_frame(f: Isometry) -> Isometry:
    """Frame phi with phi(0) = repelling, phi(inf) = attracting fixed point.

    phi^-1 f phi is then the diagonal translation by the length of f, moving
    upward along the imaginary axis.
    """
    ends = axis(f)
    return mobius_sending_0inf(ends.q, ends.p)


def translate_along(f: Isometry, t: float) -> Isometry:
    """Translation by signed distance t along the axis of f, toward its
    attracting endpoint; t equal to the length of f reproduces f."""
    phi = axis_frame(f)
    e = math.exp(t / 2.0)
    return compose(compose(phi, Isometry.from_entries(e, 0.0, 0.0, 1.0 / e)), phi.inverse())


def conjugate_to_match(src: Isometry, dst: Isometry) -> Isometry:
    """A map h with h src h^-1 = dst, valid when both are hyperbolic with
    equal translation lengths; h carries axis to axis, direction to direction."""
    return compose(axis_frame(dst), axis_frame(src).inverse())


# ---------------------------------------------------------------------------
# Interior-point metrics (upper half-plane, complex coordinates).
# ---------------------------------------------------------------------------

BASEPOINT = 1j


def cosh_dist(z: complex, w: complex) -> float:
    return 1.0 + abs(z - w) ** 2 / (2.0 * z.imag * w.imag)


def dist(z: complex, w: complex) -> float:
    return math.acosh(max(1.0, cosh_dist(z, w)))


def sinh_dist_to_geodesic(z: complex, p, q) -> float:
    """sinh of the distance from z to the geodesic with endpoints p, q."""
    pinf = p is INF or p == INF
    qinf = q is INF or q == INF
    if pinf and qinf:
        raise ValueError("geodesic endpoints coincide at infinity")
    if pinf or qinf:
        x = q if pinf else p
        return abs(z.real - x) / z.imag
    c = 0.5 * (p + q)
    r = 0.5 * abs(p - q)
    if r == 0.0:
        raise ValueError("geodesic endpoints coincide")
    return abs(abs(z - c) ** 2 - r * r) / (2.0 * r * z.imag)


def foot_parameter(frame: Isometry, endpoints) -> float:
    """Crossing parameter along a framed axis.

    frame maps 0 -> repelling, inf -> attracting of the base axis; a geodesic
    linking that axis pulls back to endpoints x1 < 0 < x2, and crosses the
    imaginary axis at height sqrt(-x1*x2), i.e. at parameter log of that.
    """
    inv = frame.inverse()
    x1 = inv.apply(endpoints.p)
    x2 = inv.apply(endpoints.q)
    if (x1 is INF or x1 == INF) or (x2 is INF or x2 == INF):
        raise DegenerateConfiguration("pulled-back endpoint at infinity")
    prod = -x1 * x2
    if prod <= 0.0:
        raise DegenerateConfiguration("geodesic does not cross the framed axis")
    return 0.5 * math.log(prod)
