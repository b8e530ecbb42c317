"""High-precision twin of the Fenchel-Nielsen assembly.

Used as a fallback when the double-precision assembly cannot meet the
relator tolerance (ill-conditioned frames at short curves / large twists)
and as the arbitrary-precision oracle in the test suite. Matrices are
4-tuples of mpf; only the operations the assembly needs are implemented.
"""

from __future__ import annotations

import mpmath as mp

ASSEMBLY_DPS = 50


def _mul(f, g):
    fa, fb, fc, fd = f
    ga, gb, gc, gd = g
    return (fa * ga + fb * gc, fa * gb + fb * gd,
            fc * ga + fd * gc, fc * gb + fd * gd)


def _inv(f):
    a, b, c, d = f
    return (d, -b, -c, a)


def _conj(g, m):
    return _mul(_mul(g, m), _inv(g))


def _axis(f):
    """(attracting, repelling) fixed points; mp.inf marks infinity."""
    a, b, c, d = f
    if c == 0:
        finite = b / (d - a)
        return (mp.inf, finite) if abs(a) > abs(d) else (finite, mp.inf)
    disc = (a + d) ** 2 - 4
    root = mp.sqrt(disc)
    x1 = ((a - d) + root) / (2 * c)
    x2 = ((a - d) - root) / (2 * c)
    if (c * x1 + d) ** 2 > 1:
        return (x1, x2)
    return (x2, x1)


def _send_0inf(p, q):
    """Matrix sending 0 -> p, inf -> q."""
    if q == mp.inf:
        return (mp.mpf(1), p, mp.mpf(0), mp.mpf(1))
    if p == mp.inf:
        return (q, mp.mpf(-1), mp.mpf(1), mp.mpf(0))
    k = 1 / (q - p)
    return (q * k, p, k, mp.mpf(1))


def _frame(f):
    att, rep = _axis(f)
    return _send_0inf(rep, att)


def _normalize(f):
    a, b, c, d = f
    det = a * d - b * c
    s = 1 / mp.sqrt(det)
    return (a * s, b * s, c * s, d * s)


def _translate_along(f, t):
    phi = _normalize(_frame(f))
    e = mp.exp(t / 2)
    diag = (e, mp.mpf(0), mp.mpf(0), 1 / e)
    return _mul(_mul(phi, diag), _inv(phi))


def _match(src, dst):
    return _mul(_normalize(_frame(dst)), _inv(_normalize(_frame(src))))


def _pants_pair(l1, l2, l3, side):
    lam = mp.exp(l1 / 2)
    c2 = mp.cosh(l2 / 2)
    c3 = mp.cosh(l3 / 2)
    a = 2 * (c3 * lam + c2) / (lam * lam - 1)
    d = -2 * c2 - a
    w = mp.sqrt(1 - a * d)
    U = (-lam, mp.mpf(0), mp.mpf(0), -1 / lam)
    V = (a, side * w, -side * w, d)
    return U, V


def _torus_handle(l_core, l_boundary, twist, side):
    # boundary classes (U, V, (UV)^-1) with lengths (l_core, l_core, l_boundary)
    U, V = _pants_pair(l_core, l_core, l_boundary, side)
    A = U
    B = _mul(_match(_inv(U), V), _translate_along(U, twist))
    K = _mul(_mul(A, B), _mul(_inv(A), _inv(B)))
    return A, B, K


def _glue(target, source, twist):
    return _mul(_translate_along(target, twist), _match(source, target))


def assemble(genus: int, lengths, twists, torus_side=1.0, planar_side=1.0):
    """Generator images (dict letter -> mpf 4-tuple) of the chain assembly;
    mirrors the double-precision construction in the holonomy module."""
    with mp.workdps(ASSEMBLY_DPS):
        g = genus
        L = [mp.mpf(x) for x in lengths]
        T = [mp.mpf(x) for x in twists]
        la, ta = L[:g], T[:g]
        if g == 2:
            lh, th = [L[2], L[2]], [mp.mpf(0), T[2]]
            ls, ts = [], []
        else:
            lh, th = L[g:2 * g], T[g:2 * g]
            ls, ts = L[2 * g:], T[2 * g:]
        side = mp.mpf(torus_side)
        pside = mp.mpf(planar_side)

        tori = [_torus_handle(la[i], lh[i], ta[i], side) for i in range(g)]
        images = {}
        if g == 2:
            A1, B1, K1 = tori[0]
            images[1], images[2] = A1, B1
            G = _glue(_inv(K1), tori[1][2], th[1])
            images[3] = _conj(G, tori[1][0])
            images[4] = _conj(G, tori[1][1])
            # recenter on the separating curve (mirrors the float assembly)
            F = _inv(_normalize(_frame(K1)))
            images = {k: _conj(F, m) for k, m in images.items()}
        else:
            if g == 3:
                X1, Y1 = _pants_pair(lh[0], lh[1], lh[2], pside)
                C = [X1, Y1, _inv(_mul(X1, Y1))]
            else:
                X1, Y1 = _pants_pair(lh[0], lh[1], ls[0], pside)
                C = [X1, Y1]
                partial = _mul(X1, Y1)
                for j in range(2, g - 1):
                    third = ls[j - 1] if j < g - 2 else lh[g - 1]
                    Xj, Yj = _pants_pair(ls[j - 2], lh[j], third, pside)
                    Wj = _glue(partial, Xj, ts[j - 2])
                    Cj = _conj(Wj, Yj)
                    C.append(Cj)
                    partial = _mul(partial, Cj)
                C.append(_inv(partial))
            for i in range(g):
                A0, B0, K0 = tori[i]
                G = _glue(C[i], K0, th[i])
                images[2 * i + 1] = _conj(G, A0)
                images[2 * i + 2] = _conj(G, B0)
        return images


def assemble_floats(genus, lengths, twists, torus_side=1.0, planar_side=1.0):
    """Assembly rounded to double precision entries."""
    imgs = assemble(genus, lengths, twists, torus_side, planar_side)
    return {k: tuple(float(x) for x in v) for k, v in imgs.items()}


def trace_of_word(genus, lengths, twists, letters, dps=50,
                  torus_side=1.0, planar_side=1.0):
    """Trace of a word's holonomy computed end to end at high precision."""
    with mp.workdps(dps):
        imgs = assemble(genus, lengths, twists, torus_side, planar_side)
        out = (mp.mpf(1), mp.mpf(0), mp.mpf(0), mp.mpf(1))
        for x in letters:
            m = imgs[abs(x)]
            out = _mul(out, m if x > 0 else _inv(m))
        return out[0] + out[3]
