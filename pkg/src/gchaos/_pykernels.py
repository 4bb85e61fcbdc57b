"""Pure-Python exact kernels for packed piecewise-linear maps.

A *packed* map is a 4-tuple ``(tn, td, vn, vd)`` of equal-length tuples of
Python ints: breakpoint numerators and denominators, then value numerators
and denominators.  Every pair is in lowest terms with a positive
denominator, and breakpoints are strictly increasing.  Working on raw
integer pairs instead of :class:`fractions.Fraction` avoids the per-operation
object overhead, which dominates Cayley-ball scans.

``_ckernels.pyx`` is a compiled port of this module with an identical API;
``gchaos.kernels`` picks one at import time.
"""

from math import gcd

from .errors import CompositionError, ResourceCapError


def _norm(n, d):
    if d < 0:
        n, d = -n, -d
    g = gcd(n, d)
    if g != 1:
        n //= g
        d //= g
    return n, d


def _locate(tn, td, xn, xd):
    # index j with t_j <= x < t_{j+1}; last segment when x == t_k
    lo, hi = 0, len(tn) - 1
    while hi - lo > 1:
        mid = (lo + hi) >> 1
        if tn[mid] * xd <= xn * td[mid]:
            lo = mid
        else:
            hi = mid
    return lo


def _interp(tn, td, vn, vd, j, xn, xd):
    a = xn * td[j] - tn[j] * xd
    if a == 0:
        return vn[j], vd[j]
    # v_j + (v_{j+1} - v_j) * (x - t_j) / (t_{j+1} - t_j)
    dtn = tn[j + 1] * td[j] - tn[j] * td[j + 1]
    dtd = td[j] * td[j + 1]
    dvn = vn[j + 1] * vd[j] - vn[j] * vd[j + 1]
    dvd = vd[j] * vd[j + 1]
    b = xd * td[j]
    num = dvn * a * dtd
    den = dvd * b * dtn
    return _norm(vn[j] * den + num * vd[j], vd[j] * den)


def evaluate(P, xn, xd):
    """Exact value at ``xn/xd``, or ``None`` when the point is off-domain."""
    tn, td, vn, vd = P
    k = len(tn) - 1
    if xn * td[0] < tn[0] * xd or xn * td[k] > tn[k] * xd:
        return None
    return _interp(tn, td, vn, vd, _locate(tn, td, xn, xd), xn, xd)


def canonicalize(P):
    """Drop interior breakpoints whose neighbouring pieces are collinear."""
    tn, td, vn, vd = P
    k = len(tn)
    if k <= 2:
        return P
    otn, otd, ovn, ovd = [tn[0]], [td[0]], [vn[0]], [vd[0]]
    for j in range(1, k - 1):
        pn, pd, qn, qd = otn[-1], otd[-1], ovn[-1], ovd[-1]
        # slope(prev -> j) == slope(j -> j+1), compared by cross products
        dt1n = tn[j] * pd - pn * td[j]
        dt1d = pd * td[j]
        dv1n = vn[j] * qd - qn * vd[j]
        dv1d = qd * vd[j]
        dt2n = tn[j + 1] * td[j] - tn[j] * td[j + 1]
        dt2d = td[j] * td[j + 1]
        dv2n = vn[j + 1] * vd[j] - vn[j] * vd[j + 1]
        dv2d = vd[j] * vd[j + 1]
        if dv1n * dt1d * dv2d * dt2n != dv2n * dt2d * dv1d * dt1n:
            otn.append(tn[j])
            otd.append(td[j])
            ovn.append(vn[j])
            ovd.append(vd[j])
    otn.append(tn[-1])
    otd.append(td[-1])
    ovn.append(vn[-1])
    ovd.append(vd[-1])
    if len(otn) == k:
        return P
    return tuple(otn), tuple(otd), tuple(ovn), tuple(ovd)


def _bisect_right(tn, td, xn, xd):
    # first index with t > x
    lo, hi = 0, len(tn)
    while lo < hi:
        mid = (lo + hi) >> 1
        if tn[mid] * xd <= xn * td[mid]:
            lo = mid + 1
        else:
            hi = mid
    return lo


def _bisect_left(tn, td, xn, xd):
    # first index with t >= x
    lo, hi = 0, len(tn)
    while lo < hi:
        mid = (lo + hi) >> 1
        if tn[mid] * xd < xn * td[mid]:
            lo = mid + 1
        else:
            hi = mid
    return lo


def compose(outer, inner, cap):
    """Packed canonical form of ``outer o inner``.

    Raises :class:`CompositionError` when an inner value leaves the outer
    domain and :class:`ResourceCapError` when the raw result would carry
    more than ``cap`` breakpoints.
    """
    stn, std, svn, svd = outer
    itn, itd, ivn, ivd = inner
    m = len(stn) - 1
    k = len(itn) - 1
    s0n, s0d, smn, smd = stn[0], std[0], stn[m], std[m]
    for j in range(k + 1):
        if ivn[j] * s0d < s0n * ivd[j] or ivn[j] * smd > smn * ivd[j]:
            raise CompositionError(
                f"inner value {ivn[j]}/{ivd[j]} at breakpoint {itn[j]}/{itd[j]} "
                f"leaves outer domain [{s0n}/{s0d}, {smn}/{smd}]"
            )
    otn, otd, ovn, ovd = [], [], [], []
    for j in range(k):
        an, ad = ivn[j], ivd[j]
        bn, bd = ivn[j + 1], ivd[j + 1]
        jl = _locate(stn, std, an, ad)
        yn, yd = _interp(stn, std, svn, svd, jl, an, ad)
        otn.append(itn[j])
        otd.append(itd[j])
        ovn.append(yn)
        ovd.append(yd)
        c = an * bd - bn * ad
        if c == 0:
            continue
        if c < 0:
            lo = _bisect_right(stn, std, an, ad)
            hi = _bisect_left(stn, std, bn, bd)
            idx = range(lo, hi)
        else:
            lo = _bisect_right(stn, std, bn, bd)
            hi = _bisect_left(stn, std, an, ad)
            idx = range(hi - 1, lo - 1, -1)
        if not idx:
            continue
        t0n, t0d = itn[j], itd[j]
        dtn = itn[j + 1] * t0d - t0n * itd[j + 1]
        dtd = t0d * itd[j + 1]
        dvn = bn * ad - an * bd
        dvd = ad * bd
        for i in idx:
            # t = t_j + (s_i - v_j) * dt / dv
            en = stn[i] * ad - an * std[i]
            ed = std[i] * ad
            num = en * dtn * dvd
            den = ed * dtd * dvn
            pn, pd = _norm(t0n * den + num * t0d, t0d * den)
            otn.append(pn)
            otd.append(pd)
            ovn.append(svn[i])
            ovd.append(svd[i])
        if len(otn) > cap:
            raise ResourceCapError(f"composition exceeds breakpoint cap {cap}")
    an, ad = ivn[k], ivd[k]
    yn, yd = _interp(stn, std, svn, svd, _locate(stn, std, an, ad), an, ad)
    otn.append(itn[k])
    otd.append(itd[k])
    ovn.append(yn)
    ovd.append(yd)
    if len(otn) > cap:
        raise ResourceCapError(f"composition exceeds breakpoint cap {cap}")
    return canonicalize((tuple(otn), tuple(otd), tuple(ovn), tuple(ovd)))


def image(P, un, ud, wn, wd):
    """Exact ``(lo_n, lo_d, hi_n, hi_d)`` of the image of ``[u, w]``."""
    tn, td, vn, vd = P
    an, ad = _interp(tn, td, vn, vd, _locate(tn, td, un, ud), un, ud)
    bn, bd = _interp(tn, td, vn, vd, _locate(tn, td, wn, wd), wn, wd)
    if an * bd <= bn * ad:
        lon, lod, hin, hid = an, ad, bn, bd
    else:
        lon, lod, hin, hid = bn, bd, an, ad
    for j in range(_bisect_right(tn, td, un, ud), _bisect_left(tn, td, wn, wd)):
        n, d = vn[j], vd[j]
        if n * lod < lon * d:
            lon, lod = n, d
        elif n * hid > hin * d:
            hin, hid = n, d
    return lon, lod, hin, hid


def ball_extrema(maps, pn, pd, qn, qd):
    """Scan ``|g(p) - g(q)|`` over packed maps (``None`` = identity).

    Returns ``(min_n, min_d, min_index, max_n, max_d, max_index)``; the first
    index attaining each extremum wins, so callers pass maps in tie-break
    order.
    """
    best_lo_n = best_lo_d = best_hi_n = best_hi_d = None
    ilo = ihi = -1
    for i, P in enumerate(maps):
        if P is None:
            an, ad, bn, bd = pn, pd, qn, qd
        else:
            tn, td, vn, vd = P
            an, ad = _interp(tn, td, vn, vd, _locate(tn, td, pn, pd), pn, pd)
            bn, bd = _interp(tn, td, vn, vd, _locate(tn, td, qn, qd), qn, qd)
        dn = an * bd - bn * ad
        if dn < 0:
            dn = -dn
        dd = ad * bd
        if ilo < 0:
            best_lo_n = best_hi_n = dn
            best_lo_d = best_hi_d = dd
            ilo = ihi = i
            continue
        if dn * best_lo_d < best_lo_n * dd:
            best_lo_n, best_lo_d, ilo = dn, dd, i
        if dn * best_hi_d > best_hi_n * dd:
            best_hi_n, best_hi_d, ihi = dn, dd, i
    if ilo < 0:
        raise ValueError("empty map list")
    lo = _norm(best_lo_n, best_lo_d)
    hi = _norm(best_hi_n, best_hi_d)
    return lo[0], lo[1], ilo, hi[0], hi[1], ihi
