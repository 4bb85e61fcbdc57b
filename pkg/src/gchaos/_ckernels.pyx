# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=False
"""Compiled exact kernels for packed piecewise-linear maps.

Line-for-line port of ``_pykernels``; see that module for the packed layout.
Integers stay arbitrary-precision Python ints, the speedup comes from typed
loop indices and direct C-API dispatch of the integer arithmetic.
"""

from math import gcd

from gchaos.errors import CompositionError, ResourceCapError


cdef inline tuple _norm(object n, object d):
    cdef object g
    if d < 0:
        n = -n
        d = -d
    g = gcd(n, d)
    if g != 1:
        n = n // g
        d = d // g
    return (n, d)


cdef inline Py_ssize_t _locate(tuple tn, tuple td, object xn, object xd):
    cdef Py_ssize_t lo = 0, hi = len(tn) - 1, mid
    while hi - lo > 1:
        mid = (lo + hi) >> 1
        if tn[mid] * xd <= xn * td[mid]:
            lo = mid
        else:
            hi = mid
    return lo


cdef tuple _interp(tuple tn, tuple td, tuple vn, tuple vd, Py_ssize_t j,
                   object xn, object xd):
    cdef object a, dtn, dtd, dvn, dvd, b, num, den, v0n, v0d
    a = xn * td[j] - tn[j] * xd
    if a == 0:
        return (vn[j], vd[j])
    dtn = tn[j + 1] * td[j] - tn[j] * td[j + 1]
    dtd = td[j] * td[j + 1]
    v0n = vn[j]
    v0d = vd[j]
    dvn = vn[j + 1] * v0d - v0n * vd[j + 1]
    dvd = v0d * vd[j + 1]
    b = xd * td[j]
    num = dvn * a * dtd
    den = dvd * b * dtn
    return _norm(v0n * den + num * v0d, v0d * den)


def evaluate(tuple P, object xn, object xd):
    cdef tuple tn = P[0], td = P[1], vn = P[2], vd = P[3]
    cdef Py_ssize_t k = len(tn) - 1
    if xn * td[0] < tn[0] * xd or xn * td[k] > tn[k] * xd:
        return None
    return _interp(tn, td, vn, vd, _locate(tn, td, xn, xd), xn, xd)


def canonicalize(tuple P):
    cdef tuple tn = P[0], td = P[1], vn = P[2], vd = P[3]
    cdef Py_ssize_t k = len(tn), j
    cdef list otn, otd, ovn, ovd
    cdef object pn, pd, qn, qd, dt1n, dt1d, dv1n, dv1d, dt2n, dt2d, dv2n, dv2d
    if k <= 2:
        return P
    otn = [tn[0]]
    otd = [td[0]]
    ovn = [vn[0]]
    ovd = [vd[0]]
    for j in range(1, k - 1):
        pn = otn[len(otn) - 1]
        pd = otd[len(otd) - 1]
        qn = ovn[len(ovn) - 1]
        qd = ovd[len(ovd) - 1]
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
    otn.append(tn[k - 1])
    otd.append(td[k - 1])
    ovn.append(vn[k - 1])
    ovd.append(vd[k - 1])
    if len(otn) == k:
        return P
    return (tuple(otn), tuple(otd), tuple(ovn), tuple(ovd))


cdef inline Py_ssize_t _bisect_right(tuple tn, tuple td, object xn, object xd):
    cdef Py_ssize_t lo = 0, hi = len(tn), mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if tn[mid] * xd <= xn * td[mid]:
            lo = mid + 1
        else:
            hi = mid
    return lo


cdef inline Py_ssize_t _bisect_left(tuple tn, tuple td, object xn, object xd):
    cdef Py_ssize_t lo = 0, hi = len(tn), mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if tn[mid] * xd < xn * td[mid]:
            lo = mid + 1
        else:
            hi = mid
    return lo


def compose(tuple outer, tuple inner, Py_ssize_t cap):
    cdef tuple stn = outer[0], std = outer[1], svn = outer[2], svd = outer[3]
    cdef tuple itn = inner[0], itd = inner[1], ivn = inner[2], ivd = inner[3]
    cdef Py_ssize_t m = len(stn) - 1, k = len(itn) - 1, j, i, lo, hi, step
    cdef object s0n = stn[0], s0d = std[0], smn = stn[m], smd = std[m]
    cdef object an, ad, bn, bd, yn, yd, c, t0n, t0d, dtn, dtd, dvn, dvd
    cdef object en, ed, num, den
    cdef tuple r
    cdef list otn = [], otd = [], ovn = [], ovd = []
    for j in range(k + 1):
        if ivn[j] * s0d < s0n * ivd[j] or ivn[j] * smd > smn * ivd[j]:
            raise CompositionError(
                f"inner value {ivn[j]}/{ivd[j]} at breakpoint {itn[j]}/{itd[j]} "
                f"leaves outer domain [{s0n}/{s0d}, {smn}/{smd}]"
            )
    for j in range(k):
        an = ivn[j]
        ad = ivd[j]
        bn = ivn[j + 1]
        bd = ivd[j + 1]
        r = _interp(stn, std, svn, svd, _locate(stn, std, an, ad), an, ad)
        otn.append(itn[j])
        otd.append(itd[j])
        ovn.append(r[0])
        ovd.append(r[1])
        c = an * bd - bn * ad
        if c == 0:
            continue
        if c < 0:
            lo = _bisect_right(stn, std, an, ad)
            hi = _bisect_left(stn, std, bn, bd)
            step = 1
            if lo >= hi:
                continue
        else:
            lo = _bisect_right(stn, std, bn, bd)
            hi = _bisect_left(stn, std, an, ad)
            if lo >= hi:
                continue
            lo, hi = hi - 1, lo - 1
            step = -1
        t0n = itn[j]
        t0d = itd[j]
        dtn = itn[j + 1] * t0d - t0n * itd[j + 1]
        dtd = t0d * itd[j + 1]
        dvn = bn * ad - an * bd
        dvd = ad * bd
        i = lo
        while i != hi:
            en = stn[i] * ad - an * std[i]
            ed = std[i] * ad
            num = en * dtn * dvd
            den = ed * dtd * dvn
            r = _norm(t0n * den + num * t0d, t0d * den)
            otn.append(r[0])
            otd.append(r[1])
            ovn.append(svn[i])
            ovd.append(svd[i])
            i += step
        if len(otn) > cap:
            raise ResourceCapError(f"composition exceeds breakpoint cap {cap}")
    an = ivn[k]
    ad = ivd[k]
    r = _interp(stn, std, svn, svd, _locate(stn, std, an, ad), an, ad)
    otn.append(itn[k])
    otd.append(itd[k])
    ovn.append(r[0])
    ovd.append(r[1])
    if len(otn) > cap:
        raise ResourceCapError(f"composition exceeds breakpoint cap {cap}")
    return canonicalize((tuple(otn), tuple(otd), tuple(ovn), tuple(ovd)))


def image(tuple P, object un, object ud, object wn, object wd):
    cdef tuple tn = P[0], td = P[1], vn = P[2], vd = P[3]
    cdef tuple a, b
    cdef object lon, lod, hin, hid, n, d
    cdef Py_ssize_t j
    a = _interp(tn, td, vn, vd, _locate(tn, td, un, ud), un, ud)
    b = _interp(tn, td, vn, vd, _locate(tn, td, wn, wd), wn, wd)
    if a[0] * b[1] <= b[0] * a[1]:
        lon, lod, hin, hid = a[0], a[1], b[0], b[1]
    else:
        lon, lod, hin, hid = b[0], b[1], a[0], a[1]
    for j in range(_bisect_right(tn, td, un, ud), _bisect_left(tn, td, wn, wd)):
        n = vn[j]
        d = vd[j]
        if n * lod < lon * d:
            lon = n
            lod = d
        elif n * hid > hin * d:
            hin = n
            hid = d
    return lon, lod, hin, hid


def ball_extrema(list maps, object pn, object pd, object qn, object qd):
    cdef object lo_n = None, lo_d = None, hi_n = None, hi_d = None
    cdef object an, ad, bn, bd, dn, dd, P
    cdef tuple tn, td, vn, vd, ra, rb, lo, hi
    cdef Py_ssize_t i, n = len(maps), ilo = -1, ihi = -1
    for i in range(n):
        P = maps[i]
        if P is None:
            an = pn
            ad = pd
            bn = qn
            bd = qd
        else:
            tn = (<tuple>P)[0]
            td = (<tuple>P)[1]
            vn = (<tuple>P)[2]
            vd = (<tuple>P)[3]
            ra = _interp(tn, td, vn, vd, _locate(tn, td, pn, pd), pn, pd)
            rb = _interp(tn, td, vn, vd, _locate(tn, td, qn, qd), qn, qd)
            an = ra[0]
            ad = ra[1]
            bn = rb[0]
            bd = rb[1]
        dn = an * bd - bn * ad
        if dn < 0:
            dn = -dn
        dd = ad * bd
        if ilo < 0:
            lo_n = dn
            hi_n = dn
            lo_d = dd
            hi_d = dd
            ilo = i
            ihi = i
            continue
        if dn * lo_d < lo_n * dd:
            lo_n = dn
            lo_d = dd
            ilo = i
        if dn * hi_d > hi_n * dd:
            hi_n = dn
            hi_d = dd
            ihi = i
    if ilo < 0:
        raise ValueError("empty map list")
    lo = _norm(lo_n, lo_d)
    hi = _norm(hi_n, hi_d)
    return lo[0], lo[1], ilo, hi[0], hi[1], ihi
