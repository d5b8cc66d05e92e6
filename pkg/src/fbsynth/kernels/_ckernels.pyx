# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for widths up to 64 bits.  Same contracts as ``_pykernels``."""

ctypedef unsigned long long u64
ctypedef long long i64

DEF SHL = 0
DEF LSHR = 1
DEF ASHR = 2


cdef inline u64 _mask(int w) nogil:
    return <u64>0xFFFFFFFFFFFFFFFF if w >= 64 else ((<u64>1) << w) - 1


cdef inline i64 _signed(u64 v, int w) nogil:
    if w >= 64:
        return <i64>v
    if (v >> (w - 1)) & 1:
        return <i64>v - (<i64>1 << w)
    return <i64>v


cdef inline u64 _free_bits(u64 diff) nogil:
    cdef int bl
    if diff == 0:
        return 0
    bl = 64 - __builtin_clzll(diff)
    if bl >= 64:
        return <u64>0xFFFFFFFFFFFFFFFF
    return ((<u64>1) << bl) - 1


cdef extern from *:
    int __builtin_clzll(unsigned long long) nogil


def ripple_carry_add(int w, u64 z1, u64 o1, u64 z2, u64 o2, u64 cin_z, u64 cin_o):
    cdef u64 m = _mask(w)
    cdef u64 c1 = ((o1 + o2 + cin_o) ^ o1 ^ o2) & m
    cdef u64 c0 = ((z1 + z2 + cin_z) ^ z1 ^ z2) & m
    cdef u64 unknown = (z1 & o1) | (z2 & o2) | (c0 & c1)
    cdef u64 parity = o1 ^ o2 ^ c1
    return (unknown | ~parity) & m, (unknown | parity) & m


def reduce_product(int w, u64 z, u64 o, i64 slo, i64 shi, u64 ulo, u64 uhi):
    cdef u64 m = _mask(w)
    cdef u64 half = (<u64>1) << (w - 1)
    cdef u64 known1, uz, uo, sz, so, free, fixed, nz, no, su_lo, su_hi, nulo, nuhi, slo_bits, shi_bits
    cdef i64 bs_lo, bs_hi, us_lo, us_hi, nslo, nshi
    cdef i64 smin = -<i64>(half - 1) - 1
    cdef i64 smax = <i64>(half - 1)
    while True:
        if (z | o) != m or slo > shi or ulo > uhi:
            return None
        known1 = o & ~z
        if z & o & half:
            bs_lo = _signed(known1 | half, w)
            bs_hi = _signed(o & ~half, w)
        else:
            bs_lo = _signed(known1, w)
            bs_hi = _signed(o, w)
        free = _free_bits(ulo ^ uhi)
        fixed = m & ~free
        uz = (~ulo & fixed) | free
        uo = (ulo & fixed) | free
        slo_bits = (<u64>slo) & m
        shi_bits = (<u64>shi) & m
        free = _free_bits(slo_bits ^ shi_bits)
        fixed = m & ~free
        sz = (~slo_bits & fixed) | free
        so = (slo_bits & fixed) | free
        if (ulo ^ uhi) & half:
            us_lo = smin
            us_hi = smax
        else:
            us_lo = _signed(ulo, w)
            us_hi = _signed(uhi, w)
        if (slo < 0) != (shi < 0):
            su_lo = 0
            su_hi = m
        else:
            su_lo = slo_bits
            su_hi = shi_bits
        nz = z & uz & sz
        no = o & uo & so
        nslo = max(slo, max(bs_lo, us_lo))
        nshi = min(shi, min(bs_hi, us_hi))
        nulo = max(ulo, max(known1, su_lo))
        nuhi = min(uhi, min(o, su_hi))
        if nz == z and no == o and nslo == slo and nshi == shi and nulo == ulo and nuhi == uhi:
            return z, o, slo, shi, ulo, uhi
        z = nz
        o = no
        slo = nslo
        shi = nshi
        ulo = nulo
        uhi = nuhi


def shift_join(int kind, int w, u64 z1, u64 o1, u64 z2, u64 o2):
    cdef u64 m = _mask(w)
    cdef u64 rz = 0, ro = 0, fill, low
    cdef u64 msb_z = (z1 >> (w - 1)) & 1
    cdef u64 msb_o = (o1 >> (w - 1)) & 1
    cdef u64 must0 = ~o2
    cdef u64 must1 = ~z2 & m
    cdef int k
    for k in range(w):
        if (<u64>k) & must0 or ((<u64>k) & must1) != must1:
            continue
        if kind == SHL:
            low = ((<u64>1) << k) - 1
            rz |= ((z1 << k) | low) & m
            ro |= (o1 << k) & m
        else:
            fill = m & ~(m >> k)
            if kind == LSHR:
                rz |= (z1 >> k) | fill
                ro |= o1 >> k
            else:
                rz |= (z1 >> k) | (fill if msb_z else 0)
                ro |= (o1 >> k) | (fill if msb_o else 0)
    if o2 >= <u64>w:
        if kind == ASHR:
            if msb_z:
                rz |= m
            if msb_o:
                ro |= m
        else:
            rz |= m
    return rz, ro


def filter_members(const u64[:] values, int m, must0, must1, slo, shi, ulo, uhi, int w):
    cdef Py_ssize_t count = values.shape[0] // m if m else 0
    cdef Py_ssize_t c, base
    cdef int j
    cdef u64 v
    cdef i64 sv
    cdef u64[64] c_m0, c_m1, c_ulo, c_uhi
    cdef i64[64] c_slo, c_shi
    out = []
    if m > 64:
        raise ValueError("at most 64 examples per compiled scan")
    for j in range(m):
        c_m0[j] = must0[j]
        c_m1[j] = must1[j]
        c_slo[j] = slo[j]
        c_shi[j] = shi[j]
        c_ulo[j] = ulo[j]
        c_uhi[j] = uhi[j]
    for c in range(count):
        base = c * m
        for j in range(m):
            v = values[base + j]
            if v & c_m0[j] or (v & c_m1[j]) != c_m1[j] or v < c_ulo[j] or v > c_uhi[j]:
                break
            sv = _signed(v, w)
            if sv < c_slo[j] or sv > c_shi[j]:
                break
        else:
            out.append(c)
    return out
