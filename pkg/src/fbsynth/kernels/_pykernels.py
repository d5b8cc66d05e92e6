"""Pure-Python kernels.  Correct for every width; the compiled twin covers w <= 64.

Abstract bit-vectors are passed as two masks: ``z`` has bit i set when bit i
may be 0, ``o`` when it may be 1.  A bit with neither set is bottom.
"""

SHL, LSHR, ASHR = 0, 1, 2


def _signed(v, w):
    return v - (1 << w) if v >> (w - 1) else v


def _prefix(lo, hi, m):
    diff = lo ^ hi
    free = (1 << diff.bit_length()) - 1 if diff else 0
    fixed = m & ~free
    return (~lo & fixed) | free, (lo & fixed) | free


def ripple_carry_add(w, z1, o1, z2, o2, cin_z, cin_o):
    """Three-valued ripple-carry addition of two non-bottom abstract values.

    The may-carry-1 chain obeys the same recurrence as the carries of
    ``o1 + o2`` and the may-carry-0 chain those of ``z1 + z2``, so both are
    computed with one native addition each.  ``cin_z``/``cin_o`` say whether
    the carry-in may be 0 / may be 1.
    """
    m = (1 << w) - 1
    c1 = ((o1 + o2 + cin_o) ^ o1 ^ o2) & m
    c0 = ((z1 + z2 + cin_z) ^ z1 ^ z2) & m
    unknown = (z1 & o1) | (z2 & o2) | (c0 & c1)
    parity = o1 ^ o2 ^ c1
    return (unknown | ~parity) & m, (unknown | parity) & m


def reduce_product(w, z, o, slo, shi, ulo, uhi):
    """Iterate the pairwise projections of the bitwise/signed/unsigned product to a fixpoint.

    Returns ``None`` when some component becomes bottom.
    """
    m = (1 << w) - 1
    half = 1 << (w - 1)
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
        uz, uo = _prefix(ulo, uhi, m)
        sz, so = _prefix(slo & m, shi & m, m)
        if (ulo ^ uhi) & half:
            us_lo, us_hi = -half, half - 1
        else:
            us_lo, us_hi = _signed(ulo, w), _signed(uhi, w)
        if (slo < 0) != (shi < 0):
            su_lo, su_hi = 0, m
        else:
            su_lo, su_hi = slo & m, shi & m
        nz = z & uz & sz
        no = o & uo & so
        nslo = max(slo, bs_lo, us_lo)
        nshi = min(shi, bs_hi, us_hi)
        nulo = max(ulo, known1, su_lo)
        nuhi = min(uhi, o, su_hi)
        if (nz, no, nslo, nshi, nulo, nuhi) == (z, o, slo, shi, ulo, uhi):
            return z, o, slo, shi, ulo, uhi
        z, o, slo, shi, ulo, uhi = nz, no, nslo, nshi, nulo, nuhi


def shift_join(kind, w, z1, o1, z2, o2):
    """Join of shifting the first operand by every amount the second may hold.

    Amounts of ``w`` or more saturate (zero, or sign fill for ASHR).
    """
    m = (1 << w) - 1
    rz = ro = 0
    msb_z = (z1 >> (w - 1)) & 1
    msb_o = (o1 >> (w - 1)) & 1
    must0 = ~o2
    must1 = ~z2 & m
    for k in range(w):
        if k & must0 or (k & must1) != must1:
            continue
        if kind == SHL:
            low = (1 << k) - 1
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
    if o2 >= w:
        if kind == ASHR:
            rz |= m if msb_z else 0
            ro |= m if msb_o else 0
        else:
            rz |= m
    return rz, ro


def filter_members(values, m, must0, must1, slo, shi, ulo, uhi, w):
    """Indices of the stored vectors whose every entry satisfies the per-example constraint."""
    out = []
    count = len(values) // m if m else 0
    half = 1 << (w - 1)
    full = 1 << w
    rng = range(m)
    for c in range(count):
        base = c * m
        for j in rng:
            v = values[base + j]
            if v & must0[j] or (v & must1[j]) != must1[j] or not ulo[j] <= v <= uhi[j]:
                break
            sv = v - full if v >= half else v
            if not slo[j] <= sv <= shi[j]:
                break
        else:
            out.append(c)
    return out
