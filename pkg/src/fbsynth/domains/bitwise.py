"""Known-bits abstraction of fixed-width bit-vectors.

Each bit is one of 0, 1, T (unknown) or B (no value).  A value is stored as
two masks: ``zeros`` has bit i set when bit i may be 0 and ``ones`` when it
may be 1.  A value with any B bit denotes the empty set and is normalized to
the canonical bottom ``zeros == ones == 0``.
"""

from __future__ import annotations

from .. import kernels
from ..kernels import ASHR, LSHR, SHL


class WidthMismatch(ValueError):
    pass


class NonSingleton(ValueError):
    pass


_TO_CHAR = {(1, 0): "0", (0, 1): "1", (1, 1): "T", (0, 0): "B"}
_FROM_CHAR = {"0": (1, 0), "1": (0, 1), "T": (1, 1), "⊤": (1, 1), "B": (0, 0), "⊥": (0, 0)}


class BitwiseValue:
    __slots__ = ("width", "zeros", "ones")

    def __init__(self, width: int, zeros: int, ones: int):
        m = (1 << width) - 1
        zeros &= m
        ones &= m
        if (zeros | ones) != m:
            zeros = ones = 0
        self.width = width
        self.zeros = zeros
        self.ones = ones

    @classmethod
    def top(cls, width):
        m = (1 << width) - 1
        return cls(width, m, m)

    @classmethod
    def bottom(cls, width):
        return cls(width, 0, 0)

    @classmethod
    def const(cls, value: int, width: int):
        m = (1 << width) - 1
        value &= m
        return cls(width, ~value & m, value)

    @classmethod
    def parse(cls, text: str):
        """Read a value written most-significant bit first, e.g. ``"110T"``."""
        z = o = 0
        for ch in text:
            try:
                bz, bo = _FROM_CHAR[ch]
            except KeyError:
                raise ValueError(f"bad abstract bit {ch!r} in {text!r}") from None
            z = (z << 1) | bz
            o = (o << 1) | bo
        return cls(len(text), z, o)

    @property
    def mask(self) -> int:
        return (1 << self.width) - 1

    def is_bottom(self) -> bool:
        return self.zeros == 0 and self.ones == 0

    def is_top(self) -> bool:
        return self.zeros == self.ones == self.mask

    @property
    def known_ones(self) -> int:
        return self.ones & ~self.zeros

    @property
    def known_zeros(self) -> int:
        return self.zeros & ~self.ones

    @property
    def free(self) -> int:
        return self.zeros & self.ones

    def singleton(self):
        """The unique unsigned member, or None."""
        if self.is_bottom() or self.free:
            return None
        return self.ones

    def count(self) -> int:
        return 0 if self.is_bottom() else 1 << bin(self.free).count("1")

    def members(self):
        """Unsigned members in ascending order."""
        if self.is_bottom():
            return []
        base, free = self.known_ones, self.free
        out = []
        sub = free
        while True:
            out.append(base | sub)
            if not sub:
                break
            sub = (sub - 1) & free
        out.reverse()
        return out

    def contains(self, v: int) -> bool:
        v &= self.mask
        return not self.is_bottom() and not (v & ~self.ones) and not (~v & self.mask & ~self.zeros)

    def tz_guaranteed(self) -> int:
        """Trailing bits that are definitely 0."""
        if self.is_bottom():
            return self.width
        kz = self.known_zeros
        n = 0
        while n < self.width and (kz >> n) & 1:
            n += 1
        return n

    def tz_possible(self) -> int:
        """Trailing zeros after replacing every T with 0."""
        if self.is_bottom():
            return self.width
        n = 0
        while n < self.width and not (self.known_ones >> n) & 1:
            n += 1
        return n

    def _check(self, other):
        if self.width != other.width:
            raise WidthMismatch(f"widths {self.width} and {other.width}")

    def leq(self, other) -> bool:
        self._check(other)
        return not (self.zeros & ~other.zeros) and not (self.ones & ~other.ones)

    def join(self, other):
        self._check(other)
        return BitwiseValue(self.width, self.zeros | other.zeros, self.ones | other.ones)

    def meet(self, other):
        self._check(other)
        return BitwiseValue(self.width, self.zeros & other.zeros, self.ones & other.ones)

    def raw_meet(self, other) -> str:
        """Per-bit meet without bottom normalization, rendered as text."""
        self._check(other)
        return _render(self.width, self.zeros & other.zeros, self.ones & other.ones)

    def __eq__(self, other):
        return (isinstance(other, BitwiseValue) and self.width == other.width
                and self.zeros == other.zeros and self.ones == other.ones)

    def __hash__(self):
        return hash((self.width, self.zeros, self.ones))

    def __str__(self):
        return _render(self.width, self.zeros, self.ones)

    def __repr__(self):
        return f"BitwiseValue({self})"


def _render(w, z, o):
    return "".join(_TO_CHAR[((z >> i) & 1, (o >> i) & 1)] for i in range(w - 1, -1, -1))


def two_complement_repr(x: int, width: int) -> str:
    """Two's complement bit string of ``x``; accepts signed or unsigned readings."""
    if not -(1 << (width - 1)) <= x <= (1 << width) - 1:
        raise ValueError(f"{x} is not representable in {width} bits")
    if x < 0:
        return "".join("1" if c == "0" else "0" for c in two_complement_repr(-x - 1, width))
    return format(x, f"0{width}b")


def alpha(values, width: int) -> BitwiseValue:
    z = o = 0
    m = (1 << width) - 1
    for v in values:
        u = int(two_complement_repr(v, width), 2)
        z |= ~u & m
        o |= u
    return BitwiseValue(width, z, o)


def gamma_unsigned(b: BitwiseValue) -> set:
    return set(b.members())


def gamma_signed(b: BitwiseValue) -> set:
    half = 1 << (b.width - 1)
    return {v - (1 << b.width) if v & half else v for v in b.members()}


def gamma(b: BitwiseValue) -> set:
    return gamma_unsigned(b) | gamma_signed(b)


def _name(op):
    return op if isinstance(op, str) else op.name


def _check_widths(args):
    w = args[0].width
    for a in args[1:]:
        if a.width != w:
            raise WidthMismatch(f"widths {w} and {a.width}")
    return w


def _top_with_low_zeros(w, n):
    m = (1 << w) - 1
    n = min(n, w)
    low = (1 << n) - 1
    return BitwiseValue(w, m, m & ~low)


def forward_bitwise(op, args) -> BitwiseValue:
    """Abstract result of applying ``op`` to abstract bit-vector arguments."""
    name = _name(op)
    w = _check_widths(args)
    if any(a.is_bottom() for a in args):
        return BitwiseValue.bottom(w)
    m = (1 << w) - 1
    a = args[0]
    if name == "bvnot":
        return BitwiseValue(w, a.ones, a.zeros)
    if name == "bvneg":
        z, o = kernels.ripple_carry_add(w, a.ones, a.zeros, m & ~1, 1, 1, 0)
        return BitwiseValue(w, z, o)
    b = args[1] if len(args) > 1 else None
    if name == "bvand":
        return BitwiseValue(w, a.zeros | b.zeros, a.ones & b.ones)
    if name == "bvor":
        return BitwiseValue(w, a.zeros & b.zeros, a.ones | b.ones)
    if name == "bvxor":
        return BitwiseValue(w, (a.zeros & b.zeros) | (a.ones & b.ones),
                            (a.zeros & b.ones) | (a.ones & b.zeros))
    if name == "bvadd":
        return BitwiseValue(w, *kernels.ripple_carry_add(w, a.zeros, a.ones, b.zeros, b.ones, 1, 0))
    if name == "bvsub":
        # a - b = a + ~b + 1, with the +1 entering as the carry-in
        return BitwiseValue(w, *kernels.ripple_carry_add(w, a.zeros, a.ones, b.ones, b.zeros, 0, 1))
    if name == "bvmul":
        return _top_with_low_zeros(w, a.tz_guaranteed() + b.tz_guaranteed())
    kind = {"bvshl": SHL, "bvlshr": LSHR, "bvashr": ASHR}.get(name)
    if kind is not None:
        return BitwiseValue(w, *kernels.shift_join(kind, w, a.zeros, a.ones, b.zeros, b.ones))
    return BitwiseValue.top(w)


def extended_euclid(a: int, b: int):
    """Return ``(g, s, t)`` with ``a*s + b*t == g == gcd(a, b)``."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    return a, s0, t0


def mod_inverse(a: int, modulus: int) -> int:
    g, s, _ = extended_euclid(a % modulus, modulus)
    if g != 1:
        raise ValueError(f"{a} has no inverse modulo {modulus}")
    return s % modulus


def _tz(n, w):
    if n == 0:
        return w
    return (n & -n).bit_length() - 1


def infer_mul_operand(b2: BitwiseValue, b: BitwiseValue) -> BitwiseValue:
    """All ``x`` with ``x * n2 == n (mod 2**w)`` for singleton ``b2 = {n2}`` and ``b = {n}``.

    The result is exact: the low ``w - tz(n2)`` bits are forced and the rest are free.
    """
    w = _check_widths([b2, b])
    n2, n = b2.singleton(), b.singleton()
    if n2 is None or n is None:
        raise NonSingleton("both operands must denote a single value")
    if n2 == 0:
        return BitwiseValue.top(w) if n == 0 else BitwiseValue.bottom(w)
    t2, t = _tz(n2, w), _tz(n, w)
    if t < t2:
        return BitwiseValue.bottom(w)
    k = w - t2
    low_mask = (1 << k) - 1
    y = mod_inverse(n2 >> t2, 1 << k) if k else 0
    low = ((n >> t2) * y) & low_mask
    m = (1 << w) - 1
    free = m & ~low_mask
    return BitwiseValue(w, free | (~low & low_mask), free | low)


def _backward_shift(kind, w, r, x, amt):
    m = (1 << w) - 1
    rz, ro = r.zeros, r.ones
    z = o = 0
    must0 = ~amt.ones
    must1 = amt.known_ones
    for k in range(w):
        if k & must0 or (k & must1) != must1:
            continue
        if kind == SHL:
            low = (1 << k) - 1
            if low & ~rz:
                continue
            top = m & ~(m >> k)
            z |= (rz >> k) | top
            o |= (ro >> k) | top
        elif kind == LSHR:
            top = m & ~(m >> k)
            if top & ~rz:
                continue
            low = (1 << k) - 1
            z |= ((rz << k) & m) | low
            o |= ((ro << k) & m) | low
        else:
            group = m & ~(m >> (k + 1))
            sz = (rz & group) == group
            so = (ro & group) == group
            if not (sz or so):
                continue
            msb = 1 << (w - 1)
            low = (1 << k) - 1
            z |= ((rz << k) & m & ~msb) | low | (msb if sz else 0)
            o |= ((ro << k) & m & ~msb) | low | (msb if so else 0)
    if amt.ones >= w:
        msb = 1 << (w - 1)
        if kind == ASHR:
            if rz == m:
                z |= m
                o |= m & ~msb
            if ro == m:
                z |= m & ~msb
                o |= m
        elif rz == m:
            return x
    return BitwiseValue(w, z, o).meet(x)


def backward_bitwise(op, i: int, result: BitwiseValue, args) -> BitwiseValue:
    """Refinement of ``args[i-1]`` given that ``op(args)`` lands in ``result``."""
    name = _name(op)
    w = _check_widths([result, *args])
    x = args[i - 1]
    if result.is_bottom() or any(a.is_bottom() for a in args):
        return BitwiseValue.bottom(w)
    if name == "bvnot":
        return BitwiseValue(w, result.ones, result.zeros).meet(x)
    if name == "bvneg":
        return forward_bitwise("bvneg", [result]).meet(x)
    if len(args) != 2:
        return x
    y = args[2 - i]
    rz, ro = result.zeros, result.ones
    if name == "bvand":
        # x may be 0 iff the result may be 0; x may be 1 iff y can match the result bit
        return BitwiseValue(w, rz, (y.ones & ro) | (y.zeros & rz)).meet(x)
    if name == "bvor":
        return BitwiseValue(w, (y.zeros & rz) | (y.ones & ro), ro).meet(x)
    if name == "bvxor":
        return forward_bitwise("bvxor", [result, y]).meet(x)
    if name == "bvmul":
        if y.singleton() is not None and result.singleton() is not None:
            return infer_mul_operand(y, result).meet(x)
        l = max(0, result.tz_guaranteed() - y.tz_possible())
        return _top_with_low_zeros(w, l).meet(x)
    if i == 1:
        kind = {"bvshl": SHL, "bvlshr": LSHR, "bvashr": ASHR}.get(name)
        if kind is not None:
            return _backward_shift(kind, w, result, x, y)
    return x
