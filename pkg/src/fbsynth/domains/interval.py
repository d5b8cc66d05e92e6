"""Signed and unsigned interval domains over fixed-width bit-vectors.

Bounds are held as Python ints: unsigned intervals in ``[0, 2**w)``, signed
ones in ``[-2**(w-1), 2**(w-1))``.  The empty interval is canonical
``lo=1, hi=0``.  Forward transfers work on unbounded integers and give up to
the full range whenever the integer result might not fit.
"""

from __future__ import annotations

from .bitwise import WidthMismatch


def _fmt(v, w):
    v &= (1 << w) - 1
    if w % 4 == 0 and w >= 16:
        return "#x" + format(v, f"0{w // 4}x")
    return format(v, f"0{w}b")


class _Interval:
    __slots__ = ("width", "lo", "hi")
    signed = False

    def __init__(self, width: int, lo: int, hi: int):
        if lo > hi:
            lo, hi = 1, 0
        else:
            mn, mx = self.bounds(width)
            if lo < mn or hi > mx:
                raise ValueError(f"[{lo}, {hi}] exceeds the {width}-bit range")
        self.width = width
        self.lo = lo
        self.hi = hi

    @staticmethod
    def bounds(width):
        raise NotImplementedError

    @classmethod
    def top(cls, width):
        return cls(width, *cls.bounds(width))

    @classmethod
    def bottom(cls, width):
        return cls(width, 1, 0)

    @classmethod
    def const(cls, value, width):
        v = cls.view(value, width)
        return cls(width, v, v)

    @classmethod
    def view(cls, value, width):
        raise NotImplementedError

    @classmethod
    def alpha(cls, values, width):
        vs = [cls.view(v, width) for v in values]
        if not vs:
            return cls.bottom(width)
        return cls(width, min(vs), max(vs))

    def is_bottom(self) -> bool:
        return self.lo > self.hi

    def is_top(self) -> bool:
        return (self.lo, self.hi) == self.bounds(self.width)

    def singleton(self):
        return self.lo if self.lo == self.hi else None

    def count(self) -> int:
        return 0 if self.is_bottom() else self.hi - self.lo + 1

    def gamma(self) -> set:
        return set(range(self.lo, self.hi + 1))

    def contains(self, value) -> bool:
        return self.lo <= self.view(value, self.width) <= self.hi

    def _check(self, other):
        if self.width != other.width or type(self) is not type(other):
            raise WidthMismatch(f"cannot combine {self!r} and {other!r}")

    def leq(self, other) -> bool:
        self._check(other)
        return self.is_bottom() or (other.lo <= self.lo and self.hi <= other.hi)

    def join(self, other):
        self._check(other)
        if self.is_bottom():
            return other
        if other.is_bottom():
            return self
        return type(self)(self.width, min(self.lo, other.lo), max(self.hi, other.hi))

    def meet(self, other):
        self._check(other)
        return type(self)(self.width, max(self.lo, other.lo), min(self.hi, other.hi))

    def __eq__(self, other):
        return (type(other) is type(self) and self.width == other.width
                and self.lo == other.lo and self.hi == other.hi)

    def __hash__(self):
        return hash((self.signed, self.width, self.lo, self.hi))

    def __str__(self):
        if self.is_bottom():
            return "[]"
        return f"[{_fmt(self.lo, self.width)},{_fmt(self.hi, self.width)}]"

    def __repr__(self):
        return f"{type(self).__name__}({self.width}, {self.lo}, {self.hi})"


class UInterval(_Interval):
    __slots__ = ()
    signed = False

    @staticmethod
    def bounds(width):
        return 0, (1 << width) - 1

    @classmethod
    def view(cls, value, width):
        return value & ((1 << width) - 1)


class SInterval(_Interval):
    __slots__ = ()
    signed = True

    @staticmethod
    def bounds(width):
        half = 1 << (width - 1)
        return -half, half - 1

    @classmethod
    def view(cls, value, width):
        value &= (1 << width) - 1
        return value - (1 << width) if value >> (width - 1) else value


def wrap_signed(lo: int, hi: int, width: int) -> SInterval:
    mn, mx = SInterval.bounds(width)
    if mn <= lo and hi <= mx:
        return SInterval(width, lo, hi)
    return SInterval.top(width)


def wrap_unsigned(lo: int, hi: int, width: int) -> UInterval:
    if 0 <= lo and hi < (1 << width):
        return UInterval(width, lo, hi)
    return UInterval.top(width)


def _shift_back(cls, lo, hi, width):
    """Reduce an integer range modulo 2**w when both ends land in the same period."""
    mn, _ = cls.bounds(width)
    period = 1 << width
    ql, qh = (lo - mn) // period, (hi - mn) // period
    if ql != qh:
        return None
    return cls(width, lo - ql * period, hi - ql * period)


def _name(op):
    return op if isinstance(op, str) else op.name


def _domain_class(domain):
    if domain in ("S", SInterval):
        return SInterval
    if domain in ("U", UInterval):
        return UInterval
    raise ValueError(f"unknown interval domain {domain!r}")


def _check(args):
    w = args[0].width
    for a in args[1:]:
        if a.width != w or type(a) is not type(args[0]):
            raise WidthMismatch(f"cannot combine {args[0]!r} and {a!r}")
    return w


def _sdiv_part(sl, sh, tl, th, w):
    """Signed-division range for sign-homogeneous parts (divisor part excludes 0)."""
    if sl >= 0 and tl > 0:
        return sl // th, sh // tl
    if sh < 0 and tl > 0:
        return -((-sl) // tl), -((-sh) // th)
    if sl >= 0 and th < 0:
        return -(sh // -th), -(sl // -tl)
    return (-sh) // (-tl), (-sl) // (-th)


def _forward_u(name, args, w):
    m = (1 << w) - 1
    a = args[0]
    if name == "bvnot":
        return UInterval(w, m - a.hi, m - a.lo)
    if name == "bvneg":
        if a.lo == 0 and a.hi != 0:
            return UInterval.top(w)
        return UInterval(w, (-a.hi) & m, (-a.lo) & m)
    if len(args) != 2:
        return UInterval.top(w)
    b = args[1]
    if name == "bvadd":
        return wrap_unsigned(a.lo + b.lo, a.hi + b.hi, w)
    if name == "bvsub":
        return wrap_unsigned(a.lo - b.hi, a.hi - b.lo, w)
    if name == "bvmul":
        return wrap_unsigned(a.lo * b.lo, a.hi * b.hi, w)
    if name == "bvudiv":
        if b.hi == 0:
            return UInterval(w, m, m)
        r = UInterval(w, a.lo // b.hi, a.hi // max(b.lo, 1))
        return r.join(UInterval(w, m, m)) if b.lo == 0 else r
    if name == "bvurem":
        if b.hi == 0:
            return a
        r = UInterval(w, 0, min(a.hi, b.hi - 1))
        return r.join(a) if b.lo == 0 else r
    k = b.singleton()
    if k is None:
        return UInterval.top(w)
    if name == "bvshl":
        if k >= w:
            return UInterval(w, 0, 0)
        return wrap_unsigned(a.lo << k, a.hi << k, w)
    if name == "bvlshr":
        if k >= w:
            return UInterval(w, 0, 0)
        return UInterval(w, a.lo >> k, a.hi >> k)
    if name == "bvashr":
        half = 1 << (w - 1)
        if (a.lo ^ a.hi) & half:
            return UInterval.top(w)
        k = min(k, w - 1)
        lo, hi = SInterval.view(a.lo, w) >> k, SInterval.view(a.hi, w) >> k
        return UInterval(w, lo & m, hi & m)
    return UInterval.top(w)


def _forward_s(name, args, w):
    mn, mx = SInterval.bounds(w)
    a = args[0]
    if name == "bvnot":
        return SInterval(w, -a.hi - 1, -a.lo - 1)
    if name == "bvneg":
        if a.lo == mn:
            return SInterval.top(w)
        return SInterval(w, -a.hi, -a.lo)
    if len(args) != 2:
        return SInterval.top(w)
    b = args[1]
    if name == "bvadd":
        return wrap_signed(a.lo + b.lo, a.hi + b.hi, w)
    if name == "bvsub":
        return wrap_signed(a.lo - b.hi, a.hi - b.lo, w)
    if name == "bvmul":
        ps = [a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi]
        return wrap_signed(min(ps), max(ps), w)
    if name == "bvsdiv":
        return _forward_sdiv(a, b, w)
    k = b.singleton()
    if k is None:
        return SInterval.top(w)
    k &= (1 << w) - 1
    if name == "bvashr":
        k = min(k, w - 1)
        return SInterval(w, a.lo >> k, a.hi >> k)
    if name == "bvshl":
        if k >= w:
            return SInterval(w, 0, 0)
        return wrap_signed(a.lo << k, a.hi << k, w)
    if name == "bvlshr":
        if k == 0:
            return a
        if k >= w:
            return SInterval(w, 0, 0)
        if (a.lo < 0) != (a.hi < 0):
            return SInterval.top(w)
        m = (1 << w) - 1
        return SInterval(w, (a.lo & m) >> k, (a.hi & m) >> k)
    return SInterval.top(w)


def _forward_sdiv(a, b, w):
    mn, mx = SInterval.bounds(w)
    s_parts = [(lo, hi) for lo, hi in ((a.lo, min(a.hi, -1)), (max(a.lo, 0), a.hi)) if lo <= hi]
    t_parts = [(lo, hi) for lo, hi in ((b.lo, min(b.hi, -1)), (max(b.lo, 1), b.hi)) if lo <= hi]
    lo, hi = None, None

    def add(l, h):
        nonlocal lo, hi
        lo = l if lo is None else min(lo, l)
        hi = h if hi is None else max(hi, h)

    if b.lo <= 0 <= b.hi:
        for sl, sh in s_parts:
            add(*((1, 1) if sh < 0 else (-1, -1)))
    overflow = False
    for sl, sh in s_parts:
        for tl, th in t_parts:
            ql, qh = _sdiv_part(sl, sh, tl, th, w)
            if qh > mx:
                # only SMin / -1 reaches 2**(w-1), which wraps back to SMin
                overflow = True
                qh -= 1
                if ql > qh:
                    continue
            add(ql, qh)
    result = SInterval.bottom(w) if lo is None else SInterval(w, lo, hi)
    if overflow:
        result = result.join(SInterval(w, mn, mn))
    return result


def forward_interval(domain, op, args):
    """Abstract result of ``op`` in the signed (``"S"``) or unsigned (``"U"``) domain."""
    cls = _domain_class(domain)
    w = _check(args)
    if any(a.is_bottom() for a in args):
        return cls.bottom(w)
    name = _name(op)
    return (_forward_s if cls is SInterval else _forward_u)(name, args, w)


def backward_interval(domain, op, i: int, result, args):
    """Refinement of ``args[i-1]`` given that ``op(args)`` lands in ``result``."""
    cls = _domain_class(domain)
    w = _check([result, *args])
    x = args[i - 1]
    if result.is_bottom() or any(a.is_bottom() for a in args):
        return cls.bottom(w)
    name = _name(op)
    if name in ("bvneg", "bvnot"):
        return forward_interval(cls, name, [result]).meet(x)
    if len(args) != 2:
        return x
    y = args[2 - i]
    if name == "bvurem":
        if cls is UInterval and i == 1 and result.lo >= 1 << (w - 1):
            return result.meet(x)
        return x
    if name == "bvadd":
        lo, hi = result.lo - y.hi, result.hi - y.lo
    elif name == "bvsub" and i == 1:
        lo, hi = result.lo + y.lo, result.hi + y.hi
    elif name == "bvsub":
        lo, hi = y.lo - result.hi, y.hi - result.lo
    else:
        return x
    r = _shift_back(cls, lo, hi, w)
    return x if r is None else r.meet(x)
