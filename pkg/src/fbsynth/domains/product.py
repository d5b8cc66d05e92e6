"""Reduced product of the bitwise, signed-interval and unsigned-interval domains,
plus a small powerset domain for Booleans.

Every :class:`BVAbs` handed out by this module is reduced: its three
components have been tightened against each other until nothing changes,
and if any of them is empty all of them are.
"""

from __future__ import annotations

from .. import kernels
from ..semantics import BOOL_OPS, BV_BINARY, BV_COMPARE, BV_UNARY, UnsupportedOperator, apply
from ..terms import BitVecSort, BoolSort
from .bitwise import BitwiseValue, WidthMismatch, backward_bitwise, forward_bitwise
from .interval import SInterval, UInterval, backward_interval, forward_interval

DEFAULT_CONCRETIZE_LIMIT = 64


class BVAbs:
    __slots__ = ("bits", "s", "u")

    def __init__(self, bits: BitwiseValue, s: SInterval, u: UInterval):
        if not bits.width == s.width == u.width:
            raise WidthMismatch("product components disagree on width")
        self.bits = bits
        self.s = s
        self.u = u

    @property
    def width(self) -> int:
        return self.bits.width

    @classmethod
    def top(cls, width):
        return cls(BitwiseValue.top(width), SInterval.top(width), UInterval.top(width))

    @classmethod
    def bottom(cls, width):
        return cls(BitwiseValue.bottom(width), SInterval.bottom(width), UInterval.bottom(width))

    @classmethod
    def const(cls, value, width):
        return cls(BitwiseValue.const(value, width), SInterval.const(value, width),
                   UInterval.const(value, width))

    def is_bottom(self) -> bool:
        return self.bits.is_bottom() or self.s.is_bottom() or self.u.is_bottom()

    def is_top(self) -> bool:
        return self.bits.is_top() and self.s.is_top() and self.u.is_top()

    def singleton(self):
        return self.bits.singleton()

    def contains(self, value) -> bool:
        return self.bits.contains(value) and self.s.contains(value) and self.u.contains(value)

    def leq(self, other) -> bool:
        return self.bits.leq(other.bits) and self.s.leq(other.s) and self.u.leq(other.u)

    def meet(self, other):
        return reduce(BVAbs(self.bits.meet(other.bits), self.s.meet(other.s), self.u.meet(other.u)))

    def join(self, other):
        if self.is_bottom():
            return other
        if other.is_bottom():
            return self
        return reduce(BVAbs(self.bits.join(other.bits), self.s.join(other.s), self.u.join(other.u)))

    def __eq__(self, other):
        return (isinstance(other, BVAbs) and self.bits == other.bits
                and self.s == other.s and self.u == other.u)

    def __hash__(self):
        return hash((self.bits, self.s, self.u))

    def __str__(self):
        return f"⟨{self.bits}, {self.s}, {self.u}⟩"

    __repr__ = __str__


class BoolAbs:
    """Subset of {False, True}; bit 0 stands for False, bit 1 for True."""

    __slots__ = ("mask",)

    def __init__(self, mask: int):
        self.mask = mask & 3

    @classmethod
    def top(cls):
        return cls(3)

    @classmethod
    def bottom(cls):
        return cls(0)

    @classmethod
    def const(cls, value: bool):
        return cls(2 if value else 1)

    def members(self):
        return [b for b in (False, True) if self.mask >> int(b) & 1]

    def is_bottom(self) -> bool:
        return self.mask == 0

    def is_top(self) -> bool:
        return self.mask == 3

    def singleton(self):
        return {1: False, 2: True}.get(self.mask)

    def may(self, value: bool) -> bool:
        return bool(self.mask >> int(value) & 1)

    def contains(self, value) -> bool:
        return isinstance(value, bool) and self.may(value)

    def leq(self, other) -> bool:
        return not self.mask & ~other.mask

    def meet(self, other):
        return BoolAbs(self.mask & other.mask)

    def join(self, other):
        return BoolAbs(self.mask | other.mask)

    def __eq__(self, other):
        return isinstance(other, BoolAbs) and other.mask == self.mask

    def __hash__(self):
        return hash(("bool", self.mask))

    def __str__(self):
        return ("B", "0", "1", "T")[self.mask]

    __repr__ = __str__


def top(sort):
    return BoolAbs.top() if isinstance(sort, BoolSort) else BVAbs.top(sort.width)


def bottom(sort):
    return BoolAbs.bottom() if isinstance(sort, BoolSort) else BVAbs.bottom(sort.width)


def alpha_value(value, sort):
    """Abstraction of one concrete value."""
    if isinstance(sort, BoolSort):
        return BoolAbs.const(value)
    return BVAbs.const(value, sort.width)


def alpha_set(values, sort):
    out = bottom(sort)
    for v in values:
        out = out.join(alpha_value(v, sort))
    return out


def gamma_set(v) -> set:
    """Brute-force concretization (unsigned members); only for small widths."""
    if isinstance(v, BoolAbs):
        return set(v.members())
    if v.is_bottom():
        return set()
    return {x for x in v.bits.members() if v.s.contains(x) and v.u.contains(x)}


def reduce(v):
    """Tighten the three components against each other until they agree."""
    if isinstance(v, BoolAbs):
        return v
    w = v.width
    if v.is_bottom():
        return BVAbs.bottom(w)
    r = kernels.reduce_product(w, v.bits.zeros, v.bits.ones, v.s.lo, v.s.hi, v.u.lo, v.u.hi)
    if r is None:
        return BVAbs.bottom(w)
    z, o, slo, shi, ulo, uhi = r
    return BVAbs(BitwiseValue(w, z, o), SInterval(w, slo, shi), UInterval(w, ulo, uhi))


def _prefix_bits(lo, hi, w):
    m = (1 << w) - 1
    diff = lo ^ hi
    free = (1 << diff.bit_length()) - 1 if diff else 0
    fixed = m & ~free
    return BitwiseValue(w, (~lo & fixed) | free, (lo & fixed) | free)


def project(src: str, dst: str, value):
    """Carry one component's information into another domain (``"B"``, ``"S"``, ``"U"``)."""
    w = value.width
    if value.is_bottom():
        return {"B": BitwiseValue.bottom, "S": SInterval.bottom, "U": UInterval.bottom}[dst](w)
    if src == dst:
        return value
    m = (1 << w) - 1
    half = 1 << (w - 1)
    if src == "B":
        known1 = value.known_ones
        if dst == "U":
            return UInterval(w, known1, value.ones)
        if value.free & half:
            lo, hi = known1 | half, value.ones & ~half
        else:
            lo, hi = known1, value.ones
        return SInterval(w, SInterval.view(lo, w), SInterval.view(hi, w))
    if src == "U":
        if dst == "B":
            return _prefix_bits(value.lo, value.hi, w)
        if (value.lo ^ value.hi) & half:
            return SInterval.top(w)
        return SInterval(w, SInterval.view(value.lo, w), SInterval.view(value.hi, w))
    if dst == "B":
        if (value.lo < 0) != (value.hi < 0):
            return BitwiseValue.top(w)
        return _prefix_bits(value.lo & m, value.hi & m, w)
    if (value.lo < 0) != (value.hi < 0):
        return UInterval.top(w)
    return UInterval(w, value.lo & m, value.hi & m)


def concretize_if_small(v, limit: int = DEFAULT_CONCRETIZE_LIMIT):
    """Sorted members of ``v`` if the component sizes bound them by ``limit``, else None."""
    if isinstance(v, BoolAbs):
        return tuple(v.members())
    if v.is_bottom():
        return ()
    n_bits = v.bits.count()
    n_u = v.u.count()
    if min(n_bits, n_u, v.s.count()) > limit:
        return None
    if n_bits <= n_u and n_bits <= limit:
        return tuple(x for x in v.bits.members() if v.s.contains(x) and v.u.contains(x))
    if n_u <= limit:
        return tuple(x for x in range(v.u.lo, v.u.hi + 1) if v.bits.contains(x) and v.s.contains(x))
    m = (1 << v.width) - 1
    return tuple(sorted(x & m for x in range(v.s.lo, v.s.hi + 1)
                        if v.bits.contains(x) and v.u.contains(x)))


def _bool_forward(name, args):
    out = 0
    if name == "not":
        for a in args[0].members():
            out |= 1 << int(not a)
        return BoolAbs(out)
    f = BOOL_OPS[name]
    for a in args[0].members():
        for b in args[1].members():
            out |= 1 << int(f(a, b))
    return BoolAbs(out)


def _compare(name, a: BVAbs, b: BVAbs) -> BoolAbs:
    if name == "=":
        if a.singleton() is not None and a.singleton() == b.singleton():
            return BoolAbs.const(True)
        return BoolAbs.const(False) if a.meet(b).is_bottom() else BoolAbs.top()
    x, y = (a.u, b.u) if name in ("bvule", "bvult") else (a.s, b.s)
    if name in ("bvule", "bvsle"):
        if x.hi <= y.lo:
            return BoolAbs.const(True)
        if x.lo > y.hi:
            return BoolAbs.const(False)
    else:
        if x.hi < y.lo:
            return BoolAbs.const(True)
        if x.lo >= y.hi:
            return BoolAbs.const(False)
    return BoolAbs.top()


def _check_sorts(op, args):
    if len(args) != op.arity:
        raise TypeError(f"{op.name} expects {op.arity} abstract arguments")
    for a, s in zip(args, op.arg_sorts):
        ok = isinstance(a, BoolAbs) if isinstance(s, BoolSort) else (
            isinstance(a, BVAbs) and a.width == s.width)
        if not ok:
            raise TypeError(f"{op.name}: abstract argument {a} does not have sort {s}")


def forward(op, args):
    """Abstract result of applying ``op`` (an :class:`Operator`) to reduced arguments."""
    _check_sorts(op, args)
    name = op.name
    rsort = op.result_sort
    if any(a.is_bottom() for a in args):
        return bottom(rsort)
    vals = [a.singleton() for a in args]
    if all(v is not None for v in vals):
        return alpha_value(apply(op, vals), rsort)
    if name == "ite":
        c, t, e = args
        out = bottom(rsort)
        if c.may(True):
            out = out.join(t)
        if c.may(False):
            out = out.join(e)
        return out
    if name in BV_BINARY or name in BV_UNARY:
        bits = forward_bitwise(name, [a.bits for a in args])
        s = forward_interval(SInterval, name, [a.s for a in args])
        u = forward_interval(UInterval, name, [a.u for a in args])
        return reduce(BVAbs(bits, s, u))
    if name in BV_COMPARE or (name == "=" and isinstance(args[0], BVAbs)):
        return _compare(name, args[0], args[1])
    if name == "=":
        return BoolAbs(_eq_mask(args[0], args[1]))
    if name in BOOL_OPS:
        return _bool_forward(name, args)
    raise UnsupportedOperator(f"no abstract semantics for {name!r}")


def _eq_mask(a, b):
    out = 0
    for x in a.members():
        for y in b.members():
            out |= 1 << int(x == y)
    return out


def _bool_backward(name, i, result, args):
    x = args[i - 1]
    keep = 0
    for v in x.members():
        trial = list(args)
        trial[i - 1] = BoolAbs.const(v)
        if name == "=":
            r = BoolAbs(_eq_mask(trial[0], trial[1]))
        else:
            r = _bool_forward(name, trial)
        if r.meet(result).mask:
            keep |= 1 << int(v)
    return BoolAbs(keep)


def _with_u(x: BVAbs, lo, hi):
    return reduce(BVAbs(x.bits, x.s, x.u.meet(UInterval(x.width, lo, hi)) if lo <= hi
                        else UInterval.bottom(x.width)))


def _with_s(x: BVAbs, lo, hi):
    return reduce(BVAbs(x.bits, x.s.meet(SInterval(x.width, lo, hi)) if lo <= hi
                        else SInterval.bottom(x.width), x.u))


def _compare_backward(name, i, result: BoolAbs, args):
    verdict = result.singleton()
    x = args[i - 1]
    if verdict is None:
        return x
    if name == "=":
        return x.meet(args[2 - i]) if verdict else x
    unsigned = name in ("bvule", "bvult")
    strict = name in ("bvult", "bvslt")
    small, big = 1, 2
    if not verdict:
        # not (a <= b) is b < a, and not (a < b) is b <= a
        strict = not strict
        small, big = 2, 1
    gap = 1 if strict else 0
    view = (lambda v: v.u) if unsigned else (lambda v: v.s)
    lo_all, hi_all = (UInterval if unsigned else SInterval).bounds(x.width)
    if i == small:
        lo, hi = lo_all, view(args[big - 1]).hi - gap
    else:
        lo, hi = view(args[small - 1]).lo + gap, hi_all
    return (_with_u if unsigned else _with_s)(x, lo, hi)


def backward(op, i: int, result, args):
    """Refinement of ``args[i-1]`` given that ``op(args)`` must land in ``result``."""
    _check_sorts(op, args)
    name = op.name
    x = args[i - 1]
    if result.is_bottom() or any(a.is_bottom() for a in args):
        return bottom(op.arg_sorts[i - 1])
    if name == "ite":
        c, t, e = args
        if i == 1:
            keep = 0
            if not result.meet(t).is_bottom():
                keep |= 2
            if not result.meet(e).is_bottom():
                keep |= 1
            return c.meet(BoolAbs(keep))
        # a branch must produce the result only if it is certainly the one taken
        branch = i == 2
        other = e if branch else t
        if c.singleton() is branch or (c.may(branch) and result.meet(other).is_bottom()):
            return x.meet(result)
        return x
    if name in BV_BINARY or name in BV_UNARY:
        bits = backward_bitwise(name, i, result.bits, [a.bits for a in args])
        s = backward_interval(SInterval, name, i, result.s, [a.s for a in args])
        u = backward_interval(UInterval, name, i, result.u, [a.u for a in args])
        return reduce(BVAbs(bits.meet(x.bits), s.meet(x.s), u.meet(x.u)))
    if name in BV_COMPARE or (name == "=" and isinstance(x, BVAbs)):
        return _compare_backward(name, i, result, args)
    if name in BOOL_OPS or name == "=":
        return _bool_backward(name, i, result, args)
    raise UnsupportedOperator(f"no abstract semantics for {name!r}")


def leq(a, b) -> bool:
    return a.leq(b)


def meet(a, b):
    return a.meet(b)


def join(a, b):
    return a.join(b)


def sort_of_value(v):
    return BoolSort() if isinstance(v, BoolAbs) else BitVecSort(v.width)
