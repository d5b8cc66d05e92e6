import itertools
import random

import pytest

from fbsynth.domains.bitwise import (BitwiseValue, NonSingleton, WidthMismatch, alpha,
                                     backward_bitwise, extended_euclid, forward_bitwise, gamma,
                                     gamma_signed, gamma_unsigned, infer_mul_operand, mod_inverse,
                                     two_complement_repr)
from fbsynth.semantics import BV_BINARY, BV_UNARY

from oracles import all_bit_patterns, bits_members

B = BitwiseValue.parse
W = 4
PATTERNS = all_bit_patterns()
FORWARD_OPS = ["bvand", "bvor", "bvxor", "bvadd", "bvsub", "bvmul", "bvshl", "bvlshr", "bvashr",
               "bvudiv", "bvurem", "bvsdiv", "bvsrem"]


def test_two_complement_repr():
    assert two_complement_repr(5, 4) == "0101"
    assert two_complement_repr(-1, 4) == "1111"
    assert two_complement_repr(-8, 4) == "1000"
    with pytest.raises(ValueError):
        two_complement_repr(16, 4)
    with pytest.raises(ValueError):
        two_complement_repr(-9, 4)


def test_lattice_examples():
    assert str(B("TTTT").meet(B("0011"))) == "0011"
    assert B("0000").raw_meet(B("0011")) == "00BB"
    assert B("0000").meet(B("0011")).is_bottom()
    assert str(B("0101").join(B("0100"))) == "010T"
    with pytest.raises(WidthMismatch):
        B("01").join(B("011"))


def test_bottom_normalization():
    v = B("0B1T")
    assert v.is_bottom() and v == BitwiseValue.bottom(4)
    assert str(v) == "BBBB"


def test_alpha_gamma_examples():
    assert str(alpha({4, 5}, 4)) == "010T"
    assert alpha(set(), 4).is_bottom()
    assert gamma_unsigned(B("010T")) == {4, 5}
    assert gamma_signed(B("1T11")) == {-5, -1}
    assert gamma(B("1T11")) == {11, 15, -5, -1}
    assert gamma(B("BBBB")) == set()


def test_lattice_laws_exhaustive():
    vals = [B(p) for p in PATTERNS] + [BitwiseValue.bottom(W)]
    for a, b in itertools.product(vals, repeat=2):
        j, m = a.join(b), a.meet(b)
        assert a.leq(j) and b.leq(j)
        assert m.leq(a) and m.leq(b)
        assert set(m.members()) == set(a.members()) & set(b.members())
        assert (a.leq(b)) == (set(a.members()) <= set(b.members()))


def test_galois_connection_sampled():
    rng = random.Random(11)
    vals = [B(p) for p in PATTERNS]
    for _ in range(3000):
        zs = set(rng.sample(range(16), rng.randint(0, 5)))
        b = rng.choice(vals)
        assert alpha(zs, W).leq(b) == (zs <= set(b.members()))


def test_forward_examples():
    assert str(forward_bitwise("bvand", [B("1T10"), B("00TT")])) == "00T0"
    assert str(forward_bitwise("bvashr", [B("011T"), B("0001")])) == "0011"
    assert str(forward_bitwise("bvashr", [B("000T"), B("0001")])) == "0000"
    assert str(forward_bitwise("bvmul", [B("TT10"), B("T100")])) == "T000"
    assert str(forward_bitwise("bvneg", [B("0001")])) == "1111"


def _concrete(op, args):
    if op in BV_UNARY:
        return BV_UNARY[op](*args, W)
    return BV_BINARY[op](*args, W)


@pytest.mark.parametrize("op", FORWARD_OPS)
def test_forward_soundness_exhaustive(op):
    rng = random.Random(op)
    pairs = itertools.product(PATTERNS, repeat=2)
    sample = rng.sample(list(pairs), 1500)
    for pa, pb in sample:
        res = set(forward_bitwise(op, [B(pa), B(pb)]).members())
        for a, b in itertools.product(bits_members(pa), bits_members(pb)):
            assert _concrete(op, (a, b)) in res, (op, pa, pb, a, b)


@pytest.mark.parametrize("op", ["bvnot", "bvneg"])
def test_forward_unary_soundness(op):
    for pa in PATTERNS:
        res = set(forward_bitwise(op, [B(pa)]).members())
        assert {_concrete(op, (a,)) for a in bits_members(pa)} <= res


def test_ripple_carry_exact_on_singletons():
    for a, b in itertools.product(range(16), repeat=2):
        got = forward_bitwise("bvadd", [BitwiseValue.const(a, W), BitwiseValue.const(b, W)])
        assert got.singleton() == (a + b) % 16


def test_backward_examples():
    assert str(backward_bitwise("bvxor", 1, B("011T"), [B("TTTT"), B("1011")])) == "110T"
    assert str(backward_bitwise("bvand", 1, B("1T00"), [B("TTTT"), B("TT1T")])) == "1T0T"
    assert str(backward_bitwise("bvmul", 1, B("0011"), [B("TTTT"), B("1011")])) == "1001"
    assert str(backward_bitwise("bvashr", 1, B("0011"), [B("TTTT"), B("0001")])) == "011T"


@pytest.mark.parametrize("op", FORWARD_OPS + ["bvnot", "bvneg"])
def test_backward_soundness(op):
    rng = random.Random("back" + op)
    arity = 1 if op in BV_UNARY else 2
    for _ in range(1500):
        ps = [rng.choice(PATTERNS) for _ in range(arity)]
        r = rng.choice(PATTERNS)
        args = [B(p) for p in ps]
        rs = bits_members(r)
        refined = [set(backward_bitwise(op, i + 1, B(r), args).members()) for i in range(arity)]
        for combo in itertools.product(*[bits_members(p) for p in ps]):
            if _concrete(op, combo) in rs:
                for i, c in enumerate(combo):
                    assert c in refined[i], (op, ps, r, combo, i)


def test_backward_is_a_refinement():
    rng = random.Random(5)
    for _ in range(500):
        a, b, r = (B(rng.choice(PATTERNS)) for _ in range(3))
        for op in ("bvand", "bvor", "bvxor", "bvmul", "bvshl"):
            assert backward_bitwise(op, 1, r, [a, b]).leq(a)
            assert backward_bitwise(op, 2, r, [a, b]).leq(b)


def test_infer_mul_examples():
    c = BitwiseValue.const
    assert str(infer_mul_operand(c(0b1011, 4), c(0b0011, 4))) == "1001"
    assert str(infer_mul_operand(c(0, 4), c(0, 4))) == "TTTT"
    assert infer_mul_operand(c(0b0100, 4), c(0b0010, 4)).is_bottom()
    assert str(infer_mul_operand(c(0b0010, 4), c(0b0100, 4))) == "T010"
    with pytest.raises(NonSingleton):
        infer_mul_operand(B("T010"), c(1, 4))


def test_extended_euclid():
    for a, b in itertools.product(range(0, 40), repeat=2):
        g, s, t = extended_euclid(a, b)
        assert a * s + b * t == g
        if a or b:
            assert g > 0 and a % g == 0 and b % g == 0
    assert mod_inverse(3, 16) == 11
    with pytest.raises(ValueError):
        mod_inverse(2, 16)


def test_wide_values():
    a = BitwiseValue.const(0xFFFF_FFFF_FFFF_FFFF, 64)
    s = forward_bitwise("bvadd", [a, BitwiseValue.const(1, 64)])
    assert s.singleton() == 0
    assert BitwiseValue.top(128).count() == 1 << 128
