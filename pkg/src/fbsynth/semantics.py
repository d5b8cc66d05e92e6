"""Concrete SMT-LIB semantics of the supported operators.

Bit-vector values are held as unsigned Python ints in ``[0, 2**w)``;
Boolean values are Python bools.  Signed views are computed on demand.
"""

from __future__ import annotations

from dataclasses import dataclass

from .terms import BOOL, App, BitVecSort, BoolSort, Const, Hole, Operator, Term, Var


class EvalError(Exception):
    pass


class UnboundVariable(EvalError):
    pass


class SortMismatch(EvalError):
    pass


class HoleInTerm(EvalError):
    pass


class UnsupportedOperator(ValueError):
    pass


def mask(w: int) -> int:
    return (1 << w) - 1


def to_signed(v: int, w: int) -> int:
    return v - (1 << w) if v >> (w - 1) else v


def to_unsigned(x: int, w: int) -> int:
    return x & ((1 << w) - 1)


def bvnot(a, w):
    return ~a & mask(w)


def bvneg(a, w):
    return -a & mask(w)


def bvand(a, b, w):
    return a & b


def bvor(a, b, w):
    return a | b


def bvxor(a, b, w):
    return a ^ b


def bvadd(a, b, w):
    return (a + b) & mask(w)


def bvsub(a, b, w):
    return (a - b) & mask(w)


def bvmul(a, b, w):
    return (a * b) & mask(w)


def bvudiv(a, b, w):
    return mask(w) if b == 0 else a // b


def bvurem(a, b, w):
    return a if b == 0 else a % b


def bvsdiv(s, t, w):
    s_neg = s >> (w - 1)
    t_neg = t >> (w - 1)
    if not s_neg and not t_neg:
        return bvudiv(s, t, w)
    if s_neg and t_neg:
        return bvudiv(bvneg(s, w), bvneg(t, w), w)
    if s_neg:
        return bvneg(bvudiv(bvneg(s, w), t, w), w)
    return bvneg(bvudiv(s, bvneg(t, w), w), w)


def bvsrem(s, t, w):
    s_neg = s >> (w - 1)
    t_neg = t >> (w - 1)
    if not s_neg and not t_neg:
        return bvurem(s, t, w)
    if s_neg and t_neg:
        return bvneg(bvurem(bvneg(s, w), bvneg(t, w), w), w)
    if s_neg:
        return bvneg(bvurem(bvneg(s, w), t, w), w)
    return bvurem(s, bvneg(t, w), w)


def bvshl(a, b, w):
    return 0 if b >= w else (a << b) & mask(w)


def bvlshr(a, b, w):
    return 0 if b >= w else a >> b


def bvashr(a, b, w):
    if b >= w:
        return mask(w) if a >> (w - 1) else 0
    return (to_signed(a, w) >> b) & mask(w)


def bvule(a, b, w):
    return a <= b


def bvult(a, b, w):
    return a < b


def bvsle(a, b, w):
    return to_signed(a, w) <= to_signed(b, w)


def bvslt(a, b, w):
    return to_signed(a, w) < to_signed(b, w)


BV_UNARY = {"bvnot": bvnot, "bvneg": bvneg}
BV_BINARY = {
    "bvand": bvand, "bvor": bvor, "bvxor": bvxor,
    "bvadd": bvadd, "bvsub": bvsub, "bvmul": bvmul,
    "bvudiv": bvudiv, "bvurem": bvurem, "bvsdiv": bvsdiv, "bvsrem": bvsrem,
    "bvshl": bvshl, "bvlshr": bvlshr, "bvashr": bvashr,
}
BV_COMPARE = {"bvule": bvule, "bvult": bvult, "bvsle": bvsle, "bvslt": bvslt}
BOOL_OPS = {
    "and": lambda a, b: a and b,
    "or": lambda a, b: a or b,
    "xor": lambda a, b: a != b,
    "not": lambda a: not a,
}
SUPPORTED_OPERATORS = frozenset(BV_UNARY) | frozenset(BV_BINARY) | frozenset(BV_COMPARE) \
    | frozenset(BOOL_OPS) | {"=", "ite"}


def make_operator(name: str, arg_sorts) -> Operator:
    """Build an operator instance for the given argument sorts, checking them."""
    arg_sorts = tuple(arg_sorts)
    n = len(arg_sorts)

    def expect(ok, what):
        if not ok:
            sorts = " ".join(str(s) for s in arg_sorts)
            raise SortMismatch(f"{name} applied to ({sorts}): {what}")

    if name in BV_UNARY:
        expect(n == 1 and isinstance(arg_sorts[0], BitVecSort), "expects one bit-vector")
        return Operator(name, arg_sorts, arg_sorts[0])
    if name in BV_BINARY or name in BV_COMPARE:
        expect(n == 2 and isinstance(arg_sorts[0], BitVecSort) and arg_sorts[0] == arg_sorts[1],
               "expects two bit-vectors of equal width")
        return Operator(name, arg_sorts, BOOL if name in BV_COMPARE else arg_sorts[0])
    if name == "not":
        expect(arg_sorts == (BOOL,), "expects one Bool")
        return Operator(name, arg_sorts, BOOL)
    if name in BOOL_OPS:
        expect(arg_sorts == (BOOL, BOOL), "expects two Bools")
        return Operator(name, arg_sorts, BOOL)
    if name == "=":
        expect(n == 2 and arg_sorts[0] == arg_sorts[1], "expects two arguments of one sort")
        return Operator(name, arg_sorts, BOOL)
    if name == "ite":
        expect(n == 3 and arg_sorts[0] == BOOL and arg_sorts[1] == arg_sorts[2],
               "expects (Bool, T, T)")
        return Operator(name, arg_sorts, arg_sorts[1])
    raise UnsupportedOperator(f"unsupported operator {name!r}")


def apply(op: Operator, args):
    """Apply ``op`` to concrete argument values."""
    name = op.name
    f = BV_BINARY.get(name)
    if f is not None:
        return f(args[0], args[1], op.result_sort.width)
    f = BV_UNARY.get(name)
    if f is not None:
        return f(args[0], op.result_sort.width)
    f = BV_COMPARE.get(name)
    if f is not None:
        return f(args[0], args[1], op.arg_sorts[0].width)
    if name == "ite":
        return args[1] if args[0] else args[2]
    if name == "=":
        return args[0] == args[1]
    f = BOOL_OPS.get(name)
    if f is not None:
        return f(*args)
    raise UnsupportedOperator(f"unsupported operator {name!r}")


def check_value(value, sort):
    if isinstance(sort, BoolSort):
        if not isinstance(value, bool):
            raise SortMismatch(f"expected Bool, got {value!r}")
    elif isinstance(value, bool) or not isinstance(value, int) or value < 0 or value >> sort.width:
        raise SortMismatch(f"expected {sort}, got {value!r}")


def eval_term(t: Term, valuation: dict):
    """Evaluate a complete term under a variable valuation."""
    if isinstance(t, App):
        args = [eval_term(c, valuation) for c in t.children]
        return apply(t.op, args)
    if isinstance(t, Var):
        try:
            value = valuation[t.name]
        except KeyError:
            raise UnboundVariable(f"variable {t.name!r} is not bound") from None
        check_value(value, t.sort)
        return value
    if isinstance(t, Const):
        return t.value
    if isinstance(t, Hole):
        raise HoleInTerm(f"cannot evaluate hole {t.nonterminal}")
    raise TypeError(f"not a term: {t!r}")


@dataclass(frozen=True)
class Example:
    inputs: dict
    output: object

    def __hash__(self):
        return hash((tuple(sorted(self.inputs.items())), self.output))


def eval_outputs(t: Term, inputs) -> tuple:
    """Outputs of ``t`` on each input valuation."""
    return tuple(eval_term(t, v) for v in inputs)


def satisfies(t: Term, examples) -> bool:
    return all(eval_term(t, ex.inputs) == ex.output for ex in examples)


def compile_term(t: Term):
    """Closure evaluating a complete term; faster than :func:`eval_term` for hot loops."""
    if isinstance(t, Var):
        name = t.name
        return lambda v: v[name]
    if isinstance(t, Const):
        value = t.value
        return lambda v: value
    if isinstance(t, Hole):
        raise HoleInTerm(f"cannot evaluate hole {t.nonterminal}")
    op = t.op
    kids = [compile_term(c) for c in t.children]
    name = op.name
    if name in BV_BINARY:
        f, w = BV_BINARY[name], op.result_sort.width
        a, b = kids
        return lambda v: f(a(v), b(v), w)
    if name in BV_UNARY:
        f, w = BV_UNARY[name], op.result_sort.width
        (a,) = kids
        return lambda v: f(a(v), w)
    return lambda v: apply(op, [k(v) for k in kids])


def const(value: int, width: int) -> Const:
    return Const(value & mask(width), BitVecSort(width))


def var(name: str, sort) -> Var:
    return Var(name, sort)


def app(name: str, *children) -> App:
    return App(make_operator(name, [c.sort for c in children]), children)
