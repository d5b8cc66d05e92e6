"""Sorts, operators, terms and positions.

Terms are immutable trees.  A term is one of :class:`Var`, :class:`Const`,
:class:`App` or :class:`Hole`; holes stand for a nonterminal that has not
been expanded yet, which turns a term into a sketch (partial program).

Positions are tuples of 1-based child indices; ``()`` is the root.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Union

Position = tuple  # tuple[int, ...]
ROOT: Position = ()


class InvalidPosition(ValueError):
    pass


@dataclass(frozen=True, slots=True)
class BitVecSort:
    width: int

    def __post_init__(self):
        if self.width < 1:
            raise ValueError(f"bit-vector width must be positive, got {self.width}")

    def __str__(self):
        return f"(_ BitVec {self.width})"


@dataclass(frozen=True, slots=True)
class BoolSort:
    def __str__(self):
        return "Bool"


BOOL = BoolSort()
Sort = Union[BitVecSort, BoolSort]


def width_of(sort: Sort) -> int:
    """Bit width of a sort; Bool counts as width 1."""
    return sort.width if isinstance(sort, BitVecSort) else 1


@dataclass(frozen=True, slots=True)
class Operator:
    """A function symbol with a fixed signature."""

    name: str
    arg_sorts: tuple
    result_sort: Sort

    @property
    def arity(self) -> int:
        return len(self.arg_sorts)

    def __str__(self):
        return self.name


class Term:
    __slots__ = ()

    size: int
    height: int
    complete: bool
    sort: Sort


class Var(Term):
    __slots__ = ("name", "sort")
    size = 1
    height = 0
    complete = True

    def __init__(self, name: str, sort: Sort):
        self.name = name
        self.sort = sort

    def __eq__(self, other):
        return isinstance(other, Var) and other.name == self.name and other.sort == self.sort

    def __hash__(self):
        return hash(("var", self.name))

    def __repr__(self):
        return f"Var({self.name!r})"


class Const(Term):
    __slots__ = ("value", "sort")
    size = 1
    height = 0
    complete = True

    def __init__(self, value, sort: Sort):
        if isinstance(sort, BoolSort):
            value = bool(value)
        elif not 0 <= value < (1 << sort.width):
            raise ValueError(f"constant {value} does not fit {sort}")
        self.value = value
        self.sort = sort

    def __eq__(self, other):
        return (isinstance(other, Const) and other.sort == self.sort
                and other.value == self.value)

    def __hash__(self):
        return hash(("const", self.value, self.sort))

    def __repr__(self):
        return f"Const({literal(self.value, self.sort)})"


class Hole(Term):
    __slots__ = ("nonterminal", "sort")
    size = 1
    height = 0
    complete = False

    def __init__(self, nonterminal: str, sort: Sort):
        self.nonterminal = nonterminal
        self.sort = sort

    def __eq__(self, other):
        return isinstance(other, Hole) and other.nonterminal == self.nonterminal

    def __hash__(self):
        return hash(("hole", self.nonterminal))

    def __repr__(self):
        return f"Hole({self.nonterminal!r})"


class App(Term):
    __slots__ = ("op", "children", "size", "height", "complete", "_hash")

    def __init__(self, op: Operator, children):
        children = tuple(children)
        if len(children) != op.arity:
            raise ValueError(f"{op.name} expects {op.arity} arguments, got {len(children)}")
        self.op = op
        self.children = children
        self.size = 1 + sum(c.size for c in children)
        self.height = 1 + max((c.height for c in children), default=-1)
        self.complete = all(c.complete for c in children)
        self._hash = hash((op.name, children))

    @property
    def sort(self):
        return self.op.result_sort

    def __eq__(self, other):
        if self is other:
            return True
        return (isinstance(other, App) and other._hash == self._hash
                and other.op == self.op and other.children == self.children)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"App({self.op.name}, {list(self.children)!r})"


def literal(value, sort: Sort) -> str:
    """SMT-LIB literal for a value of the given sort."""
    if isinstance(sort, BoolSort):
        return "true" if value else "false"
    w = sort.width
    if w % 4 == 0 and w >= 16:
        return "#x" + format(value, f"0{w // 4}x")
    return "#b" + format(value, f"0{w}b")


def to_sexpr(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Const):
        return literal(t.value, t.sort)
    if isinstance(t, Hole):
        return t.nonterminal
    return "(" + " ".join([t.op.name] + [to_sexpr(c) for c in t.children]) + ")"


def iter_positions(t: Term, prefix: Position = ROOT) -> Iterator[tuple]:
    """Yield ``(position, subterm)`` pairs in preorder."""
    yield prefix, t
    if isinstance(t, App):
        for i, c in enumerate(t.children, 1):
            yield from iter_positions(c, prefix + (i,))


def positions(t: Term) -> list:
    """All positions of ``t`` in preorder (leftmost-outermost)."""
    return [p for p, _ in iter_positions(t)]


def subterm_at(t: Term, p: Position) -> Term:
    for i in p:
        if not isinstance(t, App) or not 1 <= i <= len(t.children):
            raise InvalidPosition(f"position {format_position(p)} is not valid")
        t = t.children[i - 1]
    return t


def replace_at(t: Term, p: Position, u: Term) -> Term:
    if not p:
        return u
    i = p[0]
    if not isinstance(t, App) or not 1 <= i <= len(t.children):
        raise InvalidPosition(f"position {format_position(p)} is not valid")
    children = list(t.children)
    children[i - 1] = replace_at(children[i - 1], p[1:], u)
    return App(t.op, children)


def holes(t: Term) -> list:
    """``(position, nonterminal)`` for every hole, leftmost-outermost."""
    if t.complete:
        return []
    return [(p, s.nonterminal) for p, s in iter_positions(t) if isinstance(s, Hole)]


def size(t: Term) -> int:
    return t.size


def height(t: Term) -> int:
    return t.height


def is_complete(t: Term) -> bool:
    return t.complete


def format_position(p: Position) -> str:
    if not p:
        return "ε"
    sep = "." if any(i >= 10 for i in p) else ""
    return sep.join(str(i) for i in p)
