"""Reader and writer for a programming-by-example subset of the SyGuS format.

Accepted commands: ``set-logic`` (any logic name), ``set-option`` and
``declare-var`` (ignored), ``synth-fun`` with an explicit grammar in either
the v2 form (nonterminal declarations followed by grouped rules) or the v1
form (grouped rules only), ``constraint`` of the shape
``(= (f lit ...) lit)`` or its mirror, and ``check-synth``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .grammar import GrammarError, Production, RegularTreeGrammar
from .semantics import Example, SortMismatch, UnsupportedOperator, make_operator
from .terms import BOOL, App, BitVecSort, Const, Hole, Term, Var, literal, to_sexpr


class SygusError(ValueError):
    pass


class ParseError(SygusError):
    def __init__(self, message, line=None, col=None):
        self.line, self.col = line, col
        where = f"line {line}, column {col}: " if line is not None else ""
        super().__init__(where + message)


class UnsupportedFeature(SygusError):
    pass


class NonPBEConstraint(SygusError):
    pass


class IncompleteTerm(SygusError):
    pass


class Sym(str):
    line = col = None


class SList(list):
    line = col = None


def _located(obj, line, col):
    obj.line, obj.col = line, col
    return obj


def read_sexprs(text: str) -> list:
    """Parse all top-level s-expressions, keeping source locations."""
    stack = [SList()]
    i, line, col = 0, 1, 1
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            i, line, col = i + 1, line + 1, 1
            continue
        if ch.isspace():
            i, col = i + 1, col + 1
            continue
        if ch == ";":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch == "(":
            stack.append(_located(SList(), line, col))
            i, col = i + 1, col + 1
            continue
        if ch == ")":
            if len(stack) == 1:
                raise ParseError("unbalanced ')'", line, col)
            done = stack.pop()
            stack[-1].append(done)
            i, col = i + 1, col + 1
            continue
        if ch == '"':
            j = text.find('"', i + 1)
            if j < 0:
                raise ParseError("unterminated string", line, col)
            stack[-1].append(_located(Sym(text[i:j + 1]), line, col))
            col += j + 1 - i
            i = j + 1
            continue
        j = i
        while j < n and not text[j].isspace() and text[j] not in "();":
            j += 1
        stack[-1].append(_located(Sym(text[i:j]), line, col))
        col += j - i
        i = j
    if len(stack) != 1:
        open_ = stack[-1]
        raise ParseError("unbalanced '('", open_.line, open_.col)
    return stack[0]


def _loc(x):
    return getattr(x, "line", None), getattr(x, "col", None)


def _fail(msg, where):
    raise ParseError(msg, *_loc(where))


def parse_sort(x) -> object:
    if isinstance(x, Sym):
        if x == "Bool":
            return BOOL
        _fail(f"unknown sort {x}", x)
    if len(x) == 3 and x[0] == "_" and x[1] == "BitVec":
        try:
            return BitVecSort(int(x[2]))
        except ValueError:
            _fail(f"bad bit-vector width {x[2]}", x)
    _fail("unsupported sort", x)


def parse_literal(x):
    """Return ``(value, sort)`` for a literal s-expression, or None if ``x`` is not one."""
    if isinstance(x, Sym):
        if x in ("true", "false"):
            return x == "true", BOOL
        if x.startswith("#b") and len(x) > 2 and set(x[2:]) <= {"0", "1"}:
            return int(x[2:], 2), BitVecSort(len(x) - 2)
        if x.startswith("#x") and len(x) > 2:
            try:
                return int(x[2:], 16), BitVecSort(4 * (len(x) - 2))
            except ValueError:
                _fail(f"bad hex literal {x}", x)
        return None
    if (isinstance(x, SList) and len(x) == 3 and x[0] == "_" and isinstance(x[1], Sym)
            and x[1].startswith("bv") and x[1][2:].isdigit()):
        w = int(x[2])
        value = int(x[1][2:])
        if value >> w:
            _fail(f"{x[1]} does not fit in {w} bits", x)
        return value, BitVecSort(w)
    return None


@dataclass
class SynthProblem:
    name: str
    params: list          # [(name, sort)]
    return_sort: object
    grammar: RegularTreeGrammar
    examples: list        # [Example]
    logic: str = "BV"

    @property
    def width(self) -> int:
        s = self.return_sort
        return s.width if isinstance(s, BitVecSort) else 1

    @property
    def inputs(self) -> list:
        return [ex.inputs for ex in self.examples]


class _GrammarBuilder:
    def __init__(self, params, decls, where):
        self.params = dict(params)
        self.sorts = dict(decls)
        self.rules = {nt: [] for nt in self.sorts}   # nt -> list of (kind, payload)
        self.where = where
        self.fresh = 0

    def _new_nt(self, sort):
        while True:
            self.fresh += 1
            name = f"_N{self.fresh}"
            if name not in self.sorts:
                break
        self.sorts[name] = sort
        self.rules[name] = []
        return name

    def add(self, nt, prod):
        sort = self.sorts[nt]
        if isinstance(prod, Sym):
            if prod in self.sorts:
                self.rules[nt].append(("unit", str(prod)))
                return
            if prod in self.params:
                psort = self.params[prod]
                if psort != sort:
                    _fail(f"{prod} has sort {psort}, {nt} has {sort}", prod)
                self.rules[nt].append(("leaf", Var(str(prod), psort)))
                return
        lit = parse_literal(prod)
        if lit is not None:
            value, lsort = lit
            if lsort != sort:
                _fail(f"literal {prod} does not have sort {sort}", prod)
            self.rules[nt].append(("leaf", Const(value, lsort)))
            return
        if isinstance(prod, Sym):
            _fail(f"unknown symbol {prod}", prod)
        if not prod or not isinstance(prod[0], Sym):
            _fail("malformed production", prod)
        head = prod[0]
        if head in ("Constant", "Variable", "InputVariable", "LocalVariable"):
            raise UnsupportedFeature(f"({head} ...) productions are not supported")
        if head in ("let", "_"):
            raise UnsupportedFeature(f"{head} in grammars is not supported")
        args = [self._arg(a) for a in prod[1:]]
        try:
            op = make_operator(str(head), [self.sorts[a] for a in args])
        except UnsupportedOperator as exc:
            raise UnsupportedFeature(str(exc)) from None
        except SortMismatch as exc:
            _fail(str(exc), prod)
        if op.result_sort != sort:
            _fail(f"{head} produces {op.result_sort}, {nt} has {sort}", prod)
        self.rules[nt].append(("app", (op, tuple(args))))

    def _arg(self, a):
        if isinstance(a, Sym) and a in self.sorts:
            return str(a)
        sort = self._infer(a)
        nt = self._new_nt(sort)
        self.add(nt, a)
        return nt

    def _infer(self, a):
        if isinstance(a, Sym) and a in self.params:
            return self.params[a]
        lit = parse_literal(a)
        if lit is not None:
            return lit[1]
        if isinstance(a, SList) and a and isinstance(a[0], Sym):
            kids = [self.sorts[k] if isinstance(k, Sym) and k in self.sorts else self._infer(k)
                    for k in a[1:]]
            try:
                return make_operator(str(a[0]), kids).result_sort
            except UnsupportedOperator as exc:
                raise UnsupportedFeature(str(exc)) from None
            except SortMismatch as exc:
                _fail(str(exc), a)
        _fail(f"cannot interpret {a}", a)

    def build(self, start):
        # inline unit productions A -> B by copying B's alternatives into A
        resolved = {}

        def expand(nt, visiting):
            if nt in resolved:
                return resolved[nt]
            out = []
            for kind, payload in self.rules[nt]:
                if kind == "unit":
                    if self.sorts[payload] != self.sorts[nt]:
                        _fail(f"{payload} and {nt} have different sorts", self.where)
                    if payload not in visiting:
                        out.extend(expand(payload, visiting | {payload}))
                else:
                    out.append((kind, payload))
            seen, uniq = set(), []
            for r in out:
                key = (r[0], r[1])
                if key not in seen:
                    seen.add(key)
                    uniq.append(r)
            if not visiting - {nt}:
                resolved[nt] = uniq
            return uniq

        prods = []
        for nt in self.sorts:
            for kind, payload in expand(nt, {nt}):
                if kind == "leaf":
                    prods.append(Production(nt, payload))
                else:
                    prods.append(Production(nt, payload[0], payload[1]))
        try:
            return RegularTreeGrammar(self.sorts, start, prods)
        except GrammarError as exc:
            _fail(str(exc), self.where)


def _parse_synth_fun(cmd):
    if len(cmd) < 4:
        _fail("synth-fun needs a name, parameters and a sort", cmd)
    name = str(cmd[1])
    params = []
    for p in cmd[2]:
        if not isinstance(p, SList) or len(p) != 2 or not isinstance(p[0], Sym):
            _fail("malformed parameter", p)
        params.append((str(p[0]), parse_sort(p[1])))
    ret = parse_sort(cmd[3])
    rest = cmd[4:]
    if not rest:
        raise UnsupportedFeature("synth-fun without a grammar is not supported")
    if len(rest) == 2:
        decls = []
        for d in rest[0]:
            if not isinstance(d, SList) or len(d) != 2:
                _fail("malformed nonterminal declaration", d)
            decls.append((str(d[0]), parse_sort(d[1])))
        groups = rest[1]
    elif len(rest) == 1:
        groups = rest[0]
        decls = []
        for g in groups:
            if not isinstance(g, SList) or len(g) != 3:
                _fail("malformed grammar rule", g)
            decls.append((str(g[0]), parse_sort(g[1])))
    else:
        _fail("unexpected synth-fun arguments", cmd)
    if not decls:
        _fail("empty grammar", cmd)
    builder = _GrammarBuilder(params, decls, cmd)
    for g in groups:
        if not isinstance(g, SList) or len(g) != 3 or not isinstance(g[2], SList):
            _fail("malformed grammar rule", g)
        nt = str(g[0])
        if nt not in builder.sorts:
            _fail(f"rule for undeclared nonterminal {nt}", g)
        if parse_sort(g[1]) != builder.sorts[nt]:
            _fail(f"sort of {nt} differs from its declaration", g)
        for prod in g[2]:
            builder.add(nt, prod)
    grammar = builder.build(decls[0][0])
    if grammar.sort_of(grammar.start) != ret:
        _fail("start nonterminal sort differs from the function's sort", cmd)
    return name, params, ret, grammar


def _parse_constraint(cmd, name, params, ret):
    if len(cmd) != 2:
        _fail("constraint takes one term", cmd)
    body = cmd[1]
    if not (isinstance(body, SList) and len(body) == 3 and body[0] == "="):
        raise NonPBEConstraint(f"line {cmd.line}: constraint is not an equation")

    def is_call(x):
        return isinstance(x, SList) and x and x[0] == name

    lhs, rhs = body[1], body[2]
    if is_call(rhs) and not is_call(lhs):
        lhs, rhs = rhs, lhs
    if not is_call(lhs):
        raise NonPBEConstraint(f"line {cmd.line}: no application of {name}")
    out = parse_literal(rhs)
    if out is None:
        raise NonPBEConstraint(f"line {cmd.line}: right-hand side is not a literal")
    if len(lhs) - 1 != len(params):
        _fail(f"{name} expects {len(params)} arguments", lhs)
    inputs = {}
    for (pname, psort), a in zip(params, lhs[1:]):
        lit = parse_literal(a)
        if lit is None:
            raise NonPBEConstraint(f"line {cmd.line}: argument {a} is not a literal")
        if lit[1] != psort:
            _fail(f"argument for {pname} does not have sort {psort}", a)
        inputs[pname] = lit[0]
    if out[1] != ret:
        _fail(f"output literal does not have sort {ret}", rhs)
    return Example(inputs, out[0])


def parse_problem(text: str) -> SynthProblem:
    """Parse a SyGuS PBE problem."""
    cmds = read_sexprs(text)
    logic = "BV"
    fun = None
    examples = []
    pending = []
    for cmd in cmds:
        if not isinstance(cmd, SList) or not cmd or not isinstance(cmd[0], Sym):
            _fail("expected a command", cmd)
        head = cmd[0]
        if head == "set-logic":
            logic = str(cmd[1]) if len(cmd) > 1 else logic
        elif head in ("set-option", "declare-var", "check-synth", "set-info"):
            continue
        elif head == "synth-fun":
            if fun is not None:
                raise UnsupportedFeature("only one synth-fun per file is supported")
            fun = _parse_synth_fun(cmd)
        elif head == "constraint":
            pending.append(cmd)
        else:
            raise UnsupportedFeature(f"line {cmd.line}: command {head} is not supported")
    if fun is None:
        raise ParseError("no synth-fun command")
    name, params, ret, grammar = fun
    for cmd in pending:
        examples.append(_parse_constraint(cmd, name, params, ret))
    if not examples:
        raise NonPBEConstraint("no input-output constraints")
    return SynthProblem(name, params, ret, grammar, examples, logic)


def parse_sketch(problem: SynthProblem, text: str) -> Term:
    """Parse a term in which nonterminal names stand for holes, e.g. ``(bvashr (bvxor S x) #b0001)``."""
    g = problem.grammar
    params = dict(problem.params)
    exprs = read_sexprs(text)
    if len(exprs) != 1:
        raise ParseError("expected exactly one term")

    def build(x):
        if isinstance(x, Sym):
            if x in g.nonterminals:
                return Hole(str(x), g.sort_of(str(x)))
            if x in params:
                return Var(str(x), params[x])
        lit = parse_literal(x)
        if lit is not None:
            return Const(*lit)
        if isinstance(x, Sym) or not x or not isinstance(x[0], Sym):
            _fail(f"cannot interpret {x}", x)
        kids = [build(a) for a in x[1:]]
        try:
            op = make_operator(str(x[0]), [k.sort for k in kids])
        except (UnsupportedOperator, SortMismatch) as exc:
            _fail(str(exc), x)
        return App(op, kids)

    return build(exprs[0])


def _signature(problem):
    params = " ".join(f"({n} {str(s)})" for n, s in problem.params)
    return f"({params}) {str(problem.return_sort)}"


def render_solution(problem: SynthProblem, t: Term) -> str:
    if not t.complete:
        raise IncompleteTerm("cannot render a term with holes")
    return f"(define-fun {problem.name} {_signature(problem)} {to_sexpr(t)})"


def _production_text(p: Production) -> str:
    if p.is_leaf:
        h = p.head
        return h.name if isinstance(h, Var) else literal(h.value, h.sort)
    return "(" + " ".join([p.head.name, *p.args]) + ")"


def render_problem(problem: SynthProblem) -> str:
    """Write a problem back out in the v2 dialect accepted by :func:`parse_problem`."""
    g = problem.grammar
    order = [g.start] + [nt for nt in g.nonterminals if nt != g.start]
    decls = " ".join(f"({nt} {str(g.sort_of(nt))})" for nt in order)
    rules = []
    for nt in order:
        alts = " ".join(_production_text(p) for p in g.productions_for(nt))
        rules.append(f"   ({nt} {str(g.sort_of(nt))} ({alts}))")
    lines = [f"(set-logic {problem.logic})",
             f"(synth-fun {problem.name} {_signature(problem)}",
             f"  ({decls})",
             "  (\n" + "\n".join(rules) + "))"]
    for ex in problem.examples:
        args = " ".join(literal(ex.inputs[n], s) for n, s in problem.params)
        out = literal(ex.output, problem.return_sort)
        call = f"({problem.name} {args})" if args else f"({problem.name})"
        lines.append(f"(constraint (= {call} {out}))")
    lines.append("(check-synth)")
    return "\n".join(lines) + "\n"


__all__ = ["SynthProblem", "parse_problem", "parse_sketch", "render_solution", "render_problem", "ParseError",
           "UnsupportedFeature", "NonPBEConstraint", "IncompleteTerm", "SygusError",
           "read_sexprs", "parse_sort", "parse_literal"]
