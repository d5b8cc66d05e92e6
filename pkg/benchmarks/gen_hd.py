"""Regenerate the 64-bit bit-twiddling suite in benchmarks/hd/.

Each problem is a reference function, a small operator set and a list of
example inputs.  Inputs mix fixed corner cases with random words drawn from
a seeded generator, so the output is reproducible:

    python3 benchmarks/gen_hd.py
"""

import random
from pathlib import Path

W = 64
M = (1 << W) - 1
SEED = 20260

LOGIC = ["bvand", "bvor", "bvxor", "bvnot"]
ARITH = ["bvadd", "bvsub", "bvneg"]
SHIFTS = ["bvlshr", "bvashr", "bvshl"]


def signed(v):
    return v - (1 << W) if v >> (W - 1) else v


PROBLEMS = [
    ("hd01", "turn off the rightmost 1-bit", 1, LOGIC + ARITH, [1], lambda x: x & (x - 1)),
    ("hd02", "turn off the trailing 1-bits", 1, LOGIC + ARITH, [1], lambda x: x & (x + 1)),
    ("hd03", "isolate the rightmost 1-bit", 1, LOGIC + ARITH, [1], lambda x: x & -x),
    ("hd04", "mask of the rightmost 1-bit and the trailing 0-bits", 1, LOGIC + ARITH, [1],
     lambda x: x ^ (x - 1)),
    ("hd05", "right-propagate the rightmost 1-bit", 1, LOGIC + ARITH, [1], lambda x: x | (x - 1)),
    ("hd06", "turn on the rightmost 0-bit", 1, LOGIC + ARITH, [1], lambda x: x | (x + 1)),
    ("hd07", "isolate the rightmost 0-bit", 1, LOGIC + ARITH, [1], lambda x: ~x & (x + 1)),
    ("hd08", "mask of the trailing 0-bits", 1, LOGIC + ARITH, [1], lambda x: ~x & (x - 1)),
    ("hd09", "mask of the trailing 1-bits", 1, LOGIC + ARITH + ["bvlshr"], [1],
     lambda x: (x ^ (x + 1)) >> 1),
    ("hd10", "absolute value", 1, ["bvxor", "bvadd", "bvsub", "bvashr"], [63],
     lambda x: abs(signed(x))),
    ("hd11", "floor of the average of two words", 2, LOGIC + ARITH + SHIFTS, [1],
     lambda x, y: (x + y) >> 1),
    ("hd12", "bits set in x but not in y", 2, LOGIC, [], lambda x, y: x & ~y),
    ("hd13", "ceiling of the average of two words", 2, LOGIC + ARITH + SHIFTS, [1],
     lambda x, y: (x + y + 1) >> 1),
    ("hd14", "turn off the rightmost run of 1-bits", 1, LOGIC + ARITH + SHIFTS, [1],
     lambda x: ((x | (x - 1)) + 1) & x),
]

EDGES = [0, 1, 2, M, M - 1, 1 << 63, (1 << 63) - 1, 0x00FF00FF00FF00FF, 0xF0F0F0F0F0F0F0F0]


def words(rng, k):
    out = []
    for _ in range(k):
        v = rng.getrandbits(W)
        # vary the low end so that rightmost-bit tricks see both runs of 0s and 1s
        t = rng.randrange(0, 16)
        v = (v >> t << t) | ((1 << rng.randrange(0, t + 1)) - 1 if rng.random() < 0.5 else 0)
        out.append(v & M)
    return out


def hexlit(v):
    return f"#x{v & M:016x}"


def render(name, doc, arity, ops, consts, fn, rng):
    params = ["x", "y"][:arity]
    sort = "(_ BitVec 64)"
    sig = " ".join(f"({p} {sort})" for p in params)
    alts = params + [hexlit(c) for c in consts]
    for op in ops:
        alts.append(f"({op} Start)" if op in ("bvnot", "bvneg") else f"({op} Start Start)")
    lines = [f"; {doc}", "(set-logic BV)", f"(synth-fun f ({sig}) {sort}",
             f"  ((Start {sort}))", f"  ((Start {sort} ({' '.join(alts)}))))"]
    if arity == 1:
        inputs = [(v,) for v in EDGES[:5] + words(rng, 5)]
    else:
        ws = words(rng, 16)
        inputs = [(0, 0), (M, 1), (1 << 63, 1 << 63)] + list(zip(ws[::2], ws[1::2]))[:7]
    for args in inputs:
        out = fn(*args) & M
        call = " ".join(hexlit(a) for a in args)
        lines.append(f"(constraint (= (f {call}) {hexlit(out)}))")
    lines.append("(check-synth)")
    return "\n".join(lines) + "\n"


def main():
    rng = random.Random(SEED)
    root = Path(__file__).resolve().parent / "hd"
    root.mkdir(exist_ok=True)
    for name, doc, arity, ops, consts, fn in PROBLEMS:
        (root / f"{name}.sl").write_text(render(name, doc, arity, ops, consts, fn, rng))


if __name__ == "__main__":
    main()
