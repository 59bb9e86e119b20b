"""Brute-force coarsening closure and Xi sets on label strings.

Run: python3 xi_oracle.py
Moves: a = drop a block, b = merge two neighbouring blocks, c = drop labels
from the last block. Xi keeps Gamma strictly below p with >= 2 blocks that
does not hold every label of q and holds at least one label outside q.
"""
import itertools


def moves(p, kinds):
    out = set()
    if "a" in kinds:
        for i in range(len(p)):
            q = p[:i] + p[i + 1:]
            if q:
                out.add(q)
    if "b" in kinds:
        for i in range(len(p) - 1):
            out.add(p[:i] + (p[i] + p[i + 1],) + p[i + 2:])
    if "c" in kinds and len(p[-1]) >= 2:
        for r in range(1, len(p[-1])):
            for sub in itertools.combinations(p[-1], r):
                out.add(p[:-1] + ("".join(sub),))
    return out


def closure(p, kinds="abc"):
    seen, frontier = set(), [p]
    while frontier:
        nxt = []
        for x in frontier:
            for y in moves(x, kinds):
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return {x for x in seen if len(x) >= 2 and x != p}


def xi(p, q, kinds="abc"):
    ql = set("".join(q))
    return {x for x in closure(p, kinds)
            if not ql <= set("".join(x)) and set("".join(x)) - ql}


def fmt(p):
    return "|".join(p)


def parse(s):
    return tuple(s.split("|"))


if __name__ == "__main__":
    for p, q in [("A|B|CD|E", "A|B"), ("A|B|C|D|E", "A|C"), ("A|B|C|D", "A|B|C"), ("A|B|C|D", "A|B"),
                 ("A|B|C", "A|B")]:
        full = xi(parse(p), parse(q))
        c1 = xi(parse(p), parse(q), "a")
        print(f"Xi({p} - {q}): {len(full)}  {sorted(fmt(x) for x in full)}")
        print(f"  discard only: {len(c1)}  {sorted(fmt(x) for x in c1)}")
    for p in ["A|B|C", "A|BC", "A|B|C|D", "AB|CD"]:
        print(f"coarser({p}): all {len(closure(parse(p)))}, discard+merge {len(closure(parse(p), 'ab'))}")
