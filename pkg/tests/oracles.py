"""Brute-force reference computations, independent of the package internals.

Complexes are rebuilt directly from generator/arrow data as dense matrices;
ranks come from bitmask elimination over F2 and sympy over Q and F(T).
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product

from sympy import GF, Matrix, QQ, Rational, symbols
from sympy.polys.matrices import DomainMatrix


def rank_f2(rows: list[list[int]]) -> int:
    pivots: dict[int, int] = {}
    r = 0
    for row in rows:
        v = 0
        for i, x in enumerate(row):
            if x % 2:
                v |= 1 << i
        while v:
            top = v.bit_length() - 1
            if top in pivots:
                v ^= pivots[top]
            else:
                pivots[top] = v
                r += 1
                break
    return r


def rank_q(rows: list[list]) -> int:
    if not rows or not rows[0]:
        return 0
    return Matrix([[Rational(Fraction(x).numerator, Fraction(x).denominator) for x in row] for row in rows]).rank()


def rank_rational_functions(rows: list[list], char2: bool) -> int:
    """Rank over F(T); entries are sympy expressions in the symbol ``T``."""
    if not rows or not rows[0]:
        return 0
    T = symbols("T")
    K = (GF(2) if char2 else QQ).frac_field(T)
    dm = DomainMatrix([[K.from_sympy(x) for x in row] for row in rows], (len(rows), len(rows[0])), K)
    return dm.rank()


def _rank(rows, field):
    if field == "F2":
        return rank_f2(rows)
    if field == "Q":
        return rank_q(rows)
    return rank_rational_functions(rows, field == "F2(T)")


def homology_dims(basis, grading, boundary, field) -> dict:
    """Graded homology of an explicit finite complex (grading may be None)."""
    index = {b: n for n, b in enumerate(basis)}
    groups: dict = {}
    for b in basis:
        groups.setdefault(grading(b), []).append(b)
    graded = None not in groups

    def rank_from(src):
        if not src:
            return 0
        rows = []
        for b in src:
            row = [0] * len(basis)
            for t, c in boundary(b).items():
                row[index[t]] += c
            rows.append(row)
        return _rank(rows, field)

    ranks = {g: rank_from(bs) for g, bs in groups.items()}
    out = {}
    for g, bs in groups.items():
        incoming = ranks.get(g + 1, 0) if graded else ranks[g]
        d = len(bs) - ranks[g] - incoming
        if d:
            out[g] = d
    return out


def _gens(doc):
    return {g["name"]: (g["alexander"], Fraction(*g["maslov"])) for g in doc["generators"]}


def _base(doc):
    gens = _gens(doc)
    return max(gens, key=lambda n: (gens[n][1], [-ord(ch) for ch in n]))


def hfk_oracle(doc: dict, k: int) -> dict:
    gens = _gens(doc)
    base_m = gens[_base(doc)][1]
    basis = [n for n, (a, _) in gens.items() if a == k]

    def boundary(x):
        out = {}
        for ar in doc["arrows"]:
            if ar["from"] == x and ar["nw"] == 0 and ar["nz"] == 0:
                out[ar["to"]] = out.get(ar["to"], 0) + ar.get("coeff", 1)
        return out

    return homology_dims(basis, lambda x: int(gens[x][1] - base_m), boundary, doc.get("field", "F2"))


def region_bottom(alex: int, member) -> int:
    i = -60
    while not member(i, i + alex):
        i += 1
    return i


def truncated_region(doc: dict, member, delta: int, field: str | None = None) -> dict:
    """Homology dims of ker U^(delta+1) in the quotient complex C{member}."""
    gens = _gens(doc)
    base_m = gens[_base(doc)][1]
    field = field or doc.get("field", "F2")
    caps = {}
    basis = []
    for x, (a, _) in gens.items():
        b = region_bottom(a, member)
        caps[x] = (b, b + delta)
        basis.extend((x, i) for i in range(b, b + delta + 1))
    keyset = set(basis)

    def boundary(e):
        x, i = e
        out = {}
        for ar in doc["arrows"]:
            if ar["from"] != x:
                continue
            t = (ar["to"], i - ar["nw"])
            a = gens[ar["to"]][0]
            if member(t[1], t[1] + a):
                assert t in keyset
                out[t] = out.get(t, 0) + ar.get("coeff", 1)
        return out

    return homology_dims(basis, lambda e: int(gens[e[0]][1] - base_m) + 2 * e[1], boundary, field)


def module_pair_by_truncation(dims_at) -> tuple[int, int]:
    """(corank, finite dim) from total dims at three consecutive truncation levels."""
    (d0, n0), (d1, _), (d2, _) = dims_at
    step = d1 - d0
    assert d2 - d1 == step, "oracle truncation did not stabilise"
    residual = d0 - step * (n0 + 1)
    assert residual >= 0 and residual % 2 == 0
    return step, residual // 2


def A_member(k):
    return lambda i, j: i >= 0 or j >= k


def B_member(i, j):
    return i >= 0


def region_pair(doc, member, delta0=12) -> tuple[int, int]:
    dims = [(sum(truncated_region(doc, member, d).values()), d) for d in (delta0, delta0 + 1, delta0 + 2)]
    return module_pair_by_truncation(dims)


def brute_flip_signs(doc) -> list[dict]:
    """All sign assignments compatible with the flip (exhaustive search)."""
    names = sorted(_gens(doc))
    flip = doc["flip"]
    coeff = {(a["from"], a["to"], a["nw"], a["nz"]): a.get("coeff", 1) for a in doc["arrows"]}
    out = []
    for signs in product((1, -1), repeat=len(names)):
        eps = dict(zip(names, signs))
        if all(c * eps[y] == eps[x] * coeff[(flip[x], flip[y], nz, nw)]
               for (x, y, nw, nz), c in coeff.items()):
            out.append(eps)
    return out


def cone_pair_f2(doc: dict, k: int, twisted: bool = False, delta0: int = 14) -> tuple[int, int]:
    """Rank pair of the cone of v_k + h_k (or v_k + T h_k) over F2 or F2(T)."""
    gens = _gens(doc)
    flip = doc["flip"]
    T = symbols("T")
    memA = A_member(k)

    def dims(delta):
        basis = []
        for x, (a, _) in gens.items():
            b = region_bottom(a, memA)
            basis.extend(("A", x, i) for i in range(b, b + delta + 1))
            basis.extend(("B", x, i) for i in range(0, delta + 1))
        keyset = set(basis)

        def boundary(e):
            part, x, i = e
            out = {}

            def add(t, c):
                if t in keyset:
                    out[t] = out.get(t, 0) + c

            for ar in doc["arrows"]:
                if ar["from"] == x:
                    y, j = ar["to"], i - ar["nw"]
                    if part == "A" and memA(j, j + gens[y][0]):
                        add(("A", y, j), 1)
                    if part == "B" and j >= 0:
                        add(("B", y, j), 1)
            if part == "A":
                if i >= 0:
                    add(("B", x, i), 1)
                j = i + gens[x][0] - k
                if j >= 0:
                    add(("B", flip[x], j), T if twisted else 1)
            return out

        field = "F2(T)" if twisted else "F2"
        return sum(homology_dims(basis, lambda e: None, boundary, field).values())

    return module_pair_by_truncation([(dims(d), d) for d in (delta0, delta0 + 1, delta0 + 2)])
