"""Sparse exact linear algebra over a :class:`~floerkit.fields.Field`.

Vectors are dicts mapping basis keys to nonzero coefficients.  Keys must be
mutually comparable; the pivot of a vector is its smallest key, so pivoting
is deterministic (for chain complexes keys are ``(generator, tower index)``
tuples, i.e. sorted by generator name, then tower index).
"""

from __future__ import annotations

from .fields import Field


def axpy(F: Field, c, x: dict, y: dict) -> None:
    """In place ``y += c * x``."""
    for k, v in x.items():
        w = F.add(y.get(k, F.zero), F.mul(c, v))
        if F.is_zero(w):
            y.pop(k, None)
        else:
            y[k] = w


def scale(F: Field, c, x: dict) -> dict:
    if F.is_zero(c):
        return {}
    return {k: F.mul(c, v) for k, v in x.items()}


def add(F: Field, x: dict, y: dict) -> dict:
    out = dict(x)
    axpy(F, F.one, y, out)
    return out


class Echelon:
    """Incrementally built row-echelon basis of a subspace.

    Each stored row optionally remembers how it was assembled from tagged
    input vectors (``combo``), which is what kernel and coordinate
    computations need.
    """

    def __init__(self, F: Field):
        self.F = F
        self.rows: dict = {}  # pivot -> (row, combo)

    def __len__(self):
        return len(self.rows)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, vec: dict, combo: dict | None = None):
        F = self.F
        vec = dict(vec)
        combo = dict(combo) if combo is not None else None
        while True:
            hits = [k for k in vec if k in self.rows]
            if not hits:
                return vec, combo
            p = min(hits)
            row, rc = self.rows[p]
            c = F.neg(vec[p])
            axpy(F, c, row, vec)
            if combo is not None and rc is not None:
                axpy(F, c, rc, combo)

    def insert(self, vec: dict, combo: dict | None = None):
        """Add ``vec``; returns ``(True, None)`` if it enlarged the span,
        otherwise ``(False, combo')`` where ``combo'`` is the relation found."""
        F = self.F
        r, rc = self.reduce(vec, combo)
        if not r:
            return False, rc
        p = min(r)
        s = F.inv(r[p])
        r = scale(F, s, r)
        if rc is not None:
            rc = scale(F, s, rc)
        self.rows[p] = (r, rc)
        return True, None

    def contains(self, vec: dict) -> bool:
        return not self.reduce(vec)[0]

    def copy(self) -> "Echelon":
        e = Echelon(self.F)
        e.rows = dict(self.rows)
        return e


def span(F: Field, vectors) -> Echelon:
    e = Echelon(F)
    for v in vectors:
        e.insert(v)
    return e


def rank(F: Field, vectors) -> int:
    return span(F, vectors).rank


def kernel(F: Field, images: dict) -> list[dict]:
    """Kernel of the linear map sending basis key ``k`` to ``images[k]``.

    Returns a basis of the kernel as vectors in the source basis.  Source
    keys are processed in sorted order.
    """
    e = Echelon(F)
    out = []
    for k in sorted(images):
        new, rel = e.insert(images[k], {k: F.one})
        if not new:
            out.append(rel)
    return out


def intersection_dim(F: Field, a: list[dict], b: list[dict]) -> int:
    return rank(F, a) + rank(F, b) - rank(F, list(a) + list(b))


def quotient_rank(F: Field, vectors, modulo: Echelon) -> int:
    """Dimension of ``(span(vectors) + modulo) / modulo``."""
    e = modulo.copy()
    before = e.rank
    for v in vectors:
        e.insert(v)
    return e.rank - before
