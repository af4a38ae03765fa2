"""Sparse exterior algebra over a tower field.

Basis elements of the exterior algebra on m generators are subsets of
{0..m-1} packed as bitmasks; a multivector is a sparse map mask -> FieldElem.
All Koszul signs come from inversion-counting between masks, so products
are O(#terms^2) with O(1) sign computation per pair.

The fixed orientation is g_1 ^ ... ^ g_m |-> 1: the top monomial has
integral one, and the spinor pairing refers to it.
"""

from __future__ import annotations

from fractions import Fraction

from .fieldtower import FieldElem, TowerSpec


def merge_sign(a: int, b: int) -> int:
    """Sign of sorting the concatenation of two disjoint ascending masks."""
    s = 0
    bb = b
    while bb:
        j = (bb & -bb).bit_length() - 1
        s ^= bin(a >> (j + 1)).count("1") & 1
        bb &= bb - 1
    return -1 if s else 1


class GeneratorSpace:
    """An ordered list of generator names over a tower field."""

    __slots__ = ("labels", "tower", "m", "top_mask")

    def __init__(self, labels, tower: TowerSpec):
        labels = tuple(labels)
        if len(set(labels)) != len(labels):
            raise ValueError("generator labels must be distinct")
        self.labels = labels
        self.tower = tower
        self.m = len(labels)
        self.top_mask = (1 << self.m) - 1

    def __eq__(self, other):
        return (
            isinstance(other, GeneratorSpace)
            and self.labels == other.labels
            and self.tower == other.tower
        )

    def __hash__(self):
        return hash((self.labels, self.tower))

    def __repr__(self):
        return f"GeneratorSpace({','.join(self.labels)})"

    def scalar(self, x) -> FieldElem:
        return self.tower.scalar(x)

    def zero(self) -> "Multivector":
        return Multivector(self, {})

    def one(self) -> "Multivector":
        return Multivector(self, {0: self.tower.one()})

    def gen(self, i: int) -> "Multivector":
        if not 0 <= i < self.m:
            raise IndexError(i)
        return Multivector(self, {1 << i: self.tower.one()})

    def monomial(self, mask: int, coeff=1) -> "Multivector":
        c = self.scalar(coeff)
        return Multivector(self, {mask: c} if not c.is_zero() else {})

    def basis_masks(self):
        return range(1 << self.m)


class Multivector:
    """Sparse exterior-algebra element; terms hold no zero coefficients."""

    __slots__ = ("space", "terms")

    def __init__(self, space: GeneratorSpace, terms: dict):
        self.space = space
        self.terms = {m: c for m, c in terms.items() if not c.is_zero()}

    # -- linear structure ----------------------------------------------------

    def __add__(self, other: "Multivector") -> "Multivector":
        if self.space != other.space:
            raise ValueError("generator space mismatch")
        out = dict(self.terms)
        for m, c in other.terms.items():
            if m in out:
                s = out[m] + c
                if s.is_zero():
                    del out[m]
                else:
                    out[m] = s
            else:
                out[m] = c
        return Multivector(self.space, out)

    def __neg__(self):
        return Multivector(self.space, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s) -> "Multivector":
        s = self.space.scalar(s)
        if s.is_zero():
            return self.space.zero()
        return Multivector(self.space, {m: c * s for m, c in self.terms.items()})

    __mul__ = scale
    __rmul__ = scale

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        return (
            isinstance(other, Multivector)
            and self.space == other.space
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.space, tuple(sorted(self.terms.items(), key=lambda t: t[0]))))

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for m in sorted(self.terms):
            names = [self.space.labels[i] for i in range(self.space.m) if m >> i & 1]
            mono = "^".join(names) if names else "1"
            bits.append(f"({self.terms[m]})*{mono}")
        return " + ".join(bits)

    # -- grading -------------------------------------------------------------

    def degree_part(self, k: int) -> "Multivector":
        return Multivector(
            self.space, {m: c for m, c in self.terms.items() if bin(m).count("1") == k}
        )

    def degrees(self):
        return sorted({bin(m).count("1") for m in self.terms})

    def min_degree(self) -> int:
        if not self.terms:
            raise ValueError("zero multivector has no degree")
        return min(bin(m).count("1") for m in self.terms)

    def coefficient(self, mask: int) -> FieldElem:
        return self.terms.get(mask, self.space.tower.zero())

    # -- coordinates ----------------------------------------------------------

    def to_coords(self) -> list:
        """Dense coordinate vector over all 2^m basis masks."""
        zero = self.space.tower.zero()
        out = [zero] * (1 << self.space.m)
        for m, c in self.terms.items():
            out[m] = c
        return out

    @classmethod
    def from_coords(cls, space: GeneratorSpace, coords) -> "Multivector":
        return cls(space, {m: c for m, c in enumerate(coords) if not c.is_zero()})

    def map_coefficients(self, f) -> "Multivector":
        return Multivector(self.space, {m: f(c) for m, c in self.terms.items()})

    def to_json(self) -> list:
        return [
            {"mask": m, "coeff": self.terms[m].to_json()} for m in sorted(self.terms)
        ]


def wedge(a: Multivector, b: Multivector) -> Multivector:
    if a.space != b.space:
        raise ValueError("generator space mismatch")
    out = {}
    for ma, ca in a.terms.items():
        for mb, cb in b.terms.items():
            if ma & mb:
                continue
            c = ca * cb
            if merge_sign(ma, mb) < 0:
                c = -c
            key = ma | mb
            if key in out:
                s = out[key] + c
                if s.is_zero():
                    del out[key]
                else:
                    out[key] = s
            else:
                out[key] = c
    return Multivector(a.space, out)


def contract(theta, a: Multivector) -> Multivector:
    """Interior product with the dual vector given by coefficients on generators.

    A graded derivation of degree -1: on a basis monomial g_S it gives
    sum over i in S of (-1)^(position of i in S) theta_i * g_(S without i).
    """
    space = a.space
    if len(theta) != space.m:
        raise ValueError("dual-vector coefficient list has wrong length")
    theta = [space.scalar(t) for t in theta]
    out = {}
    for m, c in a.terms.items():
        pos = 0
        mm = m
        while mm:
            i = (mm & -mm).bit_length() - 1
            if not theta[i].is_zero():
                coeff = theta[i] * c
                if pos & 1:
                    coeff = -coeff
                key = m ^ (1 << i)
                if key in out:
                    s = out[key] + coeff
                    if s.is_zero():
                        del out[key]
                    else:
                        out[key] = s
                else:
                    out[key] = coeff
            pos += 1
            mm &= mm - 1
    return Multivector(space, out)


def contract_gen(i: int, a: Multivector) -> Multivector:
    """Contraction with the dual of the i-th generator (fast path)."""
    bit = 1 << i
    out = {}
    for m, c in a.terms.items():
        if not m & bit:
            continue
        if bin(m & (bit - 1)).count("1") & 1:
            c = -c
        out[m ^ bit] = c
    return Multivector(a.space, out)


def tau(a: Multivector) -> Multivector:
    """Degree-i part scaled by (-1)^(i(i-1)/2); an involution."""
    out = {}
    for m, c in a.terms.items():
        i = bin(m).count("1")
        out[m] = -c if (i * (i - 1) // 2) & 1 else c
    return Multivector(a.space, out)


def s_pairing(a: Multivector, b: Multivector) -> FieldElem:
    """Coefficient of the top monomial in tau(a) ^ b."""
    if a.space != b.space:
        raise ValueError("generator space mismatch")
    top = a.space.top_mask
    tower = a.space.tower
    acc = tower.zero()
    for ma, ca in a.terms.items():
        mb = top ^ ma
        cb = b.terms.get(mb)
        if cb is None:
            continue
        i = bin(ma).count("1")
        c = ca * cb
        if (i * (i - 1) // 2) & 1:
            c = -c
        if merge_sign(ma, mb) < 0:
            c = -c
        acc = acc + c
    return acc


def exp_even(a: Multivector) -> Multivector:
    """Sum of a^k / k! for a nilpotent element of even positive degrees."""
    for m in a.terms:
        d = bin(m).count("1")
        if d == 0 or d & 1:
            raise ValueError("exp_even requires even positive degrees only")
    out = a.space.one()
    term = a.space.one()
    k = 0
    max_k = a.space.m // 2
    while k < max_k:
        k += 1
        term = wedge(term, a).scale(Fraction(1, k))
        if term.is_zero():
            break
        out = out + term
    return out


def kunneth(a: Multivector, b: Multivector, target: GeneratorSpace = None) -> Multivector:
    """Graded tensor embedding of a (x) b into the algebra on the joint generators.

    The first factor occupies the low bit positions, so no Koszul sign appears
    in the embedding itself; signs show up in products, via wedge.
    """
    if a.space.tower != b.space.tower:
        raise ValueError("tower mismatch")
    if target is None:
        target = GeneratorSpace(a.space.labels + b.space.labels, a.space.tower)
    if target.m != a.space.m + b.space.m:
        raise ValueError("target space has the wrong arity")
    shift = a.space.m
    out = {}
    for ma, ca in a.terms.items():
        for mb, cb in b.terms.items():
            out[ma | (mb << shift)] = ca * cb
    return Multivector(target, out)
