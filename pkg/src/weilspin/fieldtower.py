"""Exact arithmetic in the biquadratic tower Q <= F <= K.

F = Q(sqrt(p)) with p square-free (p = 1 is the sentinel for F = Q), and
K = F(sqrt(-q)) with q a positive rational.  Since q is rational the Galois
closure of K is K itself, so every embedding K -> C is realized exactly as
a pair of sign flips on sqrt(p) and sqrt(-q).

Every element of every subfield is stored in one fixed coordinate system:
the 4-tuple of rationals over the basis {1, sqrt(p), sqrt(-q), sqrt(p)*sqrt(-q)}.
When p = 1 the sqrt(p) coordinates are folded into the rational ones, so
degenerate towers share all code paths.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Union

Rational = Union[int, Fraction]

#: subfield tags, ordered by inclusion
SUBFIELDS = ("Q", "F", "K")


def _is_squarefree(n: int) -> bool:
    if n < 1:
        return False
    d = 2
    while d * d <= n:
        if n % (d * d) == 0:
            return False
        d += 1
    return True


class TowerSpec:
    """The pair (p, q) defining the tower Q <= Q(sqrt p) <= Q(sqrt p, sqrt -q)."""

    __slots__ = ("p", "q")

    def __init__(self, p: int, q: Rational):
        p = int(p)
        q = Fraction(q)
        if p != 1:
            if p < 2 or not _is_squarefree(p):
                raise ValueError(f"p must be 1 or square-free >= 2, got {p}")
        if q <= 0:
            raise ValueError(f"q must be a positive rational, got {q}")
        self.p = p
        self.q = q

    @property
    def e(self) -> int:
        """Degree [K:Q]; 2 when F = Q, 4 otherwise."""
        return 2 if self.p == 1 else 4

    @property
    def f_degree(self) -> int:
        return 1 if self.p == 1 else 2

    def __eq__(self, other) -> bool:
        return isinstance(other, TowerSpec) and self.p == other.p and self.q == other.q

    def __hash__(self):
        return hash((self.p, self.q))

    def __repr__(self):
        return f"TowerSpec(p={self.p}, q={self.q})"

    # -- elements ----------------------------------------------------------

    def elem(self, c0: Rational = 0, c1: Rational = 0, c2: Rational = 0, c3: Rational = 0) -> "FieldElem":
        return FieldElem(self, (Fraction(c0), Fraction(c1), Fraction(c2), Fraction(c3)))

    def zero(self) -> "FieldElem":
        return self.elem(0)

    def one(self) -> "FieldElem":
        return self.elem(1)

    def sqrt_p(self) -> "FieldElem":
        return self.elem(0, 1)

    def sqrt_minus_q(self) -> "FieldElem":
        return self.elem(0, 0, 1)

    def scalar(self, x) -> "FieldElem":
        """Coerce an int/Fraction/FieldElem into this tower."""
        if isinstance(x, FieldElem):
            if x.tower != self:
                raise ValueError("element belongs to a different tower")
            return x
        return self.elem(Fraction(x))

    # -- serialization ------------------------------------------------------

    def to_json(self) -> dict:
        return {"p": self.p, "q": {"num": self.q.numerator, "den": self.q.denominator}}

    @classmethod
    def from_json(cls, data: dict) -> "TowerSpec":
        return cls(int(data["p"]), parse_rational(data["q"]))


def parse_rational(data) -> Fraction:
    """Accept an int, [num, den], or {"num":..,"den":..}."""
    if isinstance(data, dict):
        return Fraction(int(data["num"]), int(data["den"]))
    if isinstance(data, (list, tuple)):
        num, den = data
        return Fraction(int(num), int(den))
    if isinstance(data, (int, str)):
        return Fraction(data)
    raise ValueError(f"cannot parse rational from {data!r}")


class FieldElem:
    """Element of the tower, as coordinates over {1, sqrt p, sqrt -q, sqrt p * sqrt -q}.

    Immutable.  Arithmetic raises on tower mismatch; division by zero is
    signaled with ZeroDivisionError.
    """

    __slots__ = ("tower", "c")

    def __init__(self, tower: TowerSpec, coords: tuple):
        if tower.p == 1 and (coords[1] or coords[3]):
            # sqrt(1) = 1: fold the degenerate coordinates
            coords = (coords[0] + coords[1], Fraction(0), coords[2] + coords[3], Fraction(0))
        self.tower = tower
        self.c = coords

    # -- predicates ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not any(self.c)

    def is_rational(self) -> bool:
        return not (self.c[1] or self.c[2] or self.c[3])

    def subfield(self) -> str:
        """Smallest tag in SUBFIELDS containing this element."""
        if self.is_rational():
            return "Q"
        if not (self.c[2] or self.c[3]):
            return "F"
        return "K"

    def in_subfield(self, tag: str) -> bool:
        return SUBFIELDS.index(self.subfield()) <= SUBFIELDS.index(tag)

    def as_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.c[0]

    # -- arithmetic ---------------------------------------------------------

    def _check(self, other) -> "FieldElem":
        if isinstance(other, FieldElem):
            if other.tower != self.tower:
                raise ValueError("tower mismatch")
            return other
        return self.tower.scalar(other)

    def __add__(self, other):
        other = self._check(other)
        a, b = self.c, other.c
        return FieldElem(self.tower, (a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]))

    __radd__ = __add__

    def __neg__(self):
        a = self.c
        return FieldElem(self.tower, (-a[0], -a[1], -a[2], -a[3]))

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        other = self._check(other)
        a, b = self.c, other.c
        if not (a[1] or a[2] or a[3]):  # rational fast path
            if not a[0]:
                return self.tower.zero()
            r = a[0]
            return FieldElem(self.tower, (r * b[0], r * b[1], r * b[2], r * b[3]))
        if not (b[1] or b[2] or b[3]):
            r = b[0]
            if not r:
                return self.tower.zero()
            return FieldElem(self.tower, (a[0] * r, a[1] * r, a[2] * r, a[3] * r))
        p, q = self.tower.p, self.tower.q
        c0 = a[0] * b[0] + p * a[1] * b[1] - q * a[2] * b[2] - p * q * a[3] * b[3]
        c1 = a[0] * b[1] + a[1] * b[0] - q * (a[2] * b[3] + a[3] * b[2])
        c2 = a[0] * b[2] + a[2] * b[0] + p * (a[1] * b[3] + a[3] * b[1])
        c3 = a[0] * b[3] + a[3] * b[0] + a[1] * b[2] + a[2] * b[1]
        return FieldElem(self.tower, (c0, c1, c2, c3))

    __rmul__ = __mul__

    def inv(self) -> "FieldElem":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in the tower field")
        # clear sqrt(-q) first: x * iota(x) lies in F, then invert in F
        xb = self.iota()
        f = self * xb  # in F
        f0, f1 = f.c[0], f.c[1]
        nrm = f0 * f0 - self.tower.p * f1 * f1  # rational norm of f over Q
        if nrm == 0:
            # only possible if f = 0, i.e. self = 0 (norm form anisotropic)
            raise ZeroDivisionError("inverse of zero in the tower field")
        f_inv = FieldElem(self.tower, (f0 / nrm, -f1 / nrm, Fraction(0), Fraction(0)))
        return xb * f_inv

    def __truediv__(self, other):
        return self * self._check(other).inv()

    def __rtruediv__(self, other):
        return self._check(other) * self.inv()

    def __pow__(self, k: int):
        if k < 0:
            return self.inv() ** (-k)
        out = self.tower.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- Galois -------------------------------------------------------------

    def iota(self) -> "FieldElem":
        """Conjugation over F: negates the sqrt(-q) coordinates."""
        a = self.c
        return FieldElem(self.tower, (a[0], a[1], -a[2], -a[3]))

    def conj_p(self) -> "FieldElem":
        """Conjugation over Q(sqrt -q): negates the sqrt(p) coordinates."""
        a = self.c
        return FieldElem(self.tower, (a[0], -a[1], a[2], -a[3]))

    # -- comparison / hashing -------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = self.tower.scalar(other)
        if not isinstance(other, FieldElem):
            return NotImplemented
        return self.tower == other.tower and self.c == other.c

    def __hash__(self):
        return hash((self.tower, self.c))

    def __repr__(self):
        parts = []
        names = ("", "*rp", "*rq", "*rp*rq")
        for coord, name in zip(self.c, names):
            if coord:
                parts.append(f"{coord}{name}")
        return "+".join(parts) if parts else "0"

    def to_json(self) -> list:
        return [[x.numerator, x.denominator] for x in self.c]

    @classmethod
    def from_json(cls, tower: TowerSpec, data) -> "FieldElem":
        return tower.elem(*[parse_rational(x) for x in data])


class Embedding:
    """An embedding of K into C at desk scale: a pair of sign flips.

    sign_p acts on sqrt(p), sign_q on sqrt(-q).  Composition with iota
    flips sign_q only.
    """

    __slots__ = ("sign_p", "sign_q")

    def __init__(self, sign_p: int, sign_q: int):
        if sign_p not in (1, -1) or sign_q not in (1, -1):
            raise ValueError("signs must be +-1")
        self.sign_p = sign_p
        self.sign_q = sign_q

    def __call__(self, a: FieldElem) -> FieldElem:
        c = a.c
        return FieldElem(
            a.tower,
            (c[0], self.sign_p * c[1], self.sign_q * c[2], self.sign_p * self.sign_q * c[3]),
        )

    def after_iota(self) -> "Embedding":
        return Embedding(self.sign_p, -self.sign_q)

    def restricts_to(self) -> int:
        """The sign_p value, i.e. the F-embedding below this one."""
        return self.sign_p

    def __eq__(self, other):
        return (
            isinstance(other, Embedding)
            and self.sign_p == other.sign_p
            and self.sign_q == other.sign_q
        )

    def __hash__(self):
        return hash((self.sign_p, self.sign_q))

    def __repr__(self):
        fmt = {1: "+", -1: "-"}
        return f"Embedding({fmt[self.sign_p]}rp,{fmt[self.sign_q]}rq)"


def f_embeddings(tower: TowerSpec) -> list:
    """Sign flips on sqrt(p); a single trivial one when F = Q."""
    return [1] if tower.p == 1 else [1, -1]


def k_embeddings(tower: TowerSpec) -> list:
    """All e embeddings of K, ordered deterministically."""
    return [Embedding(sp, sq) for sp in f_embeddings(tower) for sq in (1, -1)]


def galois_group(tower: TowerSpec) -> list:
    """All automorphisms of the (Galois) field K; same data as k_embeddings."""
    return k_embeddings(tower)


class CMType:
    """A choice, for each embedding of F, of one K-embedding above it.

    Stored as a tuple of sign_q values aligned with f_embeddings(tower).
    """

    __slots__ = ("tower", "choices")

    def __init__(self, tower: TowerSpec, choices: tuple):
        if len(choices) != tower.e // 2 or any(s not in (1, -1) for s in choices):
            raise ValueError("bad CM-type choices")
        self.tower = tower
        self.choices = tuple(choices)

    def conjugate(self) -> "CMType":
        return CMType(self.tower, tuple(-s for s in self.choices))

    def embeddings(self) -> list:
        return [Embedding(sp, sq) for sp, sq in zip(f_embeddings(self.tower), self.choices)]

    def overlap(self, other: "CMType") -> int:
        """|T cap T'|: the number of F-embeddings where the two choices agree."""
        return sum(1 for a, b in zip(self.choices, other.choices) if a == b)

    def __eq__(self, other):
        return (
            isinstance(other, CMType)
            and self.tower == other.tower
            and self.choices == other.choices
        )

    def __hash__(self):
        return hash((self.tower, self.choices))

    def __repr__(self):
        fmt = {1: "+", -1: "-"}
        return "CMType(" + "".join(fmt[s] for s in self.choices) + ")"


def enumerate_cm_types(tower: TowerSpec) -> list:
    """All 2^(e/2) CM-types, in lexicographic order with + before -."""
    half = tower.e // 2
    return [CMType(tower, ch) for ch in itertools.product((1, -1), repeat=half)]


def trace_to_Q(a: FieldElem, sub: str) -> Fraction:
    """Trace of a over Q, summing over the embeddings of the named subfield.

    Raises ValueError when a does not lie in the claimed subfield.
    """
    if sub not in ("F", "K"):
        raise ValueError(f"trace from {sub!r} not defined; use 'F' or 'K'")
    if not a.in_subfield(sub):
        raise ValueError(f"element {a} does not lie in {sub}")
    if sub == "F":
        return a.tower.f_degree * a.c[0]
    return a.tower.e * a.c[0]


def rational_components(a: FieldElem) -> tuple:
    """The 4 rational coordinates of a (zero-padded in degenerate towers)."""
    return a.c
