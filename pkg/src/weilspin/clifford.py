"""Clifford algebra of the hyperbolic space V = H1(X) + H1(Xhat).

V has basis x_1..x_2n, y_1..y_2n with (x_i, y_j) = delta_ij and both blocks
isotropic.  C(V) is stored in normal order: each monomial is a subset of the
4n generators read as the ascending x-block followed by the ascending
y-block, i.e. exterior-algebra data on V with a rewriting product.  The
generators satisfy v.w + w.v = (v, w) * 1.

The spinor module S is the exterior algebra on the x-block: x's act by
wedging, y's by contraction, so desymbol (operator -> normal-ordered
element) is Wick extraction by annihilation degree instead of a dense
matrix inversion.
"""

from __future__ import annotations

from fractions import Fraction

from .exteralg import (
    GeneratorSpace,
    Multivector,
    contract_gen,
    merge_sign,
    wedge,
)
from .fieldtower import FieldElem, TowerSpec


class HyperbolicSpace:
    """The rank-4n quadratic space with its spinor exterior algebra."""

    __slots__ = ("n", "tower", "vspace", "sspace")

    def __init__(self, n: int, tower: TowerSpec):
        if n < 1:
            raise ValueError("n must be >= 1")
        self.n = n
        self.tower = tower
        xs = [f"x{i+1}" for i in range(2 * n)]
        ys = [f"y{i+1}" for i in range(2 * n)]
        self.vspace = GeneratorSpace(xs + ys, tower)
        self.sspace = GeneratorSpace(xs, tower)

    @property
    def dim_v(self) -> int:
        return 4 * self.n

    def is_x(self, i: int) -> bool:
        return i < 2 * self.n

    def partner(self, i: int) -> int:
        """Index of the unique generator pairing nontrivially with i."""
        return i + 2 * self.n if self.is_x(i) else i - 2 * self.n

    def gram(self, i: int, j: int) -> int:
        return 1 if self.partner(i) == j else 0

    def pair(self, u, v) -> FieldElem:
        """The bilinear pairing of two coordinate vectors."""
        acc = self.tower.zero()
        for i, ui in enumerate(u):
            if isinstance(ui, FieldElem) and ui.is_zero():
                continue
            vj = v[self.partner(i)]
            acc = acc + self.tower.scalar(ui) * self.tower.scalar(vj)
        return acc

    def vector(self, coords) -> list:
        if len(coords) != self.dim_v:
            raise ValueError("coordinate vector has wrong length")
        return [self.tower.scalar(c) for c in coords]

    def vector_to_mv(self, coords) -> Multivector:
        return Multivector(
            self.vspace,
            {1 << i: self.tower.scalar(c) for i, c in enumerate(coords)},
        )

    def mv_to_vector(self, mv: Multivector) -> list:
        out = [self.tower.zero()] * self.dim_v
        for m, c in mv.terms.items():
            if bin(m).count("1") != 1:
                raise ValueError("not a degree-1 element")
            out[m.bit_length() - 1] = c
        return out


def clifford_action(elem: Multivector, lam: Multivector, space: HyperbolicSpace) -> Multivector:
    """Apply a normal-ordered element of C(V) to a spinor in S.

    A monomial x_A y_B acts as the composition of the x-wedges after the
    y-contractions, each block taken in ascending index order.
    """
    n2 = 2 * space.n
    out = lam.space.zero()
    for mask, coeff in elem.terms.items():
        xmask = mask & ((1 << n2) - 1)
        ymask = mask >> n2
        cur = lam
        # rightmost contraction acts first
        mm = ymask
        ybits = []
        while mm:
            ybits.append((mm & -mm).bit_length() - 1)
            mm &= mm - 1
        for j in reversed(ybits):
            cur = contract_gen(j, cur)
            if cur.is_zero():
                break
        if cur.is_zero():
            continue
        cur = wedge(Multivector(lam.space, {xmask: lam.space.tower.one()}), cur)
        out = out + cur.scale(coeff)
    return out


def _mono_times_x(space: HyperbolicSpace, xmask: int, ymask: int, i: int):
    """Normal-order (x_A y_B) * x_i; yields (xmask, ymask, sign) triples."""
    if not ymask:
        bit = 1 << i
        if xmask & bit:
            return
        sign = merge_sign(xmask, bit)
        yield xmask | bit, 0, sign
        return
    b = ymask.bit_length() - 1  # largest y index present
    rest = ymask ^ (1 << b)
    if b == i:
        yield xmask, rest, 1
    for xm, ym, s in _mono_times_x(space, xmask, rest, i):
        # re-append y_b at the end of the (smaller) y-block
        yield xm, ym | (1 << b), -s


def clifford_mul(a: Multivector, b: Multivector, space: HyperbolicSpace) -> Multivector:
    """Normal-ordered product in C(V)."""
    if a.space != space.vspace or b.space != space.vspace:
        raise ValueError("operands must live on the Clifford generator space")
    n2 = 2 * space.n
    tower = space.tower
    out = {}
    for bmask, bcoeff in b.terms.items():
        # current partial products: (xmask, ymask) -> coefficient
        cur = {}
        for amask, acoeff in a.terms.items():
            key = (amask & ((1 << n2) - 1), amask >> n2)
            cur[key] = cur.get(key, tower.zero()) + acoeff * bcoeff
        # multiply by each generator of the b-monomial in normal order
        gens = [i for i in range(4 * space.n) if bmask >> i & 1]
        for g in gens:
            nxt = {}
            if g < n2:
                for (xm, ym), c in cur.items():
                    if c.is_zero():
                        continue
                    for xm2, ym2, s in _mono_times_x(space, xm, ym, g):
                        key = (xm2, ym2)
                        add = c if s > 0 else -c
                        nxt[key] = nxt.get(key, tower.zero()) + add
            else:
                j = g - n2
                bit = 1 << j
                for (xm, ym), c in cur.items():
                    if c.is_zero() or ym & bit:
                        continue
                    above = bin(ym >> (j + 1)).count("1")
                    add = -c if above & 1 else c
                    key = (xm, ym | bit)
                    nxt[key] = nxt.get(key, tower.zero()) + add
            cur = nxt
        for (xm, ym), c in cur.items():
            if c.is_zero():
                continue
            key = xm | (ym << n2)
            out[key] = out.get(key, tower.zero()) + c
    return Multivector(space.vspace, out)


def main_involution(a: Multivector) -> Multivector:
    """Negate the odd part of C(V)."""
    return Multivector(
        a.space,
        {m: -c if bin(m).count("1") & 1 else c for m, c in a.terms.items()},
    )


def main_antiinvolution(a: Multivector, space: HyperbolicSpace) -> Multivector:
    """Reverse each monomial v_1...v_r to v_r...v_1 and re-normal-order."""
    out = space.vspace.zero()
    for mask, coeff in a.terms.items():
        gens = [i for i in range(4 * space.n) if mask >> i & 1]
        prod = space.vspace.one()
        for g in reversed(gens):
            prod = clifford_mul(prod, space.vspace.gen(g), space)
        out = out + prod.scale(coeff)
    return out


def star(a: Multivector, space: HyperbolicSpace) -> Multivector:
    """Conjugation: the main anti-involution composed with the main involution."""
    return main_antiinvolution(main_involution(a), space)


def involutions(a: Multivector, which: str, space: HyperbolicSpace) -> Multivector:
    if which == "main_antiinv":
        return main_antiinvolution(a, space)
    if which == "main_inv":
        return main_involution(a)
    if which == "star":
        return star(a, space)
    raise ValueError(f"unknown involution {which!r}")


def vector_rep_reflection(space: HyperbolicSpace, v, w) -> list:
    """rho_v(w) = v.w.v^(-1) in C(V) for (v,v) = +-2, restricted to V.

    This is minus the reflection through the hyperplane orthogonal to v.
    """
    vv = space.pair(v, v)
    if not (vv == 2 or vv == -2):
        raise ValueError("reflection requires (v,v) = +-2")
    vmv = space.vector_to_mv(v)
    wmv = space.vector_to_mv(w)
    # v^2 = (v,v)/2 = +-1, so v^(-1) = v / (v^2)
    prod = clifford_mul(clifford_mul(vmv, wmv, space), vmv, space)
    half = space.tower.scalar(Fraction(2) / vv)
    prod = prod.scale(half)
    return space.mv_to_vector(prod)


class SoPair:
    """A degree-2 Clifford element with its spin and vector incarnations.

    spin(lam) is the Clifford action minus the scalar normal-ordering
    constant of xi (the degree-2 monomials x_i y_i each contribute half
    their coefficient), which is the derivative of the spin representation
    of the group.  ad is the matrix of v -> xi.v - v.xi on V, and
    derivation extends ad to the exterior algebra of V.
    """

    __slots__ = ("space", "xi", "constant", "ad")

    def __init__(self, space: HyperbolicSpace, xi: Multivector):
        if any(bin(m).count("1") != 2 for m in xi.terms):
            raise ValueError("so_pair requires a homogeneous degree-2 element")
        self.space = space
        self.xi = xi
        n2 = 2 * space.n
        const = space.tower.zero()
        for m, c in xi.terms.items():
            lo = (m & -m).bit_length() - 1
            hi = m.bit_length() - 1
            if hi - lo == n2 and lo < n2:  # an x_i y_i monomial
                const = const + c
        self.constant = const * Fraction(1, 2)
        self.ad = self._ad_matrix()

    def _ad_matrix(self):
        cols = []
        for j in range(self.space.dim_v):
            g = self.space.vspace.gen(j)
            br = clifford_mul(self.xi, g, self.space) - clifford_mul(g, self.xi, self.space)
            cols.append(self.space.mv_to_vector(br))
        # cols[j][i]: coefficient of e_i in ad(e_j); store row-major
        return [[cols[j][i] for j in range(self.space.dim_v)] for i in range(self.space.dim_v)]

    def spin(self, lam: Multivector) -> Multivector:
        out = clifford_action(self.xi, lam, self.space)
        if not self.constant.is_zero():
            out = out - lam.scale(self.constant)
        return out

    def ad_vector(self, coords) -> list:
        out = []
        for i in range(self.space.dim_v):
            acc = self.space.tower.zero()
            for j, cj in enumerate(coords):
                mij = self.ad[i][j]
                if mij.is_zero():
                    continue
                acc = acc + mij * self.space.tower.scalar(cj)
            out.append(acc)
        return out

    def derivation(self, a: Multivector) -> Multivector:
        """The unique derivation of the exterior algebra on V extending ad."""
        return matrix_derivation(self.ad, a)


def matrix_derivation(mat, a: Multivector) -> Multivector:
    """Derivation of the exterior algebra induced by a matrix on generators."""
    space = a.space
    tower = space.tower
    # sparse column representation: images of each generator
    ncols = space.m
    cols = []
    for j in range(ncols):
        col = [(i, mat[i][j]) for i in range(ncols) if not mat[i][j].is_zero()]
        cols.append(col)
    out = {}
    for m, c in a.terms.items():
        pos = 0
        mm = m
        while mm:
            g = (mm & -mm).bit_length() - 1
            rest = m ^ (1 << g)
            base = -c if pos & 1 else c  # sign pulling g to the front
            for i, mij in cols[g]:
                bit = 1 << i
                if rest & bit:
                    continue  # repeated generator wedges to zero
                s = merge_sign(bit, rest)
                coeff = base * mij
                if s < 0:
                    coeff = -coeff
                key = bit | rest
                acc = out.get(key)
                out[key] = coeff if acc is None else acc + coeff
            pos += 1
            mm &= mm - 1
    return Multivector(space, {k: v for k, v in out.items() if not v.is_zero()})


def so_pair(space: HyperbolicSpace, xi: Multivector) -> SoPair:
    return SoPair(space, xi)


def int_derivation_cols(ad_int_rows):
    """Sparse column form of an integer generator matrix, for fast derivations."""
    n = len(ad_int_rows)
    return [
        [(i, ad_int_rows[i][j]) for i in range(n) if ad_int_rows[i][j]]
        for j in range(n)
    ]


def derivation_int(cols, terms: dict) -> dict:
    """Integer fast path of matrix_derivation on {mask: int} term dicts."""
    out = {}
    for m, c in terms.items():
        pos = 0
        mm = m
        while mm:
            g = (mm & -mm).bit_length() - 1
            rest = m ^ (1 << g)
            base = -c if pos & 1 else c
            for i, mij in cols[g]:
                bit = 1 << i
                if rest & bit:
                    continue
                coeff = base * mij
                if merge_sign(bit, rest) < 0:
                    coeff = -coeff
                key = bit | rest
                out[key] = out.get(key, 0) + coeff
            pos += 1
            mm &= mm - 1
    return {k: v for k, v in out.items() if v}


def symbol(elem: Multivector, space: HyperbolicSpace) -> dict:
    """Materialize the action of a Clifford element on all basis spinors."""
    out = {}
    for mask in range(1 << (2 * space.n)):
        lam = Multivector(space.sspace, {mask: space.tower.one()})
        out[mask] = clifford_action(elem, lam, space)
    return out


def desymbol(op, space: HyperbolicSpace) -> Multivector:
    """Normal-ordered Clifford element with the prescribed action on S.

    `op`: either a dict {spinor mask -> Multivector} or a callable taking a
    basis mask.  Coefficients are peeled off by annihilation degree: the
    value on the basis spinor x_B determines the coefficients of the
    monomials x_A y_B once all y-subsets of B are known.
    """
    n2 = 2 * space.n
    get = op.__getitem__ if isinstance(op, dict) else op
    acc = space.vspace.zero()  # element built so far
    order = sorted(range(1 << n2), key=lambda m: (bin(m).count("1"), m))
    one = space.tower.one()
    for bmask in order:
        lam = Multivector(space.sspace, {bmask: one})
        target = get(bmask)
        if not isinstance(target, Multivector):
            raise TypeError("operator values must be multivectors in S")
        resid = target - clifford_action(acc, lam, space)
        if resid.is_zero():
            continue
        # sign of y_B applied to x_B
        sgn = Multivector(space.sspace, {bmask: one})
        mm = bmask
        ybits = []
        while mm:
            ybits.append((mm & -mm).bit_length() - 1)
            mm &= mm - 1
        for j in reversed(ybits):
            sgn = contract_gen(j, sgn)
        s = sgn.terms.get(0)
        if s is None:
            raise RuntimeError("contraction sign vanished unexpectedly")
        sinv = s.inv()
        add = {}
        for amask, c in resid.terms.items():
            add[amask | (bmask << n2)] = c * sinv
        acc = acc + Multivector(space.vspace, add)
    return acc
