"""Pure spinors and isotropic subspaces.

The annihilator of a spinor under Clifford multiplication is always
isotropic; the spinor is pure exactly when the annihilator is maximal
(dimension 2n), and then the spinor line and the subspace determine each
other.  All solves are exact over the tower field; subspace bases are kept
in reduced echelon form so serialized output is canonical.
"""

from __future__ import annotations

from . import linalg
from .clifford import HyperbolicSpace, clifford_action
from .exteralg import Multivector


class IsotropicSubspace:
    """A certified-isotropic subspace of V over a tower coefficient field."""

    __slots__ = ("space", "coeff", "basis", "dim")

    def __init__(self, space: HyperbolicSpace, basis, coeff: str = "K", check: bool = True):
        red, _ = linalg.rref(basis, space.tower)
        self.space = space
        self.coeff = coeff
        self.basis = red
        self.dim = len(red)
        if check:
            for i, u in enumerate(red):
                for v in red[i:]:
                    if not space.pair(u, v).is_zero():
                        raise ValueError("basis does not span an isotropic subspace")
            for row in red:
                for x in row:
                    if not x.in_subfield(coeff):
                        raise ValueError(f"coordinate {x} outside subfield {coeff}")

    def is_maximal(self) -> bool:
        return self.dim == 2 * self.space.n

    def contains(self, vec) -> bool:
        red, piv = linalg.rref(self.basis, self.space.tower)
        return linalg.in_span(red, piv, vec, self.space.tower)

    def contains_subspace(self, other: "IsotropicSubspace") -> bool:
        return all(self.contains(v) for v in other.basis)

    def __eq__(self, other):
        return (
            isinstance(other, IsotropicSubspace)
            and self.space is other.space
            and self.dim == other.dim
            and all(
                x == y
                for ra, rb in zip(self.basis, other.basis)
                for x, y in zip(ra, rb)
            )
        )

    def __repr__(self):
        return f"IsotropicSubspace(dim={self.dim}, coeff={self.coeff})"

    def map_rows(self, f) -> "IsotropicSubspace":
        return IsotropicSubspace(
            self.space, [[f(x) for x in row] for row in self.basis], self.coeff, check=False
        )

    def to_json(self) -> list:
        return [[x.to_json() for x in row] for row in self.basis]


def annihilator(lam: Multivector, space: HyperbolicSpace, coeff: str = "K") -> IsotropicSubspace:
    """The subspace of V tensor coeff annihilating a nonzero spinor."""
    if lam.is_zero():
        raise ValueError("the zero spinor has no annihilator subspace")
    images = []
    supp = set()
    for k in range(space.dim_v):
        img = clifford_action(space.vspace.gen(k), lam, space)
        images.append(img)
        supp.update(img.terms)
    supp = sorted(supp)
    rows = []
    for mask in supp:
        rows.append([img.terms.get(mask, space.tower.zero()) for img in images])
    kernel = linalg.nullspace(rows, space.dim_v, space.tower)
    return IsotropicSubspace(space, kernel, coeff)


def is_pure(lam: Multivector, space: HyperbolicSpace, coeff: str = "K"):
    """Purity test; returns (flag, annihilator) so the certificate travels along."""
    ann = annihilator(lam, space, coeff)
    return ann.dim == 2 * space.n, ann


def pure_spinor_of(w: IsotropicSubspace, space: HyperbolicSpace) -> Multivector:
    """The spinor line of a maximal isotropic subspace, normalized.

    Normalization: the lowest-mask nonzero coefficient equals 1, making
    reports byte-stable.  Raises when the solution space is not a line.
    """
    if not w.is_maximal():
        raise ValueError("pure spinor lines exist only for maximal isotropic subspaces")
    dim_s = 1 << (2 * space.n)
    rows = []
    for vec in w.basis:
        vmv = space.vector_to_mv(vec)
        # m_v as a matrix acting on spinor coordinates
        col_images = []
        for mask in range(dim_s):
            lam = Multivector(space.sspace, {mask: space.tower.one()})
            col_images.append(clifford_action(vmv, lam, space))
        supp = set()
        for img in col_images:
            supp.update(img.terms)
        for out_mask in sorted(supp):
            rows.append(
                [img.terms.get(out_mask, space.tower.zero()) for img in col_images]
            )
    kernel = linalg.nullspace(rows, dim_s, space.tower)
    if len(kernel) != 1:
        raise ValueError(f"spinor solution space has dimension {len(kernel)}, not 1")
    lam = Multivector.from_coords(space.sspace, kernel[0])
    lead = min(lam.terms)
    return lam.scale(lam.terms[lead].inv())


def subspace_intersect(a: IsotropicSubspace, b: IsotropicSubspace) -> IsotropicSubspace:
    if a.space is not b.space:
        raise ValueError("ambient space mismatch")
    rows = linalg.intersect(a.basis, b.basis, a.space.tower)
    return IsotropicSubspace(a.space, rows, a.coeff, check=False)


def subspace_sum_rows(a: IsotropicSubspace, b: IsotropicSubspace):
    """Row basis of the (not necessarily isotropic) sum."""
    if a.space is not b.space:
        raise ValueError("ambient space mismatch")
    return linalg.subspace_sum(a.basis, b.basis, a.space.tower)


def subspace_ops(a: IsotropicSubspace, b: IsotropicSubspace, op: str):
    if op == "intersect":
        return subspace_intersect(a, b)
    if op == "sum":
        return subspace_sum_rows(a, b)
    if op == "dim":
        return a.dim
    if op == "contains":
        return a.contains_subspace(b)
    raise ValueError(f"unknown subspace op {op!r}")
