"""Constructors for every indecomposable four-subspace module family.

Families come in two flavours: the nine raw classification families
("0", "I", "II", "III", "III*", "IV", "IV*", "V", "V*"), listed up to
subspace permutation, and the named families used by the boundedness
taxonomy (N, J1..J3, C, T of the Hoelder case; Y, Z of the Young case;
L, B of the Loomis-Whitney case; P1..P3, K1..K3 of the bilinear case).

Subspace bases are assembled from the standard block pieces (identity,
Jordan, companion, the four arrow paddings, unit row).  Slot 0 is always
the kernel/distribution subspace.  Two raw families ("III", "III*") are
stored with a fixed cyclic slot shift so that the identity-permutation
build matches the published dimension column.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .core import DimVector, FourModule
from .linalg import Matrix, Subspace, companion_matrix, vstack
from .polynomials import Poly, format_poly

Perm = Tuple[int, int, int, int]
IDENTITY_PERM: Perm = (0, 1, 2, 3)

RAW_FAMILIES = ("0", "I", "II", "III", "III*", "IV", "IV*", "V", "V*")
HOLDER_FAMILIES = ("N", "J1", "J2", "J3", "C", "T")
FIXED_FAMILIES = ("Y", "Z", "L", "B", "P1", "P2", "P3", "K1", "K2", "K3")
ALL_FAMILIES = RAW_FAMILIES + HOLDER_FAMILIES + FIXED_FAMILIES

_NEEDS_POLY = ("0", "N")
_MIN_N = {"0": 1, "I": 1, "N": 1, "J1": 1, "J2": 1, "J3": 1}


# -- block pieces -------------------------------------------------------------


def eye(n: int) -> Matrix:
    return Matrix.identity(n)


def zeros(r: int, c: int) -> Matrix:
    return Matrix.zeros(r, c)


def jordan(n: int, lam) -> Matrix:
    """n x n Jordan block with eigenvalue lam (ones on the superdiagonal)."""
    return Matrix(n, n, [lam if i == j else (1 if j == i + 1 else 0)
                         for i in range(n) for j in range(n)])


def arrow_up(n: int) -> Matrix:
    """(n+1) x n: a zero row on top of the identity."""
    return vstack(zeros(1, n), eye(n)) if n else zeros(1, 0)


def arrow_down(n: int) -> Matrix:
    """(n+1) x n: the identity with a zero row below."""
    return vstack(eye(n), zeros(1, n)) if n else zeros(1, 0)


def arrow_left(n: int) -> Matrix:
    """n x (n+1): a zero column before the identity."""
    return arrow_up(n).transpose()


def arrow_right(n: int) -> Matrix:
    """n x (n+1): the identity then a zero column."""
    return arrow_down(n).transpose()


def row_unit(n: int) -> Matrix:
    """1 x n row (1, 0, ..., 0)."""
    return Matrix(1, n, [1 if j == 0 else 0 for j in range(n)])


# -- family tags --------------------------------------------------------------


@dataclass(frozen=True)
class FamilyTag:
    """An indecomposable family member: family code, size, slot order, regular part."""

    family: str
    n: int = 0
    permutation: Perm = IDENTITY_PERM
    regular_poly: Optional[Poly] = None

    def __post_init__(self):
        if self.family not in ALL_FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if sorted(self.permutation) != [0, 1, 2, 3]:
            raise ValueError(f"not a slot permutation: {self.permutation}")
        if self.family in FIXED_FAMILIES:
            if self.n != 0:
                raise ValueError(f"family {self.family} takes no size parameter")
        elif self.n < _MIN_N.get(self.family, 0):
            raise ValueError(f"family {self.family} needs n >= {_MIN_N.get(self.family, 0)}")
        if self.family in _NEEDS_POLY:
            p = self.regular_poly
            if p is None:
                raise ValueError(f"family {self.family} needs a regular polynomial")
            if p.degree != self.n:
                raise ValueError(f"regular polynomial degree {p.degree} != n = {self.n}")
            if p.leading() != 1:
                raise ValueError("regular polynomial must be monic")
            if p(0) == 0 or p(1) == 0:
                raise ValueError("regular polynomial must not vanish at 0 or 1")
        elif self.regular_poly is not None:
            raise ValueError(f"family {self.family} takes no regular polynomial")

    def render(self) -> str:
        if self.family in ("J1", "J2", "J3", "P1", "P2", "P3", "K1", "K2", "K3"):
            base = f"{self.family[0]}^({self.family[1]})"
        else:
            base = self.family
        if self.family in FIXED_FAMILIES:
            out = base
        else:
            out = f"{base}_{self.n}"
        if self.regular_poly is not None:
            out += f"[{format_poly(self.regular_poly)}]"
        if self.permutation != IDENTITY_PERM:
            out += f"@perm{self.permutation}"
        return out


def _columns(tag: FamilyTag) -> List[Matrix]:
    """Canonical-slot subspace basis matrices for the family member."""
    n = tag.n
    f = tag.family
    if f in ("0", "N", "I", "J1", "J2", "J3"):
        if f in ("0", "N"):
            x = companion_matrix(tag.regular_poly)
        elif f == "J1":
            x = jordan(n, 1)
        else:
            x = jordan(n, 0)
        c2 = vstack(eye(n), eye(n))
        c3 = vstack(x, eye(n))
        if f == "J3":
            c2, c3 = c3, vstack(eye(n), eye(n))
        return [vstack(eye(n), zeros(n, n)), vstack(zeros(n, n), eye(n)), c2, c3]
    if f == "II":
        return [vstack(eye(n + 1), zeros(n, n + 1)),
                vstack(eye(n + 1), arrow_right(n)),
                vstack(arrow_down(n), eye(n)),
                vstack(zeros(n + 1, n), eye(n))]
    if f in ("III", "C"):
        cols = [vstack(eye(n + 1), zeros(n, n + 1)),
                vstack(zeros(n + 1, n), eye(n)),
                vstack(arrow_up(n), eye(n)),
                vstack(arrow_down(n), eye(n))]
        if f == "III":          # published dimension column is cyclically shifted
            cols = cols[1:] + cols[:1]
        return cols
    if f in ("III*", "T"):
        cols = [vstack(eye(n), zeros(n + 1, n)),
                vstack(zeros(n, n + 1), eye(n + 1)),
                vstack(arrow_left(n), eye(n + 1)),
                vstack(arrow_right(n), eye(n + 1))]
        if f == "III*":
            cols = cols[1:] + cols[:1]
        return cols
    if f in ("IV", "IV*"):
        last = (vstack(arrow_up(n), arrow_down(n)) if f == "IV"
                else vstack(arrow_left(n + 1), arrow_right(n + 1)))
        return [vstack(eye(n + 1), zeros(n + 1, n + 1)),
                vstack(zeros(n + 1, n + 1), eye(n + 1)),
                vstack(eye(n + 1), eye(n + 1)),
                last]
    if f == "V":
        return [vstack(eye(n), zeros(n, n), zeros(1, n)),
                vstack(zeros(n, n), eye(n), zeros(1, n)),
                vstack(jordan(n, 0), eye(n), row_unit(n)),
                vstack(eye(n), jordan(n, 0), row_unit(n))]
    if f == "V*":
        return [vstack(arrow_left(n), zeros(n, n + 1), row_unit(n + 1)),
                vstack(arrow_left(n), arrow_right(n), row_unit(n + 1)),
                vstack(arrow_right(n), arrow_left(n), row_unit(n + 1)),
                vstack(zeros(n, n + 1), arrow_left(n), row_unit(n + 1))]
    fixed = {
        "Y": (2, [[], [1, 0], [0, 1], [1, 1]]),
        "Z": (3, [[1, 0, 0], [0, 1, 0], [0, 1, 1], [1, 0, 1]]),
        "P1": (1, [[], [], [1], [1]]),
        "P2": (1, [[], [1], [], [1]]),
        "P3": (1, [[], [1], [1], []]),
        "K1": (2, [[1, 0], [], [0, 1], [1, 1]]),
        "K2": (2, [[1, 0], [0, 1], [], [1, 1]]),
        "K3": (2, [[1, 0], [0, 1], [1, 1], []]),
    }
    if f in fixed:
        m, cols = fixed[f]
        return [Matrix.column(c) if c else zeros(m, 0) for c in cols]
    if f == "L":
        return [vstack(arrow_up(1), arrow_down(1)),
                vstack(eye(2), zeros(2, 2)),
                vstack(zeros(2, 2), eye(2)),
                vstack(eye(2), eye(2))]
    if f == "B":
        return [vstack(eye(2), zeros(2, 2), zeros(1, 2)),
                vstack(zeros(2, 2), eye(2), zeros(1, 2)),
                vstack(jordan(2, 0), eye(2), row_unit(2)),
                vstack(eye(2), jordan(2, 0), row_unit(2))]
    raise AssertionError(f)


def build(tag: FamilyTag) -> FourModule:
    """The module whose subspace bases are the family's block columns.

    Slot k of the result holds canonical column permutation[k].
    """
    cols = _columns(tag)
    cols = [cols[tag.permutation[k]] for k in range(4)]
    ambient = cols[0].rows
    return FourModule(ambient, tuple(Subspace(ambient, c) for c in cols))


def dim_vector(tag: FamilyTag) -> DimVector:
    """Closed-form dimension vector, without building matrices."""
    n = tag.n
    f = tag.family
    closed = {
        "0": (2 * n, n, n, n, n), "I": (2 * n, n, n, n, n),
        "N": (2 * n, n, n, n, n), "J1": (2 * n, n, n, n, n),
        "J2": (2 * n, n, n, n, n), "J3": (2 * n, n, n, n, n),
        "II": (2 * n + 1, n + 1, n + 1, n, n),
        "III": (2 * n + 1, n, n, n, n + 1),
        "C": (2 * n + 1, n + 1, n, n, n),
        "III*": (2 * n + 1, n + 1, n + 1, n + 1, n),
        "T": (2 * n + 1, n, n + 1, n + 1, n + 1),
        "IV": (2 * n + 2, n + 1, n + 1, n + 1, n),
        "IV*": (2 * n + 2, n + 1, n + 1, n + 1, n + 2),
        "V": (2 * n + 1, n, n, n, n),
        "V*": (2 * n + 1, n + 1, n + 1, n + 1, n + 1),
        "Y": (2, 0, 1, 1, 1), "Z": (3, 1, 1, 1, 1),
        "L": (4, 1, 2, 2, 2), "B": (5, 2, 2, 2, 2),
        "P1": (1, 0, 0, 1, 1), "P2": (1, 0, 1, 0, 1), "P3": (1, 0, 1, 1, 0),
        "K1": (2, 1, 0, 1, 1), "K2": (2, 1, 1, 0, 1), "K3": (2, 1, 1, 1, 0),
    }
    total, *slots = closed[f]
    slots = [slots[tag.permutation[k]] for k in range(4)]
    return DimVector(total, *slots)


# -- permutation orbits -------------------------------------------------------


def _compose(a: Perm, b: Perm) -> Perm:
    return tuple(a[b[k]] for k in range(4))


def permutation_orbits(family: str) -> List[List[Perm]]:
    """Partition of the 24 slot permutations into isomorphism classes.

    For family "I" the classes are the left cosets of the Klein group
    generated by the two column swaps (0,2) and (1,3).  For the families
    III, III*, IV, IV*, V, V* two permutations are equivalent iff they
    induce the same ordered dimension vector (confirmed by exhaustive
    isomorphism certificates at n = 1).  Family "II" is special: at n >= 1
    its unique one-dimensional-intersection pattern (the n-dim subspace
    sitting inside exactly one of the (n+1)-dim ones) pins every slot, so
    all 24 permutations are pairwise non-isomorphic; the dimension-vector
    rule only holds in the degenerate case n = 0.  Family "0" is excluded:
    permuting its subspaces changes the regular parameter.
    """
    if family == "0":
        raise ValueError("orbit classes of family '0' depend on the regular parameter")
    if family not in RAW_FAMILIES:
        raise ValueError(f"permutation orbits are defined for raw families, not {family!r}")
    perms = list(itertools.permutations(range(4)))
    if family == "I":
        klein = [(0, 1, 2, 3), (2, 1, 0, 3), (0, 3, 2, 1), (2, 3, 0, 1)]
        seen: Dict[Perm, int] = {}
        classes: List[List[Perm]] = []
        for p in perms:
            if p in seen:
                continue
            orbit = sorted({_compose(g, p) for g in klein})
            for q in orbit:
                seen[q] = len(classes)
            classes.append(orbit)
        return classes
    if family == "II":
        return [[p] for p in perms]
    ref = dim_vector(FamilyTag(family, 1))
    by_dims: Dict[Tuple[int, ...], List[Perm]] = {}
    for p in perms:
        key = tuple(ref[1 + p[k]] for k in range(4))
        by_dims.setdefault(key, []).append(p)
    return [sorted(v) for v in by_dims.values()]
