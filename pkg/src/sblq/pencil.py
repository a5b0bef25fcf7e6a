"""Exact Kronecker structure of a rational matrix pencil.

A pencil here is an ordered pair (A2, A3) of a x b rational matrices,
regarded as the family A3 - lambda*A2.  Its strict-equivalence invariants
are the wide singular blocks (epsilon x (epsilon+1), one polynomial right
kernel generator of degree epsilon each), the tall singular blocks
((eta+1) x eta, the transposed story), and a regular square core.  The
singular structure is extracted by exact staircase deflation: the span of
all polynomial kernel coefficients is split off, the quotient pencil is
transposed, and the process repeats, leaving the regular core.

On the regular core, the smallest prime mu with mu*A2 + A3 invertible
normalizes the pencil to the single operator S = (mu*A2 + A3)^{-1} A2.
Generalized eigenvalues transform by the Moebius map lambda -> 1/(mu +
lambda), so the structure at lambda in {0, 1, infinity} is read off from
rank power sequences of S at 1/mu, 1/(mu+1) and 0; whatever remains is
the regular remainder, recovered as the operator X = S^{-1} - mu on the
complementary invariant subspace and reported through its invariant
factors.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

from .linalg import (
    Matrix, Subspace, hstack, image_basis, inverse, is_invertible,
    invariant_factors, kernel_basis, rank, rank_power_sequence, solve_right,
)
from .polynomials import Poly


@dataclass(frozen=True)
class PencilBlocks:
    """Kronecker data of a pencil: multisets of block sizes plus the regular remainder."""

    shape: Tuple[int, int]
    wide: Tuple[int, ...]              # epsilon values, one per wide block
    tall: Tuple[int, ...]              # eta values, one per tall block
    jordan_at_0: Tuple[int, ...]       # block sizes at lambda = 0
    jordan_at_1: Tuple[int, ...]       # block sizes at lambda = 1
    jordan_at_inf: Tuple[int, ...]     # block sizes at lambda = infinity
    regular_factors: Tuple[Poly, ...]  # invariant factor chain of the remainder
    mu: Optional[int] = None           # normalization prime used on the core

    def size_check(self) -> bool:
        a, b = self.shape
        ra = sum(self.wide) + sum(e + 1 for e in self.tall)
        rb = sum(e + 1 for e in self.wide) + sum(self.tall)
        reg = (sum(self.jordan_at_0) + sum(self.jordan_at_1)
               + sum(self.jordan_at_inf) + sum(f.degree for f in self.regular_factors))
        return (ra + reg, rb + reg) == (a, b)


def _poly_kernel_profile(a2: Matrix, a3: Matrix):
    """Dimension profile of polynomial right kernels, plus the coefficient span.

    Returns (dims, span) where dims[k] is the dimension of the space of
    x(lambda) of degree <= k with (A3 - lambda A2) x(lambda) = 0, for k up
    to b-1 (no wide block has a larger index), and span is the column span
    of every coefficient vector of every such solution.
    """
    a, b = a2.rows, a2.cols
    if b == 0:
        return [], Subspace.zero(0)
    if a == 0:
        return [(k + 1) * b for k in range(b)], Subspace.full(b)
    kmax = b - 1
    rows: List[List[Fraction]] = []
    # (A3 - lambda A2)(x_0 + ... + x_kmax lambda^kmax) = 0, coefficientwise
    for blk in range(kmax + 2):
        for r in range(a):
            row = [Fraction(0)] * ((kmax + 1) * b)
            if blk <= kmax:
                row[blk * b:(blk + 1) * b] = list(a3.row(r))
            if blk >= 1:
                j = blk - 1
                for c in range(b):
                    row[j * b + c] -= a2[r, c]
            rows.append(row)
    ker = kernel_basis(Matrix.from_rows(rows, cols=(kmax + 1) * b))
    n = ker.dim
    dims = []
    for k in range(kmax + 1):
        if k == kmax or n == 0:
            dims.append(n)
            continue
        # solutions of degree <= k are kernel elements with top blocks zero
        top = ker.basis.submatrix(range((k + 1) * b, (kmax + 1) * b), range(n))
        dims.append(n - rank(top))
    if n == 0:
        return dims, Subspace.zero(b)
    pieces = [ker.basis.submatrix(range(j * b, (j + 1) * b), range(n))
              for j in range(kmax + 1)]
    return dims, image_basis(hstack(*pieces))


def _wide_counts(dims: List[int]) -> List[int]:
    """Block counts per index from the kernel-dimension profile."""
    f = [0, 0] + dims          # f[k+2] = dim of degree-<=k solutions
    counts = []
    for eps in range(len(dims)):
        cum_this = f[eps + 2] - f[eps + 1]   # number of blocks with index <= eps
        cum_prev = f[eps + 1] - f[eps]
        counts.append(cum_this - cum_prev)
    return counts


def _split_off(a2: Matrix, a3: Matrix, dom: Subspace):
    """Quotient pencil on complements of dom and of A2 dom + A3 dom."""
    a, b = a2.rows, a2.cols
    cod = image_basis(hstack(a2 @ dom.basis, a3 @ dom.basis)) if dom.dim else Subspace.zero(a)
    dom_full = _extend(dom, b)
    cod_full = _extend(cod, a)
    inv_cod = inverse(cod_full)
    q2 = inv_cod @ a2 @ dom_full
    q3 = inv_cod @ a3 @ dom_full
    rd, rc = dom.dim, cod.dim
    sub2 = q2.submatrix(range(rc, a), range(rd, b))
    sub3 = q3.submatrix(range(rc, a), range(rd, b))
    for m in (q2, q3):
        low = m.submatrix(range(rc, a), range(rd))
        assert low.is_zero, "deflation subspace is not invariant"
    return sub2, sub3


def _extend(sub: Subspace, n: int) -> Matrix:
    ext = image_basis(hstack(sub.basis, Matrix.identity(n))).basis
    assert ext.cols == n
    return ext


def _jordan_sizes_from_ranks(seq: List[int]) -> List[int]:
    sizes = []
    n = len(seq) - 1
    for k in range(1, n + 1):
        nxt = seq[k + 1] if k + 1 <= n else seq[n]
        count = seq[k - 1] - 2 * seq[k] + nxt
        sizes.extend([k] * count)
    return sorted(sizes, reverse=True)


def kronecker_blocks(a2: Matrix, a3: Matrix) -> PencilBlocks:
    """Full Kronecker block data of the pencil (A2, A3), exactly."""
    if a2.rows != a3.rows or a2.cols != a3.cols:
        raise ValueError("pencil matrices must share a shape")
    a, b = a2.rows, a2.cols

    # wide singular structure straight off the polynomial kernel profile
    dims, dom = _poly_kernel_profile(a2, a3)
    counts = _wide_counts(dims)
    wide = tuple(eps for eps, c in enumerate(counts) for _ in range(c))
    q2, q3 = _split_off(a2, a3, dom)

    # the quotient holds the tall blocks: they are wide for the transpose
    dims_t, dom_t = _poly_kernel_profile(q2.transpose(), q3.transpose())
    counts_t = _wide_counts(dims_t)
    tall = tuple(eta for eta, c in enumerate(counts_t) for _ in range(c))
    c2t, c3t = _split_off(q2.transpose(), q3.transpose(), dom_t)
    core2, core3 = c2t.transpose(), c3t.transpose()

    r = core2.rows
    if core2.cols != r:
        raise AssertionError("regular core is not square")
    if r == 0:
        blocks = PencilBlocks((a, b), wide, tall, (), (), (), ())
        assert blocks.size_check(), "block sizes do not sum to the pencil shape"
        return blocks

    mu = _normalizing_prime(core2, core3)
    s = inverse(core2.scale(mu) + core3) @ core2
    specials = [Fraction(1, mu), Fraction(1, mu + 1), Fraction(0)]
    jordans = []
    killer = Matrix.identity(r)
    for s0 in specials:
        seq = rank_power_sequence(s, s0, r)
        jordans.append(tuple(_jordan_sizes_from_ranks(seq)))
        shift = s - Matrix.identity(r).scale(s0)
        for _ in range(r):
            killer = killer @ shift
    rest = image_basis(killer)
    factors: Tuple[Poly, ...] = ()
    if rest.dim:
        coeff = solve_right(rest.basis, s @ rest.basis)
        assert coeff is not None, "remainder subspace is not invariant"
        x = inverse(coeff) - Matrix.identity(rest.dim).scale(mu)
        factors = tuple(invariant_factors(x))
        for fpoly in factors:
            assert fpoly(0) != 0 and fpoly(1) != 0, "remainder touches a special eigenvalue"
    blocks = PencilBlocks((a, b), wide, tall, jordans[0], jordans[1], jordans[2],
                          factors, mu=mu)
    assert blocks.size_check(), "block sizes do not sum to the pencil shape"
    return blocks


def _normalizing_prime(a2: Matrix, a3: Matrix) -> int:
    """Smallest prime mu with mu*A2 + A3 invertible."""
    mu = 2
    for _ in range(2 * a2.rows + 8):
        if is_invertible(a2.scale(mu) + a3):
            return mu
        mu = _next_prime(mu)
    raise ValueError("pencil core is singular: no normalizing prime found")


def _next_prime(p: int) -> int:
    q = p + 1
    while True:
        if all(q % d for d in range(2, int(q ** 0.5) + 1)):
            return q
        q += 1
