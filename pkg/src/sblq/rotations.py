"""Spectral machinery on the sphere.

The great-circle averaging transform T acts diagonally on spherical
harmonics; its eigenvalues are Gegenbauer ratios with a Gamma-function
closed form on even degrees.  This module evaluates both, inverts
1 - T^2 to decompose a mean-zero function on S^{d-1} into mean-zero
slice functions on great circles, and checks the resulting superposition
identity for homogeneous kernels at d = 3 by quadrature.

General d is exposed at the eigenvalue level; the full slice machinery
(real spherical harmonics, explicit circle quadrature) is d = 3 only.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import lgamma, pi
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.special import lpmv, roots_legendre

#: central tolerance configuration; all verification entry points read these
TOLERANCES = {
    "spectral": 1e-10,
    "quadrature": 1e-6,
    "superposition": 1e-5,
    "mean_zero": 1e-12,
    "neumann": 1e-14,
}


# -- Gegenbauer values and transform eigenvalues --------------------------------


def gegenbauer(n: int, k: float, t):
    """C_n^k(t) by the standard three-term recurrence.

    Matches the generating function (1 - 2rt + r^2)^{-k} = sum C_n^k(t) r^n.
    """
    if k <= 0:
        raise ValueError("Gegenbauer parameter must be positive")
    t = np.asarray(t, dtype=float)
    c_prev = np.ones_like(t)
    if n == 0:
        return c_prev if c_prev.shape else float(c_prev)
    c = 2.0 * k * t
    for m in range(2, n + 1):
        c, c_prev = (2.0 * t * (m + k - 1.0) * c - (m + 2.0 * k - 2.0) * c_prev) / m, c
    return c if c.shape else float(c)


def _eigenvalue_gamma_form(n: int, d: int) -> float:
    """Closed form on even degrees, with sign (-1)^{n/2}; zero on odd."""
    if n % 2 == 1:
        return 0.0
    if n == 0:
        return 1.0
    log_abs = (lgamma(n / 2 + d / 2 - 1) + lgamma(n + 1) + lgamma(d - 2)
               - lgamma(n / 2 + 1) - lgamma(n + d - 2) - lgamma(d / 2 - 1))
    return (-1.0) ** (n // 2) * np.exp(log_abs)


def funk_eigenvalue(n: int, d: int) -> float:
    """Eigenvalue of the great-circle averaging transform on degree n.

    Returns the Gegenbauer ratio C_n^{(d-2)/2}(0) / C_n^{(d-2)/2}(1); for
    even n <= 40 the Gamma-function closed form is evaluated as well and
    the two are required to agree to 1e-10.
    """
    if d < 3:
        raise ValueError("averaging transform eigenvalues need dimension >= 3")
    if n % 2 == 1:
        return 0.0
    k = (d - 2) / 2.0
    ratio = gegenbauer(n, k, 0.0) / gegenbauer(n, k, 1.0)
    if n <= 40:
        closed = _eigenvalue_gamma_form(n, d)
        if abs(ratio - closed) > TOLERANCES["spectral"]:
            raise ArithmeticError(
                f"eigenvalue cross-check failed at n={n}, d={d}: "
                f"{ratio} vs {closed}")
    return ratio


@dataclass(frozen=True)
class FunkSpectrum:
    """Degree-indexed eigenvalues of the averaging transform."""

    d: int
    max_degree: int
    lam: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.d < 3:
            raise ValueError("dimension must be >= 3")
        assert self.lam[0] == 1.0
        assert all(self.lam[n] == 0.0 for n in range(1, self.max_degree + 1, 2))
        evens = np.abs(self.lam[2::2])
        assert np.all(np.diff(evens) < 0), "even eigenvalue magnitudes must decrease"
        if self.max_degree >= 2:
            assert abs(abs(self.lam[2]) - 1.0 / (self.d - 1)) <= TOLERANCES["spectral"]


def funk_spectrum(d: int, max_degree: int) -> FunkSpectrum:
    lam = np.array([funk_eigenvalue(n, d) for n in range(max_degree + 1)])
    return FunkSpectrum(d, max_degree, lam)


def decay_exponent_fit(d: int, n_lo: int = 20, n_hi: int = 40) -> float:
    """Least-squares slope of log|lambda_n| against log n over even degrees."""
    ns = np.arange(n_lo, n_hi + 1, 2)
    vals = np.array([abs(funk_eigenvalue(int(n), d)) for n in ns])
    slope, _ = np.polyfit(np.log(ns), np.log(vals), 1)
    return float(slope)


# -- real spherical harmonics on S^2 ---------------------------------------------


def basis_size(band: int) -> int:
    return (band + 1) ** 2


def basis_index(l: int, m: int) -> int:
    return l * l + l + m


def degree_of_index(idx: int) -> int:
    return int(np.floor(np.sqrt(idx)))


def sph_basis(points: np.ndarray, band: int) -> np.ndarray:
    """Matrix of real spherical harmonics, orthonormal for the probability
    measure, evaluated at unit vectors (rows of `points`)."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    x, y, z = points[:, 0], points[:, 1], points[:, 2]
    ct = np.clip(z, -1.0, 1.0)
    phi = np.arctan2(y, x)
    out = np.empty((points.shape[0], basis_size(band)))
    for l in range(band + 1):
        out[:, basis_index(l, 0)] = np.sqrt(2 * l + 1.0) * lpmv(0, l, ct)
        for m in range(1, l + 1):
            norm = np.sqrt(2 * (2 * l + 1.0)) * np.exp(
                0.5 * (lgamma(l - m + 1) - lgamma(l + m + 1)))
            plm = lpmv(m, l, ct)
            out[:, basis_index(l, m)] = norm * plm * np.cos(m * phi)
            out[:, basis_index(l, -m)] = norm * plm * np.sin(m * phi)
    return out


@dataclass(frozen=True)
class SphereGrid:
    """Product quadrature on S^2: Gauss-Legendre in the polar direction and
    uniform azimuth.  Weights are normalized to total mass one and the rule
    integrates spherical harmonics up to degree 2*band exactly."""

    band: int
    points: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)

    @classmethod
    def build(cls, band: int) -> "SphereGrid":
        nodes, glw = roots_legendre(band + 1)
        naz = 2 * band + 1
        phis = 2.0 * pi * np.arange(naz) / naz
        ct = np.repeat(nodes, naz)
        st = np.sqrt(1.0 - ct ** 2)
        ph = np.tile(phis, band + 1)
        pts = np.stack([st * np.cos(ph), st * np.sin(ph), ct], axis=1)
        w = np.repeat(glw / 2.0, naz) / naz
        return cls(band, pts, w)

    def integrate(self, values: np.ndarray) -> float:
        return float(np.dot(self.weights, values))

    def analyze(self, values: np.ndarray, band: int) -> np.ndarray:
        """Coefficients of a function sampled on the grid (exact when the
        function is band-limited within the grid band)."""
        basis = sph_basis(self.points, band)
        return basis.T @ (self.weights * values)

    def synthesize(self, coeffs: np.ndarray) -> np.ndarray:
        band = degree_of_index(len(coeffs) - 1)
        return sph_basis(self.points, band) @ coeffs


def synthesize_at(points: np.ndarray, coeffs: np.ndarray) -> np.ndarray:
    band = degree_of_index(len(coeffs) - 1)
    return sph_basis(points, band) @ coeffs


# -- the transform, its inverse problem, and slice functions --------------------


def funk_apply(coeffs: np.ndarray, spectrum: FunkSpectrum) -> np.ndarray:
    """Multiply each degree block by its eigenvalue."""
    band = degree_of_index(len(coeffs) - 1)
    if band > spectrum.max_degree:
        raise ValueError("band limit exceeds the tabulated spectrum")
    out = np.array(coeffs, dtype=float)
    for idx in range(len(out)):
        out[idx] *= spectrum.lam[degree_of_index(idx)]
    return out


def great_circle_frame(nu: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Deterministic orthonormal frame spanning the plane orthogonal to nu."""
    nu = np.asarray(nu, dtype=float)
    axis = np.zeros(3)
    axis[int(np.argmin(np.abs(nu)))] = 1.0
    e1 = np.cross(axis, nu)
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(nu, e1)
    return e1, e2


def great_circle_points(nu: np.ndarray, count: int) -> np.ndarray:
    """count uniform points on the great circle orthogonal to nu; the uniform
    rule is exact for band limit count/2 - 1."""
    e1, e2 = great_circle_frame(nu)
    t = 2.0 * pi * np.arange(count) / count
    return np.outer(np.cos(t), e1) + np.outer(np.sin(t), e2)


def circle_quadrature_count(band: int) -> int:
    return 2 * (band + 1)


def funk_apply_direct(coeffs: np.ndarray, nus: np.ndarray,
                      count: Optional[int] = None) -> np.ndarray:
    """Great-circle averages computed by explicit quadrature at each nu."""
    band = degree_of_index(len(coeffs) - 1)
    count = count or circle_quadrature_count(band)
    nus = np.atleast_2d(nus)
    circles = np.concatenate([great_circle_points(nu, count) for nu in nus])
    vals = synthesize_at(circles, coeffs).reshape(len(nus), count)
    return vals.mean(axis=1)


@dataclass
class SliceDecomposition:
    """Slice functions Gamma(nu, theta) = F(theta) - (TF)(nu) realizing a
    mean-zero function as a superposition over great circles."""

    f_coeffs: np.ndarray
    tf_coeffs: np.ndarray
    spectrum: FunkSpectrum
    sobolev_index: float = 0.0

    def gamma(self, nus: np.ndarray, thetas: np.ndarray) -> np.ndarray:
        """Gamma evaluated on the product of the two point lists."""
        f_theta = synthesize_at(thetas, self.f_coeffs)
        tf_nu = synthesize_at(nus, self.tf_coeffs)
        return f_theta[None, :] - tf_nu[:, None]

    def circle_mean(self, nu: np.ndarray, count: int = 64) -> float:
        pts = great_circle_points(nu, count)
        vals = synthesize_at(pts, self.f_coeffs) - float(
            synthesize_at(np.atleast_2d(nu), self.tf_coeffs)[0])
        return float(vals.mean())


def neumann_solve(omega_coeffs: np.ndarray, spectrum: FunkSpectrum,
                  sobolev_index: float = 0.0) -> SliceDecomposition:
    """Solve (1 - T^2) F = Omega by diagonal division, cross-checked against
    the truncated Neumann series sum F = sum_l T^{2l} Omega."""
    omega = np.asarray(omega_coeffs, dtype=float).copy()
    if abs(omega[0]) > TOLERANCES["mean_zero"]:
        raise ValueError("input must have zero mean")
    omega[0] = 0.0  # below the mean-zero tolerance; 1 - lam_0^2 is singular there
    band = degree_of_index(len(omega) - 1)
    if band > spectrum.max_degree:
        raise ValueError("band limit exceeds the tabulated spectrum")
    lam = np.array([spectrum.lam[degree_of_index(i)] for i in range(len(omega))])
    f = np.zeros_like(omega)
    f[1:] = omega[1:] / (1.0 - lam[1:] ** 2)
    series = np.zeros_like(omega)
    term = omega.copy()
    for _ in range(10_000):
        series += term
        term = term * lam ** 2
        if np.max(np.abs(term)) < TOLERANCES["neumann"]:
            break
    # remaining tail is below term/(1 - lam^2) <= 2e-14 in every entry
    if np.max(np.abs(series - f)) > 1e-12:
        raise ArithmeticError("Neumann series disagrees with diagonal inversion")
    return SliceDecomposition(f, funk_apply(f, spectrum), spectrum, sobolev_index)


def sobolev_norm(coeffs: np.ndarray, s: float, d: int = 3) -> float:
    """Weighted coefficient norm with weight |n(n+d-2)|^s; the degree-0 term
    carries weight zero (mean-zero convention)."""
    coeffs = np.asarray(coeffs, dtype=float)
    total = 0.0
    for idx, c in enumerate(coeffs):
        n = degree_of_index(idx)
        if n == 0:
            continue
        total += abs(n * (n + d - 2)) ** s * c * c
    return float(np.sqrt(total))


# -- verification drivers ---------------------------------------------------------


def verify_repr(dec: SliceDecomposition, omega_coeffs: np.ndarray,
                test_coeffs: Sequence[np.ndarray], grid: SphereGrid,
                circle_count: int = 64) -> List[float]:
    """Residuals of the superposition identity paired against test functions.

    For each f the residual is |<f, Omega> - int int f(theta)
    Gamma(nu, theta) dsigma_nu(theta) dsigma(nu)| with the outer integral on
    the grid and the inner one on explicit great circles.
    """
    omega_vals = grid.synthesize(omega_coeffs)
    nus = grid.points
    circles = np.concatenate([great_circle_points(nu, circle_count) for nu in nus])
    max_band = max([degree_of_index(len(omega_coeffs) - 1)]
                   + [degree_of_index(len(fc) - 1) for fc in test_coeffs])
    circle_basis = sph_basis(circles, max_band)
    gamma_f = circle_basis[:, :len(dec.f_coeffs)] @ dec.f_coeffs
    tf_nu = synthesize_at(nus, dec.tf_coeffs)
    gamma_vals = gamma_f.reshape(len(nus), circle_count) - tf_nu[:, None]
    residuals = []
    for fc in test_coeffs:
        lhs = grid.integrate(grid.synthesize(fc) * omega_vals)
        f_vals = (circle_basis[:, :len(fc)] @ fc).reshape(len(nus), circle_count)
        inner = (f_vals * gamma_vals).mean(axis=1)
        rhs = grid.integrate(inner)
        residuals.append(abs(lhs - rhs))
    return residuals


def radial_log_quadrature(lo: float, hi: float, count: int = 48):
    """Nodes and weights for int_lo^hi g(r) dr/r by Gauss-Legendre in log r."""
    nodes, w = roots_legendre(count)
    a, b = np.log(lo), np.log(hi)
    r = np.exp(0.5 * (b - a) * nodes + 0.5 * (a + b))
    return r, 0.5 * (b - a) * w


@dataclass(frozen=True)
class RadialTensorFunction:
    """Finite sum of (radial profile) x (band-limited angular part) terms.

    Radial profiles must be supported in [lo, hi] with lo > 0.
    """

    terms: Tuple[Tuple[Callable[[np.ndarray], np.ndarray], np.ndarray], ...]
    support: Tuple[float, float]

    def __post_init__(self):
        lo, hi = self.support
        if lo <= 0:
            raise ValueError("radial support must stay away from the origin")

    def __call__(self, x: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(x)
        r = np.linalg.norm(x, axis=1)
        out = np.zeros(len(x))
        mask = r > 0
        unit = x[mask] / r[mask, None]
        for rho, ang in self.terms:
            out[mask] += rho(r[mask]) * synthesize_at(unit, ang)
        return out


def verify_superposition(omega_coeffs: np.ndarray, f: RadialTensorFunction,
                         grid: SphereGrid, radial_count: int = 48,
                         circle_count: int = 64) -> float:
    """Residual between int f K dx and its great-circle superposition, for the
    homogeneous kernel with spherical part Omega* = omega_coeffs (d = 3,
    no Dirac component).

    The left side is polar quadrature of Omega* against the angular average
    of f; the right side goes through the slice decomposition of Omega* and
    radial/great-circle quadrature.  Both sides carry the common factor
    omega_2 = 4*pi.
    """
    lo, hi = f.support
    r_nodes, r_weights = radial_log_quadrature(lo, hi, radial_count)
    omega_vals = grid.synthesize(omega_coeffs)
    lhs = 0.0
    for r, w in zip(r_nodes, r_weights):
        fv = f(r * grid.points)
        lhs += w * grid.integrate(fv * omega_vals)
    lhs *= 4.0 * pi

    spectrum = funk_spectrum(3, degree_of_index(len(omega_coeffs) - 1))
    dec = neumann_solve(omega_coeffs, spectrum)
    nus = grid.points
    tf_nu = synthesize_at(nus, dec.tf_coeffs)
    rhs = 0.0
    for i, nu in enumerate(nus):
        circle = great_circle_points(nu, circle_count)
        gamma_vals = synthesize_at(circle, dec.f_coeffs) - tf_nu[i]
        inner = 0.0
        for r, w in zip(r_nodes, r_weights):
            inner += w * float(np.mean(f(r * circle) * gamma_vals))
        rhs += grid.weights[i] * inner
    rhs *= 4.0 * pi
    return abs(lhs - rhs)
