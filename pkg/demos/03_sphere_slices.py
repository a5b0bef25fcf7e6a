"""Spectral facts for the great-circle averaging transform, and slices.

Prints the eigenvalue table and decay exponents, then decomposes a random
mean-zero function on the 2-sphere into mean-zero functions on great
circles and verifies both the pairing identity and the full superposition
identity for the associated homogeneous kernel.

Run:  python demos/03_sphere_slices.py
"""

import numpy as np

from sblq import rotations


def main():
    print("eigenvalues of the averaging transform (d = 3..5, even degrees):")
    for d in (3, 4, 5):
        sp = rotations.funk_spectrum(d, 12)
        row = "  ".join(f"{sp.lam[n]:+.4f}" for n in range(0, 13, 2))
        print(f"  d={d}:  {row}")
    for d in (3, 4, 5):
        fit = rotations.decay_exponent_fit(d)
        print(f"decay exponent fit d={d}: {fit:+.3f}  (target {(2 - d) / 2:+.1f})")

    rng = np.random.default_rng(0)
    omega = rng.normal(size=rotations.basis_size(8))
    omega[0] = 0.0
    spectrum = rotations.funk_spectrum(3, 8)
    dec = rotations.neumann_solve(omega, spectrum)
    grid = rotations.SphereGrid.build(32)

    means = [abs(dec.circle_mean(nu)) for nu in grid.points[::101]]
    print(f"\nslice functions: max |circle mean| = {max(means):.2e}")

    tests = [rng.normal(size=rotations.basis_size(8)) for _ in range(3)]
    residuals = rotations.verify_repr(dec, omega, tests, grid)
    print("pairing residuals:", ", ".join(f"{r:.2e}" for r in residuals))

    def bump(r):
        r = np.asarray(r, dtype=float)
        out = np.zeros_like(r)
        inside = (r > 0.5) & (r < 2.0)
        out[inside] = (r[inside] - 0.5) ** 3 * (2.0 - r[inside]) ** 3
        return out

    ang = rng.normal(size=rotations.basis_size(4))
    f = rotations.RadialTensorFunction(((bump, ang),), (0.5, 2.0))
    omega4 = rng.normal(size=rotations.basis_size(4))
    omega4[0] = 0.0
    resid = rotations.verify_superposition(
        omega4, f, rotations.SphereGrid.build(16))
    print(f"superposition residual: {resid:.2e}")


if __name__ == "__main__":
    main()
