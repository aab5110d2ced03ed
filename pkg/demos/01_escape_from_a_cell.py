"""Escape probability of one random step from a mesh cell.

A particle sits at a uniform random position inside a cell and takes one
Gaussian step with variance dt per coordinate.  We compute the probability
that it ends up outside the cell, twice: by adaptive quadrature of the
stay probability (deterministic) and by simulating a million particles
(Monte Carlo), and check that the two agree within the binomial error.
"""

from cellescape import (
    McConfig,
    WienerStep,
    escape_probability_det,
    escape_probability_mc,
    mesh_element,
    theoretical_stat_error,
)

cells = {
    "segment": mesh_element("segment", [[0.0], [2.0]]),
    "triangle": mesh_element("triangle", [[0, 0], [2, 0], [3, 2]]),
    "parallelogram": mesh_element("parallelogram", [[0, 0], [2, 0], [1, 2]]),
    "tetrahedron": mesh_element("tetrahedron", [[0, 0, 0], [2, 0, 0], [3, 2, 0], [1, 1, 1]]),
    "parallelepiped": mesh_element(
        "parallelepiped", [[0, 0, 0], [2, 0, 0], [1, 2, 1], [0, 0, 2]]
    ),
}

dt = 1.0
particles = 10**6
print(f"one Gaussian step with dt = {dt}, N = {particles} particles\n")
print(f"{'cell':<15s} {'deterministic':>14s} {'monte carlo':>12s} {'|diff|':>9s} {'4 sigma':>9s}")
for name, cell in cells.items():
    law = WienerStep(dt=dt, dim=cell.dim)
    det = escape_probability_det(cell, law)
    mc = escape_probability_mc(cell, law, McConfig(particles=particles, seed=1))
    four_sigma = 4.0 * theoretical_stat_error(det.value, particles)
    print(
        f"{name:<15s} {det.value:>14.6f} {mc.value:>12.6f} "
        f"{abs(det.value - mc.value):>9.1e} {four_sigma:>9.1e}"
    )

# The deterministic solver also reports its quadrature error estimate and
# the work it did:
det = escape_probability_det(cells["tetrahedron"], WienerStep(dt=0.1, dim=3))
print(
    f"\ntetrahedron, dt = 0.1: escape = {det.value:.6f}"
    f" +- {det.error_estimate:.1e} ({det.cost} integrand evaluations,"
    f" {det.wall_time:.2f}s)"
)
