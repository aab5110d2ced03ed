"""Cell-to-cell transition probabilities on a 1D grid.

Where does a particle that starts uniformly in [0, 1] end up after one
Gaussian step?  We compute the transition probability into each cell of a
small grid deterministically, check the row against the escape
probability, and cross-check one entry with the Monte Carlo estimator.
"""

from cellescape import (
    McConfig,
    WienerStep,
    escape_probability_det,
    mesh_element,
    theoretical_stat_error,
    transition_probability_det_1d,
    transition_probability_mc,
)

law = WienerStep(dt=0.5, dim=1)
source = (0.0, 1.0)
grid = [(k, k + 1.0) for k in range(-3, 4)]

print("transition probabilities from [0, 1], dt = 0.5\n")
row_sum = 0.0
for target in grid:
    est = transition_probability_det_1d(source, target, law)
    row_sum += est.value
    print(f"  into [{target[0]:+.0f}, {target[1]:+.0f}]: {est.value:.6f}")

# Staying in the source cell is itself a transition; everything that does
# not stay has escaped, so (1 - stay) must match the escape probability.
stay = transition_probability_det_1d(source, source, law).value
escape = escape_probability_det(mesh_element("segment", [[0.0], [1.0]]), law).value
print(f"\n1 - stay = {1 - stay:.8f}")
print(f"escape   = {escape:.8f}")

# The grid row plus the two tails must account for all the probability.
print(f"row sum over 7 cells = {row_sum:.6f} (tails carry the rest)")

# Monte Carlo agrees within the binomial error:
src = mesh_element("segment", [[0.0], [1.0]])
tgt = mesh_element("segment", [[1.0], [2.0]])
det = transition_probability_det_1d((0, 1), (1, 2), law)
mc = transition_probability_mc(src, tgt, law, McConfig(particles=10**6, seed=4))
print(
    f"\n[0,1] -> [1,2]: det {det.value:.6f}, mc {mc.value:.6f}, "
    f"|diff| {abs(det.value - mc.value):.1e} "
    f"<= 4 sigma = {4 * theoretical_stat_error(det.value, 10**6):.1e}"
)
