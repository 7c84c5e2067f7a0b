"""Integrating vortex motion, with guard rails.

The integrator is an adaptive embedded Runge-Kutta pair with dense
output.  Collisions and boundary approaches are detected from the dense
output and refined to event times; energy is conserved to integrator
accuracy without any projection.
"""

import numpy as np

from vortexlab import (BoundaryEventError, IntegratorSettings, UnitDisc,
                       VortexSystem, WholePlane, check_rescaling_equivalence,
                       integrate)

disc = UnitDisc()

# a counter-rotating pair translates; in the disc the images bend the
# path into a loop hugging the wall
pair = VortexSystem((1.0, -1.0), (1, 1), disc)
z0 = np.array([0.5, 0.05, 0.5, -0.05])
traj = integrate(pair, z0, (0.0, 4.0))
energies = [pair.hamiltonian(s) for s in traj.states]
print("disc dipole, t in [0, 4]:")
print(f"  {len(traj.times) - 1} steps, min separation {traj.min_separation:.4f}")
print(f"  energy drift {max(energies) - min(energies):.2e}")
print(f"  state at t=2: {np.round(traj.sample(2.0), 4)}")

# the same run with a conservative wall margin trips the boundary guard
try:
    integrate(pair, z0, (0.0, 4.0), IntegratorSettings(boundary_margin=0.1))
except BoundaryEventError as exc:
    print(f"\nboundary guard: vortex {exc.index} within margin at "
          f"t = {exc.time:.3f}")

# time reversal brings the state back
back = integrate(pair, traj.final_state, (4.0, 0.0))
print(f"\nreversal error: {np.linalg.norm(back.final_state - z0):.2e}")

# rescaled cluster coordinates trace the same physics: evolving the
# rescaled state and mapping back agrees with the direct physical flow
plane_pair = VortexSystem((1.0, 1.0), (2,), WholePlane())
anchor = np.array([[0.3, -0.2]])
u0 = np.array([0.5, 0.0, -0.5, 0.0])
for r in (1.0, 0.5):
    dev = check_rescaling_equivalence(plane_pair, anchor, r, u0, 2.0)
    print(f"rescaling equivalence at r={r}: {dev:.2e}")
