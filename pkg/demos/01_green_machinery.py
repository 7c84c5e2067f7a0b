"""
Domain geometry and the Green machinery
=======================================

Every bounded flow domain carries the regular part g(x, y) of its
Dirichlet Green function and the Robin function h(x) = g(x, x).  A
single vortex drifts along level lines of h, and h tells you how hard
the boundary pushes back.
"""

import numpy as np

from vortexlab import PerturbedDisc, UnitDisc, WholePlane

disc = UnitDisc()

print("== membership and clearance ==")
for point in ([0.0, 0.0], [0.7, 0.1], [0.999999999, 0.0], [1.1, 0.0]):
    inside = disc.contains(point)
    note = f"clearance {disc.boundary_clearance(point):+.3f}" if inside else "outside"
    print(f"  {str(point):24s} contains={inside}  {note}")

# the regular part is symmetric in its two arguments
x, y = np.array([0.3, 0.1]), np.array([-0.4, 0.55])
print("\n== regular part ==")
print(f"  g(x,y) = {disc.regular_part(x, y):.12f}")
print(f"  g(y,x) = {disc.regular_part(y, x):.12f}")
print(f"  green(x,y) = {disc.green(x, y):.12f}  (log kernel minus g)")

# the Robin function of the disc is radial, zero at the center, and
# climbs to +infinity at the wall: the center is the energy minimum
print("\n== Robin function along a radius ==")
for r in (0.0, 0.25, 0.5, 0.75, 0.9, 0.99):
    print(f"  h([{r:.2f}, 0]) = {disc.robin([r, 0.0]):10.6f}")

plane = WholePlane()
print("\nwhole plane: no images, g vanishes identically:",
      plane.regular_part(x, y), plane.robin(x))

# a small boundary bump breaks the rotational symmetry; the Robin
# function picks up an angular dependence of the same size
bumpy = PerturbedDisc()
print(f"\n== perturbed disc (epsilon = {bumpy.epsilon}) ==")
for theta in np.linspace(0.0, np.pi, 5):
    p = 0.5 * np.array([np.cos(theta), np.sin(theta)])
    print(f"  theta={theta:5.2f}  h={bumpy.robin(p):.8f}  "
          f"(disc would give {disc.robin(p):.8f})")
