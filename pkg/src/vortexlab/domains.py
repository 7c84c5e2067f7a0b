"""Planar domains and their Green's-function machinery.

A Domain supplies the regular part g(x, y) of the hydrodynamic Green's
function, the full two-point function

    G(x, y) = -(1/2pi) * log|x - y| - g(x, y),

and the boundary self-interaction term h(x) = g(x, x), together with
first and second derivatives of g in closed form.  Shipped domains:

* WholePlane      g == 0, invariant under all rigid motions and scaling.
* UnitDisc        Dirichlet disc: g(x,y) = -(1/4pi) log(|x|^2|y|^2 - 2<x,y> + 1).
* PerturbedDisc   UnitDisc regular part plus a small symmetric polynomial
                  bump; breaks the rotational symmetry, keeping g smooth
                  and symmetric.  Test fixture for the nondegenerate
                  stationary-point branch.

Everything is analytic; finite differences appear only in the tests.
Derivative layout: grad_regular returns (d_x g, d_y g) as two 2-vectors;
hess_regular returns the 4x4 matrix [[d_x^2 g, d_y d_x g],
[d_x d_y g, d_y^2 g]] in (x1, x2, y1, y2) coordinates.

Vectorized variants (suffix _many) evaluate all pairs of two position
arrays at once; the dynamics and shooting hot loops use those.
"""

from __future__ import annotations

import enum
from abc import ABC, abstractmethod

import numpy as np

from .errors import DomainViolationError

FOUR_PI = 4.0 * np.pi
TWO_PI = 2.0 * np.pi


class SymmetryClass(enum.Enum):
    NONE = "none"
    ROTATIONAL = "rotational"
    TRANSLATIONAL = "translational"
    PLANE_FULL = "plane-full"


class Domain(ABC):
    """Interface for a planar domain with a symmetric C^2 regular part."""

    symmetry: SymmetryClass = SymmetryClass.NONE
    #: unit 2-vector for TRANSLATIONAL symmetry, else None
    translation_direction = None
    name: str = "domain"

    # -- membership ----------------------------------------------------
    @abstractmethod
    def contains(self, x) -> bool:
        """True if x is strictly inside the domain (margin included)."""

    def check_interior(self, x, index=None):
        if not self.contains(x):
            raise DomainViolationError(
                f"position {np.asarray(x)} is not interior to {self.name}",
                index=index,
            )

    def boundary_clearance(self, x) -> float:
        """Distance-like clearance to the boundary; +inf for the plane."""
        return np.inf

    # -- regular part, scalar ------------------------------------------
    @abstractmethod
    def regular_part(self, x, y) -> float:
        """g(x, y)."""

    @abstractmethod
    def grad_regular(self, x, y):
        """(d_x g, d_y g), each a 2-vector."""

    @abstractmethod
    def hess_regular(self, x, y) -> np.ndarray:
        """4x4 second-derivative block matrix of g at (x, y)."""

    # -- regular part, all-pairs ---------------------------------------
    # Default implementations loop over the scalar forms; concrete
    # domains override with broadcasting formulas.
    def regular_part_many(self, px, py) -> np.ndarray:
        px, py = np.atleast_2d(px), np.atleast_2d(py)
        out = np.empty((px.shape[0], py.shape[0]))
        for i, x in enumerate(px):
            for j, y in enumerate(py):
                out[i, j] = self.regular_part(x, y)
        return out

    def grad_regular_many(self, px, py) -> np.ndarray:
        """(n, m, 2) array of d_x g(px[i], py[j])."""
        px, py = np.atleast_2d(px), np.atleast_2d(py)
        out = np.empty((px.shape[0], py.shape[0], 2))
        for i, x in enumerate(px):
            for j, y in enumerate(py):
                out[i, j] = self.grad_regular(x, y)[0]
        return out

    def hess_regular_many(self, px, py):
        """Pair of (n, m, 2, 2) arrays: d_x^2 g and d_y d_x g."""
        px, py = np.atleast_2d(px), np.atleast_2d(py)
        h11 = np.empty((px.shape[0], py.shape[0], 2, 2))
        h21 = np.empty_like(h11)
        for i, x in enumerate(px):
            for j, y in enumerate(py):
                H = self.hess_regular(x, y)
                h11[i, j] = H[:2, :2]
                h21[i, j] = H[:2, 2:]
        return h11, h21

    # -- derived quantities ---------------------------------------------
    def green(self, x, y) -> float:
        """G(x, y) = -(1/2pi) log|x-y| - g(x, y); x != y required."""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        d = np.linalg.norm(x - y)
        if d == 0.0:
            from .errors import CoincidentPointError

            raise CoincidentPointError("green() requires x != y")
        self.check_interior(x)
        self.check_interior(y)
        return -np.log(d) / TWO_PI - self.regular_part(x, y)

    def robin(self, x) -> float:
        """h(x) = g(x, x)."""
        self.check_interior(x)
        return self.regular_part(x, x)

    def grad_robin(self, x) -> np.ndarray:
        g1, g2 = self.grad_regular(x, x)
        return g1 + g2

    def hess_robin(self, x) -> np.ndarray:
        H = self.hess_regular(x, x)
        return H[:2, :2] + H[:2, 2:] + H[2:, :2] + H[2:, 2:]


class WholePlane(Domain):
    symmetry = SymmetryClass.PLANE_FULL
    name = "plane"

    def contains(self, x) -> bool:
        return bool(np.all(np.isfinite(x)))

    def regular_part(self, x, y) -> float:
        return 0.0

    def grad_regular(self, x, y):
        return np.zeros(2), np.zeros(2)

    def hess_regular(self, x, y) -> np.ndarray:
        return np.zeros((4, 4))

    def regular_part_many(self, px, py):
        px, py = np.atleast_2d(px), np.atleast_2d(py)
        return np.zeros((px.shape[0], py.shape[0]))

    def grad_regular_many(self, px, py):
        px, py = np.atleast_2d(px), np.atleast_2d(py)
        return np.zeros((px.shape[0], py.shape[0], 2))

    def hess_regular_many(self, px, py):
        px, py = np.atleast_2d(px), np.atleast_2d(py)
        z = np.zeros((px.shape[0], py.shape[0], 2, 2))
        return z, z.copy()


class UnitDisc(Domain):
    """Dirichlet Green's function of the open unit disc.

    With q(x, y) = |x|^2 |y|^2 - 2 <x, y> + 1 (strictly positive for
    interior points):

        g(x, y) = -(1/4pi) log q
        h(x)    = -(1/2pi) log(1 - |x|^2)

    Derivatives follow from d_x q = 2|y|^2 x - 2y.
    """

    symmetry = SymmetryClass.ROTATIONAL
    name = "unit-disc"
    #: points with 1 - |x| below this margin are rejected (log blowup)
    interior_margin = 1e-9

    def contains(self, x) -> bool:
        x = np.asarray(x, dtype=float)
        return bool(np.linalg.norm(x) < 1.0 - self.interior_margin)

    def boundary_clearance(self, x) -> float:
        return float(1.0 - np.linalg.norm(np.asarray(x, dtype=float)))

    @staticmethod
    def _q(x, y) -> float:
        x2 = float(x @ x)
        y2 = float(y @ y)
        return x2 * y2 - 2.0 * float(x @ y) + 1.0

    def regular_part(self, x, y) -> float:
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        self.check_interior(x)
        self.check_interior(y)
        q = self._q(x, y)
        assert q > 0.0, "q must be positive for interior points"
        return -np.log(q) / FOUR_PI

    def grad_regular(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        q = self._q(x, y)
        qx = 2.0 * float(y @ y) * x - 2.0 * y
        qy = 2.0 * float(x @ x) * y - 2.0 * x
        return -qx / (FOUR_PI * q), -qy / (FOUR_PI * q)

    def hess_regular(self, x, y) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        q = self._q(x, y)
        x2, y2 = float(x @ x), float(y @ y)
        qx = 2.0 * y2 * x - 2.0 * y
        qy = 2.0 * x2 * y - 2.0 * x
        I2 = np.eye(2)
        # d_x^2 q = 2|y|^2 I, d_y d_x q = 4 x y^T - 2 I (rows: x comps)
        gxx = -(2.0 * y2 * I2 / q - np.outer(qx, qx) / q**2) / FOUR_PI
        gyy = -(2.0 * x2 * I2 / q - np.outer(qy, qy) / q**2) / FOUR_PI
        gxy = -((4.0 * np.outer(x, y) - 2.0 * I2) / q
                - np.outer(qx, qy) / q**2) / FOUR_PI
        H = np.empty((4, 4))
        H[:2, :2] = gxx
        H[:2, 2:] = gxy
        H[2:, :2] = gxy.T
        H[2:, 2:] = gyy
        return H

    def robin(self, x) -> float:
        x = np.asarray(x, dtype=float)
        self.check_interior(x)
        return -np.log(1.0 - float(x @ x)) / TWO_PI

    # -- vectorized all-pairs forms ------------------------------------
    def regular_part_many(self, px, py):
        px, py = np.atleast_2d(px), np.atleast_2d(py)
        q = self._q_many(px, py)
        return -np.log(q) / FOUR_PI

    @staticmethod
    def _q_many(px, py):
        r2x = np.einsum("id,id->i", px, px)
        r2y = np.einsum("jd,jd->j", py, py)
        dots = px @ py.T
        return np.multiply.outer(r2x, r2y) - 2.0 * dots + 1.0

    def grad_regular_many(self, px, py):
        px, py = np.atleast_2d(px), np.atleast_2d(py)
        q = self._q_many(px, py)
        r2y = np.einsum("jd,jd->j", py, py)
        # qx[i,j] = 2|y_j|^2 x_i - 2 y_j
        qx = 2.0 * r2y[None, :, None] * px[:, None, :] - 2.0 * py[None, :, :]
        return -qx / (FOUR_PI * q[:, :, None])

    def hess_regular_many(self, px, py):
        px, py = np.atleast_2d(px), np.atleast_2d(py)
        q = self._q_many(px, py)
        r2x = np.einsum("id,id->i", px, px)
        r2y = np.einsum("jd,jd->j", py, py)
        qx = 2.0 * r2y[None, :, None] * px[:, None, :] - 2.0 * py[None, :, :]
        qy = 2.0 * r2x[:, None, None] * py[None, :, :] - 2.0 * px[:, None, :]
        I2 = np.eye(2)
        qq = q[:, :, None, None]
        h11 = -(2.0 * r2y[None, :, None, None] * I2 / qq
                - np.einsum("ija,ijb->ijab", qx, qx) / qq**2) / FOUR_PI
        xyT = np.einsum("ia,jb->ijab", px, py)
        h21 = -((4.0 * xyT - 2.0 * I2) / qq
                - np.einsum("ija,ijb->ijab", qx, qy) / qq**2) / FOUR_PI
        return h11, h21


class PerturbedDisc(UnitDisc):
    """Unit disc with a small symmetric polynomial bump added to g.

    bump(x, y) = eps * (x1*y1 + 2*x2*y2 + x1 + y1)

    The bump is symmetric under swapping x and y and smooth, so it is an
    admissible regular part, but it has no rotational invariance: generic
    critical points of the resulting renormalized energy are isolated and
    nondegenerate, which is exactly what the classification tests need.
    """

    symmetry = SymmetryClass.NONE
    name = "perturbed-disc"

    def __init__(self, epsilon: float = 1e-2):
        self.epsilon = float(epsilon)

    def regular_part(self, x, y) -> float:
        base = super().regular_part(x, y)
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        return base + self.epsilon * (
            x[0] * y[0] + 2.0 * x[1] * y[1] + x[0] + y[0]
        )

    def grad_regular(self, x, y):
        g1, g2 = super().grad_regular(x, y)
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        e = self.epsilon
        b1 = e * np.array([y[0] + 1.0, 2.0 * y[1]])
        b2 = e * np.array([x[0] + 1.0, 2.0 * x[1]])
        return g1 + b1, g2 + b2

    def hess_regular(self, x, y) -> np.ndarray:
        H = super().hess_regular(x, y).copy()
        e = self.epsilon
        mixed = e * np.array([[1.0, 0.0], [0.0, 2.0]])
        H[:2, 2:] += mixed
        H[2:, :2] += mixed.T
        return H

    def robin(self, x) -> np.ndarray:
        # the inherited closed form misses the bump diagonal
        x = np.asarray(x, dtype=float)
        base = super().robin(x)
        return base + self.epsilon * (
            x[0] * x[0] + 2.0 * x[1] * x[1] + 2.0 * x[0])

    def regular_part_many(self, px, py):
        base = super().regular_part_many(px, py)
        px, py = np.atleast_2d(px), np.atleast_2d(py)
        e = self.epsilon
        return base + e * (
            np.multiply.outer(px[:, 0], py[:, 0])
            + 2.0 * np.multiply.outer(px[:, 1], py[:, 1])
            + px[:, 0][:, None] + py[:, 0][None, :]
        )

    def grad_regular_many(self, px, py):
        base = super().grad_regular_many(px, py)
        px, py = np.atleast_2d(px), np.atleast_2d(py)
        e = self.epsilon
        bump = np.empty_like(base)
        bump[:, :, 0] = e * (py[:, 0][None, :] + 1.0)
        bump[:, :, 1] = e * 2.0 * py[:, 1][None, :]
        return base + bump

    def hess_regular_many(self, px, py):
        h11, h21 = super().hess_regular_many(px, py)
        e = self.epsilon
        mixed = e * np.array([[1.0, 0.0], [0.0, 2.0]])
        return h11, h21 + mixed


def make_domain(kind: str, **kwargs) -> Domain:
    """Factory keyed by the CLI's domain names."""
    kind = kind.strip().lower()
    if kind in ("plane", "whole-plane", "wholeplane", "r2"):
        return WholePlane()
    if kind in ("disc", "disk", "unit-disc", "unit-disk"):
        return UnitDisc()
    if kind in ("perturbed-disc", "perturbed-disk"):
        return PerturbedDisc(**kwargs)
    raise ValueError(f"unknown domain kind: {kind!r}")
