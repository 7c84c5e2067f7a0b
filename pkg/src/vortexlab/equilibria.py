"""Catalog of rigidly rotating whole-plane configurations and their
certification.

A relative equilibrium is a configuration z with  grad H(z) = omega*M z
and center of vorticity at the origin; the trajectory is the rigid
rotation Z(t) = exp(omega*t*perp) z.  Constructors return configurations
normalized so that the symmetry-twisted period is 2*pi: |omega| = 1 for
plain configurations, |omega| = 1/ord(sigma) for the cyclic polygon.

Certification counts independent periodic solutions of the linearized
equation along Z(t).  In the co-rotating frame the linearization is the
constant-coefficient system  v' = A v  with

    A = M^{-1} P hess H(z) - omega * P,      P = blockwise quarter turn,

so the time-t fundamental matrix of the original linearization is
Phi_t = exp(omega*t*perp) expm(t*A).  Reported quantities:

* periodic_solution_count  = dim ker(Phi_tau - I), tau = 2*pi*ord(sigma)
  (the full rotation period; equals the plain 2*pi monodromy whenever
  sigma is the identity).
* symmetric_count          = dim ker(S_sigma Phi_{2pi} - I), the number of
  solutions with the twisted periodicity  sigma*w(.+2pi) = w.
* unit_multiplier_count / twisted_unit_multiplier_count: the algebraic
  multiplicity of the Floquet multiplier 1 (eigenvalues within
  multiplier_tol of 1).  Rotation invariance forces a defective 2x2
  block on span{z, perp z} in every case, so the structural minimum is
  4 (two translations, the rotation mode, and its generalized partner).
  A configuration can carry extra unit multipliers without extra
  periodic solutions when the excess sits in a longer defective chain;
  such configurations are degenerate for continuation purposes even
  though the kernel count stays at 3.  The flags therefore require both
  the minimal kernel and the minimal algebraic multiplicity.

Kernel dimensions use singular values of (Phi - I) below
kernel_tol * ||Phi||.  Caveat: for strongly hyperbolic configurations
(collinear roots with 4+ vortices, ||Phi|| ~ 1e10) the relative
threshold swamps O(1) singular values and overcounts; pass an explicit
smaller kernel_tol there.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import hermite as _hermite
from scipy.linalg import expm

from .domains import WholePlane
from .errors import (ConstraintViolationError, NotEquilibriumError,
                     ZeroTotalStrengthError)
from .linalg import (TWO_PI, blockwise_rotation, permutation_matrix,
                     permutation_order, spin)
from .systems import VortexSystem

RESIDUAL_TOL = 1e-10


@dataclass(eq=False)
class RelativeEquilibrium:
    """A rigidly rotating configuration with its symmetry bookkeeping."""

    strengths: tuple
    positions: np.ndarray  # (N, 2)
    angular_velocity: float
    permutation: tuple  # sigma, 0-based images; identity for most entries

    def __post_init__(self):
        self.positions = np.asarray(self.positions, dtype=float).reshape(-1, 2)
        self.strengths = tuple(float(g) for g in self.strengths)
        n = len(self.strengths)
        if self.positions.shape[0] != n:
            raise ConstraintViolationError("strengths/positions length mismatch")
        self.permutation = tuple(int(i) for i in self.permutation)
        if sorted(self.permutation) != list(range(n)):
            raise ConstraintViolationError(f"invalid permutation {self.permutation}")
        gam = np.asarray(self.strengths)
        inv = np.argsort(np.asarray(self.permutation))
        if not np.allclose(gam, gam[inv], rtol=0, atol=1e-13):
            raise ConstraintViolationError(
                "permutation must preserve vortex strengths")

    # -- derived -----------------------------------------------------------
    @property
    def n(self) -> int:
        return len(self.strengths)

    @property
    def order(self) -> int:
        return permutation_order(self.permutation)

    @property
    def period(self) -> float:
        """Full rotation period 2*pi/|omega| (inf for a trivial cluster)."""
        if self.angular_velocity == 0.0:
            return np.inf
        return TWO_PI / abs(self.angular_velocity)

    @property
    def is_trivial(self) -> bool:
        """Single-vortex placeholder cluster (no internal motion)."""
        return self.n == 1

    @property
    def system(self) -> VortexSystem:
        return VortexSystem(self.strengths, (self.n,), WholePlane())

    def flat(self) -> np.ndarray:
        return self.positions.reshape(-1)

    def solution(self, t: float) -> np.ndarray:
        """The rigid rotation Z(t) as a flat state."""
        return spin(self.flat(), self.angular_velocity, t)

    def residual(self) -> float:
        z = self.flat()
        sys = self.system
        return float(np.linalg.norm(
            sys.gradient(z) - self.angular_velocity * sys.weights * z))

    def center_of_vorticity(self) -> np.ndarray:
        gam = np.asarray(self.strengths)
        return (gam[:, None] * self.positions).sum(axis=0) / gam.sum()


def _projected_omega(sys: VortexSystem, z: np.ndarray) -> float:
    """Least-squares omega for grad H(z) = omega * M z."""
    g = sys.gradient(z)
    mz = sys.weights * z
    return float((g @ mz) / (mz @ mz))


def _finish(strengths, positions, sigma) -> RelativeEquilibrium:
    """Project omega, build, and defensively check the residual."""
    eq = RelativeEquilibrium(tuple(strengths), positions, 0.0, tuple(sigma))
    eq.angular_velocity = _projected_omega(eq.system, eq.flat())
    res = eq.residual()
    if res > RESIDUAL_TOL:
        raise NotEquilibriumError(
            f"constructed configuration misses the rigid-rotation "
            f"condition (residual {res:.2e})")
    return eq


def make_trivial(gamma: float) -> RelativeEquilibrium:
    """Single-vortex placeholder cluster: sits at its anchor, no
    internal rotation.  Not certifiable; superposition specs treat it
    as a zero block."""
    if gamma == 0.0:
        raise ConstraintViolationError("vortex strength must be nonzero")
    return RelativeEquilibrium((float(gamma),), np.zeros((1, 2)), 0.0, (0,))


def make_pair(gamma1: float, gamma2: float) -> RelativeEquilibrium:
    """Two vortices on the x-axis about their center of vorticity,
    scaled to |omega| = 1; identity symmetry."""
    total = gamma1 + gamma2
    if total == 0.0:
        raise ZeroTotalStrengthError(
            "a zero-sum pair translates instead of rotating about a center")
    d = np.sqrt(abs(total) / np.pi)
    positions = np.array([[d * gamma2 / total, 0.0],
                          [-d * gamma1 / total, 0.0]])
    return _finish((gamma1, gamma2), positions, (0, 1))


def make_equilateral(gamma1: float, gamma2: float,
                     gamma3: float) -> RelativeEquilibrium:
    """Equilateral triangle about the center of vorticity, |omega| = 1,
    identity symmetry.  Built for any nonzero total strength; whether the
    configuration is degenerate is the certifier's business."""
    total = gamma1 + gamma2 + gamma3
    if total == 0.0:
        raise ZeroTotalStrengthError("zero total strength: no rotation center")
    s = np.sqrt(abs(total) / np.pi)
    verts = np.array([[0.0, 0.0], [s, 0.0], [0.5 * s, 0.5 * np.sqrt(3.0) * s]])
    gam = np.array([gamma1, gamma2, gamma3])
    center = (gam[:, None] * verts).sum(axis=0) / total
    return _finish((gamma1, gamma2, gamma3), verts - center, (0, 1, 2))


def make_thomson(n: int, gamma: float) -> RelativeEquilibrium:
    """n identical vortices on a regular n-gon with the cyclic symmetry.

    Scaled so |omega| = 1/n: one 2*pi time unit advances the rotation by
    exactly one polygon step, making the cyclic permutation a twisted
    period:  sigma*Z(. + 2*pi) = Z.
    """
    n = int(n)
    if n < 2:
        raise ConstraintViolationError("polygon needs at least 2 vortices")
    if gamma == 0.0:
        raise ConstraintViolationError("vortex strength must be nonzero")
    # omega = -gamma (n-1) / (2 pi R^2); |omega| = 1/n fixes R
    radius = np.sqrt(n * (n - 1) * abs(gamma) / (2.0 * np.pi))
    angles = TWO_PI * np.arange(n) / n
    positions = radius * np.stack([np.cos(angles), np.sin(angles)], axis=1)
    # rotation direction decides which neighbour each vortex replaces
    omega_sign = -np.sign(gamma)
    if omega_sign < 0:
        sigma = tuple((j + 1) % n for j in range(n))
    else:
        sigma = tuple((j - 1) % n for j in range(n))
    eq = _finish((gamma,) * n, positions, sigma)
    if abs(abs(eq.angular_velocity) * n - 1.0) > 1e-9:
        raise NotEquilibriumError("polygon normalization failed")
    return eq


def make_collinear_hermite(n: int, gamma: float) -> RelativeEquilibrium:
    """n identical vortices at the roots of the degree-n Hermite
    polynomial on the x-axis, scaled to |omega| = 1; identity symmetry.

    Roots come from the companion-matrix eigenvalues of the recurrence
    basis (numpy.polynomial.hermite), reliable for n <= 20.
    """
    n = int(n)
    if n < 2:
        raise ConstraintViolationError("need at least 2 vortices")
    if gamma == 0.0:
        raise ConstraintViolationError("vortex strength must be nonzero")
    if n > 20:
        raise ConstraintViolationError("root finding unvalidated for n > 20")
    roots = np.sort(_hermite.hermroots([0.0] * n + [1.0]))
    # the true root set is antisymmetric; enforcing that on the computed
    # roots kills spurious last-ulp asymmetry, which the strongly
    # hyperbolic directions of these configurations would amplify
    roots = 0.5 * (roots - roots[::-1])
    lam = np.sqrt(abs(gamma) / np.pi)  # unscaled omega is -gamma/pi
    positions = np.zeros((n, 2))
    positions[:, 0] = lam * roots
    return _finish((gamma,) * n, positions, tuple(range(n)))


def normalize(eq: RelativeEquilibrium, target_omega: float) -> RelativeEquilibrium:
    """Rescale positions by lambda = sqrt(|omega|/|target|) so the new
    angular velocity is target_omega.

    The rotation direction is intrinsic (fixed by the strengths): a
    reflection of the configuration conjugates the flow to its time
    reversal and leaves omega unchanged, so a sign-mismatched target is
    an error, not a reflection.
    """
    if eq.angular_velocity == 0.0:
        raise ConstraintViolationError("cannot normalize omega = 0")
    if target_omega == 0.0:
        raise ConstraintViolationError("target omega must be nonzero")
    if target_omega * eq.angular_velocity < 0.0:
        raise ConstraintViolationError(
            f"rotation direction is fixed by the strengths "
            f"(omega = {eq.angular_velocity:+.3e}); cannot reach "
            f"target {target_omega:+.3e}")
    lam = np.sqrt(abs(eq.angular_velocity) / abs(target_omega))
    out = RelativeEquilibrium(eq.strengths, lam * eq.positions,
                              eq.angular_velocity / lam**2, eq.permutation)
    res = out.residual()
    if res > RESIDUAL_TOL:
        raise NotEquilibriumError(f"normalization broke the residual ({res:.2e})")
    return out


# ---------------------------------------------------------------------------
# certification
# ---------------------------------------------------------------------------

@dataclass
class CertificationReport:
    periodic_solution_count: int
    symmetric_count: int
    unit_multiplier_count: int
    twisted_unit_multiplier_count: int
    nondegenerate: bool
    sigma_nondegenerate: bool
    angular_velocity: float
    residual: float
    order: int
    period: float
    singular_values: list = field(default_factory=list)
    twisted_singular_values: list = field(default_factory=list)
    kernel_tol: float = 1e-6
    multiplier_tol: float = 1e-2

    def as_dict(self) -> dict:
        return {
            "periodic_solution_count": self.periodic_solution_count,
            "symmetric_count": self.symmetric_count,
            "unit_multiplier_count": self.unit_multiplier_count,
            "twisted_unit_multiplier_count": self.twisted_unit_multiplier_count,
            "nondegenerate": self.nondegenerate,
            "sigma_nondegenerate": self.sigma_nondegenerate,
            "angular_velocity": self.angular_velocity,
            "residual": self.residual,
            "order": self.order,
            "period": self.period,
            "singular_values": list(self.singular_values),
            "twisted_singular_values": list(self.twisted_singular_values),
            "kernel_tol": self.kernel_tol,
            "multiplier_tol": self.multiplier_tol,
        }


def rotating_frame_matrix(eq: RelativeEquilibrium) -> np.ndarray:
    """Constant matrix A of the co-rotating linearization v' = A v."""
    sys = eq.system
    z = eq.flat()
    n = eq.n
    P = np.zeros((2 * n, 2 * n))
    for i in range(n):
        P[2 * i, 2 * i + 1] = 1.0
        P[2 * i + 1, 2 * i] = -1.0
    return sys.field_jacobian(z) - eq.angular_velocity * P


def monodromy(eq: RelativeEquilibrium, t: float) -> np.ndarray:
    """Fundamental matrix Phi_t of the linearization along Z(.)."""
    A = rotating_frame_matrix(eq)
    rot = blockwise_rotation(eq.n, -eq.angular_velocity * t)
    return rot @ expm(t * A)


def _kernel_dim(phi: np.ndarray, tol_factor: float):
    """dim ker(phi - I): singular values below tol_factor * ||phi||_2."""
    norm = np.linalg.norm(phi, 2)
    sv = np.linalg.svd(phi - np.eye(phi.shape[0]), compute_uv=False)
    return int((sv <= tol_factor * norm).sum()), sv


def certify(eq: RelativeEquilibrium, kernel_tol: float = 1e-6,
            multiplier_tol: float = 1e-2) -> CertificationReport:
    """Count periodic solutions of the linearization and report the
    degeneracy structure; see the module docstring for the semantics."""
    if eq.is_trivial:
        raise ConstraintViolationError(
            "single-vortex placeholder clusters are not certifiable")
    res = eq.residual()
    if res > RESIDUAL_TOL:
        raise NotEquilibriumError(
            f"not a rigidly rotating configuration (residual {res:.2e})")
    order = eq.order
    if abs(abs(eq.angular_velocity) * order - 1.0) > 1e-9:
        raise ConstraintViolationError(
            "certification expects the normalized scaling "
            "|omega| * ord(sigma) = 1 (twisted period 2*pi); "
            "normalize() the configuration first")

    tau = TWO_PI * order
    phi_tau = monodromy(eq, tau)
    phi_2pi = phi_tau if order == 1 else monodromy(eq, TWO_PI)
    S = permutation_matrix(eq.permutation)
    twisted = S @ phi_2pi

    full_count, sv_full = _kernel_dim(phi_tau, kernel_tol)
    tw_count, sv_tw = _kernel_dim(twisted, kernel_tol)

    ev_full = np.linalg.eigvals(phi_tau)
    ev_tw = np.linalg.eigvals(twisted)
    alg_full = int((np.abs(ev_full - 1.0) <= multiplier_tol).sum())
    alg_tw = int((np.abs(ev_tw - 1.0) <= multiplier_tol).sum())

    is_id = eq.permutation == tuple(range(eq.n))
    return CertificationReport(
        periodic_solution_count=full_count,
        symmetric_count=tw_count,
        unit_multiplier_count=alg_full,
        twisted_unit_multiplier_count=alg_tw,
        nondegenerate=bool(is_id and full_count == 3 and alg_full == 4),
        sigma_nondegenerate=bool(tw_count == 3 and alg_tw == 4),
        angular_velocity=eq.angular_velocity,
        residual=res,
        order=order,
        period=tau,
        singular_values=[float(s) for s in np.sort(sv_full)],
        twisted_singular_values=[float(s) for s in np.sort(sv_tw)],
        kernel_tol=kernel_tol,
        multiplier_tol=multiplier_tol,
    )


_CATALOG = {
    "pair": (make_pair, 2),
    "equilateral": (make_equilateral, 3),
    "thomson": (make_thomson, 2),
    "hermite": (make_collinear_hermite, 2),
}


def from_catalog(name: str, *params) -> RelativeEquilibrium:
    """Build a catalog configuration by name.

    pair g1 g2 | equilateral g1 g2 g3 | thomson n g | hermite n g
    """
    key = name.strip().lower()
    if key not in _CATALOG:
        raise KeyError(f"unknown catalog name {name!r}; "
                       f"choose from {sorted(_CATALOG)}")
    maker, argc = _CATALOG[key]
    if len(params) != argc:
        raise TypeError(f"{key} expects {argc} parameters, got {len(params)}")
    if key in ("thomson", "hermite"):
        count = int(round(float(params[0])))
        return maker(count, float(params[1]))
    return maker(*[float(p) for p in params])
