"""Critical points of the m-point renormalized energy on a domain.

The energy of m interacting centers a = (a^1, ..., a^m) with strengths
Gamma^k is the trivially clustered system energy

    E(a) = sum_{k != k'} Gamma^k Gamma^k' G(a^k, a^k')
         - sum_k (Gamma^k)^2 h(a^k),

with G the domain's two-point function and h its self-interaction term.
Critical points anchor the rescaled cluster dynamics; what matters for
that is not just criticality but the kernel of the Hessian, which is
forced by whatever continuous symmetry the domain has.  classify()
names the four admissible kernel shapes:

    NondegenerateI     kernel dim 0 (generic domains)
    RotationalII       rotational domain, kernel = span{rotation mode}
    TranslationalIII   translational domain, kernel = span{direction}
    PlaneIV            whole plane, kernel = the two translations plus
                       the rotation mode, dim exactly 3
    Unclassified       anything else

The whole-plane case with the pure logarithmic kernel always carries a
fourth kernel direction (scaling) at critical points, so PlaneIV can
only occur for modified radial kernels; the check is exposed but the
shipped plane kernel never satisfies it.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .domains import Domain, SymmetryClass, UnitDisc
from .errors import (CollisionError, ConstraintViolationError,
                     ConvergenceError, DomainViolationError)
from .linalg import as_state, perp, truncated_svd_solve
from .systems import VortexSystem

GRADIENT_TOL = 1e-10
KERNEL_TOL = 1e-8
MAX_ITERATIONS = 100

#: half-separation of the strength (1, -1) stationary pair in the unit
#: disc; the positive root of mu^4 = 1 - 4 mu^2
DIPOLE_OFFSET = float(np.sqrt(np.sqrt(5.0) - 2.0))


class Classification(enum.Enum):
    NONDEGENERATE = "NondegenerateI"
    ROTATIONAL = "RotationalII"
    TRANSLATIONAL = "TranslationalIII"
    PLANE = "PlaneIV"
    UNCLASSIFIED = "Unclassified"


@dataclass
class StationaryPoint:
    strengths: tuple
    positions: np.ndarray  # (m, 2)
    gradient_norm: float
    hessian: np.ndarray  # (2m, 2m)
    kernel_dimension: int
    classification: Classification

    def flat(self) -> np.ndarray:
        return self.positions.reshape(-1)

    @property
    def m(self) -> int:
        return len(self.strengths)

    def as_dict(self) -> dict:
        return {
            "strengths": [float(g) for g in self.strengths],
            "positions": self.positions.tolist(),
            "gradient_norm": float(self.gradient_norm),
            "hessian": self.hessian.tolist(),
            "kernel_dimension": int(self.kernel_dimension),
            "classification": self.classification.value,
        }


def _anchor_system(strengths, domain: Domain) -> VortexSystem:
    return VortexSystem(tuple(float(g) for g in strengths),
                        (1,) * len(tuple(strengths)), domain)


def m_hamiltonian(strengths, domain: Domain, a) -> float:
    """Energy of the m centers; gradient/Hessian companions below."""
    return _anchor_system(strengths, domain).hamiltonian(as_state(a))


def m_gradient(strengths, domain: Domain, a) -> np.ndarray:
    return _anchor_system(strengths, domain).gradient(as_state(a))


def m_hessian(strengths, domain: Domain, a) -> np.ndarray:
    return _anchor_system(strengths, domain).hessian(as_state(a))


# ---------------------------------------------------------------------------
# symmetry bookkeeping
# ---------------------------------------------------------------------------

def _translations(m: int):
    cx = np.tile([1.0, 0.0], m)
    cy = np.tile([0.0, 1.0], m)
    return cx, cy


def kernel_generators(domain: Domain, positions) -> list:
    """Kernel directions the domain's symmetry forces at a critical
    point: what the Hessian kernel is compared against."""
    flat = as_state(positions)
    m = flat.size // 2
    sym = domain.symmetry
    if sym == SymmetryClass.ROTATIONAL:
        return [perp(flat)]
    if sym == SymmetryClass.TRANSLATIONAL:
        nu = np.asarray(domain.translation_direction, dtype=float)
        return [np.tile(nu / np.linalg.norm(nu), m)]
    if sym == SymmetryClass.PLANE_FULL:
        cx, cy = _translations(m)
        return [cx, cy, perp(flat)]
    return []


def _newton_constraints(domain: Domain, flat: np.ndarray):
    """Directions the Newton step is kept orthogonal to (the symmetry
    generators, plus scaling on the whole plane where the energy has an
    extra dilation freedom)."""
    gens = kernel_generators(domain, flat)
    if domain.symmetry == SymmetryClass.PLANE_FULL:
        gens = gens + [flat.copy()]
    scale = float(np.linalg.norm(flat)) or 1.0
    return [g for g in gens if np.linalg.norm(g) > 1e-14 * scale]


def _hessian_kernel(hessian: np.ndarray, tol: float = KERNEL_TOL):
    """(dimension, orthonormal basis columns) of the numerical kernel."""
    U, s, Vt = np.linalg.svd(hessian)
    if s.size == 0 or s[0] == 0.0:
        n = hessian.shape[0]
        return n, np.eye(n)
    mask = s <= tol * s[0]
    return int(mask.sum()), Vt[mask].T


def _spanned_by(basis: np.ndarray, generators: list, tol: float = 1e-8) -> bool:
    """Whether the orthonormal columns of `basis` span the same space as
    the generators (dimensions already known to match)."""
    G = np.column_stack(generators)
    Q, R = np.linalg.qr(G)
    keep = np.abs(np.diag(R)) > 1e-12 * max(1.0, np.abs(np.diag(R)).max())
    Q = Q[:, keep]
    if Q.shape[1] != basis.shape[1]:
        return False
    resid = basis - Q @ (Q.T @ basis)
    return bool(np.linalg.norm(resid) <= tol)


def classify(sp: StationaryPoint, domain: Domain) -> Classification:
    """Match the Hessian kernel against the domain's symmetry case."""
    if sp.gradient_norm > GRADIENT_TOL:
        raise ConstraintViolationError(
            f"classification needs a converged critical point "
            f"(gradient norm {sp.gradient_norm:.2e})")
    dim, basis = _hessian_kernel(sp.hessian)
    return _classify_kernel(domain, sp.flat(), dim, basis)


def _classify_kernel(domain, flat, dim, basis) -> Classification:
    if dim == 0:
        return Classification.NONDEGENERATE
    gens = kernel_generators(domain, flat)
    sym = domain.symmetry
    if (sym == SymmetryClass.ROTATIONAL and dim == 1
            and _spanned_by(basis, gens)):
        return Classification.ROTATIONAL
    if (sym == SymmetryClass.TRANSLATIONAL and dim == 1
            and _spanned_by(basis, gens)):
        return Classification.TRANSLATIONAL
    if (sym == SymmetryClass.PLANE_FULL and dim == 3
            and _spanned_by(basis, gens)):
        return Classification.PLANE
    return Classification.UNCLASSIFIED


def _finish_point(strengths, domain, flat, gradient_norm) -> StationaryPoint:
    hess = m_hessian(strengths, domain, flat)
    dim, basis = _hessian_kernel(hess)
    cls = _classify_kernel(domain, flat, dim, basis)
    return StationaryPoint(
        strengths=tuple(float(g) for g in strengths),
        positions=flat.reshape(-1, 2).copy(),
        gradient_norm=float(gradient_norm),
        hessian=hess,
        kernel_dimension=dim,
        classification=cls,
    )


# ---------------------------------------------------------------------------
# construction
# ---------------------------------------------------------------------------

def evaluate_point(strengths, domain: Domain, positions) -> StationaryPoint:
    """Assemble a StationaryPoint at explicitly given positions.

    Computes the gradient norm, Hessian, kernel and classification; no
    iteration happens, and no criticality is enforced (callers that need
    a critical point must check gradient_norm themselves)."""
    flat = as_state(positions)
    gn = float(np.linalg.norm(m_gradient(strengths, domain, flat)))
    return _finish_point(strengths, domain, flat, gn)


def disc_dipole() -> StationaryPoint:
    """The strength (1, -1) stationary pair of the unit disc, placed
    symmetrically on the x-axis at +-DIPOLE_OFFSET (closed form)."""
    domain = UnitDisc()
    strengths = (1.0, -1.0)
    mu = DIPOLE_OFFSET
    flat = np.array([mu, 0.0, -mu, 0.0])
    gn = float(np.linalg.norm(m_gradient(strengths, domain, flat)))
    return _finish_point(strengths, domain, flat, gn)


def find_critical_point(strengths, domain: Domain, guess, *,
                        gradient_tol: float = GRADIENT_TOL,
                        max_iterations: int = MAX_ITERATIONS,
                        callback=None) -> StationaryPoint:
    """Local Newton search for a critical point of the m-point energy.

    The linear system is bordered: rows constraining the step to be
    orthogonal to the domain's symmetry directions (evaluated at the
    current iterate) make the Jacobian invertible despite the symmetry
    kernel, and pin the representative on its group orbit.  The step
    solve is a truncated-SVD least-squares solve, so accidental extra
    degeneracy degrades gracefully instead of exploding.

    callback(iterate, gradient_norm) is invoked once per iteration,
    before the step; tests use it to watch the convergence rate.

    Raises ConvergenceError (with the last iterate attached) if the
    iteration budget runs out or an iterate leaves the admissible set.
    """
    sys = _anchor_system(strengths, domain)
    x = as_state(guess).copy()
    sys.validate_state(x)

    gnorm = float(np.linalg.norm(sys.gradient(x)))
    for iteration in range(int(max_iterations)):
        if callback is not None:
            callback(x.copy(), gnorm)
        if gnorm <= gradient_tol:
            return _finish_point(strengths, domain, x, gnorm)
        grad = sys.gradient(x)
        hess = sys.hessian(x)
        cons = _newton_constraints(domain, x)
        k = len(cons)
        n = x.size
        A = np.zeros((n + k, n + k))
        A[:n, :n] = hess
        if k:
            C = np.column_stack(cons)
            A[:n, n:] = C
            A[n:, :n] = C.T
        rhs = np.concatenate([-grad, np.zeros(k)])
        step, _ = truncated_svd_solve(A, rhs, rel_threshold=1e-12)
        x_new = x + step[:n]
        try:
            sys.validate_state(x_new)
        except (DomainViolationError, CollisionError) as exc:
            raise ConvergenceError(
                f"iterate left the admissible set after {iteration + 1} "
                f"steps: {exc}", iterations=iteration + 1,
                last_iterate=x, residual=gnorm) from exc
        x = x_new
        gnorm = float(np.linalg.norm(sys.gradient(x)))

    if gnorm <= gradient_tol:
        if callback is not None:
            callback(x.copy(), gnorm)
        return _finish_point(strengths, domain, x, gnorm)
    raise ConvergenceError(
        f"no convergence in {max_iterations} iterations "
        f"(gradient norm {gnorm:.3e})", iterations=int(max_iterations),
        last_iterate=x, residual=gnorm)
