"""Vortex systems and every energy the package needs.

All interaction energies here share one algebraic shape,

    E(x) = sum_{i != j} A_ij * k(x_i, x_j) + sum_{i, j} B_ij * g(x_i, x_j),

where k(x, y) = -(1/2pi) log|x - y| is the whole-plane kernel and g is a
domain's regular part.  The double sums run over ordered pairs, so each
unordered pair is counted twice; no factor of 2 ever appears inside k or
g.  Choosing the coefficient matrices recovers:

* full Hamiltonian H:      A = Gamma Gamma^T (off-diagonal), B = -Gamma Gamma^T (full);
  the diagonal of B supplies the -Gamma_i^2 h(x_i) self terms since h(x) = g(x, x).
* cluster energy:          A = Gamma Gamma^T on intra-cluster off-diagonal pairs,
  B = 0, evaluated with the plane kernel regardless of the ambient domain.
* coupling term F:         positions shifted by the anchor, A on cross-cluster
  pairs, B = -Gamma Gamma^T (full).

`assemble_interaction` evaluates value/gradient/Hessian of that shape in
closed form (no finite differences anywhere outside the tests).

States are flat float64 vectors (x1, y1, ..., xN, yN).  The equations of
motion are  M ż = P ∇H(z)  with M = diag(Gamma_i I_2) and P the blockwise
clockwise quarter turn, so ż_i = perp(∇_{z_i} H) / Gamma_i.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .domains import Domain, WholePlane
from .errors import CollisionError, ConstraintViolationError
from .linalg import TWO_PI, as_state, pairs

COLLISION_TOL = 1e-8


# ---------------------------------------------------------------------------
# generic assembly
# ---------------------------------------------------------------------------

def assemble_interaction(positions, A, B=None, domain: Domain | None = None,
                         order: int = 2):
    """Evaluate the generic pairwise energy and its derivatives.

    positions: (N, 2).  A: (N, N) symmetric, diagonal ignored.  B: (N, N)
    symmetric or None; requires `domain` for its regular part g.  order:
    0 value, 1 +gradient, 2 +Hessian.  Returns (value, grad, hess) with
    None placeholders for orders not requested.
    """
    p = np.asarray(positions, dtype=float)
    n = p.shape[0]
    A = np.asarray(A, dtype=float)
    off = ~np.eye(n, dtype=bool)

    diff = p[:, None, :] - p[None, :, :]
    d2 = np.einsum("ijd,ijd->ij", diff, diff)
    Aoff = np.where(off, A, 0.0)
    # the kernel is only read where A is nonzero; pad the rest (diagonal,
    # masked-out pairs, possibly coincident) to keep log/division finite
    d2s = np.where(Aoff != 0.0, d2, 1.0)

    value = 0.0
    k = -0.5 * np.log(d2s) / TWO_PI
    value += float(np.sum(Aoff * k))

    use_g = B is not None
    if use_g:
        B = np.asarray(B, dtype=float)
        g = domain.regular_part_many(p, p)
        value += float(np.sum(B * g))

    grad = hess = None
    if order >= 1:
        k1 = -diff / (TWO_PI * d2s[:, :, None])  # d_x k at (x_i, x_j)
        grad = 2.0 * np.einsum("ij,ija->ia", Aoff, k1)
        if use_g:
            g1 = domain.grad_regular_many(p, p)
            grad = grad + 2.0 * np.einsum("ij,ija->ia", B, g1)
        grad = grad.reshape(-1)

    if order >= 2:
        I2 = np.eye(2)
        dd = d2s[:, :, None, None]
        k11 = -(I2 / dd - 2.0 * np.einsum("ija,ijb->ijab", diff, diff)
                / dd**2) / TWO_PI
        # d_y d_x k = -d_x^2 k for the log kernel
        blocks = 2.0 * (-k11) * Aoff[:, :, None, None]
        diag = 2.0 * np.einsum("ij,ijab->iab", Aoff, k11)
        if use_g:
            g11, g21 = domain.hess_regular_many(p, p)
            Boff = np.where(off, B, 0.0)
            blocks = blocks + 2.0 * g21 * Boff[:, :, None, None]
            diag = diag + 2.0 * np.einsum("ij,ijab->iab", Boff, g11)
            # self term B_ii g(x_i, x_i): full derivative of x -> g(x, x)
            bdiag = np.diagonal(B)
            ii = np.arange(n)
            diag = diag + 2.0 * bdiag[:, None, None] * (g11[ii, ii] + g21[ii, ii])
        blocks[np.arange(n), np.arange(n)] = diag
        hess = blocks.transpose(0, 2, 1, 3).reshape(2 * n, 2 * n)

    return value, grad, hess


def _weighted_perp_rows(mat: np.ndarray, strengths: np.ndarray) -> np.ndarray:
    """Rows of M^{-1} P applied to a (2N, k) matrix (pairwise row mix)."""
    n = strengths.size
    H = mat.reshape(n, 2, -1)
    out = np.empty_like(H)
    out[:, 0, :] = H[:, 1, :]
    out[:, 1, :] = -H[:, 0, :]
    out /= strengths[:, None, None]
    return out.reshape(mat.shape)


# ---------------------------------------------------------------------------
# vortex system
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class VortexSystem:
    """N point vortices with a cluster layout on a domain.

    strengths: length-N nonzero reals.  cluster_sizes: partition of N in
    the flattened ordering.  The trivial layout (1, ..., 1) makes every
    vortex its own cluster (used for skeleton energies).
    """

    strengths: tuple
    cluster_sizes: tuple
    domain: Domain = field(default_factory=WholePlane)

    def __post_init__(self):
        gam = np.asarray(self.strengths, dtype=float)
        if gam.ndim != 1 or gam.size == 0:
            raise ConstraintViolationError("strengths must be a flat nonempty list")
        if np.any(gam == 0.0):
            raise ConstraintViolationError("every vortex strength must be nonzero")
        sizes = tuple(int(s) for s in self.cluster_sizes)
        if any(s < 1 for s in sizes) or sum(sizes) != gam.size:
            raise ConstraintViolationError(
                f"cluster sizes {sizes} do not partition {gam.size} vortices")
        object.__setattr__(self, "strengths", tuple(float(x) for x in gam))
        object.__setattr__(self, "cluster_sizes", sizes)

    # -- derived layout --------------------------------------------------
    @property
    def n(self) -> int:
        return len(self.strengths)

    @property
    def n_clusters(self) -> int:
        return len(self.cluster_sizes)

    @property
    def gamma(self) -> np.ndarray:
        return np.asarray(self.strengths)

    @property
    def cluster_slices(self):
        out, start = [], 0
        for s in self.cluster_sizes:
            out.append(slice(start, start + s))
            start += s
        return out

    @property
    def cluster_strengths(self) -> np.ndarray:
        """Per-cluster strength sums."""
        return np.array([self.gamma[sl].sum() for sl in self.cluster_slices])

    @property
    def cluster_index(self) -> np.ndarray:
        return np.repeat(np.arange(self.n_clusters), self.cluster_sizes)

    @property
    def weights(self) -> np.ndarray:
        """Diagonal of M as a flat (2N,) vector."""
        return np.repeat(self.gamma, 2)

    def _coeff(self) -> np.ndarray:
        return np.outer(self.gamma, self.gamma)

    # -- state validation -------------------------------------------------
    def min_separation(self, z) -> float:
        p = pairs(z)
        if p.shape[0] < 2:
            return np.inf
        diff = p[:, None, :] - p[None, :, :]
        d = np.sqrt(np.einsum("ijd,ijd->ij", diff, diff))
        d[np.eye(p.shape[0], dtype=bool)] = np.inf
        return float(d.min())

    def validate_state(self, z, time=None, collision_tol: float = COLLISION_TOL):
        p = pairs(z)
        if p.shape[0] != self.n:
            raise ConstraintViolationError(
                f"state has {p.shape[0]} positions, system has {self.n}")
        for i, x in enumerate(p):
            self.domain.check_interior(x, index=i)
        if self.n >= 2:
            diff = p[:, None, :] - p[None, :, :]
            d = np.sqrt(np.einsum("ijd,ijd->ij", diff, diff))
            d[np.eye(self.n, dtype=bool)] = np.inf
            i, j = np.unravel_index(np.argmin(d), d.shape)
            if d[i, j] <= collision_tol:
                raise CollisionError(
                    f"vortices {i} and {j} are {d[i, j]:.3e} apart "
                    f"(tolerance {collision_tol:.1e})",
                    pair=(int(i), int(j)), distance=float(d[i, j]), time=time)

    # -- energies ----------------------------------------------------------
    def hamiltonian(self, z) -> float:
        p = pairs(z)
        A = self._coeff()
        v, _, _ = assemble_interaction(p, A, -A, self.domain, order=0)
        return v

    def gradient(self, z) -> np.ndarray:
        p = pairs(z)
        A = self._coeff()
        _, g, _ = assemble_interaction(p, A, -A, self.domain, order=1)
        return g

    def hessian(self, z) -> np.ndarray:
        p = pairs(z)
        A = self._coeff()
        _, _, H = assemble_interaction(p, A, -A, self.domain, order=2)
        return H

    # -- dynamics ----------------------------------------------------------
    def vector_field(self, z) -> np.ndarray:
        return _weighted_perp_rows(self.gradient(z)[:, None], self.gamma)[:, 0]

    def field_jacobian(self, z) -> np.ndarray:
        return _weighted_perp_rows(self.hessian(z), self.gamma)


# ---------------------------------------------------------------------------
# rescaled system
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class RescaledSystem:
    """Cluster-relative coordinates u around a stationary anchor.

    Physical positions are  z = r*u + anchor_hat, where anchor_hat repeats
    each cluster's anchor for its members.  The governing energy is

        E_r(u) = E_clusters(u) + F(r*u) - E_skeleton(anchor)

    whose gradient satisfies  grad E_r(u) = r * grad H(r*u + anchor_hat),
    so trajectories map to physical ones by z(t) = r*u(t/r^2) + anchor_hat.
    """

    base: VortexSystem
    anchor: np.ndarray
    scale: float

    def __post_init__(self):
        a = np.asarray(self.anchor, dtype=float).reshape(-1, 2)
        if a.shape[0] != self.base.n_clusters:
            raise ConstraintViolationError(
                f"anchor has {a.shape[0]} points, system has "
                f"{self.base.n_clusters} clusters")
        if self.scale < 0.0:
            raise ConstraintViolationError("scale r must be >= 0")
        for k, x in enumerate(a):
            self.base.domain.check_interior(x, index=k)
        if a.shape[0] >= 2:
            diff = a[:, None, :] - a[None, :, :]
            d = np.sqrt(np.einsum("ijd,ijd->ij", diff, diff))
            d[np.eye(a.shape[0], dtype=bool)] = np.inf
            if d.min() <= COLLISION_TOL:
                raise CollisionError("anchor points coincide")
        object.__setattr__(self, "anchor", a)
        object.__setattr__(self, "scale", float(self.scale))
        sk = VortexSystem(tuple(self.base.cluster_strengths),
                          (1,) * self.base.n_clusters, self.base.domain)
        object.__setattr__(self, "_skeleton_value",
                           sk.hamiltonian(a.reshape(-1)))

    # -- layout helpers ----------------------------------------------------
    @property
    def anchor_hat(self) -> np.ndarray:
        """Flat (2N,) vector repeating each anchor for its cluster."""
        return np.repeat(self.anchor, self.base.cluster_sizes, axis=0).reshape(-1)

    def to_physical(self, u) -> np.ndarray:
        return self.scale * as_state(u) + self.anchor_hat

    def _masks(self):
        ci = self.base.cluster_index
        intra = ci[:, None] == ci[None, :]
        return intra, ~intra

    def skeleton_energy(self) -> float:
        """Energy of the anchor skeleton (one vortex of the summed
        strength per cluster); cached at construction."""
        return self._skeleton_value

    # -- cluster energy (whole-plane, intra pairs only) ---------------------
    def _cluster_coeff(self) -> np.ndarray:
        A = self.base._coeff().copy()
        intra, _ = self._masks()
        A[~intra] = 0.0
        return A

    def cluster_energy(self, u) -> float:
        """Decoupled whole-plane energy of the clusters in relative
        coordinates (the r = 0 limit of the rescaled energy plus the
        skeleton constant)."""
        v, _, _ = assemble_interaction(pairs(u), self._cluster_coeff(),
                                       None, None, order=0)
        return v

    # -- coupling term F -----------------------------------------------------
    def _coupling_parts(self, w, order: int):
        p = pairs(w) + self.anchor_hat.reshape(-1, 2)
        A = self.base._coeff()
        intra, cross = self._masks()
        Ac = np.where(cross, A, 0.0)
        return assemble_interaction(p, Ac, -A, self.base.domain, order=order)

    def coupling(self, w) -> float:
        return self._coupling_parts(w, 0)[0]

    def coupling_grad(self, w) -> np.ndarray:
        return self._coupling_parts(w, 1)[1]

    def coupling_hess(self, w) -> np.ndarray:
        return self._coupling_parts(w, 2)[2]

    # -- rescaled energy and field -------------------------------------------
    def rescaled_hamiltonian(self, u) -> float:
        u = as_state(u)
        return (self.cluster_energy(u)
                + self.coupling(self.scale * u) - self.skeleton_energy())

    def rescaled_gradient(self, u) -> np.ndarray:
        u = as_state(u)
        _, g0, _ = assemble_interaction(pairs(u), self._cluster_coeff(),
                                        None, None, order=1)
        return g0 + self.scale * self.coupling_grad(self.scale * u)

    def rescaled_hessian(self, u) -> np.ndarray:
        u = as_state(u)
        _, _, H0 = assemble_interaction(pairs(u), self._cluster_coeff(),
                                        None, None, order=2)
        return H0 + self.scale**2 * self.coupling_hess(self.scale * u)

    def rescaled_field(self, u) -> np.ndarray:
        return _weighted_perp_rows(self.rescaled_gradient(u)[:, None],
                                   self.base.gamma)[:, 0]

    def rescaled_field_jacobian(self, u) -> np.ndarray:
        return _weighted_perp_rows(self.rescaled_hessian(u), self.base.gamma)

    # -- validation ------------------------------------------------------------
    def validate_state(self, u, time=None, collision_tol: float = COLLISION_TOL):
        """Admissibility of u: physical state for r > 0; at r = 0 only the
        intra-cluster separations constrain u."""
        u = as_state(u)
        if self.scale > 0.0:
            self.base.validate_state(self.to_physical(u), time=time,
                                     collision_tol=collision_tol)
            return
        p = pairs(u)
        intra, _ = self._masks()
        n = p.shape[0]
        diff = p[:, None, :] - p[None, :, :]
        d = np.sqrt(np.einsum("ijd,ijd->ij", diff, diff))
        d[~intra] = np.inf
        d[np.eye(n, dtype=bool)] = np.inf
        i, j = np.unravel_index(np.argmin(d), d.shape)
        if d[i, j] <= collision_tol:
            raise CollisionError(
                f"cluster members {i} and {j} collide in relative coordinates",
                pair=(int(i), int(j)), distance=float(d[i, j]), time=time)
