"""Small linear-algebra helpers shared across the package.

Convention: planar states are flat float64 vectors (x1, y1, x2, y2, ...).
The symplectic rotation used throughout is the clockwise quarter turn
perp(x, y) = (y, -x); exp(theta * perp) rotates every pair clockwise by
theta.  All catalog angular velocities are expressed against this
generator, so a positive physical (counterclockwise) rotation rate shows
up as a negative angular velocity.
"""

from __future__ import annotations

from math import gcd

import numpy as np

TWO_PI = 2.0 * np.pi


def as_state(z) -> np.ndarray:
    """Coerce to a flat float64 state vector of even length."""
    z = np.asarray(z, dtype=float).reshape(-1)
    if z.size % 2:
        raise ValueError(f"state length must be even, got {z.size}")
    return z


def pairs(z: np.ndarray) -> np.ndarray:
    """View a flat state as an (N, 2) array of positions."""
    return as_state(z).reshape(-1, 2)


def perp(z) -> np.ndarray:
    """Blockwise clockwise quarter turn: (x, y) -> (y, -x)."""
    p = pairs(z)
    out = np.empty_like(p)
    out[:, 0] = p[:, 1]
    out[:, 1] = -p[:, 0]
    return out.reshape(np.shape(np.asarray(z)))


def rotate_all(z, theta: float) -> np.ndarray:
    """Rotate every (x, y) pair counterclockwise by theta."""
    p = pairs(z)
    c, s = np.cos(theta), np.sin(theta)
    out = np.empty_like(p)
    out[:, 0] = c * p[:, 0] - s * p[:, 1]
    out[:, 1] = s * p[:, 0] + c * p[:, 1]
    return out.reshape(np.shape(np.asarray(z)))


def spin(z, omega: float, t: float) -> np.ndarray:
    """Rigid rotation flow exp(omega*t*perp) applied to a state.

    With the clockwise generator, spin(z, omega, t) is a counterclockwise
    rotation by -omega*t.
    """
    return rotate_all(z, -omega * t)


def rot2(theta: float) -> np.ndarray:
    """Standard 2x2 counterclockwise rotation matrix."""
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]])


def blockwise_rotation(n_pairs: int, theta: float) -> np.ndarray:
    """Block-diagonal counterclockwise rotation acting on a flat state."""
    return np.kron(np.eye(n_pairs), rot2(theta))


def permutation_matrix(sigma) -> np.ndarray:
    """2N x 2N matrix of the action w -> (w_{sigma^{-1}(1)}, ...).

    `sigma` maps index i to sigma[i] (0-based).  Row block j of the result
    picks position block sigma^{-1}(j) of the input.
    """
    sigma = list(sigma)
    n = len(sigma)
    if sorted(sigma) != list(range(n)):
        raise ValueError(f"not a permutation of 0..{n - 1}: {sigma}")
    S = np.zeros((2 * n, 2 * n))
    # (Sw)_j = w_{sigma^{-1}(j)}: block (j, i) is the identity iff j = sigma(i)
    for i, j in enumerate(sigma):
        S[2 * j: 2 * j + 2, 2 * i: 2 * i + 2] = np.eye(2)
    return S


def permutation_order(sigma) -> int:
    """Least common multiple of the cycle lengths of sigma."""
    sigma = list(sigma)
    seen = [False] * len(sigma)
    order = 1
    for start in range(len(sigma)):
        if seen[start]:
            continue
        length = 0
        i = start
        while not seen[i]:
            seen[i] = True
            i = sigma[i]
            length += 1
        order = order * length // gcd(order, length)
    return order


def truncated_svd_solve(A: np.ndarray, b: np.ndarray, rel_threshold: float = 1e-6):
    """Least-squares solve discarding singular directions below
    rel_threshold * sigma_max.  Returns (solution, effective_rank)."""
    U, s, Vt = np.linalg.svd(A, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        return np.zeros(A.shape[1]), 0
    keep = s > rel_threshold * s[0]
    rank = int(keep.sum())
    coeff = (U[:, keep].T @ b) / s[keep]
    return Vt[keep].T @ coeff, rank


def optimal_rotation_angle(a, b) -> float:
    """Angle theta minimizing ||rotate_all(a, theta) - b||.

    Closed form: the objective is -2*(P cos theta + Q sin theta) + const
    with P = sum <a_i, b_i> and Q = sum <perp_ccw(a_i), b_i>.
    """
    pa, pb = pairs(a), pairs(b)
    P = float(np.sum(pa * pb))
    # counterclockwise perpendicular of a: (-y, x)
    Q = float(np.sum(-pa[:, 1] * pb[:, 0] + pa[:, 0] * pb[:, 1]))
    return float(np.arctan2(Q, P))


def aligned_distance(a, b) -> float:
    """Min over rotations of ||rotate_all(a, theta) - b||_2."""
    theta = optimal_rotation_angle(a, b)
    return float(np.linalg.norm(rotate_all(a, theta) - as_state(b)))
