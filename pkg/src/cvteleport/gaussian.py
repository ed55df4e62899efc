"""Exact Gaussian-state engine: states, symplectic transforms, loss channels.

Conventions used throughout the package:

* quadratures x = a + a^dag, p = -i (a - a^dag), so the vacuum state has
  unit variance in each quadrature and 0 dB is the shot-noise level;
* mean vectors and covariance matrices are ordered per mode as
  (x1, p1, x2, p2, ..., xn, pn);
* the symplectic form Omega is the block-diagonal stack of [[0, 1], [-1, 0]],
  scaled so the vacuum saturates the uncertainty relation cov + i*Omega >= 0.

All values are immutable after construction and every operation returns a
new state, so states can be shared freely between threads.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

SYMMETRY_TOL = 1e-10
SYMPLECTIC_TOL = 1e-10
UNCERTAINTY_FLOOR = -1e-9


class QuadAxis(enum.Enum):
    """Which quadrature an operation acts on (amplifies, squeezes, measures)."""

    X = "x"
    P = "p"


def to_db(variance):
    """Variance in shot-noise units -> dB relative to vacuum (0 dB)."""
    return 10.0 * np.log10(variance)


def from_db(variance_db):
    """Inverse of :func:`to_db`."""
    return 10.0 ** (np.asarray(variance_db) / 10.0)


def symplectic_form(n_modes: int) -> np.ndarray:
    """Block-diagonal symplectic form for ``n_modes`` modes."""
    omega = np.zeros((2 * n_modes, 2 * n_modes))
    for m in range(n_modes):
        omega[2 * m, 2 * m + 1] = 1.0
        omega[2 * m + 1, 2 * m] = -1.0
    return omega


def _as_readonly(arr):
    out = np.array(arr, dtype=float)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class GaussianState:
    """Mean vector and covariance matrix of an n-mode Gaussian state.

    ``mean`` has length 2n and ``cov`` is 2n x 2n, both in shot-noise units
    (vacuum variance 1 per quadrature).
    """

    n_modes: int
    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        if self.n_modes < 1:
            raise ValueError("n_modes must be >= 1")
        mean = _as_readonly(self.mean)
        cov = _as_readonly(self.cov)
        d = 2 * self.n_modes
        if mean.shape != (d,):
            raise ValueError(f"mean must have shape ({d},), got {mean.shape}")
        if cov.shape != (d, d):
            raise ValueError(f"cov must have shape ({d}, {d}), got {cov.shape}")
        scale = max(1.0, float(np.max(np.abs(cov))))
        if np.max(np.abs(cov - cov.T)) > SYMMETRY_TOL * scale:
            raise ValueError("covariance matrix is not symmetric")
        if np.any(np.diag(cov) <= 0.0):
            raise ValueError("covariance diagonal entries must be positive")
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)


@dataclass(frozen=True)
class SymplecticTransform:
    """A symplectic matrix acting on means as S @ mean and on cov as S cov S^T."""

    matrix: np.ndarray
    label: str = "custom"

    def __post_init__(self):
        m = _as_readonly(self.matrix)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] % 2:
            raise ValueError("symplectic matrix must be square with even size")
        omega = symplectic_form(m.shape[0] // 2)
        if np.max(np.abs(m @ omega @ m.T - omega)) > SYMPLECTIC_TOL:
            raise ValueError(f"matrix is not symplectic (label={self.label!r})")
        object.__setattr__(self, "matrix", m)

    @property
    def n_modes(self) -> int:
        return self.matrix.shape[0] // 2

    def then(self, other: "SymplecticTransform") -> "SymplecticTransform":
        """Composition: apply ``self`` first, then ``other``."""
        return SymplecticTransform(other.matrix @ self.matrix, label="custom")


def make_vacuum(n_modes: int) -> GaussianState:
    """n-mode vacuum: zero mean, identity covariance."""
    if n_modes < 1:
        raise ValueError("n_modes must be >= 1")
    d = 2 * n_modes
    return GaussianState(n_modes, np.zeros(d), np.eye(d))


def _check_mode(n_modes: int, mode: int):
    if not 0 <= mode < n_modes:
        raise IndexError(f"mode {mode} out of range for {n_modes} modes")


def squeezer(n_modes: int, mode: int, squeezing_db: float,
             axis: QuadAxis = QuadAxis.X) -> SymplecticTransform:
    """Single-mode squeezer reducing the variance of ``axis`` by ``squeezing_db``.

    Applied to vacuum with axis=X the result is a pure state with
    Var(x) = 10^(-squeezing_db/10) and Var(p) = 10^(+squeezing_db/10).
    """
    if squeezing_db < 0:
        raise ValueError("squeezing_db must be >= 0 (use psa for gain)")
    _check_mode(n_modes, mode)
    s = 10.0 ** (-squeezing_db / 20.0)
    m = np.eye(2 * n_modes)
    if axis is QuadAxis.X:
        m[2 * mode, 2 * mode] = s
        m[2 * mode + 1, 2 * mode + 1] = 1.0 / s
    else:
        m[2 * mode, 2 * mode] = 1.0 / s
        m[2 * mode + 1, 2 * mode + 1] = s
    return SymplecticTransform(m, label="squeezer")


def psa_transform(n_modes: int, mode: int, axis: QuadAxis,
                  gain_db: float) -> SymplecticTransform:
    """Phase-sensitive amplifier: amplitude gain 10^(gain_db/20) on ``axis``,
    the reciprocal on the conjugate quadrature. Noiseless (pure symplectic)."""
    _check_mode(n_modes, mode)
    g = 10.0 ** (gain_db / 20.0)
    m = np.eye(2 * n_modes)
    if axis is QuadAxis.X:
        m[2 * mode, 2 * mode] = g
        m[2 * mode + 1, 2 * mode + 1] = 1.0 / g
    else:
        m[2 * mode, 2 * mode] = 1.0 / g
        m[2 * mode + 1, 2 * mode + 1] = g
    return SymplecticTransform(m, label="psa")


def beamsplitter(n_modes: int, mode_i: int, mode_j: int,
                 transmissivity: float) -> SymplecticTransform:
    """Two-mode beamsplitter with power transmissivity T.

    Acts identically on both quadratures of the pair:
    q_i' = sqrt(T) q_i + sqrt(1-T) q_j,  q_j' = -sqrt(1-T) q_i + sqrt(T) q_j.
    """
    if not 0.0 <= transmissivity <= 1.0:
        raise ValueError("transmissivity must lie in [0, 1]")
    if mode_i == mode_j:
        raise ValueError("beamsplitter requires two distinct modes")
    _check_mode(n_modes, mode_i)
    _check_mode(n_modes, mode_j)
    t = np.sqrt(transmissivity)
    r = np.sqrt(1.0 - transmissivity)
    m = np.eye(2 * n_modes)
    for q in range(2):
        a, b = 2 * mode_i + q, 2 * mode_j + q
        m[a, a] = t
        m[a, b] = r
        m[b, a] = -r
        m[b, b] = t
    return SymplecticTransform(m, label="beamsplitter")


def phase_rotation(n_modes: int, mode: int, theta: float) -> SymplecticTransform:
    """Rotate the (x, p) plane of one mode by ``theta`` radians."""
    _check_mode(n_modes, mode)
    c, s = np.cos(theta), np.sin(theta)
    m = np.eye(2 * n_modes)
    i = 2 * mode
    m[i, i] = c
    m[i, i + 1] = s
    m[i + 1, i] = -s
    m[i + 1, i + 1] = c
    return SymplecticTransform(m, label="phase")


def apply_symplectic(state: GaussianState, s: SymplecticTransform) -> GaussianState:
    """Apply S to the state: mean -> S mean, cov -> S cov S^T."""
    if s.n_modes != state.n_modes:
        raise ValueError("transform and state mode counts differ")
    m = s.matrix
    return GaussianState(state.n_modes, m @ state.mean, m @ state.cov @ m.T)


def apply_loss(state: GaussianState, mode: int, eta: float) -> GaussianState:
    """Pure loss channel of transmission ``eta`` on one mode.

    Per affected quadrature Var' = eta Var + (1 - eta), mean' = sqrt(eta) mean,
    cross covariances scale by sqrt(eta).
    """
    if not 0.0 <= eta <= 1.0:
        raise ValueError("eta must lie in [0, 1]")
    _check_mode(state.n_modes, mode)
    d = 2 * state.n_modes
    x = np.ones(d)
    x[2 * mode] = x[2 * mode + 1] = np.sqrt(eta)
    add = np.zeros(d)
    add[2 * mode] = add[2 * mode + 1] = 1.0 - eta
    cov = state.cov * np.outer(x, x) + np.diag(add)
    return GaussianState(state.n_modes, x * state.mean, cov)


def psa(state: GaussianState, mode: int, axis: QuadAxis,
        gain_db: float) -> GaussianState:
    """Apply a phase-sensitive amplifier to the state (see psa_transform)."""
    return apply_symplectic(state, psa_transform(state.n_modes, mode, axis, gain_db))


def displace(state: GaussianState, mode: int, dx: float, dp: float) -> GaussianState:
    """Displace one mode's mean by (dx, dp); covariance unchanged."""
    _check_mode(state.n_modes, mode)
    mean = np.array(state.mean)
    mean[2 * mode] += dx
    mean[2 * mode + 1] += dp
    return GaussianState(state.n_modes, mean, state.cov)


def tensor(a: GaussianState, b: GaussianState) -> GaussianState:
    """Tensor product: modes of ``a`` first, then modes of ``b``."""
    n = a.n_modes + b.n_modes
    mean = np.concatenate([a.mean, b.mean])
    cov = np.zeros((2 * n, 2 * n))
    cov[: 2 * a.n_modes, : 2 * a.n_modes] = a.cov
    cov[2 * a.n_modes:, 2 * a.n_modes:] = b.cov
    return GaussianState(n, mean, cov)


def quad_statistics(state: GaussianState, mode: int):
    """(mean_x, mean_p, var_x, var_p) of one mode."""
    _check_mode(state.n_modes, mode)
    i = 2 * mode
    return (state.mean[i], state.mean[i + 1],
            state.cov[i, i], state.cov[i + 1, i + 1])


def partial_trace(state: GaussianState, keep) -> GaussianState:
    """Keep only the listed modes (ascending order); valid for Gaussian states."""
    keep = sorted(set(keep))
    if not keep:
        raise ValueError("keep-set must not be empty")
    for m in keep:
        _check_mode(state.n_modes, m)
    idx = np.array([2 * m + q for m in keep for q in range(2)])
    return GaussianState(len(keep), state.mean[idx], state.cov[np.ix_(idx, idx)])


def min_uncertainty_eigenvalue(state: GaussianState) -> float:
    """Smallest eigenvalue of cov + i Omega; physical states satisfy >= -1e-9."""
    omega = symplectic_form(state.n_modes)
    return float(np.min(np.linalg.eigvalsh(state.cov + 1j * omega)))


def coherent_state(n_modes: int, mode: int, mean_x: float,
                   mean_p: float) -> GaussianState:
    """Vacuum displaced in one mode: the standard coherent input state."""
    return displace(make_vacuum(n_modes), mode, mean_x, mean_p)


def coherent_vs_gaussian_fidelity(target_mean, out: GaussianState) -> float:
    """Fidelity between a target coherent state and a single-mode Gaussian state.

    For covariance diagonal in the principal axes this reduces to
    F = 2/sqrt((1+Vx)(1+Vp)) * exp(-dx^2/(2(1+Vx)) - dp^2/(2(1+Vp)));
    the determinant/quadratic-form expression below is the same quantity and is
    invariant under the principal-axis rotation, so no explicit rotation is
    needed.
    """
    if out.n_modes != 1:
        raise ValueError("fidelity is defined for single-mode output states")
    v = out.cov
    if np.min(np.linalg.eigvalsh(v)) <= 0.0:
        raise ValueError("covariance matrix is not positive definite")
    target = np.asarray(target_mean, dtype=float)
    if target.shape != (2,):
        raise ValueError("target_mean must be a 2-vector (x, p)")
    m = v + np.eye(2)
    delta = out.mean - target
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    quad = delta @ np.linalg.solve(m, delta)
    return float(2.0 / np.sqrt(det) * np.exp(-0.5 * quad))
