"""Brute-force truncated Fock-space oracle.

Validates the Gaussian engine's fidelity arithmetic on small instances by
direct density-matrix computation: coherent states, the unity-gain
displacement-noise channel (random Gaussian-distributed displacements, which
is what teleportation of a coherent state reduces to), and overlap
fidelities. Deliberately independent of the covariance-matrix code paths.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln


class TruncationError(ValueError):
    """State not representable within the Fock-space cutoff."""


class ConvergenceError(RuntimeError):
    """Numerical integration grid too coarse for the requested tolerance."""


@dataclass(frozen=True)
class FockDensityMatrix:
    """Density matrix on the truncated Fock basis {|0>, ..., |dim-1>}."""

    dim: int
    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.shape != (self.dim, self.dim):
            raise ValueError(f"matrix must be {self.dim}x{self.dim}")
        if np.max(np.abs(m - m.conj().T)) > 1e-10:
            raise ValueError("density matrix is not Hermitian")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def trace(self) -> float:
        return float(np.real(np.trace(self.matrix)))

    def min_eigenvalue(self) -> float:
        return float(np.min(np.linalg.eigvalsh(self.matrix)))


def coherent_amplitudes(alpha: complex, dim: int) -> np.ndarray:
    """Fock-basis amplitudes e^(-|a|^2/2) a^n / sqrt(n!) of a coherent state."""
    n = np.arange(dim)
    if alpha == 0:
        amp = np.zeros(dim, dtype=complex)
        amp[0] = 1.0
        return amp
    # log-domain magnitudes avoid overflow in |a|^n / sqrt(n!)
    log_mag = n * np.log(np.abs(alpha)) - 0.5 * gammaln(n + 1) - 0.5 * np.abs(alpha) ** 2
    return np.exp(log_mag) * np.exp(1j * n * np.angle(alpha))


def coherent_density(alpha: complex, dim: int,
                     max_trace_deficit: float = 1e-8) -> FockDensityMatrix:
    """Truncated |alpha><alpha|; rejects cutoffs that lose too much norm."""
    c = coherent_amplitudes(alpha, dim)
    deficit = 1.0 - float(np.real(c @ c.conj()))
    if deficit > max_trace_deficit:
        raise TruncationError(
            f"coherent state |alpha|^2 = {abs(alpha) ** 2:.3g} loses trace "
            f"{deficit:.3g} at dim = {dim}")
    return FockDensityMatrix(dim, np.outer(c, c.conj()))


def _laguerre_table(x: np.ndarray, dim: int) -> np.ndarray:
    """Associated Laguerre values L_n^k(x) for 0 <= n, k < dim.

    Shape (dim, dim, len(x)) indexed [k, n]; standard three-term recurrence
    (n+1) L_{n+1}^k = (2n + 1 + k - x) L_n^k - (n + k) L_{n-1}^k.
    """
    x = np.asarray(x, dtype=float)
    table = np.ones((dim, dim) + x.shape)
    for k in range(dim):
        if dim > 1:
            table[k, 1] = 1.0 + k - x
        for n in range(1, dim - 1):
            table[k, n + 1] = ((2 * n + 1 + k - x) * table[k, n]
                               - (n + k) * table[k, n - 1]) / (n + 1)
    return table


def displacement_matrices(betas: np.ndarray, dim: int) -> np.ndarray:
    """Fock-basis displacement operators D(beta) for a batch of amplitudes.

    Uses the closed form D_mn = sqrt(n!/m!) beta^(m-n) e^(-|b|^2/2)
    L_n^(m-n)(|b|^2) for m >= n and D(beta)^dag = D(-beta) above the
    diagonal. Returns shape (len(betas), dim, dim).
    """
    betas = np.atleast_1d(np.asarray(betas, dtype=complex))
    a2 = np.abs(betas) ** 2
    lag = _laguerre_table(a2, dim)
    env = np.exp(-0.5 * a2)
    log_fact = gammaln(np.arange(dim) + 1)
    out = np.zeros((betas.size, dim, dim), dtype=complex)
    bpow = np.ones_like(betas)
    bneg = np.ones_like(betas)
    for k in range(dim):
        n = np.arange(dim - k)
        ratio = np.exp(0.5 * (log_fact[n] - log_fact[n + k]))
        block = ratio[None, :] * env[:, None] * lag[k, n, :].T
        out[:, n + k, n] = block * bpow[:, None]
        if k > 0:
            out[:, n, n + k] = block * bneg[:, None]
        bpow = bpow * betas
        bneg = bneg * (-np.conj(betas))
    return out


def displacement_matrix(beta: complex, dim: int) -> np.ndarray:
    """Single displacement operator D(beta) on the truncated basis."""
    return displacement_matrices(np.array([beta]), dim)[0]


def _gaussian_grid(noise_cov: np.ndarray, points: int, span_sigmas: float):
    """Midpoint grid over the displacement distribution's principal axes.

    Returns quadrature displacements (dx, dp) and weights normalized to unit
    sum; the midpoint rule over +-span_sigmas leaves ~1e-6 of the Gaussian
    mass outside, and normalizing keeps the channel exactly trace preserving.
    """
    evals, evecs = np.linalg.eigh(noise_cov)
    if np.min(evals) < -1e-12:
        raise ValueError("noise_cov must be positive semidefinite")
    evals = np.clip(evals, 0.0, None)
    axes = []
    for lam in evals:
        s = np.sqrt(lam)
        if s == 0.0:
            axes.append(np.zeros(1))
        else:
            edges = np.linspace(-span_sigmas * s, span_sigmas * s, points + 1)
            axes.append(0.5 * (edges[:-1] + edges[1:]))
    u, v = np.meshgrid(axes[0], axes[1], indexing="ij")
    pts = np.stack([u.ravel(), v.ravel()])          # principal-axis coords
    dxdp = evecs @ pts
    log_w = np.zeros(pts.shape[1])
    for i, lam in enumerate(evals):
        if lam > 0.0:
            log_w = log_w - 0.5 * pts[i] ** 2 / lam
    w = np.exp(log_w)
    return dxdp[0], dxdp[1], w / np.sum(w)


def classical_noise_channel(rho: FockDensityMatrix, noise_cov,
                            grid_points: int = 61,
                            span_sigmas: float = 5.0,
                            check_convergence: bool = False) -> FockDensityMatrix:
    """Random-displacement channel: integral of P(beta) D(beta) rho D(beta)^dag.

    ``noise_cov`` is the 2x2 covariance of the quadrature displacements
    (dx, dp) in shot-noise units; beta = (dx + i dp)/2. This is the channel a
    unity-gain teleporter applies to its input, with noise_cov = (N_out - 1)
    per quadrature for vacuum teleportation.
    """
    noise_cov = np.asarray(noise_cov, dtype=float)
    if noise_cov.shape != (2, 2):
        raise ValueError("noise_cov must be 2x2")
    if grid_points < 41:
        raise ValueError("grid must have at least 41 points per axis")
    if span_sigmas < 5.0:
        raise ValueError("grid must cover at least 5 sigma")
    if np.max(np.abs(noise_cov)) == 0.0:
        return rho

    out = _apply_displacement_mixture(rho, noise_cov, grid_points, span_sigmas)
    if check_convergence:
        probe = _apply_displacement_mixture(rho, noise_cov, 2 * grid_points - 1,
                                            span_sigmas)
        if np.max(np.abs(out.matrix - probe.matrix)) > 1e-4:
            raise ConvergenceError("channel grid too coarse; increase grid_points")
    return out


def _apply_displacement_mixture(rho, noise_cov, grid_points, span_sigmas,
                                chunk: int = 4096):
    dx, dp, w = _gaussian_grid(noise_cov, grid_points, span_sigmas)
    betas = (dx + 1j * dp) / 2.0
    acc = np.zeros((rho.dim, rho.dim), dtype=complex)
    for lo in range(0, betas.size, chunk):
        d = displacement_matrices(betas[lo:lo + chunk], rho.dim)
        t = d @ rho.matrix
        acc += np.einsum("p,pmk,plk->ml", w[lo:lo + chunk], t, d.conj(),
                         optimize=True)
    acc = 0.5 * (acc + acc.conj().T)
    return FockDensityMatrix(rho.dim, acc)


def oracle_fidelity(rho: FockDensityMatrix, target_alpha: complex,
                    max_trace_deficit: float = 1e-6) -> float:
    """<alpha| rho |alpha> evaluated directly in the Fock basis."""
    c = coherent_amplitudes(target_alpha, rho.dim)
    deficit = 1.0 - float(np.real(c @ c.conj()))
    if deficit > max_trace_deficit:
        raise TruncationError(
            f"target coherent state not representable at dim = {rho.dim}")
    return float(np.real(c.conj() @ rho.matrix @ c))


def teleported_coherent_oracle(alpha: complex, added_noise_per_quadrature: float,
                               dim: int = 25, grid_points: int = 61) -> float:
    """Oracle fidelity of unity-gain teleportation of a coherent state.

    Applies the displacement-noise channel with isotropic quadrature noise to
    |alpha> and evaluates the overlap with the original state.
    """
    rho = coherent_density(alpha, dim)
    cov = added_noise_per_quadrature * np.eye(2)
    out = classical_noise_channel(rho, cov, grid_points=grid_points)
    return oracle_fidelity(out, alpha)
