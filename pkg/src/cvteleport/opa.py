"""Lumped-equivalent models of waveguide optical parametric amplifiers.

Two effects are captured:

* distributed phase-sensitive gain competing with propagation loss along the
  waveguide, summarized as an equivalent loss-then-ideal-amplifier channel
  with effective efficiency ``eta_eff``;
* optical pre-amplification ahead of a lossy detector, which suppresses the
  impact of the detector's intrinsic quantum efficiency.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class WaveguideSpec:
    """Distributed amplifier: total power gain, total passive loss, and the
    number of discretization segments used for the interleaved model."""

    total_gain_db: float
    internal_loss_db: float
    segments: int = 1024

    def __post_init__(self):
        if self.total_gain_db < 0:
            raise ValueError("total_gain_db must be >= 0")
        if self.internal_loss_db < 0:
            raise ValueError("internal_loss_db must be >= 0")
        if self.segments < 1:
            raise ValueError("segments must be >= 1")


@dataclass(frozen=True)
class PreampDetectorSpec:
    """Optical pre-amplifier followed by a detector of finite quantum efficiency."""

    preamp_gain_db: float
    detector_qe: float

    def __post_init__(self):
        if not 0.0 < self.detector_qe <= 1.0:
            raise ValueError("detector_qe must lie in (0, 1]")


def _amplified_quadrature_map(spec: WaveguideSpec):
    """Affine map v -> A v + B of the amplified-quadrature variance through the
    segmented waveguide (symmetric splitting: half gain, loss, half gain)."""
    n = spec.segments
    half_gain = 10.0 ** (spec.total_gain_db / (20.0 * n))  # power gain of a half step
    eta_seg = 10.0 ** (-spec.internal_loss_db / (10.0 * n))
    a, b = 1.0, 0.0
    for _ in range(n):
        a *= half_gain
        b *= half_gain
        a *= eta_seg
        b = eta_seg * b + (1.0 - eta_seg)
        a *= half_gain
        b *= half_gain
    return a, b


def distributed_psa_equivalent(spec: WaveguideSpec):
    """Equivalent (total amplitude gain, effective efficiency) of the waveguide.

    The segmented simulation acts on the amplified quadrature as the affine
    map v -> A v + B. The unique loss-then-ideal-amplifier channel with the
    same map has eta_eff = A / (A + B) and ideal amplitude gain
    g_id = sqrt(A + B); it reproduces the segmented signal gain and added
    noise exactly for every input variance, not only for vacuum.
    """
    a, b = _amplified_quadrature_map(spec)
    g_total = 10.0 ** ((spec.total_gain_db - spec.internal_loss_db) / 20.0)
    eta_eff = a / (a + b)
    return g_total, eta_eff


def segment_convergence_check(spec: WaveguideSpec) -> bool:
    """True iff doubling the segment count moves eta_eff by less than 1e-6."""
    _, eta1 = distributed_psa_equivalent(spec)
    doubled = WaveguideSpec(spec.total_gain_db, spec.internal_loss_db,
                            2 * spec.segments)
    _, eta2 = distributed_psa_equivalent(doubled)
    return abs(eta1 - eta2) < 1e-6


def preamp_detection_efficiency(spec: PreampDetectorSpec) -> float:
    """Effective detection efficiency of pre-amplified readout.

    eta_eff = G eta / (G eta + 1 - eta) with power gain G = 10^(gain/10):
    the detector's vacuum penalty (1 - eta)/eta is referred back through the
    gain, so eta_eff -> 1 as G -> infinity.
    """
    g = 10.0 ** (spec.preamp_gain_db / 10.0)
    eta = spec.detector_qe
    return g * eta / (g * eta + 1.0 - eta)
