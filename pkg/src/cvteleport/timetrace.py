"""Time-domain harness: homodyne traces and temporal-mode statistics.

Synthesizes random coherent amplitude tracks (broadband thermal-source light
attenuated into the quantum regime), simulates sampled homodyne voltages of
the teleported output at 256 GSa/s, extracts non-overlapping Gaussian-window
temporal modes, and estimates raw/intrinsic variances and fidelities.

Noise synthesis is variance targeted: white Gaussian noise is shaped by the
detector/scope responses and rescaled so the extracted temporal-mode variance
matches the analytic noise budget, since the experiment reports mode-level
variances rather than a detector noise spectral shape.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .gaussian import to_db
from .teleporter import (
    CalibrationError,
    EstimatorReport,
    TeleporterConfig,
    analytic_noise_budget,
    fidelity_from_variances,
    intrinsic_from_raw,
)

SAMPLE_RATE_GSPS = 256.0
DT_PS = 1000.0 / SAMPLE_RATE_GSPS

FILTER_SHAPES = ("gaussian", "raised_cosine")


@dataclass(frozen=True)
class SldSourceSpec:
    """Random coherent-state source: filtered broadband emission, heavily
    attenuated so the per-mode amplitude variance lands in the quantum regime.

    ``ensemble_var_shot`` is the per-quadrature variance of the windowed mode
    means after attenuation, in shot-noise units; ``attenuation_db`` is kept
    as metadata relating it to the macroscopic level before attenuation.
    """

    baseband_bandwidth_ghz: float = 55.0
    attenuation_db: float = 25.0
    ensemble_var_shot: float = 29.0
    filter_shape: str = "gaussian"

    def __post_init__(self):
        if self.baseband_bandwidth_ghz <= 0:
            raise ValueError("baseband_bandwidth_ghz must be positive")
        if self.attenuation_db < 0:
            raise ValueError("attenuation_db must be >= 0")
        if self.ensemble_var_shot < 0:
            raise ValueError("ensemble_var_shot must be >= 0")
        if self.filter_shape not in FILTER_SHAPES:
            raise ValueError(f"filter_shape must be one of {FILTER_SHAPES}")


@dataclass(frozen=True)
class AmplitudeTracks:
    """Clean coherent amplitude tracks (mean_x(t), mean_p(t)) in shot units."""

    mean_x: np.ndarray
    mean_p: np.ndarray
    sample_rate_gsps: float = SAMPLE_RATE_GSPS
    seed: int | tuple | None = None  # any numpy seed material

    def __post_init__(self):
        mx = np.asarray(self.mean_x, dtype=float)
        mp = np.asarray(self.mean_p, dtype=float)
        if mx.shape != mp.shape or mx.ndim != 1:
            raise ValueError("mean tracks must be 1-d and equal length")
        mx.setflags(write=False)
        mp.setflags(write=False)
        object.__setattr__(self, "mean_x", mx)
        object.__setattr__(self, "mean_p", mp)

    @property
    def n_samples(self) -> int:
        return self.mean_x.size


@dataclass(frozen=True)
class TimeTrace:
    """One sampled homodyne record (both quadratures, shot-noise normalized)
    together with the clean input amplitude reference tracks."""

    x_samples: np.ndarray
    p_samples: np.ndarray
    input_mean_x: np.ndarray
    input_mean_p: np.ndarray
    trace_id: int = 0
    seed: int | None = None
    sample_rate_gsps: float = SAMPLE_RATE_GSPS
    analog_bw_ghz: float = 110.0
    detector_bw_ghz: float = 70.0

    def __post_init__(self):
        arrays = {}
        n = None
        for name in ("x_samples", "p_samples", "input_mean_x", "input_mean_p"):
            arr = np.asarray(getattr(self, name), dtype=float)
            if arr.ndim != 1:
                raise ValueError(f"{name} must be 1-d")
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"{name} contains non-finite values")
            if n is None:
                n = arr.size
            elif arr.size != n:
                raise ValueError("all four sample sequences must have equal length")
            arr.setflags(write=False)
            arrays[name] = arr
        for name, arr in arrays.items():
            object.__setattr__(self, name, arr)

    @property
    def n_samples(self) -> int:
        return self.x_samples.size


@dataclass(frozen=True)
class WavepacketModes:
    """Quadrature pairs of consecutive non-overlapping temporal modes."""

    window_ps: float
    k: np.ndarray
    x_k: np.ndarray
    p_k: np.ndarray
    in_x_k: np.ndarray
    in_p_k: np.ndarray
    w_sums: np.ndarray  # per-mode window weight sum (mean transfer factor)

    def __post_init__(self):
        n = self.k.size
        for name in ("k", "x_k", "p_k", "in_x_k", "in_p_k", "w_sums"):
            arr = np.asarray(getattr(self, name))
            if arr.shape != (n,):
                raise ValueError("all mode arrays must have equal length")
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def n_modes(self) -> int:
        return self.k.size


def window_tiling(n_samples: int, window_ps: float,
                  sample_rate_gsps: float = SAMPLE_RATE_GSPS,
                  sigma_fraction: float = 6.0):
    """Non-overlapping Gaussian extraction windows tiling the trace.

    Window k covers sample times in [k*window_ps, (k+1)*window_ps); weights
    are a Gaussian of sigma = window_ps / sigma_fraction centered on the
    window, normalized so sum(w^2) = 1 (uncorrelated unit-variance samples
    then give unit mode variance). Returns a list of (indices, weights).
    """
    dt = 1000.0 / sample_rate_gsps
    duration_ps = n_samples * dt
    n_modes = int(math.floor(duration_ps / window_ps))
    if n_modes < 1:
        raise ValueError("trace shorter than one extraction window")
    sigma = window_ps / sigma_fraction
    t = np.arange(n_samples) * dt
    tiles = []
    for k in range(n_modes):
        lo = k * window_ps
        hi = lo + window_ps
        start = int(np.searchsorted(t, lo, side="left"))
        stop = int(np.searchsorted(t, hi, side="left"))
        idx = np.arange(start, stop)
        if idx.size == 0:
            raise ValueError("window too short for the sample rate")
        w = np.exp(-0.5 * ((t[idx] - 0.5 * (lo + hi)) / sigma) ** 2)
        w = w / np.sqrt(w @ w)
        tiles.append((idx, w))
    return tiles


def _power_response(f_ghz: np.ndarray, shape: str, bw_ghz: float) -> np.ndarray:
    """Power response with half-power point at ``bw_ghz``."""
    if shape == "gaussian":
        return np.exp(-np.log(2.0) * (f_ghz / bw_ghz) ** 2)
    if shape == "raised_cosine":
        # full-rolloff raised cosine in power, zero beyond 2*bw
        out = np.where(f_ghz < 2.0 * bw_ghz,
                       np.cos(np.pi * f_ghz / (4.0 * bw_ghz)) ** 2, 0.0)
        return out
    raise ValueError(f"unknown filter shape {shape!r}")


def _filtered_white(rng, n: int, amplitude_response: np.ndarray) -> np.ndarray:
    w = rng.standard_normal(n)
    return np.fft.irfft(np.fft.rfft(w) * amplitude_response, n=n)


def _autocovariance(power_response: np.ndarray, n: int) -> np.ndarray:
    """Autocovariance of unit white noise filtered by the given power response."""
    return np.fft.irfft(power_response, n=n)


def _mean_mode_variance(power_response, n_samples, tiles) -> float:
    """Expected temporal-mode variance of filtered unit white noise."""
    r = _autocovariance(power_response, n_samples)
    total = 0.0
    for idx, w in tiles:
        lags = np.abs(idx[:, None] - idx[None, :])
        total += float(w @ r[lags] @ w)
    return total / len(tiles)


def synth_random_coherent(spec: SldSourceSpec, duration_ns: float,
                          seed: int | tuple,
                          window_ps: float = 42.0) -> AmplitudeTracks:
    """Stationary bandlimited Gaussian amplitude tracks for both quadratures.

    Scaled analytically so the expected per-quadrature variance of the
    windowed mode means equals ``spec.ensemble_var_shot``; deterministic for
    a given seed.
    """
    if duration_ns < 1.0:
        raise ValueError("duration must be at least 1 ns")
    n = int(round(duration_ns * SAMPLE_RATE_GSPS))
    if n * DT_PS < window_ps:
        raise ValueError("duration too short for a single temporal mode")
    f = np.fft.rfftfreq(n, d=1.0 / SAMPLE_RATE_GSPS)  # GHz
    power = _power_response(f, spec.filter_shape, spec.baseband_bandwidth_ghz)
    amp = np.sqrt(power)
    if spec.ensemble_var_shot == 0.0:
        zero = np.zeros(n)
        return AmplitudeTracks(zero, zero.copy(), seed=seed)
    tiles = window_tiling(n, window_ps)
    q = _mean_mode_variance(power, n, tiles)
    scale = math.sqrt(spec.ensemble_var_shot / q)
    rng = np.random.default_rng(seed)
    mean_x = scale * _filtered_white(rng, n, amp)
    mean_p = scale * _filtered_white(rng, n, amp)
    return AmplitudeTracks(mean_x, mean_p, seed=seed)


def simulate_traces(config: TeleporterConfig, tracks: AmplitudeTracks,
                    n_traces: int = 128, seed: int = 0,
                    window_ps: float = 42.0,
                    analog_bw_ghz: float = 110.0,
                    detector_bw_ghz: float = 70.0) -> list[TimeTrace]:
    """Sampled homodyne traces of the teleported output.

    Each trace shares the clean input amplitude tracks and draws independent
    detection noise from a stream keyed by (seed, trace_id). Per sample,
    x(t) = sqrt(eta_meas) mean_x(t) + noise(t), with the noise shaped by the
    detector and scope responses and rescaled so the variance of the
    ``window_ps`` temporal modes equals the analytic noise budget.
    """
    if n_traces < 1:
        raise ValueError("n_traces must be >= 1")
    if not config.is_unity_gain(rel_tol=1e-6):
        raise CalibrationError("simulate_traces requires a unity-gain config")
    n = tracks.n_samples
    f = np.fft.rfftfreq(n, d=1.0 / SAMPLE_RATE_GSPS)
    power = (_power_response(f, "gaussian", analog_bw_ghz)
             * _power_response(f, "gaussian", detector_bw_ghz))
    amp = np.sqrt(power)
    tiles = window_tiling(n, window_ps)
    n_out = analytic_noise_budget(config).n_out
    noise_scale = math.sqrt(n_out / _mean_mode_variance(power, n, tiles))
    g = math.sqrt(config.eta_meas)

    traces = []
    for trace_id in range(n_traces):
        rng = np.random.default_rng((seed, trace_id))
        nx = noise_scale * _filtered_white(rng, n, amp)
        np_ = noise_scale * _filtered_white(rng, n, amp)
        traces.append(TimeTrace(
            x_samples=g * tracks.mean_x + nx,
            p_samples=g * tracks.mean_p + np_,
            input_mean_x=tracks.mean_x,
            input_mean_p=tracks.mean_p,
            trace_id=trace_id,
            seed=seed,
            analog_bw_ghz=analog_bw_ghz,
            detector_bw_ghz=detector_bw_ghz,
        ))
    return traces


def quantize_trace(trace: TimeTrace, enob: int = 5) -> TimeTrace:
    """Mid-rise uniform quantization over [-R, R] with R = 5x the trace std.

    Models the scope's effective number of bits; optional (the pipeline
    leaves it off by default). Constant-zero traces pass through unchanged.
    """
    if enob < 1:
        raise ValueError("enob must be >= 1")

    def quantize(v):
        r = 5.0 * float(np.std(v))
        if r == 0.0:
            return v
        step = 2.0 * r / (2 ** enob)
        q = step * (np.floor(v / step) + 0.5)
        return np.clip(q, -r + 0.5 * step, r - 0.5 * step)

    return TimeTrace(
        x_samples=quantize(trace.x_samples),
        p_samples=quantize(trace.p_samples),
        input_mean_x=trace.input_mean_x,
        input_mean_p=trace.input_mean_p,
        trace_id=trace.trace_id,
        seed=trace.seed,
        sample_rate_gsps=trace.sample_rate_gsps,
        analog_bw_ghz=trace.analog_bw_ghz,
        detector_bw_ghz=trace.detector_bw_ghz,
    )


def extract_modes(trace: TimeTrace, window_ps: float = 42.0) -> WavepacketModes:
    """Weighted integration of consecutive non-overlapping temporal modes.

    x_k = sum_t w(t - t_k) x(t) with the Gaussian window of
    :func:`window_tiling`; the input references use the same windows applied
    to the clean amplitude tracks.
    """
    tiles = window_tiling(trace.n_samples, window_ps, trace.sample_rate_gsps)
    n_modes = len(tiles)
    x_k = np.empty(n_modes)
    p_k = np.empty(n_modes)
    in_x = np.empty(n_modes)
    in_p = np.empty(n_modes)
    w_sums = np.empty(n_modes)
    for k, (idx, w) in enumerate(tiles):
        x_k[k] = w @ trace.x_samples[idx]
        p_k[k] = w @ trace.p_samples[idx]
        in_x[k] = w @ trace.input_mean_x[idx]
        in_p[k] = w @ trace.input_mean_p[idx]
        w_sums[k] = np.sum(w)
    return WavepacketModes(window_ps=window_ps, k=np.arange(n_modes),
                           x_k=x_k, p_k=p_k, in_x_k=in_x, in_p_k=in_p,
                           w_sums=w_sums)


def concatenate_modes(parts: list[WavepacketModes]) -> WavepacketModes:
    """Pool modes from several traces (k reindexed globally)."""
    if not parts:
        raise ValueError("no mode sets to concatenate")
    window = parts[0].window_ps
    if any(p.window_ps != window for p in parts):
        raise ValueError("mode sets use different windows")
    cat = lambda name: np.concatenate([getattr(p, name) for p in parts])
    x, p, ix, ip, ws = (cat(n) for n in ("x_k", "p_k", "in_x_k", "in_p_k", "w_sums"))
    return WavepacketModes(window_ps=window, k=np.arange(x.size),
                           x_k=x, p_k=p, in_x_k=ix, in_p_k=ip, w_sums=ws)


def adjacent_mode_correlation(modes: WavepacketModes):
    """Correlation coefficients (rho_x, rho_p) between neighboring modes."""

    def rho(v):
        a = v[:-1] - np.mean(v[:-1])
        b = v[1:] - np.mean(v[1:])
        denom = math.sqrt(float(np.mean(a * a)) * float(np.mean(b * b)))
        if denom == 0.0:
            return 0.0
        return float(np.mean(a * b)) / denom

    return rho(modes.x_k), rho(modes.p_k)


def average_fidelity_closed_form(vx: float, vp: float, g: float,
                                 sigma_ens: float) -> float:
    """Gaussian-ensemble average of the coherent-state transfer fidelity.

    For output mean gain ``g`` and per-quadrature ensemble variance
    ``sigma_ens`` of the target amplitudes,
    F = 2/sqrt((1+vx)(1+vp)) * prod_q (1 + (1-g)^2 sigma_ens/(1+v_q))^(-1/2).
    Reduces to the matched-mean fidelity when g = 1 or sigma_ens = 0.
    """
    if vx <= 0 or vp <= 0:
        raise ValueError("variances must be positive")
    if not 0.0 < g <= 1.0:
        raise ValueError("g must lie in (0, 1]")
    if sigma_ens < 0:
        raise ValueError("sigma_ens must be >= 0")
    base = fidelity_from_variances(vx, vp)
    penalty = 1.0
    for v in (vx, vp):
        penalty *= (1.0 + (1.0 - g) ** 2 * sigma_ens / (1.0 + v)) ** -0.5
    return base * penalty


def variance_se_db(n_modes: int) -> float:
    """Standard error in dB of a variance estimated from n independent modes."""
    return 10.0 / math.log(10.0) * math.sqrt(2.0 / n_modes)


def estimate_report(modes: WavepacketModes, eta_meas: float,
                    gain_corrected: bool = False) -> EstimatorReport:
    """Raw and intrinsic mode-variance and fidelity estimates.

    Raw residual variances are Var(x_k - sqrt(eta_meas) in_x_k); intrinsic
    values invert the detection loss. ``f_raw`` averages the per-mode
    coherent-state fidelity over the input ensemble in closed form; with
    ``gain_corrected`` the output amplitudes are rescaled by 1/sqrt(eta_meas)
    first, so the mean mismatch penalty disappears.
    """
    n = modes.n_modes
    if n < 100:
        raise ValueError("need at least 100 modes for a stable estimate")
    g = math.sqrt(eta_meas)
    rx = modes.x_k - g * modes.in_x_k
    rp = modes.p_k - g * modes.in_p_k
    vx_raw = float(np.var(rx, ddof=1))
    vp_raw = float(np.var(rp, ddof=1))
    if vx_raw == 0.0 or vp_raw == 0.0:
        raise ValueError("degenerate modes: zero residual variance")
    vx_int = intrinsic_from_raw(vx_raw, eta_meas)
    vp_int = intrinsic_from_raw(vp_raw, eta_meas)
    sigma_ens = 0.5 * (float(np.var(modes.in_x_k, ddof=1))
                       + float(np.var(modes.in_p_k, ddof=1)))
    if gain_corrected:
        f_raw = fidelity_from_variances(vx_raw / eta_meas, vp_raw / eta_meas)
    else:
        f_raw = average_fidelity_closed_form(vx_raw, vp_raw, g, sigma_ens)
    return EstimatorReport(
        vx_raw_db=float(to_db(vx_raw)),
        vp_raw_db=float(to_db(vp_raw)),
        vx_int_db=float(to_db(vx_int)),
        vp_int_db=float(to_db(vp_int)),
        f_raw=f_raw,
        f_int=fidelity_from_variances(vx_int, vp_int),
        se_db=variance_se_db(n),
        n_modes=n,
    )
