"""Split-step Fourier solver for the dipolar polariton mean field.

The condensate field obeys

    i hbar d(phi)/dt = [ -hbar^2/(2 m_perp) lap_perp - hbar^2/(2 m_par) d^2/dz^2
                         + hbar sin^2(theta) (eps conv |phi|^2) ] phi

with the anisotropic dipolar kernel eps applied by FFT convolution through a
FourierTable. There is no contact term. One step is Strang-split:

    half potential phase -> exact kinetic propagator in Fourier space -> half
    potential phase

which is second-order accurate (one-step error O(dt^3)), exactly norm
preserving for real masses, and exactly time reversible because the potential
phase leaves the density unchanged. A complex longitudinal mass with
Im(1/m_par) < 0 makes the kinetic propagator contractive, modeling the
absorptive part of the medium.

An accuracy guard rejects steps whose maximal potential phase per half step
exceeds max_potential_phase (default pi/4).

linear_response_experiment seeds a weak density wave on the uniform state,
tracks its Fourier amplitude and fits either an oscillation (stable mode) or
exponential growth (unstable mode). The prediction it is compared against
calibrates the dipolar coupling from the same Fourier table the stepping
uses, closing the loop with the bogoliubov module. When physical (infinite
box) numbers are wanted instead, the box edge should exceed roughly four
times the longest instability wavelength probed, so the truncated kernel has
converged at the probe wavevector.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
import scipy.fft
import scipy.optimize
from scipy.constants import hbar as SI_HBAR

from . import bogoliubov
from .errors import (
    FitFailureError,
    GridMismatchError,
    NonFiniteStateError,
    OffLatticeError,
    ParameterDomainError,
    StepSizeError,
)
from .grid import GridSpec
from .kernel import FourierTable, convolve_density

__all__ = [
    "GpeParams",
    "CondensateState",
    "Observables",
    "EvolveResult",
    "ResponseResult",
    "init_state",
    "dipolar_potential",
    "step",
    "evolve",
    "observables",
    "effective_dipolar_coupling",
    "predicted_mode_frequency",
    "linear_response_experiment",
    "set_fft_workers",
    "get_fft_workers",
]

_FFT_WORKERS = 1


def set_fft_workers(n: int):
    """Worker count handed to scipy.fft inside the solver (deterministic)."""
    global _FFT_WORKERS
    if int(n) < 1:
        raise ParameterDomainError(f"worker count must be >= 1, got {n}")
    _FFT_WORKERS = int(n)


def get_fft_workers() -> int:
    return _FFT_WORKERS


@dataclass(frozen=True)
class GpeParams:
    """Masses, mixing angle and kernel table of the mean-field problem.

    m_perp  transverse mass, > 0
    m_par   longitudinal mass; complex allowed, Im(1/m_par) <= 0 for decay
    sin2_theta  sin^2 of the mixing angle, in [0, 1]
    table   kernel Fourier table; carries the grid
    hbar    Planck constant of the unit system in use
    max_potential_phase  accuracy guard per half step [rad]
    """

    m_perp: float
    m_par: complex
    sin2_theta: float
    table: FourierTable
    hbar: float = SI_HBAR
    max_potential_phase: float = math.pi / 4.0

    def __post_init__(self):
        if not (np.isfinite(self.m_perp) and self.m_perp > 0):
            raise ParameterDomainError(f"m_perp must be positive, got {self.m_perp}")
        m_par = complex(self.m_par)
        if m_par == 0 or not (np.isfinite(m_par.real) and np.isfinite(m_par.imag)):
            raise ParameterDomainError(f"m_par must be finite and nonzero, got {m_par}")
        if not (0.0 <= self.sin2_theta <= 1.0):
            raise ParameterDomainError(f"sin2_theta must lie in [0, 1], got {self.sin2_theta}")
        if not (np.isfinite(self.hbar) and self.hbar > 0):
            raise ParameterDomainError(f"hbar must be positive, got {self.hbar}")
        if not (0 < self.max_potential_phase <= math.pi):
            raise ParameterDomainError(
                f"max_potential_phase must lie in (0, pi], got {self.max_potential_phase}"
            )
        object.__setattr__(self, "m_par", m_par)

    @property
    def grid(self) -> GridSpec:
        return self.table.grid

    def real_mass(self) -> "GpeParams":
        return replace(self, m_par=complex(self.m_par.real, 0.0))


@dataclass(frozen=True)
class CondensateState:
    """Complex field phi on the params' grid at time t."""

    phi: np.ndarray
    t: float
    params: GpeParams

    def __post_init__(self):
        phi = np.asarray(self.phi, dtype=complex)
        if phi.shape != self.params.grid.shape:
            raise GridMismatchError(
                f"phi shape {phi.shape} does not match grid {self.params.grid.shape}"
            )
        object.__setattr__(self, "phi", phi)

    @property
    def grid(self) -> GridSpec:
        return self.params.grid


def _lattice_index(q, grid: GridSpec, rel_tol: float = 1e-9) -> tuple[int, int, int]:
    """Indices of a reciprocal-lattice vector; OffLatticeError if q is not one."""
    qv = np.asarray(q, dtype=float)
    if qv.shape != (3,) or not np.all(np.isfinite(qv)):
        raise ParameterDomainError(f"q must be a finite 3-vector, got {q}")
    idx = []
    for comp, n, length in zip(qv, grid.dims, grid.box_lengths):
        steps = comp * length / (2.0 * math.pi)
        nearest = round(steps)
        scale = max(abs(steps), 1.0)
        if abs(steps - nearest) > rel_tol * scale:
            raise OffLatticeError(
                f"q = {tuple(qv)} is off the reciprocal lattice (component {comp} is "
                f"{steps} lattice steps)"
            )
        idx.append(int(nearest) % n)
    return tuple(idx)


def init_state(
    kind: str,
    params: GpeParams,
    *,
    n0: float | None = None,
    widths=None,
    center=None,
    delta: float | None = None,
    q=None,
    t: float = 0.0,
) -> CondensateState:
    """Prepare a condensate state.

    kind="uniform":  phi = sqrt(n0) everywhere.
    kind="gaussian": density Gaussian, unit norm, per-axis standard deviations
                     `widths`, centered at `center` (default box middle).
    kind="perturbed_plane_wave": phi = sqrt(n0) (1 + delta cos(q . r)) with
                     delta <= 1e-3 and q on the reciprocal lattice.
    """
    grid = params.grid
    if kind == "uniform":
        if n0 is None or not (np.isfinite(n0) and n0 > 0):
            raise ParameterDomainError(f"uniform state needs n0 > 0, got {n0}")
        phi = np.full(grid.shape, math.sqrt(n0), dtype=complex)
        return CondensateState(phi, t, params)
    if kind == "gaussian":
        w = np.asarray(widths, dtype=float) if widths is not None else None
        if w is None or w.shape != (3,) or np.any(~np.isfinite(w)) or np.any(w <= 0):
            raise ParameterDomainError(f"gaussian state needs three positive widths, got {widths}")
        ctr = (
            np.asarray(center, dtype=float)
            if center is not None
            else 0.5 * np.asarray(grid.box_lengths)
        )
        xm, ym, zm = grid.meshgrid()
        # widths are density standard deviations: |phi|^2 ~ exp(-x^2 / (2 w^2))
        envelope = np.exp(
            -((xm - ctr[0]) ** 2) / (4.0 * w[0] ** 2)
            - ((ym - ctr[1]) ** 2) / (4.0 * w[1] ** 2)
            - ((zm - ctr[2]) ** 2) / (4.0 * w[2] ** 2)
        ).astype(complex)
        norm = np.sum(np.abs(envelope) ** 2) * grid.cell_volume
        phi = envelope / math.sqrt(norm)
        return CondensateState(phi, t, params)
    if kind == "perturbed_plane_wave":
        if n0 is None or not (np.isfinite(n0) and n0 > 0):
            raise ParameterDomainError(f"perturbed state needs n0 > 0, got {n0}")
        if delta is None or not (0.0 < delta <= 1e-3):
            raise ParameterDomainError(
                f"perturbation amplitude must lie in (0, 1e-3], got {delta}"
            )
        _lattice_index(q, grid)
        qv = np.asarray(q, dtype=float)
        xm, ym, zm = grid.meshgrid()
        phase = qv[0] * xm + qv[1] * ym + qv[2] * zm
        phi = math.sqrt(n0) * (1.0 + delta * np.cos(phase)).astype(complex)
        return CondensateState(phi, t, params)
    raise ParameterDomainError(f"unknown state kind '{kind}'")


def dipolar_potential(state: CondensateState) -> np.ndarray:
    """Mean-field dipolar potential hbar sin^2(theta) (eps conv |phi|^2)."""
    p = state.params
    rho = np.abs(state.phi) ** 2
    return p.hbar * p.sin2_theta * convolve_density(p.table, rho, workers=_FFT_WORKERS)


def _kinetic_phase(params: GpeParams, dt: float) -> np.ndarray:
    qx, qy, qz = params.grid.wavenumber_mesh()
    q_perp2 = qx**2 + qy**2
    omega = params.hbar * (q_perp2 / (2.0 * params.m_perp) + qz**2 / (2.0 * params.m_par))
    return np.exp(-1j * dt * omega)


def _half_potential(phi: np.ndarray, params: GpeParams, dt: float) -> np.ndarray:
    rho = np.abs(phi) ** 2
    v = params.hbar * params.sin2_theta * convolve_density(params.table, rho, workers=_FFT_WORKERS)
    max_phase = float(np.max(np.abs(v))) * abs(dt) / (2.0 * params.hbar)
    if max_phase > params.max_potential_phase:
        raise StepSizeError(
            f"potential phase per half step {max_phase:.3f} rad exceeds the accuracy "
            f"guard {params.max_potential_phase:.3f} rad; reduce dt"
        )
    return phi * np.exp(-0.5j * dt / params.hbar * v)


def step(state: CondensateState, dt: float, _kin_phase: np.ndarray | None = None) -> CondensateState:
    """One Strang step: half potential, exact kinetic in Fourier, half potential.

    Negative dt steps backwards and exactly inverts the corresponding forward
    step (the potential phase does not alter the density).
    """
    if dt == 0 or not np.isfinite(dt):
        raise ParameterDomainError(f"dt must be nonzero and finite, got {dt}")
    params = state.params
    kin = _kin_phase if _kin_phase is not None else _kinetic_phase(params, dt)
    phi = _half_potential(state.phi, params, dt)
    phi = scipy.fft.ifftn(kin * scipy.fft.fftn(phi, workers=_FFT_WORKERS), workers=_FFT_WORKERS)
    phi = _half_potential(phi, params, dt)
    return CondensateState(phi, state.t + dt, params)


@dataclass(frozen=True)
class Observables:
    """Diagnostics of one state; energies split by origin."""

    t: float
    norm: float
    energy_total: float
    kinetic_perp: float
    kinetic_z: float
    dipolar: float
    peak_density: float
    center_of_mass: tuple[float, float, float]
    variance: tuple[float, float, float]


def observables(state: CondensateState) -> Observables:
    p = state.params
    grid = p.grid
    dv = grid.cell_volume
    phi = state.phi
    rho = np.abs(phi) ** 2
    norm = float(np.sum(rho)) * dv
    spec = scipy.fft.fftn(phi, workers=_FFT_WORKERS)
    weight = np.abs(spec) ** 2 * (dv / phi.size)
    qx, qy, qz = grid.wavenumber_mesh()
    hbar = p.hbar
    kin_perp = float(np.sum(hbar**2 * (qx**2 + qy**2) / (2.0 * p.m_perp) * weight))
    # kinetic weight along z uses the real part of 1/m_par so it reduces to the
    # usual positive expression for real masses
    inv_mz = (1.0 / p.m_par).real
    kin_z = float(np.sum(hbar**2 * qz**2 * 0.5 * inv_mz * weight))
    v = dipolar_potential(state)
    e_dip = 0.5 * float(np.sum(v * rho)) * dv
    xm, ym, zm = grid.meshgrid()
    if norm > 0:
        com = tuple(
            float(np.sum(c * rho)) * dv / norm for c in (xm, ym, zm)
        )
        var = tuple(
            float(np.sum((c - m) ** 2 * rho)) * dv / norm
            for c, m in zip((xm, ym, zm), com)
        )
    else:
        com = (math.nan,) * 3
        var = (math.nan,) * 3
    return Observables(
        t=state.t,
        norm=norm,
        energy_total=kin_perp + kin_z + e_dip,
        kinetic_perp=kin_perp,
        kinetic_z=kin_z,
        dipolar=e_dip,
        peak_density=float(np.max(rho)),
        center_of_mass=com,
        variance=var,
    )


@dataclass(frozen=True)
class EvolveResult:
    final: CondensateState
    observables: tuple[Observables, ...]
    snapshots: tuple[CondensateState, ...]


def evolve(
    state: CondensateState,
    dt: float,
    t_final: float,
    observer_stride: int = 10,
    keep_snapshots: bool = False,
) -> EvolveResult:
    """Step until t_final, recording observables every observer_stride steps.

    Aborts with NonFiniteStateError (carrying the step index and time) if the
    field develops NaN or Inf.
    """
    if dt == 0 or not np.isfinite(dt):
        raise ParameterDomainError(f"dt must be nonzero and finite, got {dt}")
    span = t_final - state.t
    n_steps = int(round(span / dt))
    if n_steps < 1 or span * dt < 0:
        raise ParameterDomainError(
            f"t_final = {t_final} is not reachable from t = {state.t} with dt = {dt}"
        )
    if observer_stride < 1:
        raise ParameterDomainError(f"observer_stride must be >= 1, got {observer_stride}")
    kin = _kinetic_phase(state.params, dt)
    obs = [observables(state)]
    snaps = [state] if keep_snapshots else []
    current = state
    for i in range(1, n_steps + 1):
        current = step(current, dt, _kin_phase=kin)
        if not np.all(np.isfinite(current.phi)):
            bad = int(np.count_nonzero(~np.isfinite(current.phi)))
            raise NonFiniteStateError(
                f"non-finite field after step {i} (t = {current.t:.6e}); "
                f"{bad} bad samples of {current.phi.size}"
            )
        if i % observer_stride == 0 or i == n_steps:
            obs.append(observables(current))
            if keep_snapshots:
                snaps.append(current)
    return EvolveResult(final=current, observables=tuple(obs), snapshots=tuple(snaps))


def effective_dipolar_coupling(params: GpeParams, q, n0: float) -> float:
    """Dipolar coupling (energy units) realized by the grid kernel at lattice q.

    The linearization of the discrete dynamics about the uniform state with
    density n0 sees the interaction energy 2 n0 hbar sin^2(theta) T(q), where
    T is the Fourier table. Dividing by the angular factor 3 cos^2(beta) - 1
    gives the coupling to hand to the bogoliubov module; at the magic angle
    (vanishing factor) zero is returned since the interaction decouples.
    """
    if not (np.isfinite(n0) and n0 > 0):
        raise ParameterDomainError(f"n0 must be positive, got {n0}")
    idx = _lattice_index(q, params.grid)
    t_q = float(params.table.coeffs[idx])
    e_int = 2.0 * n0 * params.hbar * params.sin2_theta * t_q
    qv = np.asarray(q, dtype=float)
    q2 = float(qv @ qv)
    if q2 == 0.0:
        return 0.0
    cos2 = float(qv @ np.asarray(params.table.spec.orientation)) ** 2 / q2
    ang = 3.0 * cos2 - 1.0
    if abs(ang) < 1e-9:
        return 0.0
    return e_int / ang


def predicted_mode_frequency(params: GpeParams, q, n0: float, complex_mass: bool = False) -> complex:
    """Bogoliubov frequency at lattice q with the table-calibrated coupling."""
    c_dd = effective_dipolar_coupling(params, q, n0)
    cp = bogoliubov.CondensateParams(
        m_perp=params.m_perp,
        m_par=params.m_par,
        c_dd=c_dd,
        orientation=params.table.spec.orientation,
        n_dsp=n0,
        hbar=params.hbar,
    )
    return bogoliubov.dispersion(q, cp, complex_mass=complex_mass).nu


@dataclass(frozen=True)
class ResponseResult:
    """Outcome of a linear-response run at one wavevector."""

    q: tuple[float, float, float]
    nu_fit: complex
    residual: float
    nu_predicted: complex
    effective_c_dd: float
    times: np.ndarray
    amplitudes: np.ndarray


def _density_mode_amplitude(phi: np.ndarray, idx: tuple[int, int, int], dv: float) -> complex:
    rho = np.abs(phi) ** 2
    return complex(scipy.fft.fftn(rho)[idx] * dv)


def linear_response_experiment(
    params: GpeParams,
    q,
    delta: float,
    duration: float | None = None,
    *,
    n0: float = 1.0,
    dt: float | None = None,
    points_per_cycle: int = 48,
) -> ResponseResult:
    """Measure a Bogoliubov mode by evolving a weakly perturbed uniform state.

    Seeds phi = sqrt(n0) (1 + delta cos(q.r)), tracks the density Fourier
    amplitude at +q, and fits A cos(nu t) for a stable mode or A cosh(g t)
    for a growing one (the seeded perturbation has zero initial current, so
    both laws are exact in the linear regime). Raises FitFailureError when
    the fit residual exceeds 10% of the signal. The returned prediction uses
    the table-calibrated coupling at the same q.
    """
    grid = params.grid
    idx = _lattice_index(q, grid)
    nu_pred = predicted_mode_frequency(params, q, n0)
    scale = abs(nu_pred)
    if scale == 0.0:
        raise ParameterDomainError("predicted frequency is zero; pick a nonzero lattice q")
    if duration is None:
        duration = (2.0 * math.pi * 4.0 / scale) if nu_pred.imag == 0 else (3.5 / scale)
    if dt is None:
        cycle = 2.0 * math.pi / scale if nu_pred.imag == 0 else 1.0 / scale
        dt = cycle / points_per_cycle
        # keep the largest single-step kinetic phase a factor 2 below the
        # pi resonance of the splitting; at resonance the Nyquist-scale
        # modes pump up from round-off and bury the tracked mode
        rate_max = 0.5 * params.hbar * (
            (math.pi / grid.spacings[0]) ** 2 / params.m_perp
            + (math.pi / grid.spacings[1]) ** 2 / params.m_perp
            + (math.pi / grid.spacings[2]) ** 2 * abs((1.0 / params.m_par).real)
        )
        dt = min(dt, 0.5 * math.pi / rate_max)
    n_steps = max(int(round(duration / dt)), 8)
    state = init_state("perturbed_plane_wave", params, n0=n0, delta=delta, q=q)
    kin = _kinetic_phase(params, dt)
    dv = grid.cell_volume
    times = np.empty(n_steps + 1)
    amps = np.empty(n_steps + 1, dtype=complex)
    times[0] = 0.0
    amps[0] = _density_mode_amplitude(state.phi, idx, dv)
    for i in range(1, n_steps + 1):
        state = step(state, dt, _kin_phase=kin)
        if not np.all(np.isfinite(state.phi)):
            raise NonFiniteStateError(f"non-finite field during response run at step {i}")
        times[i] = i * dt
        amps[i] = _density_mode_amplitude(state.phi, idx, dv)
    a0 = abs(amps[0])
    if a0 == 0.0:
        raise FitFailureError("seeded mode has zero initial amplitude")
    signal = np.real(amps)
    growth_factor = float(np.max(np.abs(amps))) / a0
    if growth_factor > 3.0:
        # growing branch: |amp| = a0 cosh(g t)
        mag = np.abs(amps) / a0
        def model(t, g):
            return np.log(np.cosh(np.minimum(g * t, 700.0)))
        (g_fit,), _ = scipy.optimize.curve_fit(
            model, times, np.log(mag), p0=[scale], maxfev=10000
        )
        g_fit = abs(float(g_fit))
        fit_curve = a0 * np.cosh(g_fit * times)
        resid = float(np.sqrt(np.mean((np.abs(amps) - fit_curve) ** 2)))
        denom = float(np.sqrt(np.mean(np.abs(amps) ** 2)))
        nu_fit = complex(0.0, g_fit)
    else:
        # oscillating branch: Re(amp) = A cos(nu t + phase)
        spec = np.fft.rfft(signal)
        freqs = 2.0 * np.pi * np.fft.rfftfreq(len(signal), d=dt)
        guess = freqs[int(np.argmax(np.abs(spec[1:]))) + 1] if len(spec) > 1 else scale
        def model(t, a, w, ph):
            return a * np.cos(w * t + ph)
        try:
            (a_fit, w_fit, ph_fit), _ = scipy.optimize.curve_fit(
                model, times, signal, p0=[signal[0], guess, 0.0], maxfev=20000
            )
        except RuntimeError as exc:
            raise FitFailureError(f"oscillation fit did not converge: {exc}") from None
        fit_curve = model(times, a_fit, w_fit, ph_fit)
        resid = float(np.sqrt(np.mean((signal - fit_curve) ** 2)))
        denom = float(np.sqrt(np.mean(signal**2)))
        nu_fit = complex(abs(float(w_fit)), 0.0)
    rel_resid = resid / denom if denom > 0 else math.inf
    if rel_resid > 0.10:
        raise FitFailureError(
            f"fit residual {rel_resid:.1%} exceeds 10% of the signal at q = {tuple(np.asarray(q, float))}"
        )
    return ResponseResult(
        q=tuple(np.asarray(q, dtype=float)),
        nu_fit=nu_fit,
        residual=rel_resid,
        nu_predicted=nu_pred,
        effective_c_dd=effective_dipolar_coupling(params, q, n0),
        times=times,
        amplitudes=amps,
    )
