"""Excitation spectrum and stability analysis of the homogeneous condensate.

The polariton condensate has anisotropic kinetic energy (transverse mass
m_perp, longitudinal mass m_par along z) and a purely dipolar interaction with
no contact term. The excitation frequency at wavevector q is

    nu(q) = sqrt( E_free (E_free + C_dd (3 cos^2 beta - 1)) ) / hbar
    E_free = hbar^2 q_perp^2 / (2 m_perp) + hbar^2 q_z^2 / (2 m_par)

with beta the angle between q and the dipole axis. C_dd is an independently
configurable coupling with energy units; the grid solver calibrates it from
the kernel table it actually uses (see gpe.effective_dipolar_coupling).

A negative radicand means the mode grows exponentially; the principal branch
Im(nu) >= 0 is returned, so growth_rate = Im(nu). By default the longitudinal
mass enters through its real part; complex-mass evaluation is available behind
an explicit flag.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.constants import hbar as HBAR

from .errors import CaseMismatchError, EmptyInputError, ParameterDomainError

__all__ = [
    "CondensateParams",
    "DispersionResult",
    "StabilityMap",
    "dispersion",
    "dispersion_rescaled",
    "stability_map",
    "critical_wavenumber",
    "spherical_directions",
]


@dataclass(frozen=True)
class CondensateParams:
    """Masses, dipolar coupling and dipole axis of the uniform condensate.

    m_perp       transverse mass [kg], > 0
    m_par        longitudinal mass [kg], complex; Re used unless complex mode
    c_dd         dipolar coupling [J], signed
    orientation  unit 3-vector of the dipole axis
    n_dsp        condensate density [1/m^3], bookkeeping only
    """

    m_perp: float
    m_par: complex
    c_dd: float
    orientation: tuple[float, float, float] = (0.0, 0.0, 1.0)
    n_dsp: float = 0.0
    hbar: float = HBAR

    def __post_init__(self):
        if not (np.isfinite(self.m_perp) and self.m_perp > 0):
            raise ParameterDomainError(f"m_perp must be positive, got {self.m_perp}")
        m_par = complex(self.m_par)
        if not (np.isfinite(m_par.real) and np.isfinite(m_par.imag)) or m_par == 0:
            raise ParameterDomainError(f"m_par must be finite and nonzero, got {m_par}")
        if not np.isfinite(self.c_dd):
            raise ParameterDomainError("c_dd must be finite")
        axis = np.asarray(self.orientation, dtype=float)
        if axis.shape != (3,) or abs(float(np.linalg.norm(axis)) - 1.0) > 1e-12:
            raise ParameterDomainError(f"orientation must be a unit 3-vector, got {self.orientation}")
        if not (np.isfinite(self.hbar) and self.hbar > 0):
            raise ParameterDomainError(f"hbar must be positive, got {self.hbar}")
        object.__setattr__(self, "m_par", m_par)
        object.__setattr__(self, "orientation", tuple(float(v) for v in axis))

    @property
    def axis(self) -> np.ndarray:
        return np.asarray(self.orientation)

    @property
    def alpha(self) -> complex:
        """Longitudinal-to-transverse mass ratio."""
        return self.m_par / self.m_perp


@dataclass(frozen=True)
class DispersionResult:
    """Excitation frequency at one wavevector.

    nu is on the principal branch Im(nu) >= 0; growth_rate = Im(nu) and
    stable is True exactly when the growth rate vanishes.
    """

    q: tuple[float, float, float]
    nu: complex
    stable: bool
    growth_rate: float


def _check_q(q) -> np.ndarray:
    arr = np.asarray(q, dtype=float)
    if arr.shape != (3,) or not np.all(np.isfinite(arr)):
        raise ParameterDomainError(f"q must be a finite 3-vector, got {q}")
    return arr


def _angular_factor(q: np.ndarray, axis: np.ndarray) -> float:
    q2 = float(q @ q)
    if q2 == 0.0:
        return 0.0
    cos2 = float(q @ axis) ** 2 / q2
    return 3.0 * cos2 - 1.0


def dispersion(q, p: CondensateParams, complex_mass: bool = False) -> DispersionResult:
    """Excitation frequency of the uniform condensate at wavevector q."""
    qv = _check_q(q)
    q_perp2 = qv[0] ** 2 + qv[1] ** 2
    q_z2 = qv[2] ** 2
    hbar = p.hbar
    e_int = p.c_dd * _angular_factor(qv, p.axis)
    if not complex_mass:
        m_par = p.m_par.real
        if m_par == 0:
            raise ParameterDomainError("Re(m_par) is zero; use complex_mass=True")
        e_free = hbar**2 * (q_perp2 / (2.0 * p.m_perp) + q_z2 / (2.0 * m_par))
        radicand = e_free * (e_free + e_int)
        if radicand >= 0.0:
            nu = complex(math.sqrt(radicand) / hbar, 0.0)
            return DispersionResult(tuple(qv), nu, True, 0.0)
        nu = complex(0.0, math.sqrt(-radicand) / hbar)
        return DispersionResult(tuple(qv), nu, False, nu.imag)
    e_free = hbar**2 * (q_perp2 / (2.0 * p.m_perp) + q_z2 / (2.0 * p.m_par))
    root = cmath.sqrt(e_free * (e_free + e_int))
    if root.imag < 0.0:
        root = -root
    nu = root / hbar
    growth = nu.imag
    return DispersionResult(tuple(qv), nu, growth == 0.0, growth)


_CASE_AXES = {"longitudinal": np.array([0.0, 0.0, 1.0]), "transversal": np.array([0.0, 1.0, 0.0])}


def dispersion_rescaled(q, p: CondensateParams, case: str) -> complex:
    """Closed-form excitation frequency in rescaled coordinates, for comparison.

    Uses q_tilde = (q_x, q_y, q_z * alpha) with alpha = Re(m_par)/m_perp and the
    literal anisotropy fractions of the two published orientation cases:

    longitudinal (axis z): (2 qt_z^2 a^2 - qt_x^2 - qt_y^2) / (qt_z^2 a^2 + qt_x^2 + qt_y^2)
    transversal  (axis y): (2 qt_y^2 - qt_x^2 - qt_z^2 a^2) / (qt_z^2 a^2 + qt_x^2 + qt_y^2)

    With alpha = 1 the rescaling is trivial and the longitudinal case
    coincides with dispersion(). Raises CaseMismatchError when the stored
    orientation is not the case's axis.
    """
    qv = _check_q(q)
    if case not in _CASE_AXES:
        raise CaseMismatchError(f"unknown case '{case}' (use 'longitudinal' or 'transversal')")
    if np.linalg.norm(p.axis - _CASE_AXES[case]) > 1e-9:
        raise CaseMismatchError(
            f"orientation {p.orientation} does not match the {case} axis {tuple(_CASE_AXES[case])}"
        )
    alpha = p.m_par.real / p.m_perp
    qt_x, qt_y, qt_z = qv[0], qv[1], qv[2] * alpha
    t2 = qt_x**2 + qt_y**2 + qt_z**2
    if t2 == 0.0:
        return 0.0 + 0.0j
    den = qt_z**2 * alpha**2 + qt_x**2 + qt_y**2
    if case == "longitudinal":
        num = 2.0 * qt_z**2 * alpha**2 - qt_x**2 - qt_y**2
    else:
        num = 2.0 * qt_y**2 - qt_x**2 - qt_z**2 * alpha**2
    hbar = p.hbar
    kin = t2 / (2.0 * p.m_perp)
    root = cmath.sqrt(kin * (hbar**2 * t2 / (2.0 * p.m_perp) + p.c_dd * num / den))
    if root.imag < 0.0:
        root = -root
    return root


def spherical_directions(n_polar: int, n_azimuth: int) -> np.ndarray:
    """Deterministic unit-vector grid: midpoints in polar angle, uniform azimuth."""
    if n_polar < 1 or n_azimuth < 1:
        raise ParameterDomainError("need at least one polar and one azimuthal sample")
    thetas = (np.arange(n_polar) + 0.5) / n_polar * np.pi
    phis = np.arange(n_azimuth) / n_azimuth * 2.0 * np.pi
    out = np.empty((n_polar * n_azimuth, 3))
    idx = 0
    for th in thetas:
        st, ct = np.sin(th), np.cos(th)
        for ph in phis:
            out[idx] = (st * np.cos(ph), st * np.sin(ph), ct)
            idx += 1
    return out


@dataclass(frozen=True)
class StabilityMap:
    """Dispersion results over a direction x magnitude scan, direction-major."""

    results: tuple[DispersionResult, ...]
    directions: np.ndarray
    magnitudes: np.ndarray
    max_growth_rate: float
    argmax_direction: tuple[float, float, float]
    argmax_q: tuple[float, float, float]

    @property
    def n_unstable(self) -> int:
        return sum(1 for r in self.results if not r.stable)


def stability_map(
    p: CondensateParams, directions, magnitudes, complex_mass: bool = False
) -> StabilityMap:
    """Scan the dispersion over directions (outer) and magnitudes (inner).

    Result list is direction-major: results[i * n_mag + j] belongs to
    directions[i], magnitudes[j]. Ties in the maximal growth rate resolve to
    the first entry in scan order.
    """
    dirs = np.atleast_2d(np.asarray(directions, dtype=float))
    mags = np.asarray(magnitudes, dtype=float).ravel()
    if dirs.size == 0 or mags.size == 0:
        raise EmptyInputError("directions and magnitudes must be non-empty")
    if dirs.shape[1] != 3:
        raise ParameterDomainError(f"directions must be (n, 3), got {dirs.shape}")
    norms = np.linalg.norm(dirs, axis=1)
    if np.any(np.abs(norms - 1.0) > 1e-9):
        raise ParameterDomainError("directions must be unit vectors")
    if np.any(~np.isfinite(mags)) or np.any(mags < 0):
        raise ParameterDomainError("magnitudes must be finite and non-negative")
    results = []
    best = (-1.0, 0)
    for i, d in enumerate(dirs):
        for j, m in enumerate(mags):
            r = dispersion(d * m, p, complex_mass=complex_mass)
            if r.growth_rate > best[0]:
                best = (r.growth_rate, len(results))
            results.append(r)
    top = results[best[1]]
    i_dir = best[1] // len(mags)
    return StabilityMap(
        results=tuple(results),
        directions=dirs,
        magnitudes=mags,
        max_growth_rate=max(top.growth_rate, 0.0),
        argmax_direction=tuple(dirs[i_dir]),
        argmax_q=top.q,
    )


def critical_wavenumber(direction, p: CondensateParams, rel_tol: float = 1e-10) -> float | None:
    """Wavenumber where the dispersion radicand changes sign along a ray.

    Returns None when the ray is stable at every magnitude. Uses the real part
    of the longitudinal mass. Found by bracket expansion and bisection to the
    requested relative tolerance.
    """
    d = np.asarray(direction, dtype=float)
    if d.shape != (3,) or abs(float(np.linalg.norm(d)) - 1.0) > 1e-9:
        raise ParameterDomainError(f"direction must be a unit 3-vector, got {direction}")
    m_par = p.m_par.real
    if m_par == 0:
        raise ParameterDomainError("Re(m_par) is zero")
    hbar = p.hbar
    c2 = hbar**2 * 0.5 * ((d[0] ** 2 + d[1] ** 2) / p.m_perp + d[2] ** 2 / m_par)
    a_int = p.c_dd * _angular_factor(d, p.axis)
    # radicand = c2 q^2 (c2 q^2 + a_int); a sign change needs c2 and a_int opposed
    if a_int == 0.0 or c2 == 0.0 or (a_int > 0.0) == (c2 > 0.0):
        return None
    sign = 1.0 if c2 > 0 else -1.0
    f = lambda q: sign * (c2 * q * q + a_int)  # f(0) < 0, monotone increasing in q
    lo, hi = 0.0, 1.0
    for _ in range(600):
        if f(hi) > 0:
            break
        hi *= 2.0
    else:
        return None
    while (hi - lo) > rel_tol * hi:
        mid = 0.5 * (lo + hi)
        if f(mid) > 0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)
