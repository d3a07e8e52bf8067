"""Collective-mode dispersion, closed-form comparisons and stability scans."""

import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dipolariton import (
    CaseMismatchError,
    CondensateParams,
    EmptyInputError,
    ParameterDomainError,
    critical_wavenumber,
    dispersion,
    dispersion_rescaled,
    spherical_directions,
    stability_map,
)

Z = (0.0, 0.0, 1.0)
Y = (0.0, 1.0, 0.0)


def params(m_perp=1.0, m_par=1.0, c_dd=0.5, orientation=Z, hbar=1.0):
    return CondensateParams(m_perp=m_perp, m_par=m_par, c_dd=c_dd,
                            orientation=orientation, hbar=hbar)


def nu_oracle(q, p, complex_mass=False):
    # independent evaluation with scalar cmath, principal branch Im >= 0
    qx, qy, qz = q
    m_par = complex(p.m_par) if complex_mass else complex(p.m_par.real)
    e_free = p.hbar**2 * ((qx**2 + qy**2) / (2.0 * p.m_perp) + qz**2 / (2.0 * m_par))
    q2 = qx**2 + qy**2 + qz**2
    ang = 0.0 if q2 == 0 else 3.0 * (qx * p.orientation[0] + qy * p.orientation[1]
                                     + qz * p.orientation[2]) ** 2 / q2 - 1.0
    root = cmath.sqrt(e_free * (e_free + p.c_dd * ang))
    if root.imag < 0:
        root = -root
    return root / p.hbar


def test_free_branch_without_coupling():
    p = params(m_perp=2.0, m_par=0.5, c_dd=0.0)
    r = dispersion((0.3, -0.4, 0.25), p)
    # nu = e_free / hbar = (0.09 + 0.16)/4 + 0.0625/1
    assert r.nu == pytest.approx(0.125, rel=1e-14)
    assert r.stable and r.growth_rate == 0.0


def test_magic_direction_reduces_to_free_branch():
    d = np.array([math.sqrt(2.0), 0.0, 1.0]) / math.sqrt(3.0)
    q = tuple(d * 0.4)
    free = dispersion(q, params(m_perp=1.0, m_par=0.3, c_dd=0.0)).nu
    for c in np.logspace(-3, 3, 13):  # couplings across six decades
        for sign in (1.0, -1.0):
            p = params(m_perp=1.0, m_par=0.3, c_dd=sign * c)
            assert dispersion(q, p).nu == pytest.approx(free, rel=1e-12)


def test_dispersion_matches_scalar_recomputation():
    cases = [
        ((0.3, 0.1, 0.7), params(c_dd=0.5), False),
        ((0.3, 0.1, 0.7), params(c_dd=-2.0), False),
        ((0.9, 0.0, 0.05), params(m_par=1e-4, c_dd=0.5), False),
        ((0.1, 0.0, 0.0), params(c_dd=5.0), False),           # unstable
        ((0.2, -0.3, 0.4), params(m_par=1e-4 + 5e-5j, c_dd=0.5), True),
        ((0.2, -0.3, 0.4), params(m_par=1e-4 + 5e-5j, c_dd=0.5), False),
        ((0.0, 0.5, 0.5), params(orientation=Y, c_dd=-1.0), False),
    ]
    for q, p, cm in cases:
        r = dispersion(q, p, complex_mass=cm)
        assert r.nu == pytest.approx(nu_oracle(q, p, cm), rel=1e-13)
        assert r.nu.imag >= 0.0


def test_zero_wavevector_mode():
    r = dispersion((0.0, 0.0, 0.0), params(c_dd=3.0))
    assert r.nu == 0.0
    assert r.stable


@settings(max_examples=80, deadline=None)
@given(
    q=st.tuples(*[st.floats(min_value=-2.0, max_value=2.0, allow_nan=False)] * 3),
    phi=st.floats(min_value=0.0, max_value=2.0 * math.pi, allow_nan=False),
)
def test_parity_and_axial_symmetry(q, phi):
    p = params(m_perp=1.0, m_par=0.3, c_dd=-0.8)
    r = dispersion(q, p)
    mirrored = dispersion(tuple(-v for v in q), p)
    assert mirrored.nu == r.nu
    # the dipole axis z is a symmetry axis even with anisotropic masses
    cs, sn = math.cos(phi), math.sin(phi)
    rotated = (cs * q[0] - sn * q[1], sn * q[0] + cs * q[1], q[2])
    assert dispersion(rotated, p).nu == pytest.approx(r.nu, rel=1e-12, abs=1e-12)


@settings(max_examples=60, deadline=None)
@given(
    q=st.tuples(*[st.floats(min_value=-2.0, max_value=2.0, allow_nan=False)] * 3),
    c=st.floats(min_value=-3.0, max_value=3.0, allow_nan=False),
)
def test_real_mass_branch_is_real_or_imaginary(q, c):
    r = dispersion(q, params(m_par=0.7, c_dd=c))
    assert r.nu.real * r.nu.imag == 0.0
    assert r.growth_rate == r.nu.imag
    assert r.stable == (r.growth_rate == 0.0)


# -------------------------------------------------------- critical wavenumber

def test_critical_wavenumber_transverse_closed_form():
    # along x the angular factor is -1, so the radicand changes sign where
    # hbar^2 q^2 / (2 m_perp) = c_dd: q_c = sqrt(2 m_perp c_dd) / hbar
    p = params(m_perp=1.0, m_par=1.0, c_dd=0.5)
    qc = critical_wavenumber((1.0, 0.0, 0.0), p)
    assert qc == pytest.approx(1.0, rel=1e-9)


def test_critical_wavenumber_longitudinal_closed_form():
    p = params(m_perp=1.0, m_par=1e-4, c_dd=-0.5)
    qc = critical_wavenumber((0.0, 0.0, 1.0), p)
    assert qc == pytest.approx(math.sqrt(2.0e-4), rel=1e-9)


def test_critical_wavenumber_none_when_ray_is_stable():
    assert critical_wavenumber((0.0, 0.0, 1.0), params(c_dd=0.5)) is None
    assert critical_wavenumber((1.0, 0.0, 0.0), params(c_dd=-0.5)) is None
    assert critical_wavenumber((1.0, 0.0, 0.0), params(c_dd=0.0)) is None


def test_critical_wavenumber_scales_with_sqrt_coupling():
    p1 = params(c_dd=0.5)
    p2 = params(c_dd=1.0)
    q1 = critical_wavenumber((1.0, 0.0, 0.0), p1)
    q2 = critical_wavenumber((1.0, 0.0, 0.0), p2)
    assert q2 == pytest.approx(q1 * math.sqrt(2.0), rel=1e-9)


def test_modes_flip_stability_at_the_critical_wavenumber():
    p = params(c_dd=0.5)
    d = np.array([1.0, 0.0, 0.0])
    qc = critical_wavenumber(d, p)
    assert not dispersion(tuple(d * (0.99 * qc)), p).stable
    assert dispersion(tuple(d * (1.01 * qc)), p).stable


def test_critical_wavenumber_rejects_non_unit_direction():
    with pytest.raises(ParameterDomainError):
        critical_wavenumber((2.0, 0.0, 0.0), params())


def test_unstable_growth_small_q_asymptote():
    # growth ~ q sqrt(c2 |c_dd ang|) with c2 = hbar^2/(2 m_perp) as q -> 0
    p = params(m_perp=1.0, m_par=1.0, c_dd=2.0)
    lam = 1e-3
    r = dispersion((lam, 0.0, 0.0), p)
    expected = lam * math.sqrt(0.5 * 2.0)
    assert r.growth_rate == pytest.approx(expected, rel=1e-2)


def test_real_branch_requires_nonzero_real_mass():
    p = params(m_par=1j * 1e-4)
    with pytest.raises(ParameterDomainError):
        dispersion((0.1, 0.0, 0.2), p)
    dispersion((0.1, 0.0, 0.2), p, complex_mass=True)  # complex branch works


# ------------------------------------------------------ rescaled closed form

def test_rescaled_longitudinal_equals_dispersion_at_unit_alpha():
    p = params(m_perp=1.0, m_par=1.0, c_dd=-0.7)
    for q in [(0.3, 0.1, 0.7), (0.0, 0.0, 0.4), (1.2, -0.5, 0.0)]:
        assert dispersion_rescaled(q, p, "longitudinal") == pytest.approx(
            dispersion(q, p).nu, rel=1e-12
        )


def test_rescaled_transversal_worked_point():
    # alpha = 1/4: q = (0.3, 0.4, 2.0) rescales to (0.3, 0.4, 0.5) with
    # den = 0.265625 and transversal numerator 0.214375
    p = params(m_perp=1.0, m_par=0.25, c_dd=-0.3, orientation=Y)
    got = dispersion_rescaled((0.3, 0.4, 2.0), p, "transversal")
    t2 = 0.09 + 0.16 + 0.25
    expected = cmath.sqrt((t2 / 2.0) * (t2 / 2.0 - 0.3 * 0.214375 / 0.265625))
    assert got == pytest.approx(expected, rel=1e-13)


def test_rescaled_transversal_instability_pattern():
    # negative coupling with the axis along y destabilizes the y ray only
    p = params(c_dd=-1.0, orientation=Y)
    along_axis = dispersion_rescaled((0.0, 0.2, 0.0), p, "transversal")
    across = dispersion_rescaled((0.2, 0.0, 0.0), p, "transversal")
    assert along_axis.imag > 0.0
    assert across.imag == 0.0 and across.real > 0.0


def test_rescaled_zero_mode_and_case_checks():
    p = params(c_dd=0.5)
    assert dispersion_rescaled((0.0, 0.0, 0.0), p, "longitudinal") == 0.0
    with pytest.raises(CaseMismatchError):
        dispersion_rescaled((0.1, 0.0, 0.0), p, "transversal")  # axis is z
    with pytest.raises(CaseMismatchError):
        dispersion_rescaled((0.1, 0.0, 0.0), p, "sideways")


# ------------------------------------------------------------- stability map

def test_stability_map_ordering_and_argmax():
    p = params(c_dd=0.5)
    smap = stability_map(p, [(0.0, 0.0, 1.0), (1.0, 0.0, 0.0)], [0.5, 2.0])
    flags = [r.stable for r in smap.results]
    assert flags == [True, True, False, True]  # direction-major layout
    assert smap.n_unstable == 1
    assert smap.argmax_direction == (1.0, 0.0, 0.0)
    assert smap.argmax_q == (0.5, 0.0, 0.0)
    assert smap.max_growth_rate == pytest.approx(math.sqrt(0.046875), rel=1e-13)


def test_stability_map_tie_resolves_to_first_direction():
    p = params(c_dd=0.5)
    smap = stability_map(p, [(1.0, 0.0, 0.0), (0.0, 1.0, 0.0)], [0.5])
    assert smap.n_unstable == 2
    assert smap.argmax_direction == (1.0, 0.0, 0.0)


def test_stability_map_all_stable_without_coupling():
    smap = stability_map(params(c_dd=0.0), spherical_directions(3, 4), [0.5, 1.0])
    assert smap.n_unstable == 0
    assert smap.max_growth_rate == 0.0


def test_stability_map_input_validation():
    p = params()
    with pytest.raises(EmptyInputError):
        stability_map(p, np.empty((0, 3)), [0.5])
    with pytest.raises(EmptyInputError):
        stability_map(p, [(0.0, 0.0, 1.0)], [])
    with pytest.raises(ParameterDomainError):
        stability_map(p, [(0.0, 0.0, 2.0)], [0.5])
    with pytest.raises(ParameterDomainError):
        stability_map(p, [(0.0, 0.0, 1.0)], [-1.0])


def test_stability_map_azimuthal_symmetry():
    # with the axis along z the growth rate depends on the polar angle only
    p = params(m_par=0.3, c_dd=0.8)
    dirs = spherical_directions(6, 8)
    smap = stability_map(p, dirs, [0.7])
    rates = np.array([r.growth_rate for r in smap.results]).reshape(6, 8)
    for ring in rates:
        assert np.allclose(ring, ring[0], rtol=1e-12, atol=1e-15)


def test_spherical_directions_frozen_two_by_two():
    dirs = spherical_directions(2, 2)
    h = math.sqrt(2.0) / 2.0
    expected = np.array([
        [h, 0.0, h], [-h, 0.0, h],
        [h, 0.0, -h], [-h, 0.0, -h],
    ])
    assert np.allclose(dirs, expected, atol=1e-15)
    assert np.allclose(np.linalg.norm(dirs, axis=1), 1.0, rtol=1e-15)


def test_spherical_directions_validation():
    with pytest.raises(ParameterDomainError):
        spherical_directions(0, 4)


# --------------------------------------------------------------- validation

def test_condensate_params_validation():
    with pytest.raises(ParameterDomainError):
        CondensateParams(m_perp=0.0, m_par=1.0, c_dd=0.5)
    with pytest.raises(ParameterDomainError):
        CondensateParams(m_perp=1.0, m_par=0.0, c_dd=0.5)
    with pytest.raises(ParameterDomainError):
        CondensateParams(m_perp=1.0, m_par=1.0, c_dd=math.inf)
    with pytest.raises(ParameterDomainError):
        CondensateParams(m_perp=1.0, m_par=1.0, c_dd=0.5,
                         orientation=(0.0, 0.0, 1.0 + 1e-11))
    p = CondensateParams(m_perp=2.0, m_par=0.5 + 0.25j, c_dd=0.5, hbar=1.0)
    assert p.alpha == (0.5 + 0.25j) / 2.0
