"""Numerical spectroscopy of Bogoliubov modes.

The nonlinear solver and the analytic dispersion law should agree without
any fitting freedom. Here we seed a uniform condensate with a single weak
density wave, let the full solver run, read the oscillation (or growth)
frequency off the tracked Fourier amplitude, and compare against the
closed-form prediction built from the same kernel table. Everything runs
in scaled units: hbar = 1, both masses 1, box spacing 0.5.
"""

import math

import numpy as np

from dipolariton import (
    GpeParams,
    GridSpec,
    KernelSpec,
    effective_dipolar_coupling,
    kernel_table_fourier,
    linear_response_experiment,
    predicted_mode_frequency,
)

N0 = 1.0
DELTA = 1e-4
C_DD = 0.5


def make_params(c_dd):
    # normalize the kernel strength so that the full-space coupling along
    # the dipole axis equals c_dd: the axial Fourier coefficient of the
    # bare kernel is (8 pi / 3) * strength and the angular factor there is 2
    strength = 3.0 * c_dd / (8.0 * math.pi * N0)
    grid = GridSpec((16, 16, 16), (0.5, 0.5, 0.5))
    table = kernel_table_fourier(grid, KernelSpec((0.0, 0.0, 1.0), strength))
    return GpeParams(m_perp=1.0, m_par=1.0 + 0.0j, sin2_theta=1.0,
                     table=table, hbar=1.0)


def lattice_q(grid, i, j, k):
    qs = grid.wavenumbers()
    return np.array([qs[0][i], qs[1][j], qs[2][k]])


def main():
    params = make_params(C_DD)
    grid = params.table.grid
    dq = 2.0 * math.pi / 8.0
    print(f"grid {grid.dims}, dq = {dq:.5f}, n0 = {N0}, seed amplitude {DELTA}")
    print(f"c_dd = +{C_DD}, dipoles along z")

    print()
    print("=== 1. stable rays: fitted vs predicted frequency ===")
    rays = [
        ("axis  (0,0,1) dq", lattice_q(grid, 0, 0, 1)),
        ("axis  (0,0,2) dq", lattice_q(grid, 0, 0, 2)),
        ("magic (3,3,3) dq", lattice_q(grid, 3, 3, 3)),
    ]
    print(" ray                  nu_fit      nu_predicted   rel dev    residual")
    for name, q in rays:
        r = linear_response_experiment(params, q, DELTA, n0=N0)
        dev = abs(r.nu_fit - r.nu_predicted) / abs(r.nu_predicted)
        print(f" {name:<18} {r.nu_fit.real:10.6f}  {r.nu_predicted.real:12.6f}"
              f"   {dev:.2e}   {r.residual:.2e}")
    print(" the prediction uses the same truncated-kernel table as the")
    print(" solver, so agreement is limited only by the fit, not by the box")

    print()
    print("=== 2. an unstable ray measured through its growth rate ===")
    # with dipoles along z and c_dd > 0 the transverse rays are the soft ones
    q = lattice_q(grid, 1, 0, 0)
    r = linear_response_experiment(params, q, DELTA, n0=N0)
    g_fit, g_pred = abs(r.nu_fit.imag), abs(r.nu_predicted.imag)
    print(f" q = (1,0,0) dq: predicted nu = {r.nu_predicted:.6g} (pure imaginary)")
    print(f" fitted growth rate {g_fit:.6f}, predicted {g_pred:.6f},"
          f" rel dev {abs(g_fit - g_pred) / g_pred:.2e}")
    print(" the seeded wave grows as cosh(g t) instead of oscillating")

    print()
    print("=== 3. what coupling does the box actually deliver? ===")
    print(" the truncation sphere softens the smallest modes; the coupling")
    print(" recovered from the table rings around the bare c_dd with a")
    print(" 1/(qR)^2 envelope as |q| grows")
    print(" q/dq (axis)   effective c_dd   fraction of bare")
    for k in (1, 2, 3, 4, 6):
        q = lattice_q(grid, 0, 0, k)
        eff = effective_dipolar_coupling(params, q, N0)
        print(f" {k:6d}        {eff:+.6f}        {eff / C_DD:.4f}")
    q = lattice_q(grid, 3, 3, 3)
    print(f" magic ray: effective coupling {effective_dipolar_coupling(params, q, N0):+.6f}"
          f" (angular factor vanishes)")
    qperp2 = q[0] ** 2 + q[1] ** 2
    nu_free = 0.5 * qperp2 / params.m_perp + 0.5 * q[2] ** 2 / params.m_par.real
    nu_magic = predicted_mode_frequency(params, q, N0)
    print(f" so the magic-ray frequency {nu_magic.real:.6f} equals the free-particle"
          f" value {nu_free:.6f}")


if __name__ == "__main__":
    main()
