"""Gate assembly, fidelity reduction, observables, and trajectories.

The dual-route tests rebuild whole gates from the dense matrix-exponential
unitaries in `pulses` and require the fast eigenbasis engine to match
elementwise; everything downstream (sweeps, acceptance) rides on that
equivalence.
"""

import numpy as np
import pytest

from fastgates.chain import TrapConfig, chain_modes
from fastgates.fock import FockBasis, displacement
from fastgates.gatesim import (GateReport, SectorResult, SimulationRequest,
                               basis_dim_for, mode_occupation_stats,
                               multimode_fidelity, phase_space_trajectory,
                               populations, simulate_gate, simulate_sector,
                               state_averaged_fidelity, _averaged_fidelity,
                               _event_schedule)
from fastgates.pulses import (Ideal, NonRWA, PulseArea, SectorSpace,
                              TruncationOverflow, free_evolution, ideal_kick,
                              nonrwa_pulse, pair_pulse_xi)
from fastgates.schemes import build_scheme, ideal_phase


def test_basis_dim_policy():
    assert basis_dim_for(1) == 50
    assert basis_dim_for(2) == 70
    assert basis_dim_for(5) == 70
    assert basis_dim_for(6) == 130
    assert basis_dim_for(10) == 130
    with pytest.raises(ValueError):
        basis_dim_for(0)


def test_request_validates_headroom(schemes, trap):
    with pytest.raises(ValueError):
        SimulationRequest(scheme=schemes[("gzc", 2)], trap=trap, n_init=(30, 0), dim=80)
    with pytest.raises(ValueError):
        SimulationRequest(scheme=schemes[("gzc", 2)], trap=trap, n_init=(-1, 0))


def test_ideal_sector_restores_motional_state(schemes, trap, modes):
    # solved scheme: closed trajectory, so the number state comes back
    req = SimulationRequest(scheme=schemes[("gzc", 2)], trap=trap, n_init=(2, 2))
    for sector, mode in (("same", modes[0]), ("opposite", modes[1])):
        res = simulate_sector(req, sector, mode)
        assert abs(abs(res.amplitude) - 1) < 1e-9
        assert np.isclose(np.linalg.norm(res.final_state), 1.0, atol=1e-10)
        n0 = 2
        probs = np.sum(np.abs(res.final_state) ** 2, axis=0)
        assert probs[n0] > 1 - 1e-9


def test_sector_rejects_unknown_label(schemes, trap, modes):
    req = SimulationRequest(scheme=schemes[("gzc", 2)], trap=trap)
    with pytest.raises(ValueError):
        simulate_sector(req, "diagonal", modes[0])


def test_sector_amplitude_phase_split(schemes, trap, modes):
    # after free-phase removal the two sector amplitudes sit pi/2 apart
    for key in (("gzc", 2), ("frag", 5)):
        req = SimulationRequest(scheme=schemes[key], trap=trap)
        a = simulate_sector(req, "same", modes[0]).amplitude
        b = simulate_sector(req, "opposite", modes[1]).amplitude
        gap = np.angle(a) - np.angle(b)
        gap = (gap + np.pi) % (2 * np.pi) - np.pi
        assert abs(abs(gap) - np.pi / 2) < 1e-6, key


def _dense_final(scheme, trap, mode, model, dim, internal, n0):
    """Reference evolution by dense matrix products of the expm unitaries."""
    space = SectorSpace(mode, FockBasis(dim))
    order = ("gg", "ge", "eg", "ee")
    psi = np.zeros(4 * dim, dtype=complex)
    psi[order.index(internal) * dim + n0] = 1.0
    for ev, arg in _event_schedule(scheme):
        if ev == "free":
            psi = free_evolution(space, arg) @ psi
        else:
            z = scheme.z[arg]
            direction = 1 if z > 0 else -1
            if isinstance(model, Ideal):
                psi = ideal_kick(space, z, n_max=n0) @ psi
            elif isinstance(model, PulseArea):
                pair = pair_pulse_xi(space, direction, model)
                psi = np.linalg.matrix_power(pair, abs(z)) @ psi
            else:
                t = scheme.t[arg]
                for _ in range(abs(z)):
                    for d in (direction, -direction):
                        psi = nonrwa_pulse(space, d, t, model) @ psi
                        t += model.tau
    return psi


@pytest.mark.parametrize("key,model,dim", [
    (("gzc", 2), Ideal(), 60),
    (("gzc", 2), PulseArea(xi=0.95), 60),
    (("frag", 2), NonRWA(tau=20.25e-15, phi=1.3, omega_at=2 * np.pi * 1e15), 50),
])
def test_engine_matches_dense_unitary_route(schemes, trap, modes, key, model, dim):
    scheme = schemes[key]
    dense = _dense_final(scheme, trap, modes[0], model, dim, "ee", 1)
    req = SimulationRequest(scheme=scheme, trap=trap, error_model=model, dim=dim)
    fast = simulate_sector(req, "same", modes[0], internal_state="ee", n0=1)
    assert np.max(np.abs(dense - fast.final_state.reshape(-1))) < 1e-10


def test_state_average_closed_form_anchors(schemes, modes):
    scheme = schemes[("gzc", 2)]
    # arrange raw amplitudes so the corrected values hit the anchor points
    a_unit = np.exp(+1j * np.pi / 4)  # corrected A' = 1 at n_init = (0, 0)
    b_unit = np.exp(-1j * np.pi / 4)
    f = state_averaged_fidelity(a_unit, b_unit, scheme, modes, (0, 0))
    assert np.isclose(f, 1.0, atol=1e-12)
    assert np.isclose(state_averaged_fidelity(a_unit, 0.0, scheme, modes, (0, 0)),
                      0.3, atol=1e-12)
    assert np.isclose(state_averaged_fidelity(a_unit, -b_unit, scheme, modes, (0, 0)),
                      0.2, atol=1e-12)


def test_state_average_strips_free_evolution(schemes, modes):
    scheme = schemes[("gzc", 2)]
    n_init = (3, 1)
    a = np.exp(1j * (np.pi / 4 - modes[0].nu_p * scheme.T_G * n_init[0]))
    b = np.exp(1j * (-np.pi / 4 - modes[1].nu_p * scheme.T_G * n_init[1]))
    assert np.isclose(state_averaged_fidelity(a, b, scheme, modes, n_init), 1.0,
                      atol=1e-12)


def test_occupation_stats_number_and_coherent_states(modes):
    dim = 130
    state = np.zeros((4, dim), dtype=complex)
    state[3, 4] = 1.0
    res = SectorResult("same", modes[0], 0.0, state)
    assert mode_occupation_stats(res) == (4.0, 0.0)

    coherent = displacement(2.0, FockBasis(dim))[:, 0]
    state = np.zeros((4, dim), dtype=complex)
    state[0] = coherent
    mean, std = mode_occupation_stats(SectorResult("same", modes[0], 0.0, state))
    assert np.isclose(mean, 4.0, atol=1e-6)   # |alpha|^2
    assert np.isclose(std, 2.0, atol=1e-6)    # Poisson sqrt(|alpha|^2)


def test_vacuum_without_pulses_is_empty(modes):
    state = np.zeros((4, 8), dtype=complex)
    state[0, 0] = 1.0
    assert mode_occupation_stats(SectorResult("same", modes[0], 1.0, state)) == (0.0, 0.0)


def test_populations_ideal_exact_scheme(schemes, trap, modes):
    req = SimulationRequest(scheme=schemes[("gzc", 2)], trap=trap, n_init=(2, 0))
    res = simulate_sector(req, "same", modes[0], internal_state="ee", n0=2)
    dist = populations(res)
    assert set(dist) == {"gg", "ge", "eg", "ee"}
    total = sum(float(np.sum(v)) for v in dist.values())
    assert np.isclose(total, 1.0, atol=1e-10)
    assert dist["ee"][2] > 1 - 1e-9  # restoration: all population in (ee, n=2)


def test_populations_perfect_area_equals_ideal(schemes, trap, modes):
    req_xi = SimulationRequest(scheme=schemes[("gzc", 2)], trap=trap,
                               error_model=PulseArea(xi=1.0), n_init=(2, 0))
    req_id = SimulationRequest(scheme=schemes[("gzc", 2)], trap=trap, n_init=(2, 0))
    pop_xi = populations(simulate_sector(req_xi, "same", modes[0], internal_state="ee", n0=2))
    pop_id = populations(simulate_sector(req_id, "same", modes[0], internal_state="ee", n0=2))
    for state in pop_xi:
        assert np.max(np.abs(pop_xi[state] - pop_id[state])) < 1e-9


def test_populations_leak_at_imperfect_area(schemes, trap, modes):
    # 5% area error on the 14-pair gate visibly populates eg/ge and gg
    req = SimulationRequest(scheme=schemes[("gzc", 1)], trap=trap,
                            error_model=PulseArea(xi=0.95), n_init=(2, 0))
    dist = populations(simulate_sector(req, "same", modes[0], internal_state="ee", n0=2))
    assert float(np.sum(dist["eg"] + dist["ge"])) > 1e-3
    assert float(np.sum(dist["gg"])) > 1e-3


def test_simulate_gate_report(schemes, trap):
    report = simulate_gate(SimulationRequest(scheme=schemes[("gzc", 2)], trap=trap))
    assert isinstance(report, GateReport)
    assert abs(report.fidelity - 1.0) < 1e-6  # intrinsic fidelity of an exact root
    assert report.occ_mean >= 0 and report.occ_std >= 0
    assert np.isclose(report.T_G, schemes[("gzc", 2)].T_G)
    doc = report.to_dict()
    assert set(doc) == {"fidelity", "occ_mean", "occ_std", "T_G", "populations"}


def test_truncation_guard_fires_on_undersized_basis(schemes, trap, modes):
    req = SimulationRequest(scheme=schemes[("frag", 10)], trap=trap, dim=30)
    with pytest.raises(TruncationOverflow):
        simulate_sector(req, "same", modes[0])


def test_multimode_two_ion_consistency(schemes, trap, modes):
    scheme = schemes[("frag", 5)]
    req = SimulationRequest(scheme=scheme, trap=trap)
    amps, phases = [], []
    for mode in modes:
        same = simulate_sector(req, "same", mode, n0=0)
        opp = simulate_sector(req, "opposite", mode, n0=0)
        amps.append((same.amplitude, opp.amplitude))
        phases.append(ideal_phase(scheme, mode))
    f_multi = multimode_fidelity(amps, phases, scheme, modes, (0, 0))
    f_two = state_averaged_fidelity(amps[0][0], amps[1][1], scheme, modes, (0, 0))
    assert abs(f_multi - f_two) < 1e-12
    assert abs(f_multi - 1.0) < 1e-6  # every mode closed and ideal


def test_multimode_three_ion_product_form():
    """Product fidelity vs per-mode state averages on a 3-ion chain.

    The six-kick scheme closes the two leading modes and fixes the total
    phase over all three; the open third mode is what the product form
    is for. The assembled fidelity and the product of per-mode averages
    may differ only beyond first order in the error.
    """
    trap3 = TrapConfig(num_ions=3)
    modes3 = chain_modes(trap3)
    scheme3 = build_scheme("gzc", 2, modes3)
    assert max(abs(r) for r in scheme3.residuals) < 1e-10
    phases = [ideal_phase(scheme3, m) for m in modes3]
    assert np.isclose(sum(phases), np.pi / 4, atol=1e-9)

    req = SimulationRequest(scheme=scheme3, trap=trap3,
                            error_model=PulseArea(xi=0.999), dim=50)
    amps, per_mode = [], []
    for mode, phi_p in zip(modes3, phases):
        a_p = simulate_sector(req, "same", mode, n0=0).amplitude
        b_p = simulate_sector(req, "opposite", mode, n0=0).amplitude
        amps.append((a_p, b_p))
        per_mode.append(_averaged_fidelity(a_p * np.exp(-1j * phi_p),
                                           b_p * np.exp(+1j * phi_p)))
    f_multi = multimode_fidelity(amps, phases, scheme3, modes3, (0, 0, 0))
    assert abs(f_multi - np.prod(per_mode)) < 1e-4


def test_trajectory_fold_structure(schemes, modes):
    alphas = phase_space_trajectory(schemes[("gzc", 2)], modes[0], 0.0)
    assert len(alphas) == 13  # 7 free segments + 6 kicks
    # first event is free evolution from alpha0 = 0
    assert alphas[0] == 0.0
    # kick sizes match -2i z (b1 + b2) eta
    delta = alphas[1] - alphas[0]
    expect = -2j * schemes[("gzc", 2)].z[0] * np.sqrt(2) * modes[0].eta_p
    assert np.isclose(delta, expect, atol=1e-12)


def test_trajectory_closure_exact_vs_fallback(schemes, modes):
    closed = phase_space_trajectory(schemes[("gzc", 2)], modes[0], 0.0)
    assert abs(closed[-1]) < 1e-9
    open_traj = phase_space_trajectory(schemes[("frag", 2)], modes[0], 0.0)
    assert abs(open_traj[-1]) > 1e-2


def test_trajectory_area_encodes_mode_phase(schemes, modes):
    """Shoelace area of the co-rotating polygon vs the analytic phase.

    In the frame rotating at nu_p the trajectory is a closed polygon
    whose signed area is the sector's phase pickup from that mode: the
    same-state loop on the COM encircles +phi_com, while the
    opposite-state loop on the stretch winds against its mode phase and
    encircles -phi_stretch. The difference is the pi/4 gate condition
    (sector phase gap 2(phi_com + phi_stretch) = pi/2).
    """
    scheme = schemes[("gzc", 2)]
    areas = []
    for mode, signs in ((modes[0], (1, 1)), (modes[1], (1, -1))):
        alphas = phase_space_trajectory(scheme, mode, 0.0, signs=signs)
        # vertices: start plus the co-rotated position after each kick
        verts = [0.0 + 0.0j]
        for i, t in enumerate(scheme.t):
            alpha_after = alphas[2 * i + 1]
            verts.append(alpha_after * np.exp(1j * mode.nu_p * t))
        v = np.array(verts)
        areas.append(0.5 * float(np.sum(np.real(v) * np.imag(np.roll(v, -1))
                                        - np.real(np.roll(v, -1)) * np.imag(v))))
    assert abs(areas[0] - ideal_phase(scheme, modes[0])) < 1e-8
    assert abs(areas[1] + ideal_phase(scheme, modes[1])) < 1e-8
    assert abs(areas[0] - areas[1] - np.pi / 4) < 1e-8
