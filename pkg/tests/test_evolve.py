import numpy as np
import pytest

from zenolab.qcore import (
    AbsorbingPotential,
    GaussianPacketSpec,
    SpatialGrid,
    make_gaussian,
    make_profile,
)
from zenolab.evolve import (
    BoundaryLeakError,
    ConfigError,
    EvolutionConfig,
    ReflectionEstimate,
    arrival_density_from_norm,
    arrival_density_from_potential,
    evolve,
    reflection_probability,
)
from zenolab.series import TimeSeries


def free_potential():
    return AbsorbingPotential(0.0, make_profile("constant"))


class TestEvolve:
    def test_free_evolution_is_unitary(self, std_grid, std_packet):
        cfg = EvolutionConfig(1e-3, 5.0, free_potential())
        res = evolve(std_packet, cfg, want_absorbed=False)
        assert np.max(np.abs(res.survival.values - 1.0)) < 1e-10

    def test_survival_non_increasing(self, std_packet, step_potential):
        cfg = EvolutionConfig(1e-3, 8.0, step_potential)
        res = evolve(std_packet, cfg, want_absorbed=False)
        n = res.survival.values
        assert np.all(np.diff(n) <= 1e-12)
        assert 0.0 < n[-1] < 1.0

    def test_richardson_self_convergence_order_two(self, std_packet, step_potential):
        final = {}
        for dt in (4e-4, 2e-4, 1e-4):
            cfg = EvolutionConfig(dt, 2.0, step_potential)
            final[dt] = evolve(std_packet, cfg, want_absorbed=False).final.amplitudes
        dx = std_packet.grid.dx
        d1 = np.sqrt(np.sum(np.abs(final[4e-4] - final[2e-4]) ** 2) * dx)
        d2 = np.sqrt(np.sum(np.abs(final[2e-4] - final[1e-4]) ** 2) * dx)
        assert 3.0 < d1 / d2 < 5.0

    def test_state_sampling(self, std_packet, step_potential):
        cfg = EvolutionConfig(1e-3, 0.01, step_potential, record_stride=4)
        res = evolve(std_packet, cfg)
        assert res.state_times == (0.0, 4e-3, 8e-3)
        assert res.states[0].norm_squared() == pytest.approx(1.0, abs=1e-12)

    def test_rejects_unresolved_bandwidth(self, std_packet):
        with pytest.raises(ConfigError, match="bandwidth"):
            cfg = EvolutionConfig(0.1, 1.0, free_potential())
            evolve(std_packet, cfg)

    def test_rejects_excessive_step_absorption(self, std_packet):
        pot = AbsorbingPotential(50000.0, make_profile("constant"))
        with pytest.raises(ConfigError, match="exceeds"):
            evolve(std_packet, EvolutionConfig(1e-3, 1.0, pot))

    def test_boundary_leak_detected(self):
        grid = SpatialGrid(-20.0, 30.0, 1024)
        psi = make_gaussian(GaussianPacketSpec(8.0, 1.0, -5.0), grid)
        cfg = EvolutionConfig(1e-3, 5.5, free_potential())
        with pytest.raises(BoundaryLeakError):
            evolve(psi, cfg, want_absorbed=False)


class TestArrivalDensities:
    def test_constant_survival_gives_zero(self):
        s = TimeSeries(0.0, 0.1, np.ones(64))
        assert np.max(np.abs(arrival_density_from_norm(s).values)) < 1e-10

    def test_synthetic_exponential_derivative(self):
        # oracle: d/dt e^{-gamma t} known analytically
        gamma, dt = 0.3, 1e-3
        t = dt * np.arange(2001)
        s = TimeSeries(0.0, dt, np.exp(-gamma * t))
        pi = arrival_density_from_norm(s)
        expected = gamma * np.exp(-gamma * t)
        assert np.max(np.abs(pi.values - expected)) < 10 * dt**2

    def test_short_series_rejected(self):
        with pytest.raises(ValueError):
            arrival_density_from_norm(TimeSeries(0.0, 0.1, np.array([1.0, 0.9])))

    def test_integral_equals_norm_loss(self, std_packet, step_potential):
        cfg = EvolutionConfig(1e-3, 8.0, step_potential)
        res = evolve(std_packet, cfg, want_absorbed=False)
        pi = arrival_density_from_norm(res.survival)
        lost = res.survival.values[0] - res.survival.values[-1]
        assert pi.integral() == pytest.approx(lost, abs=1e-6)

    def test_potential_route_zero_for_free_evolution(self, std_packet):
        cfg = EvolutionConfig(1e-3, 1.0, free_potential())
        res = evolve(std_packet, cfg)
        assert np.all(res.arrival_density_from_potential().values == 0.0)

    def test_two_routes_agree_at_resolved_dt(self, std_packet, step_potential):
        cfg = EvolutionConfig(1e-4, 3.0, step_potential)
        res = evolve(std_packet, cfg)
        pi_n = arrival_density_from_norm(res.survival)
        pi_v = res.arrival_density_from_potential()
        disc = np.max(np.abs(pi_v.values - pi_n.values)) / np.max(pi_n.values)
        assert disc < 1e-3

    def test_states_route_matches_streamed_functional(self, std_packet, step_potential):
        cfg = EvolutionConfig(2e-4, 0.02, step_potential, record_stride=10)
        res = evolve(std_packet, cfg)
        from_states = arrival_density_from_potential(
            list(zip(res.state_times, res.states)), step_potential)
        streamed = res.arrival_density_from_potential()
        picked = streamed.values[::10][: len(from_states)]
        assert np.max(np.abs(from_states.values - picked)) < 1e-12

    def test_grid_mismatch_rejected(self, std_packet, step_potential):
        other = SpatialGrid(-50.0, 50.0, 2048)
        psi2 = make_gaussian(GaussianPacketSpec(10.0, 1.0, -5.0), other)
        with pytest.raises(ValueError, match="different grids"):
            arrival_density_from_potential(
                [(0.0, std_packet), (0.1, psi2)], step_potential)


class TestReflection:
    def test_free_run_reflects_nothing(self, std_packet):
        cfg = EvolutionConfig(1e-3, 2.0, free_potential())
        res = evolve(std_packet, cfg, want_absorbed=False)
        est = reflection_probability(res.survival)
        assert est.certified
        assert est.n_infinity == pytest.approx(1.0, abs=1e-10)

    def test_no_plateau_is_flagged(self):
        t = 1e-2 * np.arange(200)
        decaying = TimeSeries(0.0, 1e-2, np.exp(-0.5 * t))
        est = reflection_probability(decaying)
        assert not est.certified
        assert est.residual > 1e-8

    def test_plateaued_run_is_certified(self, std_packet, step_potential):
        cfg = EvolutionConfig(1e-3, 8.0, step_potential)
        res = evolve(std_packet, cfg, want_absorbed=False)
        est = reflection_probability(res.survival)
        assert est.certified
        assert 0.0 < est.n_infinity < 1.0
