import math
import warnings

import numba
import numpy as np
import pytest

from porosurf.constants import C0, ETA0
from porosurf.errors import (
    DomainError,
    InstabilityError,
    ResolutionError,
    SteadyStateError,
)
from porosurf.fdtd import (
    Rect,
    SimulationConfig,
    SourceConfig,
    attenuation_conductivity,
    check_band_resolution,
    rasterize,
    run,
    sweep,
)
from porosurf.geometry import CavityLattice, Disk, Strip, build_model, model_params, single_disk_lattice

F0 = 26e9


def small_domain_config(**kw):
    defaults = dict(
        grid_step=0.4e-3,
        domain=Rect(-0.02, 0.02, -0.02, 0.02),
        background_index=1.23,
        cavity_index=1.23,
        source=SourceConfig(frequency=F0, waveform="cw",
                            transverse_profile="point", position=(0.0, 0.0)),
        npml=8,
    )
    defaults.update(kw)
    return SimulationConfig(**defaults)


class TestRasterize:
    def test_empty_lattice_uniform(self):
        cfg = small_domain_config(background_index=1.5, cavity_index=1.0)
        grid = rasterize(None, cfg)
        assert np.all(grid.index == 1.5)
        assert np.all(grid.mask == 1.0)

    def test_conductor_disk_cell_count(self):
        lat = single_disk_lattice(0.5e-3, half_extent=2e-3, conductor=True)
        cfg = SimulationConfig(grid_step=0.1e-3, domain=Rect(-3e-3, 3e-3, -3e-3, 3e-3),
                               background_index=1.23)
        grid = rasterize(lat, cfg)
        masked = int(np.sum(grid.mask == 0.0))
        expect = math.pi * 0.5e-3 ** 2 / 0.1e-3 ** 2  # 78.5
        assert masked == pytest.approx(expect, rel=0.05)

    def test_cavity_disk_sets_index(self):
        lat = single_disk_lattice(0.5e-3, half_extent=2e-3, conductor=False)
        cfg = SimulationConfig(grid_step=0.1e-3, domain=Rect(-3e-3, 3e-3, -3e-3, 3e-3),
                               background_index=1.23, cavity_index=1.0)
        grid = rasterize(lat, cfg)
        n_cavity = int(np.sum(grid.index == 1.0))
        assert n_cavity == pytest.approx(78.5, rel=0.05)
        assert np.all(grid.mask == 1.0)

    def test_model0_wall_strips(self):
        lat = build_model(model_params(0, d=0.02, overhang=0.002))
        cfg = SimulationConfig(grid_step=0.1e-3,
                               domain=Rect(-2e-3, 22e-3, -7e-3, 7e-3),
                               background_index=1.23)
        grid = rasterize(lat, cfg)
        mid = len(grid.x) // 2
        col = grid.mask[mid]
        conductor_y = grid.y[col == 0.0]
        inner_gap = conductor_y[conductor_y > 0].min() - conductor_y[conductor_y < 0].max()
        assert inner_gap == pytest.approx(9e-3 + 2 * 0.1e-3, abs=2.1e-4)

    def test_coarse_disk_rejected(self):
        lat = single_disk_lattice(0.5e-3, half_extent=2e-3)
        cfg = SimulationConfig(grid_step=0.25e-3, domain=Rect(-3e-3, 3e-3, -3e-3, 3e-3),
                               background_index=1.23)
        with pytest.raises(ResolutionError):
            rasterize(lat, cfg)

    def test_disk_outside_domain_rejected(self):
        lat = single_disk_lattice(0.5e-3, half_extent=10e-3)
        cfg = SimulationConfig(grid_step=0.1e-3, domain=Rect(-3e-3, 3e-3, -3e-3, 3e-3),
                               background_index=1.23)
        with pytest.raises(DomainError):
            rasterize(lat, cfg)


class TestRunBasics:
    def test_zero_amplitude_source_zero_fields(self):
        cfg = small_domain_config(
            source=SourceConfig(frequency=F0, waveform="cw", amplitude=0.0,
                                transverse_profile="point", position=(0.0, 0.0)),
            probes=((5e-3, 0.0),))
        rec = run(cfg)
        assert np.all(rec.amplitude_map == 0.0)
        assert np.all(rec.probe_series == 0.0)

    def test_time_step_respects_stability_and_period(self):
        cfg = small_domain_config()
        dt = cfg.time_step()
        limit = 0.95 * cfg.grid_step * 1.23 / (C0 * math.sqrt(2.0))
        assert dt <= limit * (1 + 1e-12)
        period = 1.0 / F0
        assert period / dt == pytest.approx(round(period / dt), abs=1e-9)

    def test_instability_error_path(self):
        cfg = small_domain_config(divergence_factor=1e-12, check_interval=50)
        with pytest.raises(InstabilityError):
            run(cfg)

    def test_steady_state_error_on_low_step_cap(self):
        cfg = small_domain_config(max_steps=300)
        with pytest.raises(SteadyStateError):
            run(cfg)

    def test_probe_outside_domain_rejected(self):
        cfg = small_domain_config(probes=((1.0, 0.0),))
        with pytest.raises(DomainError):
            run(cfg)

    def test_record_metadata_and_extent(self):
        cfg = small_domain_config(probes=((5e-3, 0.0),))
        rec = run(cfg)
        assert rec.metadata["nx"] == len(rec.x)
        assert rec.metadata["precision"] == "float32"
        assert rec.probe_series.shape[0] == 1
        assert rec.extent[0] == rec.x[0]

    def test_pulse_leakage_warning(self):
        cfg = small_domain_config(
            source=SourceConfig(frequency=F0, waveform="pulse", bandwidth=4e9,
                                transverse_profile="point", position=(0.0, 0.0)),
            max_steps=120, record_map=False)
        with pytest.warns(RuntimeWarning):
            run(cfg)


class TestDeterminism:
    def test_bit_identical_across_thread_counts(self):
        lat = build_model(model_params(4, d=0.02, overhang=0.004))
        cfg = SimulationConfig(
            grid_step=0.1e-3,
            domain=Rect(-4e-3, 24e-3, -8e-3, 8e-3),
            background_index=1.2885,
            source=SourceConfig(frequency=F0, waveform="cw",
                                position=(-2e-3, 0.0)),
            probes=((10e-3, 0.0), (20e-3, 1e-3)),
            npml=8,
        )
        before = numba.get_num_threads()
        try:
            numba.set_num_threads(1)
            rec1 = run(cfg, lat)
            numba.set_num_threads(2)
            rec2 = run(cfg, lat)
        finally:
            numba.set_num_threads(before)
        assert np.array_equal(rec1.probe_series, rec2.probe_series)
        assert np.array_equal(rec1.amplitude_map, rec2.amplitude_map)


class TestClosedBox:
    def box_config(self, **kw):
        defaults = dict(
            grid_step=0.5e-3,
            domain=Rect(0.0, 0.025, 0.0, 0.025),
            background_index=1.23,
            cavity_index=1.23,
            boundary="pec",
            source=SourceConfig(frequency=F0, waveform="pulse", bandwidth=6e9,
                                transverse_profile="point", position=(0.008, 0.009)),
            record_map=False,
            pulse_decay_tol=0.0,
        )
        defaults.update(kw)
        return SimulationConfig(**defaults)

    def test_energy_bounded_100k_steps(self):
        cfg = self.box_config(probes=((0.013, 0.011), (0.019, 0.006)),
                              max_steps=100_000)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            rec = run(cfg)
        s = np.abs(rec.probe_series)
        early = s[:, 2000:20000].max()
        late = s[:, -20000:].max()
        assert np.isfinite(late)
        assert late <= 1.05 * early

    def test_reciprocity(self):
        a, b = (0.006, 0.008), (0.019, 0.016)
        disk = Disk(0.012, 0.013, 1.5e-3)
        lat = CavityLattice(wall_strips=(), wall_disks=(disk,), cavity_disks=(),
                            bounding_box=Rect(0.0, 0.025, 0.0, 0.025),
                            channel=Rect(0.0, 0.025, 0.0, 0.025))

        def s21(src, probe):
            cfg = self.box_config(
                source=SourceConfig(frequency=F0, waveform="pulse", bandwidth=5e9,
                                    transverse_profile="point", position=src),
                probes=(probe,),
                spectrum_frequencies=(F0,),
                max_steps=4000,
            )
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", RuntimeWarning)
                rec = run(cfg, lat)
            return abs(rec.probe_spectra[0, 0])

        fwd = s21(a, b)
        rev = s21(b, a)
        assert 20 * abs(math.log10(fwd / rev)) < 0.1


class TestAttenuationKnob:
    def test_bulk_conversion(self):
        sigma = attenuation_conductivity(8.686, F0, 1.0)  # 1 neper/m
        assert sigma == pytest.approx(2.0 / ETA0, rel=1e-6)

    def test_channel_mode_conversion_below_bulk(self):
        bulk = attenuation_conductivity(1.1, F0, 1.23)
        guided = attenuation_conductivity(1.1, F0, 1.23, channel_width=9e-3)
        assert guided < bulk

    def test_below_cutoff_rejected(self):
        with pytest.raises(DomainError):
            attenuation_conductivity(1.1, 5e9, 1.0, channel_width=9e-3)

    def test_zero_is_free(self):
        assert attenuation_conductivity(0.0, F0, 1.23) == 0.0


class TestSweep:
    def test_usage_validation(self):
        cfg = small_domain_config(probes=((5e-3, 0.0), (10e-3, 0.0)))
        with pytest.raises(DomainError):
            sweep(cfg, None, (22e9, 33e9), 1)
        with pytest.raises(DomainError):
            sweep(cfg, None, (33e9, 22e9), 50)

    def test_resolution_precheck(self):
        cfg = small_domain_config(grid_step=1e-3,
                                  probes=((5e-3, 0.0), (10e-3, 0.0)))
        with pytest.raises(ResolutionError):
            check_band_resolution(cfg, 33e9)
        with pytest.raises(ResolutionError):
            sweep(cfg, None, (22e9, 33e9), 50)

    def test_self_normalisation_identity(self):
        cfg = SimulationConfig(
            grid_step=0.4e-3,
            domain=Rect(-0.01, 0.03, -0.012, 0.012),
            background_index=1.23, cavity_index=1.23,
            source=SourceConfig(frequency=F0, waveform="pulse",
                                transverse_profile="point", position=(0.0, 0.0)),
            probes=((5e-3, 0.0), (0.02, 0.0)),
            npml=8,
        )
        res = sweep(cfg, None, (24e9, 28e9), 21)
        assert np.max(np.abs(res.s21_db)) < 0.5  # exact identity in practice
        assert np.max(np.abs(res.s21_db)) < 1e-6


def test_source_validation():
    with pytest.raises(DomainError):
        SourceConfig(waveform="noise")
    with pytest.raises(DomainError):
        SourceConfig(transverse_profile="gaussian")
    with pytest.raises(DomainError):
        SimulationConfig(grid_step=0.4e-3, domain=Rect(0, 1e-2, 0, 1e-2),
                         background_index=0.5)
    with pytest.raises(DomainError):
        SimulationConfig(grid_step=0.4e-3, domain=Rect(0, 1e-2, 0, 1e-2),
                         background_index=1.2, courant=1.5)
