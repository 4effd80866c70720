import math

from django.test import SimpleTestCase, override_settings
import numpy as np

from rotatable_ris.design import optimal_block_count, optimal_configuration,\
                                 optimal_rotation
from rotatable_ris.metrics import se_upper_bound_bc
from rotatable_ris.models import SWEEP_CSV_COLUMNS, LinkBudget, PowerParams,\
                                 SweepSpec
from rotatable_ris.power import power_bc_uniform, power_ec
from rotatable_ris.simkit import bound_tightness_study, channel_gains,\
                                 estimate_average_se, run_snr_sweep,\
                                 run_sweep
from rotatable_ris.utils import RisError

from . import make_geometry


CASE3 = PowerParams(rotate_circuit_power=0.430, unit_rotation_power=0.003)


class EstimateAverageSeTest(SimpleTestCase):

    def test_los_only(self):
        geometry = make_geometry(los_only=True)
        budget = LinkBudget(1.0)
        mean, err = estimate_average_se(geometry,
                                        optimal_configuration(geometry),
                                        budget, 100, 0)
        self.assertEqual(err, 0.0)
        self.assertAlmostEqual(mean, math.log2(1 + 32 * 64 ** 2), places=9)

    def test_requires_two_trials(self):
        geometry = make_geometry()
        with self.assertRaisesMessage(RisError, "n_trials must be >= 2"):
            estimate_average_se(geometry, optimal_configuration(geometry),
                                LinkBudget(1.0), 1, 0)

    def test_integer_like_trials(self):
        geometry = make_geometry(n_ris_elements=16, n_blocks=2, block_size=8)
        config = optimal_configuration(geometry)
        budget = LinkBudget(1.0)
        self.assertEqual(
            estimate_average_se(geometry, config, budget, np.int64(100), 3),
            estimate_average_se(geometry, config, budget, 100, 3))
        for bad in (100.0, True, "100"):
            with self.subTest(n_trials=bad):
                with self.assertRaisesMessage(RisError, "must be an integer"):
                    estimate_average_se(geometry, config, budget, bad, 3)

    def test_same_seed_same_result(self):
        geometry = make_geometry(n_ris_elements=16, n_blocks=2, block_size=8)
        config = optimal_configuration(geometry)
        budget = LinkBudget(1.0)
        first = estimate_average_se(geometry, config, budget, 500, 99)
        second = estimate_average_se(geometry, config, budget, 500, 99)
        other = estimate_average_se(geometry, config, budget, 500, 100)
        self.assertEqual(first, second)
        self.assertNotEqual(first, other)

    @override_settings(RIS_CHUNK_SIZE=64)
    def test_independent_of_workers(self):
        geometry = make_geometry(n_ris_elements=16, n_blocks=4, block_size=4)
        designs = [(geometry, optimal_configuration(geometry))]
        serial = channel_gains(designs, 300, 5, n_jobs=1)
        parallel = channel_gains(designs, 300, 5, n_jobs=2)
        np.testing.assert_array_equal(serial, parallel)
        with override_settings(RIS_CHUNK_SIZE=1024):
            np.testing.assert_array_equal(
                serial, channel_gains(designs, 300, 5, n_jobs=1))

    def test_jensen_dominance(self):
        geometry = make_geometry()
        result = run_snr_sweep(geometry, CASE3, [-10, 0, 10, 20], 10000,
                               2024)
        for i in range(4):
            self.assertLessEqual(result.mean_se[i], result.bound_se[i] +
                                 3 * result.se_std_error[i])
            self.assertLessEqual(result.mean_se_ec[i], result.bound_ec[i] +
                                 3 * result.se_std_error_ec[i])

    def test_standard_error_scaling(self):
        geometry = make_geometry(n_ris_elements=16, n_blocks=4, block_size=4,
                                 rician_bs_ris=1.0, rician_ris_ue=1.0)
        config = optimal_configuration(geometry)
        budget = LinkBudget(1.0)
        _, small = estimate_average_se(geometry, config, budget, 1000, 1)
        _, large = estimate_average_se(geometry, config, budget, 4000, 1)
        self.assertGreater(small / large, 2 / 1.5)
        self.assertLess(small / large, 2 * 1.5)


class SnrSweepTest(SimpleTestCase):

    def test_single_point_composition(self):
        geometry = make_geometry()
        result = run_snr_sweep(geometry, CASE3, [10.0], 200, 3)
        theta = optimal_rotation(geometry.aoa_ris, geometry.aod_ris)
        k = optimal_block_count(CASE3, 64, theta).chosen_k
        bc_geometry = geometry.with_blocks(k)
        budget = LinkBudget.from_snr_db(10.0)
        mean, err = estimate_average_se(bc_geometry,
                                        optimal_configuration(bc_geometry),
                                        budget, 200, 3)
        self.assertEqual(result.k_star, (k,))
        self.assertEqual(result.mean_se, (mean,))
        self.assertEqual(result.se_std_error, (err,))
        p_bc = power_bc_uniform(CASE3, bc_geometry, theta, 10.0)
        self.assertAlmostEqual(result.power_bc[0], p_bc, places=12)
        self.assertAlmostEqual(result.power_ec[0],
                               power_ec(CASE3, 64, 10.0), places=12)
        self.assertAlmostEqual(result.mean_ee_bc[0], mean / p_bc, places=12)
        self.assertEqual(result.n_trials, 200)
        self.assertEqual(result.seed, 3)

    def test_bounds_of_both_surfaces_agree(self):
        result = run_snr_sweep(make_geometry(), CASE3, [-10, 10, 30], 50, 0)
        for bc, ec, conventional in zip(result.bound_se, result.bound_ec,
                                        result.bound_conventional):
            self.assertAlmostEqual(bc, ec, places=10)
            self.assertLessEqual(conventional, bc + 1e-12)

    def test_energy_efficiency_limits(self):
        result = run_snr_sweep(make_geometry(), CASE3, [-10, 40], 2000, 7)
        self.assertGreater(result.mean_ee_bc[0], result.mean_ee_ec[0])
        self.assertLess(abs(result.mean_ee_bc[1] / result.mean_ee_ec[1] - 1),
                        0.05)

    def test_table(self):
        result = run_snr_sweep(make_geometry(), CASE3, [0, 5], 20, 0)
        frame = result.to_frame()
        self.assertEqual(list(frame.columns), SWEEP_CSV_COLUMNS)
        self.assertEqual(list(frame["axis"]), [0.0, 5.0])
        self.assertEqual(result.to_dict()["axis_values"], [0.0, 5.0])


class SweepTest(SimpleTestCase):

    def test_kappa_axis(self):
        geometry = make_geometry()
        spec = SweepSpec(axis="kappa", grid=(0.0, 10.0), n_trials=50,
                         seed=1, segmentation="fixed")
        result = run_sweep(geometry, CASE3, spec)
        self.assertEqual(result.k_star, (8, 8))
        point = geometry.with_kappa(10.0, 10.0)
        self.assertAlmostEqual(
            result.bound_se[1],
            se_upper_bound_bc(point, optimal_configuration(point),
                              LinkBudget.from_snr_db(10.0)), places=12)

    def test_element_axis(self):
        spec = SweepSpec(axis="n_elements", grid=(16.0, 32.0), n_trials=20,
                         seed=1, segmentation="fixed")
        result = run_sweep(make_geometry(), CASE3, spec)
        self.assertEqual(result.k_star, (8, 8))
        self.assertEqual(result.axis_values, (16.0, 32.0))
        self.assertGreater(result.bound_se[1], result.bound_se[0])

    def test_fixed_blocks_must_divide(self):
        spec = SweepSpec(axis="n_elements", grid=(12.0,), n_trials=20,
                         seed=1, segmentation="fixed")
        with self.assertRaisesMessage(RisError, "K must divide N_s"):
            run_sweep(make_geometry(), CASE3, spec)

    def test_invalid_specs(self):
        geometry = make_geometry()
        with self.assertRaisesMessage(RisError, "Unknown sweep axis"):
            run_sweep(geometry, CASE3, SweepSpec("power", (1.0,), 10, 0))
        with self.assertRaisesMessage(RisError, "Unknown segmentation"):
            run_sweep(geometry, CASE3, SweepSpec("snr", (1.0,), 10, 0,
                                                 segmentation="greedy"))
        with self.assertRaisesMessage(RisError, "The sweep grid is empty."):
            run_sweep(geometry, CASE3, SweepSpec("snr", (), 10, 0))

    def test_out_of_sector_rotation(self):
        geometry = make_geometry(aod_ris=0.2)
        with self.assertRaises(RisError) as cm:
            run_snr_sweep(geometry, CASE3, [0.0], 10, 0)
        self.assertEqual(cm.exception.error_code, "out-of-sector")


class TightnessTest(SimpleTestCase):

    def setUp(self):
        self.family = [
            make_geometry(n_ris_elements=16, n_blocks=2, block_size=8),
            make_geometry(n_ris_elements=64, n_blocks=8, block_size=8),
        ]

    def test_gap_narrows(self):
        table = bound_tightness_study(self.family, [1.0, 10.0], 10000, 11)
        self.assertEqual(list(table["n_elements"]), [16, 16, 64, 64])
        for n_s in (16, 64):
            rows = table[table["n_elements"] == n_s]
            low, high = rows.iloc[0], rows.iloc[1]
            tolerance = 3 * math.hypot(low["se_std_error"],
                                       high["se_std_error"])
            self.assertLessEqual(high["gap"], low["gap"] + tolerance)
        for kappa in (1.0, 10.0):
            rows = table[table["kappa"] == kappa]
            small, large = rows.iloc[0], rows.iloc[1]
            tolerance = 3 * math.hypot(small["se_std_error"] /
                                       small["bound_se"],
                                       large["se_std_error"] /
                                       large["bound_se"])
            self.assertLessEqual(large["relative_gap"],
                                 small["relative_gap"] + tolerance)

    def test_los_limit(self):
        table = bound_tightness_study(self.family[0], [10.0, math.inf], 100,
                                      0)
        self.assertLess(abs(table["gap"].iloc[1]), 1e-9)
        self.assertEqual(table["se_std_error"].iloc[1], 0.0)

    def test_seed_stability(self):
        first = bound_tightness_study(self.family[0], [1.0, 10.0], 2000, 1)
        second = bound_tightness_study(self.family[0], [1.0, 10.0], 2000, 2)
        for i in range(2):
            combined = math.hypot(first["se_std_error"].iloc[i],
                                  second["se_std_error"].iloc[i])
            self.assertLess(abs(first["gap"].iloc[i] -
                                second["gap"].iloc[i]), 4 * combined)

    def test_zero_power(self):
        table = bound_tightness_study(self.family[0], [1.0, 10.0], 10, 0,
                                      budget=LinkBudget(0.0))
        self.assertEqual(list(table["bound_se"]), [0.0, 0.0])
        self.assertEqual(list(table["gap"]), [0.0, 0.0])
        self.assertEqual(list(table["relative_gap"]), [0.0, 0.0])

    def test_grid_must_ascend(self):
        with self.assertRaisesMessage(RisError, "ascending"):
            bound_tightness_study(self.family[0], [10.0, 1.0], 100, 0)
