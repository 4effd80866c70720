from dataclasses import replace
import json
import os
import tempfile
import zipfile

from django.test import SimpleTestCase
import numpy as np

from rotatable_ris.experiments import FEASIBILITY_CSV_COLUMNS,\
                                      dump_channels, emit_feasibility_map,\
                                      feasibility_map,\
                                      run_experiment, sweep_csv,\
                                      write_archive, write_text
from rotatable_ris.models import SWEEP_CSV_COLUMNS, FeasibilityMapConfig,\
                                 PowerParams
from rotatable_ris.parsers import parse_config
from rotatable_ris.presets import get_preset
from rotatable_ris.simkit import channel_gains, point_design
from rotatable_ris.utils import RisError


def small_config(name="fig3-ee-case3", **sweep):
    _, config = get_preset(name)
    sweep.setdefault("grid", (-10.0, 10.0))
    sweep.setdefault("n_trials", 20)
    return replace(config, sweep=replace(config.sweep, **sweep))


class RunExperimentTest(SimpleTestCase):

    def test_csv(self):
        text = sweep_csv(run_experiment(small_config()))
        lines = text.split("\n")
        self.assertEqual(lines[0], ",".join(SWEEP_CSV_COLUMNS))
        self.assertEqual(len(lines), 4)
        self.assertEqual(lines[-1], "")
        self.assertNotIn("\r", text)
        self.assertTrue(lines[1].startswith("-10,"))
        self.assertEqual(lines[1].split(",")[7], "1")

    def test_reruns_are_identical(self):
        config = small_config(seed=12)
        self.assertEqual(sweep_csv(run_experiment(config)),
                         sweep_csv(run_experiment(config)))
        other = sweep_csv(run_experiment(small_config(seed=13)))
        self.assertNotEqual(sweep_csv(run_experiment(config)), other)

    def test_fixed_segmentation(self):
        config = small_config("fig2-tightness", grid=(0.0, 1.0))
        result = run_experiment(config)
        self.assertEqual(result.axis_name, "kappa")
        self.assertEqual(result.k_star, (8, 8))

    def test_out_of_sector_is_a_validation_error(self):
        config = parse_config(json.dumps(
            {"geometry": {"aod_ris": 0.2},
             "sweep": {"axis": "snr", "grid": [0.0], "n_trials": 5}}))
        with self.assertRaises(RisError) as cm:
            run_experiment(config)
        self.assertEqual(cm.exception.error_code, "validation-error")
        self.assertIn("pi/6", cm.exception.msg)

    def test_swept_elements_must_fit_blocks(self):
        config = parse_config(json.dumps(
            {"geometry": {"n_blocks": 8},
             "sweep": {"axis": "n_elements", "grid": [16, 20],
                       "segmentation": "fixed", "n_trials": 5}}))
        with self.assertRaises(RisError) as cm:
            run_experiment(config)
        self.assertEqual(cm.exception.error_code, "validation-error")


class ChannelDumpTest(SimpleTestCase):

    def setUp(self):
        self.config = small_config(seed=21)

    def test_shapes_and_design(self):
        document = json.loads(dump_channels(self.config, 2))
        geometry, ris_config, _ = point_design(
            self.config.geometry, self.config.power, self.config.sweep,
            self.config.sweep.grid[0])
        n_s = geometry.n_ris_elements
        n_b = geometry.n_bs_antennas
        self.assertEqual(document["axis_value"], -10.0)
        self.assertEqual(document["seed"], 21)
        self.assertEqual(document["n_blocks"], geometry.n_blocks)
        self.assertEqual(document["rotation_angles"],
                         list(ris_config.rotation_angles))
        self.assertEqual([d["trial"] for d in document["draws"]], [0, 1])
        for draw in document["draws"]:
            self.assertEqual(draw["bs_ris_matrix"]["shape"], [n_s, n_b])
            self.assertEqual(draw["ris_ue_vector"]["shape"], [n_s])
            self.assertEqual(draw["effective_channel"]["shape"], [n_b])
            self.assertEqual(len(draw["bs_ris_matrix"]["imag"]), n_s)
            self.assertEqual(len(draw["bs_ris_matrix"]["real"][0]), n_b)

    def test_draws_are_the_simulated_trials(self):
        document = json.loads(dump_channels(self.config, 3))
        geometry, ris_config, _ = point_design(
            self.config.geometry, self.config.power, self.config.sweep,
            self.config.sweep.grid[0])
        gains = channel_gains([(geometry, ris_config)], 3, 21, n_jobs=1)[0]
        for draw, gain in zip(document["draws"], gains):
            h = np.asarray(draw["effective_channel"]["real"]) +\
                1j * np.asarray(draw["effective_channel"]["imag"])
            self.assertAlmostEqual(float(np.sum(np.abs(h) ** 2)) / gain, 1.0,
                                   places=9)

    def test_canonical_and_deterministic(self):
        text = dump_channels(self.config)
        self.assertTrue(text.endswith("}\n"))
        self.assertEqual(text, dump_channels(self.config))
        self.assertNotEqual(text, dump_channels(small_config(seed=22)))
        self.assertEqual(len(json.loads(text)["draws"]), 1)

    def test_invalid(self):
        with self.assertRaisesMessage(RisError, "n_draws must be >= 1"):
            dump_channels(self.config, 0)
        config = parse_config(json.dumps(
            {"geometry": {"aod_ris": 0.2},
             "sweep": {"axis": "snr", "grid": [0.0], "n_trials": 5}}))
        with self.assertRaises(RisError) as cm:
            dump_channels(config)
        self.assertEqual(cm.exception.error_code, "validation-error")


class OutputTest(SimpleTestCase):

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)

    def test_write_text(self):
        path = os.path.join(self.tmp.name, "out.csv")
        write_text("a,b\n1,2\n", path)
        with open(path, "rb") as f:
            self.assertEqual(f.read(), b"a,b\n1,2\n")

    def test_write_text_io_error(self):
        path = os.path.join(self.tmp.name, "missing", "out.csv")
        with self.assertRaises(RisError) as cm:
            write_text("a\n", path)
        self.assertEqual(cm.exception.error_code, "io-error")

    def test_archive_contents(self):
        config = small_config(grid=(0.0,), n_trials=10)
        result = run_experiment(config)
        path = os.path.join(self.tmp.name, "run.zdc")
        with self.assertLogs("rotatable_ris.experiments", "INFO"):
            write_archive(config, result, path)
        with zipfile.ZipFile(path) as zfile:
            names = zfile.namelist()
            self.assertIn("content.json", names)
            self.assertIn("meta.json", names)
            stored = json.loads(zfile.read("data/result.json"))
            content = json.loads(zfile.read("content.json"))
        self.assertEqual(stored, result.to_dict())
        self.assertEqual(content["containerType"]["name"],
                         "RotatableRisSweep")


class FeasibilityMapTest(SimpleTestCase):

    def setUp(self):
        self.config = FeasibilityMapConfig(
            power=PowerParams(), n_elements=32,
            p2_grid=(0.0, 1.0, 3.7, 3.8, 5.0), p_unit_grid=(0.0, 0.5))

    def test_columns_and_order(self):
        frame = feasibility_map(self.config, grid_points=100)
        self.assertEqual(list(frame.columns), FEASIBILITY_CSV_COLUMNS)
        self.assertEqual(len(frame), 10)
        self.assertEqual(list(frame["p2"][:5]), list(self.config.p2_grid))
        self.assertEqual(set(frame["p_unit"][:5]), {0.0})

    def test_without_rotation_cost(self):
        # K=1 is optimal, so the margin is (N_s - 1) P1 - P2
        frame = feasibility_map(self.config, grid_points=100)
        column = frame[frame["p_unit"] == 0.0]
        self.assertEqual(list(column["feasible"]),
                         [True, True, True, False, False])
        self.assertEqual(set(column["regime"]), {"single-block"})
        for p2, margin in zip(column["p2"], column["margin_watts"]):
            self.assertAlmostEqual(margin, 31 * 0.12 - p2, places=9)
        self.assertFalse(column["discrepancy"].any())

    def test_csv(self):
        text = emit_feasibility_map(self.config, grid_points=100)
        lines = text.split("\n")
        self.assertEqual(lines[0], ",".join(FEASIBILITY_CSV_COLUMNS))
        self.assertEqual(len(lines), 12)
        self.assertTrue(lines[1].startswith("0,0,single-block,True,"))
